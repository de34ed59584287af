"""Run every symbolic sweep on the preset matrices, optionally with the path-space oracle."""

import argparse
import json
from pathlib import Path

from fellcheck.ck.algebra import PRESETS
from fellcheck.ck.checks import run_ck_suite


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--presets", nargs="+", default=["allones2", "fib2", "allones3"])
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--out", default="results/ck_sweeps.json")
    args = p.parse_args()

    out = {}
    for name in args.presets:
        reports = run_ck_suite(PRESETS[name], depth=args.depth, oracle=args.oracle)
        for r in reports:
            print(f"{name:9s} {r.summary()} [{r.elapsed:.1f}s]")
        out[name] = [r.to_dict() for r in reports]
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
