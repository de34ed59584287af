"""Norm tables and the numeric checks for every shipped finite-group bundle."""

import argparse
from pathlib import Path

from fellcheck import bundle as bm


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", default="results")
    args = p.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, b in sorted(bm.standard_bundles().items()):
        results = [
            bm.faithfulness_check(b, args.samples, args.seed),
            bm.norm_preservation_check(b, args.samples, args.seed),
            bm.right_regular_commutant_check(b, args.samples // 10, args.seed),
        ]
        flags = " ".join(f"{r.name}={'ok' if r.passed else 'FAIL'}({r.worst:.1e})" for r in results)
        print(f"{name:20s} dims={list(b.fiber_dims().values())} {flags}")
        bm.write_norm_csv(bm.norm_table(b, samples=20, seed=args.seed), outdir / f"norms_{name}.csv")


if __name__ == "__main__":
    main()
