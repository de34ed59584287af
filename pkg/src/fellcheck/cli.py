"""Command line: ``fellcheck <subcommand> ...``.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bundle as bmod
from . import ideals as imod
from .approximation import ck_convergence_experiment, parse_m_range, CSV_COLUMNS
from .ck import checks
from .ck.algebra import PRESETS, AdjacencyMatrix, CKAlgebra
from .ck.expr import format_element, parse_expression
from .errors import ConfigError
from .groups import format_word, parse_word

__all__ = ["RunConfig", "main", "run_suite", "load_matrix", "load_bundle_source"]

CAPS = {"depth": 6, "k_max": 4, "m": 12, "order": 12, "dim": 8}
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    matrix: str = "allones2"
    source: str | None = None
    depth: int = 3
    k_max: int = 4
    m_range: str = "4..10"
    t: str = "g1 g2'"
    expr: str | None = None
    seed: int = 0
    samples: int = 200
    out: str | None = None
    fmt: str = "json"
    jobs: int = 1
    oracle: bool = False

    def validate(self) -> RunConfig:
        if not 0 <= self.depth <= CAPS["depth"]:
            raise ConfigError(f"--depth must be in 0..{CAPS['depth']}")
        if not 0 <= self.k_max <= CAPS["k_max"]:
            raise ConfigError(f"--k-max must be in 0..{CAPS['k_max']}")
        if self.command == "approx-run":
            m = parse_m_range(self.m_range)
            if m.stop - 1 > CAPS["m"]:
                raise ConfigError(f"m is capped at {CAPS['m']}")
            if len(self.t.split()) > CAPS["depth"]:
                raise ConfigError(f"--t longer than {CAPS['depth']} letters")
        if self.fmt not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")
        if self.jobs < 1:
            raise ConfigError("--jobs must be positive")
        return self


def load_matrix(source: str) -> AdjacencyMatrix:
    if source in PRESETS:
        return PRESETS[source]
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"no preset or file named {source!r}")
    return AdjacencyMatrix.from_json(path.read_text())


def load_bundle_source(source: str) -> bmod.FiniteFellBundle:
    """A bundle JSON file, or the name of a shipped standard bundle."""
    path = Path(source)
    if path.exists():
        b = bmod.load_bundle(path)
    else:
        standard = bmod.standard_bundles()
        if source not in standard:
            raise FileNotFoundError(f"no bundle file or standard bundle named {source!r}")
        b = standard[source]
    if b.order > CAPS["order"]:
        raise ConfigError(f"group order {b.order} exceeds cap {CAPS['order']}")
    if b.dim > CAPS["dim"]:
        raise ConfigError(f"fibre dimension {b.dim} exceeds cap {CAPS['dim']}")
    return b


# ck-check work items: (function name, args); run in workers when --jobs > 1
def _ck_items(cfg: RunConfig) -> list[tuple[str, tuple]]:
    d = cfg.depth
    return [
        ("pr3_sweep", (min(2 * d, CAPS["depth"]),)),
        ("verify_claims", (d,)),
        ("soma_sweep", (cfg.k_max,)),
        ("main_lemma_sweep", (d, min(d, cfg.k_max))),
        ("verify_relation_generators", (min(d + 2, CAPS["depth"]),)),
        ("semisat_sweep", (min(d + 2, CAPS["depth"]),)),
        ("bsigma_sweep", (d,)),
    ]


def _run_item(payload):
    entries, name, args, oracle = payload
    A = AdjacencyMatrix(tuple(tuple(r) for r in entries))
    return getattr(checks, name)(A, *args, oracle=oracle).to_dict()


def _ck_check(cfg: RunConfig) -> tuple[int, dict]:
    A = load_matrix(cfg.matrix)
    payloads = [(A.entries, name, args, cfg.oracle) for name, args in _ck_items(cfg)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run_item, payloads))
    else:
        results = [_run_item(p) for p in payloads]
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{status} {r['label']} ({r['checked']} identities, {r['elapsed_s']}s)")
    ok = all(r["passed"] for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), {"command": "ck-check", "matrix": A.to_json(), "checks": results, "passed": ok}


def _ck_fourier(cfg: RunConfig) -> tuple[int, dict]:
    if not cfg.expr:
        raise ConfigError("ck-fourier needs --expr")
    alg = CKAlgebra.of(load_matrix(cfg.matrix))
    x = parse_expression(cfg.expr, alg)
    comps = sorted(x.components().items(), key=lambda kv: kv[0])
    report = {
        "command": "ck-fourier",
        "expression": cfg.expr,
        "normal_form": format_element(x),
        "components": [{"degree": format_word(t) or "e", "element": format_element(c)} for t, c in comps],
    }
    print(report["normal_form"])
    for c in report["components"]:
        print(f"  [{c['degree']}] {c['element']}")
    return EXIT_OK, report


def _approx_run(cfg: RunConfig) -> tuple[int, dict]:
    A = load_matrix(cfg.matrix)
    t = parse_word(cfg.t, A.n)
    result = ck_convergence_experiment(t, parse_m_range(cfg.m_range), A)
    rows = [r.csv_row() for r in result.rows]
    report = {
        "command": "approx-run",
        "t": cfg.t,
        "alpha": format_word(result.alpha) or "e",
        "beta": format_word(result.beta) or "e",
        "rows": rows,
        "net_bounds": {r.m: str(r.net_bound) for r in result.rows},
        "notes": result.notes + ["tail_norm_estimate is the norm in the infinite-path representation"],
        "monotone": result.monotone,
        "passed": result.passed,
    }
    if cfg.fmt == "csv" and cfg.out is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    else:
        for r in rows:
            print(f"m={r['m']} main={r['main_coeff_num']}/{r['main_coeff_den']} tail={r['tail_norm_estimate']} pass={r['pass']}")
    return (EXIT_OK if result.passed else EXIT_FAIL), report


def _bundle_verify(cfg: RunConfig) -> tuple[int, dict]:
    b = load_bundle_source(cfg.source)
    validation = bmod.validate(b)
    checks_ = []
    if validation.passed:
        checks_ = [
            bmod.faithfulness_check(b, cfg.samples, cfg.seed),
            bmod.norm_preservation_check(b, cfg.samples, cfg.seed),
            bmod.right_regular_commutant_check(b, max(1, cfg.samples // 10), cfg.seed),
            bmod.cstar_inequality_check(cfg.samples, seed=cfg.seed),
        ]
    ok = validation.passed and all(c.passed for c in checks_)
    print(f"{'PASS' if validation.passed else 'FAIL'} bundle axioms for {b.name} (max residual {validation.max_residual:.2e})")
    for c in checks_:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name} (worst {c.worst:.3e})")
    report = {
        "command": "bundle-verify",
        "bundle": b.name,
        "validation": validation.to_dict(),
        "checks": [c.to_dict() for c in checks_],
        "norm_table": bmod.norm_table(b, samples=min(cfg.samples, 20), seed=cfg.seed),
        "passed": ok,
    }
    return (EXIT_OK if ok else EXIT_FAIL), report


def _ideal_generators(b: bmod.FiniteFellBundle) -> list[tuple[str, list[np.ndarray]]]:
    """Degree-e generator sets: each diagonal matrix unit of B_e that lies in B_e, plus 0 and 1."""
    d = b.dim
    Fe = b.fibers[b.group.identity]
    out = [("zero", []), ("identity", [np.eye(d)])]
    for i in range(d):
        E = np.zeros((d, d))
        E[i, i] = 1.0
        if Fe.contains(E):
            out.append((f"E{i}{i}", [E]))
    return out


def _ideal_analyze(cfg: RunConfig) -> tuple[int, dict]:
    b = load_bundle_source(cfg.source)
    bmod.validate(b)
    alg = imod.algebra_data(b)
    entries = []
    for label, gens in _ideal_generators(b):
        J = imod.induced_ideal(b, gens, alg, label=label)
        rep = imod.verify_induced_theorems(b, J, alg, seed=cfg.seed)
        quo = imod.quotient_grading(b, J, alg, seed=cfg.seed)
        entries.append({"generators": label, "induced": True, **rep.to_dict(), "quotient": quo.to_dict(),
                        "passed": rep.passed and quo.passed})
    for k, p in enumerate(imod.minimal_central_projections(alg, seed=cfg.seed)):
        J = imod.ideal_closure([p], alg, label=f"central{k}")
        rep = imod.verify_induced_theorems(b, J, alg, seed=cfg.seed)
        entries.append({"generators": f"minimal central projection {k}", "induced": False, **rep.to_dict()})
    ok = all(e["passed"] for e in entries)
    for e in entries:
        print(f"{'PASS' if e['passed'] else 'FAIL'} {e['generators']}: dims {e['dims']}")
    return (EXIT_OK if ok else EXIT_FAIL), {"command": "ideal-analyze", "bundle": b.name, "ideals": entries, "passed": ok}


HANDLERS = {
    "ck-check": _ck_check,
    "ck-fourier": _ck_fourier,
    "approx-run": _approx_run,
    "bundle-verify": _bundle_verify,
    "ideal-analyze": _ideal_analyze,
}


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return str(obj)


def _write_report(cfg: RunConfig, report: dict) -> None:
    if cfg.out is None:
        return
    path = Path(cfg.out)
    if cfg.fmt == "json":
        path.write_text(json.dumps(report, indent=2, default=_json_default))
        return
    rows = report.get("rows") or report.get("checks") or report.get("ideals") or []
    flat = [{k: (json.dumps(v, default=_json_default) if isinstance(v, (dict, list)) else v) for k, v in r.items()} for r in rows]
    with open(path, "w", newline="") as fh:
        if flat:
            writer = csv.DictWriter(fh, fieldnames=list(flat[0]))
            writer.writeheader()
            writer.writerows(flat)


def run_suite(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        code, report = HANDLERS[cfg.command](cfg)
        _write_report(cfg, report)
        return code
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fellcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, matrix=True):
        if matrix:
            p.add_argument("--A", dest="matrix", default="allones2", help="preset name or JSON file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        p.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")

    p = sub.add_parser("ck-check", help="symbolic identity sweeps")
    common(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--k-max", dest="k_max", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--oracle", action="store_true", help="also evaluate every identity in the path-space oracle")

    p = sub.add_parser("ck-fourier", help="normal form and degree components of an expression")
    common(p)
    p.add_argument("--expr", required=True)

    p = sub.add_parser("approx-run", help="convergence table for the CK net")
    common(p)
    p.add_argument("--t", default="g1 g2'")
    p.add_argument("--m", dest="m_range", default="4..10")

    for name, help_ in (("bundle-verify", "numeric checks on a finite-group bundle"),
                        ("ideal-analyze", "induced ideal report")):
        p = sub.add_parser(name, help=help_)
        common(p, matrix=False)
        p.add_argument("source", help="bundle JSON file or standard bundle name")
        p.add_argument("--samples", type=int, default=200)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if v is not None or k in ("out",)})
    return run_suite(cfg)


if __name__ == "__main__":
    sys.exit(main())
