"""Exact main coefficients and tail norm estimates of Phi_m(S(t)) for several words t."""

import argparse
from pathlib import Path

from fellcheck.approximation import ck_convergence_experiment, write_convergence_csv
from fellcheck.ck.algebra import PRESETS
from fellcheck.groups import format_word, parse_word


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--A", default="allones2", choices=sorted(PRESETS))
    p.add_argument("--words", nargs="+", default=["g1 g2'", "g1", "g1 g2", "g2'", "g1 g1 g2'"])
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--outdir", default="results")
    args = p.parse_args()

    A = PRESETS[args.A]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for text in args.words:
        t = parse_word(text, A.n)
        res = ck_convergence_experiment(t, range(max(len(t), 1), args.m_max + 1), A)
        print(f"t = {format_word(t) or 'e'}  (alpha={format_word(res.alpha) or 'e'}, beta={format_word(res.beta) or 'e'})")
        for r in res.rows:
            print(f"  m={r.m:2d}  main={str(r.main_coeff):>6s}  closed form={str(r.formula_coeff):>6s}  "
                  f"tail={r.tail_norm_estimate:.4f} <= {float(r.tail_bound):.4f}+0.05  {'ok' if r.passed else 'FAIL'}")
        slug = (format_word(t) or "e").replace(" ", "_").replace("'", "i")
        write_convergence_csv(res, outdir / f"convergence_{args.A}_{slug}.csv")


if __name__ == "__main__":
    main()
