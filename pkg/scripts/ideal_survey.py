"""Induced ideals generated by diagonal matrix units of B_e, with J, J1, J2 dimensions and quotient fibres."""

import argparse
import json
from pathlib import Path

import numpy as np

from fellcheck import bundle as bm
from fellcheck import ideals as im


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="results/ideal_survey.json")
    args = p.parse_args()

    rows = []
    for name, b in sorted(bm.standard_bundles().items()):
        alg = im.algebra_data(b)
        for i in range(b.dim):
            E = np.zeros((b.dim, b.dim))
            E[i, i] = 1.0
            if not b.fibers[b.group.identity].contains(E):
                continue
            J = im.induced_ideal(b, [E], alg, label=f"<E{i}{i}>")
            rep = im.verify_induced_theorems(b, J, alg)
            quo = im.quotient_grading(b, J, alg, samples=5)
            print(f"{name:20s} {J.label:7s} dims={rep.dims} quotient={list(quo.quotient_dims.values())} "
                  f"{'ok' if rep.passed and quo.passed else 'FAIL'}")
            rows.append({"bundle": name, "generator": J.label, **rep.to_dict(), "quotient": quo.to_dict()})
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(json.dumps(rows, indent=2, default=str))


if __name__ == "__main__":
    main()
