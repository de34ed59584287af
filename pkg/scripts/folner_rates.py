"""Distance ||Phi_N(x) - x|| along the windowed net on a cyclic group, against the Fejer rate."""

import argparse

import numpy as np

from fellcheck import bundle as bm
from fellcheck.approximation import folner_net, phi_apply, signed_degree
from fellcheck.groups import make_finite_group


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--order", type=int, default=24)
    p.add_argument("--spread", type=int, default=2, help="x is supported on degrees -spread..spread")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    G = make_finite_group("cyclic", args.order)
    b = bm.semidirect_bundle(G, [np.eye(2)] * args.order, bm._matrix_units(2, None))
    rng = np.random.default_rng(args.seed)
    support = [t % args.order for t in range(-args.spread, args.spread + 1)]
    x = bm.random_element(b, rng, support=support)
    nx = bm.regular_embed(x).norm()
    N = 0
    while 4 * N + 4 <= args.order:
        err = bm.regular_embed(phi_apply(folner_net(N, G, 2), x) - x).norm()
        rate = max(abs(signed_degree(t, args.order)) for t in support) / (2 * N + 1)
        print(f"N={N:2d}  ||Phi_N(x)-x|| / ||x|| = {err / nx:.4f}   max|t|/(2N+1) = {rate:.4f}")
        N += 1


if __name__ == "__main__":
    main()
