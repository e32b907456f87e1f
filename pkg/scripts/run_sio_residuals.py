#!/usr/bin/env python3
"""Residual report of the singular-integral machinery across the curve zoo."""

import argparse

import numpy as np

from siolab.cauchy import adjoint_residuals, apply_P, plemelj_residual
from siolab.corpus import rational_corpus
from siolab.curves import curve_from_name

ZOO = ["circle", "ellipse:2,1", "perturbed-circle:0.1,5"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096)
    ap.add_argument("--basis", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    offsets = [0.08, 0.04, 0.02, 0.01]
    print(f"{'curve':>22} {'P idemp':>10} {'S adj':>10} {'P adj':>10} "
          f"{'plem +':>10} {'plem -':>10}")
    for name in ZOO:
        curve = curve_from_name(name, args.n)
        rng = np.random.default_rng(args.seed)
        k = np.arange(-8, 9)
        f = (curve.nodes[:, None] ** k[None, :]) @ (
            rng.standard_normal(17) + 1j * rng.standard_normal(17)
        )
        f /= np.abs(f).max()
        pf = apply_P(curve, f)
        idem = np.abs(apply_P(curve, pf) - pf).max()
        adj = adjoint_residuals(curve, args.basis)
        wp = wm = 0.0
        for _, g in rational_corpus(curve, rng, count=3):
            r = plemelj_residual(curve, g, offsets, targets=128)
            wp = max(wp, r.residual_plus)
            wm = max(wm, r.residual_minus)
        print(f"{name:>22} {idem:10.2e} {adj.s_residual:10.2e} "
              f"{adj.p_residual:10.2e} {wp:10.2e} {wm:10.2e}")


if __name__ == "__main__":
    main()
