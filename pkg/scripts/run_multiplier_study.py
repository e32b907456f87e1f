#!/usr/bin/env python3
"""Compare multiplier norms: theorem value vs optimization vs witness trial."""

import argparse

import numpy as np

from siolab.corpus import random_trig_polynomial
from siolab.curves import make_unit_circle
from siolab.exponents import exponent_constant
from siolab.spaces import (
    multiplier_norm_lower,
    multiplier_norm_via_theorem,
    multiplier_witness,
    norm_value,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--symbols", type=int, default=8, help="random symbols per triple")
    args = ap.parse_args()

    curve = make_unit_circle(args.n)
    rng = np.random.default_rng(args.seed)
    theta = np.angle(curve.nodes)
    named = {
        "one": np.ones(args.n, complex),
        "cos": np.cos(theta).astype(complex),
        "one+cos^2": (1.0 + np.cos(theta) ** 2).astype(complex),
    }
    for i in range(args.symbols - len(named)):
        named[f"trig-{i}"] = random_trig_polynomial(curve, rng, degree=6)

    print(f"{'triple':>12} {'symbol':>12} {'theorem':>10} {'lower':>10} {'witness':>10} {'gap':>8}")
    for p_val, q_val in [(4.0, 2.0), (3.0, 2.0), (2.0, 2.0)]:
        p = exponent_constant(p_val, args.n)
        q = exponent_constant(q_val, args.n)
        for name, a in named.items():
            theorem = multiplier_norm_via_theorem(curve, a, p, q)
            lower = multiplier_norm_lower(curve, a, p, q, trials=24, rng=rng)
            witness_val = float("nan")
            if p_val > q_val:
                w = multiplier_witness(curve, a, p, q, theorem, 1e-3 * theorem)
                wn = norm_value(curve, w.values, p)
                if wn > 0:
                    witness_val = norm_value(curve, a * w.values / wn, q)
            gap = abs(lower - theorem) / theorem
            print(f"{f'({p_val:g},{q_val:g})':>12} {name:>12} {theorem:10.5f} "
                  f"{lower:10.5f} {witness_val:10.5f} {gap:8.2%}")


if __name__ == "__main__":
    main()
