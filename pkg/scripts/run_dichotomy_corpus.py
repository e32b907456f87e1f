#!/usr/bin/env python3
"""Sweep the dichotomy probe over a symbol corpus and tabulate verdicts."""

import argparse
import json
from pathlib import Path

from siolab.curves import make_unit_circle
from siolab.exponents import exponent_constant
from siolab.toeplitz import dichotomy_probe, symbol_from_preset

CORPUS = [f"monomial:{k}" for k in range(-3, 4)] + ["cos", "one-plus-cos2", "singular:-0.25"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1024, help="curve nodes")
    ap.add_argument("--p", type=float, default=4.0)
    ap.add_argument("--q", type=float, default=2.0)
    ap.add_argument("--sizes", type=str, default="16,32,64,128,256")
    ap.add_argument("--aspect", type=int, default=8)
    ap.add_argument("--out", type=str, default="out/dichotomy_corpus.json")
    args = ap.parse_args()

    sizes = tuple(int(x) for x in args.sizes.split(","))
    curve = make_unit_circle(args.n)
    p = exponent_constant(args.p, args.n)
    q = exponent_constant(args.q, args.n)

    records = []
    print(f"{'symbol':>16} {'verdict':>20} {'min sig T':>10} {'min sig C':>10} fault")
    for spec in CORPUS:
        a = symbol_from_preset(spec, curve, degree=max(sizes) + args.aspect + 8)
        v = dichotomy_probe(a, p, q, sizes, aspect=args.aspect)
        records.append({**v.as_record(), "fault": v.fault})
        print(f"{spec:>16} {v.verdict:>20} {min(v.sigma_min_T):10.3g} "
              f"{min(v.sigma_min_companion):10.3g} {v.fault}")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(records, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")
    faults = [r["symbol"] for r in records if r["fault"]]
    if faults:
        raise SystemExit(f"dichotomy fault for symbols {faults}")


if __name__ == "__main__":
    main()
