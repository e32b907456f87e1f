"""Seeded corpora of trial functions shared by sweeps, probes, and tests."""

from __future__ import annotations

import numpy as np

from .curves import JordanCurve

__all__ = [
    "random_trig_polynomial",
    "random_analytic_polynomial",
    "indicator_arc",
    "rational_function",
    "rational_corpus",
]


def random_trig_polynomial(curve: JordanCurve, rng: np.random.Generator,
                           degree: int = 8) -> np.ndarray:
    """Random complex trigonometric polynomial in the node angles."""
    theta = np.angle(curve.nodes)
    k = np.arange(-degree, degree + 1)
    coeff = rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)
    return np.exp(1j * np.outer(theta, k)) @ coeff


def random_analytic_polynomial(curve: JordanCurve, rng: np.random.Generator,
                               degree: int = 8) -> np.ndarray:
    """Random polynomial in tau (nonnegative modes only); lies on the analytic side."""
    coeff = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    return np.polynomial.polynomial.polyval(curve.nodes, coeff)


def indicator_arc(curve: JordanCurve, center_index: int, width_nodes: int) -> np.ndarray:
    """Indicator of a contiguous node arc (width counted in nodes)."""
    sel = np.zeros(curve.n_nodes, dtype=complex)
    half = max(0, width_nodes // 2)
    idx = (center_index + np.arange(-half, width_nodes - half)) % curve.n_nodes
    sel[idx] = 1.0
    return sel


def rational_function(curve: JordanCurve, poles, residues, poly_coeffs=()) -> np.ndarray:
    """Sum of simple poles plus a polynomial part, sampled on the nodes."""
    tau = curve.nodes
    out = np.zeros_like(tau)
    for z0, c in zip(poles, residues):
        out = out + c / (tau - z0)
    if len(poly_coeffs):
        out = out + np.polynomial.polynomial.polyval(tau, np.asarray(poly_coeffs, complex))
    return out


def rational_corpus(curve: JordanCurve, rng: np.random.Generator, count: int = 10,
                    min_distance: float = 0.75) -> list[tuple[str, np.ndarray]]:
    """Rational functions with poles off the curve, at a safe distance.

    Interior pole candidates sit well inside (scaled toward the origin),
    exterior ones well outside; every pole keeps at least ``min_distance``
    from the nodes so one-sided Taylor expansions of the Cauchy integrals
    stay tame.
    """
    tau = curve.nodes
    r_in = 0.25 * float(np.abs(tau).min())
    r_out = 2.0 * float(np.abs(tau).max())

    def place(radius: float, angle: float, inward: bool) -> complex:
        # retreat toward the safe side until the distance constraint holds
        for _ in range(8):
            z0 = radius * np.exp(1j * angle)
            if float(np.abs(tau - z0).min()) >= min_distance:
                return z0
            radius = radius * 0.5 if inward else radius * 2.0
        raise ValueError(f"no admissible pole at angle {angle:.3f}")

    corpus: list[tuple[str, np.ndarray]] = []
    k = 0
    while len(corpus) < count:
        angle = 2.0 * np.pi * rng.random()
        kind = k % 3
        if kind == 0:
            z0 = place(r_out, angle, inward=False)
            vals = rational_function(curve, [z0], [1.0 + 0.5j])
            name = f"pole-out:{z0:.3g}"
        elif kind == 1:
            z0 = place(r_in, angle, inward=True)
            vals = rational_function(curve, [z0], [0.7 - 0.2j])
            name = f"pole-in:{z0:.3g}"
        else:
            z_in = place(r_in, angle, inward=True)
            z_out = place(r_out, -angle, inward=False)
            vals = rational_function(
                curve, [z_in, z_out], [0.5, -1.0j], poly_coeffs=(0.3, 0.1)
            )
            name = f"pole-pair:{z_in:.3g},{z_out:.3g}"
        corpus.append((name, vals))
        k += 1
    return corpus
