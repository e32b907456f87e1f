"""Variable exponents p: curve -> [1, inf].

Infinity is an exact exponent value (np.inf), never a large float stand-in:
the set where p = inf enters norms through a sup term and drives the
partition used by the multiplier identities, so it must be representable
exactly. Discrete node values stand in for almost-everywhere statements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .curves import JordanCurve

__all__ = [
    "ExponentFunction",
    "LogHolderReport",
    "exponent_constant",
    "exponent_from_values",
    "exponent_from_preset",
    "essential_bounds",
    "conjugate_exponent_r",
    "dominance_check",
    "log_holder_constant",
    "partition_infinity_sets",
    "reciprocal",
]


@dataclass(frozen=True)
class ExponentFunction:
    """Exponent values on curve nodes; np.inf marks the infinity set."""

    values: np.ndarray
    closed_form_tag: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 1:
            raise ValueError("exponent values must be a 1-d array")
        if np.any(np.isnan(v)) or np.any(v < 1.0):
            raise ValueError("exponent values must lie in [1, inf]")

    @property
    def n_nodes(self) -> int:
        return self.values.size

    @property
    def infinity_mask(self) -> np.ndarray:
        return np.isinf(self.values)

    @property
    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))


@dataclass(frozen=True)
class LogHolderReport:
    """Sampled log-Hoelder diagnostics for an exponent on a curve.

    ``constant_estimate`` is the max of |p(t) - p(tau)| (-log|t - tau|) over
    node pairs with 0 < |t - tau| < 1/2. ``band_maxima`` holds the same max
    restricted to dyadic distance bands [2^-k-1, 2^-k); a rising trend across
    bands is the discrete signature of a jump, which no log modulus absorbs.
    """

    holds: bool
    constant_estimate: float
    worst_pair: tuple[int, int] | None
    p_minus: float
    p_plus: float
    band_maxima: tuple[float, ...] = ()


def exponent_constant(value: float, n_nodes: int, tag: str = "") -> ExponentFunction:
    return ExponentFunction(np.full(n_nodes, float(value)), tag or f"constant:{value:g}")


def exponent_from_values(values, tag: str = "") -> ExponentFunction:
    return ExponentFunction(np.asarray(values, dtype=float), tag)


_SIN_FORM = re.compile(
    r"^\s*([0-9.]+)\s*\+\s*(?:([0-9.]+)\s*\*\s*)?abs\(\s*(sin|cos)\s*\)\s*$"
)


def exponent_from_preset(spec: str, curve: JordanCurve) -> ExponentFunction:
    """Parse an exponent preset.

    Accepted forms: a number, ``inf``, ``A+abs(sin)`` / ``A+B*abs(cos)``,
    ``step:a,b`` (values on the upper/lower half plane of node angles), and
    ``logsmooth:base,amp`` (base + amp / log(e + 1/|theta|)).
    """
    spec = spec.strip()
    theta = np.angle(curve.nodes)
    if spec.lower() in ("inf", "infinity"):
        return exponent_constant(np.inf, curve.n_nodes, "inf")
    try:
        value = float(spec)
    except ValueError:
        pass
    else:
        return exponent_constant(value, curve.n_nodes)
    m = _SIN_FORM.match(spec)
    if m:
        base = float(m.group(1))
        amp = float(m.group(2)) if m.group(2) else 1.0
        trig = np.sin(theta) if m.group(3) == "sin" else np.cos(theta)
        return exponent_from_values(base + amp * np.abs(trig), spec)
    head, _, args = spec.partition(":")
    if head == "step":
        a, b = (float(x) for x in args.split(","))
        return exponent_from_values(np.where(theta >= 0.0, a, b), spec)
    if head == "logsmooth":
        base, amp = (float(x) for x in args.split(","))
        with np.errstate(divide="ignore"):
            vals = base + amp / np.log(np.e + 1.0 / np.abs(theta))
        return exponent_from_values(vals, spec)
    raise ValueError(f"unknown exponent preset {spec!r}")


def essential_bounds(p: ExponentFunction) -> tuple[float, float]:
    """Discrete stand-in for (ess inf, ess sup); the sup may be inf."""
    return float(p.values.min()), float(p.values.max())


def reciprocal(values: np.ndarray) -> np.ndarray:
    """1/p with the convention 1/inf = 0."""
    v = np.asarray(values, dtype=float)
    out = np.zeros_like(v)
    finite = np.isfinite(v)
    out[finite] = 1.0 / v[finite]
    return out


def dominance_check(p: ExponentFunction, q: ExponentFunction) -> tuple[bool, np.ndarray]:
    """True iff q <= p at every node; also returns the violating node indices."""
    if p.n_nodes != q.n_nodes:
        raise ValueError("exponents live on different node sets")
    viol = np.flatnonzero(q.values > p.values)
    return viol.size == 0, viol


def conjugate_exponent_r(p: ExponentFunction, q: ExponentFunction) -> ExponentFunction:
    """Solve 1/q = 1/p + 1/r nodewise.

    Conventions: r = inf where p = q (including both infinite) and r = q
    where p = inf with q finite. Requires q <= p everywhere.
    """
    ok, viol = dominance_check(p, q)
    if not ok:
        raise ValueError(
            f"no conjugate exponent: q > p at {viol.size} nodes, first {viol[:8].tolist()}"
        )
    inv = reciprocal(q.values) - reciprocal(p.values)
    r = np.full(p.n_nodes, np.inf)
    pos = inv > 0.0
    r[pos] = 1.0 / inv[pos]
    tag = ""
    if p.closed_form_tag and q.closed_form_tag:
        tag = f"conjugate({p.closed_form_tag},{q.closed_form_tag})"
    return ExponentFunction(r, tag)


def partition_infinity_sets(
    p: ExponentFunction, q: ExponentFunction, r: ExponentFunction
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split nodes into (gamma1, gamma2, gamma3) for a conjugate triple.

    gamma1 = {p = inf}, gamma2 = {r = inf} minus gamma1, gamma3 = the rest;
    on gamma1 the triple forces q = r, on gamma2 it forces p = q < inf.
    """
    if not (p.n_nodes == q.n_nodes == r.n_nodes):
        raise ValueError("exponent triple lives on different node sets")
    lhs = reciprocal(q.values)
    rhs = reciprocal(p.values) + reciprocal(r.values)
    bad = np.flatnonzero(np.abs(lhs - rhs) > 1e-12)
    if bad.size:
        raise ValueError(
            f"triple violates 1/q = 1/p + 1/r at {bad.size} nodes, first {bad[:8].tolist()}"
        )
    g1 = np.isinf(p.values)
    g2 = np.isinf(r.values) & ~g1
    g3 = ~(g1 | g2)
    return np.flatnonzero(g1), np.flatnonzero(g2), np.flatnonzero(g3)


def log_holder_constant(
    p: ExponentFunction,
    curve: JordanCurve,
    max_nodes: int = 4096,
    chunk: int = 512,
) -> LogHolderReport:
    """Estimate the log-Hoelder constant of p over node pairs closer than 1/2.

    The verdict combines three requirements: 1 < p_- <= p_+ < inf, a finite
    estimate, and no rising trend of the dyadic band maxima (see
    :class:`LogHolderReport`). The estimate is monotone under nested node
    refinement since the pair set only grows.
    """
    if p.n_nodes != curve.n_nodes:
        raise ValueError("exponent and curve node counts differ")
    p_minus, p_plus = essential_bounds(p)
    bounds_ok = (1.0 < p_minus) and np.isfinite(p_plus)
    if not np.isfinite(p_plus):
        return LogHolderReport(False, np.inf, None, p_minus, p_plus)

    step = max(1, curve.n_nodes // max_nodes)
    idx = np.arange(0, curve.n_nodes, step)
    z = curve.nodes[idx]
    pv = p.values[idx]

    best = 0.0
    worst = None
    n_bands = 64
    bands = np.zeros(n_bands)
    for s in range(0, idx.size, chunk):
        rows = slice(s, min(s + chunk, idx.size))
        d = np.abs(z[rows, None] - z[None, :])
        mask = (d > 0.0) & (d < 0.5)
        if not mask.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(mask, np.abs(pv[rows, None] - pv[None, :]) * (-np.log(d)), 0.0)
        k = int(np.argmax(vals))
        vmax = float(vals.flat[k])
        if vmax > best:
            best = vmax
            i_loc, j_loc = np.unravel_index(k, vals.shape)
            worst = (int(idx[rows][i_loc]), int(idx[j_loc]))
        band_idx = np.floor(-np.log2(d, where=mask, out=np.ones_like(d))).astype(int)
        band_idx = np.clip(band_idx, 0, n_bands - 1)
        np.maximum.at(bands, band_idx[mask], vals[mask])

    nonempty = np.flatnonzero(bands > 0.0)
    band_maxima = tuple(float(b) for b in bands[: (nonempty.max() + 1)]) if nonempty.size else ()
    trend_ok = True
    if nonempty.size >= 4:
        tail = nonempty[nonempty.size // 2 :]
        slope = float(np.polyfit(tail.astype(float), bands[tail], 1)[0])
        trend_ok = slope <= 0.05 * max(1.0, float(np.median(bands[nonempty])))
    holds = bounds_ok and np.isfinite(best) and trend_ok
    return LogHolderReport(holds, best, worst, p_minus, p_plus, band_maxima)
