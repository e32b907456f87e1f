"""Discretized rectifiable Jordan curves.

A curve is an ordered list of nodes traced counter-clockwise together with
arc-length quadrature weights and tangent angles. The bounded complementary
component lies on the left of the traced direction and contains the origin;
every built-in curve satisfies this. Arc weights come from the parametric
speed, so smooth periodic integrands are integrated with spectral accuracy.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi

__all__ = [
    "JordanCurve",
    "CarlesonReport",
    "make_unit_circle",
    "make_parametric_curve",
    "make_ellipse",
    "make_square",
    "make_perturbed_circle",
    "curve_from_name",
    "portion_length",
    "portion_under_resolved",
    "default_epsilon_grid",
    "refine_epsilon_grid",
    "carleson_constant",
    "curve_to_csv",
]


@dataclass(frozen=True)
class JordanCurve:
    """Closed curve sampled at quadrature nodes.

    ``nodes[j]`` is a point on the curve, ``arc_weights[j]`` approximates the
    arc measure near it, and ``tangent_angles[j]`` is the angle of the
    oriented tangent there, wrapped to (-pi, pi].
    """

    nodes: np.ndarray
    arc_weights: np.ndarray
    tangent_angles: np.ndarray
    total_length: float
    name: str = "curve"
    is_unit_circle: bool = False
    closed_flag: bool = True

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        weights = np.asarray(self.arc_weights, dtype=float)
        angles = np.asarray(self.tangent_angles, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arc_weights", weights)
        object.__setattr__(self, "tangent_angles", angles)
        if nodes.ndim != 1 or nodes.size < 8:
            raise ValueError("a curve needs at least 8 nodes")
        if weights.shape != nodes.shape or angles.shape != nodes.shape:
            raise ValueError("nodes, arc_weights and tangent_angles must share one shape")
        if np.any(weights <= 0.0):
            raise ValueError("arc weights must be positive")
        if not np.isclose(weights.sum(), self.total_length, rtol=1e-12, atol=0.0):
            raise ValueError("total_length must equal the sum of arc weights")
        if not self.closed_flag:
            raise ValueError("only closed curves are supported")

    @property
    def n_nodes(self) -> int:
        return self.nodes.size

    @property
    def unit_tangents(self) -> np.ndarray:
        return np.exp(1j * self.tangent_angles)

    @property
    def complex_measure(self) -> np.ndarray:
        """Quadrature weights for integration against d(tau) instead of |d(tau)|."""
        return self.unit_tangents * self.arc_weights

    def neighbor_spacing(self, index: int) -> float:
        """Chord distance from a node to its nearest neighbor."""
        n = self.n_nodes
        left = abs(self.nodes[index] - self.nodes[(index - 1) % n])
        right = abs(self.nodes[(index + 1) % n] - self.nodes[index])
        return float(min(left, right))

    def max_spacing(self) -> float:
        return float(np.abs(np.roll(self.nodes, -1) - self.nodes).max())

    def approximate_diameter(self, samples: int = 512) -> float:
        step = max(1, self.n_nodes // samples)
        z = self.nodes[::step]
        d = np.abs(z[:, None] - z[None, :])
        return float(d.max())


@dataclass(frozen=True)
class CarlesonReport:
    """Sampled estimate of sup over (t, eps) of portion length / eps."""

    constant_estimate: float
    argmax_point: complex
    argmax_radius: float
    t_count: int
    epsilon_grid: tuple[float, ...]

    def grid_description(self) -> str:
        eps = self.epsilon_grid
        return f"{self.t_count} centers x {len(eps)} radii in [{eps[0]:.3g}, {eps[-1]:.3g}]"


def _eval_on_grid(fn: Callable, t: np.ndarray) -> np.ndarray:
    out = np.asarray(fn(t))
    if out.shape != t.shape:
        out = np.asarray([fn(float(x)) for x in t])
    return out.astype(complex)


def _polyline_is_simple(nodes: np.ndarray, max_segments: int = 768) -> bool:
    """Proper-crossing test for the closed polyline through ``nodes``.

    Subsamples to at most ``max_segments`` segments, so this is a desk-scale
    sanity check, not a proof of simplicity.
    """
    step = max(1, int(np.ceil(nodes.size / max_segments)))
    z = nodes[::step]
    m = z.size
    if m < 4:
        return True
    a = z
    b = np.roll(z, -1)

    def cross(u, v):
        return np.imag(np.conj(u) * v)

    # pairwise orientation tests; adjacency (shared endpoints) is skipped
    d1 = cross((b - a)[None, :], a[:, None] - a[None, :])
    d2 = cross((b - a)[None, :], b[:, None] - a[None, :])
    d3 = cross((b - a)[:, None], a[None, :] - a[:, None])
    d4 = cross((b - a)[:, None], b[None, :] - a[:, None])
    crossing = (d1 * d2 < 0) & (d3 * d4 < 0)
    idx = np.arange(m)
    gap = np.abs(idx[:, None] - idx[None, :])
    adjacent = (gap <= 1) | (gap >= m - 1)
    return not bool((crossing & ~adjacent).any())


def make_unit_circle(n_nodes: int) -> JordanCurve:
    """Equispaced nodes exp(2 pi i j / n) with exact arc weights 2 pi / n."""
    if n_nodes < 8:
        raise ValueError("make_unit_circle needs n_nodes >= 8")
    phi = TWO_PI * np.arange(n_nodes) / n_nodes
    nodes = np.exp(1j * phi)
    weights = np.full(n_nodes, TWO_PI / n_nodes)
    angles = np.angle(np.exp(1j * (phi + 0.5 * np.pi)))
    return JordanCurve(nodes, weights, angles, TWO_PI, name="circle", is_unit_circle=True)


def make_parametric_curve(
    position: Callable,
    derivative: Callable,
    n_nodes: int,
    name: str = "parametric",
    validate_simple: bool = True,
) -> JordanCurve:
    """Sample a 1-periodic parametrization at t_j = j/n.

    ``position`` and ``derivative`` map [0, 1) to the plane; they may be
    vectorized or scalar. Arc weights are |derivative|/n (the periodic
    rectangle rule) and tangent angles are arg(derivative); at a corner the
    supplied derivative should return the left limit.
    """
    if n_nodes < 8:
        raise ValueError("make_parametric_curve needs n_nodes >= 8")
    t = np.arange(n_nodes) / n_nodes
    nodes = _eval_on_grid(position, t)
    deriv = _eval_on_grid(derivative, t)
    speed = np.abs(deriv)
    if np.any(speed <= 1e-13 * speed.max()):
        bad = np.flatnonzero(speed <= 1e-13 * speed.max())
        raise ValueError(f"derivative vanishes at nodes {bad[:8].tolist()}")
    weights = speed / n_nodes
    angles = np.angle(deriv)
    curve = JordanCurve(nodes, weights, angles, float(weights.sum()), name=name)
    if validate_simple and not _polyline_is_simple(curve.nodes):
        raise ValueError(f"curve {name!r} fails the self-intersection check")
    return curve


def make_ellipse(a: float, b: float, n_nodes: int) -> JordanCurve:
    if a <= 0 or b <= 0:
        raise ValueError("ellipse semi-axes must be positive")

    def position(t):
        return a * np.cos(TWO_PI * t) + 1j * b * np.sin(TWO_PI * t)

    def derivative(t):
        return TWO_PI * (-a * np.sin(TWO_PI * t) + 1j * b * np.cos(TWO_PI * t))

    return make_parametric_curve(position, derivative, n_nodes, name=f"ellipse:{a:g},{b:g}")


def make_square(n_nodes: int) -> JordanCurve:
    """Axis-aligned square with vertices at (+-1, +-1), traced counter-clockwise.

    Corners must land on nodes, hence n_nodes divisible by 4. Tangent angles
    at corner nodes use the left limit (the side being finished).
    """
    if n_nodes % 4 != 0:
        raise ValueError("make_square needs n_nodes divisible by 4")
    corners = np.array([1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j])

    def side_index(t):
        s = 4.0 * np.asarray(t, dtype=float)
        # ceil(s) - 1 gives the left limit at corner parameters
        return (np.ceil(s).astype(int) - 1) % 4, s

    def position(t):
        k, s = side_index(t)
        frac = s - (np.ceil(s) - 1.0)
        start = corners[k]
        end = corners[(k + 1) % 4]
        return start + frac * (end - start)

    def derivative(t):
        k, _ = side_index(t)
        return 4.0 * (corners[(k + 1) % 4] - corners[k])

    return make_parametric_curve(position, derivative, n_nodes, name="square")


def make_perturbed_circle(amp: float, freq: int, n_nodes: int) -> JordanCurve:
    """Radially perturbed circle r(phi) = 1 + amp cos(freq phi)."""
    if not (abs(amp) < 1.0):
        raise ValueError("perturbation amplitude must satisfy |amp| < 1")
    freq = int(freq)

    def position(t):
        phi = TWO_PI * t
        return (1.0 + amp * np.cos(freq * phi)) * np.exp(1j * phi)

    def derivative(t):
        phi = TWO_PI * t
        r = 1.0 + amp * np.cos(freq * phi)
        dr = -amp * freq * np.sin(freq * phi)
        return TWO_PI * (dr + 1j * r) * np.exp(1j * phi)

    return make_parametric_curve(
        position, derivative, n_nodes, name=f"perturbed-circle:{amp:g},{freq}"
    )


def curve_from_name(spec: str, n_nodes: int) -> JordanCurve:
    """Build a zoo curve from a name like ``circle`` or ``ellipse:2,1``."""
    head, _, args = spec.partition(":")
    head = head.strip().lower()
    if head == "circle":
        return make_unit_circle(n_nodes)
    if head == "square":
        return make_square(n_nodes)
    if head == "ellipse":
        try:
            a, b = (float(x) for x in args.split(","))
        except ValueError as exc:
            raise ValueError(f"ellipse spec needs 'ellipse:a,b', got {spec!r}") from exc
        return make_ellipse(a, b, n_nodes)
    if head == "perturbed-circle":
        try:
            amp_s, freq_s = args.split(",")
            amp, freq = float(amp_s), int(freq_s)
        except ValueError as exc:
            raise ValueError(
                f"perturbed-circle spec needs 'perturbed-circle:amp,freq', got {spec!r}"
            ) from exc
        return make_perturbed_circle(amp, freq, n_nodes)
    raise ValueError(f"unknown curve {spec!r}")


def portion_length(curve: JordanCurve, t_index: int, epsilon: float) -> float:
    """Arc measure of the portion {tau : |tau - t| < epsilon} around node t."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    d = np.abs(curve.nodes - curve.nodes[t_index])
    return float(curve.arc_weights[d < epsilon].sum())


def portion_under_resolved(curve: JordanCurve, t_index: int, epsilon: float) -> bool:
    """True when epsilon falls below the node spacing at t, so the portion
    captures nothing beyond the center node."""
    return epsilon <= curve.neighbor_spacing(t_index)


def default_epsilon_grid(curve: JordanCurve, n_eps: int = 64) -> np.ndarray:
    """Log-spaced radii from twice the coarsest node spacing to the diameter."""
    lo = 2.0 * curve.max_spacing()
    hi = curve.approximate_diameter()
    if lo >= hi:
        raise ValueError("curve too coarse for a radius grid")
    return np.geomspace(lo, hi, n_eps)


def refine_epsilon_grid(grid: np.ndarray) -> np.ndarray:
    """Insert geometric midpoints, keeping the original radii (nested refinement)."""
    g = np.asarray(grid, dtype=float)
    mids = np.sqrt(g[:-1] * g[1:])
    return np.sort(np.concatenate([g, mids]))


def carleson_constant(
    curve: JordanCurve,
    epsilon_grid: np.ndarray | None = None,
    t_subsample: int | None = None,
) -> CarlesonReport:
    """Estimate the Carleson constant sup |portion(t, eps)| / eps on a grid.

    The supremum is sampled, never claimed exact; refining a nested grid can
    only increase the estimate.
    """
    eps = default_epsilon_grid(curve) if epsilon_grid is None else np.asarray(epsilon_grid, float)
    if eps.size == 0:
        raise ValueError("empty epsilon grid")
    if np.any(eps <= 0):
        raise ValueError("epsilon grid must be positive")
    eps = np.sort(eps)
    count = 256 if t_subsample is None else int(t_subsample)
    stride = max(1, curve.n_nodes // count)
    t_indices = np.arange(0, curve.n_nodes, stride)

    best = -np.inf
    best_t = t_indices[0]
    best_eps = eps[0]
    w = curve.arc_weights
    for i in t_indices:
        d = np.abs(curve.nodes - curve.nodes[i])
        order = np.argsort(d)
        cum = np.cumsum(w[order])
        # strict inequality |tau - t| < eps
        k = np.searchsorted(d[order], eps, side="left")
        portions = np.where(k > 0, cum[np.maximum(k - 1, 0)], 0.0)
        ratios = portions / eps
        j = int(np.argmax(ratios))
        if ratios[j] > best:
            best = float(ratios[j])
            best_t = int(i)
            best_eps = float(eps[j])
    return CarlesonReport(
        constant_estimate=best,
        argmax_point=complex(curve.nodes[best_t]),
        argmax_radius=best_eps,
        t_count=t_indices.size,
        epsilon_grid=tuple(float(x) for x in eps),
    )


def curve_to_csv(curve: JordanCurve) -> str:
    """CSV rows ``j, Re tau, Im tau, w, theta``."""
    buf = io.StringIO()
    buf.write("j,re,im,weight,theta\n")
    for j in range(curve.n_nodes):
        z = curve.nodes[j]
        row = (float(z.real), float(z.imag), float(curve.arc_weights[j]),
               float(curve.tangent_angles[j]))
        buf.write(f"{j}," + ",".join(repr(x) for x in row) + "\n")
    return buf.getvalue()
