"""Command-line front door: config parsing, experiment runs, report bundles.

Subcommands: ``norm``, ``multiplier``, ``sio-check``, ``dichotomy``,
``carleson``. Every run is reproducible: identical config and seed produce
byte-identical reports (sorted JSON keys, no wall-clock provenance).
Exit codes: 0 success, 2 validation error, 3 numerical fault.
"""

from __future__ import annotations

import argparse
import csv as csv_module
import hashlib
import io
import json
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .cauchy import (
    adjoint_residuals,
    apply_S,
    apply_S_batch,
    mode_basis,
    operator_matrix,
    plemelj_residual,
)
from .corpus import random_trig_polynomial, rational_corpus
from .curves import (
    carleson_constant,
    curve_from_name,
    curve_to_csv,
    default_epsilon_grid,
    refine_epsilon_grid,
)
from .exponents import exponent_from_preset, exponent_from_values, log_holder_constant
from .spaces import (
    VARIABLE_EQUIV_ALLOWANCE,
    luxemburg_norm,
    multiplier_norm_lower,
    multiplier_norm_via_theorem,
    multiplier_witness,
    norm_value,
    unit_ball_check,
)
from .toeplitz import dichotomy_probe, symbol_from_coefficients, symbol_from_preset

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_FAULT = 3


class NumericalFault(RuntimeError):
    """An internal invariant failed numerically (not a usage error)."""


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "norm"
    curve: str = "circle"
    n_nodes: int = 4096
    exponent: str = "2"
    p: str = "4"
    q: str = "2"
    function: str = "one"
    symbol: str = "monomial:1"
    sizes: tuple[int, ...] = (16, 32, 64, 128, 256)
    aspect: int = 8
    trials: int = 24
    degree: int = 300
    seed: int = 0
    out: str = "out"
    format: str = "json"
    export_curve: bool = False

    def canonical(self) -> dict:
        """Experiment-defining fields only: where outputs go and how they are
        formatted does not change what was computed."""
        d = asdict(self)
        d["sizes"] = list(self.sizes)
        for presentation in ("out", "format", "export_curve"):
            d.pop(presentation)
        return dict(sorted(d.items()))


@dataclass
class ReportBundle:
    results: dict
    tables: dict[str, list[dict]]
    provenance: dict
    extra_files: dict[str, str]

    def payload(self) -> dict:
        return {
            "results": _plain(self.results),
            "tables": _plain(self.tables),
            "provenance": _plain(self.provenance),
        }

    def write(self, out_dir: str | Path, fmt: str) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        report = out / "report.json"
        report.write_text(json.dumps(self.payload(), sort_keys=True, indent=2) + "\n")
        paths.append(report)
        if fmt == "csv":
            for name, rows in sorted(self.tables.items()):
                if not rows:
                    continue
                path = out / f"{name}.csv"
                buf = io.StringIO()
                writer = csv_module.DictWriter(buf, fieldnames=sorted(rows[0]))
                writer.writeheader()
                for row in rows:
                    writer.writerow(_plain(row))
                path.write_text(buf.getvalue())
                paths.append(path)
        for name, text in sorted(self.extra_files.items()):
            path = out / name
            path.write_text(text)
            paths.append(path)
        return paths


def _plain(obj):
    """Convert numpy scalars and containers to JSON-stable Python types."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(np.real(obj)), "im": float(np.imag(obj))}
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _provenance(cfg: ExperimentConfig, operations: list[str]) -> dict:
    canonical = json.dumps(cfg.canonical(), sort_keys=True)
    return {
        "config": cfg.canonical(),
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "siolab_version": __version__,
        "numpy_version": np.__version__,
        "seed": cfg.seed,
        "operations": operations,
    }


def _exponent(spec: str, curve):
    if spec.startswith("csv:"):
        rows = np.loadtxt(spec[4:], delimiter=",", ndmin=2)
        return exponent_from_values(rows[:, 1], spec)
    return exponent_from_preset(spec, curve)


def _function(spec: str, curve, rng: np.random.Generator) -> np.ndarray:
    theta = np.angle(curve.nodes)
    head, _, args = spec.strip().partition(":")
    if head == "one":
        return np.ones(curve.n_nodes, dtype=complex)
    if head == "const":
        parts = [float(x) for x in args.split(",")]
        value = parts[0] + 1j * (parts[1] if len(parts) > 1 else 0.0)
        return np.full(curve.n_nodes, value, dtype=complex)
    if head == "abs-cos":
        return np.abs(np.cos(theta)).astype(complex)
    if head == "mode":
        return np.exp(1j * int(args) * theta)
    if head == "trig-random":
        return random_trig_polynomial(curve, rng, int(args) if args else 8)
    if head == "indicator":
        t0, t1 = (float(x) for x in args.split(","))
        return ((theta >= t0) & (theta < t1)).astype(complex)
    if head == "pole":
        re, im = (float(x) for x in args.split(","))
        return 1.0 / (curve.nodes - (re + 1j * im))
    if head == "csv":
        rows = np.loadtxt(args, delimiter=",", ndmin=2)
        if rows.shape[0] != curve.n_nodes:
            raise ValueError("per-node csv length differs from the curve")
        return rows[:, 1] + 1j * (rows[:, 2] if rows.shape[1] > 2 else 0.0)
    raise ValueError(f"unknown function preset {spec!r}")


def _symbol(spec: str, curve, degree: int, rng: np.random.Generator):
    if spec.endswith(".csv"):
        rows = np.loadtxt(spec, delimiter=",", ndmin=2)
        ks = rows[:, 0].astype(int)
        K = int(np.abs(ks).max())
        coeff = np.zeros(2 * K + 1, dtype=complex)
        coeff[ks + K] = rows[:, 1] + 1j * (rows[:, 2] if rows.shape[1] > 2 else 0.0)
        return symbol_from_coefficients(coeff, curve.n_nodes, name=Path(spec).name)
    return symbol_from_preset(spec, curve, degree=degree, rng=rng)


def run_norm(cfg: ExperimentConfig) -> tuple[ReportBundle, str | None]:
    curve = curve_from_name(cfg.curve, cfg.n_nodes)
    p = _exponent(cfg.exponent, curve)
    rng = np.random.default_rng(cfg.seed)
    f = _function(cfg.function, curve, rng)
    res = luxemburg_norm(curve, f, p)
    ball = unit_ball_check(curve, f, p)
    results = {
        "value": res.value,
        "modular_at_value": res.modular_at_value,
        "iterations": res.bisection_iterations,
        "bracket": list(res.bracket),
        "unit_ball": {
            "modular_le_one": ball.modular_le_one,
            "norm_le_one": ball.norm_le_one,
            "consistent": ball.consistent,
        },
    }
    table = [{"item": cfg.function, "op": "luxemburg_norm", "value": res.value,
              "modular_at_value": res.modular_at_value,
              "iterations": res.bisection_iterations}]
    bundle = ReportBundle(results, {"norms": table},
                          _provenance(cfg, ["luxemburg_norm", "unit_ball_check"]), {})
    fault = None if ball.consistent else "unit-ball equivalence violated numerically"
    return bundle, fault


def run_multiplier(cfg: ExperimentConfig) -> tuple[ReportBundle, str | None]:
    curve = curve_from_name(cfg.curve, cfg.n_nodes)
    p = _exponent(cfg.p, curve)
    q = _exponent(cfg.q, curve)
    rng = np.random.default_rng(cfg.seed)
    a = _symbol(cfg.symbol, curve, cfg.degree, rng).values
    theorem = multiplier_norm_via_theorem(curve, a, p, q)
    lower = multiplier_norm_lower(curve, a, p, q, trials=cfg.trials, rng=rng)
    witness_value = 0.0
    if np.isfinite(theorem) and theorem > 0.0:
        w = multiplier_witness(curve, a, p, q, theorem, 1e-3 * theorem)
        if w.values.any():
            wn = norm_value(curve, w.values, p)
            if wn > 0:
                witness_value = norm_value(curve, a * w.values / wn, q)
    allowance = 1.0 if (p.is_constant and q.is_constant) else VARIABLE_EQUIV_ALLOWANCE
    results = {
        "theorem_value": theorem,
        "lower_bound": lower,
        "witness_value": witness_value,
        "lower_over_theorem": lower / theorem if theorem > 0 else 0.0,
        "equivalence_allowance": allowance,
    }
    bundle = ReportBundle(
        results,
        {"multiplier": [{"op": "multiplier_norm", **{k: v for k, v in results.items()}}]},
        _provenance(cfg, ["multiplier_norm_via_theorem", "multiplier_norm_lower",
                          "multiplier_witness"]),
        {},
    )
    fault = None
    if np.isfinite(theorem) and lower > theorem * allowance * (1.0 + 1e-9):
        fault = "lower bound exceeds the theorem value beyond the allowance"
    return bundle, fault


def run_sio_check(cfg: ExperimentConfig) -> tuple[ReportBundle, str | None]:
    curve = curve_from_name(cfg.curve, cfg.n_nodes)
    p = _exponent(cfg.exponent, curve)
    rng = np.random.default_rng(cfg.seed)
    N = 32

    modes = np.arange(-N // 2, N - N // 2)
    B = mode_basis(curve, modes)
    SB = apply_S_batch(curve, B.T).T
    PB, QB = 0.5 * (B + SB), 0.5 * (B - SB)
    PPB = 0.5 * (PB + apply_S_batch(curve, PB.T).T)
    M = lambda X: operator_matrix(curve, X, B)
    proj = {
        "P2_minus_P": float(np.abs(M(PPB) - M(PB)).max()),
        "PQ": float(np.abs(M(0.5 * (QB + apply_S_batch(curve, QB.T).T))).max()),
        "P_plus_Q_minus_I": float(np.abs(M(PB + QB) - M(B)).max()),
    }

    adj = adjoint_residuals(curve, N)
    offsets = [0.08, 0.04, 0.02, 0.01]
    plemelj_rows = []
    for name, f in rational_corpus(curve, rng, count=4):
        r = plemelj_residual(curve, f, offsets, targets=256)
        plemelj_rows.append({"item": name, "op": "plemelj_residual",
                             "residual_plus": r.residual_plus,
                             "residual_minus": r.residual_minus})

    ratio_rows = []
    for i in range(cfg.trials):
        f = random_trig_polynomial(curve, rng, degree=12)
        nf = norm_value(curve, f, p)
        ns = norm_value(curve, apply_S(curve, f), p)
        ratio_rows.append({"item": f"trig-{i}", "op": "norm_ratio",
                           "ratio": ns / nf if nf > 0 else 0.0})
    lh = log_holder_constant(p, curve)

    results = {
        "projection_residuals": proj,
        "adjoint_residuals": {"S": adj.s_residual, "P": adj.p_residual, "Q": adj.q_residual},
        "plemelj_max_plus": max(r["residual_plus"] for r in plemelj_rows),
        "plemelj_max_minus": max(r["residual_minus"] for r in plemelj_rows),
        "norm_ratio_max": max(r["ratio"] for r in ratio_rows),
        "log_holder": {
            "holds": lh.holds,
            "constant_estimate": lh.constant_estimate,
            "bounds": [lh.p_minus, lh.p_plus],
        },
    }
    extra = {}
    if cfg.format == "csv":
        buf = io.StringIO()
        for row in M(SB):
            buf.write(",".join(f"{z.real!r}+{z.imag!r}j" for z in row) + "\n")
        extra["s_matrix.csv"] = buf.getvalue()
    if cfg.export_curve:
        extra["curve.csv"] = curve_to_csv(curve)
    bundle = ReportBundle(
        results,
        {"plemelj": plemelj_rows, "norm_ratios": ratio_rows},
        _provenance(cfg, ["adjoint_residuals", "plemelj_residual", "apply_S",
                          "luxemburg_norm", "log_holder_constant"]),
        extra,
    )
    return bundle, None


def run_dichotomy(cfg: ExperimentConfig) -> tuple[ReportBundle, str | None]:
    curve = curve_from_name(cfg.curve, cfg.n_nodes)
    p = _exponent(cfg.p, curve)
    q = _exponent(cfg.q, curve)
    rng = np.random.default_rng(cfg.seed)
    need = max(cfg.sizes) + cfg.aspect
    a = _symbol(cfg.symbol, curve, max(cfg.degree, need), rng)
    verdict = dichotomy_probe(a, p, q, cfg.sizes, aspect=cfg.aspect)
    record = verdict.as_record()
    results = {**record, "fault": verdict.fault,
               "kernel_dim_T": list(verdict.kernel_dim_T),
               "kernel_dim_companion": list(verdict.kernel_dim_companion)}
    rows = [
        {"op": "dichotomy_probe", "size": n, "sigma_min_T": st, "sigma_min_companion": sc,
         "kernel_dim_T": kt, "kernel_dim_companion": kc}
        for n, st, sc, kt, kc in zip(verdict.sizes, verdict.sigma_min_T,
                                     verdict.sigma_min_companion, verdict.kernel_dim_T,
                                     verdict.kernel_dim_companion)
    ]
    extra = {"verdict.json": json.dumps(_plain(record), sort_keys=True, indent=2) + "\n"}
    bundle = ReportBundle(results, {"sections": rows},
                          _provenance(cfg, ["dichotomy_probe"]), extra)
    fault = "both operators show persistent nontrivial kernels" if verdict.fault else None
    return bundle, fault


def run_carleson(cfg: ExperimentConfig) -> tuple[ReportBundle, str | None]:
    curve = curve_from_name(cfg.curve, cfg.n_nodes)
    base_grid = default_epsilon_grid(curve)
    base = carleson_constant(curve, base_grid, t_subsample=256)
    refined = carleson_constant(curve, refine_epsilon_grid(base_grid), t_subsample=512)
    change = (refined.constant_estimate - base.constant_estimate) / base.constant_estimate
    results = {
        "constant_estimate": refined.constant_estimate,
        "base_estimate": base.constant_estimate,
        "refinement_change": change,
        "argmax_radius": refined.argmax_radius,
        "argmax_point": refined.argmax_point,
        "grid": refined.grid_description(),
    }
    rows = [{"op": "carleson_constant", "grid": "base",
             "estimate": base.constant_estimate},
            {"op": "carleson_constant", "grid": "refined",
             "estimate": refined.constant_estimate}]
    extra = {"curve.csv": curve_to_csv(curve)} if cfg.export_curve else {}
    bundle = ReportBundle(results, {"carleson": rows},
                          _provenance(cfg, ["carleson_constant"]), extra)
    return bundle, None


_RUNNERS = {
    "norm": run_norm,
    "multiplier": run_multiplier,
    "sio-check": run_sio_check,
    "dichotomy": run_dichotomy,
    "carleson": run_carleson,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON config file")
    common.add_argument("--out", type=str, default=None, help="output directory")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--curve", type=str, default=None)
    common.add_argument("--n", dest="n_nodes", type=int, default=None)
    common.add_argument("--export-curve", action="store_true", default=None)

    parser = argparse.ArgumentParser(prog="siolab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("norm", parents=[common])
    sp.add_argument("--exponent", type=str, default=None)
    sp.add_argument("--function", type=str, default=None)

    sp = sub.add_parser("multiplier", parents=[common])
    sp.add_argument("--p", type=str, default=None)
    sp.add_argument("--q", type=str, default=None)
    sp.add_argument("--symbol", type=str, default=None)
    sp.add_argument("--trials", type=int, default=None)

    sp = sub.add_parser("sio-check", parents=[common])
    sp.add_argument("--exponent", type=str, default=None)
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--report", dest="format", choices=["json", "csv"], default=None)

    sp = sub.add_parser("dichotomy", parents=[common])
    sp.add_argument("--symbol", type=str, default=None)
    sp.add_argument("--p", type=str, default=None)
    sp.add_argument("--q", type=str, default=None)
    sp.add_argument("--sizes", type=str, default=None, help="comma-separated section sizes")
    sp.add_argument("--aspect", type=int, default=None)
    sp.add_argument("--degree", type=int, default=None)

    sp = sub.add_parser("carleson", parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> tuple[ExperimentConfig, str | None]:
    """Merge defaults, the optional config file, and explicit CLI flags."""
    base: dict = {}
    if args.config:
        base.update(json.loads(Path(args.config).read_text()))
    overrides = {}
    for key, value in vars(args).items():
        if key == "config" or value is None:
            continue
        overrides[key] = value
    merged = {**base, **overrides}
    verdict_file = None
    if "sizes" in merged and isinstance(merged["sizes"], str):
        merged["sizes"] = tuple(int(x) for x in merged["sizes"].split(","))
    if "sizes" in merged:
        merged["sizes"] = tuple(int(x) for x in merged["sizes"])
    out = merged.get("out")
    if out and str(out).endswith(".json"):
        verdict_file = Path(out).name
        merged["out"] = str(Path(out).parent) or "."
    valid = {f.name for f in fields(ExperimentConfig)}
    unknown = set(merged) - valid
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    return replace(ExperimentConfig(), **merged), verdict_file


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, verdict_file = config_from_args(args)
        bundle, fault = _RUNNERS[cfg.command](cfg)
        if verdict_file and verdict_file != "verdict.json":
            bundle.extra_files[verdict_file] = bundle.extra_files.pop("verdict.json")
        paths = bundle.write(cfg.out, cfg.format)
        for path in paths:
            print(path)
        if fault:
            print(f"numerical fault: {fault}", file=sys.stderr)
            return EXIT_FAULT
        return EXIT_OK
    except NumericalFault as exc:
        print(f"numerical fault: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
