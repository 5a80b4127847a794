"""Suite orchestration and deterministic report emission.

A suite is described by one JSON config document; running it executes the
selected diagnostics in dependency order (grids, frame identities, then
operator diagnostics), never aborting on a diagnostic failure, and returns
a Report whose serialization is byte-stable: emitting the same Report
twice produces identical files.

Outputs: report.json (machine summary with per-record tolerances and grid
metadata), one CSV per exported profile (9 significant digits), and a
plain-text summary.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import carleson as carleson_mod
from . import compactness as compactness_mod
from . import localization as localization_mod
from . import paraproducts as paraproducts_mod
from .geometry import GroupPoint
from .grids import SampledFunction, SpatialGrid, make_frame_grid, inner_product, l2_norm
from .operators import (
    apply_kernel,
    get_model,
    model_zoo,
)
from .wavelets import analyze, frame_element, make_mother_wavelet, synthesize

__all__ = [
    "ConfigError",
    "SuiteConfig",
    "Report",
    "run_suite",
    "emit",
    "DEFAULT_TOLERANCES",
    "DIAGNOSTIC_NAMES",
]


class ConfigError(ValueError):
    """Invalid suite configuration; nothing is executed."""


DEFAULT_TOLERANCES = {
    "parseval": 0.02,
    "roundtrip": 0.05,
    "pv_rel": 0.02,
    "dual_path": 1e-4,
    "decay_stability": 0.2,
    "schur_anchor": 1e-10,
    "schur_tail_factor": 5.0,
    "origin_tail_finite_rank": 1e-3,
    "wc_hilbert_constancy": 1e-8,
    "wc_finite_rank_tail": 1e-4,
    "rk_finite_rank_ratio": 1e-3,
    "rk_hilbert_ratio": 0.1,
    "rk_svd_agreement": 1e-3,
    "carleson_vanishing_ratio": 1e-2,
    "carleson_nonvanishing_ratio": 0.2,
    "carleson_constant": 1e-6,
    "stein_slack": 10.0,
    "pp_symbol_rel": 0.05,
    "pp_adjoint_constant": 1e-9,
    "pp_adjointness": 1e-10,
    "pp_vanishing_ratio": 1e-2,
    "pp_nonvanishing_ratio": 0.1,
    "decomp_reconstruction": 1e-10,
    "decomp_s1_rel": 0.05,
    "decomp_hilbert": 1e-9,
}

DIAGNOSTIC_NAMES = (
    "frame",
    "pv",
    "decay",
    "schur",
    "weak_compactness",
    "rk_tail",
    "carleson",
    "paraproduct",
    "decomposition",
)

DEFAULT_OPERATORS = ("hilbert", "damped_hilbert_1", "finite_rank", "zero")


@dataclass(frozen=True)
class SuiteConfig:
    """Validated suite configuration."""

    grid_L: float = 32.0
    grid_N: int = 2048
    a_min: float = 0.0625
    a_max: float = 512.0
    s: float = 0.125
    L_b: float | None = None
    cone_factor: float = 1.0
    operators: tuple[str, ...] = DEFAULT_OPERATORS
    diagnostics: tuple[str, ...] = DIAGNOSTIC_NAMES
    radii: tuple[float, ...] = tuple(float(r) for r in range(0, 9))
    tolerances: dict = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, raw: dict) -> "SuiteConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        known = {
            "grid",
            "frame",
            "operators",
            "diagnostics",
            "radii",
            "tolerances",
            "seed",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs: dict = {}
        grid = raw.get("grid", {})
        if "L" in grid:
            kwargs["grid_L"] = float(grid["L"])
        if "N" in grid:
            kwargs["grid_N"] = int(grid["N"])
        frame = raw.get("frame", {})
        for src, dst in (
            ("a_min", "a_min"),
            ("a_max", "a_max"),
            ("s", "s"),
            ("L_b", "L_b"),
            ("cone_factor", "cone_factor"),
        ):
            if src in frame and frame[src] is not None:
                kwargs[dst] = float(frame[src])
        if "operators" in raw:
            kwargs["operators"] = tuple(str(o) for o in raw["operators"])
        if "diagnostics" in raw:
            kwargs["diagnostics"] = tuple(str(d) for d in raw["diagnostics"])
        if "radii" in raw:
            kwargs["radii"] = tuple(float(r) for r in raw["radii"])
        if "tolerances" in raw:
            if not isinstance(raw["tolerances"], dict):
                raise ConfigError("tolerances must be an object")
            kwargs["tolerances"] = dict(raw["tolerances"])
        if "seed" in raw:
            kwargs["seed"] = int(raw["seed"])
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        zoo = set(model_zoo())
        for op in self.operators:
            if op not in zoo:
                raise ConfigError(
                    f"unknown operator label {op!r}; known: {sorted(zoo)}"
                )
        for d in self.diagnostics:
            if d not in DIAGNOSTIC_NAMES:
                raise ConfigError(
                    f"unknown diagnostic {d!r}; known: {list(DIAGNOSTIC_NAMES)}"
                )
        if len(self.radii) and np.any(np.diff(self.radii) <= 0.0):
            raise ConfigError("radii must be strictly increasing")
        for key, val in self.tolerances.items():
            if key not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            if not (isinstance(val, (int, float)) and val > 0.0):
                raise ConfigError(f"tolerance {key!r} must be a positive number")
        if self.grid_N < 16:
            raise ConfigError("grid N must be at least 16")
        if self.grid_L <= 0 or self.a_min <= 0 or self.a_max <= self.a_min:
            raise ConfigError("grid/frame dimensions must be positive with a_max > a_min")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def to_dict(self) -> dict:
        return {
            "grid": {"L": self.grid_L, "N": self.grid_N},
            "frame": {
                "a_min": self.a_min,
                "a_max": self.a_max,
                "s": self.s,
                "L_b": self.L_b,
                "cone_factor": self.cone_factor,
            },
            "operators": list(self.operators),
            "diagnostics": list(self.diagnostics),
            "radii": list(self.radii),
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
        }


@dataclass
class Report:
    """Suite results: one record per check plus exported profiles."""

    config: dict
    seed: int
    records: list = field(default_factory=list)
    profiles: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "PASS" if all(r["verdict"] == "PASS" for r in self.records) else "FAIL"


class _Context:
    """Lazily constructed shared grids and generators for the suite."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.psi = make_mother_wavelet()
        self.phi = paraproducts_mod.make_bump_phi()
        self.grid = SpatialGrid(cfg.grid_L, cfg.grid_N)
        self.fgrid = make_frame_grid(
            self.grid,
            cfg.a_min,
            cfg.a_max,
            s=cfg.s,
            L_b=cfg.L_b,
            cone_factor=cfg.cone_factor,
        )

    def grid_meta(self, grid=None, fgrid=None) -> dict:
        grid = grid or self.grid
        fgrid = fgrid or self.fgrid
        return {
            "L": grid.L,
            "N": grid.N,
            "a_min": float(fgrid.scales[0]),
            "a_max": float(fgrid.scales[-1]),
            "s": fgrid.s,
            "n_nodes": fgrid.n_nodes,
        }


def _record(name, operator, verdict, values, tolerances, grid_meta):
    return {
        "name": name,
        "operator": operator,
        "verdict": "PASS" if verdict else "FAIL",
        "values": values,
        "tolerances": tolerances,
        "grid": grid_meta,
    }


def _test_family(grid: SpatialGrid) -> dict:
    x = grid.x

    def bump(center, width):
        u = (x - center) / width
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    return {
        "gauss": np.exp(-(x**2)),
        "gauss_shift": np.exp(-((x - 10.0) ** 2)),
        "bump_w2": bump(0.0, 2.0),
        "bump_shift": bump(-8.0, 1.5),
    }


def _diag_frame(cfg: SuiteConfig, ctx: _Context):
    records, profiles = [], {}
    refinements = [max(cfg.s * 4, 1.0 / 2), cfg.s * 2, cfg.s]
    refinements = sorted(set(refinements), reverse=True)
    rows = []
    history = []
    for s in refinements:
        fg = make_frame_grid(
            ctx.grid, cfg.a_min, cfg.a_max, s=s, L_b=cfg.L_b, cone_factor=cfg.cone_factor
        )
        worst_p, worst_r = 0.0, 0.0
        for label, vals in _test_family(ctx.grid).items():
            f = SampledFunction(ctx.grid, vals)
            fld = analyze(f, ctx.psi, fg)
            norm2 = l2_norm(f) ** 2
            p_err = abs(fld.energy() - norm2) / norm2
            rec = synthesize(fld, ctx.psi, ctx.grid)
            r_err = float(
                np.linalg.norm(rec.values - f.values) / np.linalg.norm(f.values)
            )
            worst_p = max(worst_p, p_err)
            worst_r = max(worst_r, r_err)
        history.append((s, worst_p, worst_r))
        rows.append([s, worst_p, worst_r])
    ps = [h[1] for h in history]
    rs = [h[2] for h in history]
    ok = (
        ps[-1] <= cfg.tol("parseval")
        and rs[-1] <= cfg.tol("roundtrip")
        and all(ps[i] > ps[i + 1] for i in range(len(ps) - 1))
        and all(rs[i] > rs[i + 1] for i in range(len(rs) - 1))
    )
    records.append(
        _record(
            "frame_identities",
            None,
            ok,
            {
                "parseval_error": ps[-1],
                "roundtrip_error": rs[-1],
                "parseval_history": ps,
                "roundtrip_history": rs,
            },
            {"parseval": cfg.tol("parseval"), "roundtrip": cfg.tol("roundtrip")},
            ctx.grid_meta(),
        )
    )
    profiles["frame_refinement"] = {
        "columns": ["s", "parseval_error", "roundtrip_error"],
        "rows": rows,
    }
    return records, profiles


def _diag_pv(cfg: SuiteConfig, ctx: _Context):
    grid, psi = ctx.grid, ctx.psi
    H = get_model("hilbert").kernel
    f = SampledFunction(grid, 1.0 / (1.0 + grid.x**2))
    hf = apply_kernel(H, f)
    target = grid.x / (1.0 + grid.x**2)
    m = np.abs(grid.x) <= 16.0
    rel = float(
        np.linalg.norm(hf.values[m] - target[m]) / np.linalg.norm(target[m])
    )
    src, tgt = GroupPoint(1.0, 0.0), GroupPoint(1.0, 8.0)
    direct = localization_mod.matrix_coefficient(H, src, tgt, grid, psi)
    via_apply = complex(
        inner_product(apply_kernel(H, frame_element(psi, src, grid)), frame_element(psi, tgt, grid))
    ).real
    dual = abs(direct - via_apply)
    ok = rel <= cfg.tol("pv_rel") and dual <= cfg.tol("dual_path")
    return (
        [
            _record(
                "pv_application",
                "hilbert",
                ok,
                {"relative_error": rel, "dual_path_gap": dual},
                {"pv_rel": cfg.tol("pv_rel"), "dual_path": cfg.tol("dual_path")},
                ctx.grid_meta(),
            )
        ],
        {},
    )


def _diag_decay(cfg: SuiteConfig, ctx: _Context):
    H = get_model("hilbert").kernel
    rep = localization_mod.verify_decay(H, ctx.psi, ctx.fgrid, ctx.grid)
    grid2 = SpatialGrid(cfg.grid_L, cfg.grid_N * 2)
    fg2 = make_frame_grid(
        grid2, cfg.a_min, cfg.a_max, s=cfg.s / 2, L_b=cfg.L_b, cone_factor=cfg.cone_factor
    )
    rep2 = localization_mod.verify_decay(H, ctx.psi, fg2, grid2)
    change = abs(rep2.fitted_c - rep.fitted_c) / rep.fitted_c
    ok = (
        math.isfinite(rep.fitted_c)
        and math.isfinite(rep2.fitted_c)
        and change <= cfg.tol("decay_stability")
    )
    return (
        [
            _record(
                "decay_bound",
                "hilbert",
                ok,
                {
                    "fitted_c": rep.fitted_c,
                    "fitted_c_refined": rep2.fitted_c,
                    "relative_change": change,
                },
                {"decay_stability": cfg.tol("decay_stability")},
                ctx.grid_meta(),
            )
        ],
        {},
    )


def _diag_schur(cfg: SuiteConfig, ctx: _Context):
    grid, fgrid, psi = ctx.grid, ctx.fgrid, ctx.psi
    H = get_model("hilbert").kernel
    anchors = (GroupPoint(1.0, 0.0), GroupPoint(2.0, 0.0), GroupPoint(1.0, 5.0))
    vals = [
        localization_mod.schur_value(H, psi, fgrid, grid, anchor=p) for p in anchors
    ]
    spread = max(vals) - min(vals)
    tails = {
        r: localization_mod.schur_tail(H, psi, fgrid, grid, float(r))
        for r in (1.0, 6.0)
    }
    factor = tails[1.0] / tails[6.0] if tails[6.0] > 0.0 else math.inf
    r_big = max(6.0, max(cfg.radii) if cfg.radii else 6.0)
    ft = localization_mod.origin_tail(
        get_model("finite_rank").kernel, psi, fgrid, grid, r_big
    )
    ok = (
        all(math.isfinite(v) for v in vals)
        and spread <= cfg.tol("schur_anchor")
        and factor >= cfg.tol("schur_tail_factor")
        and ft <= cfg.tol("origin_tail_finite_rank")
    )
    return (
        [
            _record(
                "schur_localization",
                "hilbert",
                ok,
                {
                    "schur_value": vals[0],
                    "anchor_spread": spread,
                    "tail_1": tails[1.0],
                    "tail_6": tails[6.0],
                    "tail_factor": factor,
                    "finite_rank_origin_tail": ft,
                    "origin_tail_radius": r_big,
                },
                {
                    "schur_anchor": cfg.tol("schur_anchor"),
                    "schur_tail_factor": cfg.tol("schur_tail_factor"),
                    "origin_tail_finite_rank": cfg.tol("origin_tail_finite_rank"),
                },
                ctx.grid_meta(),
            )
        ],
        {},
    )


def _diag_weak_compactness(cfg: SuiteConfig, ctx: _Context):
    radii = np.arange(0.0, (max(cfg.radii) if cfg.radii else 8.0) + 0.5, 0.5)
    records, profiles = [], {}
    for label in ("hilbert", "finite_rank"):
        if label not in cfg.operators:
            continue
        k = get_model(label).kernel
        prof = localization_mod.weak_compactness_profile(
            k, ctx.psi, ctx.fgrid, radii
        )
        if label == "hilbert":
            value = float(prof.max() - prof.min())
            ok = value <= cfg.tol("wc_hilbert_constancy")
            tol_key = "wc_hilbert_constancy"
        else:
            value = float(prof[-1])
            ok = value <= cfg.tol("wc_finite_rank_tail")
            tol_key = "wc_finite_rank_tail"
        records.append(
            _record(
                "weak_compactness_profile",
                label,
                ok,
                {"metric": value, "profile_start": float(prof[0]), "profile_end": float(prof[-1])},
                {tol_key: cfg.tol(tol_key)},
                ctx.grid_meta(),
            )
        )
        profiles[f"weak_compactness_{label}"] = {
            "columns": ["R", "value"],
            "rows": [[float(r), float(v)] for r, v in zip(radii, prof)],
        }
    return records, profiles


def _diag_rk_tail(cfg: SuiteConfig, ctx: _Context):
    records, profiles = [], {}
    radii = list(cfg.radii) if cfg.radii else [float(r) for r in range(0, 9)]
    for label in ("hilbert", "finite_rank", "zero"):
        if label not in cfg.operators:
            continue
        k = get_model(label).kernel
        A = compactness_mod.operator_matrix(k, ctx.grid)
        tf = compactness_mod.tail_functional(
            A, ctx.psi, ctx.fgrid, ctx.grid, radii, label=label, seed=cfg.seed
        )
        ratio = tf.ratio()
        if label == "hilbert":
            ok = ratio > cfg.tol("rk_hilbert_ratio")
            tol_key = "rk_hilbert_ratio"
            profiles["rk_witness_hilbert"] = {
                "columns": ["x", "value"],
                "rows": [
                    [float(x), float(v)]
                    for x, v in zip(ctx.grid.x, tf.witnesses[-1].values)
                ],
            }
        elif label == "finite_rank":
            ok = ratio < cfg.tol("rk_finite_rank_ratio")
            tol_key = "rk_finite_rank_ratio"
        else:
            ok = tf.values[0] == 0.0
            tol_key = "rk_finite_rank_ratio"
        records.append(
            _record(
                "rk_tail",
                label,
                ok,
                {"ratio": ratio, "tail_0": float(tf.values[0]), "tail_max": float(tf.values[-1]), "verdict_trend": tf.verdict},
                {tol_key: cfg.tol(tol_key)},
                ctx.grid_meta(),
            )
        )
        profiles[f"rk_tail_{label}"] = {
            "columns": ["R", "value"],
            "rows": [[float(r), float(v)] for r, v in zip(tf.radii, tf.values)],
        }
    # downsampled dense-SVD cross-check
    import scipy.linalg

    small = SpatialGrid(32.0, 256)
    sfg = make_frame_grid(small, 0.5, 64.0, s=0.25)
    S = compactness_mod.analysis_operator(ctx.psi, sfg, small)
    A = compactness_mod.operator_matrix(get_model("damped_hilbert_1").kernel, small)
    res = compactness_mod.rk_tail(A, S, sfg, small, 0.0, seed=cfg.seed)
    M = np.asarray(S @ A) / math.sqrt(small.h)
    dense = float(scipy.linalg.svdvals(M)[0] ** 2)
    rel = abs(res.value - dense) / dense
    ok = rel <= cfg.tol("rk_svd_agreement") and res.converged
    records.append(
        _record(
            "rk_power_vs_svd",
            "damped_hilbert_1",
            ok,
            {"power": res.value, "dense_svd": dense, "relative_gap": rel, "iterations": res.iterations},
            {"rk_svd_agreement": cfg.tol("rk_svd_agreement")},
            {"L": small.L, "N": small.N, "a_min": 0.5, "a_max": 64.0, "s": 0.25, "n_nodes": sfg.n_nodes},
        )
    )
    return records, profiles


def _diag_carleson(cfg: SuiteConfig, ctx: _Context):
    records, profiles = [], {}
    wide = SpatialGrid(2048.0, 16384)
    wfg = make_frame_grid(wide, 0.5, 1024.0, s=0.25, L_b=1024.0, cone_factor=0.0)
    radii = np.arange(0.0, 8.5, 0.5)
    vals = {}
    for ex in carleson_mod.bmo_examples(wide):
        f = SampledFunction.from_callable(wide, ex.evaluator)
        mu = carleson_mod.coefficient_measure(f, ctx.psi, wfg)
        prof = carleson_mod.vanishing_profile(mu, radii)
        ratio = float(prof[-1] / prof[0]) if prof[0] > 0.0 else 0.0
        vals[ex.label] = (ratio, ex.expected_class)
        profiles[f"carleson_profile_{ex.label}"] = {
            "columns": ["R", "value"],
            "rows": [[float(r), float(v)] for r, v in zip(radii, prof)],
        }
        if ex.expected_class == "CMO":
            ok = ratio < cfg.tol("carleson_vanishing_ratio")
            tol_key = "carleson_vanishing_ratio"
        else:
            ok = ratio > cfg.tol("carleson_nonvanishing_ratio")
            tol_key = "carleson_nonvanishing_ratio"
        records.append(
            _record(
                "carleson_profile",
                ex.label,
                ok,
                {"ratio": ratio, "expected_class": ex.expected_class},
                {tol_key: cfg.tol(tol_key)},
                {"L": wide.L, "N": wide.N, "a_min": 0.5, "a_max": 1024.0, "s": 0.25, "n_nodes": wfg.n_nodes},
            )
        )
    # constant annihilation on a well-resolved interior lattice
    fg_int = make_frame_grid(ctx.grid, 0.5, ctx.grid.L / 2.0, s=0.125, L_b=ctx.grid.L / 2.0, cone_factor=0.0)
    one = SampledFunction(ctx.grid, np.ones(ctx.grid.N))
    mu1 = carleson_mod.coefficient_measure(one, ctx.psi, fg_int)
    c0 = carleson_mod.carleson_function(mu1, 0.0)
    ok = c0 <= cfg.tol("carleson_constant")
    records.append(
        _record(
            "carleson_constant",
            None,
            ok,
            {"carleson_at_0": c0},
            {"carleson_constant": cfg.tol("carleson_constant")},
            ctx.grid_meta(fgrid=fg_int),
        )
    )
    # slack inequality audit
    mu_psi = carleson_mod.coefficient_measure(
        frame_element(ctx.psi, GroupPoint(1.0, 0.0), ctx.grid), ctx.psi, ctx.fgrid
    )
    gauss = SampledFunction(ctx.grid, np.exp(-ctx.grid.x**2))
    r1, ok1 = carleson_mod.stein_inequality_check(
        gauss, ctx.phi, mu_psi, 2.0, c_check=cfg.tol("stein_slack")
    )
    k0 = int(np.argmin(ctx.fgrid.dist0))
    mu_pt = carleson_mod.point_mass(ctx.fgrid, k0)
    u = (ctx.grid.x - 3.0) / 1.5
    bvals = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    bvals[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    shifted = SampledFunction(ctx.grid, bvals)
    r2, ok2 = carleson_mod.stein_inequality_check(
        shifted, ctx.phi, mu_pt, 2.0, c_check=cfg.tol("stein_slack")
    )
    records.append(
        _record(
            "stein_inequality",
            None,
            ok1 and ok2,
            {"ratio_gaussian": r1, "ratio_point_mass": r2},
            {"stein_slack": cfg.tol("stein_slack")},
            ctx.grid_meta(),
        )
    )
    return records, profiles


def _diag_paraproduct(cfg: SuiteConfig, ctx: _Context):
    records, profiles = [], {}
    grid, fgrid, psi, phi = ctx.grid, ctx.fgrid, ctx.psi, ctx.phi
    x = grid.x
    u = x / 2.0
    bvals = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    bvals[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    beta = SampledFunction(grid, bvals)
    sym = paraproducts_mod.make_symbol(beta, psi, fgrid)
    pb1 = paraproducts_mod.paraproduct_apply_to_constant(sym, phi, psi, grid)
    target = phi.m_phi * beta.values
    rel = float(np.linalg.norm(pb1.values - target) / np.linalg.norm(target))
    pstar1 = paraproducts_mod.paraproduct_adjoint_apply_to_constant(sym, phi, psi, grid)
    adj_const = float(np.max(np.abs(pstar1.values)))
    rng = np.random.default_rng(cfg.seed)
    gap = 0.0
    for _ in range(3):
        f = SampledFunction(grid, rng.standard_normal(grid.N))
        g = SampledFunction(grid, rng.standard_normal(grid.N))
        lhs = inner_product(paraproducts_mod.paraproduct_apply(sym, f, phi, psi), g)
        rhs = inner_product(f, paraproducts_mod.paraproduct_adjoint_apply(sym, g, phi, psi))
        gap = max(gap, abs(complex(lhs) - complex(rhs)))
    ok = (
        rel <= cfg.tol("pp_symbol_rel")
        and adj_const <= cfg.tol("pp_adjoint_constant")
        and gap <= cfg.tol("pp_adjointness")
    )
    records.append(
        _record(
            "paraproduct_identities",
            None,
            ok,
            {"symbol_rel_error": rel, "adjoint_constant_max": adj_const, "adjointness_gap": gap, "m_phi": phi.m_phi},
            {
                "pp_symbol_rel": cfg.tol("pp_symbol_rel"),
                "pp_adjoint_constant": cfg.tol("pp_adjoint_constant"),
                "pp_adjointness": cfg.tol("pp_adjointness"),
            },
            ctx.grid_meta(),
        )
    )
    # compactness dichotomy on a wide coarse lattice
    pgrid = SpatialGrid(2048.0, 4096)
    pfg = make_frame_grid(pgrid, 2.0, 1024.0, s=0.25, L_b=1024.0, cone_factor=0.0)
    radii = np.arange(0.0, 5.5, 0.5)
    for ex in carleson_mod.bmo_examples(pgrid):
        if ex.label == "zero":
            continue
        f = SampledFunction.from_callable(pgrid, ex.evaluator)
        tf, _spec = paraproducts_mod.paraproduct_compactness(
            f, phi, psi, pfg, radii, label=ex.label, keep_witnesses=False, seed=cfg.seed
        )
        ratio = tf.ratio()
        if ex.expected_class == "CMO":
            ok = ratio < cfg.tol("pp_vanishing_ratio")
            tol_key = "pp_vanishing_ratio"
        else:
            ok = ratio > cfg.tol("pp_nonvanishing_ratio")
            tol_key = "pp_nonvanishing_ratio"
        records.append(
            _record(
                "paraproduct_compactness",
                ex.label,
                ok,
                {"ratio": ratio, "expected_class": ex.expected_class, "verdict_trend": tf.verdict},
                {tol_key: cfg.tol(tol_key)},
                {"L": pgrid.L, "N": pgrid.N, "a_min": 2.0, "a_max": 1024.0, "s": 0.25, "n_nodes": pfg.n_nodes},
            )
        )
        profiles[f"paraproduct_tail_{ex.label}"] = {
            "columns": ["R", "value"],
            "rows": [[float(r), float(v)] for r, v in zip(tf.radii, tf.values)],
        }
    return records, profiles


def _diag_decomposition(cfg: SuiteConfig, ctx: _Context):
    records = []
    grid, fgrid, psi, phi = ctx.grid, ctx.fgrid, ctx.psi, ctx.phi
    rng = np.random.default_rng(cfg.seed)
    # Hilbert degenerates to S = T
    H = get_model("hilbert").kernel
    dec_h = paraproducts_mod.decompose(H, phi, psi, fgrid, grid)
    f = SampledFunction(grid, rng.standard_normal(grid.N))
    s_minus_t = float(
        np.max(np.abs(dec_h.apply_s(f).values - dec_h.apply_t(f).values))
    )
    # reconstruction for the damped model
    D = get_model("damped_hilbert_1").kernel
    dec = paraproducts_mod.decompose(D, phi, psi, fgrid, grid)
    gap = 0.0
    for _ in range(3):
        fv = SampledFunction(grid, rng.standard_normal(grid.N))
        gv = SampledFunction(grid, rng.standard_normal(grid.N))
        lhs = complex(inner_product(dec.apply_t(fv), gv))
        rhs = complex(
            inner_product(dec.apply_s(fv), gv)
            + inner_product(dec.apply_p1(fv), gv)
            + inner_product(dec.apply_p2_adjoint(fv), gv)
        )
        gap = max(gap, abs(lhs - rhs))
    # paired S1 smallness
    s1 = dec.s_applied_to_constant()
    t1_inf = float(np.max(np.abs(dec.t1.values)))
    worst = 0.0
    for p in (
        GroupPoint(1.0, 0.0),
        GroupPoint(0.5, 2.0),
        GroupPoint(2.0, -4.0),
        GroupPoint(1.0, 6.0),
        GroupPoint(4.0, 0.0),
    ):
        w = frame_element(psi, p, grid)
        l1 = float(np.sum(np.abs(w.values)) * grid.h)
        worst = max(worst, abs(complex(inner_product(s1, w))) / (l1 * t1_inf))
    ok = (
        s_minus_t <= cfg.tol("decomp_hilbert")
        and gap <= cfg.tol("decomp_reconstruction")
        and worst <= cfg.tol("decomp_s1_rel")
    )
    records.append(
        _record(
            "decomposition",
            "damped_hilbert_1",
            ok,
            {
                "hilbert_s_minus_t": s_minus_t,
                "reconstruction_gap": gap,
                "paired_s1_ratio": worst,
                "t1_truncation_error": dec.t1_truncation_error,
                "m_phi": phi.m_phi,
            },
            {
                "decomp_hilbert": cfg.tol("decomp_hilbert"),
                "decomp_reconstruction": cfg.tol("decomp_reconstruction"),
                "decomp_s1_rel": cfg.tol("decomp_s1_rel"),
            },
            ctx.grid_meta(),
        )
    )
    return records, {}


_DIAGNOSTICS = {
    "frame": _diag_frame,
    "pv": _diag_pv,
    "decay": _diag_decay,
    "schur": _diag_schur,
    "weak_compactness": _diag_weak_compactness,
    "rk_tail": _diag_rk_tail,
    "carleson": _diag_carleson,
    "paraproduct": _diag_paraproduct,
    "decomposition": _diag_decomposition,
}


def run_suite(cfg: SuiteConfig) -> Report:
    """Execute the selected diagnostics; failures never abort the run."""
    cfg.validate()
    report = Report(config=cfg.to_dict(), seed=cfg.seed)
    if not cfg.diagnostics:
        return report
    ctx = _Context(cfg)
    for name in DIAGNOSTIC_NAMES:
        if name not in cfg.diagnostics:
            continue
        records, profiles = _DIAGNOSTICS[name](cfg, ctx)
        report.records.extend(records)
        report.profiles.update(profiles)
    return report


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def emit(report: Report, out_dir: str) -> list[str]:
    """Write report.json, per-profile CSVs, and summary.txt; byte-stable."""
    os.makedirs(out_dir, exist_ok=True)
    written = []

    json_path = os.path.join(out_dir, "report.json")
    payload = {
        "config": report.config,
        "seed": report.seed,
        "verdict": report.verdict,
        "records": report.records,
    }
    with open(json_path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(json_path)

    for name in sorted(report.profiles):
        prof = report.profiles[name]
        path = os.path.join(out_dir, f"{name}.csv")
        with open(path, "w") as fh:
            fh.write(",".join(prof["columns"]) + "\n")
            for row in prof["rows"]:
                fh.write(",".join(_fmt(float(v)) for v in row) + "\n")
        written.append(path)

    summary_path = os.path.join(out_dir, "summary.txt")
    with open(summary_path, "w") as fh:
        fh.write(f"suite verdict: {report.verdict} (seed {report.seed})\n")
        for rec in report.records:
            op = f" [{rec['operator']}]" if rec["operator"] else ""
            vals = " ".join(
                f"{k}={_fmt(v) if isinstance(v, float) else v}"
                for k, v in sorted(rec["values"].items())
            )
            fh.write(f"{rec['verdict']:4s} {rec['name']}{op}: {vals}\n")
    written.append(summary_path)
    return written
