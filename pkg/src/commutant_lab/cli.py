"""Batch driver: construct pairs, run the verification pipeline, write reports.

Usage:
    commutant-lab <pair|verify|commutator|spectrum|normality|sweep>
                  --config PATH [--out DIR] [--dump] [--quiet]

The config is a single JSON object; reports are written as report.json
(full, schema-versioned) and summary.csv (one row per check: name, value,
tolerance, pass).  Identical config + seed produces byte-identical files.
Exit status is 0 iff every check passed its tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import reportio
from .discretize import (
    LOBATTO,
    build_grid,
    collocation_L,
    export_matrix_csv,
    nystrom_K,
    nystrom_K_pv,
)
from .errors import CommutantError, ConfigError
from .families import (
    CommutingPair,
    FamilyParams,
    General,
    check_admissibility,
    classify_trivial,
    make_pair,
    params_from_json,
    params_to_json,
)
from .kernels import kernel_values
from .normality import (
    adjoint_coeffs,
    commute_conditions,
    is_normal,
    is_selfadjoint,
    interior_points,
)
from .residuals import (
    lemma_coeff_check,
    residual_R1,
    residual_R2,
    singular_relation_check,
    taylor_relation_check,
)
from .spectra import commutator_norm, joint_diagonalization

DEFAULT_TOLERANCES = {
    "boundary_abs": 1e-12,
    "r1_rel": 1e-9,
    "r2_rel": 1e-9,
    "taylor_abs": 1e-10,
    "lemma_abs": 1e-9,
    "singular_relation_abs": 1e-10,
    "commutator_rel": 1e-8,
    "commutator_pv_rel": 1e-3,
    "rowsum_abs": 1e-12,
    "offdiag": 1e-6,
    "rayleigh_rel": 1e-6,
    "involution_abs": 1e-13,
    "self_commute_abs": 1e-12,
    "normal_conditions": 1e-10,
}


@dataclass
class RunConfig:
    command: str
    params: FamilyParams | None
    n: int = 64
    grid_kind: str = LOBATTO
    m: int = 8
    tolerances: dict = field(default_factory=dict)
    output_path: str = "out"
    seed: int = 0
    count: int = 25

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))


def load_config(path: str, command: str) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    tolerances = raw.get("tolerances", {})
    if any(float(v) <= 0 for v in tolerances.values()):
        raise ConfigError("tolerances must be positive")
    params = None
    if "params" in raw:
        try:
            params = params_from_json(raw["params"])
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad params block: {exc}") from exc
    n = int(raw.get("n", 64))
    if n < 2:
        raise ConfigError("n must be >= 2")
    return RunConfig(
        command=command,
        params=params,
        n=n,
        grid_kind=raw.get("grid_kind", LOBATTO),
        m=int(raw.get("m", 8)),
        tolerances=tolerances,
        output_path=raw.get("output_path", "out"),
        seed=int(raw.get("seed", 0)),
        count=int(raw.get("count", 25)),
    )


def _require_params(cfg: RunConfig) -> FamilyParams:
    if cfg.params is None:
        raise ConfigError(f"command {cfg.command!r} needs a params block")
    return cfg.params


def _sample_kernel(pair: CommutingPair, npts: int = 401):
    z = np.linspace(-2.0, 2.0, npts)
    if pair.kernel.singular:
        z = z[np.abs(z) > 1e-6]
    (kv,) = kernel_values(pair.kernel, z, orders=(0,))
    return z, kv


def cmd_pair(cfg: RunConfig, outdir: Path, dump: bool, summary: reportio.Summary) -> dict:
    params = _require_params(cfg)
    adm = check_admissibility(params)
    summary.add("admissible", 0.0 if adm.ok else 1.0, 0.5, passed=adm.ok)
    report: dict = {
        "params": params_to_json(params),
        "admissible": adm.ok,
        "reason": adm.reason,
        "trivial": classify_trivial(params),
    }
    if not adm.ok:
        return report
    pair = make_pair(params)
    bres = pair.op.boundary_residual()
    summary.add("boundary_abs", bres, cfg.tol("boundary_abs"))
    report["boundary_residual"] = bres
    report["singular"] = pair.kernel.singular
    report["series"] = [complex(c) for c in pair.kernel.series]
    if pair.nu is not None:
        report["nu"] = complex(pair.nu)
    z, kv = _sample_kernel(pair)
    y = np.linspace(-1.0, 1.0, 201)
    av, bv, cv = (np.asarray(f(y)) for f in (pair.op.a, pair.op.b, pair.op.c))
    reportio.write_csv(
        outdir / "kernel_samples.csv",
        ["z", "k_re", "k_im"],
        [[float(zz), float(k.real), float(k.imag)] for zz, k in zip(z, kv)],
    )
    reportio.write_csv(
        outdir / "coefficient_samples.csv",
        ["y", "a_re", "a_im", "b_re", "b_im", "c_re", "c_im"],
        [
            [float(yy), a.real, a.imag, b.real, b.imag, c.real, c.imag]
            for yy, a, b, c in zip(y, av, bv, cv)
        ],
    )
    return report


def cmd_verify(cfg: RunConfig, outdir: Path, dump: bool, summary: reportio.Summary) -> dict:
    pair = make_pair(_require_params(cfg))
    rep1 = residual_R1(pair)
    summary.add("r1_rel", rep1.max_abs / max(rep1.scale, 1e-300), cfg.tol("r1_rel"))
    rep2 = residual_R2(pair.kernel, pair.op, pair.op)
    summary.add("r2_rel", rep2.max_abs / max(rep2.scale, 1e-300), cfg.tol("r2_rel"))
    report = {
        "params": params_to_json(pair.params),
        "singular": pair.kernel.singular,
        "residual_R1": rep1.to_json(),
        "residual_R2": rep2.to_json(),
    }
    if pair.kernel.singular:
        sing = singular_relation_check(pair)
        summary.add("singular_relation_abs", sing["residual"], cfg.tol("singular_relation_abs"))
        report["singular_relation"] = {
            "residual": sing["residual"],
            "fitted_const": complex(sing["fitted_const"]),
        }
    else:
        tay = taylor_relation_check(pair, N=6)
        summary.add("taylor_abs", float(np.max(tay)), cfg.tol("taylor_abs"))
        lem = lemma_coeff_check(pair)
        worst = max(lem["b_eq_aprime"], lem["c_eq_nu_a"], lem["a_ode"])
        summary.add("lemma_abs", worst, cfg.tol("lemma_abs"))
        report["taylor_residuals"] = [float(t) for t in tay]
        report["lemma"] = {
            "b_eq_aprime": lem["b_eq_aprime"],
            "c_eq_nu_a": lem["c_eq_nu_a"],
            "a_ode": lem["a_ode"],
            "nu": complex(lem["nu"]),
        }
    return report


def _build_matrices(cfg: RunConfig, pair: CommutingPair):
    grid = build_grid(cfg.n, cfg.grid_kind)
    K = nystrom_K_pv(pair, grid) if pair.kernel.singular else nystrom_K(pair, grid)
    L = collocation_L(pair.op, grid)
    return grid, K, L


def cmd_commutator(cfg: RunConfig, outdir: Path, dump: bool, summary: reportio.Summary) -> dict:
    pair = make_pair(_require_params(cfg))
    grid, K, L = _build_matrices(cfg, pair)
    singular = pair.kernel.singular
    norm = commutator_norm(K, L, interior=singular)
    tol_name = "commutator_pv_rel" if singular else "commutator_rel"
    summary.add(tol_name, norm, cfg.tol(tol_name))
    report = {
        "params": params_to_json(pair.params),
        "n": cfg.n,
        "singular": singular,
        "interior_restricted": singular,
        "commutator_rel": norm,
    }
    if singular:
        mask = grid.interior()
        rowsum = (K.entries @ np.ones(grid.n))[mask]
        target = pair.kernel.residue() * np.log((1 + grid.nodes[mask]) / (1 - grid.nodes[mask]))
        # subtract the regular part's quadrature (exact row identity holds for the pole)
        from .discretize import k_reg_values

        Z = grid.nodes[mask][:, None] - grid.nodes[None, :]
        reg = k_reg_values(pair, Z) @ grid.weights
        err = float(np.max(np.abs(rowsum - reg - target)))
        summary.add("rowsum_abs", err, cfg.tol("rowsum_abs"))
        report["rowsum_abs"] = err
    if dump:
        export_matrix_csv(K, outdir / "K_matrix.csv")
        export_matrix_csv(L, outdir / "L_matrix.csv")
    return report


def cmd_spectrum(cfg: RunConfig, outdir: Path, dump: bool, summary: reportio.Summary) -> dict:
    pair = make_pair(_require_params(cfg))
    grid, K, L = _build_matrices(cfg, pair)
    spec = joint_diagonalization(K, L, cfg.m, interior=pair.kernel.singular)
    summary.add("offdiag", spec.offdiag_energy, cfg.tol("offdiag"))
    ray = spec.rayleigh[np.argsort(-np.abs(spec.rayleigh))]
    direct = spec.K_eigenvalues_direct
    scale = float(np.max(np.abs(direct))) + 1e-300
    match = float(np.max(np.abs(ray - direct))) / scale
    summary.add("rayleigh_rel", match, cfg.tol("rayleigh_rel"))
    reportio.write_csv(
        outdir / "modes.csv",
        ["idx", "L_eig_re", "L_eig_im", "rayleigh_re", "rayleigh_im", "residual"],
        spec.rows(),
    )
    if dump:
        export_matrix_csv(K, outdir / "K_matrix.csv")
        export_matrix_csv(L, outdir / "L_matrix.csv")
    report = {
        "params": params_to_json(pair.params),
        "n": cfg.n,
        "m": cfg.m,
        "spectral": spec.to_json(),
        "rayleigh_match_rel": match,
    }
    return report


def cmd_normality(cfg: RunConfig, outdir: Path, dump: bool, summary: reportio.Summary) -> dict:
    pair = make_pair(_require_params(cfg))
    op = pair.op
    y = interior_points()
    twice = adjoint_coeffs(adjoint_coeffs(op))
    inv = 0.0
    for f, g in ((op.a, twice.a), (op.b, twice.b), (op.c, twice.c)):
        inv = max(inv, float(np.max(np.abs(np.asarray(f(y)) - np.asarray(g(y))))))
    summary.add("involution_abs", inv, cfg.tol("involution_abs"))
    self_comm = max(commute_conditions(op, op).values())
    summary.add("self_commute_abs", self_comm, cfg.tol("self_commute_abs"))
    sa_ok, sa_res = is_selfadjoint(op, tol=cfg.tol("normal_conditions"))
    rep = is_normal(op, tol=cfg.tol("normal_conditions"))
    summary.add(
        "selfadjoint_implies_normal",
        0.0 if (not rep.selfadjoint or rep.normal) else 1.0,
        0.5,
        passed=(not rep.selfadjoint or rep.normal),
    )
    return {
        "params": params_to_json(pair.params),
        "involution_abs": inv,
        "self_commute_abs": self_comm,
        "selfadjoint": sa_ok,
        "selfadjoint_residuals": sa_res,
        "normality": rep.to_json(),
    }


def cmd_sweep(cfg: RunConfig, outdir: Path, dump: bool, summary: reportio.Summary) -> dict:
    rng = np.random.default_rng(cfg.seed)
    tol = cfg.tol("r1_rel")
    rows = []
    rejections = []
    accepted = 0
    attempts = 0
    while accepted < cfg.count and attempts < 50 * cfg.count:
        attempts += 1
        lam = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        mu = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        a1 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        a2 = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) if accepted % 2 == 0 else 0j
        params = General(lam=lam, mu=mu, alpha1=a1, alpha2=a2)
        adm = check_admissibility(params)
        if not adm.ok:
            rejections.append({"attempt": attempts, "reason": adm.reason})
            continue
        if classify_trivial(params):
            rejections.append({"attempt": attempts, "reason": "trivial kernel"})
            continue
        pair = make_pair(params)
        rep = residual_R1(pair)
        rel = rep.max_abs / max(rep.scale, 1e-300)
        ok = rel <= tol
        rows.append(
            [
                accepted,
                lam.real,
                lam.imag,
                mu.real,
                mu.imag,
                a1.real,
                a1.imag,
                a2.real,
                a2.imag,
                rep.max_abs,
                rep.scale,
                rel,
                ok,
            ]
        )
        accepted += 1
    all_ok = all(r[-1] for r in rows) and accepted == cfg.count
    summary.add("sweep_pass_fraction", 0.0 if all_ok else 1.0, 0.5, passed=all_ok)
    reportio.write_csv(
        outdir / "sweep.csv",
        [
            "idx",
            "lambda_re",
            "lambda_im",
            "mu_re",
            "mu_im",
            "alpha1_re",
            "alpha1_im",
            "alpha2_re",
            "alpha2_im",
            "max_abs",
            "scale",
            "rel",
            "pass",
        ],
        rows,
    )
    return {
        "seed": cfg.seed,
        "count": cfg.count,
        "accepted": accepted,
        "attempts": attempts,
        "rejections": rejections,
        "draws": [
            {"idx": r[0], "rel": r[11], "pass": r[12]} for r in rows
        ],
    }


COMMANDS = {
    "pair": cmd_pair,
    "verify": cmd_verify,
    "commutator": cmd_commutator,
    "spectrum": cmd_spectrum,
    "normality": cmd_normality,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="commutant-lab",
        description="verify commuting convolution/differential operator pairs",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="path to a JSON run config")
    parser.add_argument("--out", default=None, help="output directory (default: config output_path)")
    parser.add_argument("--dump", action="store_true", help="export matrices as CSV")
    parser.add_argument("--quiet", action="store_true", help="suppress per-check lines")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, args.command)
        outdir = Path(args.out if args.out is not None else cfg.output_path)
        outdir.mkdir(parents=True, exist_ok=True)
        summary = reportio.Summary()
        body = COMMANDS[args.command](cfg, outdir, args.dump, summary)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (CommutantError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    report = {
        "schema": reportio.SCHEMA_VERSION,
        "command": args.command,
        "checks": summary.to_json(),
        "result": body,
    }
    reportio.write_json(outdir / "report.json", report)
    summary.write(outdir / "summary.csv")
    if not args.quiet:
        for name, value, tolerance, ok in summary.rows:
            status = "PASS" if ok else "FAIL"
            print(f"{status} {name}: {reportio.fmt_float(value)} (tol {reportio.fmt_float(tolerance)})")
    return 0 if summary.all_pass() else 1


if __name__ == "__main__":
    sys.exit(main())
