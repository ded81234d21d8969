"""Command-line front end.

Subcommands map one-to-one onto the library pipelines; every run emits
a deterministic JSON report (stdout or --output), plus a CSV summary
and PNG figures next to the report file when --output is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .catalog import catalog_entries, catalog_metric
from .curvature import CurvatureJets, curvature_pack
from .errors import ConfigError, CurvkitError
from .frames import (
    chern_basis_search,
    chern_expansion_check,
    frame_components,
    orthonormal_frame,
    rotate_curvature,
    singer_thorpe_check,
)
from .identities import identity_residual, identity_trace_check, three_dim_norm_identity
from .quadrature import euler_characteristic
from .report import CheckRecord, Report
from .variation import (
    DeformationField,
    VARIATION_SELECTORS,
    deformation_analytic,
    deformation_fd,
    integral_variation_suite,
)

COMMANDS = (
    "verify-identity",
    "gauss-bonnet",
    "variation-check",
    "chern-basis",
    "three-dim",
    "catalog",
)

_DEFAULT_METRIC = {
    "verify-identity": "sphere4",
    "gauss-bonnet": "sphere4",
    "variation-check": "torus_perturbed",
    "chern-basis": "sphere4",
    "three-dim": "constcurv3",
    "catalog": None,
}

_METRIC_PARAM_FLAGS = {
    "r": float,
    "c": float,
    "c1": float,
    "c2": float,
    "eps": float,
    "scale": float,
    "dim": int,
    "inner": str,
    "metric_seed": int,
}

_DEFORMATION_KINDS = ("waves", "polynomial", "conformal")


@dataclass
class RunConfig:
    """Effective settings of one CLI run (defaults plus overrides)."""

    command: str = ""
    metric: str = ""
    params: dict = field(default_factory=dict)
    points: int = 20
    seed: int = 0
    deformation: str = "waves"
    deformation_seed: int = 0
    amplitude: float = 0.05
    dt: float = 1e-3
    nodes: int = 24
    node_budget: int = 96
    restarts: int = 32
    iters: int = 500
    selectors: list = None
    tol_identity: float = 1e-9
    tol_trace: float = 1e-12
    tol_euler: float = 1e-3
    tol_variation: float = 1e-6
    tol_expansion: float = 1e-9
    min_fd_order: float = 1.9
    output: str = ""
    figures: bool = True

    def as_dict(self):
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out


_POSITIVE_FIELDS = (
    "points",
    "dt",
    "nodes",
    "node_budget",
    "restarts",
    "iters",
    "amplitude",
    "tol_identity",
    "tol_trace",
    "tol_euler",
    "tol_variation",
    "tol_expansion",
    "min_fd_order",
)


def validate_config(cfg: RunConfig):
    for name in _POSITIVE_FIELDS:
        value = getattr(cfg, name)
        if not isinstance(value, (int, float)) or not value > 0:
            raise ConfigError(f"config field {name!r} must be positive, got {value!r}")
    if cfg.deformation not in _DEFORMATION_KINDS:
        raise ConfigError(
            f"deformation must be one of {_DEFORMATION_KINDS}, got {cfg.deformation!r}"
        )
    if cfg.selectors is not None:
        bad = [s for s in cfg.selectors if s not in VARIATION_SELECTORS]
        if bad:
            raise ConfigError(f"unknown variation selectors {bad}")
    if not isinstance(cfg.params, dict):
        raise ConfigError("config field 'params' must be an object")
    return cfg


def load_config(path) -> RunConfig:
    """Parse a JSON config file; absent fields keep their defaults."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    cfg = RunConfig(**data)
    return validate_config(cfg)


# ----------------------------------------------------------------------
# command pipelines
# ----------------------------------------------------------------------


def _sample_points(entry, cfg):
    rng = np.random.default_rng(cfg.seed)
    return entry.sample_points(cfg.points, rng)


def run_verify_identity(cfg):
    entry = catalog_metric(cfg.metric, **cfg.params)
    pts = _sample_points(entry, cfg)
    pack = curvature_pack(entry.metric, pts)
    rep = identity_residual(pack, tolerance=cfg.tol_identity)
    per_point = np.max(np.abs(rep.residual), axis=(-1, -2))
    scale = max(rep.scale, 1e-12)
    records = [
        CheckRecord(
            f"identity-residual[{entry.name}]",
            "identity-residual",
            rep.relative,
            cfg.tol_identity,
            rep.passed,
            {"max_abs": rep.max_abs, "scale": rep.scale, "points": int(cfg.points)},
        )
    ]
    trace = identity_trace_check(pack)
    trace_rel = float(np.max(np.abs(trace))) / scale
    records.append(
        CheckRecord(
            f"identity-trace[{entry.name}]",
            "identity-trace",
            trace_rel,
            cfg.tol_trace,
            trace_rel <= cfg.tol_trace,
        )
    )
    figure_data = {
        "kind": "residual-scatter",
        "groups": {
            "identity": (per_point / scale).tolist(),
            "trace": (np.abs(trace) / scale).tolist(),
        },
        "tolerance": cfg.tol_identity,
        "title": f"pointwise residuals on {entry.name}",
    }
    return records, figure_data


def run_gauss_bonnet(cfg):
    entry = catalog_metric(cfg.metric, **cfg.params)
    result = euler_characteristic(
        entry, nodes=cfg.nodes, atol=cfg.tol_euler / 10.0, node_budget=cfg.node_budget
    )
    reference = entry.reference.get("euler")
    if reference is None:
        err = 0.0
        passed = True
    else:
        err = abs(result.chi - reference)
        passed = err <= cfg.tol_euler
    records = [
        CheckRecord(
            f"euler-number[{entry.name}]",
            "euler-number",
            result.chi,
            cfg.tol_euler,
            passed,
            {
                "reference": reference,
                "error": err,
                "raw_integral": result.raw_integral,
                "nodes_per_axis": result.nodes_per_axis,
                "history": [[int(n), v] for n, v in result.history],
            },
        )
    ]
    figure_data = {
        "kind": "refinement",
        "histories": {entry.name: result.history},
        "references": {entry.name: reference},
        "title": f"Euler number refinement for {entry.name}",
    }
    return records, figure_data


_RATE_TAGS = {
    "inverse_metric": "inverse-metric-rate",
    "volume_element": "volume-density-rate",
    "christoffel": "connection-rate",
    "riemann": "curvature-rate",
    "ricci": "ricci-rate",
    "scalar": "scalar-rate",
}


def run_variation_check(cfg):
    entry = catalog_metric(cfg.metric, **cfg.params)
    base = entry.metric
    h = getattr(DeformationField, cfg.deformation)(
        base, seed=cfg.deformation_seed, amplitude=cfg.amplitude
    )
    pts = _sample_points(entry, cfg)
    steps = (2.0 * cfg.dt, cfg.dt, 0.5 * cfg.dt)
    records = []
    step_errors = {}
    for quantity, tag in _RATE_TAGS.items():
        if quantity == "volume_element" and not base.riemannian:
            continue
        analytic = deformation_analytic(quantity, h, pts)
        fd = deformation_fd(quantity, h, pts, steps=steps, reference=analytic)
        errs = [float(np.max(np.abs(d - analytic))) for d in fd.raw]
        rel = errs[1] / fd.scale
        order_ok = fd.min_order >= cfg.min_fd_order
        records.append(
            CheckRecord(
                f"{tag}[{entry.name}/{cfg.deformation}]",
                tag,
                rel,
                cfg.tol_variation,
                rel <= cfg.tol_variation and order_ok,
                {
                    "observed_order": _finite(fd.min_order),
                    "scale": fd.scale,
                    "steps": list(fd.steps),
                    "errors": errs,
                },
            )
        )
        step_errors[quantity] = (list(fd.steps), errs)
    figure_data = {
        "kind": "convergence",
        "step_errors": step_errors,
        "title": f"finite-difference convergence on {entry.name}",
    }

    selectors = cfg.selectors
    run_integrals = all(base.box.periodic) and (selectors is None or selectors)
    if run_integrals:
        suite = integral_variation_suite(
            entry, h, which=selectors, dt=cfg.dt, nodes=cfg.nodes
        )
        pairs = {}
        tols = {}
        selector_tags = {
            "scalar_2d": "integral-rate-scalar-2d",
            "curv_norm": "integral-rate-curv-norm",
            "ricci_norm": "integral-rate-ricci-norm",
            "tau_sq": "integral-rate-tau-sq",
            "gauss_bonnet_total": "integral-rate-gauss-bonnet",
        }
        for rec in suite:
            tag = selector_tags[rec.which]
            records.append(
                CheckRecord(
                    f"{tag}[{entry.name}/{cfg.deformation}]",
                    tag,
                    rec.diff,
                    rec.tolerance,
                    rec.passed,
                    {
                        "lhs": rec.lhs,
                        "rhs": rec.rhs,
                        "dt": rec.dt,
                        "nodes": list(rec.nodes),
                    },
                )
            )
            pairs[rec.which] = rec.diff
            tols[rec.which] = rec.tolerance
        figure_data = [
            figure_data,
            {
                "kind": "comparison",
                "pairs": pairs,
                "tolerances": tols,
                "title": f"integral variation residuals on {entry.name}",
            },
        ]
    return records, figure_data


def run_chern_basis(cfg):
    entry = catalog_metric(cfg.metric, **cfg.params)
    if not entry.metric.riemannian:
        raise ConfigError("chern-basis search is defined for Riemannian entries")
    pts = _sample_points(entry, cfg)
    pack = curvature_pack(entry.metric, pts)
    objectives = []
    expansion_rels = []
    st_values = []
    check_einstein = bool(entry.reference.get("einstein"))
    for k in range(cfg.points):
        frame = orthonormal_frame(pack.g[k])
        r = frame_components(pack.riemann[k], frame)
        result = chern_basis_search(r, restarts=cfg.restarts, iters=cfg.iters)
        objectives.append(result.objective / result.threshold)
        if not result.success:
            expansion_rels.append(float("inf"))
            continue
        rotated = rotate_curvature(r, result.rotation, check=False)
        ricci = frame_components(pack.ricci[k], frame)
        ricci_rot = frame_components(ricci, result.rotation)
        checks = chern_expansion_check(
            rotated, ricci=ricci_rot, tau=float(pack.tau[k]), tolerance=cfg.tol_expansion
        )
        expansion_rels.append(max(c.relative for c in checks))
        if check_einstein:
            st = singer_thorpe_check(
                rotated, ricci=ricci_rot, tau=float(pack.tau[k]),
                tolerance=cfg.tol_expansion,
            )
            st_values.append(
                max(st.einstein_max, st.chern_max, st.mixed_max, st.pairing_max)
                / max(st.scale, 1e-12)
            )
    worst_obj = float(np.max(objectives))
    worst_exp = float(np.max(expansion_rels))
    records = [
        CheckRecord(
            f"chern-zero-patterns[{entry.name}]",
            "chern-zero-patterns",
            worst_obj,
            1.0,
            worst_obj <= 1.0,
            {"points": int(cfg.points), "restarts": cfg.restarts},
        ),
        CheckRecord(
            f"chern-expansion[{entry.name}]",
            "chern-expansion",
            worst_exp,
            cfg.tol_expansion,
            worst_exp <= cfg.tol_expansion,
        ),
    ]
    groups = {
        "search objective / threshold": objectives,
        "expansion residual": expansion_rels,
    }
    if st_values:
        worst_st = float(np.max(st_values))
        records.append(
            CheckRecord(
                f"singer-thorpe[{entry.name}]",
                "singer-thorpe",
                worst_st,
                cfg.tol_expansion,
                worst_st <= cfg.tol_expansion,
            )
        )
        groups["normal-form residual"] = st_values
    figure_data = {
        "kind": "residual-scatter",
        "groups": groups,
        "tolerance": cfg.tol_expansion,
        "title": f"curvature-adapted frames on {entry.name}",
    }
    return records, figure_data


def run_three_dim(cfg):
    entry = catalog_metric(cfg.metric, **cfg.params)
    pts = _sample_points(entry, cfg)
    report = three_dim_norm_identity(CurvatureJets(entry.metric, pts, order=2).pack)
    records = [
        CheckRecord(
            f"three-dim-reconstruction[{entry.name}]",
            "three-dim-reconstruction",
            report.max_relative_defect,
            cfg.tol_identity,
            report.max_relative_defect <= cfg.tol_identity,
        ),
        CheckRecord(
            f"three-dim-norm[{entry.name}]",
            "three-dim-norm",
            report.max_relative_value,
            cfg.tol_identity,
            report.max_relative_value <= cfg.tol_identity,
        ),
        CheckRecord(
            f"three-dim-norm-sq[{entry.name}]",
            "three-dim-norm-sq",
            report.max_relative_consistency,
            cfg.tol_identity,
            report.max_relative_consistency <= cfg.tol_identity,
        ),
    ]
    figure_data = {
        "kind": "residual-scatter",
        "groups": {
            "norm combination": np.atleast_1d(np.abs(report.value) / report.scale).tolist(),
            "defect": np.atleast_1d(np.abs(report.defect_sq) / report.scale).tolist(),
        },
        "tolerance": cfg.tol_identity,
        "title": f"3D reconstruction identities on {entry.name}",
    }
    return records, figure_data


def run_catalog(cfg):
    records = []
    for entry in catalog_entries():
        records.append(
            CheckRecord(
                f"catalog-entry[{entry.name}]",
                "catalog-entry",
                0.0,
                1.0,
                True,
                {
                    "dim": entry.dim,
                    "signature": list(entry.metric.signature),
                    "closed": entry.closed,
                    "params": entry.params,
                    "reference": entry.reference,
                },
            )
        )
    return records, None


_RUNNERS = {
    "verify-identity": run_verify_identity,
    "gauss-bonnet": run_gauss_bonnet,
    "variation-check": run_variation_check,
    "chern-basis": run_chern_basis,
    "three-dim": run_three_dim,
    "catalog": run_catalog,
}


def _finite(x):
    return float(x) if x == x and abs(x) != float("inf") else repr(x)


# ----------------------------------------------------------------------
# argument handling and output
# ----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curvkit",
        description="Verify curvature identities of the bundled metric catalog.",
    )
    sub = parser.add_subparsers(dest="command")
    for command in COMMANDS:
        p = sub.add_parser(command, help=f"run the {command} pipeline")
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--output", help="report path; CSV and figures go next to it")
        p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
        if command == "catalog":
            continue
        p.add_argument("--metric", help="catalog entry name")
        p.add_argument("--points", type=int, help="number of sample points")
        p.add_argument("--seed", type=int, help="point sampling seed")
        for flag, kind in _METRIC_PARAM_FLAGS.items():
            p.add_argument(f"--{flag.replace('_', '-')}", type=kind, dest=f"param_{flag}")
        if command == "gauss-bonnet":
            p.add_argument("--nodes", type=int, help="starting nodes per axis")
        if command == "variation-check":
            p.add_argument("--deformation", choices=_DEFORMATION_KINDS)
            p.add_argument("--deformation-seed", type=int)
            p.add_argument("--amplitude", type=float)
            p.add_argument("--dt", type=float)
            p.add_argument("--nodes", type=int, help="nodes per axis for integrals")
        if command == "chern-basis":
            p.add_argument("--restarts", type=int)
            p.add_argument("--iters", type=int)
    return parser


def _merge_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    cfg.command = args.command
    for name in (
        "metric",
        "points",
        "seed",
        "deformation",
        "deformation_seed",
        "amplitude",
        "dt",
        "nodes",
        "restarts",
        "iters",
        "output",
    ):
        value = getattr(args, name, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "no_figures", False):
        cfg.figures = False
    params = dict(cfg.params)
    for flag in _METRIC_PARAM_FLAGS:
        value = getattr(args, f"param_{flag}", None)
        if value is not None:
            params[{"metric_seed": "seed"}.get(flag, flag)] = value
    cfg.params = params
    if not cfg.metric:
        cfg.metric = _DEFAULT_METRIC.get(args.command) or ""
    return validate_config(cfg)


def _render_figures(figure_data, out_path, stem):
    from . import figures

    written = []
    items = figure_data if isinstance(figure_data, list) else [figure_data]
    for i, item in enumerate(items):
        if not item:
            continue
        path = out_path.parent / f"{stem}-fig{i + 1}.png"
        kind = item["kind"]
        if kind == "residual-scatter":
            figures.residual_scatter(
                item["groups"], item["tolerance"], path, item["title"]
            )
        elif kind == "refinement":
            figures.refinement_plot(
                item["histories"], item["references"], path, item["title"]
            )
        elif kind == "convergence":
            figures.convergence_plot(item["step_errors"], path, item["title"])
        elif kind == "comparison":
            figures.comparison_bars(
                item["pairs"], item["tolerances"], path, item["title"]
            )
        written.append(str(path))
    return written


def apply_thread_setting():
    """Honour CURVKIT_THREADS for the numeric back ends that allow it."""
    value = os.environ.get("CURVKIT_THREADS")
    if not value:
        return
    try:
        count = max(1, int(value))
    except ValueError:
        raise ConfigError(f"CURVKIT_THREADS must be an integer, got {value!r}") from None
    for name in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(name, str(count))
    try:
        import numba

        numba.set_num_threads(count)
    except Exception:
        pass


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    try:
        apply_thread_setting()
        cfg = _merge_config(args)
        records, figure_data = _RUNNERS[cfg.command](cfg)
        config_echo = cfg.as_dict()
        # report bytes must not depend on where the report is written
        config_echo.pop("output")
        config_echo.pop("figures")
        report = Report(cfg.command, config_echo, records)
        if cfg.output:
            out_path = Path(cfg.output)
            out_path.parent.mkdir(parents=True, exist_ok=True)
            out_path.write_text(report.to_json())
            stem = out_path.stem
            (out_path.parent / f"{stem}.csv").write_text(report.to_csv())
            if cfg.figures and figure_data:
                _render_figures(figure_data, out_path, stem)
        else:
            sys.stdout.write(report.to_json())
        return report.exit_code()
    except CurvkitError as exc:
        print(f"curvkit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"curvkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
