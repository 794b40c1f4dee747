"""Command-line front end: fixtures, violation constructions, suites and CSV curves."""
from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .fixtures import table1
from .locc import LocalMeasurement
from .measures import QUBIT_MEASURES, MeasureKind, MeasureSpec
from .states import PureState
from .suites import SUITES
from .violations import (
    CASE3_POINTS,
    ViolationProbe,
    case1_fixture,
    case2_profile,
    case2_violation,
    case3_gap,
    convexity_sign,
    entropic_sign,
    triangle_violation_witness,
)
from .hybrid import hybrid_area_sweep

SCHEMA = "tri-entangle/1"
FIGURE_TARGETS = ("convexity-profiles", "case2-profiles", "hybrid-surface")
VIOLATION_MODES = ("case1", "case2", "case3", "lemmaS2")
GAP_TOL = 3e-3
_ENTROPIC = (MeasureKind.VON_NEUMANN, MeasureKind.TSALLIS, MeasureKind.RENYI2)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 0
    samples: int | None = None
    alpha: float | None = None
    measure: str | None = None
    q: float = 2.0
    tolerance: float | None = None
    output_format: str | None = None
    output_path: str | None = None
    target: str | None = None

    def specs(self, alpha: float) -> list[MeasureSpec]:
        if self.measure is None:
            return [s.with_alpha(alpha) for s in QUBIT_MEASURES]
        try:
            return [MeasureSpec.parse(self.measure, alpha, self.q)]
        except ValueError as exc:
            raise UsageError(str(exc)) from None


# -- serialization -------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, PureState):
        return {"dims": list(obj.dims), "re": obj.amplitudes.real.tolist(),
                "im": obj.amplitudes.imag.tolist()}
    if isinstance(obj, LocalMeasurement):
        return {"party": obj.party,
                "kraus": [{"re": k.real.tolist(), "im": k.imag.tolist()} for k in obj.kraus]}
    return obj


def to_json(report: dict) -> str:
    return json.dumps(_jsonable({"schema": SCHEMA, **report}), sort_keys=True, indent=2) + "\n"


def _flat(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flat(v, key + "."))
        else:
            out[key] = json.dumps(v, sort_keys=True) if isinstance(v, list) else v
    return out


def to_csv(report: dict) -> str:
    """Rows become CSV records; a report without rows becomes key,value pairs."""
    buf = io.StringIO()
    data = _jsonable(report)
    rows = data.get("rows")
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        flat = [_flat(r) for r in rows]
        fields = list(flat[0])
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in sorted(_flat(data).items()):
            w.writerow([k, v])
    return buf.getvalue()


def to_table(report: dict) -> str:
    data = _jsonable(report)
    rows = data.get("rows")
    lines = []
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        flat = [_flat(r) for r in rows]
        fields = list(flat[0])
        cells = [[_fmt(r.get(f)) for f in fields] for r in flat]
        widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
        lines.append("  ".join(f.ljust(w) for f, w in zip(fields, widths)))
        lines.extend("  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells)
        data = {k: v for k, v in data.items() if k != "rows"}
    for k, v in sorted(_flat(data).items()):
        lines.append(f"{k}: {_fmt(v)}")
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# -- commands ------------------------------------------------------------------


def cmd_table1(cfg: RunConfig) -> dict:
    res = table1()
    tol = cfg.tolerance if cfg.tolerance is not None else 5e-4
    rows = [{**c, "pass": abs(c["deviation"]) <= tol} for c in res["cells"]]
    return {
        "command": "table1",
        "a2_binding": res["a2_binding"],
        "a2_candidate_max_deviation": res["a2_candidate_max_deviation"],
        "tolerance": tol,
        "rows": rows,
        "passed": all(r["pass"] for r in rows),
    }


def _case1(cfg: RunConfig) -> dict:
    f = case1_fixture()
    want0, want1 = np.array([1 / 4, 1 / 8, 1 / 8]), np.array([1 / 3, 1 / 6, 1 / 6])
    lam0, lam1 = np.asarray(f["lambdas_initial"]), np.asarray(f["lambdas_branch1"])
    checks = {
        "lambdas_initial": bool(np.max(np.abs(lam0 - want0)) <= 1e-12),
        "lambdas_branch1": bool(np.max(np.abs(lam1 - want1)) <= 1e-12),
        "branch_area_increases": bool(f["area_branch1"] > f["area_initial"]),
        "ensemble_gap_nonnegative": bool(f["gap"] >= -1e-9),
    }
    return {
        "state": f["state"], "measurement": f["measurement"],
        "probabilities": list(f["outcome"].probabilities),
        "lambdas_initial": lam0, "lambdas_branch1": lam1,
        "area_initial": f["area_initial"], "area_branch1": f["area_branch1"],
        "gap": f["gap"], "checks": checks, "passed": all(checks.values()),
    }


def _case2(cfg: RunConfig) -> dict:
    alpha = 0.75 if cfg.alpha is None else cfg.alpha
    if not 0.5 < alpha < 1:
        raise UsageError(f"case2 needs 1/2 < alpha < 1 (got {alpha}); outside that window "
                         "the area is either monotone or the construction degenerates")
    rows = []
    for spec in cfg.specs(alpha):
        r = case2_violation(spec)
        rows.append({"measure": spec.label, "alpha": alpha, "beta": r.beta, "y2": r.y2,
                     "p2": r.p2, "onset": r.onset, "gap": r.gap, "pass": r.gap < -1e-8})
    return {"rows": rows, "passed": all(r["pass"] for r in rows)}


def _case3(cfg: RunConfig) -> dict:
    if cfg.alpha is not None and cfg.alpha != 1.0:
        raise UsageError("case3 reference points are defined at alpha = 1 only")
    tol = cfg.tolerance if cfg.tolerance is not None else GAP_TOL
    if cfg.measure is None:
        keys = list(CASE3_POINTS)
    else:
        spec = cfg.specs(1.0)[0]
        keys = [k for k, p in CASE3_POINTS.items() if p.spec.kind is spec.kind]
        if not keys:
            raise UsageError(f"no case3 reference point for measure {cfg.measure!r}; "
                             f"available: {', '.join(CASE3_POINTS)}")
    rows = []
    for k in keys:
        p = CASE3_POINTS[k]
        gap = case3_gap(p)
        rows.append({"measure": p.spec.label, "alpha": 1.0, "gap": gap, "reference": p.gap,
                     "deviation": gap - p.gap, "pass": abs(gap - p.gap) <= tol,
                     "l": [p.state.l0, p.state.l1, p.state.l2, p.state.l3, p.state.l4],
                     "varphi": p.state.varphi,
                     "angles": [p.params.phi1, p.params.phi2, p.params.psi1, p.params.psi2]})
    return {"tolerance": tol, "rows": rows, "passed": all(r["pass"] for r in rows)}


def _lemma_s2(cfg: RunConfig) -> dict:
    alpha = 1.5 if cfg.alpha is None else cfg.alpha
    if not alpha > 1:
        raise UsageError(f"lemmaS2 needs alpha > 1 (got {alpha}); for alpha <= 1 the "
                         "triangle relation always holds")
    rows = []
    for spec in cfg.specs(alpha):
        w = triangle_violation_witness(spec)
        rows.append({"measure": spec.label, "alpha": alpha, "u_alpha": w.interval.u_alpha,
                     "lambdas": list(w.lambdas), "slack": w.slack, "pass": w.slack < -1e-8,
                     "amplitudes": w.state.amplitudes.real})
    return {"rows": rows, "passed": all(r["pass"] for r in rows)}


def cmd_violations(cfg: RunConfig) -> dict:
    run = {"case1": _case1, "case2": _case2, "case3": _case3, "lemmaS2": _lemma_s2}[cfg.target]
    return {"command": "violations", "mode": cfg.target, **run(cfg)}


def cmd_property_suite(cfg: RunConfig) -> dict:
    fn = SUITES.get(cfg.target)
    if fn is None:
        raise UsageError(f"unknown suite {cfg.target!r}; choose from {', '.join(SUITES)}")
    params = inspect.signature(fn).parameters
    kwargs = {}
    if "seed" in params:
        kwargs["seed"] = cfg.seed
    if cfg.samples is not None:
        kwargs["samples" if "samples" in params else "n"] = cfg.samples
    if cfg.alpha is not None:
        if "alphas" in params:
            kwargs["alphas"] = (cfg.alpha,)
        elif "alpha" in params:
            kwargs["alpha"] = cfg.alpha
    if cfg.measure is not None and "measures" in params:
        kwargs["measures"] = tuple(cfg.specs(1.0))
    if cfg.tolerance is not None and "tol" in params:
        kwargs["tol"] = cfg.tolerance
    res = fn(**kwargs)
    return {"command": "suite", "seed": cfg.seed, **res.as_dict()}


def _convexity_rows(cfg: RunConfig) -> tuple[list, bool]:
    alphas = (1.2, 1.5, 2.0) if cfg.alpha is None else (cfg.alpha,)
    n = cfg.samples or 200
    lam = np.linspace(0.5 / n, 0.5, n)
    rows, ok = [], True
    for a in alphas:
        for spec in cfg.specs(a):
            sign = entropic_sign if spec.effective_kind in _ENTROPIC else convexity_sign
            vals = np.asarray(sign(spec, lam))
            if a > 1:
                ok &= bool(vals[0] > 0)
            rows.extend({"measure": spec.label, "alpha": a, "lambda": x, "sign": v}
                        for x, v in zip(lam.tolist(), vals.tolist()))
    return rows, ok


def _case2_rows(cfg: RunConfig) -> tuple[list, bool]:
    alphas = (0.6, 0.75, 0.9) if cfg.alpha is None else (cfg.alpha,)
    if not all(0.5 < a < 1 for a in alphas):
        raise UsageError("case2-profiles needs 1/2 < alpha < 1")
    n = cfg.samples or 101
    rows, ok = [], True
    for a in alphas:
        for spec in cfg.specs(a):
            for beta in (1e-4, 1e-8, 1e-12):
                prof = case2_profile(ViolationProbe(spec, beta, tuple(np.linspace(0.9, 1.0, n))))
                ok &= bool(np.all(np.asarray(prof["L"]) < 0))
                rows.extend({"measure": spec.label, "alpha": a, "beta": beta, "p2": p, "L": v}
                            for p, v in zip(prof["p2"], prof["L"]))
    return rows, ok


def _hybrid_rows(cfg: RunConfig) -> tuple[list, bool]:
    n = cfg.samples or 50
    grid = np.linspace(-2.0, 2.0, n)
    rows = hybrid_area_sweep(grid, alpha=0.5 if cfg.alpha is None else cfg.alpha)
    ok = all(r["triangle_holds"] and r["within_bound"] for r in rows)
    ok &= all(r["area"] <= 1e-10 for r in rows if r["alpha1"] == r["alpha2"])
    return rows, ok


def cmd_figures(cfg: RunConfig) -> dict:
    run = {"convexity-profiles": _convexity_rows, "case2-profiles": _case2_rows,
           "hybrid-surface": _hybrid_rows}[cfg.target]
    rows, ok = run(cfg)
    return {"command": "figures", "target": cfg.target, "rows": rows, "passed": ok}


COMMANDS = {"table1": cmd_table1, "violations": cmd_violations,
            "suite": cmd_property_suite, "figures": cmd_figures}
DEFAULT_FORMAT = {"table1": "json", "violations": "json", "suite": "json", "figures": "csv"}


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--alpha", type=float, default=None)
    common.add_argument("--measure", default=None,
                        help="W, C2, N2, S, T, R, I or C (default: all qubit measures)")
    common.add_argument("--q", type=float, default=2.0, help="Tsallis index")
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "table"))
    common.add_argument("--out", dest="output_path", default=None)

    parser = argparse.ArgumentParser(prog="trientangle",
                                     description="Triangle-area entanglement toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("table1", parents=[common], help="reproduce the three-state table")
    p = sub.add_parser("violations", parents=[common], help="run a violation construction")
    p.add_argument("--mode", dest="target", choices=VIOLATION_MODES, required=True)
    p = sub.add_parser("suite", parents=[common], help="run a randomized property suite")
    p.add_argument("target", metavar="NAME", help=", ".join(SUITES))
    p = sub.add_parser("figures", parents=[common], help="emit curve data as CSV")
    p.add_argument("target", choices=FIGURE_TARGETS)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.samples is not None and args.samples <= 0:
        parser.error("--samples must be positive")
    if args.seed < 0:
        parser.error("--seed must be non-negative")
    if args.measure is not None:
        try:
            MeasureSpec.parse(args.measure, q=args.q)
        except ValueError as exc:
            parser.error(str(exc))
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    try:
        report = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        parser.error(str(exc))
    fmt = cfg.output_format or DEFAULT_FORMAT[cfg.command]
    text = {"json": to_json, "csv": to_csv, "table": to_table}[fmt](report)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.get("passed") else 1


if __name__ == "__main__":
    sys.exit(main())
