"""Randomized invariant checks shared by the CLI and the acceptance tests.

Each suite fans its samples out over a fixed number of worker threads with
seeds ``seed + worker`` and reduces the results in worker order, so output
depends only on ``(seed, samples)``.
"""
from __future__ import annotations

import functools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .gaussian import gaussian_det_relations, random_pure_tripartite_cm
from .geometry import (
    SLACK_TOL,
    _bounds,
    area_from_sides,
    ealpha_det_closed_form,
    hessian_minors,
    slacks,
)
from .hybrid import hybrid_area_sweep
from .locc import area_of_lambdas, batch_gaps, random_measurement
from .measures import QUBIT_MEASURES, MeasureSpec, measure_of_lambda
from .states import haar_amplitudes, party_impurities, qubit_lambdas

WORKERS = 4
MAX_COUNTEREXAMPLES = 20
ALPHA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    counterexamples: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checks > 0

    def record(self, example: dict):
        self.failures += 1
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(example)

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
            "stats": self.stats,
            "counterexamples": self.counterexamples,
        }


def _split(samples: int, workers: int = WORKERS) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (i < extra) for i in range(workers)]


def _fan_out(seed: int, samples: int, job: Callable[[np.random.Generator, int], dict]) -> list[dict]:
    sizes = _split(samples)
    with ThreadPoolExecutor(max_workers=WORKERS) as ex:
        futures = [ex.submit(job, np.random.default_rng(seed + w), n) for w, n in enumerate(sizes)]
        return [f.result() for f in futures]


def _amps_dump(a) -> dict:
    a = np.asarray(a)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def _haar_qubit_states(seed: int, samples: int) -> np.ndarray:
    parts = _fan_out(seed, samples, lambda rng, n: {"amps": haar_amplitudes(rng, n, 8)})
    return np.concatenate([p["amps"] for p in parts])


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    return wrapper


@_timed
def triangle_holds(seed: int = 0, samples: int = 10_000, alphas=ALPHA_GRID,
                   measures=QUBIT_MEASURES, tol: float = SLACK_TOL) -> SuiteResult:
    res = SuiteResult("triangle-holds")
    amps = _haar_qubit_states(seed, samples)
    lams = qubit_lambdas(amps)
    worst = np.inf
    for spec in measures:
        e = measure_of_lambda(spec, lams)
        for a in alphas:
            sl = slacks(e ** a).min(axis=1)
            worst = min(worst, float(sl.min()))
            res.checks += sl.size
            for i in np.flatnonzero(sl < -tol):
                res.record({"measure": spec.label, "alpha": a, "slack": float(sl[i]),
                            "amplitudes": _amps_dump(amps[i]), "seed": seed, "index": int(i)})
    res.stats = {"min_slack": worst, "samples": samples}
    return res


@_timed
def strictness(seed: int = 0, samples: int = 10_000, alphas=ALPHA_GRID[:-1],
               measures=QUBIT_MEASURES, min_lambda: float = 1e-3) -> SuiteResult:
    res = SuiteResult("strictness")
    amps = _haar_qubit_states(seed, samples)
    lams = qubit_lambdas(amps)
    mask = np.all(lams > min_lambda, axis=1)
    amps, lams = amps[mask], lams[mask]
    worst = np.inf
    for spec in measures:
        e = measure_of_lambda(spec, lams)
        for a in alphas:
            sl = slacks(e ** a).min(axis=1)
            worst = min(worst, float(sl.min()))
            res.checks += sl.size
            for i in np.flatnonzero(~(sl > 0)):
                res.record({"measure": spec.label, "alpha": a, "slack": float(sl[i]),
                            "amplitudes": _amps_dump(amps[i]), "seed": seed})
    res.stats = {"min_slack": worst, "genuinely_entangled": int(mask.sum()), "samples": samples}
    return res


@_timed
def non_obtuse(seed: int = 0, samples: int = 10_000, alphas=(0.1, 0.2, 0.3, 0.4, 0.5),
               measures=QUBIT_MEASURES, tol: float = SLACK_TOL) -> SuiteResult:
    res = SuiteResult("non-obtuse")
    amps = _haar_qubit_states(seed, samples)
    lams = qubit_lambdas(amps)
    worst = np.inf
    for spec in measures:
        e = measure_of_lambda(spec, lams)
        for a in alphas:
            s = e ** a
            # cos(theta_i) has the sign of x_j + x_k - x_i with x = side^2
            sl = slacks(s * s)
            denom = 2 * np.stack([s[:, 1] * s[:, 2], s[:, 0] * s[:, 2], s[:, 0] * s[:, 1]], axis=1)
            cos = np.where(denom > 0, sl / np.where(denom > 0, denom, 1.0), 0.0).min(axis=1)
            worst = min(worst, float(cos.min()))
            res.checks += cos.size
            for i in np.flatnonzero(cos < -tol):
                res.record({"measure": spec.label, "alpha": a, "min_cos": float(cos[i]),
                            "amplitudes": _amps_dump(amps[i]), "seed": seed})
    res.stats = {"min_cosine": worst, "samples": samples}
    return res


@_timed
def monotonicity(seed: int = 0, samples: int = 1000, measurements_per_state: int = 10,
                 alphas=(0.25, 0.5), measures=QUBIT_MEASURES, tol: float = 1e-9) -> SuiteResult:
    res = SuiteResult("monotonicity")

    def job(rng, n):
        amps = np.repeat(haar_amplitudes(rng, n, 8), measurements_per_state, axis=0)
        ms = [random_measurement(rng) for _ in range(amps.shape[0])]
        kraus = np.array([np.stack(m.kraus) for m in ms]).reshape(len(ms), 2, 2, 2)
        parties = np.array([m.party for m in ms])
        return {"amps": amps, "kraus": kraus, "parties": parties}

    parts = _fan_out(seed, samples, job)
    amps = np.concatenate([p["amps"] for p in parts])
    kraus = np.concatenate([p["kraus"] for p in parts])
    parties = np.concatenate([p["parties"] for p in parts])
    worst = np.inf
    for a in alphas:
        specs = [s.with_alpha(a) for s in measures]
        gaps = batch_gaps(amps, kraus, parties, specs)
        worst = min(worst, float(np.nanmin(gaps)))
        res.checks += gaps.size
        for i, j in zip(*np.nonzero(~(gaps >= -tol))):
            res.record({"measure": specs[j].label, "alpha": a, "gap": float(gaps[i, j]),
                        "amplitudes": _amps_dump(amps[i]), "party": int(parties[i]),
                        "kraus": [_amps_dump(k) for k in kraus[i]], "seed": seed})
    res.stats = {"min_gap": worst, "states": samples, "pairs": int(amps.shape[0])}
    return res


@_timed
def gaussian_relations(seed: int = 0, samples: int = 1000, modes=(1, 1, 1)) -> SuiteResult:
    res = SuiteResult("gaussian-relations")

    def job(rng, n):
        out = []
        for _ in range(n):
            cm = random_pure_tripartite_cm(modes, rng)
            out.append((cm, gaussian_det_relations(cm)))
        return {"items": out}

    worst_chain = np.inf
    worst_det = 0.0
    for part in _fan_out(seed, samples, job):
        for cm, rep in part["items"]:
            res.checks += 1
            worst_chain = min(worst_chain, min(rep["impurity_chain_margin"]))
            worst_det = max(worst_det, abs(rep["det_total"] - 1.0))
            if not rep["all_hold"] or abs(rep["det_total"] - 1.0) > 1e-8:
                res.record({"sigma": cm.sigma.tolist(), "report": rep, "seed": seed})
    res.stats = {"min_chain_margin": worst_chain, "max_det_error": worst_det}
    return res


@_timed
def hybrid_sweep(n: int = 50, lo: float = -2.0, hi: float = 2.0, alpha: float = 0.5) -> SuiteResult:
    res = SuiteResult("hybrid-sweep")
    grid = np.linspace(lo, hi, n)
    rows = hybrid_area_sweep(grid, grid, alpha=alpha)
    diag_max = 0.0
    for r in rows:
        res.checks += 1
        on_diag = r["alpha1"] == r["alpha2"]
        if on_diag:
            diag_max = max(diag_max, r["area"])
        if not (r["triangle_holds"] and r["within_bound"]) or (on_diag and r["area"] > 1e-10):
            res.record(r)
    res.stats = {"max_area": max(r["area"] for r in rows), "max_diagonal_area": diag_max,
                 "points": len(rows)}
    return res


@_timed
def polygon(seed: int = 0, samples: int = 1000, parties=(4, 5), tol: float = SLACK_TOL) -> SuiteResult:
    res = SuiteResult("polygon")
    worst = np.inf
    for k, n in enumerate(parties):
        parts = _fan_out(seed + 1000 * k, samples, lambda rng, m: {"amps": haar_amplitudes(rng, m, 2 ** n)})
        amps = np.concatenate([p["amps"] for p in parts])
        imp = party_impurities(amps, (2,) * n)
        sl = (imp.sum(axis=1, keepdims=True) - 2 * imp).min(axis=1)
        worst = min(worst, float(sl.min()))
        res.checks += sl.size
        for i in np.flatnonzero(sl < -tol):
            res.record({"parties": n, "slack": float(sl[i]), "amplitudes": _amps_dump(amps[i]), "seed": seed})
    res.stats = {"min_slack": worst}
    return res


def random_triangles(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform-ish valid triangles via x = (u2 + u3, u1 + u3, u1 + u2)."""
    u = rng.exponential(size=(n, 3))
    return np.stack([u[:, 1] + u[:, 2], u[:, 0] + u[:, 2], u[:, 0] + u[:, 1]], axis=1)


@_timed
def hessian(seed: int = 0, samples: int = 1000) -> SuiteResult:
    res = SuiteResult("hessian-minors")
    rng = np.random.default_rng(seed)
    xs = random_triangles(rng, samples)
    ss = random_triangles(rng, samples)
    worst = {"D1": -np.inf, "D2": np.inf, "D3_rel": 0.0, "det_ealpha": np.inf}
    for x, s in zip(xs, ss):
        res.checks += 2
        rep = hessian_minors(x, "E_2alpha")
        d1, d2, d3 = rep.minors
        scale = np.max(x)
        d3_rel = abs(d3) / scale ** 6
        worst["D1"] = max(worst["D1"], d1)
        worst["D2"] = min(worst["D2"], d2)
        worst["D3_rel"] = max(worst["D3_rel"], d3_rel)
        if d1 > 1e-12 or d2 < -1e-12 or d3_rel > 1e-9:
            res.record({"x": x.tolist(), "minors": [d1, d2, d3]})
        rep2 = hessian_minors(s, "E_alpha")
        worst["det_ealpha"] = min(worst["det_ealpha"], rep2.det_H)
        if not rep2.det_H > 0:
            res.record({"sides": s.tolist(), "det": rep2.det_H,
                        "closed_form": ealpha_det_closed_form(s)})
    res.stats = worst
    return res


@_timed
def bounds_sandwich(seed: int = 0, samples: int = 10_000, alpha: float = 0.5,
                    measures=QUBIT_MEASURES) -> SuiteResult:
    res = SuiteResult("bounds-sandwich")
    amps = _haar_qubit_states(seed, samples)
    lams = qubit_lambdas(amps)
    for spec in measures:
        s = measure_of_lambda(spec, lams) ** alpha
        area = area_from_sides(s)
        lo, hi = _bounds(s)
        ok = (lo <= area * (1 + 1e-12) + 1e-15) & (area <= hi * (1 + 1e-12) + 1e-15)
        res.checks += ok.size
        for i in np.flatnonzero(~ok):
            res.record({"measure": spec.label, "area": float(area[i]), "lower": float(lo[i]),
                        "upper": float(hi[i]), "amplitudes": _amps_dump(amps[i])})
    res.stats = {"samples": samples, "alpha": alpha}
    return res


SUITES = {
    "triangle-holds": triangle_holds,
    "strictness": strictness,
    "non-obtuse": non_obtuse,
    "monotonicity": monotonicity,
    "gaussian-relations": gaussian_relations,
    "hybrid-sweep": hybrid_sweep,
    "polygon": polygon,
    "hessian-minors": hessian,
    "bounds-sandwich": bounds_sandwich,
}
