"""Constructions that break the triangle relation (alpha > 1) or area monotonicity (alpha > 1/2)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ConstructionFailedError, SearchFailedError, UnsupportedMeasureError
from .geometry import NORMALIZATION
from .locc import (
    LocalMeasurement,
    MeasurementParams,
    StandardFormState,
    area_of_lambdas,
    area_of_state,
    apply_measurement,
    measurement_from_params,
    monotonicity_gap,
)
from .measures import (
    LN2,
    MeasureKind,
    MeasureSpec,
    bipartition_vector,
    lambda_profile,
    measure_derivatives,
    measure_of_lambda,
)
from .states import PureState, qubit_lambdas, w_class

CONVEXITY_GRID = 1e-6
VIOLATION_FLOOR = 1e-12

_QUADRATIC = (MeasureKind.CONCURRENCE_SQUARED, MeasureKind.NEGATIVITY_SQUARED, MeasureKind.IMPURITY)


# -- convexity of E^alpha(lambda) ---------------------------------------------


def convexity_sign(spec: MeasureSpec, lam):
    """(alpha - 1) E'^2 + E E'', which has the sign of (E^alpha)''."""
    lam = np.asarray(lam, dtype=float)
    e = measure_of_lambda(spec, lam)
    d1, d2 = measure_derivatives(spec, lam)
    return (spec.alpha - 1.0) * d1 * d1 + e * d2


def entropic_sign(spec: MeasureSpec, lam):
    """Positive-factor-stripped second derivative of E^alpha for S, T_q and R.

    The von Neumann form is divided by (log2 lam)^2 and the Tsallis form by
    q^2 / (q - 1)^2, so each tends to alpha - 1 as lam -> 0.
    """
    lam = np.asarray(lam, dtype=float)
    a = spec.alpha
    kind = spec.effective_kind
    if kind is MeasureKind.VON_NEUMANN:
        lg, lg1 = np.log2(lam), np.log1p(-lam) / LN2
        num = (a - 1.0) * (lg1 - lg) ** 2 + (lg / (1.0 - lam) + lg1 / lam) / LN2
        return num / lg ** 2
    if kind is MeasureKind.TSALLIS:
        q = spec.q
        t = -np.expm1(q * np.log1p(-lam)) - lam ** q
        return ((a - 1.0) * ((1.0 - lam) ** (q - 1.0) - lam ** (q - 1.0)) ** 2
                - (q - 1.0) / q * t * (lam ** (q - 2.0) + (1.0 - lam) ** (q - 2.0)))
    if kind is MeasureKind.RENYI2:
        s = lam * (1.0 - lam)
        return (a - 1.0) * (1.0 - 2.0 * lam) ** 2 + 2.0 * s * np.log1p(-2.0 * s)
    raise UnsupportedMeasureError(f"no entropic sign function for {kind.name}")


@dataclass(frozen=True)
class ConvexityInterval:
    kind: MeasureKind
    alpha: float
    u_alpha: float | None

    @property
    def empty(self) -> bool:
        return self.u_alpha is None


def quadratic_u(alpha: float) -> float:
    return 0.5 * (1.0 - np.sqrt(1.0 / (2.0 * alpha - 1.0)))


def convexity_interval(spec: MeasureSpec) -> ConvexityInterval:
    """Largest u with E^alpha strictly convex on (0, u)."""
    kind = spec.effective_kind
    if spec.alpha <= 1:
        return ConvexityInterval(spec.kind, spec.alpha, None)
    if kind is MeasureKind.SCHMIDT_WEIGHT:
        return ConvexityInterval(spec.kind, spec.alpha, 0.5)
    if kind in _QUADRATIC:
        return ConvexityInterval(spec.kind, spec.alpha, float(quadratic_u(spec.alpha)))
    if kind in (MeasureKind.VON_NEUMANN, MeasureKind.TSALLIS, MeasureKind.RENYI2):
        sign = lambda x: entropic_sign(spec, x)  # noqa: E731
    else:
        sign = lambda x: convexity_sign(spec, x)  # noqa: E731
    grid = np.arange(1, int(round(0.5 / CONVEXITY_GRID)) + 1) * CONVEXITY_GRID
    vals = sign(grid)
    bad = np.flatnonzero(~(vals > 0))
    if bad.size == 0:
        return ConvexityInterval(spec.kind, spec.alpha, 0.5)
    i = int(bad[0])
    if i == 0:
        return ConvexityInterval(spec.kind, spec.alpha, None)
    u = brentq(lambda x: float(sign(x)), grid[i - 1], grid[i], xtol=1e-14)
    return ConvexityInterval(spec.kind, spec.alpha, float(u))


@dataclass(frozen=True)
class TriangleWitness:
    state: PureState
    slack: float
    lambdas: tuple[float, float, float]
    interval: ConvexityInterval


def triangle_violation_witness(spec: MeasureSpec, b2: float | None = None) -> TriangleWitness:
    """W-class state a|100> + b|010> + b|001> with E_A^alpha > E_B^alpha + E_C^alpha.

    When ``b2`` is not given, it is chosen inside the convexity interval to
    make the violation as large as possible.
    """
    iv = convexity_interval(spec)
    if iv.empty:
        raise ConstructionFailedError(f"E^alpha is not convex near 0 for alpha={spec.alpha}")
    if b2 is None:
        hi = min(iv.u_alpha / 2.0, 0.25)
        ts = hi * np.logspace(-6, 0, 400)
        gaps = (2.0 * measure_of_lambda(spec, ts) ** spec.alpha
                - measure_of_lambda(spec, 2.0 * ts) ** spec.alpha)
        b2 = float(ts[int(np.argmin(gaps))])
    if not 0 < b2 <= 0.25:
        raise ValueError("b^2 must lie in (0, 1/4] so that a^2 >= 1/2")
    b = np.sqrt(b2)
    state = w_class(np.sqrt(1.0 - 2.0 * b2), b, b)
    v = bipartition_vector(state, spec)
    s = np.asarray(v.values) ** spec.alpha
    slack = float(np.min(s.sum() - 2.0 * s))
    if not slack < -1e-8:
        raise ConstructionFailedError(f"witness slack {slack:.3g} is not a strict violation")
    return TriangleWitness(state, slack, lambda_profile(state), iv)


# -- Case I: per-branch increase without an ensemble violation ----------------


def case1_fixture() -> dict:
    """W state with a local diagonal measurement whose first branch has larger area."""
    state = w_class(np.sqrt(3) / 2, np.sqrt(2) / 4, np.sqrt(2) / 4)
    m = LocalMeasurement(0, (np.diag([np.sqrt(3) / 2, np.sqrt(2) / 2]),
                             np.diag([0.5, np.sqrt(2) / 2])))
    out = apply_measurement(state, m)
    spec = MeasureSpec(MeasureKind.CONCURRENCE_SQUARED, alpha=0.5)
    return {
        "state": state,
        "measurement": m,
        "outcome": out,
        "lambdas_initial": lambda_profile(state),
        "lambdas_branch1": lambda_profile(out.post_states[0]),
        "area_initial": area_of_state(state, spec, normalized=True),
        "area_branch1": area_of_state(out.post_states[0], spec, normalized=True),
        "gap": monotonicity_gap(state, m, spec, normalized=True),
    }


# -- Case II: W-class family with a branch-killing measurement ----------------


@dataclass(frozen=True)
class ViolationProbe:
    spec: MeasureSpec
    beta: float = 1e-8
    p2_grid: tuple[float, ...] = tuple(np.linspace(0.9, 1.0, 101))

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if any(not 0 < p <= 1 for p in self.p2_grid):
            raise ValueError("p2 values must lie in (0, 1]")


def _check_case2_alpha(alpha: float):
    if not 0.5 < alpha < 1:
        raise ValueError(f"Case II needs 1/2 < alpha < 1, got {alpha}")


def case2_sign(spec: MeasureSpec, beta: float, p2):
    """Bracket L(beta, p2) with d/dp2 g^2(p2) = E^{4 alpha}(2 beta / p2) L / 8."""
    p = np.asarray(p2, dtype=float)
    a = spec.alpha
    u, v = 2.0 * beta / p, beta / p
    eu, ev = measure_of_lambda(spec, u), measure_of_lambda(spec, v)
    du, _ = measure_derivatives(spec, u)
    dv, _ = measure_derivatives(spec, v)
    ratio = ev / eu
    r = ratio ** (2 * a)
    return (4 * p * r - p - 8 * a * beta * du / eu * r + 4 * a * beta * du / eu
            - 4 * a * beta * dv / eu * ratio ** (2 * a - 1))


def case2_g_squared(spec: MeasureSpec, beta: float, p2):
    """(p2 * A(W2))^2 for the surviving branch, written through lambda forms."""
    p = np.asarray(p2, dtype=float)
    a = spec.alpha
    eu = measure_of_lambda(spec, 2.0 * beta / p) ** (2 * a)
    ev = measure_of_lambda(spec, beta / p) ** (2 * a)
    return p * p * eu * (4.0 * ev - eu) / 16.0


def case2_limit(alpha: float) -> float:
    """beta -> 0 limit of L(beta, 1)."""
    return (2.0 * alpha - 1.0) * (1.0 - 4.0 ** (1.0 - alpha))


def case2_profile(probe: ViolationProbe) -> dict:
    _check_case2_alpha(probe.spec.alpha)
    p = np.asarray(probe.p2_grid)
    return {
        "p2": p.tolist(),
        "L": np.asarray(case2_sign(probe.spec, probe.beta, p)).tolist(),
        "limit": case2_limit(probe.spec.alpha),
    }


def case2_onset(spec: MeasureSpec, beta: float, n: int = 20001) -> float | None:
    """Smallest p with L(beta, .) < 0 on all of [p, 1] (grid resolution)."""
    _check_case2_alpha(spec.alpha)
    p = np.linspace(max(4.0 * beta, 1e-12), 1.0, n)
    neg = np.asarray(case2_sign(spec, beta, p)) < 0
    if not neg[-1]:
        return None
    pos = np.flatnonzero(~neg)
    return float(p[pos[-1] + 1]) if pos.size else float(p[0])


def case2_measurement(y2: float) -> LocalMeasurement:
    """X1 = diag(0, sqrt(1 - y2^2)), X2 = diag(1, y2) on qubit A."""
    return LocalMeasurement(0, (np.diag([0.0, np.sqrt(1.0 - y2 * y2)]), np.diag([1.0, y2])))


def case2_state(beta: float) -> PureState:
    b = np.sqrt(beta)
    return w_class(np.sqrt(1.0 - 2.0 * beta), b, b)


def _case2_gap_curve(spec, beta, ys):
    # identical to monotonicity_gap on (case2_state, case2_measurement) but vectorized
    a2 = 1.0 - 2.0 * beta
    p2 = a2 * ys * ys + 2.0 * beta
    amps = np.zeros((ys.size, 8))
    amps[:, 0b100] = np.sqrt(a2) * ys
    amps[:, 0b010] = amps[:, 0b001] = np.sqrt(beta)
    amps /= np.sqrt(p2)[:, None]
    a_branch = area_of_lambdas(spec, qubit_lambdas(amps.astype(complex)))
    a0 = area_of_state(case2_state(beta), spec)
    return a0 - p2 * a_branch


@dataclass(frozen=True)
class Case2Result:
    state: PureState
    measurement: LocalMeasurement
    gap: float
    beta: float
    y2: float
    p2: float
    onset: float | None


DEFAULT_BETAS = tuple(10.0 ** -k for k in range(1, 9))


def case2_violation(spec: MeasureSpec, beta: float | None = None, n_grid: int = 4000) -> Case2Result:
    """Scan the surviving-branch strength y2 for A(W) - p2 A(W2) < 0.

    With ``beta=None`` a ladder of beta values is tried and the most negative
    gap kept. For alpha <= 1/2 the scan still runs and is expected to raise
    :class:`SearchFailedError`.
    """
    if not 0 < spec.alpha < 1:
        raise ValueError(f"Case II scan needs 0 < alpha < 1, got {spec.alpha}")
    betas = DEFAULT_BETAS if beta is None else (float(beta),)
    ys = np.linspace(0.0, 1.0, n_grid + 1)[1:-1]
    best = None
    tried = {}
    for b in betas:
        curve = _case2_gap_curve(spec, b, ys)
        i = int(np.nanargmin(curve))
        lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, ys.size - 1)]
        res = minimize_scalar(lambda y: float(_case2_gap_curve(spec, b, np.array([y]))[0]),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        y, g = (float(res.x), float(res.fun)) if res.fun < curve[i] else (float(ys[i]), float(curve[i]))
        tried[b] = g
        if best is None or g < best[2]:
            best = (b, y, g)
    b, y, _ = best
    state, m = case2_state(b), case2_measurement(y)
    gap = monotonicity_gap(state, m, spec)
    if not gap < -VIOLATION_FLOOR:
        raise SearchFailedError(
            f"no monotonicity violation for {spec.label} at alpha={spec.alpha}",
            {"best_gap_per_beta": tried})
    p2 = (1.0 - 2.0 * b) * y * y + 2.0 * b
    onset = case2_onset(spec, b) if spec.alpha > 0.5 else None
    return Case2Result(state, m, gap, b, y, p2, onset)


# -- Case III: standard-form states with D V measurements ---------------------


@dataclass(frozen=True)
class ReferencePoint:
    spec: MeasureSpec
    state: StandardFormState
    params: MeasurementParams
    gap: float


CASE3_POINTS = {
    "W": ReferencePoint(
        MeasureSpec(MeasureKind.SCHMIDT_WEIGHT, alpha=1.0),
        StandardFormState(0.264, 0.367, 0.32, 0.055, 0.8 * np.pi),
        MeasurementParams(0.4 * np.pi, 0.1 * np.pi, 0.6 * np.pi, 0.2 * np.pi),
        -0.027),
    "C2": ReferencePoint(
        MeasureSpec(MeasureKind.CONCURRENCE_SQUARED, alpha=1.0),
        StandardFormState(0.096, 0.238, 0.173, 0.0, 0.0),
        MeasurementParams(0.4 * np.pi, 0.2 * np.pi, -0.5 * np.pi, -0.1 * np.pi),
        -0.010),
    "S": ReferencePoint(
        MeasureSpec(MeasureKind.VON_NEUMANN, alpha=1.0),
        StandardFormState(0.048, 0.046, 0.0, 0.141, 0.0),
        MeasurementParams(0.4 * np.pi, 0.1 * np.pi, 0.0, -0.7 * np.pi),
        -0.011),
}


def case3_gap(point: ReferencePoint) -> float:
    return monotonicity_gap(point.state.to_state(), measurement_from_params(point.params), point.spec)


@dataclass(frozen=True)
class SearchResult:
    state: StandardFormState
    params: MeasurementParams
    gap: float
    evaluations: int
    history: list = field(default_factory=list, repr=False)


_L_STEP, _ANGLE_STEP, _MIN_STEP = 0.05, 0.1 * np.pi, 1e-6


def _decode(theta: np.ndarray):
    ls = np.abs(theta[:4])
    n = np.linalg.norm(ls)
    if n > 1.0:
        ls = ls / n
    varphi = float(np.abs(theta[4]) % (2 * np.pi))
    if varphi > np.pi:
        varphi = 2 * np.pi - varphi
    angles = (theta[5:] + np.pi) % (2 * np.pi) - np.pi
    return ls, varphi, angles


def _search_objective(spec: MeasureSpec, theta: np.ndarray, normalized: bool) -> float:
    ls, varphi, angles = _decode(theta)
    l0 = np.sqrt(max(1.0 - float(np.sum(ls ** 2)), 0.0))
    v = np.zeros(8, dtype=complex)
    v[0b000], v[0b100], v[0b101], v[0b110], v[0b111] = l0, ls[0] * np.exp(1j * varphi), ls[1], ls[2], ls[3]
    v /= np.linalg.norm(v)
    phi1, phi2, psi1, psi2 = angles
    e = np.exp(1j * psi2)
    vmat = np.array([[np.cos(psi1), -e * np.sin(psi1)], [np.sin(psi1), e * np.cos(psi1)]])
    t = v.reshape(2, 8 // 2)
    branches = []
    for d in ((np.sin(phi1), np.sin(phi2)), (np.cos(phi1), np.cos(phi2))):
        branches.append((np.diag(d) @ vmat @ t).reshape(8))
    branches = np.array(branches)
    probs = np.sum(np.abs(branches) ** 2, axis=1)
    keep = probs > 1e-14
    post = branches[keep] / np.sqrt(probs[keep])[:, None]
    a0 = area_of_lambdas(spec, qubit_lambdas(v), normalized)
    ak = area_of_lambdas(spec, qubit_lambdas(post), normalized)
    gap = float(a0 - np.dot(probs[keep], ak))
    return gap if np.isfinite(gap) else np.inf


def _random_theta(rng: np.random.Generator) -> np.ndarray:
    ls = rng.dirichlet(np.ones(5))
    return np.concatenate([np.sqrt(ls[1:]), [rng.uniform(0, np.pi)], rng.uniform(-np.pi, np.pi, 4)])


def _encode(state: StandardFormState, params: MeasurementParams) -> np.ndarray:
    return np.array([state.l1, state.l2, state.l3, state.l4, state.varphi, *params.as_tuple()], dtype=float)


def random_violation_search(spec: MeasureSpec, seed: int = 0, budget: int = 2000,
                            start: tuple[StandardFormState, MeasurementParams] | None = None,
                            normalized: bool = False) -> SearchResult:
    """Seeded random restarts plus coordinate pattern search minimizing the gap.

    ``budget`` counts objective evaluations. Steps halve after a sweep with no
    improvement; once they fall below 1e-6 the search restarts from a fresh
    random point. Measurements act on qubit A.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    base_steps = np.array([_L_STEP] * 4 + [_ANGLE_STEP] * 5)
    theta = _encode(*start) if start is not None else _random_theta(rng)
    f = _search_objective(spec, theta, normalized)
    evals = 1
    best_theta, best_f = theta.copy(), f
    steps = base_steps.copy()
    history = [best_f]
    while evals < budget:
        improved = False
        for i in range(theta.size):
            for sgn in (1.0, -1.0):
                if evals >= budget:
                    break
                trial = theta.copy()
                trial[i] += sgn * steps[i]
                ft = _search_objective(spec, trial, normalized)
                evals += 1
                if ft < f:
                    theta, f, improved = trial, ft, True
                    break
        if f < best_f:
            best_theta, best_f = theta.copy(), f
            history.append(best_f)
        if not improved:
            steps *= 0.5
            if np.max(steps / base_steps) < _MIN_STEP and evals < budget:
                theta = _random_theta(rng)
                f = _search_objective(spec, theta, normalized)
                evals += 1
                steps = base_steps.copy()
                if f < best_f:
                    best_theta, best_f = theta.copy(), f
                    history.append(best_f)
    ls, varphi, angles = _decode(best_theta)
    state = StandardFormState(*(float(x) for x in ls), varphi=varphi)
    return SearchResult(state, MeasurementParams(*(float(a) for a in angles)), float(best_f), evals, history)
