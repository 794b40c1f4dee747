"""Triangle relation, area measure, bounds and Hessian diagnostics.

Sides are ``E**alpha`` of the three bipartitions. The area is computed from
squared sides ``x = E**(2*alpha)`` as ``sqrt(-x1^2 + 2 x1 (x2 + x3) - (x2 - x3)^2) / 4``
which is permutation invariant and avoids the four-factor Heron product.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SingularConfigurationError, UnsupportedMeasureError
from .measures import BipartitionVector, MeasureKind, MeasureSpec, measure_of_state
from .states import PureState, partial_trace

SLACK_TOL = 1e-10
DEGENERATE_AREA = 1e-12
NORMALIZATION = 4.0 / np.sqrt(3.0)

SUBADDITIVE_KINDS = (
    MeasureKind.IMPURITY,
    MeasureKind.CONCURRENCE_SQUARED,
    MeasureKind.VON_NEUMANN,
    MeasureKind.TSALLIS,
)


def _values(v) -> np.ndarray:
    if isinstance(v, BipartitionVector):
        return v.as_array()
    return np.asarray(v, dtype=float)


def sides_of(v, alpha: float) -> np.ndarray:
    return _values(v) ** alpha


def slacks(sides) -> np.ndarray:
    """``s_j + s_k - s_i`` for i = 0, 1, 2 (works on ``(..., 3)`` arrays)."""
    s = np.asarray(sides, dtype=float)
    return s.sum(axis=-1, keepdims=True) - 2.0 * s


def area_from_sides(sides) -> np.ndarray:
    """Unnormalized area from side lengths; vectorized over the last axis.

    Returns NaN where the radicand is negative beyond round-off.
    """
    x = np.asarray(sides, dtype=float) ** 2
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    rad = -x1 * x1 + 2.0 * x1 * (x2 + x3) - (x2 - x3) ** 2
    scale = np.max(x, axis=-1) ** 2
    rad = np.where(rad < 0, np.where(rad >= -1e-12 * np.maximum(scale, 1e-300), 0.0, np.nan), rad)
    out = 0.25 * np.sqrt(rad)
    return out if np.ndim(out) else float(out)


def heron_area(sides) -> float:
    """Literal semiperimeter form; kept as an independent cross-check."""
    a, b, c = (float(s) for s in sides)
    q = 0.5 * (a + b + c)
    prod = q * (q - a) * (q - b) * (q - c)
    return float(np.sqrt(max(prod, 0.0)))


def area_gradient(x) -> np.ndarray:
    """Gradient of the area with respect to the squared sides."""
    x = np.asarray(x, dtype=float)
    a = area_from_sides(np.sqrt(x))
    if not a > 0:
        raise SingularConfigurationError("gradient undefined on a degenerate triangle")
    return (x.sum() - 2.0 * x) / (16.0 * a)


@dataclass(frozen=True)
class TriangleCheck:
    holds: tuple[bool, bool, bool]
    slack: tuple[float, float, float]

    @property
    def all_hold(self) -> bool:
        return all(self.holds)


def triangle_check(v, alpha: float, tol: float = SLACK_TOL) -> TriangleCheck:
    vals = _values(v)
    if np.any(vals < 0):
        raise ValueError("bipartition values must be nonnegative")
    sl = slacks(vals ** alpha)
    return TriangleCheck(tuple(bool(s >= -tol) for s in sl), tuple(float(s) for s in sl))


@dataclass(frozen=True)
class TriangleReport:
    sides: tuple[float, float, float]
    semiperimeter_Q: float
    area: float
    normalized_area: float
    cosines: tuple[float, float, float] | None
    classification: str
    lower_bound: float
    upper_bound: float
    normalized: bool = True

    @property
    def valid(self) -> bool:
        return self.classification != "invalid"

    @property
    def value(self) -> float:
        return self.normalized_area if self.normalized else self.area

    def as_dict(self) -> dict:
        return {
            "sides": list(self.sides),
            "semiperimeter_Q": self.semiperimeter_Q,
            "area": self.area,
            "normalized_area": self.normalized_area,
            "cosines": list(self.cosines) if self.cosines is not None else "degenerate",
            "classification": self.classification,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
        }


def classify(sides, area: float, tol: float = SLACK_TOL):
    """Return ``(cosines or None, classification)``."""
    s = np.asarray(sides, dtype=float)
    if np.any(slacks(s) < -tol):
        return None, "invalid"
    if np.all(s <= DEGENERATE_AREA):
        return None, "degenerate-point"
    if np.any(s == 0) or area < DEGENERATE_AREA:
        return None, "degenerate-line"
    x = s * s
    cos = tuple(float((x.sum() - 2 * x[i]) / (2 * s[(i + 1) % 3] * s[(i + 2) % 3]))
                for i in range(3))
    lo = min(cos)
    if lo < -tol:
        return cos, "obtuse"
    if lo <= tol:
        return cos, "right"
    return cos, "acute"


def triangle_area(v, alpha: float, normalized: bool = True) -> TriangleReport:
    s = sides_of(v, alpha)
    q = 0.5 * float(s.sum())
    cos, cls = classify(s, 0.0)
    if cls == "invalid":
        a = float("nan")
    else:
        a = float(area_from_sides(s))
        cos, cls = classify(s, a)
    lo, hi = _bounds(s)
    return TriangleReport(
        sides=tuple(float(x) for x in s),
        semiperimeter_Q=q,
        area=a,
        normalized_area=a * NORMALIZATION,
        cosines=cos,
        classification=cls,
        lower_bound=lo,
        upper_bound=hi,
        normalized=normalized,
    )


def _bounds(sides):
    x = np.asarray(sides, dtype=float) ** 2
    lower = np.sqrt(3.0) / 4.0 * np.min(x, axis=-1)
    upper = np.sum(x, axis=-1) / (4.0 * np.sqrt(3.0))
    if np.ndim(lower):
        return lower, upper
    return float(lower), float(upper)


def area_bounds(v, alpha: float) -> tuple[float, float]:
    """Smallest-side lower bound and mean-square-side upper bound on the unnormalized area."""
    return _bounds(sides_of(v, alpha))


def gmc(v) -> float:
    """Minimum over bipartitions; with concurrence values this is the GMC."""
    return float(np.min(_values(v)))


@dataclass(frozen=True)
class HessianReport:
    coordinates: str
    matrix: np.ndarray
    minors: tuple[float, float, float]
    det_H: float
    negative_semidefinite: bool


def _check_nondegenerate(x_sq) -> float:
    a = area_from_sides(np.sqrt(x_sq))
    if not np.isfinite(a) or a <= DEGENERATE_AREA * max(np.max(x_sq), 1.0):
        raise SingularConfigurationError("Hessian is singular on a degenerate triangle")
    return float(a)


def _minors(h):
    return (float(h[0, 0]), float(np.linalg.det(h[:2, :2])), float(np.linalg.det(h)))


def hessian_e2alpha(x) -> np.ndarray:
    """Area Hessian in squared-side coordinates without the positive 1/(128 A^3) factor."""
    x1, x2, x3 = (float(t) for t in x)
    return np.array([
        [-2 * x2 * x3, x3 * (x1 + x2 - x3), x2 * (x1 + x3 - x2)],
        [x3 * (x1 + x2 - x3), -2 * x1 * x3, x1 * (x2 + x3 - x1)],
        [x2 * (x1 + x3 - x2), x1 * (x2 + x3 - x1), -2 * x1 * x2],
    ])


def hessian_ealpha(x) -> np.ndarray:
    """Full area Hessian in side-length coordinates."""
    x = np.asarray(x, dtype=float)
    a = area_from_sides(x)
    sq = x * x
    h = np.empty((3, 3))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        h[i, i] = (sq[i] ** 3 + 3 * sq[i] * (sq[j] - sq[k]) ** 2
                   - (sq[j] + sq[k]) * (3 * sq[i] ** 2 + (sq[j] - sq[k]) ** 2))
        h[i, j] = h[j, i] = -4 * x[i] * x[j] * sq[k] * (sq[k] - sq[i] - sq[j])
    return h / (128.0 * a ** 3)


def hessian_minors(x, coordinates: str = "E_2alpha", tol: float = 1e-12) -> HessianReport:
    """Leading principal minors of the area Hessian at ``x``.

    ``coordinates="E_2alpha"``: ``x`` are squared sides; ``"E_alpha"``: sides.
    """
    x = np.asarray(x, dtype=float)
    if coordinates == "E_2alpha":
        _check_nondegenerate(x)
        h = hessian_e2alpha(x)
        d1, d2, d3 = _minors(h)
        scale = np.max(x) ** 2
        nsd = d1 <= tol * scale and d2 >= -tol * scale ** 2 and abs(d3) <= 1e-9 * scale ** 3
        return HessianReport(coordinates, h, (d1, d2, d3), d3, bool(nsd))
    if coordinates == "E_alpha":
        _check_nondegenerate(x * x)
        h = hessian_ealpha(x)
        d1, d2, d3 = _minors(h)
        nsd = bool(np.linalg.eigvalsh(h)[-1] <= tol * np.max(np.abs(h)))
        return HessianReport(coordinates, h, (d1, d2, d3), d3, nsd)
    raise ValueError(f"unknown coordinates {coordinates!r}")


def ealpha_det_closed_form(x) -> float:
    """det H in side coordinates: (x1^2 + x2^2 + x3^2) / (32 A)."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x) / (32.0 * area_from_sides(x)))


def polygon_check(state: PureState, spec: MeasureSpec | None = None,
                  tol: float = SLACK_TOL) -> tuple[bool, ...]:
    """E_i <= sum_{j != i} E_j over single-party bipartitions of an n-party pure state."""
    spec = spec or MeasureSpec(MeasureKind.IMPURITY)
    if spec.effective_kind not in SUBADDITIVE_KINDS:
        raise UnsupportedMeasureError(f"polygon relation needs a subadditive measure, got {spec.kind.name}")
    if state.n_parties < 3:
        raise ValueError("polygon relation needs at least three parties")
    e = np.array([measure_of_state(spec, partial_trace(state, [k]))
                  for k in range(state.n_parties)]) ** spec.alpha
    return tuple(bool(e[i] <= e.sum() - e[i] + tol) for i in range(len(e)))
