"""Bipartite entanglement measures of pure states.

Every qubit measure is a function of the smallest reduced eigenvalue
``lam`` in [0, 1/2]; the general-dimension forms act on the reduced
spectrum. Logarithms are base 2 throughout.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedMeasureError
from .states import DensityOperator, PureState, eigen_spectrum, partial_trace, qubit_lambdas

LN2 = np.log(2.0)
LAMBDA_TOL = 1e-12
TSALLIS_VN_WINDOW = 1e-6


class MeasureKind(str, enum.Enum):
    SCHMIDT_WEIGHT = "W"
    CONCURRENCE_SQUARED = "C2"
    NEGATIVITY_SQUARED = "N2"
    VON_NEUMANN = "S"
    TSALLIS = "T"
    RENYI2 = "R"
    IMPURITY = "I"
    # not a triangle measure; only used for the GMC reduction
    CONCURRENCE = "C"


_ALIASES = {
    "w": "W", "schmidt": "W", "schmidt-weight": "W",
    "c2": "C2", "concurrence-squared": "C2",
    "n2": "N2", "negativity-squared": "N2",
    "s": "S", "vn": "S", "von-neumann": "S",
    "t": "T", "tsallis": "T",
    "r": "R", "renyi2": "R", "renyi-2": "R",
    "i": "I", "impurity": "I",
    "c": "C", "concurrence": "C",
}


@dataclass(frozen=True)
class MeasureSpec:
    kind: MeasureKind
    alpha: float = 1.0
    q: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MeasureKind(self.kind))
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.kind is MeasureKind.TSALLIS and self.q < 1:
            raise ValueError(f"Tsallis q must be >= 1, got {self.q}")

    @property
    def effective_kind(self) -> MeasureKind:
        if self.kind is MeasureKind.TSALLIS and abs(self.q - 1.0) < TSALLIS_VN_WINDOW:
            return MeasureKind.VON_NEUMANN
        return self.kind

    def with_alpha(self, alpha: float) -> "MeasureSpec":
        return MeasureSpec(self.kind, alpha, self.q)

    @property
    def label(self) -> str:
        if self.kind is MeasureKind.TSALLIS:
            return f"T{self.q:g}"
        return self.kind.value

    @classmethod
    def parse(cls, name: str, alpha: float = 1.0, q: float = 2.0) -> "MeasureSpec":
        key = _ALIASES.get(name.strip().lower())
        if key is None:
            raise ValueError(f"unknown measure {name!r}")
        return cls(MeasureKind(key), alpha, q)


# the six-member qubit set used throughout the property suites
QUBIT_MEASURES = (
    MeasureSpec(MeasureKind.SCHMIDT_WEIGHT),
    MeasureSpec(MeasureKind.CONCURRENCE_SQUARED),
    MeasureSpec(MeasureKind.NEGATIVITY_SQUARED),
    MeasureSpec(MeasureKind.VON_NEUMANN),
    MeasureSpec(MeasureKind.TSALLIS, q=2.0),
    MeasureSpec(MeasureKind.RENYI2),
)


def _check_lambda(lam):
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < -LAMBDA_TOL) or np.any(lam > 0.5 + LAMBDA_TOL):
        raise ValueError("lambda must lie in [0, 1/2]")
    return np.clip(lam, 0.0, 0.5)


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def _tsallis_lambda(lam, q):
    # 1 - (1-lam)^q computed without cancellation
    return (-np.expm1(q * np.log1p(-lam)) - lam ** q) / (q - 1.0)


def measure_of_lambda(spec: MeasureSpec, lam):
    """Evaluate the measure of a pure two-qubit state from its smallest Schmidt coefficient.

    Accepts scalars or arrays; returns the same shape.
    """
    lam = _check_lambda(lam)
    kind = spec.effective_kind
    if kind is MeasureKind.SCHMIDT_WEIGHT:
        out = 2.0 * lam
    elif kind in (MeasureKind.CONCURRENCE_SQUARED, MeasureKind.NEGATIVITY_SQUARED):
        out = 4.0 * lam * (1.0 - lam)
    elif kind is MeasureKind.IMPURITY:
        out = 2.0 * lam * (1.0 - lam)
    elif kind is MeasureKind.CONCURRENCE:
        out = 2.0 * np.sqrt(lam * (1.0 - lam))
    elif kind is MeasureKind.VON_NEUMANN:
        out = -_xlog2x(lam) - (1.0 - lam) * np.log1p(-lam) / LN2
    elif kind is MeasureKind.TSALLIS:
        out = _tsallis_lambda(lam, spec.q)
    elif kind is MeasureKind.RENYI2:
        out = -np.log1p(-2.0 * lam * (1.0 - lam)) / LN2
    else:  # pragma: no cover
        raise UnsupportedMeasureError(kind)
    return out if np.ndim(out) else float(out)


def measure_derivatives(spec: MeasureSpec, lam):
    """First and second derivatives of the lambda form on (0, 1/2)."""
    lam = np.asarray(lam, dtype=float)
    kind = spec.effective_kind
    one = np.ones_like(lam)
    if kind is MeasureKind.SCHMIDT_WEIGHT:
        return 2.0 * one, 0.0 * one
    if kind in (MeasureKind.CONCURRENCE_SQUARED, MeasureKind.NEGATIVITY_SQUARED):
        return 4.0 - 8.0 * lam, -8.0 * one
    if kind is MeasureKind.IMPURITY:
        return 2.0 - 4.0 * lam, -4.0 * one
    if kind is MeasureKind.CONCURRENCE:
        s = lam * (1.0 - lam)
        return (1.0 - 2.0 * lam) / np.sqrt(s), -0.5 / s ** 1.5
    if kind is MeasureKind.VON_NEUMANN:
        return (np.log1p(-lam) - np.log(lam)) / LN2, -1.0 / (LN2 * lam * (1.0 - lam))
    if kind is MeasureKind.TSALLIS:
        q = spec.q
        d1 = q * ((1.0 - lam) ** (q - 1.0) - lam ** (q - 1.0)) / (q - 1.0)
        d2 = -q * (lam ** (q - 2.0) + (1.0 - lam) ** (q - 2.0))
        return d1, d2
    if kind is MeasureKind.RENYI2:
        u = 1.0 - 2.0 * lam * (1.0 - lam)
        return 2.0 * (1.0 - 2.0 * lam) / (u * LN2), -8.0 * lam * (1.0 - lam) / (u * u * LN2)
    raise UnsupportedMeasureError(kind)  # pragma: no cover


def measure_of_spectrum(spec: MeasureSpec, spectrum) -> float:
    """General-dimension evaluation on a reduced spectrum (eigenvalues summing to 1)."""
    w = np.clip(np.asarray(spectrum, dtype=float), 0.0, 1.0)
    kind = spec.effective_kind
    purity = float(np.sum(w * w))
    if kind is MeasureKind.IMPURITY:
        return 1.0 - purity
    if kind is MeasureKind.CONCURRENCE_SQUARED:
        return 2.0 * (1.0 - purity)
    if kind is MeasureKind.CONCURRENCE:
        return float(np.sqrt(max(2.0 * (1.0 - purity), 0.0)))
    if kind is MeasureKind.RENYI2:
        return float(-np.log2(purity))
    if kind is MeasureKind.VON_NEUMANN:
        return float(-np.sum(_xlog2x(w)))
    if kind is MeasureKind.TSALLIS:
        return float((1.0 - np.sum(w ** spec.q)) / (spec.q - 1.0))
    if kind in (MeasureKind.SCHMIDT_WEIGHT, MeasureKind.NEGATIVITY_SQUARED):
        if w.size != 2:
            raise UnsupportedMeasureError(
                f"{kind.name} is only defined through two Schmidt coefficients")
        return float(measure_of_lambda(spec, min(w.min(), 0.5)))
    raise UnsupportedMeasureError(kind)  # pragma: no cover


def measure_of_state(spec: MeasureSpec, rho: DensityOperator) -> float:
    """Measure of the pure bipartite state whose reduced operator is ``rho``."""
    prof = eigen_spectrum(rho)
    if rho.dim == 2:
        return float(measure_of_lambda(spec, prof.lambda_min))
    return measure_of_spectrum(spec, prof.spectrum)


@dataclass(frozen=True)
class BipartitionVector:
    """Bipartition entanglement (E_{A|BC}, E_{B|AC}, E_{C|AB}) before the power alpha."""

    values: tuple[float, float, float]
    labels: tuple[str, str, str] = ("A|BC", "B|AC", "C|AB")

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 3:
            raise ValueError("need exactly three bipartition values")
        if any(v < 0 or not np.isfinite(v) for v in vals):
            raise ValueError(f"bipartition values must be finite and >= 0: {vals}")
        object.__setattr__(self, "values", vals)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def bipartition_vector(state: PureState, spec: MeasureSpec) -> BipartitionVector:
    if state.n_parties != 3:
        raise ValueError(f"expected a tripartite state, got {state.n_parties} parties")
    if state.dims == (2, 2, 2):
        vals = [float(e) for e in measure_of_lambda(spec, qubit_lambdas(state.amplitudes))]
    else:
        vals = [measure_of_state(spec, partial_trace(state, [k])) for k in range(3)]
    return BipartitionVector(tuple(vals))


def lambda_profile(state: PureState) -> tuple[float, float, float]:
    """Smallest reduced eigenvalue of each qubit of a three-qubit state."""
    if state.dims != (2, 2, 2):
        raise ValueError("lambda profile is defined for three qubits")
    return tuple(float(x) for x in qubit_lambdas(state.amplitudes))
