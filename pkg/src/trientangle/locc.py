"""Local two-outcome measurements on three-qubit states and monotonicity gaps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidTriangleError, ValidationError
from .geometry import NORMALIZATION, SLACK_TOL, area_from_sides, slacks
from .measures import MeasureSpec, measure_of_lambda
from .states import PureState, qubit_lambdas

COMPLETENESS_TOL = 1e-10
ZERO_BRANCH = 1e-14


@dataclass(frozen=True)
class LocalMeasurement:
    party: int
    kraus: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise ValidationError("measurement needs at least one Kraus operator")
        d = ks[0].shape[0]
        if any(k.shape != (d, d) for k in ks):
            raise ValidationError("Kraus operators must be square and equally sized")
        resid = sum(k.conj().T @ k for k in ks) - np.eye(d)
        if np.max(np.abs(resid)) > COMPLETENESS_TOL:
            raise ValidationError(f"Kraus completeness violated by {np.max(np.abs(resid)):.3g}")
        object.__setattr__(self, "kraus", ks)

    def completeness_residual(self) -> float:
        d = self.kraus[0].shape[0]
        return float(np.max(np.abs(sum(k.conj().T @ k for k in self.kraus) - np.eye(d))))


@dataclass(frozen=True)
class MeasurementParams:
    phi1: float
    phi2: float
    psi1: float
    psi2: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.phi1, self.phi2, self.psi1, self.psi2)


def _unitary_v(psi1: float, psi2: float) -> np.ndarray:
    e = np.exp(1j * psi2)
    return np.array([[np.cos(psi1), -e * np.sin(psi1)],
                     [np.sin(psi1), e * np.cos(psi1)]])


def measurement_from_params(p: MeasurementParams, party: int = 0) -> LocalMeasurement:
    """Kraus pair D1 V, D2 V with D1 = diag(sin phi1, sin phi2), D2 = diag(cos phi1, cos phi2)."""
    v = _unitary_v(p.psi1, p.psi2)
    d1 = np.diag([np.sin(p.phi1), np.sin(p.phi2)])
    d2 = np.diag([np.cos(p.phi1), np.cos(p.phi2)])
    return LocalMeasurement(party, (d1 @ v, d2 @ v))


def random_measurement(rng: np.random.Generator, party: int | None = None,
                       outcomes: int = 2) -> LocalMeasurement:
    """Kraus operators cut from a Haar-random isometry C^2 -> C^(2*outcomes)."""
    if party is None:
        party = int(rng.integers(3))
    z = rng.standard_normal((2 * outcomes, 2)) + 1j * rng.standard_normal((2 * outcomes, 2))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return LocalMeasurement(party, tuple(q[2 * k:2 * k + 2] for k in range(outcomes)))


@dataclass(frozen=True)
class StandardFormState:
    """l0|000> + l1 e^{i varphi}|100> + l2|101> + l3|110> + l4|111>."""

    l1: float
    l2: float
    l3: float
    l4: float
    varphi: float = 0.0
    l0: float | None = None

    def __post_init__(self):
        ls = np.array([self.l1, self.l2, self.l3, self.l4], dtype=float)
        if np.any(ls < 0):
            raise ValidationError("standard-form coefficients must be nonnegative")
        rest = 1.0 - float(np.sum(ls ** 2))
        if self.l0 is None:
            if rest < -1e-12:
                raise ValidationError("l1..l4 have squared norm above 1")
            object.__setattr__(self, "l0", float(np.sqrt(max(rest, 0.0))))
        elif abs(self.l0 ** 2 - rest) > 1e-12:
            raise ValidationError("standard-form coefficients are not normalized")

    def coefficients(self) -> tuple[float, ...]:
        return (self.l0, self.l1, self.l2, self.l3, self.l4)

    def to_state(self) -> PureState:
        v = np.zeros(8, dtype=complex)
        v[0b000] = self.l0
        v[0b100] = self.l1 * np.exp(1j * self.varphi)
        v[0b101] = self.l2
        v[0b110] = self.l3
        v[0b111] = self.l4
        return PureState((2, 2, 2), v / np.linalg.norm(v))


@dataclass(frozen=True)
class LoccOutcome:
    probabilities: tuple[float, ...]
    post_states: tuple[PureState, ...]


def _local_operator(op: np.ndarray, party: int, dims: Sequence[int]) -> np.ndarray:
    mats = [np.eye(d) for d in dims]
    mats[party] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def branch_vectors(state: PureState, m: LocalMeasurement) -> np.ndarray:
    """Unnormalized branch vectors ``X_k |psi>``, shape ``(K, dim)``."""
    t = state.tensor()
    out = []
    for k in m.kraus:
        tk = np.tensordot(k, t, axes=([1], [m.party]))
        out.append(np.moveaxis(tk, 0, m.party).reshape(-1))
    return np.array(out)


def apply_measurement(state: PureState, m: LocalMeasurement) -> LoccOutcome:
    if m.kraus[0].shape[0] != state.dims[m.party]:
        raise ValidationError("Kraus dimension does not match the measured subsystem")
    vecs = branch_vectors(state, m)
    probs = np.sum(np.abs(vecs) ** 2, axis=1)
    keep = probs > ZERO_BRANCH
    p = probs[keep]
    posts = tuple(PureState(state.dims, v / np.sqrt(pk)) for v, pk in zip(vecs[keep], p))
    p = p / p.sum()
    return LoccOutcome(tuple(float(x) for x in p), posts)


def area_of_lambdas(spec: MeasureSpec, lams, normalized: bool = False):
    """Triangle area from lambda profiles (shape ``(..., 3)``); NaN when invalid."""
    sides = np.asarray(measure_of_lambda(spec, lams)) ** spec.alpha
    a = area_from_sides(sides)
    bad = np.any(slacks(sides) < -SLACK_TOL, axis=-1)
    a = np.where(bad, np.nan, a)
    return a * NORMALIZATION if normalized else a


def area_of_state(state: PureState, spec: MeasureSpec, normalized: bool = False) -> float:
    return float(area_of_lambdas(spec, qubit_lambdas(state.amplitudes), normalized))


@dataclass(frozen=True)
class GapReport:
    gap: float
    initial_area: float
    branch_areas: tuple[float, ...]
    probabilities: tuple[float, ...]
    invalid_branches: tuple[int, ...]


def monotonicity_report(state: PureState, m: LocalMeasurement, spec: MeasureSpec,
                        normalized: bool = False) -> GapReport:
    if state.dims != (2, 2, 2):
        raise ValidationError("monotonicity gaps are evaluated on three-qubit states")
    out = apply_measurement(state, m)
    a0 = area_of_state(state, spec, normalized)
    lams = qubit_lambdas(np.array([s.amplitudes for s in out.post_states]))
    areas = area_of_lambdas(spec, lams, normalized)
    bad = tuple(int(i) for i in np.flatnonzero(np.isnan(areas)))
    gap = float("nan") if bad or np.isnan(a0) else float(a0 - np.dot(out.probabilities, areas))
    return GapReport(gap, a0, tuple(float(a) for a in areas), out.probabilities, bad)


def monotonicity_gap(state: PureState, m: LocalMeasurement, spec: MeasureSpec,
                     normalized: bool = False) -> float:
    """A(psi) - sum_k p_k A(psi_k); negative values certify a violation."""
    rep = monotonicity_report(state, m, spec, normalized)
    if np.isnan(rep.gap):
        raise InvalidTriangleError("triangle relation fails on some branch", list(rep.invalid_branches))
    return rep.gap


_BATCH_SUBSCRIPTS = ("nkab,nbcd->nkacd", "nkab,ncbd->nkcad", "nkab,ncdb->nkcda")


def batch_gaps(amps: np.ndarray, kraus: np.ndarray, parties: np.ndarray,
               specs: Sequence[MeasureSpec], normalized: bool = False) -> np.ndarray:
    """Vectorized gaps for many (state, measurement) pairs.

    ``amps``: ``(N, 8)``; ``kraus``: ``(N, K, 2, 2)``; ``parties``: ``(N,)``.
    Returns ``(N, len(specs))``.
    """
    n = amps.shape[0]
    t = amps.reshape(n, 2, 2, 2)
    branches = np.empty((n, kraus.shape[1], 8), dtype=complex)
    for party in range(3):
        idx = np.flatnonzero(parties == party)
        if idx.size == 0:
            continue
        bt = np.einsum(_BATCH_SUBSCRIPTS[party], kraus[idx], t[idx])
        branches[idx] = bt.reshape(idx.size, kraus.shape[1], 8)
    probs = np.sum(np.abs(branches) ** 2, axis=-1)
    norm = np.sqrt(np.where(probs > ZERO_BRANCH, probs, 1.0))
    post = branches / norm[..., None]
    probs = np.where(probs > ZERO_BRANCH, probs, 0.0)
    lam0 = qubit_lambdas(amps)
    lamk = qubit_lambdas(post)
    out = np.empty((n, len(specs)))
    for j, spec in enumerate(specs):
        a0 = area_of_lambdas(spec, lam0, normalized)
        ak = np.where(probs > 0, area_of_lambdas(spec, lamk, normalized), 0.0)
        out[:, j] = a0 - np.sum(probs * ak, axis=1)
    return out
