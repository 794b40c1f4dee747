"""Gaussian covariance matrices in vacuum-normalized units (vacuum CM = identity).

Quadratures are interleaved as (q1, p1, q2, p2, ...). A state is pure iff
det(sigma) = 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import unitary_group

from .errors import UnphysicalCovarianceError, ValidationError

SYM_TOL = 1e-10
DET_TOL = 1e-8
MAX_MODES = 4


def symplectic_form(n: int) -> np.ndarray:
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class GaussianCovariance:
    mode_partition: tuple[int, ...]
    sigma: np.ndarray = field(repr=False)

    def __post_init__(self):
        part = tuple(int(m) for m in self.mode_partition)
        s = np.array(self.sigma, dtype=float)
        n = sum(part)
        if any(m < 1 for m in part):
            raise ValidationError("each party needs at least one mode")
        if s.shape != (2 * n, 2 * n):
            raise ValidationError(f"CM shape {s.shape} does not match {n} modes")
        if np.max(np.abs(s - s.T)) > SYM_TOL:
            raise ValidationError("CM is not symmetric")
        s = 0.5 * (s + s.T)
        if np.linalg.eigvalsh(s + 1j * symplectic_form(n))[0] < -1e-9:
            raise UnphysicalCovarianceError("CM violates the uncertainty relation")
        s.setflags(write=False)
        object.__setattr__(self, "mode_partition", part)
        object.__setattr__(self, "sigma", s)

    @property
    def n_modes(self) -> int:
        return sum(self.mode_partition)

    def modes_of(self, parties: Iterable[int]) -> list[int]:
        offsets = np.concatenate([[0], np.cumsum(self.mode_partition)])
        out = []
        for p in sorted(set(parties)):
            out.extend(range(offsets[p], offsets[p + 1]))
        return out

    def submatrix(self, parties: Iterable[int]) -> np.ndarray:
        idx = [2 * m + k for m in self.modes_of(parties) for k in (0, 1)]
        return self.sigma[np.ix_(idx, idx)]

    def det(self, parties: Iterable[int] | None = None) -> float:
        if parties is None:
            return float(np.linalg.det(self.sigma))
        return float(np.linalg.det(self.submatrix(parties)))

    def is_pure(self, tol: float = DET_TOL) -> bool:
        return abs(self.det() - 1.0) <= tol


def _sub_det(cm: GaussianCovariance, subsystem) -> float:
    d = cm.det(subsystem)
    if d < 1.0 - DET_TOL:
        raise UnphysicalCovarianceError(f"reduced determinant {d!r} < 1")
    return max(d, 1.0)


def gaussian_impurity(cm: GaussianCovariance, subsystem: Iterable[int]) -> float:
    """1 - 1/sqrt(det sigma_sub)."""
    return 1.0 - 1.0 / np.sqrt(_sub_det(cm, subsystem))


def gaussian_renyi2(cm: GaussianCovariance, subsystem: Iterable[int]) -> float:
    """log2 det sigma_sub."""
    return float(np.log2(_sub_det(cm, subsystem)))


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    n = sigma.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ sigma))
    return np.sort(ev)[::2]


def _interleave(n: int) -> np.ndarray:
    """Permutation taking (q1..qn, p1..pn) to (q1, p1, ..., qn, pn)."""
    perm = np.empty(2 * n, dtype=int)
    perm[0::2] = np.arange(n)
    perm[1::2] = np.arange(n, 2 * n)
    return np.eye(2 * n)[perm]


def orthogonal_symplectic(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    block = np.block([[u.real, -u.imag], [u.imag, u.real]])
    p = _interleave(n)
    return p @ block @ p.T


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    if n == 1:
        return np.exp(2j * np.pi * rng.random()) * np.eye(1)
    return unitary_group.rvs(n, random_state=rng)


def random_symplectic(rng: np.random.Generator, n: int, max_squeeze: float = 1.5) -> np.ndarray:
    """Euler composition O1 K O2 with single-mode squeezers K."""
    o1 = orthogonal_symplectic(_haar_unitary(rng, n))
    o2 = orthogonal_symplectic(_haar_unitary(rng, n))
    r = rng.uniform(0.0, max_squeeze, n)
    k = np.diag(np.ravel(np.column_stack([np.exp(r), np.exp(-r)])))
    return o1 @ k @ o2


def random_pure_tripartite_cm(modes: Sequence[int] = (1, 1, 1), seed=None) -> GaussianCovariance:
    modes = tuple(int(m) for m in modes)
    if len(modes) != 3 or any(m < 1 for m in modes):
        raise ValueError("need three parties with at least one mode each")
    if sum(modes) > MAX_MODES:
        raise ValueError(f"at most {MAX_MODES} modes in total")
    rng = np.random.default_rng(seed)
    s = random_symplectic(rng, sum(modes))
    return GaussianCovariance(modes, s @ s.T)


def vacuum_cm(modes: Sequence[int] = (1, 1, 1)) -> GaussianCovariance:
    return GaussianCovariance(tuple(modes), np.eye(2 * sum(modes)))


def tmsv_vacuum_cm(r: float) -> GaussianCovariance:
    """Two-mode squeezed vacuum on A, B with C in vacuum."""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    z = np.diag([1.0, -1.0])
    sigma = np.eye(6)
    sigma[:4, :4] = np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])
    return GaussianCovariance((1, 1, 1), sigma)


def gaussian_det_relations(cm: GaussianCovariance, tol: float = DET_TOL) -> dict:
    """Determinant identities and impurity / Renyi-2 triangle relations of a pure tripartite CM."""
    if len(cm.mode_partition) != 3:
        raise ValidationError("expected a tripartite CM")
    if not cm.is_pure(tol):
        raise ValidationError(f"CM is not pure: det = {cm.det()!r}")
    d = [cm.det([i]) for i in range(3)]
    comp = [cm.det([j for j in range(3) if j != i]) for i in range(3)]
    comp_err = [abs(d[i] - comp[i]) / max(abs(d[i]), 1.0) for i in range(3)]
    imp = [gaussian_impurity(cm, [i]) for i in range(3)]
    ren = [gaussian_renyi2(cm, [i]) for i in range(3)]
    product = []
    chain = []
    for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
        product.append(d[i] <= d[j] * d[k] * (1.0 + tol))
        chain.append(imp[j] + imp[k] - imp[i] - imp[j] * imp[k])
    ren_slack = [ren[j] + ren[k] - ren[i] for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1))]
    imp_slack = [imp[j] + imp[k] - imp[i] for i, j, k in ((0, 1, 2), (1, 0, 2), (2, 0, 1))]
    report = {
        "det_total": cm.det(),
        "det_single": d,
        "det_complement": comp,
        "complement_rel_error": comp_err,
        "product_inequalities": product,
        "impurities": imp,
        "impurity_slack": imp_slack,
        "impurity_chain_margin": chain,
        "renyi2": ren,
        "renyi2_slack": ren_slack,
    }
    report["all_hold"] = bool(
        max(comp_err) <= tol and all(product)
        and min(chain) >= -1e-10 and min(imp_slack) >= -1e-9 and min(ren_slack) >= -1e-9)
    return report
