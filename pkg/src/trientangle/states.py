"""Pure states, density operators and reduced-state spectra.

Subsystems are indexed in declaration order; the first declared subsystem is
the most significant digit of the amplitude index (``|abc>`` -> ``a*dB*dC +
b*dC + c``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

NORM_TOL = 1e-12
HERM_TOL = 1e-12
EIG_TOL = 1e-10


@dataclass(frozen=True)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if any(d < 2 for d in dims):
            raise ValidationError(f"subsystem dimensions must be >= 2, got {dims}")
        if amps.size != int(np.prod(dims)):
            raise ValidationError(
                f"{amps.size} amplitudes do not match dims {dims}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(f"state not normalized: |psi|^2 = {norm2!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, dims: Sequence[int], vector) -> "PureState":
        """Build a state from an unnormalized vector."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValidationError("zero vector")
        return cls(tuple(dims), v / n)

    @classmethod
    def from_terms(cls, dims: Sequence[int], terms: dict[str, complex]) -> "PureState":
        """Build from ``{"010": amp, ...}``; each character is one subsystem digit."""
        v = np.zeros(int(np.prod(dims)), dtype=complex)
        for label, amp in terms.items():
            digits = [int(ch) for ch in label]
            v[np.ravel_multi_index(digits, tuple(dims))] += amp
        return cls.from_vector(dims, v)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def to_density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERM_TOL:
            raise ValidationError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValidationError(f"trace {tr!r} != 1")
        if np.linalg.eigvalsh(m)[0] < -EIG_TOL:
            raise ValidationError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = np.linalg.eigh(self.matrix)
        return np.clip(w, 0.0, 1.0), v


@dataclass(frozen=True)
class SchmidtProfile:
    spectrum: tuple[float, ...]
    lambda_min: float


def partial_trace(state: PureState, keep: Iterable[int]) -> DensityOperator:
    """Reduced density operator on the subsystems in ``keep``."""
    keep = sorted(set(int(k) for k in keep))
    n = state.n_parties
    if not keep or len(keep) >= n or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep must be a nonempty strict subset of range({n}), got {keep}")
    rest = [k for k in range(n) if k not in keep]
    t = np.transpose(state.tensor(), keep + rest)
    dk = int(np.prod([state.dims[k] for k in keep]))
    t = t.reshape(dk, -1)
    return DensityOperator(t @ t.conj().T)


def eigen_spectrum(rho: DensityOperator) -> SchmidtProfile:
    """Sorted (descending) eigenvalues with round-off clipped."""
    w = np.linalg.eigvalsh(rho.matrix)
    if w[0] < -EIG_TOL:
        raise ValidationError(f"eigenvalue {w[0]!r} below tolerance")
    w = np.clip(w, 0.0, 1.0)[::-1]
    lam = float(w[-1])
    if rho.dim == 2:
        lam = min(max(lam, 0.0), 0.5)
    return SchmidtProfile(tuple(float(x) for x in w), lam)


def impurity(rho: DensityOperator) -> float:
    """1 - Tr(rho^2)."""
    m = rho.matrix
    return float(1.0 - np.sum(np.abs(m) ** 2))


# batched helpers for three-qubit ensembles


def qubit_lambdas(amps: np.ndarray) -> np.ndarray:
    """Smallest single-qubit reduced eigenvalue for each party.

    ``amps`` has shape ``(..., 8)``; returns shape ``(..., 3)``.
    """
    amps = np.asarray(amps, dtype=complex)
    batch = amps.shape[:-1]
    nb = len(batch)
    t = amps.reshape(batch + (2, 2, 2))
    out = []
    cols = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    for k in range(3):
        tk = np.moveaxis(t, nb + k, nb).reshape(batch + (2, 4))
        tr = np.sum(np.abs(tk) ** 2, axis=(-1, -2))
        # Cauchy-Binet: det(M M^dag) is the sum of squared 2x2 minors of M, so a
        # product bipartition gives det ~ eps^2 rather than eps
        det = sum(np.abs(tk[..., 0, i] * tk[..., 1, j] - tk[..., 0, j] * tk[..., 1, i]) ** 2
                  for i, j in cols)
        big = 0.5 * (tr + np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0)))
        # det / larger root avoids cancellation in the small root
        lam = det / np.where(big > 0, big, 1.0)
        out.append(np.clip(lam, 0.0, 0.5))
    return np.stack(out, axis=-1)


def party_impurities(amps: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Single-party impurities 1 - Tr rho_i^2 for a batch of pure states."""
    amps = np.asarray(amps, dtype=complex)
    batch = amps.shape[:-1]
    t = amps.reshape(batch + tuple(dims))
    nb = len(batch)
    res = []
    for k in range(len(dims)):
        tk = np.moveaxis(t, nb + k, nb).reshape(batch + (dims[k], -1))
        r = tk @ np.swapaxes(tk.conj(), -1, -2)
        res.append(1.0 - np.sum(np.abs(r) ** 2, axis=(-1, -2)))
    return np.stack(res, axis=-1)


def haar_amplitudes(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """``n`` Haar-random unit vectors of length ``dim``."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_state(rng: np.random.Generator, dims: Sequence[int]) -> PureState:
    return PureState(tuple(dims), haar_amplitudes(rng, 1, int(np.prod(dims)))[0])


def ghz(theta: float = np.pi / 4, n: int = 3) -> PureState:
    return PureState.from_terms((2,) * n, {"0" * n: np.cos(theta), "1" * n: np.sin(theta)})


def w_class(a: complex, b: complex, c: complex) -> PureState:
    """a|100> + b|010> + c|001> (normalized)."""
    return PureState.from_terms((2, 2, 2), {"100": a, "010": b, "001": c})


def product_state(n: int = 3) -> PureState:
    return PureState.from_terms((2,) * n, {"0" * n: 1.0})
