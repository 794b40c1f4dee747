"""Upper-bound estimate of the convex-roof triangle area of a mixed state."""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .errors import UnsupportedStateError
from .geometry import triangle_area
from .locc import area_of_lambdas
from .measures import MeasureSpec, bipartition_vector
from .states import DensityOperator, PureState, qubit_lambdas

RANK_TOL = 1e-12


def _areas(vectors: np.ndarray, dims: tuple[int, ...], spec: MeasureSpec, normalized: bool) -> np.ndarray:
    if dims == (2, 2, 2):
        return np.asarray(area_of_lambdas(spec, qubit_lambdas(vectors), normalized))
    out = []
    for v in vectors:
        rep = triangle_area(bipartition_vector(PureState(dims, v), spec), spec.alpha, normalized)
        out.append(rep.value)
    return np.array(out)


def decomposition_average(weighted: np.ndarray, u: np.ndarray, dims, spec, normalized) -> float:
    """sum_j p_j A(psi_j) for the ensemble psi~_j = sum_i u_ji w_i (columns of ``weighted``)."""
    vecs = (weighted @ u.T).T
    p = np.sum(np.abs(vecs) ** 2, axis=1)
    keep = p > 1e-15
    if not np.any(keep):
        return np.inf
    a = _areas(vecs[keep] / np.sqrt(p[keep])[:, None], dims, spec, normalized)
    val = float(np.dot(p[keep], a))
    return val if np.isfinite(val) else np.inf


def _haar_unitary(rng, m):
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def convex_roof_area_estimate(rho: DensityOperator, spec: MeasureSpec, budget: int = 200,
                              seed=None, dims: Sequence[int] = (2, 2, 2),
                              normalized: bool = True, n_elements: int | None = None,
                              max_rank: int = 8) -> float:
    """Smallest ensemble-averaged area found over sampled pure decompositions.

    Decompositions are ``psi~_j = sum_i U_ji sqrt(w_i) e_i`` for the eigenpairs
    ``(w_i, e_i)`` of ``rho`` and an ``m x m`` unitary ``U`` restricted to its
    first ``r`` columns. The first candidate is the eigendecomposition itself;
    later ones alternate fresh Haar unitaries with small multiplicative
    perturbations ``U exp(i eps H)`` of the incumbent. Every candidate is a
    valid decomposition, so the result bounds the convex roof from above and
    cannot increase with ``budget`` for a fixed seed.
    """
    dims = tuple(int(d) for d in dims)
    if rho.dim != int(np.prod(dims)):
        raise ValueError("density operator dimension does not match dims")
    if len(dims) != 3:
        raise ValueError("expected a tripartite state")
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > RANK_TOL
    r = int(np.count_nonzero(keep))
    if r > max_rank:
        raise UnsupportedStateError(f"rank {r} exceeds the supported {max_rank}")
    weighted = v[:, keep] * np.sqrt(w[keep])
    m = max(r, n_elements or r)
    rng = np.random.default_rng(seed)

    best_q = np.eye(m, dtype=complex)
    best = decomposition_average(weighted, best_q[:, :r], dims, spec, normalized)
    if r == 1:
        return best
    step = 0.5
    for _ in range(budget - 1):
        if step < 1e-4 or rng.random() < 0.2:
            cand = _haar_unitary(rng, m)
            fresh = True
        else:
            h = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            cand = best_q @ expm(1j * step * 0.5 * (h + h.conj().T))
            fresh = False
        val = decomposition_average(weighted, cand[:, :r], dims, spec, normalized)
        if val < best:
            best, best_q = val, cand
            step = 0.5 if fresh else min(step * 1.5, 0.5)
        elif not fresh:
            step *= 0.7
    return best
