"""Qubit-qubit-coherent hybrid states c1|0 0 a1> + c2|1 1 a2> with real displacements."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import NORMALIZATION, SLACK_TOL, area_from_sides, slacks


@dataclass(frozen=True)
class HybridState:
    alpha1: float
    alpha2: float
    c1: complex = 1 / np.sqrt(2)
    c2: complex = 1 / np.sqrt(2)

    def __post_init__(self):
        n = np.sqrt(abs(self.c1) ** 2 + abs(self.c2) ** 2)
        if n == 0:
            raise ValueError("zero state")
        # branches sit on orthogonal qubit pairs, so the norm ignores the coherent overlap
        object.__setattr__(self, "c1", complex(self.c1) / n)
        object.__setattr__(self, "c2", complex(self.c2) / n)

    @property
    def weights(self) -> tuple[float, float]:
        return abs(self.c1) ** 2, abs(self.c2) ** 2

    def overlap(self) -> float:
        """<a1|a2> for real displacements."""
        return float(np.exp(-0.5 * (self.alpha1 - self.alpha2) ** 2))


def coherent_reduced_spectrum(h: HybridState) -> np.ndarray:
    """Nonzero eigenvalues of rho_C = p1|a1><a1| + p2|a2><a2| via the Gram matrix."""
    p1, p2 = h.weights
    ov = h.overlap()
    m = np.array([[p1, np.sqrt(p1 * p2) * ov], [np.sqrt(p1 * p2) * ov, p2]])
    return np.clip(np.linalg.eigvalsh(m), 0.0, 1.0)


def hybrid_impurities(h: HybridState) -> tuple[float, float, float]:
    p1, p2 = h.weights
    qubit = 2.0 * p1 * p2
    w = coherent_reduced_spectrum(h)
    return qubit, qubit, float(1.0 - np.sum(w * w))


def hybrid_area_sweep(alpha1_grid: Sequence[float], alpha2_grid: Sequence[float] | None = None,
                      alpha: float = 0.5, normalized: bool = True,
                      c1: complex = 1 / np.sqrt(2), c2: complex = 1 / np.sqrt(2)) -> list[dict]:
    """Impurity-triangle area over a displacement grid; one row per (a1, a2)."""
    alpha2_grid = alpha1_grid if alpha2_grid is None else alpha2_grid
    rows = []
    for a1 in alpha1_grid:
        for a2 in alpha2_grid:
            imp = np.array(hybrid_impurities(HybridState(float(a1), float(a2), c1, c2)))
            sides = imp ** alpha
            area = float(area_from_sides(sides))
            if normalized:
                area *= NORMALIZATION
            rows.append({
                "alpha1": float(a1),
                "alpha2": float(a2),
                "I_A": float(imp[0]),
                "I_B": float(imp[1]),
                "I_C": float(imp[2]),
                "area": area,
                "triangle_holds": bool(np.all(slacks(imp) >= -SLACK_TOL)),
                "within_bound": bool(area <= 0.5 + 1e-10),
            })
    return rows
