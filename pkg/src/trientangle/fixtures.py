"""Reference states and the reference comparison table."""
from __future__ import annotations

import numpy as np

from .geometry import gmc, triangle_area
from .measures import MeasureKind, MeasureSpec, bipartition_vector
from .states import PureState

TABLE_TOL = 5e-4


def psi1() -> PureState:
    return PureState.from_terms((2, 2, 2), {
        "000": np.sin(np.pi / 5), "100": np.cos(np.pi / 5), "111": 1.0})


def psi2() -> PureState:
    return PureState.from_terms((2, 2, 2), {"000": np.cos(np.pi / 8), "111": np.sin(np.pi / 8)})


def psi3() -> PureState:
    return PureState.from_terms((2, 2, 2), {"000": 0.5, "100": 0.5, "111": 1 / np.sqrt(2)})


def qudit_saturating() -> PureState:
    """(|000> + |101> + |210> + |311>) / 2 on a 4 x 2 x 2 system."""
    return PureState.from_terms((4, 2, 2), {"000": 0.5, "101": 0.5, "210": 0.5, "311": 0.5})


TABLE_STATES = {"psi1": psi1, "psi2": psi2, "psi3": psi3}

REFERENCE_TABLE = {
    "GMC": {"psi1": 0.5878, "psi2": 0.7071, "psi3": 0.7071},
    "A1": {"psi1": 0.7329, "psi2": 0.6009, "psi3": 0.8251},
    "A2": {"psi1": 0.6487, "psi2": 0.5, "psi3": 0.7638},
}

# candidate side measures for the second area row
A2_CANDIDATES = {
    "C2": MeasureSpec(MeasureKind.CONCURRENCE_SQUARED, alpha=0.5),
    "T2": MeasureSpec(MeasureKind.TSALLIS, alpha=0.5, q=2.0),
}


def _row_a(spec: MeasureSpec) -> dict:
    return {name: triangle_area(bipartition_vector(f(), spec), spec.alpha, True).normalized_area
            for name, f in TABLE_STATES.items()}


def table1() -> dict:
    """Compute GMC, von Neumann area and the better-matching second area, with deviations."""
    conc = MeasureSpec(MeasureKind.CONCURRENCE)
    rows = {
        "GMC": {name: gmc(bipartition_vector(f(), conc)) for name, f in TABLE_STATES.items()},
        "A1": _row_a(MeasureSpec(MeasureKind.VON_NEUMANN, alpha=0.5)),
    }
    candidates = {key: _row_a(spec) for key, spec in A2_CANDIDATES.items()}
    dev = {key: max(abs(vals[s] - REFERENCE_TABLE["A2"][s]) for s in vals)
           for key, vals in candidates.items()}
    binding = min(dev, key=dev.get)
    rows["A2"] = candidates[binding]
    cells = []
    for row, vals in rows.items():
        for state, value in vals.items():
            ref = REFERENCE_TABLE[row][state]
            cells.append({"row": row, "state": state, "value": value, "reference": ref,
                          "deviation": value - ref, "pass": abs(value - ref) <= TABLE_TOL})
    return {
        "rows": rows,
        "a2_binding": binding,
        "a2_candidates": candidates,
        "a2_candidate_max_deviation": dev,
        "cells": cells,
        "pass": all(c["pass"] for c in cells),
    }
