"""Acceptance criteria, one test (and one summary line) each."""
import time

import numpy as np

from trientangle.fixtures import qudit_saturating, table1
from trientangle.geometry import NORMALIZATION, area_bounds, gmc, triangle_check
from trientangle.hybrid import HybridState, hybrid_impurities
from trientangle.measures import QUBIT_MEASURES, MeasureKind, MeasureSpec, bipartition_vector
from trientangle.states import haar_state, partial_trace
from trientangle.suites import (
    bounds_sandwich,
    gaussian_relations,
    hessian,
    hybrid_sweep,
    monotonicity,
    polygon,
    strictness,
    triangle_holds,
)
from trientangle.violations import CASE3_POINTS, case1_fixture, case2_violation, case3_gap, triangle_violation_witness

from test_hybrid import fock_impurities


def test_table1_reproduction(criterion):
    t0 = time.perf_counter()
    res = table1()
    dt = time.perf_counter() - t0
    worst = max(abs(c["deviation"]) for c in res["cells"])
    ok = res["pass"] and len(res["cells"]) == 9 and worst <= 5e-4 and dt < 1.0
    criterion("Reference table reproduction", ok,
              f"9 cells, max |dev| {worst:.2e} <= 5e-4, A2 bound to {res['a2_binding']}, {dt:.3f}s")


def test_case1_fixture(criterion):
    f = case1_fixture()
    d0 = np.max(np.abs(np.array(f["lambdas_initial"]) - [1 / 4, 1 / 8, 1 / 8]))
    d1 = np.max(np.abs(np.array(f["lambdas_branch1"]) - [1 / 3, 1 / 6, 1 / 6]))
    ok = d0 <= 1e-12 and d1 <= 1e-12 and f["area_branch1"] > f["area_initial"] and f["gap"] >= -1e-9
    criterion("Case I fixture", ok,
              f"lambda errors {d0:.1e}/{d1:.1e}, area {f['area_initial']:.4f} -> {f['area_branch1']:.4f}, "
              f"ensemble gap {f['gap']:.4f}")


def test_case3_reference_gaps(criterion):
    parts, ok = [], True
    for key, p in CASE3_POINTS.items():
        t0 = time.perf_counter()
        gap = case3_gap(p)
        dt = time.perf_counter() - t0
        ok &= abs(gap - p.gap) <= 3e-3 and dt < 1.0
        parts.append(f"{key} {gap:+.4f} (ref {p.gap:+.3f}, {dt * 1e3:.1f}ms)")
    criterion("Case III reference gaps", ok, "; ".join(parts))


def test_triangle_holds_suite(criterion):
    res = triangle_holds(seed=0, samples=10_000)
    ok = res.passed and res.seconds < 60
    criterion("Triangle-holds suite", ok,
              f"{res.checks} checks, {res.failures} violations, min slack {res.stats['min_slack']:.2e}, "
              f"{res.seconds:.2f}s")


def test_strictness_suite(criterion):
    res = strictness(seed=1, samples=10_000)
    ok = res.passed and res.stats["min_slack"] > 0
    criterion("Strictness suite", ok,
              f"{res.stats['genuinely_entangled']} states, min slack {res.stats['min_slack']:.3e} > 0, "
              f"{res.failures} saturations")


def test_violation_existence(criterion):
    worst, ok = -np.inf, True
    for alpha in (1.1, 1.5, 2.0):
        for spec in QUBIT_MEASURES:
            w = triangle_violation_witness(spec.with_alpha(alpha))
            worst = max(worst, w.slack)
            ok &= w.slack < -1e-8
    criterion("Violation-existence suite", ok, f"18 witnesses, largest slack {worst:.2e} < -1e-8")


def test_monotonicity_suite(criterion):
    res = monotonicity(seed=2, samples=1000, measurements_per_state=10, alphas=(0.25, 0.5))
    gaps = {}
    for alpha in (0.6, 0.75, 0.9):
        for spec in QUBIT_MEASURES:
            gaps[(spec.label, alpha)] = case2_violation(spec.with_alpha(alpha)).gap
    worst_case2 = max(gaps.values())
    ok = res.passed and worst_case2 < -1e-8
    criterion("Monotonicity suite", ok,
              f"{res.checks} gaps, min {res.stats['min_gap']:.2e} >= -1e-9; Case II 18 constructions, "
              f"least negative {worst_case2:.2e} < -1e-8")


def test_hessian_suite(criterion):
    res = hessian(seed=3, samples=1000)
    s = res.stats
    criterion("Hessian suite", res.passed,
              f"max D1 {s['D1']:.2e}, min D2 {s['D2']:.2e}, max |D3| rel {s['D3_rel']:.1e}, "
              f"min det H (E^alpha) {s['det_ealpha']:.2e}")


def test_gaussian_suite(criterion):
    res = gaussian_relations(seed=4, samples=1000)
    criterion("Gaussian suite", res.passed,
              f"{res.checks} CMs, max |det-1| {res.stats['max_det_error']:.1e}, "
              f"min chain margin {res.stats['min_chain_margin']:.2e}")


def test_hybrid_suite(criterion):
    res = hybrid_sweep(n=50)
    grid = np.linspace(-2.0, 2.0, 50)
    worst = 0.0
    for a1 in grid:
        for a2 in grid:
            h = HybridState(a1, a2)
            worst = max(worst, float(np.max(np.abs(np.subtract(hybrid_impurities(h), fock_impurities(h))))))
    ok = res.passed and worst <= 1e-10
    criterion("Hybrid suite", ok,
              f"2500 points, max area {res.stats['max_area']:.6f}, diagonal max {res.stats['max_diagonal_area']:.1e}, "
              f"Fock oracle max diff {worst:.1e}")


def test_polygon_suite(criterion):
    res = polygon(seed=5, samples=1000)
    criterion("Polygon suite", res.passed,
              f"{res.checks} states (4 and 5 qubits), min slack {res.stats['min_slack']:.3f}")


def test_qudit_saturation(criterion):
    v = bipartition_vector(qudit_saturating(), MeasureSpec(MeasureKind.VON_NEUMANN)).as_array()
    err = float(np.max(np.abs(v - [2.0, 1.0, 1.0])))
    chk = triangle_check(v, 1.0)
    ok = err <= 1e-12 and abs(min(chk.slack)) <= 1e-12 and np.all(v > 0)
    criterion("Qudit saturation fixture", ok, f"S = {np.round(v, 12).tolist()}, max error {err:.1e}")


def test_bounds_sandwich(criterion):
    res = bounds_sandwich(seed=6, samples=10_000, alpha=0.5)
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(500):
        s = haar_state(rng, (2, 2, 2))
        # independent min-concurrence: sqrt(2 (1 - tr rho^2)) from the density route
        conc = [np.sqrt(2 * (1 - np.sum(np.abs(partial_trace(s, [k]).matrix) ** 2))) for k in range(3)]
        c2 = bipartition_vector(s, MeasureSpec(MeasureKind.CONCURRENCE_SQUARED)).as_array()
        lo, _ = area_bounds(c2, 0.5)
        g = gmc(bipartition_vector(s, MeasureSpec(MeasureKind.CONCURRENCE)))
        worst = max(worst, abs(g - min(conc)), abs(NORMALIZATION * lo - min(conc) ** 2))
    ok = res.passed and worst <= 1e-12
    criterion("Bounds sandwich", ok,
              f"{res.checks} area checks, {res.failures} outside; GMC reduction max error {worst:.1e}")
