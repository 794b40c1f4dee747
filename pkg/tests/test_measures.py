import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trientangle.errors import UnsupportedMeasureError
from trientangle.fixtures import qudit_saturating
from trientangle.measures import (
    QUBIT_MEASURES,
    MeasureKind,
    MeasureSpec,
    bipartition_vector,
    lambda_profile,
    measure_derivatives,
    measure_of_lambda,
    measure_of_spectrum,
    measure_of_state,
)
from trientangle.states import ghz, partial_trace, product_state, w_class

K = MeasureKind


def spectrum_oracle(kind, p, q=2.0):
    """Textbook definitions evaluated directly on a probability vector."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    if kind is K.VON_NEUMANN:
        return float(-np.sum(nz * np.log2(nz)))
    if kind is K.TSALLIS:
        return float((1 - np.sum(nz ** q)) / (q - 1))
    if kind is K.RENYI2:
        return float(-np.log2(np.sum(p ** 2)))
    if kind is K.IMPURITY:
        return float(1 - np.sum(p ** 2))
    if kind is K.CONCURRENCE_SQUARED:
        return float(2 * (1 - np.sum(p ** 2)))
    if kind is K.SCHMIDT_WEIGHT:
        return float(2 * p.min())
    if kind is K.NEGATIVITY_SQUARED:
        return float(4 * p[0] * p[1])
    if kind is K.CONCURRENCE:
        return float(np.sqrt(2 * (1 - np.sum(p ** 2))))
    raise AssertionError(kind)


@pytest.mark.parametrize("lam", [0.0, 0.01, 0.25, 0.3, 0.5])
@pytest.mark.parametrize("kind", list(K))
def test_lambda_forms_match_spectrum_oracle(kind, lam):
    spec = MeasureSpec(kind, q=2.0)
    want = spectrum_oracle(kind, [1 - lam, lam])
    assert measure_of_lambda(spec, lam) == pytest.approx(want, abs=1e-14)


def test_quarter_values():
    at = {k: float(measure_of_lambda(MeasureSpec(k), 0.25)) for k in K}
    assert at[K.SCHMIDT_WEIGHT] == pytest.approx(0.5)
    assert at[K.CONCURRENCE_SQUARED] == pytest.approx(0.75)
    assert at[K.NEGATIVITY_SQUARED] == pytest.approx(0.75)
    assert at[K.TSALLIS] == pytest.approx(0.375)
    assert at[K.RENYI2] == pytest.approx(-np.log2(5 / 8))
    assert at[K.IMPURITY] == pytest.approx(0.375)
    assert at[K.VON_NEUMANN] == pytest.approx(2 - 0.75 * np.log2(3))


@pytest.mark.parametrize("q", [1.5, 3.0, 5.0])
def test_tsallis_other_orders(q):
    spec = MeasureSpec(K.TSALLIS, q=q)
    for lam in (0.05, 0.2, 0.45):
        assert measure_of_lambda(spec, lam) == pytest.approx(spectrum_oracle(K.TSALLIS, [1 - lam, lam], q))


def test_tsallis_rejects_small_q():
    with pytest.raises(ValueError):
        MeasureSpec(K.TSALLIS, q=0.5)


def test_tsallis_near_one_is_von_neumann():
    lam = 0.2
    vn = measure_of_lambda(MeasureSpec(K.VON_NEUMANN), lam)
    assert measure_of_lambda(MeasureSpec(K.TSALLIS, q=1.0), lam) == pytest.approx(vn, abs=1e-12)
    # natural-log Tsallis tends to S * ln 2
    assert measure_of_lambda(MeasureSpec(K.TSALLIS, q=1.0 + 1e-4), lam) == pytest.approx(
        vn * np.log(2), rel=1e-3)


def test_tiny_lambda_is_stable():
    for spec in QUBIT_MEASURES:
        e = measure_of_lambda(spec, 1e-300)
        assert np.isfinite(e) and e >= 0


def test_lambda_out_of_range():
    with pytest.raises(ValueError):
        measure_of_lambda(MeasureSpec(K.VON_NEUMANN), 0.6)
    with pytest.raises(ValueError):
        measure_of_lambda(MeasureSpec(K.VON_NEUMANN), -0.1)


@pytest.mark.parametrize("spec", QUBIT_MEASURES + (MeasureSpec(K.IMPURITY), MeasureSpec(K.TSALLIS, q=3.0)),
                         ids=lambda s: s.label)
def test_derivatives_match_finite_differences(spec):
    lam = np.linspace(0.05, 0.45, 9)
    h = 1e-5
    d1, d2 = measure_derivatives(spec, lam)
    f = lambda x: measure_of_lambda(spec, x)  # noqa: E731
    fd1 = (f(lam + h) - f(lam - h)) / (2 * h)
    fd2 = (f(lam + h) - 2 * f(lam) + f(lam - h)) / h ** 2
    assert np.allclose(d1, fd1, rtol=1e-7, atol=1e-8)
    assert np.allclose(d2, fd2, rtol=1e-4, atol=1e-4)


def test_qudit_spectrum():
    spec = MeasureSpec(K.VON_NEUMANN)
    assert measure_of_spectrum(spec, [0.25] * 4) == pytest.approx(2.0, abs=1e-12)
    for kind in (K.SCHMIDT_WEIGHT, K.NEGATIVITY_SQUARED):
        with pytest.raises(UnsupportedMeasureError):
            measure_of_spectrum(MeasureSpec(kind), [0.25] * 4)
    v = bipartition_vector(qudit_saturating(), spec).as_array()
    assert np.allclose(v, [2, 1, 1], atol=1e-12)


def test_measure_of_state_matches_lambda_route():
    s = w_class(0.8, 0.36, 0.48)
    rho = partial_trace(s, [0])
    lam = np.linalg.eigvalsh(rho.matrix)[0]
    for spec in QUBIT_MEASURES:
        assert measure_of_state(spec, rho) == pytest.approx(measure_of_lambda(spec, lam), abs=1e-12)


def test_bipartition_vectors_of_reference_states():
    c = MeasureSpec(K.CONCURRENCE)
    assert np.allclose(bipartition_vector(ghz(), c).as_array(), 1.0)
    assert np.allclose(bipartition_vector(product_state(), c).as_array(), 0.0)
    v = bipartition_vector(w_class(1, 1, 1), MeasureSpec(K.CONCURRENCE_SQUARED))
    assert np.allclose(v.as_array(), 8 / 9)
    assert len(v.labels) == 3
    assert np.allclose(lambda_profile(w_class(1, 1, 1)), 1 / 3)


def test_parse_aliases():
    assert MeasureSpec.parse("vn").kind is K.VON_NEUMANN
    assert MeasureSpec.parse("C2", alpha=0.5).alpha == 0.5
    assert MeasureSpec.parse("tsallis", q=3).q == 3
    with pytest.raises(ValueError):
        MeasureSpec.parse("bogus")


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(0.0, 0.5))
def test_measures_increase_with_lambda(a, b):
    lo, hi = min(a, b), max(a, b)
    for spec in QUBIT_MEASURES:
        assert measure_of_lambda(spec, lo) <= measure_of_lambda(spec, hi) + 1e-15
