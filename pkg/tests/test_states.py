import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from trientangle.errors import ValidationError
from trientangle.states import (
    DensityOperator,
    PureState,
    eigen_spectrum,
    ghz,
    haar_amplitudes,
    haar_state,
    impurity,
    partial_trace,
    party_impurities,
    product_state,
    qubit_lambdas,
    w_class,
)


def brute_partial_trace(psi, dims, keep):
    """Element-by-element reduced density matrix; slow but obviously right."""
    keep = sorted(keep)
    drop = [k for k in range(len(dims)) if k not in keep]
    kdims = [dims[k] for k in keep]
    ddims = [dims[k] for k in drop]
    n = int(np.prod(kdims))
    rho = np.zeros((n, n), dtype=complex)
    strides = [int(np.prod(dims[k + 1:])) for k in range(len(dims))]

    def flat(kidx, didx):
        idx = [0] * len(dims)
        for k, v in zip(keep, kidx):
            idx[k] = v
        for k, v in zip(drop, didx):
            idx[k] = v
        return sum(i * s for i, s in zip(idx, strides))

    kk = list(itertools.product(*[range(d) for d in kdims]))
    for a, ka in enumerate(kk):
        for b, kb in enumerate(kk):
            for dd in itertools.product(*[range(d) for d in ddims]):
                rho[a, b] += psi[flat(ka, dd)] * np.conj(psi[flat(kb, dd)])
    return rho


@pytest.mark.parametrize("dims", [(2, 2, 2), (4, 2, 2), (2, 3, 2)])
def test_partial_trace_matches_brute_force(dims):
    rng = np.random.default_rng(11)
    state = haar_state(rng, dims)
    for keep in ([0], [1], [2], [0, 1], [0, 2], [1, 2]):
        want = brute_partial_trace(state.amplitudes, dims, keep)
        got = partial_trace(state, keep).matrix
        assert np.allclose(got, want, atol=1e-13)


def test_partial_trace_rejects_trivial_keeps():
    s = ghz()
    with pytest.raises(ValueError):
        partial_trace(s, [])
    with pytest.raises(ValueError):
        partial_trace(s, [0, 1, 2])


def test_pure_state_validation():
    with pytest.raises(ValidationError):
        PureState((2, 2, 2), np.ones(8))
    with pytest.raises(ValidationError):
        PureState((2, 2), np.ones(8) / np.sqrt(8))
    s = PureState.from_vector((2, 2, 2), np.ones(8))
    assert np.isclose(np.linalg.norm(s.amplitudes), 1.0)


def test_from_terms_builds_ghz():
    s = PureState.from_terms((2, 2, 2), {"000": 1 / np.sqrt(2), "111": 1 / np.sqrt(2)})
    assert np.allclose(s.amplitudes, ghz().amplitudes)
    assert s.n_parties == 3
    assert s.tensor().shape == (2, 2, 2)


def test_density_operator_validation():
    with pytest.raises(ValidationError):
        DensityOperator(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValidationError):
        DensityOperator(np.eye(2))
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.5, -0.5]))
    rho = ghz().to_density()
    assert rho.dim == 8
    assert np.isclose(np.trace(rho.matrix @ rho.matrix).real, 1.0)


def test_eigen_spectrum_of_known_states():
    prof = eigen_spectrum(partial_trace(ghz(), [0]))
    assert np.allclose(prof.spectrum, [0.5, 0.5])
    assert prof.lambda_min == pytest.approx(0.5)
    prof = eigen_spectrum(partial_trace(product_state(), [1]))
    assert prof.lambda_min == 0.0
    w = w_class(1, 1, 1)
    assert eigen_spectrum(partial_trace(w, [2])).lambda_min == pytest.approx(1 / 3)


def test_qubit_lambdas_match_eigendecomposition():
    rng = np.random.default_rng(3)
    amps = haar_amplitudes(rng, 200, 8)
    lam = qubit_lambdas(amps)
    for a, row in zip(amps, lam):
        s = PureState((2, 2, 2), a)
        want = [np.linalg.eigvalsh(partial_trace(s, [k]).matrix)[0] for k in range(3)]
        assert np.allclose(row, want, atol=1e-12)


def test_party_impurities_match_density_route():
    rng = np.random.default_rng(5)
    amps = haar_amplitudes(rng, 20, 16)
    imp = party_impurities(amps, (2, 2, 2, 2))
    for a, row in zip(amps, imp):
        s = PureState((2, 2, 2, 2), a)
        assert np.allclose(row, [impurity(partial_trace(s, [k])) for k in range(4)], atol=1e-13)


def test_haar_is_seeded():
    a = haar_amplitudes(np.random.default_rng(1), 4, 8)
    b = haar_amplitudes(np.random.default_rng(1), 4, 8)
    assert np.array_equal(a, b)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (16,), elements=st.floats(-1, 1)))
def test_complementary_spectra_agree(raw):
    v = raw[:8] + 1j * raw[8:]
    if np.linalg.norm(v) < 1e-3:
        return
    s = PureState.from_vector((2, 2, 2), v)
    lam = qubit_lambdas(s.amplitudes[None])[0]
    assert np.all((lam >= 0) & (lam <= 0.5))
    for k in range(3):
        rest = [j for j in range(3) if j != k]
        big = np.sort(np.linalg.eigvalsh(partial_trace(s, rest).matrix))[::-1][:2]
        small = np.sort(np.linalg.eigvalsh(partial_trace(s, [k]).matrix))[::-1]
        assert np.allclose(big, small, atol=1e-10)
