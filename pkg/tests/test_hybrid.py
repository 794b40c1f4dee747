import numpy as np
import pytest
from scipy.special import gammaln

from trientangle.hybrid import HybridState, coherent_reduced_spectrum, hybrid_area_sweep, hybrid_impurities

CUTOFF = 40


def coherent_fock(alpha, cutoff=CUTOFF):
    n = np.arange(cutoff)
    with np.errstate(divide="ignore"):
        logs = n * np.log(abs(alpha)) if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    amp = np.exp(-0.5 * alpha ** 2 + logs - 0.5 * gammaln(n + 1))
    return amp * np.sign(alpha) ** n if alpha != 0 else amp


def fock_impurities(h):
    """Truncated-Fock state c1|0,0,a1> + c2|1,1,a2>; impurities by brute partial trace."""
    psi = np.zeros((2, 2, CUTOFF), dtype=complex)
    psi[0, 0] = h.c1 * coherent_fock(h.alpha1)
    psi[1, 1] = h.c2 * coherent_fock(h.alpha2)
    psi /= np.linalg.norm(psi)
    out = []
    for k in range(3):
        m = np.moveaxis(psi, k, 0).reshape(psi.shape[k], -1)
        rho = m @ m.conj().T
        out.append(1 - np.sum(np.abs(rho) ** 2))
    return out


def test_gram_matches_fock_oracle():
    grid = np.linspace(-2, 2, 9)
    for a1 in grid:
        for a2 in grid:
            h = HybridState(a1, a2)
            assert np.allclose(hybrid_impurities(h), fock_impurities(h), atol=1e-10)


def test_unequal_weights_match_fock_oracle():
    h = HybridState(0.3, -1.1, c1=0.6, c2=0.8j)
    assert np.allclose(hybrid_impurities(h), fock_impurities(h), atol=1e-10)


def test_overlap_and_spectrum():
    h = HybridState(0.5, -0.5)
    assert h.overlap() == pytest.approx(np.exp(-0.5))
    w = coherent_reduced_spectrum(h)
    assert w.sum() == pytest.approx(1.0)
    assert np.allclose(sorted(w), [0.5 * (1 - np.exp(-0.5)), 0.5 * (1 + np.exp(-0.5))])
    with pytest.raises(ValueError):
        HybridState(0, 0, 0, 0)


def test_sweep_properties():
    grid = np.linspace(-2, 2, 50)
    rows = hybrid_area_sweep(grid)
    assert len(rows) == 2500
    assert all(r["triangle_holds"] for r in rows)
    assert max(r["area"] for r in rows) <= 0.5 + 1e-10
    assert all(r["area"] <= 1e-10 for r in rows if r["alpha1"] == r["alpha2"])
    table = {(r["alpha1"], r["alpha2"]): r["area"] for r in rows}
    for (a1, a2), a in table.items():
        assert table[(a2, a1)] == pytest.approx(a, abs=1e-14)


def test_far_apart_coherent_states_approach_maximum():
    rows = hybrid_area_sweep([-4.0], [4.0])
    assert rows[0]["area"] == pytest.approx(0.5, abs=1e-6)
