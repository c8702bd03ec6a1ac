import math

import numpy as np
import pytest
from scipy.special import mathieu_a, mathieu_b

from hillzone import NumberingAmbiguity, fourier_potential, mathieu, sawtooth
from hillzone.spectrum import (Boundary, Classification, TwoPeriodicEigenvalue, Verdict,
                               classify, conjugation_closure, galerkin_cross_check,
                               galerkin_eigenvalues, galerkin_matrix, gaps, number_eigenvalues,
                               partner, sequence, trace_band, two_periodic_roots, verdict)
from hillzone.spectrum.galerkin import assign_indices
from hillzone.spectrum.types import center, index_position, order_index

# -y'' + 2cos(2 pi x) y = lam y is Mathieu's equation in z = pi x with
# a = lam / pi^2 and q = 1 / pi^2: a_{2k} and b_{2k} give the periodic
# eigenvalues, a_{2k+1} and b_{2k+1} the antiperiodic ones.
QM = 1 / math.pi ** 2


def mathieu_oracle(boundary, n):
    """Eigenvalue ``n`` of the 2cos(2 pi x) potential from scipy's Mathieu values."""
    if boundary is Boundary.PERIODIC:
        m = 2 * abs(n)
        if n == 0:
            return math.pi ** 2 * mathieu_a(0, QM)
        return math.pi ** 2 * (mathieu_a(m, QM) if n > 0 else mathieu_b(m, QM))
    # antiperiodic: n >= 0 is the lower of its pair
    k = n if n >= 0 else -n - 1
    m = 2 * k + 1
    return math.pi ** 2 * (mathieu_b(m, QM) if n >= 0 else mathieu_a(m, QM))


# -- numbering helpers ----------------------------------------------------------

def test_order_index_roundtrip():
    assert [order_index(p) for p in range(7)] == [0, -1, 1, -2, 2, -3, 3]
    for n in range(-20, 21):
        assert order_index(index_position(n)) == n


def test_sequence_and_partner():
    assert sequence(2) == [0, -1, 1, -2, 2]
    assert partner(3, Boundary.PERIODIC) == -3
    assert partner(3, Boundary.ANTIPERIODIC) == -4
    assert partner(-4, Boundary.ANTIPERIODIC) == 3


def test_assign_indices_conjugate_swap():
    vals = [0.0, 10 - 1j, 10 + 1j, 40 + 0j, 41 + 0j]
    idx = assign_indices(vals)
    assert idx[1] == 10 + 1j and idx[-1] == 10 - 1j
    assert idx[-2] == 40 and idx[2] == 41


# -- Galerkin ---------------------------------------------------------------

@pytest.mark.parametrize("t", [0.0, 0.7, math.pi])
def test_free_galerkin_is_exact(free, t):
    spec = number_eigenvalues(galerkin_eigenvalues(free, t, 32), t, 1)
    for n, lam in spec.items():
        assert lam == pytest.approx((2 * math.pi * n + t) ** 2, abs=1e-9)


def test_galerkin_matrix_hermitian_for_real_potential(mat):
    H = galerkin_matrix(mat, 0.3, 16)
    assert np.allclose(H, H.conj().T)
    with pytest.raises(ValueError):
        galerkin_matrix(mat, 0.3, 4)


@pytest.mark.parametrize("boundary", list(Boundary))
def test_galerkin_matches_mathieu_oracle(mat, boundary):
    spec = number_eigenvalues(galerkin_eigenvalues(mat, boundary.t, 48), boundary.t, 1)
    for n in range(-6, 6):
        assert spec[n].real == pytest.approx(mathieu_oracle(boundary, n), abs=1e-9)


@pytest.mark.parametrize("t", [0.1, 1.3, 2.9])
def test_conjugation_closure(saw, t):
    assert conjugation_closure(saw, t, 48) < 1e-8


def test_numbering_audit_raises_for_strong_potential():
    q = fourier_potential({1: 400.0, -1: 400.0})
    raw = galerkin_eigenvalues(q, 0.0, 32)
    with pytest.raises(NumberingAmbiguity):
        number_eigenvalues(raw, 0.0, 1)


# -- bands ------------------------------------------------------------------

def test_free_band_interval(free):
    b = trace_band(free, 1, grid_size=64, K=32)
    assert b.real_interval.kind == "interval"
    assert (b.real_interval.A, b.real_interval.B) == pytest.approx((4 * math.pi ** 2,
                                                                    9 * math.pi ** 2))
    assert b.epsilon is None and b.delta is None


def test_sawtooth_band_coalescence(saw):
    b = trace_band(saw, 1, K=48)
    assert b.endpoint_0.imag > 0 and abs(b.endpoint_pi.imag) > 0
    assert b.epsilon == pytest.approx(0.006332, abs=2e-5)
    assert 0 < b.epsilon < b.delta < math.pi
    assert len(b.samples) == 128


# -- roots ------------------------------------------------------------------

def _eig(n, boundary, lam, mult=1):
    return TwoPeriodicEigenvalue(n, boundary, lam, mult, Classification.SR)


@pytest.mark.parametrize("a, b, expected", [
    (40.0, 41.0, Classification.SR),
    (40.0, 40.0 + 1e-8, Classification.DOUBLE),
    (40.0 + 0.1j, 40.0 - 0.1j, Classification.NONREAL),
])
def test_classify(a, b, expected):
    e, f = _eig(1, Boundary.PERIODIC, a), _eig(-1, Boundary.PERIODIC, b)
    assert classify(e, [e, f]) is expected


def test_classify_ambiguous_cluster():
    e = _eig(5, Boundary.PERIODIC, 40.0)
    with pytest.raises(NumberingAmbiguity):
        classify(e, [e], N_est=2)


@pytest.fixture(scope="module")
def mathieu_roots():
    return two_periodic_roots(mathieu(), 500.0)


def test_roots_match_mathieu_oracle(mathieu_roots):
    assert len(mathieu_roots) >= 14
    for e in mathieu_roots:
        if abs(e.n) <= 2:
            # an unresolved pair is reported at its mean, within tol_double
            tol = 1e-6 if e.classification is Classification.DOUBLE else 1e-7
            assert e.lam.real == pytest.approx(mathieu_oracle(e.boundary, e.n), abs=tol)
            assert abs(e.lam.imag) < 1e-7


def test_roots_low_mathieu_are_sr(mathieu_roots):
    cls = {(e.boundary, e.n): e.classification for e in mathieu_roots}
    assert cls[(Boundary.PERIODIC, 1)] is Classification.SR
    assert cls[(Boundary.ANTIPERIODIC, 0)] is Classification.SR
    # the third gap (width ~3e-4) is resolved, the fourth (~9e-7) is not
    assert cls[(Boundary.ANTIPERIODIC, 1)] is Classification.SR
    assert cls[(Boundary.PERIODIC, 2)] is Classification.DOUBLE


def test_roots_cross_check(mathieu_roots, mat):
    check = galerkin_cross_check(mat, mathieu_roots, K=48)
    assert len(check.defects) >= 12
    assert check.max_defect < 1e-6


def test_free_roots_are_double(free):
    roots = two_periodic_roots(free, 400.0)
    for e in roots:
        assert e.lam.real == pytest.approx(center(e.n, e.boundary.t), abs=1e-7)
        expected = Classification.SR if (e.boundary, e.n) == (Boundary.PERIODIC, 0) \
            else Classification.DOUBLE
        assert e.classification is expected


def test_sawtooth_roots_conjugate_pairs(saw):
    roots = two_periodic_roots(saw, 2000.0)
    lam = {(e.boundary, e.n): e for e in roots}
    for n in range(1, 8):
        a, b = lam[(Boundary.PERIODIC, n)], lam[(Boundary.PERIODIC, -n)]
        assert a.classification is b.classification is Classification.NONREAL
        assert a.lam.imag > 0
        assert a.lam == pytest.approx(np.conj(b.lam), abs=1e-7)


# -- gaps -------------------------------------------------------------------

def test_mathieu_gaps(mat):
    rep = gaps(mat, 12)
    assert rep.verdict is Verdict.UNDETERMINED
    widths = [g.width for g in rep.gaps]
    oracle = [math.pi ** 2 * (mathieu_a(m, QM) - mathieu_b(m, QM)) for m in (1, 2, 3)]
    assert widths == pytest.approx(oracle, rel=1e-6)
    assert [g.between for g in rep.gaps] == [(0, -1), (-1, 1), (1, -2)]


def test_free_gaps_finite_zone(free):
    rep = gaps(free, 6)
    assert rep.verdict is Verdict.FINITE_ZONE and not rep.gaps


def test_gaps_horizon_validation(free):
    with pytest.raises(ValueError):
        gaps(free, 0)


def _pairs(kinds):
    """Synthetic classifications: ``kinds[n-1]`` for the pairs at index n."""
    out = [_eig(0, Boundary.PERIODIC, 0.0)]
    for n, k in enumerate(kinds, start=1):
        for key in ((Boundary.PERIODIC, n), (Boundary.PERIODIC, -n),
                    (Boundary.ANTIPERIODIC, n - 1), (Boundary.ANTIPERIODIC, -n)):
            out.append(TwoPeriodicEigenvalue(key[1], key[0], 0j, 1, k))
    return out


S, D, X = Classification.SR, Classification.DOUBLE, Classification.NONREAL


@pytest.mark.parametrize("kinds, expected", [
    ([S] * 9, Verdict.INFINITE_ZONE),
    ([S] * 3 + [X] * 6, Verdict.FINITE_ZONE),
    ([D] * 9, Verdict.FINITE_ZONE),
    ([S] * 3 + [D] * 6, Verdict.UNDETERMINED),
    ([S] * 7 + [D, S], Verdict.UNDETERMINED),
])
def test_verdict_rules(kinds, expected):
    v, reason = verdict(_pairs(kinds), len(kinds), 2)
    assert v is expected and reason


def test_verdict_without_reliable_indices():
    v, _ = verdict(_pairs([S] * 3), 3, 5)
    assert v is Verdict.UNDETERMINED


def test_classify_logs_real_with_nonreal_partner(caplog):
    e, f = _eig(2, Boundary.PERIODIC, 40.0), _eig(-2, Boundary.PERIODIC, 39.0 + 0.5j)
    with caplog.at_level("WARNING"):
        assert classify(e, [e, f]) is Classification.SR
    assert "nonreal partner" in caplog.text
