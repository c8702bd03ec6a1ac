"""Invariants checked over generated potentials and spectral parameters."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hillzone import (discriminant, fourier_potential, fourier_triple, mathieu, membership,
                      monodromy, normalize, p_coefficients, piecewise_potential,
                      sampled_potential, sawtooth, theorem5_check, theorem6_check)
from hillzone.spectrum import (H_LOCAL, Boundary, BlochSweep, Classification,
                               conjugation_closure, endpoint_eigenvalues, gaps, trace_bands)

coef = st.floats(-1.0, 1.0, allow_nan=False).filter(lambda c: abs(c) > 1e-3)
FAST = settings(max_examples=25, deadline=None)


@st.composite
def pt_fourier(draw, max_n=4):
    """Real coefficients on a random support inside ``0 < |n| <= max_n``."""
    ns = draw(st.sets(st.integers(-max_n, max_n).filter(bool), min_size=1, max_size=5))
    return fourier_potential({n: draw(coef) for n in ns})


@st.composite
def square_plus_sawtooth(draw):
    """Even step ``b`` on |x| < 1/4 (else ``-b``) plus ``i a (1/2 - x)``."""
    a = draw(st.floats(0.2, 2.0))
    b = draw(st.floats(-0.4, 0.4))
    return piecewise_potential([0.0, 0.25, 0.75],
                               [[b + 0.5j * a, -1j * a], [-b + 0.5j * a, -1j * a],
                                [b + 0.5j * a, -1j * a]])


# -- potential ------------------------------------------------------------------

@FAST
@given(pt_fourier(), st.integers(1, 6))
def test_triple_identity_and_roundtrip(q, n):
    tr = fourier_triple(q, n)
    stored = q.representation.coeffs
    assert tr.q_plus == stored.get(n, 0.0)
    assert tr.q_minus == stored.get(-n, 0.0)
    assert tr.identity_defect() <= 1e-10


@FAST
@given(square_plus_sawtooth(), st.integers(1, 40))
def test_triple_identity_piecewise(q, n):
    assert fourier_triple(q, n).identity_defect() <= 1e-10


@FAST
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=16, max_size=16))
def test_normalize_idempotent_sampled(values):
    q = sampled_potential(values)
    once = normalize(q)
    ns = np.arange(-4, 5)
    assert normalize(once).coefficients(ns) == pytest.approx(once.coefficients(ns), abs=1e-13)


@FAST
@given(pt_fourier(), coef)
def test_normalize_idempotent_fourier(q, c0):
    q = fourier_potential({**q.representation.coeffs, 0: c0})
    once = normalize(q)
    assert normalize(once).representation.coeffs == once.representation.coeffs


@FAST
@given(st.floats(0.1, 5.0), st.sampled_from([0, 2]))
def test_jump_decay_law(amp, s):
    # order 0: i amp (1/2 - x), Im q jumps by amp at 0
    # order 2: i amp (x/2 - 3x^2/2 + x^3), (Im q)'' jumps by -6 amp at 0
    poly = [0.5j * amp, -1j * amp] if s == 0 else [0.0, 0.5j * amp, -1.5j * amp, 1j * amp]
    c = amp if s == 0 else -6 * amp
    q = piecewise_potential([0.0], [poly])
    for n in (64, 128, 256):
        g = abs(fourier_triple(q, n).g_n)
        assert g * (2 * math.pi * n) ** (s + 1) == pytest.approx(abs(c), rel=0.1)


# -- floquet --------------------------------------------------------------------

lam_disc = st.builds(lambda r, a: r * complex(math.cos(a), math.sin(a)),
                     st.floats(0.0, 1e4), st.floats(0.0, 2 * math.pi))


@FAST
@given(lam_disc)
def test_wronskian_relative_to_scale(lam):
    for q in (mathieu(), sawtooth()):
        r = monodromy(q, lam)
        assert r.wronskian_error <= 1e-8 * r.wronskian_scale


@settings(max_examples=20, deadline=None)
@given(st.floats(1.0, 800.0), st.floats(-5.0, 5.0))
def test_cauchy_riemann(x, y):
    q = sawtooth()
    lam, h = complex(x, y), 1e-3
    F = lambda z: monodromy(q, z, tol_ode=1e-12).discriminant
    dx = (F(lam + h) - F(lam - h)) / (2 * h)
    dy = (F(lam + 1j * h) - F(lam - 1j * h)) / (2 * h)
    assert abs(dx + 1j * dy) <= 1e-5 * max(abs(dx), 1.0)


@pytest.mark.parametrize("q", [mathieu(), fourier_potential({1: 0.5, -1: 0.5, 2: 0.2, -2: 0.2})])
def test_discriminant_asymptotic_bound(q):
    lam = np.linspace(100.0, 4000.0, 300)
    scaled = np.abs(discriminant(q, lam) - 2 * np.cos(np.sqrt(lam))) * np.sqrt(lam)
    # a constant fitted on the lower half also bounds the upper half
    assert scaled[150:].max() <= 1.5 * scaled[:150].max()


@FAST
@given(pt_fourier(max_n=3), st.floats(-10.0, 300.0))
def test_pt_discriminant_real(q, lam):
    assert abs(discriminant(q, [lam])[0].imag) <= 1e-8


# -- spectrum -------------------------------------------------------------------

@settings(max_examples=10, deadline=None)
@given(pt_fourier(max_n=3), st.floats(0.0, math.pi))
def test_conjugation_closure_pt(q, t):
    assert conjugation_closure(q, t, 32) < 1e-6


@pytest.fixture(scope="module")
def mathieu_sweep():
    return BlochSweep(mathieu(), 48, 128)


@pytest.fixture(scope="module")
def sawtooth_sweep():
    return BlochSweep(sawtooth(), 48, 128)


def test_ordering_law(mathieu_sweep):
    N = 8
    iv = {n: b.real_interval for n, b in trace_bands(mathieu_sweep, range(-N - 1, N + 1)).items()}
    for n in range(max(mathieu_sweep.N_est, 1), N):
        chain = [iv[-n].A, iv[-n].B, iv[n].A, iv[n].B, iv[-n - 1].A, iv[-n - 1].B]
        assert chain[0] < chain[1] and chain[2] < chain[3] and chain[4] < chain[5]
        assert all(b <= a + 1e-6 for b, a in zip(chain[1::2], chain[2::2]))


@pytest.mark.parametrize("sweep_name", ["mathieu_sweep", "sawtooth_sweep"])
def test_real_on_middle(request, sweep_name):
    sweep = request.getfixturevalue(sweep_name)
    for t in (H_LOCAL, math.pi / 2, math.pi - H_LOCAL):
        spec = sweep.at(t)
        for n, lam in spec.items():
            if abs(n) >= max(sweep.N_est, 1):
                assert abs(lam.imag) <= sweep.tol_real


def test_gap_law_sr(mathieu_sweep):
    q = mathieu_sweep.q
    eigs = {(e.boundary, e.n): e for e in endpoint_eigenvalues(mathieu_sweep, 6)}
    checked = 0
    for (b, n), e in eigs.items():
        if b is Boundary.PERIODIC and n > 0 and e.classification is Classification.SR:
            other = eigs[(b, -n)]
            assert other.classification is Classification.SR
            lo, hi = sorted((other.lam.real, e.lam.real))
            for lam in np.linspace(lo, hi, 12)[1:-1]:
                assert not membership(q, lam)
            checked += 1
    assert checked >= 1


@pytest.mark.parametrize("sweep_name", ["mathieu_sweep", "sawtooth_sweep"])
def test_no_gap_law(request, sweep_name):
    sweep = request.getfixturevalue(sweep_name)
    eigs = endpoint_eigenvalues(sweep, 8)
    bands = trace_bands(sweep, range(-8, 9))
    checked = 0
    for e in eigs:
        if e.boundary is Boundary.PERIODIC and e.n > 0 and e.classification is not Classification.SR:
            assert abs(bands[-e.n].real_interval.B - bands[e.n].real_interval.A) <= 1e-6
            checked += 1
    assert checked >= 3


def test_mathieu_sampled_gap_widths_agree():
    grid = np.arange(256) / 256
    q = sampled_potential(2 * np.cos(2 * np.pi * grid))
    wide = [g.width for g in gaps(q, 4).gaps]
    exact = [g.width for g in gaps(mathieu(), 4).gaps]
    assert wide == pytest.approx(exact, rel=1e-6)


# -- criteria -------------------------------------------------------------------

@FAST
@given(pt_fourier())
def test_p_real_for_pt(q):
    for r in p_coefficients(q, 10):
        assert abs(r.P_n.imag) <= 1e-9


@settings(max_examples=10, deadline=None)
@given(square_plus_sawtooth())
def test_leading_order_law(q):
    recs = p_coefficients(q, 256)
    eps = np.array([abs(r.P_n - r.leading_term) * r.n ** 2 for r in recs])
    # the correction relative to n^-2 shrinks across the window
    assert eps[128:].max() <= 0.5 * eps[8:64].max() + 1e-15


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 2.0))
def test_consistency_chain(amp):
    q = sawtooth(amp)
    assert theorem6_check(q, 0).holds
    assert theorem5_check(q, 0).holds
