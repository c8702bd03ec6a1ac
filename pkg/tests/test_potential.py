import math

import numpy as np
import pytest

from hillzone import (BandwidthExceeded, InvalidPotential, Jump, exponential, fourier_potential,
                      fourier_triple, mathieu, normalize, piecewise_potential, sample_function,
                      sampled_potential, sawtooth, validate_pt)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40])
def test_sawtooth_coefficients_closed_form(saw, n):
    # int_0^1 i (1/2 - x) e^(-2 pi i n x) dx = 1 / (2 pi n)
    assert saw.coefficient(n) == pytest.approx(1 / (2 * math.pi * n), abs=1e-14)
    assert saw.coefficient(-n) == pytest.approx(-1 / (2 * math.pi * n), abs=1e-14)


@pytest.mark.parametrize("n", [1, 3, 10])
def test_sawtooth_triple(saw, n):
    tr = fourier_triple(saw, n)
    assert tr.f_n == pytest.approx(0.0, abs=1e-14)
    assert tr.g_n == pytest.approx(1 / (2 * math.pi * n), rel=1e-12)
    assert tr.identity_defect() < 1e-14


def test_mathieu_coefficients(mat):
    assert np.allclose(mat.coefficients([-2, -1, 0, 1, 2]), [0, 1, 0, 1, 0])
    tr = fourier_triple(mat, 1)
    assert (tr.f_n, tr.g_n) == pytest.approx((1.0, 0.0))


def test_triple_rejects_non_pt():
    q = fourier_potential({1: 1j})
    with pytest.raises(InvalidPotential):
        fourier_triple(q, 1)


@pytest.mark.parametrize("make, expected", [
    (sawtooth, -1j / 12),
    (mathieu, 0.0),
    (exponential, 1 / (2j * math.pi)),
])
def test_first_moment(make, expected):
    assert make().first_moment() == pytest.approx(expected, abs=1e-14)


def test_sampled_first_moment_close_to_exact():
    q = sample_function(lambda x: 2 * np.cos(2 * np.pi * x) + 1j * np.sin(4 * np.pi * x), 512)
    exact = 1j / (4 * math.pi) * -1   # int x sin(4 pi x) dx = -1 / (4 pi)
    assert q.first_moment() == pytest.approx(exact, abs=1e-6)


def test_sampled_coefficients_match_fourier(sampled_mat):
    assert sampled_mat.coefficients([1, -1, 2]) == pytest.approx([1, 1, 0], abs=1e-13)
    assert sampled_mat.bandwidth == 64


def test_bandwidth_exceeded(sampled_mat):
    with pytest.raises(BandwidthExceeded) as err:
        sampled_mat.coefficients([65])
    assert err.value.payload()["bandwidth"] == 64


@pytest.mark.parametrize("values", [np.zeros(12), np.zeros(4), np.array([0.0] * 7 + [np.nan])])
def test_sampled_validation(values):
    with pytest.raises(InvalidPotential):
        sampled_potential(values)


@pytest.mark.parametrize("bps, polys", [
    ([0.1], [[1.0]]),
    ([0.0, 0.5, 0.4], [[1.0], [1.0], [1.0]]),
    ([0.0, 0.5], [[1.0]]),
    ([0.0], [[]]),
])
def test_piecewise_validation(bps, polys):
    with pytest.raises(InvalidPotential):
        piecewise_potential(bps, polys)


def test_jump_validation():
    with pytest.raises(InvalidPotential):
        Jump(0.0, "imag", 0, 1.0)
    with pytest.raises(InvalidPotential):
        Jump(1.0, "im", 0, 1.0)


def test_pointwise_evaluation(saw, sampled_mat):
    x = np.array([0.0, 0.25, 0.9])
    assert saw(x) == pytest.approx(1j * (0.5 - x))
    grid = np.arange(256) / 256
    assert sampled_mat(grid) == pytest.approx(2 * np.cos(2 * np.pi * grid), abs=1e-12)
    assert sampled_mat(0.3 + 1 / 512) == pytest.approx(2 * np.cos(2 * np.pi * (0.3 + 1 / 512)),
                                                       abs=1e-6)


@pytest.mark.parametrize("q", [
    fourier_potential({0: 3.0, 1: 1.0}),
    piecewise_potential([0.0, 0.5], [[1.0, 2.0], [0.5j]]),
    sampled_potential(np.arange(16) + 1j),
])
def test_normalize(q):
    z = normalize(q)
    assert abs(z.mean) < 1e-14
    assert z.is_normalized()
    assert z.coefficients([1, -2, 3]) == pytest.approx(q.coefficients([1, -2, 3]), abs=1e-14)
    assert normalize(z).coefficients([0, 1, 2]) == pytest.approx(z.coefficients([0, 1, 2]),
                                                                 abs=1e-15)


def test_validate_pt():
    assert validate_pt(sawtooth()).is_pt
    assert validate_pt(mathieu()).is_pt
    report = validate_pt(fourier_potential({1: 1j, -1: 0.5}))
    assert not report.is_pt
    assert report.max_violation == pytest.approx(1.0)


def test_bounds_enclose_values(saw, mat):
    lo, im = saw.bounds()
    assert lo <= 0.0 and im >= 0.5
    lo, im = mat.bounds()
    assert lo <= -2.0 and im >= 0.0


def test_kernel_data_piecewise_is_local_taylor():
    q = piecewise_potential([0.0, 0.5], [[1.0, 2.0], [0.0, 0.0, 1.0]])
    mode, _, _, breaks, local = q.kernel_data()
    assert mode == 1
    assert list(breaks) == [0.0, 0.5, 1.0]
    # x^2 around 0.5: 0.25 + 1.0 u + u^2
    assert local[1] == pytest.approx([0.25, 1.0, 1.0])
