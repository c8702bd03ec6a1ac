"""Mean-zero 1-periodic complex potentials and their Fourier data.

A potential is held in one of three representations:

* :class:`FourierSeries` -- finitely many coefficients ``q_n``;
* :class:`PiecewisePolynomial` -- complex polynomials in the *global*
  variable ``x`` on pieces ``[b_i, b_{i+1})`` tiling ``[0, 1)``;
* :class:`Sampled` -- values on a uniform power-of-two grid, with FFT
  coefficients and a periodic cubic spline for pointwise evaluation.

PT symmetry ``conj(q(-x)) = q(x)`` is equivalent to every Fourier
coefficient ``q_n`` being real: ``conj(q_n)`` is the ``n``-th coefficient of
``conj(q(-x))``.  Equivalently ``f = Re q`` is even and ``g = Im q`` is odd,
so ``q_n = f_n + g_n`` and ``q_{-n} = f_n - g_n`` with ``f_n`` the cosine
coefficient of ``f`` and ``g_n`` the sine coefficient of ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BandwidthExceeded, InvalidPotential

TOL_MEAN = 1e-10
TOL_PT = 1e-10
TOL_FOURIER = 1e-10

# coefficient range used when a representation has no natural bandwidth
DEFAULT_PT_CHECK = 64


@dataclass(frozen=True)
class Jump:
    """A declared jump of ``component`` (``"re"`` or ``"im"``) of q.

    ``size`` is ``D(location + 0) - D(location - 0)`` where ``D`` is the
    ``order``-th derivative of that component.
    """

    location: float
    component: str
    order: int
    size: float

    def __post_init__(self):
        if self.component not in ("re", "im"):
            raise InvalidPotential(f"jump component must be 're' or 'im', got {self.component!r}")
        if not 0.0 <= self.location < 1.0:
            raise InvalidPotential(f"jump location {self.location} outside [0, 1)")
        if self.order < 0:
            raise InvalidPotential("jump derivative order must be non-negative")


@dataclass(frozen=True)
class FourierSeries:
    coeffs: Mapping[int, complex]


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Pieces ``[breakpoints[i], breakpoints[i+1])`` with ``breakpoints[0] == 0``.

    ``polys[i]`` lists complex coefficients of increasing power in global x.
    The value at a breakpoint is the right limit.
    """

    breakpoints: tuple[float, ...]
    polys: tuple[tuple[complex, ...], ...]


@dataclass(frozen=True, eq=False)
class Sampled:
    """Values at ``x_j = j / N`` for ``j = 0..N-1``, ``N`` a power of two."""

    values: np.ndarray

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def bandwidth(self) -> int:
        return self.size // 4


def _phase(n, x):
    """``exp(-2 pi i n x)`` with the argument reduced mod 1 first."""
    return np.exp(-2j * np.pi * np.mod(np.multiply.outer(n, x), 1.0))


def _poly_segment_fourier(coef: np.ndarray, a: float, b: float, ns: np.ndarray) -> np.ndarray:
    """Exact ``int_a^b p(x) exp(-2 pi i n x) dx`` for polynomial ``p``.

    Uses the terminating integration-by-parts antiderivative
    ``-exp(-i w x) * sum_j p^(j)(x) / (i w)^(j+1)``.
    """
    p = np.polynomial.Polynomial(coef)
    out = np.zeros(len(ns), dtype=complex)
    zero = ns == 0
    if zero.any():
        P = p.integ()
        out[zero] = P(b) - P(a)
    nz = ~zero
    if nz.any():
        iw = 2j * np.pi * ns[nz].astype(float)
        acc_a = np.zeros(nz.sum(), dtype=complex)
        acc_b = np.zeros(nz.sum(), dtype=complex)
        d = p
        power = iw.copy()
        for _ in range(p.degree() + 1):
            acc_a += d(a) / power
            acc_b += d(b) / power
            d = d.deriv()
            power = power * iw
        out[nz] = -(_phase(ns[nz], b) * acc_b - _phase(ns[nz], a) * acc_a)
    return out


@dataclass(frozen=True, eq=False)
class PeriodicPotential:
    """A 1-periodic complex potential with optional Sobolev index and jumps."""

    representation: FourierSeries | PiecewisePolynomial | Sampled
    smoothness_s: int = 0
    declared_jumps: tuple[Jump, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        rep = self.representation
        if self.smoothness_s < 0:
            raise InvalidPotential("smoothness_s must be non-negative")
        object.__setattr__(self, "declared_jumps", tuple(self.declared_jumps))
        if isinstance(rep, FourierSeries):
            vals = np.array(list(rep.coeffs.values()), dtype=complex)
            if not np.all(np.isfinite(vals)):
                raise InvalidPotential("non-finite Fourier coefficient")
        elif isinstance(rep, PiecewisePolynomial):
            bps = rep.breakpoints
            if len(bps) != len(rep.polys) or not bps or bps[0] != 0.0:
                raise InvalidPotential("breakpoints must start at 0 and match the pieces")
            if any(b1 <= b0 for b0, b1 in zip(bps, bps[1:])) or bps[-1] >= 1.0:
                raise InvalidPotential("breakpoints must increase strictly inside [0, 1)")
            for poly in rep.polys:
                if not poly or not np.all(np.isfinite(np.asarray(poly, dtype=complex))):
                    raise InvalidPotential("empty or non-finite polynomial piece")
        elif isinstance(rep, Sampled):
            v = np.asarray(rep.values)
            n = len(v)
            if n < 8 or n & (n - 1):
                raise InvalidPotential(f"sample count {n} is not a power of two >= 8")
            if not np.all(np.isfinite(v)):
                raise InvalidPotential("non-integrable sample data (NaN or Inf)")
        else:
            raise InvalidPotential(f"unknown representation {type(rep).__name__}")

    # -- basic data -------------------------------------------------------

    @property
    def kind(self) -> str:
        return {FourierSeries: "fourier", PiecewisePolynomial: "piecewise",
                Sampled: "sampled"}[type(self.representation)]

    @property
    def bandwidth(self) -> int | None:
        """Largest resolvable |n|, or None when every index is exact."""
        if isinstance(self.representation, Sampled):
            return self.representation.bandwidth
        return None

    def _check_band(self, ns):
        bw = self.bandwidth
        if bw is not None:
            worst = int(np.max(np.abs(ns))) if len(ns) else 0
            if worst > bw:
                raise BandwidthExceeded(worst, bw)

    def component_coefficients(self, ns) -> tuple[np.ndarray, np.ndarray]:
        """Exponential Fourier coefficients of ``Re q`` and ``Im q`` at ``ns``."""
        ns = np.atleast_1d(np.asarray(ns, dtype=np.int64))
        self._check_band(ns)
        rep = self.representation
        if isinstance(rep, FourierSeries):
            c = rep.coeffs
            qp = np.array([complex(c.get(int(n), 0.0)) for n in ns])
            qm = np.array([complex(c.get(-int(n), 0.0)) for n in ns])
            return (qp + np.conj(qm)) / 2, (qp - np.conj(qm)) / 2j
        if isinstance(rep, PiecewisePolynomial):
            fre = np.zeros(len(ns), dtype=complex)
            fim = np.zeros(len(ns), dtype=complex)
            ends = list(rep.breakpoints[1:]) + [1.0]
            for a, b, poly in zip(rep.breakpoints, ends, rep.polys):
                coef = np.asarray(poly, dtype=complex)
                fre += _poly_segment_fourier(coef.real, a, b, ns)
                fim += _poly_segment_fourier(coef.imag, a, b, ns)
            return fre, fim
        spec_re, spec_im = self._sampled_fft()
        idx = np.mod(ns, rep.size)
        return spec_re[idx], spec_im[idx]

    def coefficients(self, ns) -> np.ndarray:
        """Fourier coefficients ``q_n = int_0^1 q(x) exp(-2 pi i n x) dx``."""
        fre, fim = self.component_coefficients(ns)
        return fre + 1j * fim

    def coefficient(self, n: int) -> complex:
        return complex(self.coefficients([n])[0])

    def _sampled_fft(self):
        if "fft" not in self._cache:
            v = np.asarray(self.representation.values, dtype=complex)
            self._cache["fft"] = (np.fft.fft(v.real) / len(v), np.fft.fft(v.imag) / len(v))
        return self._cache["fft"]

    @property
    def mean(self) -> complex:
        return self.coefficient(0)

    def first_moment(self) -> complex:
        """``int_0^1 x q(x) dx``."""
        rep = self.representation
        if isinstance(rep, FourierSeries):
            # int_0^1 x exp(2 pi i n x) dx = 1 / (2 pi i n) for n != 0
            total = complex(rep.coeffs.get(0, 0.0)) / 2
            for n, c in rep.coeffs.items():
                if n != 0:
                    total += complex(c) / (2j * math.pi * n)
            return total
        if isinstance(rep, PiecewisePolynomial):
            total = 0j
            ends = list(rep.breakpoints[1:]) + [1.0]
            for a, b, poly in zip(rep.breakpoints, ends, rep.polys):
                P = (np.polynomial.Polynomial(np.asarray(poly, dtype=complex))
                     * np.polynomial.Polynomial([0, 1])).integ()
                total += P(b) - P(a)
            return complex(total)
        P = self._spline_pp()
        x = P["breaks"]
        total = 0j
        # exact moment of the interpolating spline, piece by piece
        for i in range(len(x) - 1):
            c = P["coefs"][i]
            h = x[i + 1] - x[i]
            # int_0^h (x_i + u) * sum_k c_k u^k du
            for k, ck in enumerate(c):
                total += ck * (x[i] * h ** (k + 1) / (k + 1) + h ** (k + 2) / (k + 2))
        return complex(total)

    # -- pointwise evaluation ----------------------------------------------

    def __call__(self, x):
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        rep = self.representation
        if isinstance(rep, FourierSeries):
            out = np.zeros(x.shape, dtype=complex)
            for n, c in rep.coeffs.items():
                out = out + complex(c) * np.exp(2j * np.pi * n * x)
            return out
        if isinstance(rep, PiecewisePolynomial):
            idx = np.searchsorted(np.asarray(rep.breakpoints), x, side="right") - 1
            out = np.zeros(x.shape, dtype=complex)
            for i, poly in enumerate(rep.polys):
                m = idx == i
                if np.any(m):
                    out[m] = np.polynomial.polynomial.polyval(x[m], np.asarray(poly, dtype=complex))
            return out
        re, im = self._splines()
        return re(x) + 1j * im(x)

    def _splines(self):
        if "spline" not in self._cache:
            v = np.asarray(self.representation.values, dtype=complex)
            n = len(v)
            xs = np.arange(n + 1) / n
            vv = np.append(v, v[0])
            self._cache["spline"] = (CubicSpline(xs, vv.real, bc_type="periodic"),
                                     CubicSpline(xs, vv.imag, bc_type="periodic"))
        return self._cache["spline"]

    def _spline_pp(self):
        re, im = self._splines()
        # scipy stores highest power first; flip to increasing, local variable
        coefs = (re.c + 1j * im.c)[::-1].T.copy()
        return {"breaks": re.x, "coefs": coefs}

    def kernel_data(self):
        """Arrays for the monodromy kernel: ``(mode, freqs, fcoefs, breaks, pcoefs)``."""
        if "kernel" in self._cache:
            return self._cache["kernel"]
        rep = self.representation
        dummy_f = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=complex))
        if isinstance(rep, FourierSeries):
            items = sorted((n, complex(c)) for n, c in rep.coeffs.items() if c != 0)
            freqs = np.array([n for n, _ in items], dtype=np.int64)
            fco = np.array([c for _, c in items], dtype=complex)
            data = (0, freqs, fco, np.array([0.0, 1.0]), np.zeros((1, 1), dtype=complex))
        elif isinstance(rep, PiecewisePolynomial):
            deg = max(len(p) for p in rep.polys)
            breaks = np.array(list(rep.breakpoints) + [1.0])
            local = np.zeros((len(rep.polys), deg), dtype=complex)
            for i, poly in enumerate(rep.polys):
                p = np.polynomial.Polynomial(np.asarray(poly, dtype=complex))
                a = breaks[i]
                # Taylor shift to u = x - a
                for j in range(deg):
                    local[i, j] = p.deriv(j)(a) / math.factorial(j)
            data = (1, *dummy_f, breaks, local)
        else:
            pp = self._spline_pp()
            data = (1, *dummy_f, np.asarray(pp["breaks"], dtype=float), pp["coefs"])
        self._cache["kernel"] = data
        return data

    def bounds(self) -> tuple[float, float]:
        """``(lower bound of Re q, upper bound of |Im q|)`` on ``[0, 1)``.

        Every Bloch eigenvalue satisfies ``Re lam >= inf Re q`` and
        ``|Im lam| <= sup |Im q|`` (numerical range of ``L_t``).
        """
        rep = self.representation
        if isinstance(rep, FourierSeries):
            total = sum(abs(complex(c)) for n, c in rep.coeffs.items() if n != 0)
            c0 = complex(rep.coeffs.get(0, 0.0))
            return c0.real - total, abs(c0.imag) + total
        xs = np.linspace(0.0, 1.0, 4097)[:-1]
        if isinstance(rep, PiecewisePolynomial):
            xs = np.unique(np.concatenate([xs, rep.breakpoints, np.array(rep.breakpoints[1:]) - 1e-12,
                                           [1.0 - 1e-12]]))
        v = self(xs)
        span = max(float(np.ptp(v.real)), float(np.ptp(v.imag)), 1e-3)
        return float(v.real.min()) - 0.05 * span, float(np.abs(v.imag).max()) + 0.05 * span

    def is_normalized(self, tol_mean: float = TOL_MEAN) -> bool:
        return abs(self.mean) < tol_mean

    def replace(self, representation) -> "PeriodicPotential":
        return PeriodicPotential(representation, self.smoothness_s, self.declared_jumps)


# -- constructors -------------------------------------------------------------

def fourier_potential(coeffs: Mapping[int, complex], smoothness_s: int = 0,
                      jumps: Sequence[Jump] = ()) -> PeriodicPotential:
    return PeriodicPotential(FourierSeries({int(n): complex(c) for n, c in coeffs.items()}),
                             smoothness_s, tuple(jumps))


def piecewise_potential(breakpoints: Sequence[float], polys: Sequence[Sequence[complex]],
                        smoothness_s: int = 0, jumps: Sequence[Jump] = ()) -> PeriodicPotential:
    rep = PiecewisePolynomial(tuple(float(b) for b in breakpoints),
                              tuple(tuple(complex(c) for c in p) for p in polys))
    return PeriodicPotential(rep, smoothness_s, tuple(jumps))


def sampled_potential(values, smoothness_s: int = 0, jumps: Sequence[Jump] = ()) -> PeriodicPotential:
    return PeriodicPotential(Sampled(np.asarray(values, dtype=complex).copy()),
                             smoothness_s, tuple(jumps))


def sample_function(func: Callable, size: int = 1024, **kw) -> PeriodicPotential:
    """Sample ``func`` on the uniform grid ``j / size``."""
    x = np.arange(size) / size
    return sampled_potential(np.asarray(func(x), dtype=complex), **kw)


def sawtooth(amplitude: float = 1.0) -> PeriodicPotential:
    """``i * amplitude * (1/2 - x)`` on (0, 1): Im q jumps by ``amplitude`` at 0."""
    return piecewise_potential([0.0], [[0.5j * amplitude, -1j * amplitude]], smoothness_s=0,
                               jumps=[Jump(0.0, "im", 0, float(amplitude))])


def mathieu(amplitude: float = 1.0) -> PeriodicPotential:
    """``2 * amplitude * cos(2 pi x)``."""
    return fourier_potential({1: amplitude, -1: amplitude}, smoothness_s=2)


def exponential(amplitude: float = 1.0) -> PeriodicPotential:
    """``amplitude * exp(2 pi i x)``."""
    return fourier_potential({1: amplitude}, smoothness_s=2)


# -- operations ---------------------------------------------------------------

def normalize(q: PeriodicPotential) -> PeriodicPotential:
    """Subtract the mean so that ``q_0 = 0``; other coefficients are untouched."""
    rep = q.representation
    if isinstance(rep, FourierSeries):
        coeffs = {n: c for n, c in rep.coeffs.items() if n != 0}
        return q.replace(FourierSeries(coeffs))
    m = q.mean
    if isinstance(rep, PiecewisePolynomial):
        polys = tuple((poly[0] - m,) + tuple(poly[1:]) for poly in rep.polys)
        return q.replace(PiecewisePolynomial(rep.breakpoints, polys))
    v = np.asarray(rep.values, dtype=complex)
    return q.replace(Sampled(v - v.mean()))


@dataclass(frozen=True)
class PTReport:
    is_pt: bool
    max_violation: float
    n_checked: int


def validate_pt(q: PeriodicPotential, tol_pt: float = TOL_PT,
                n_check: int = DEFAULT_PT_CHECK) -> PTReport:
    """PT symmetry holds iff every ``q_n`` is real; check ``|n| <= n_check``."""
    rep = q.representation
    if isinstance(rep, FourierSeries):
        ns = np.array(sorted(set(rep.coeffs) | {-n for n in rep.coeffs}), dtype=np.int64)
    else:
        top = n_check if q.bandwidth is None else min(n_check, q.bandwidth)
        ns = np.arange(-top, top + 1)
    viol = float(np.max(np.abs(q.coefficients(ns).imag))) if len(ns) else 0.0
    return PTReport(viol <= tol_pt, viol, int(np.max(np.abs(ns))) if len(ns) else 0)


@dataclass(frozen=True)
class FourierTriple:
    n: int
    q_plus: float
    q_minus: float
    f_n: float
    g_n: float

    def identity_defect(self) -> float:
        return max(abs(self.q_plus - (self.f_n + self.g_n)),
                   abs(self.q_minus - (self.f_n - self.g_n)))


def fourier_triple(q: PeriodicPotential, n: int, tol_fourier: float = TOL_FOURIER) -> FourierTriple:
    """``(q_n, q_{-n}, f_n, g_n)`` with ``f_n``, ``g_n`` the cosine/sine
    coefficients of ``Re q`` and ``Im q`` computed from the components.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    fre, fim = q.component_coefficients([n, -n])
    qp, qm = fre + 1j * fim
    if isinstance(q.representation, FourierSeries):
        # stored values round-trip exactly; the component split costs a bit
        c = q.representation.coeffs
        qp, qm = complex(c.get(n, 0.0)), complex(c.get(-n, 0.0))
    f_n = float(fre[0].real)        # int Re q cos(2 pi n x)
    g_n = float(-fim[0].imag)       # int Im q sin(2 pi n x)
    if max(abs(qp.imag), abs(qm.imag)) > tol_fourier:
        raise InvalidPotential(f"q_{n} or q_-{n} is not real; potential is not PT-symmetric")
    return FourierTriple(int(n), float(qp.real), float(qm.real), f_n, g_n)
