"""Value types shared by the spectrum routines."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

H_LOCAL = 1.0 / (20.0 * math.pi)

TOL_REAL = 1e-7
TOL_DOUBLE = 1e-6
TOL_CONJ = 1e-6
TOL_GAP = 1e-6


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    ANTIPERIODIC = "antiperiodic"

    @property
    def t(self) -> float:
        return 0.0 if self is Boundary.PERIODIC else math.pi

    @property
    def sign(self) -> int:
        """``F = 2 * sign`` at eigenvalues of this family."""
        return 1 if self is Boundary.PERIODIC else -1


class Classification(str, enum.Enum):
    SR = "SR"
    DOUBLE = "Double"
    NONREAL = "Nonreal"


class Verdict(str, enum.Enum):
    FINITE_ZONE = "FiniteZone"
    INFINITE_ZONE = "InfiniteZone"
    UNDETERMINED = "Undetermined"


def order_index(position: int) -> int:
    """Band index at sorted position ``position``: 0, -1, 1, -2, 2, ..."""
    return -(position + 1) // 2 if position % 2 else position // 2


def index_position(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def partner(n: int, boundary: Boundary) -> int:
    """Index sharing the localization disc with ``n`` at ``t = 0`` or ``pi``."""
    return -n if boundary is Boundary.PERIODIC else -n - 1


def center(n: int, t: float) -> float:
    return (2.0 * math.pi * n + t) ** 2


@dataclass(frozen=True)
class BlochEigenvalue:
    n: int
    t: float
    lam: complex


@dataclass(frozen=True)
class RealInterval:
    """``Re(Gamma_n)``: ``kind`` is ``"empty"``, ``"point"`` or ``"interval"``."""

    kind: str
    A: float | None = None
    B: float | None = None

    @classmethod
    def empty(cls):
        return cls("empty")

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"


@dataclass(frozen=True)
class BandCurve:
    n: int
    t: tuple[float, ...]
    values: tuple[complex, ...]
    endpoint_0: complex
    endpoint_pi: complex
    real_interval: RealInterval
    a_n: float | None = None
    b_n: float | None = None
    epsilon: float | None = None
    delta: float | None = None

    @property
    def samples(self) -> list[BlochEigenvalue]:
        return [BlochEigenvalue(self.n, t, lam) for t, lam in zip(self.t, self.values)]


@dataclass(frozen=True)
class TwoPeriodicEigenvalue:
    n: int
    boundary: Boundary
    lam: complex
    multiplicity: int
    classification: Classification


@dataclass(frozen=True)
class Gap:
    left: float
    right: float
    between: tuple[int, int]

    @property
    def width(self) -> float:
        return self.right - self.left


@dataclass
class GapReport:
    horizon_N: int
    N_est: int
    intervals: list[tuple[int, RealInterval]]
    gaps: list[Gap]
    verdict: Verdict
    reason: str
    classifications: list[dict] = field(default_factory=list)
