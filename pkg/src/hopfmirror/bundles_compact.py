"""Compact elliptic Hopf surfaces: invariants, characters, monomial sections."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from .bundles_open import BundleLabel, SectionIndex, normalize
from .errors import InvalidSpecError, NonIntegralExponentError
from .numerics import Rational


@dataclass(frozen=True)
class SurfaceSpec:
    m0: int
    k0: int
    minf: int
    kinf: int

    def __post_init__(self) -> None:
        if self.m0 <= 0 or self.minf <= 0:
            raise InvalidSpecError("m0 and minf must be positive")
        if math.gcd(self.m0, self.k0) != 1 or math.gcd(self.minf, self.kinf) != 1:
            raise InvalidSpecError("(m0, k0) and (minf, kinf) must be primitive")

    @property
    def n(self) -> int:
        return self.m0 * self.kinf + self.minf * self.k0

    @property
    def A_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.m0, -self.minf), (self.k0, self.kinf))

    def __str__(self) -> str:
        return f"A=(({self.m0},{self.k0}),({self.minf},{self.kinf}))"


HOPF = SurfaceSpec(1, 0, 1, 1)


@dataclass(frozen=True)
class SurfaceInvariants:
    n: int
    pi1_free_rank: int
    pi1_torsion: list[int]
    algebraic: bool


def surface_invariants(A: SurfaceSpec) -> SurfaceInvariants:
    rel = Matrix([[A.m0, -A.minf, 0], [A.k0, A.kinf, 0], [0, 0, 0]])
    snf = smith_normal_form(rel, domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(3)]
    free = sum(1 for e in diag if e == 0)
    torsion = sorted(e for e in diag if e > 1)
    return SurfaceInvariants(A.n, free, torsion, A.n == 0)


@dataclass(frozen=True)
class PicardChar:
    """Character (f, g, xi = exp(2 pi i (tau*lam + theta_c))) of the fundamental group.

    Components are kept as given; ``same_class`` compares modulo the
    integrality data.
    """

    f: Fraction = Fraction(0)
    g: Fraction = Fraction(0)
    lam: Fraction = Fraction(0)
    theta_c: Fraction = Fraction(0)

    def __str__(self) -> str:
        return f"chi(f={self.f},g={self.g},lam={self.lam},theta={self.theta_c})"


def make_char(f: Rational = 0, g: Rational = 0, lam: Rational = 0, theta_c: Rational = 0) -> PicardChar:
    return PicardChar(Fraction(f), Fraction(g), Fraction(lam), Fraction(theta_c))


def in_dual_lattice(f: Fraction, g: Fraction, A: SurfaceSpec) -> bool:
    return (A.m0 * f + A.k0 * g).denominator == 1 and (-A.minf * f + A.kinf * g).denominator == 1


def char_validate(gamma: PicardChar, A: SurfaceSpec) -> PicardChar:
    if not in_dual_lattice(gamma.f, gamma.g, A):
        raise InvalidSpecError(f"{gamma}: (f, g) is not in the dual lattice of {A}")
    return gamma


def char_product(g1: PicardChar, g2: PicardChar) -> PicardChar:
    return PicardChar(g1.f + g2.f, g1.g + g2.g, g1.lam + g2.lam, g1.theta_c + g2.theta_c)


def char_inverse(gamma: PicardChar) -> PicardChar:
    return PicardChar(-gamma.f, -gamma.g, -gamma.lam, -gamma.theta_c)


def char_quotient(g0: PicardChar, g1: PicardChar) -> PicardChar:
    """g0^-1 g1."""
    return char_product(char_inverse(g0), g1)


def same_class(g1: PicardChar, g2: PicardChar) -> bool:
    return (
        (g1.f - g2.f).denominator == 1
        and (g1.g - g2.g).denominator == 1
        and g1.lam == g2.lam
        and (g1.theta_c - g2.theta_c).denominator == 1
    )


def canonical_char(A: SurfaceSpec) -> PicardChar:
    """Character of the canonical bundle (the Serre-dual twist)."""
    n = A.n
    lam = Fraction(-(A.minf + A.m0), n)
    return PicardChar(Fraction(A.k0 - A.kinf, n), lam, lam, Fraction(0))


@dataclass(frozen=True, order=True)
class MonomialSection:
    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("monomial exponents must be nonnegative")


def section_product(s1: MonomialSection, s2: MonomialSection) -> MonomialSection:
    return MonomialSection(s1.n1 + s2.n1, s1.n2 + s2.n2)


def _require_nonalgebraic(A: SurfaceSpec) -> None:
    if A.n == 0:
        raise InvalidSpecError(f"{A} is algebraic (n = 0); not covered")


def is_section(s: MonomialSection, gamma: PicardChar, A: SurfaceSpec) -> bool:
    n = A.n
    return (
        gamma.theta_c.denominator == 1
        and Fraction(A.minf * s.n1 + A.m0 * s.n2, n) == gamma.lam
        and (gamma.lam - gamma.g).denominator == 1
        and (Fraction(A.kinf * s.n1 - A.k0 * s.n2, n) - gamma.f).denominator == 1
    )


def sections(gamma: PicardChar, A: SurfaceSpec) -> list[MonomialSection]:
    """Monomials z1^n1 z2^n2 that are sections, ordered by n1."""
    _require_nonalgebraic(A)
    if gamma.theta_c.denominator != 1 or (gamma.lam - gamma.g).denominator != 1:
        return []
    total = A.n * gamma.lam
    if total.denominator != 1 or total < 0:
        return []
    total_i = int(total)
    out = []
    for n2 in range(total_i // A.m0 + 1):
        rest = total_i - A.m0 * n2
        if rest % A.minf:
            continue
        s = MonomialSection(rest // A.minf, n2)
        if is_section(s, gamma, A):
            out.append(s)
    return sorted(out)


@dataclass(frozen=True)
class CohomologyDims:
    h0: int
    h1: int
    h2: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)


def cohomology_dims(gamma: PicardChar, A: SurfaceSpec) -> CohomologyDims:
    _require_nonalgebraic(A)
    h0 = len(sections(gamma, A))
    h2 = len(sections(char_quotient(gamma, canonical_char(A)), A))
    assert not (h0 > 0 and h2 > 0), "h0 and h2 cannot both be nonzero"
    return CohomologyDims(h0, h0 + h2, h2)


class Chart(str, Enum):
    D0 = "D0"
    OPEN = "open"


def restrict_char(gamma: PicardChar, A: SurfaceSpec, chart: Chart = Chart.OPEN) -> BundleLabel:
    """Degree-zero label of the restriction to D(m0, k0) or to C* x E.

    Both charts give the same label: degree-zero labels do not remember (m, k).
    """
    _require_nonalgebraic(A)
    return normalize(A.m0, A.k0, 0, gamma.lam - gamma.g, gamma.theta_c)


def restrict_section(
    s: MonomialSection, A: SurfaceSpec, gamma: PicardChar | None = None
) -> SectionIndex:
    """Index (j, N) of the restricted section in the degree-zero basis.

    The pulled-back monomial has exponents ((kinf n1 - k0 n2)/n, (minf n1 + m0 n2)/n).
    These are integral when (f, g) is integral; otherwise the flat part
    z^f x^g of the character is split off first, which requires ``gamma``.
    """
    _require_nonalgebraic(A)
    j = Fraction(A.kinf * s.n1 - A.k0 * s.n2, A.n)
    N = Fraction(A.minf * s.n1 + A.m0 * s.n2, A.n)
    if gamma is not None:
        j, N = j - gamma.f, N - gamma.g
    if j.denominator != 1 or N.denominator != 1:
        raise NonIntegralExponentError(f"restriction of {s} has exponents ({j}, {N})")
    return SectionIndex(int(j), int(N), int(j))


def generator_interval(gamma: PicardChar, A: SurfaceSpec) -> tuple[Fraction, Fraction]:
    """Endpoints of the interval of z-indices j matching sections of gamma.

    A section (n1, n2) corresponds to j = (kinf n1 - k0 n2)/n - f; as n1 runs
    along the segment, j runs from -lam k0/m0 - f to lam kinf/minf - f.
    """
    lo = -gamma.lam * Fraction(A.k0, A.m0) - gamma.f
    hi = gamma.lam * Fraction(A.kinf, A.minf) - gamma.f
    return lo, hi


def section_from_index(j: int, gamma: PicardChar, A: SurfaceSpec) -> MonomialSection:
    """Inverse of the restriction on indices: (n1, n2) = A^T (j + f, lam)."""
    jf = j + gamma.f
    n1 = A.m0 * jf + A.k0 * gamma.lam
    n2 = -A.minf * jf + A.kinf * gamma.lam
    if n1.denominator != 1 or n2.denominator != 1:
        raise NonIntegralExponentError(f"index {j} does not give an integral monomial")
    return MonomialSection(int(n1), int(n2))
