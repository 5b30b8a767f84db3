"""Line bundles on C* x E and their theta-function sections.

A label ``(m, k, d, eta, nu)`` names the bundle whose fibre over z is a
degree ``m*d`` bundle on the elliptic curve, twisted by
``xi = exp(2 pi i (tau*eta + nu))`` and by ``z^(k*d)``.

Sign convention. A section of ``L(m, k, d, xi)`` with ``M = m*d > 0`` and
``K = k*d`` is

    sigma_(j,a)(z, x) = sum_l q^((a - eta + M l)^2 / 2M) e^(-2 pi i nu (a - eta + M l)/M)
                               z^(j - K l) x^(a + M l)

and for ``M = K = 0`` it is the monomial ``z^j x^eta`` (``eta``, ``nu`` integral).
Both satisfy ``s(z, q x) = xi z^K x^-M q^(-M/2) s(z, x)``. This is the only
choice that makes degree-zero sections, the product rule against a degree-zero
factor and the quadratic exponent of products mutually consistent.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .errors import NegativeDegreeError, ProjectionFailureError, UncoveredCaseError
from .numerics import ModularParam, Rational, ThetaSpec, qpow, theta

DEFAULT_MP = ModularParam(1j)

# Sign of the third phase term, fixed against the series oracle by
# ``resolve_theta_sign``; recorded in every verification report.
THETA_THIRD_TERM_SIGN = 1

SERIES_CUTOFF = 1e-60


@dataclass(frozen=True, order=True)
class BundleLabel:
    m: int
    k: int
    d: int
    eta: Fraction = Fraction(0)
    nu: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.d == 0 and (self.m, self.k) != (1, 0):
            raise ValueError("degree-zero labels are stored as (1, 0, 0); use normalize()")
        if math.gcd(self.m, self.k) != 1:
            raise ValueError("(m, k) must be primitive; use normalize()")
        if self.m < 0 or (self.m == 0 and self.k < 0):
            raise ValueError("m must be positive (or k positive when m = 0); use normalize()")

    @property
    def fiber_degree(self) -> int:
        return self.m * self.d

    @property
    def twist(self) -> int:
        """The power K = k*d of z in the automorphy factor."""
        return self.k * self.d

    def xi(self, mp: ModularParam) -> complex:
        return qpow(mp, self.eta, self.nu)

    def dual(self) -> BundleLabel:
        return normalize(self.m, self.k, -self.d, -self.eta, -self.nu)

    def __str__(self) -> str:
        return f"L({self.m},{self.k},{self.d},eta={self.eta},nu={self.nu})"


def normalize(m: int, k: int, d: int, eta: Rational = 0, nu: Rational = 0) -> BundleLabel:
    eta, nu = Fraction(eta), Fraction(nu)
    if d == 0 or (m, k) == (0, 0):
        return BundleLabel(1, 0, 0, eta, nu)
    g = math.gcd(m, k)
    m, k, d = m // g, k // g, d * g
    if m < 0 or (m == 0 and k < 0):
        m, k, d = -m, -k, -d
    return BundleLabel(m, k, d, eta, nu)


def trivial_bundle() -> BundleLabel:
    return BundleLabel(1, 0, 0)


def tensor(L1: BundleLabel, L2: BundleLabel) -> BundleLabel:
    M = L1.fiber_degree + L2.fiber_degree
    K = L1.twist + L2.twist
    if M == 0 and K != 0:
        raise UncoveredCaseError(
            f"tensor label undefined: total fibre degree 0 but z-twist {K} ({L1} * {L2})"
        )
    return normalize(M, K, 1, L1.eta + L2.eta, L1.nu + L2.nu)


def hom_bundle(L0: BundleLabel, L1: BundleLabel) -> BundleLabel:
    """The label of L0^-1 L1 (defined in every case, unlike ``tensor``)."""
    return normalize(
        L1.fiber_degree - L0.fiber_degree,
        L1.twist - L0.twist,
        1,
        L1.eta - L0.eta,
        L1.nu - L0.nu,
    )


@dataclass(frozen=True, order=True)
class SectionIndex:
    j: int
    a: int
    weight: int = field(default=0, compare=False)


def canonical_index(L: BundleLabel, j: int, a: int) -> SectionIndex:
    """Canonical representative of (j, a) in Z^2 / (K, -M) for the bundle L."""
    M, K = L.fiber_degree, L.twist
    if M != 0:
        a_c = a % abs(M)
        t = (a - a_c) // M
        j, a = j + t * K, a_c
    return SectionIndex(j, a, L.m * j + L.k * a)


def has_sections(L: BundleLabel) -> bool:
    M, K = L.fiber_degree, L.twist
    if M > 0:
        return True
    if M < 0 or K != 0:
        return False
    return L.eta.denominator == 1 and L.nu.denominator == 1


def hom_basis(L0: BundleLabel, L1: BundleLabel, window: int) -> list[SectionIndex]:
    if window < 0:
        raise ValueError("window must be nonnegative")
    H = hom_bundle(L0, L1)
    return basis_of(H, window)


def basis_of(H: BundleLabel, window: int) -> list[SectionIndex]:
    """Section indices of H with |weight| <= window, sorted."""
    if not has_sections(H):
        return []
    M = H.fiber_degree
    if M == 0:
        N = int(H.eta)
        return [canonical_index(H, j, N) for j in range(-window, window + 1)]
    out = []
    m, k = H.m, H.k
    for a in range(M):
        lo = -((window + k * a) // m)
        hi = (window - k * a) // m
        out.extend(canonical_index(H, j, a) for j in range(lo, hi + 1))
    return sorted(out)


def _check_degree(L: BundleLabel) -> None:
    if L.fiber_degree < 0:
        raise NegativeDegreeError(f"{L} has negative fibre degree")


def series_coefficient(L: BundleLabel, a: int, ell: int, mp: ModularParam) -> complex:
    """Coefficient of z^(j - K ell) x^(a + M ell) in sigma_(j,a) of L (M > 0)."""
    M = L.fiber_degree
    u = Fraction(a) - L.eta + M * ell
    return qpow(mp, u * u / (2 * M), -L.nu * u / M)


def section_eval(
    L: BundleLabel,
    idx: SectionIndex,
    z: complex,
    x: complex,
    mp: ModularParam = DEFAULT_MP,
    eps: float = 1e-12,
) -> complex:
    """Evaluate a basis section through the theta series with a certified tail."""
    _check_degree(L)
    M, K = L.fiber_degree, L.twist
    if M == 0:
        if not has_sections(L):
            raise ValueError(f"{L} has no nonzero sections")
        return complex(z) ** idx.j * complex(x) ** int(L.eta)
    c_prime = (Fraction(idx.a) - L.eta) / M
    spec = ThetaSpec(c_prime, -L.nu, Fraction(M), (Fraction(-K), Fraction(M)))
    log_pref = (idx.j + K * float(c_prime)) * cmath.log(z) + float(L.eta) * cmath.log(x)
    pref = cmath.exp(log_pref)
    tol = eps / max(1.0, abs(pref))
    return pref * theta(spec, mp, z, x, tol)


def section_series(
    L: BundleLabel, idx: SectionIndex, mp: ModularParam, cutoff: float = SERIES_CUTOFF
) -> dict[tuple[int, int], complex]:
    """Truncated Laurent expansion {(z power, x power): coefficient}."""
    _check_degree(L)
    M, K = L.fiber_degree, L.twist
    if M == 0:
        if not has_sections(L):
            raise ValueError(f"{L} has no nonzero sections")
        return {(idx.j, int(L.eta)): 1.0 + 0j}
    out: dict[tuple[int, int], complex] = {}
    # centre of the Gaussian, then walk outwards until terms drop below cutoff
    centre = round(float(L.eta - idx.a) / M)
    for step in (1, -1):
        ell = centre if step == 1 else centre - 1
        while True:
            c = series_coefficient(L, idx.a, ell, mp)
            if abs(c) < cutoff and abs(ell - centre) > 1:
                break
            out[(idx.j - K * ell, idx.a + M * ell)] = c
            ell += step
    return out


@dataclass
class StructureConstants:
    entries: dict[SectionIndex, complex]
    window: int
    truncated: bool = True

    def get(self, idx: SectionIndex) -> complex:
        return self.entries.get(idx, 0j)


def product_exponent(
    H01: BundleLabel, H12: BundleLabel, a: int, b: int
) -> tuple[Fraction, Fraction]:
    """Exact (K, theta) of the product coefficient for a given lift of the second factor.

    ``a`` and ``b`` are the x-indices of the two factors (b already shifted by
    the lift). Both factors must have positive degree.
    """
    M1, M2 = H01.fiber_degree, H12.fiber_degree
    M = M1 + M2
    u = Fraction(a) - H01.eta
    v = Fraction(b) - H12.eta
    K_exp = u * u / (2 * M1) + v * v / (2 * M2) - (u + v) ** 2 / (2 * M)
    nu02 = H01.nu + H12.nu
    theta_ph = -H01.nu * u / M1 - H12.nu * v / M2 + THETA_THIRD_TERM_SIGN * nu02 * (u + v) / M
    return K_exp, theta_ph


def degree_zero_phase(H_zero: BundleLabel, H_pos: BundleLabel, x_index: int) -> Fraction:
    """Phase of the product of a degree-zero section with a positive-degree one.

    It vanishes unless the degree-zero factor carries a nonzero integral nu.
    """
    return H_zero.nu * (Fraction(x_index) - H_pos.eta) / H_pos.fiber_degree


def lift_range(
    H02: BundleLabel, j: int, c: int, K2: int, M2: int, window: int
) -> Iterator[int]:
    """Lifts n whose output class (j - K2 n, c + M2 n) has |weight| <= window."""
    m, k = H02.m, H02.k
    slope = -m * K2 + k * M2
    base = m * j + k * c
    if slope == 0:
        raise AssertionError("parallel case handled separately")
    lo = math.ceil(Fraction(-window - base, abs(slope)))
    hi = math.floor(Fraction(window - base, abs(slope)))
    if slope < 0:
        lo, hi = -hi, -lo
    return iter(range(lo, hi + 1))


def significant_window(
    L0: BundleLabel,
    L1: BundleLabel,
    L2: BundleLabel,
    idx0: SectionIndex,
    idx1: SectionIndex,
    mp: ModularParam = DEFAULT_MP,
    tol: float = 1e-16,
) -> int:
    """Smallest window holding every product coefficient of size >= tol.

    Coefficients are |q|^K with K quadratic in the lift, so the scan walks
    outward from the minimising lift until K exceeds log(1/tol) / (2 pi Im tau).
    """
    H01, H12, H02 = hom_bundle(L0, L1), hom_bundle(L1, L2), hom_bundle(L0, L2)
    M1, M2, K2 = H01.fiber_degree, H12.fiber_degree, H12.twist
    j, c = idx0.j + idx1.j, idx0.a + idx1.a
    base = H02.m * j + H02.k * c
    slope = -H02.m * K2 + H02.k * M2
    if M1 == 0 or M2 == 0 or slope == 0:
        return abs(base)
    limit = math.log(1 / tol) / (2 * math.pi * complex(mp.tau).imag)
    u = Fraction(idx0.a) - H01.eta
    centre = round(float((u * M2 / M1 - idx1.a + H12.eta) / M2))
    widest = abs(base + slope * centre)
    for step in (1, -1):
        n = centre
        while float(product_exponent(H01, H12, idx0.a, idx1.a + M2 * n)[0]) <= limit:
            widest = max(widest, abs(base + slope * n))
            n += step
    return widest


def yoneda_product(
    L0: BundleLabel,
    L1: BundleLabel,
    L2: BundleLabel,
    idx0: SectionIndex,
    idx1: SectionIndex,
    window: int,
    mp: ModularParam = DEFAULT_MP,
    eps: float = 1e-12,
) -> StructureConstants:
    """Closed-form product sigma_idx0 * sigma_idx1 in the basis of Hom(L0, L2)."""
    H01, H12, H02 = hom_bundle(L0, L1), hom_bundle(L1, L2), hom_bundle(L0, L2)
    for H in (H01, H12):
        _check_degree(H)
        if not has_sections(H):
            raise ValueError(f"{H} has no sections")
    M1, M2 = H01.fiber_degree, H12.fiber_degree
    j0, a, j1, b = idx0.j, idx0.a, idx1.j, idx1.a
    if M1 == 0 or M2 == 0:
        out = canonical_index(H02, j0 + j1, a + b)
        if M1 == 0 and M2 == 0:
            phase = Fraction(0)
        elif M1 == 0:
            phase = degree_zero_phase(H01, H12, b)
        else:
            phase = degree_zero_phase(H12, H01, a)
        entries = {out: qpow(mp, 0, phase)} if abs(out.weight) <= window else {}
        return StructureConstants(entries, window, truncated=M1 + M2 > 0)

    K2 = H12.twist
    entries: dict[SectionIndex, complex] = {}
    if (H01.m, H01.k) == (H12.m, H12.k):
        # parallel slopes: infinitely many lifts per class, summed by size
        for n in parallel_lifts(H01, H12, a, b, mp, eps):
            out = canonical_index(H02, j0 + j1 - K2 * n, a + b + M2 * n)
            if abs(out.weight) > window:
                continue
            K_exp, ph = product_exponent(H01, H12, a, b + M2 * n)
            entries[out] = entries.get(out, 0j) + qpow(mp, K_exp, ph)
    else:
        for n in lift_range(H02, j0 + j1, a + b, K2, M2, window):
            out = canonical_index(H02, j0 + j1 - K2 * n, a + b + M2 * n)
            K_exp, ph = product_exponent(H01, H12, a, b + M2 * n)
            entries[out] = qpow(mp, K_exp, ph)
    return StructureConstants(dict(sorted(entries.items())), window, truncated=True)


def parallel_lifts(
    H01: BundleLabel, H12: BundleLabel, a: int, b: int, mp: ModularParam, eps: float
) -> list[int]:
    """All lifts whose contribution exceeds eps * 1e-30, relative to the largest."""
    M1, M2 = H01.fiber_degree, H12.fiber_degree
    im = complex(mp.tau).imag
    # K_n is a quadratic in n with leading coefficient M2^2/(2 M1) - M2^2/(2 M)
    lead = Fraction(M2 * M2, 2 * M1) - Fraction(M2 * M2, 2 * (M1 + M2))
    budget = (-math.log(eps * 1e-30)) / (2 * math.pi * im)
    span = int(math.sqrt(budget / float(lead))) + 2
    # K_n is smallest where the two factors' normalized x-offsets agree
    centre = round(float((a - H01.eta) / M1 - (b - H12.eta) / M2))
    return list(range(centre - span, centre + span + 1))


def oracle_product(
    L0: BundleLabel,
    L1: BundleLabel,
    L2: BundleLabel,
    idx0: SectionIndex,
    idx1: SectionIndex,
    window: int,
    eps: float = 1e-12,
    mp: ModularParam = DEFAULT_MP,
) -> StructureConstants:
    """Brute-force product: multiply Laurent series, then project onto the basis."""
    H01, H12, H02 = hom_bundle(L0, L1), hom_bundle(L1, L2), hom_bundle(L0, L2)
    s1 = section_series(H01, idx0, mp)
    s2 = section_series(H12, idx1, mp)
    prod: dict[tuple[int, int], complex] = {}
    for (p1, r1), c1 in s1.items():
        for (p2, r2), c2 in s2.items():
            key = (p1 + p2, r1 + r2)
            prod[key] = prod.get(key, 0j) + c1 * c2

    M, K = H02.fiber_degree, H02.twist
    by_class: dict[SectionIndex, list[tuple[int, complex]]] = {}
    for (p, r), c in prod.items():
        cls = canonical_index(H02, p, r)
        ell = 0 if M == 0 else (r - cls.a) // M
        by_class.setdefault(cls, []).append((ell, c))

    entries: dict[SectionIndex, complex] = {}
    for cls, terms in by_class.items():
        if abs(cls.weight) > window:
            continue
        if M == 0:
            (_, c), = terms
            entries[cls] = c
            continue
        basis = {ell: series_coefficient(H02, cls.a, ell, mp) for ell, _ in terms}
        ell_best = max(basis, key=lambda e: abs(basis[e]))
        coeff = dict(terms)[ell_best] / basis[ell_best]
        scale = max(abs(c) for _, c in terms)
        residual = max(abs(c - coeff * basis[ell]) for ell, c in terms)
        if residual > max(eps, 1e-9 * scale):
            raise ProjectionFailureError(
                f"class {cls}: residual {residual:.3e} after projection"
            )
        if abs(coeff) > SERIES_CUTOFF:
            entries[cls] = coeff
    return StructureConstants(dict(sorted(entries.items())), window, truncated=True)


def extends_to_D(L: BundleLabel, m1: int, k1: int) -> bool:
    if m1 <= 0 or math.gcd(m1, k1) != 1:
        raise ValueError(f"target ({m1},{k1}) must be primitive with m > 0")
    if L.d == 0:
        return True
    return (L.m, L.k) == (m1, k1)


class CompactificationKind(str, Enum):
    NEVER = "never"
    ANY_A = "any_A"
    ONLY_QUOTIENTS = "only_quotients"


@dataclass(frozen=True)
class CompactificationClass:
    kind: CompactificationKind
    slope: tuple[int, int] | None = None


def extends_to_compactification(L: BundleLabel) -> CompactificationClass:
    if L.fiber_degree == 0:
        if L.twist == 0:
            return CompactificationClass(CompactificationKind.ANY_A)
        return CompactificationClass(CompactificationKind.NEVER)
    return CompactificationClass(CompactificationKind.ONLY_QUOTIENTS, (L.m, L.k))


def section_extends(L: BundleLabel, idx: SectionIndex, flavor: tuple[int, int]) -> bool:
    """Whether sigma_idx extends over the multiple fibre of D(flavor)."""
    m, k = flavor
    if not extends_to_D(L, m, k):
        raise ValueError(f"{L} does not extend to D({m},{k})")
    return m * idx.j + k * idx.a >= 0


def resolve_theta_sign(mp: ModularParam = DEFAULT_MP) -> int:
    """Pick the sign of the third phase term that matches the series oracle.

    Uses a fixed triple where all three nu-differences are nonzero and
    non-integral, so only one sign can match.
    """
    global THETA_THIRD_TERM_SIGN
    L0 = normalize(1, 0, -1, Fraction(1, 4), Fraction(1, 4))
    L1 = normalize(1, 1, 1, Fraction(1, 2), Fraction(3, 4))
    L2 = normalize(1, -1, 2, Fraction(0), Fraction(1, 2))
    i0 = canonical_index(hom_bundle(L0, L1), 0, 1)
    i1 = canonical_index(hom_bundle(L1, L2), 1, 0)
    ref = oracle_product(L0, L1, L2, i0, i1, 6, mp=mp)
    saved = THETA_THIRD_TERM_SIGN
    chosen = None
    for sign in (1, -1):
        THETA_THIRD_TERM_SIGN = sign
        got = yoneda_product(L0, L1, L2, i0, i1, 6, mp=mp)
        if all(abs(got.get(c) - v) <= 1e-9 * max(1.0, abs(v)) for c, v in ref.entries.items()):
            chosen = sign
            break
    THETA_THIRD_TERM_SIGN = saved if chosen is None else chosen
    if chosen is None:
        raise ProjectionFailureError("no phase sign reproduces the series oracle")
    return chosen
