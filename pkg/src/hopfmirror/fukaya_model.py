"""Combinatorial model of the symplectic side.

Lagrangians are lifted to graphs of affine maps over the (t, s) plane,

    phi = -(P Y) + E,    P = slope matrix + alpha e11,   Y = (t, s),

and generators of Hom(L0, L1) are intersections of L0 with the translates
L1 - (j, a). Everything geometric is solved in exact rationals; the only
floating step is the final exponential.

Holomorphic triangles are the planar triangles cut out by three planes. The
coefficient of a triangle is exp(2 pi i (tau C + theta)), where C is its
symplectic area corrected by the quadratic actions of the corners and theta
collects the local-system holonomy around its boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .bundles_compact import (
    PicardChar,
    SurfaceSpec,
    char_quotient,
    generator_interval,
    restrict_char,
)
from .bundles_open import (
    DEFAULT_MP,
    BundleLabel,
    SectionIndex,
    StructureConstants,
    canonical_index,
    hom_bundle,
    lift_range,
    parallel_lifts,
)
from .errors import (
    DegenerateTriangleError,
    DegreeMismatchError,
    ThresholdViolationError,
    UncoveredCaseError,
)
from .numerics import ModularParam, qpow

Vec2 = tuple[Fraction, Fraction]
Mat2 = tuple[Vec2, Vec2]
Point = tuple[Fraction, Fraction, Fraction, Fraction]


class FlavorKind(str, Enum):
    WRAPPED = "wrapped"
    PARTIALLY_WRAPPED = "partially_wrapped"
    COMPACT = "compact"


@dataclass(frozen=True)
class LagrangianLabel:
    m: int
    k: int
    d: int
    eta: Fraction
    nu: Fraction
    flavor: FlavorKind = FlavorKind.WRAPPED
    slope: tuple[int, int] | None = None
    surface: SurfaceSpec | None = None
    char: PicardChar | None = None

    @property
    def slope_matrix(self) -> Mat2:
        m, k, d = self.m, self.k, self.d
        if m == 0:
            raise UncoveredCaseError("no Lagrangian section of slope type (0, 1)")
        return ((Fraction(-d * k * k, m), Fraction(d * k)), (Fraction(d * k), Fraction(-d * m)))

    @property
    def offset(self) -> Vec2:
        return (Fraction(self.k, self.m) * self.eta, self.eta)

    def bundle(self) -> BundleLabel:
        return BundleLabel(self.m, self.k, self.d, self.eta, self.nu)

    def asymptotic_slopes(self) -> tuple[Fraction, Fraction]:
        """phi_t-values of a compact Lagrangian at t -> -inf and t -> +inf (before f shift)."""
        if self.flavor is not FlavorKind.COMPACT:
            raise ValueError("only compact Lagrangians have asymptotic slope data")
        A, lam = self.surface, self.char.lam
        return (lam * Fraction(A.k0, A.m0), -lam * Fraction(A.kinf, A.minf))


def mirror_lagrangian(
    obj: BundleLabel | PicardChar, surface: SurfaceSpec | None = None
) -> LagrangianLabel:
    if isinstance(obj, PicardChar):
        if surface is None:
            raise ValueError("a character needs its surface")
        L = restrict_char(obj, surface)
        return LagrangianLabel(
            L.m, L.k, L.d, L.eta, L.nu, FlavorKind.COMPACT, (surface.m0, surface.k0), surface, obj
        )
    if obj.m == 0:
        raise UncoveredCaseError(f"{obj} has fibre degree 0 and nonzero twist; it has no mirror section")
    return LagrangianLabel(obj.m, obj.k, obj.d, obj.eta, obj.nu)


def partially_wrapped(L: LagrangianLabel, slope: tuple[int, int]) -> LagrangianLabel:
    return LagrangianLabel(L.m, L.k, L.d, L.eta, L.nu, FlavorKind.PARTIALLY_WRAPPED, slope)


def localize(L: LagrangianLabel) -> LagrangianLabel:
    """Forget compactness or partial wrapping: the image in the wrapped category."""
    return LagrangianLabel(L.m, L.k, L.d, L.eta, L.nu)


@dataclass(frozen=True)
class PerturbationData:
    """Quadratic Hamiltonian slopes, one per Lagrangian in the tuple being composed."""

    alpha: tuple[Fraction, ...]
    epsilon: Fraction | None = None
    bump: Fraction = Fraction(1, 16)


def perturbation(*alpha: int | Fraction | str) -> PerturbationData:
    return PerturbationData(tuple(Fraction(a) for a in alpha))


def _det(D: Mat2) -> Fraction:
    return D[0][0] * D[1][1] - D[0][1] * D[1][0]


def _solve(D: Mat2, r: Vec2) -> Vec2:
    det = _det(D)
    return (
        (D[1][1] * r[0] - D[0][1] * r[1]) / det,
        (-D[1][0] * r[0] + D[0][0] * r[1]) / det,
    )


def plane_matrix(L: LagrangianLabel, alpha: Fraction) -> Mat2:
    (a, b), (c, d) = L.slope_matrix
    return ((a + alpha, b), (c, d))


def plane_phi(L: LagrangianLabel, alpha: Fraction, Y: Vec2) -> Vec2:
    P, E = plane_matrix(L, alpha), L.offset
    return (
        -(P[0][0] * Y[0] + P[0][1] * Y[1]) + E[0],
        -(P[1][0] * Y[0] + P[1][1] * Y[1]) + E[1],
    )


@dataclass(frozen=True)
class PairGeometry:
    """Difference of the two planes of an ordered pair and its quadratic form."""

    D: Mat2
    mu: Fraction
    kappa: Fraction

    @property
    def transverse(self) -> bool:
        return _det(self.D) != 0

    @property
    def essentially_transverse(self) -> bool:
        return self.mu != 0 or self.kappa != 0

    def w(self, Y: Vec2) -> Fraction:
        """Coordinate along which Q has its indefinite-degree part (0 if none)."""
        if self.mu == 0:
            return Fraction(0)
        return Y[1] - self.kappa / self.mu * Y[0]

    def q_beta(self, Y: Vec2) -> Fraction:
        return -self.mu * self.w(Y) ** 2 / 2

    def alpha_eff(self) -> Fraction:
        if self.mu == 0:
            return self.D[0][0]
        return self.D[0][0] + self.kappa**2 / self.mu

    def q_alpha(self, Y: Vec2) -> Fraction:
        return self.alpha_eff() * Y[0] ** 2 / 2

    def q_total(self, Y: Vec2) -> Fraction:
        D = self.D
        return (D[0][0] * Y[0] ** 2 + 2 * D[0][1] * Y[0] * Y[1] + D[1][1] * Y[1] ** 2) / 2

    def degree(self) -> int:
        det = _det(self.D)
        if det < 0:
            return 1
        return 0 if self.D[1][1] > 0 else 2


def pair_geometry(L0: LagrangianLabel, L1: LagrangianLabel, a0: Fraction, a1: Fraction) -> PairGeometry:
    P0, P1 = plane_matrix(L0, a0), plane_matrix(L1, a1)
    D = tuple(tuple(P0[i][j] - P1[i][j] for j in range(2)) for i in range(2))
    return PairGeometry(D, -D[1][1], D[0][1])


def transversality_threshold(L0: LagrangianLabel, L1: LagrangianLabel) -> Fraction:
    """Value of alpha0 - alpha1 at which the two planes become parallel.

    Slope differences above it (and above 0) give transverse planes. For pairs
    whose planes differ only in the alpha direction the threshold is 0.
    """
    g = pair_geometry(L0, L1, Fraction(0), Fraction(0))
    if g.mu == 0:
        return Fraction(0)
    return -g.D[0][0] - g.kappa**2 / g.mu


def check_threshold(L0: LagrangianLabel, L1: LagrangianLabel, a0: Fraction, a1: Fraction) -> None:
    delta = a0 - a1
    bound = max(transversality_threshold(L0, L1), Fraction(0))
    if not delta > bound:
        raise ThresholdViolationError(
            f"alpha difference {delta} must exceed {bound} for the pair ({L0.m},{L0.k},{L0.d})"
            f" -> ({L1.m},{L1.k},{L1.d})"
        )


@dataclass(frozen=True)
class FloerGenerator:
    index: SectionIndex
    lift: tuple[int, int]
    point: Point | None
    degree: int
    action_S: Fraction | None
    action_R4: Fraction | None
    weight: int
    transverse: bool = True
    w: Fraction = field(default=Fraction(0), compare=False)


def _pair_hom(L0: LagrangianLabel, L1: LagrangianLabel) -> BundleLabel:
    return hom_bundle(L0.bundle(), L1.bundle())


def intersection_point(
    L0: LagrangianLabel, L1: LagrangianLabel, a0: Fraction, a1: Fraction, lift: tuple[int, int]
) -> FloerGenerator:
    """Generator of a transverse pair at the lattice translate ``lift``."""
    g = pair_geometry(L0, L1, a0, a1)
    if not g.transverse:
        raise DegenerateTriangleError("planes do not meet in a point")
    E0, E1 = L0.offset, L1.offset
    Y = _solve(g.D, (lift[0] + E0[0] - E1[0], lift[1] + E0[1] - E1[1]))
    phi = plane_phi(L0, a0, Y)
    idx = _class_index(_pair_hom(L0, L1), lift)
    return FloerGenerator(
        idx, lift, (Y[0], Y[1], phi[0], phi[1]), g.degree(),
        g.q_alpha(Y), g.q_total(Y), idx.weight, True, g.w(Y),
    )


def _class_index(H: BundleLabel, lift: tuple[int, int]) -> SectionIndex:
    j, a = lift
    if H.fiber_degree == 0 and H.twist != 0:
        K = abs(H.twist)
        return SectionIndex(j % K, a, H.m * (j % K) + H.k * a)
    return canonical_index(H, j, a)


def lattice_classes(H: BundleLabel, window: int) -> list[tuple[int, int]]:
    """Canonical lifts of all classes of Z^2 / (K, -M) with |weight| <= window."""
    M, K, m, k = H.fiber_degree, H.twist, H.m, H.k
    out: list[tuple[int, int]] = []
    if M != 0:
        for a in range(abs(M)):
            lo = -((window + k * a) // m)
            hi = (window - k * a) // m
            out.extend((j, a) for j in range(lo, hi + 1))
    elif K != 0:
        out = [(j, a) for j in range(abs(K)) for a in range(-window, window + 1)]
    else:
        out = [(j, 0) for j in range(-window, window + 1)]
    return sorted(out)


def _compact_generators(L0: LagrangianLabel, L1: LagrangianLabel) -> list[FloerGenerator]:
    if L0.surface != L1.surface:
        raise ValueError("compact Lagrangians live over different surfaces")
    A = L0.surface
    gamma = char_quotient(L0.char, L1.char)
    N = gamma.lam - gamma.g
    if N.denominator != 1:
        return []
    lo, hi = generator_interval(gamma, A)
    if lo <= hi:
        js, degs = range(math.ceil(lo), math.floor(hi) + 1), (0, 1)
    else:
        # reversed interval: the perturbation removes both endpoints
        js = [j for j in range(math.floor(hi), math.ceil(lo) + 1) if hi < j < lo]
        degs = (1, 2)
    out = []
    for j in js:
        idx = SectionIndex(j, int(N), j)
        for deg in degs:
            out.append(FloerGenerator(idx, (j, int(N)), None, deg, None, None, j, False))
    return out


def intersections(
    L0: LagrangianLabel, L1: LagrangianLabel, pert: PerturbationData, window: int
) -> list[FloerGenerator]:
    if window < 0:
        raise ValueError("window must be nonnegative")
    compact = (L0.flavor is FlavorKind.COMPACT, L1.flavor is FlavorKind.COMPACT)
    if all(compact):
        return _compact_generators(L0, L1)
    if any(compact):
        raise ValueError("mixed compact / non-compact pairs are not modelled")
    a0, a1 = pert.alpha[0], pert.alpha[1]
    check_threshold(L0, L1, a0, a1)
    g = pair_geometry(L0, L1, a0, a1)
    H = _pair_hom(L0, L1)
    if g.essentially_transverse:
        gens = [intersection_point(L0, L1, a0, a1, lift) for lift in lattice_classes(H, window)]
    else:
        gens = _same_class_generators(L0, L1, a0, a1, g, window)
    if L0.flavor is FlavorKind.PARTIALLY_WRAPPED:
        m, k = L0.slope
        gens = [x for x in gens if m * x.index.j + k * x.index.a >= 0]
    return gens


def _same_class_generators(
    L0: LagrangianLabel, L1: LagrangianLabel, a0: Fraction, a1: Fraction,
    g: PairGeometry, window: int,
) -> list[FloerGenerator]:
    """Both planes differ only by alpha: a line of intersection per class.

    A small Morse perturbation along s leaves a minimum at s = 0 (degree 0)
    and a maximum at s = 1/2 (degree 1) on each line.
    """
    E0, E1 = L0.offset, L1.offset
    N = E1[1] - E0[1]
    if N.denominator != 1:
        return []
    delta = g.D[0][0]
    out = []
    for j in range(-window, window + 1):
        t = (j + E0[0] - E1[0]) / delta
        for s, deg in ((Fraction(0), 0), (Fraction(1, 2), 1)):
            Y = (t, s)
            phi = plane_phi(L0, a0, Y)
            idx = SectionIndex(j, int(N), j)
            out.append(
                FloerGenerator(idx, (j, int(N)), (t, s, phi[0], phi[1]), deg,
                               g.q_alpha(Y), g.q_total(Y), j, False)
            )
    return out


def mu1(
    gen: FloerGenerator, nu0: Fraction, nu1: Fraction,
    mp: ModularParam = DEFAULT_MP, bump: Fraction = Fraction(1, 16),
) -> complex:
    """Differential from a degree-0 generator to its partner on the same line.

    The two bigons between the critical points of the Morse perturbation
    -bump cos(2 pi s) have area 2 bump; their boundaries carry the two local
    systems, so they cancel exactly when nu0 = nu1 mod 1.
    """
    if gen.transverse or gen.degree != 0:
        return 0j
    return qpow(mp, 2 * bump) * (qpow(mp, 0, nu0) - qpow(mp, 0, nu1))


def _connection_rate(L: LagrangianLabel) -> Vec2:
    """Coefficients of the flat connection form nu ((k/m) dt + ds)."""
    return (L.nu * Fraction(L.k, L.m), L.nu)


def _holonomy(L: LagrangianLabel, Y_from: Vec2, Y_to: Vec2) -> Fraction:
    c = _connection_rate(L)
    return c[0] * (Y_to[0] - Y_from[0]) + c[1] * (Y_to[1] - Y_from[1])


def generator_correction(L0: LagrangianLabel, L1: LagrangianLabel, g: PairGeometry) -> Fraction:
    """The dt-coefficient of the difference of the two connections in (w, t) coordinates.

    Generators are rescaled by exp(2 pi i * this * t) so that products only
    see the w-part of the holonomy.
    """
    c0, c1 = _connection_rate(L0), _connection_rate(L1)
    ratio = g.kappa / g.mu if g.mu != 0 else Fraction(0)
    return -(c0[0] - c1[0] + (c0[1] - c1[1]) * ratio)


def _require_degree_zero(*gens: FloerGenerator) -> None:
    for x in gens:
        if x.degree != 0:
            raise DegreeMismatchError(f"generator {x.index} has degree {x.degree}; only degree 0 composes here")


def _closed_form_coefficient(
    geoms: tuple[PairGeometry, PairGeometry, PairGeometry],
    Ls: tuple[LagrangianLabel, LagrangianLabel, LagrangianLabel],
    X: Vec2 | None, Z: Vec2 | None, Y: Vec2 | None,
) -> tuple[Fraction, Fraction]:
    g01, g12, g02 = geoms
    L0, L1, L2 = Ls

    def wq(g: PairGeometry, P: Vec2 | None) -> tuple[Fraction, Fraction]:
        if P is None:
            return Fraction(0), Fraction(0)
        return g.w(P), g.q_beta(P)

    wx, qx = wq(g01, X)
    wz, qz = wq(g12, Z)
    wy, qy = wq(g02, Y)
    C = qx + qz - qy
    theta = (L0.nu - L1.nu) * wx + (L1.nu - L2.nu) * wz + (L2.nu - L0.nu) * wy
    return C, theta


def floer_mu2(
    L0: LagrangianLabel,
    L1: LagrangianLabel,
    L2: LagrangianLabel,
    gen0: FloerGenerator,
    gen1: FloerGenerator,
    pert: PerturbationData,
    window: int,
    mp: ModularParam = DEFAULT_MP,
    eps: float = 1e-12,
) -> StructureConstants:
    """mu^2(gen1, gen0) as coefficients on classes of Hom(L0, L2).

    Coefficients are built from the corner data of the planar triangles:
    the corrected area is Q_beta(x) + Q_beta(z) - Q_beta(y) and the phase
    pairs each local system with the w-coordinate of its corner.
    """
    _require_degree_zero(gen0, gen1)
    if L0.flavor is FlavorKind.COMPACT:
        out = SectionIndex(gen0.index.j + gen1.index.j, gen0.index.a + gen1.index.a,
                           gen0.index.j + gen1.index.j)
        return StructureConstants({out: 1 + 0j}, window, truncated=False)

    a0, a1, a2 = pert.alpha[:3]
    check_threshold(L0, L1, a0, a1)
    check_threshold(L1, L2, a1, a2)
    check_threshold(L0, L2, a0, a2)
    Ls = (L0, L1, L2)
    geoms = (pair_geometry(L0, L1, a0, a1), pair_geometry(L1, L2, a1, a2), pair_geometry(L0, L2, a0, a2))
    H01, H12, H02 = _pair_hom(L0, L1), _pair_hom(L1, L2), _pair_hom(L0, L2)
    (j0, a), (j1, b) = gen0.lift, gen1.lift
    X = (gen0.point[0], gen0.point[1]) if gen0.transverse else None
    Z0 = (gen1.point[0], gen1.point[1]) if gen1.transverse else None

    def corner_y(lift: tuple[int, int]) -> Vec2 | None:
        if not geoms[2].essentially_transverse:
            return None
        y = intersection_point(L0, L2, a0, a2, lift)
        return (y.point[0], y.point[1])

    entries: dict[SectionIndex, complex] = {}
    if not (gen0.transverse and gen1.transverse):
        lift = (j0 + j1, a + b)
        out = _class_index(H02, lift)
        C, th = _closed_form_coefficient(geoms, Ls, X, Z0, corner_y(lift))
        if abs(out.weight) <= window:
            entries[out] = qpow(mp, C, th)
        return StructureConstants(entries, window, truncated=H02.fiber_degree > 0)

    M2, K2 = H12.fiber_degree, H12.twist
    parallel = (H01.m, H01.k) == (H12.m, H12.k)
    lifts = (
        parallel_lifts(H01, H12, a, b, mp, eps)
        if parallel
        else lift_range(H02, j0 + j1, a + b, K2, M2, window)
    )
    for n in lifts:
        z_lift = (j1 - K2 * n, b + M2 * n)
        y_lift = (j0 + z_lift[0], a + z_lift[1])
        out = _class_index(H02, y_lift)
        if abs(out.weight) > window:
            continue
        z = intersection_point(L1, L2, a1, a2, z_lift)
        C, th = _closed_form_coefficient(geoms, Ls, X, (z.point[0], z.point[1]), corner_y(y_lift))
        entries[out] = entries.get(out, 0j) + qpow(mp, C, th)
    return StructureConstants(dict(sorted(entries.items())), window, truncated=True)


def _omega(u: Point, v: Point) -> Fraction:
    return u[0] * v[2] - u[2] * v[0] + u[1] * v[3] - u[3] * v[1]


def triangle_area_oracle(
    L0: LagrangianLabel,
    L1: LagrangianLabel,
    L2: LagrangianLabel,
    lift0: tuple[int, int],
    lift1: tuple[int, int],
    ell: int,
    pert: PerturbationData,
    mp: ModularParam = DEFAULT_MP,
) -> complex:
    """Coefficient of one triangle, computed from its three vertices in R^4.

    ``ell`` selects the lift of the second generator,
    (j1, b) + ell * (-K, M) with (K, M) the lattice of Hom(L1, L2).
    """
    a0, a1, a2 = pert.alpha[:3]
    g01, g12, g02 = (pair_geometry(L0, L1, a0, a1), pair_geometry(L1, L2, a1, a2),
                     pair_geometry(L0, L2, a0, a2))
    if not (g01.transverse and g12.transverse and g02.transverse):
        raise DegenerateTriangleError("two of the three planes are parallel")
    H12 = _pair_hom(L1, L2)
    n1 = lift0
    n2 = (lift1[0] - H12.twist * ell, lift1[1] + H12.fiber_degree * ell)
    ny = (n1[0] + n2[0], n1[1] + n2[1])

    def solve(La, Lb, aa, ab, g, nhat):
        Ea, Eb = La.offset, Lb.offset
        return _solve(g.D, (nhat[0] + Ea[0] - Eb[0], nhat[1] + Ea[1] - Eb[1]))

    X = solve(L0, L1, a0, a1, g01, n1)
    Z = solve(L1, L2, a1, a2, g12, n2)
    Y = solve(L0, L2, a0, a2, g02, ny)
    px, pz, py = plane_phi(L0, a0, X), plane_phi(L1, a1, Z), plane_phi(L0, a0, Y)
    Xt = (X[0], X[1], px[0], px[1])
    Zt = (Z[0], Z[1], pz[0] - n1[0], pz[1] - n1[1])
    Yt = (Y[0], Y[1], py[0], py[1])
    u = tuple(Yt[i] - Xt[i] for i in range(4))
    v = tuple(Zt[i] - Xt[i] for i in range(4))
    area = _omega(u, v) / 2
    C = area - g01.q_alpha(X) - g12.q_alpha(Z) + g02.q_alpha(Y)
    theta = (
        _holonomy(L0, Y, X) + _holonomy(L1, X, Z) + _holonomy(L2, Z, Y)
        + generator_correction(L0, L1, g01) * X[0]
        + generator_correction(L1, L2, g12) * Z[0]
        - generator_correction(L0, L2, g02) * Y[0]
    )
    return qpow(mp, C, theta)


@dataclass
class PerturbationReport:
    passed: bool
    classes_equal: bool
    max_abs_diff: float
    compared: int
    third: LagrangianLabel


def default_third(L1: LagrangianLabel) -> LagrangianLabel:
    """A fixed object with degree-zero morphisms out of L1."""
    deg = L1.m * L1.d
    return LagrangianLabel(1, 0, max(deg, 0) + 2, Fraction(0), Fraction(0))


def admissible_alphas(
    labels: list[LagrangianLabel] | tuple[LagrangianLabel, ...], start: Fraction = Fraction(0)
) -> tuple[Fraction, ...]:
    """Decreasing slopes clearing every pairwise threshold along the chain."""
    alphas = [Fraction(start)]
    for i in range(1, len(labels)):
        bound = min(
            alphas[j] - max(transversality_threshold(labels[j], labels[i]), Fraction(0))
            for j in range(i)
        )
        alphas.append(bound - 1)
    return tuple(alphas)


def completing_alpha(
    L0: LagrangianLabel, L1: LagrangianLabel, L2: LagrangianLabel, a0: Fraction, a1: Fraction
) -> Fraction:
    """A slope for L2 satisfying both thresholds it takes part in."""
    need12 = max(transversality_threshold(L1, L2), Fraction(0))
    need02 = max(transversality_threshold(L0, L2), Fraction(0))
    return min(a1 - need12, a0 - need02) - 1


def generator_at(
    L0: LagrangianLabel, L1: LagrangianLabel, a0: Fraction, a1: Fraction, idx: SectionIndex
) -> FloerGenerator:
    """The degree-0 generator of the class ``idx``."""
    g = pair_geometry(L0, L1, a0, a1)
    if g.essentially_transverse:
        out = intersection_point(L0, L1, a0, a1, (idx.j, idx.a))
        if out.degree != 0:
            raise DegreeMismatchError(f"class {idx} sits in degree {out.degree}")
        return out
    for x in _same_class_generators(L0, L1, a0, a1, g, abs(idx.j)):
        if x.degree == 0 and x.index == idx:
            return x
    raise ValueError(f"no generator in class {idx}")


def perturbation_independence(
    L0: LagrangianLabel,
    L1: LagrangianLabel,
    pertA: PerturbationData,
    pertB: PerturbationData,
    window: int,
    mp: ModularParam = DEFAULT_MP,
    third: LagrangianLabel | None = None,
    tol: float = 1e-10,
) -> PerturbationReport:
    L2 = third if third is not None else default_third(L1)
    gensA = [x for x in intersections(L0, L1, pertA, window) if x.degree == 0]
    gensB = [x for x in intersections(L0, L1, pertB, window) if x.degree == 0]
    classes_equal = sorted(x.index for x in gensA) == sorted(x.index for x in gensB)
    worst = 0.0
    compared = 0
    if classes_equal and gensA:
        fullA = _extend(L0, L1, L2, pertA)
        fullB = _extend(L0, L1, L2, pertB)
        g1A = [x for x in intersections(L1, L2, _tail(fullA), 1) if x.degree == 0]
        g1B = {x.index: x for x in intersections(L1, L2, _tail(fullB), 1) if x.degree == 0}
        byB = {x.index: x for x in gensB}
        for x in gensA:
            for y in g1A[:3]:
                cA = floer_mu2(L0, L1, L2, x, y, fullA, window, mp)
                cB = floer_mu2(L0, L1, L2, byB[x.index], g1B[y.index], fullB, window, mp)
                keys = set(cA.entries) | set(cB.entries)
                if set(cA.entries) != set(cB.entries):
                    classes_equal = False
                for key in keys:
                    worst = max(worst, abs(cA.get(key) - cB.get(key)))
                compared += 1
    return PerturbationReport(classes_equal and worst <= tol, classes_equal, worst, compared, L2)


def _extend(
    L0: LagrangianLabel, L1: LagrangianLabel, L2: LagrangianLabel, pert: PerturbationData
) -> PerturbationData:
    a0, a1 = pert.alpha[:2]
    if len(pert.alpha) >= 3:
        return pert
    return PerturbationData((a0, a1, completing_alpha(L0, L1, L2, a0, a1)), pert.epsilon, pert.bump)


def _tail(pert: PerturbationData) -> PerturbationData:
    return PerturbationData(pert.alpha[1:], pert.epsilon, pert.bump)
