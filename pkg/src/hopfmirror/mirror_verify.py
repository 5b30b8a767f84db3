"""Mirror functors on objects and morphisms, and the comparison suites.

Each check produces a :class:`VerificationReport`. Coefficients from
different computations are compared index by index: a pair agrees if the
relative error is below ``tol`` or the absolute error is below a floor set by
the largest coefficient in the case (sums over lifts can cancel to roundoff).
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable

from .bundles_compact import (
    MonomialSection,
    PicardChar,
    SurfaceSpec,
    char_product,
    char_quotient,
    restrict_char,
    restrict_section,
    section_product,
    sections,
)
from .bundles_open import (
    DEFAULT_MP,
    THETA_THIRD_TERM_SIGN,
    BundleLabel,
    SectionIndex,
    StructureConstants,
    basis_of,
    has_sections,
    hom_bundle,
    normalize,
    oracle_product,
    section_extends,
    significant_window,
    yoneda_product,
)
from .errors import HopfMirrorError, NotASectionError
from .fukaya_model import (
    FloerGenerator,
    LagrangianLabel,
    PerturbationData,
    admissible_alphas,
    floer_mu2,
    generator_at,
    intersections,
    localize,
    mirror_lagrangian,
    partially_wrapped,
    perturbation_independence,
)
from .numerics import ModularParam

DEFAULT_TOL = 1e-8
SELF_TOL = 1e-10
REL_FLOOR = 1e-14

SIGN_CONVENTION = {
    "section_character": "xi^-1 multiplies the z-power in the theta characteristic",
    "theta_third_term_sign": THETA_THIRD_TERM_SIGN,
    "triangle_count_sign": 1,
    "compact_index": "j = (kinf*n1 - k0*n2)/n - f, N = lam - g",
}


@dataclass
class VerificationReport:
    case_id: str
    inputs: dict[str, Any]
    side_b: dict[SectionIndex, complex]
    side_a: dict[SectionIndex, complex]
    max_abs_diff: float
    passed: bool
    sign_convention_used: dict[str, Any] = field(default_factory=lambda: dict(SIGN_CONVENTION))
    windows: dict[str, int] = field(default_factory=dict)
    truncation: dict[str, bool] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)


def to_jsonable(obj: Any) -> Any:
    """Rationals become "p/q" strings, complex numbers [re, im] pairs."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, SectionIndex):
        return [obj.j, obj.a]
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    return str(obj)


def _key(k: Any) -> str:
    if isinstance(k, SectionIndex):
        return f"({k.j},{k.a})"
    return str(to_jsonable(k))


def compare_constants(
    named: dict[str, dict[SectionIndex, complex]], tol: float
) -> tuple[bool, float, list[str]]:
    """Pairwise comparison of coefficient tables; returns (ok, max diff, problems)."""
    scale = max((abs(c) for tab in named.values() for c in tab.values()), default=0.0)
    floor = REL_FLOOR * max(scale, 1.0)
    problems: list[str] = []
    worst = 0.0
    names = list(named)
    for i, first in enumerate(names):
        for second in names[i + 1 :]:
            ta, tb = named[first], named[second]
            sa = {k for k, v in ta.items() if abs(v) > floor}
            sb = {k for k, v in tb.items() if abs(v) > floor}
            if sa != sb:
                problems.append(f"support {first} vs {second}: {sorted(sa ^ sb)[:4]}")
            for k in sa | sb:
                a, b = ta.get(k, 0j), tb.get(k, 0j)
                diff = abs(a - b)
                worst = max(worst, diff)
                if diff > floor and diff > tol * max(abs(a), abs(b)):
                    problems.append(f"{first} vs {second} at ({k.j},{k.a}): {a} != {b}")
    return not problems, worst, problems


def phi_open(L: BundleLabel, idx: SectionIndex) -> tuple[LagrangianLabel, SectionIndex]:
    return mirror_lagrangian(L), idx


def compact_perturbation(A: SurfaceSpec) -> PerturbationData:
    return PerturbationData((Fraction(1), Fraction(0)), Fraction(1, 2 * A.m0))


def phi_compact(
    g0: PicardChar, g1: PicardChar, s: MonomialSection, A: SurfaceSpec
) -> FloerGenerator:
    gamma = char_quotient(g0, g1)
    if s not in sections(gamma, A):
        raise NotASectionError(f"{s} is not a section of {gamma}")
    idx = restrict_section(s, A, gamma)
    L0, L1 = mirror_lagrangian(g0, A), mirror_lagrangian(g1, A)
    for gen in intersections(L0, L1, compact_perturbation(A), 0):
        if gen.degree == 0 and gen.index == idx:
            return gen
    raise NotASectionError(f"no degree-0 generator with index {idx}")


def _floer_chain(
    labels: list[BundleLabel],
) -> tuple[list[LagrangianLabel], PerturbationData]:
    Ls = [mirror_lagrangian(b) for b in labels]
    return Ls, PerturbationData(admissible_alphas(Ls))


def floer_product(
    L0: BundleLabel, L1: BundleLabel, L2: BundleLabel,
    idx0: SectionIndex, idx1: SectionIndex,
    window: int, mp: ModularParam = DEFAULT_MP, eps: float = 1e-12,
) -> StructureConstants:
    """mu^2 of the mirror generators, slopes chosen automatically."""
    Ls, pert = _floer_chain([L0, L1, L2])
    a = pert.alpha
    x = generator_at(Ls[0], Ls[1], a[0], a[1], idx0)
    y = generator_at(Ls[1], Ls[2], a[1], a[2], idx1)
    return floer_mu2(*Ls, x, y, pert, window, mp, eps)


def _label_inputs(*labels: BundleLabel) -> list[dict[str, Any]]:
    return [to_jsonable(b) for b in labels]


def verify_open_products(
    L0: BundleLabel, L1: BundleLabel, L2: BundleLabel,
    idx0: SectionIndex, idx1: SectionIndex,
    window: int, tol: float = DEFAULT_TOL,
    mp: ModularParam = DEFAULT_MP, eps: float = 1e-12, case_id: str = "open",
) -> VerificationReport:
    inputs = {"labels": _label_inputs(L0, L1, L2), "idx0": idx0, "idx1": idx1}
    b = yoneda_product(L0, L1, L2, idx0, idx1, window, mp, eps)
    a = floer_product(L0, L1, L2, idx0, idx1, window, mp, eps)
    try:
        o = oracle_product(L0, L1, L2, idx0, idx1, window, eps, mp).entries
        oracle_error = None
    except HopfMirrorError as exc:
        o, oracle_error = {}, str(exc)
    ok, worst, problems = compare_constants(
        {"yoneda": b.entries, "floer": a.entries, "oracle": o}, tol
    )
    if oracle_error:
        ok, problems = False, problems + [oracle_error]
    return VerificationReport(
        case_id, inputs, b.entries, a.entries, worst, ok,
        windows={"output": window},
        truncation={"yoneda": b.truncated, "floer": a.truncated, "oracle": True},
        extra={"oracle": o, "problems": problems},
    )


def verify_compact_products(
    A: SurfaceSpec,
    g0: PicardChar, g1: PicardChar, g2: PicardChar,
    s0: MonomialSection, s1: MonomialSection,
    tol: float = DEFAULT_TOL, case_id: str = "compact",
) -> VerificationReport:
    """Phi(s0 s1) against mu^2(Phi s1, Phi s0)."""
    x = phi_compact(g0, g1, s0, A)
    y = phi_compact(g1, g2, s1, A)
    target = phi_compact(g0, g2, section_product(s0, s1), A)
    Ls = [mirror_lagrangian(g, A) for g in (g0, g1, g2)]
    mu2 = floer_mu2(*Ls, x, y, compact_perturbation(A), window=abs(target.index.j) + 1)
    side_b = {target.index: 1 + 0j}
    ok, worst, problems = compare_constants({"monomial": side_b, "floer": mu2.entries}, tol)
    return VerificationReport(
        case_id,
        {"surface": A, "chars": [g0, g1, g2], "s0": s0, "s1": s1},
        side_b, mu2.entries, worst, ok,
        truncation={"floer": False}, extra={"problems": problems},
    )


def _same_object(L: LagrangianLabel, M: LagrangianLabel) -> bool:
    return (L.m, L.k, L.d, L.eta, L.nu) == (M.m, M.k, M.d, M.eta, M.nu)


def verify_diagram(
    A: SurfaceSpec, g0: PicardChar, g1: PicardChar, s: MonomialSection,
    case_id: str = "diagram",
) -> VerificationReport:
    """Restrict-then-mirror against mirror-then-localize, on objects and on s."""
    problems: list[str] = []
    for name, g in (("gamma0", g0), ("gamma1", g1)):
        via_open = mirror_lagrangian(restrict_char(g, A))
        via_compact = localize(mirror_lagrangian(g, A))
        if not _same_object(via_open, via_compact):
            problems.append(f"object {name}: {via_open} vs {via_compact}")
    gamma = char_quotient(g0, g1)
    hom = hom_bundle(restrict_char(g0, A), restrict_char(g1, A))
    if hom != restrict_char(gamma, A):
        problems.append(f"hom label {hom} vs {restrict_char(gamma, A)}")
    restricted = restrict_section(s, A, gamma)
    _, open_idx = phi_open(hom, restricted)
    compact_gen = phi_compact(g0, g1, s, A)
    side_b = {open_idx: 1 + 0j}
    side_a = {compact_gen.index: 1 + 0j}
    ok, worst, more = compare_constants({"restrict": side_b, "compact": side_a}, DEFAULT_TOL)
    problems += more
    return VerificationReport(
        case_id, {"surface": A, "chars": [g0, g1], "section": s},
        side_b, side_a, worst, not problems, extra={"problems": problems},
    )


def end_swap(
    A: SurfaceSpec, gamma: PicardChar, s: MonomialSection
) -> tuple[SurfaceSpec, PicardChar, MonomialSection]:
    """Exchange the two multiple fibres (t -> -t): z-indices change sign, N is kept."""
    swapped = SurfaceSpec(A.minf, A.kinf, A.m0, A.k0)
    return swapped, PicardChar(-gamma.f, gamma.g, gamma.lam, gamma.theta_c), MonomialSection(s.n2, s.n1)


def _compose(
    product: Callable[..., StructureConstants],
    labels: list[BundleLabel],
    idx: list[SectionIndex],
    window: int,
    residual_tol: float,
    left_first: bool,
    mp: ModularParam,
) -> tuple[dict[SectionIndex, complex], float, int]:
    """One bracketing of the triple product.

    The intermediate window covers every class whose coefficient is at least
    ``residual_tol``; the mass just beyond it is reported as the residual.
    """
    L0, L1, L2, L3 = labels
    x, y, z = idx
    if left_first:
        first = (L0, L1, L2, x, y)
        second = lambda c: product(L0, L2, L3, c, z, window)  # noqa: E731
    else:
        first = (L1, L2, L3, y, z)
        second = lambda c: product(L0, L1, L3, x, c, window)  # noqa: E731
    inner = max(window + 4, significant_window(*first, mp=mp, tol=residual_tol * 1e-3) + 2)
    P = product(*first, inner)
    wider = product(*first, 2 * inner)
    residual = sum(abs(v) for c, v in wider.entries.items() if abs(c.weight) > inner)
    out: dict[SectionIndex, complex] = {}
    for c, coef in P.entries.items():
        for k, v in second(c).entries.items():
            out[k] = out.get(k, 0j) + coef * v
    return out, residual, inner


def _floer_for_chain(labels: list[BundleLabel], mp: ModularParam) -> Callable[..., StructureConstants]:
    """A product function on sub-triples of one chain, with one slope per object."""
    Ls, pert = _floer_chain(labels)
    lookup = {b: (L, a) for b, L, a in zip(labels, Ls, pert.alpha)}

    def product(B0, B1, B2, i0, i1, window):
        (L0, a0), (L1, a1), (L2, a2) = lookup[B0], lookup[B1], lookup[B2]
        x = generator_at(L0, L1, a0, a1, i0)
        y = generator_at(L1, L2, a1, a2, i1)
        return floer_mu2(L0, L1, L2, x, y, PerturbationData((a0, a1, a2)), window, mp)

    return product


def verify_associativity(
    labels: list[BundleLabel],
    idx: list[SectionIndex],
    window: int,
    side: str = "B",
    tol: float = DEFAULT_TOL,
    residual_tol: float = SELF_TOL,
    mp: ModularParam = DEFAULT_MP,
    case_id: str = "assoc",
) -> VerificationReport:
    """(x y) z against x (y z), with the intermediate window grown until stable."""
    if len(set(labels)) != 4:
        raise ValueError("associativity chains use four distinct objects")
    if side == "B":
        product = lambda *args: yoneda_product(*args, mp=mp)  # noqa: E731
    else:
        product = _floer_for_chain(labels, mp)
    left, tail_l, inner_l = _compose(product, labels, idx, window, residual_tol, True, mp)
    right, tail_r, inner_r = _compose(product, labels, idx, window, residual_tol, False, mp)
    residual = max(tail_l, tail_r)
    inner = max(inner_l, inner_r)
    ok, worst, problems = compare_constants({"left": left, "right": right}, tol)
    ok = ok and residual < residual_tol
    return VerificationReport(
        case_id, {"labels": _label_inputs(*labels), "indices": idx, "side": side},
        left, right, worst, ok,
        windows={"output": window, "intermediate": inner},
        truncation={"residual_below_tol": residual < residual_tol},
        extra={"truncation_residual": residual, "problems": problems},
    )


def verify_perturbation(
    L0: BundleLabel, L1: BundleLabel, window: int,
    extra_slopes: tuple[Fraction, Fraction] = (Fraction(1), Fraction(5, 2)),
    mp: ModularParam = DEFAULT_MP, case_id: str = "perturbation",
) -> VerificationReport:
    La, Lb = mirror_lagrangian(L0), mirror_lagrangian(L1)
    base = admissible_alphas([La, Lb])
    gap = base[0] - base[1] - 1
    pA = PerturbationData((Fraction(0), -(gap + extra_slopes[0])))
    pB = PerturbationData((Fraction(0), -(gap + extra_slopes[1])))
    rep = perturbation_independence(La, Lb, pA, pB, window, mp)
    return VerificationReport(
        case_id, {"labels": _label_inputs(L0, L1), "alpha_a": pA.alpha, "alpha_b": pB.alpha},
        {}, {}, rep.max_abs_diff, rep.passed, windows={"classes": window},
        extra={"classes_equal": rep.classes_equal, "compared": rep.compared},
    )


def filter_consistency(L: BundleLabel, window: int) -> bool:
    """The weight filter on generators matches extension of sections over D(m, k)."""
    flavor = (L.m, L.k) if L.fiber_degree != 0 else (1, 0)
    H = hom_bundle(normalize(1, 0, 0), L)
    kept = {
        x.index
        for x in intersections(
            partially_wrapped(mirror_lagrangian(normalize(1, 0, 0)), flavor),
            mirror_lagrangian(L),
            PerturbationData(admissible_alphas([mirror_lagrangian(normalize(1, 0, 0)), mirror_lagrangian(L)])),
            window,
        )
        if x.degree == 0
    }
    expected = {i for i in basis_of(H, window) if section_extends(H, i, flavor)}
    return kept == expected


QUARTERS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def random_label(rng: random.Random, bound: int) -> BundleLabel:
    m = rng.choice([v for v in range(-bound, bound + 1) if v != 0])
    k = rng.randint(-bound, bound)
    d = rng.randint(-bound, bound)
    return normalize(m, k, d, rng.choice(QUARTERS), rng.choice(QUARTERS))


def _composable(a: BundleLabel, b: BundleLabel) -> bool:
    H = hom_bundle(a, b)
    return H.fiber_degree >= 0 and has_sections(H)


def random_chain(
    rng: random.Random, length: int, bound: int, max_tries: int = 10_000
) -> list[BundleLabel]:
    """Distinct labels with nonzero sections between every consecutive pair."""
    for _ in range(max_tries):
        labels = [random_label(rng, bound) for _ in range(length)]
        if len(set(labels)) == length and all(
            _composable(labels[i], labels[i + 1]) for i in range(length - 1)
        ):
            return labels
    raise RuntimeError("could not sample a composable chain")


def random_basis_index(rng: random.Random, H: BundleLabel, window: int) -> SectionIndex:
    return rng.choice(basis_of(H, window))


NONALGEBRAIC_SURFACES: tuple[SurfaceSpec, ...] = tuple(
    SurfaceSpec(m0, k0, mi, ki)
    for m0 in range(1, 5)
    for mi in range(1, 5)
    for k0 in range(-4, 5)
    for ki in range(-4, 5)
    if __import__("math").gcd(m0, k0) == 1
    and __import__("math").gcd(mi, ki) == 1
    and 0 < abs(m0 * ki + mi * k0) <= 4
)


def random_character_with_section(
    rng: random.Random, A: SurfaceSpec, max_exp: int = 4
) -> tuple[PicardChar, MonomialSection]:
    """A character built around a chosen monomial, so that it is a section."""
    s = MonomialSection(rng.randint(0, max_exp), rng.randint(0, max_exp))
    n = A.n
    j = Fraction(A.kinf * s.n1 - A.k0 * s.n2, n)
    lam = Fraction(A.minf * s.n1 + A.m0 * s.n2, n)
    f = j + rng.randint(-2, 2)
    g = lam + rng.randint(-2, 2)
    return PicardChar(f, g, lam, Fraction(rng.randint(-1, 1))), s


def run_suite(reports: Iterable[VerificationReport]) -> dict[str, Any]:
    reps = sorted(reports, key=lambda r: r.case_id)
    return {
        "cases": reps,
        "summary": {
            "pass": sum(r.passed for r in reps),
            "fail": sum(not r.passed for r in reps),
            "max_abs_diff": max((r.max_abs_diff for r in reps), default=0.0),
        },
    }


def open_suite(trials: int, seed: int, window: int = 4, bound: int = 3,
               mp: ModularParam = DEFAULT_MP, tol: float = DEFAULT_TOL) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        L0, L1, L2 = random_chain(rng, 3, bound)
        i0 = random_basis_index(rng, hom_bundle(L0, L1), 2)
        i1 = random_basis_index(rng, hom_bundle(L1, L2), 2)
        out.append(verify_open_products(L0, L1, L2, i0, i1, window, tol, mp, case_id=f"open-{t:03d}"))
    return out


def compact_suite(trials: int, seed: int, surface: SurfaceSpec | None = None) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        A = surface or rng.choice(NONALGEBRAIC_SURFACES)
        g01, s0 = random_character_with_section(rng, A, 3)
        g12, s1 = random_character_with_section(rng, A, 3)
        g0 = PicardChar(Fraction(rng.randint(-1, 1)), Fraction(0), Fraction(0), Fraction(0))
        g1 = char_product(g0, g01)
        g2 = char_product(g1, g12)
        out.append(verify_compact_products(A, g0, g1, g2, s0, s1, case_id=f"compact-{t:03d}"))
    return out


def diagram_suite(trials: int, seed: int, surface: SurfaceSpec | None = None) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        A = surface or rng.choice(NONALGEBRAIC_SURFACES)
        gamma, s = random_character_with_section(rng, A)
        g0 = PicardChar(Fraction(0), Fraction(rng.randint(-1, 1)), Fraction(0), Fraction(0))
        out.append(verify_diagram(A, g0, char_product(g0, gamma), s, case_id=f"diagram-{t:03d}"))
    return out


def perturbation_suite(trials: int, seed: int, window: int = 3, bound: int = 3,
                       mp: ModularParam = DEFAULT_MP) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        L0, L1 = random_chain(rng, 2, bound)
        out.append(verify_perturbation(L0, L1, window, mp=mp, case_id=f"perturbation-{t:03d}"))
    return out


def associativity_suite(trials: int, seed: int, side: str, window: int = 2, bound: int = 2,
                        mp: ModularParam = DEFAULT_MP) -> list[VerificationReport]:
    rng = random.Random(seed)
    out = []
    for t in range(trials):
        labels = random_chain(rng, 4, bound)
        idx = [random_basis_index(rng, hom_bundle(labels[i], labels[i + 1]), 1) for i in range(3)]
        out.append(verify_associativity(labels, idx, window, side, mp=mp, case_id=f"assoc-{side}-{t:03d}"))
    return out
