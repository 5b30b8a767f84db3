import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfmirror.bundles_compact import (
    HOPF,
    Chart,
    MonomialSection,
    PicardChar,
    SurfaceSpec,
    canonical_char,
    char_inverse,
    char_product,
    char_quotient,
    char_validate,
    cohomology_dims,
    generator_interval,
    in_dual_lattice,
    is_section,
    make_char,
    restrict_char,
    restrict_section,
    same_class,
    section_from_index,
    section_product,
    sections,
    surface_invariants,
)
from hopfmirror.bundles_open import basis_of, normalize, trivial_bundle
from hopfmirror.errors import InvalidSpecError, NonIntegralExponentError
from hopfmirror.mirror_verify import NONALGEBRAIC_SURFACES, random_character_with_section

surfaces = st.sampled_from(NONALGEBRAIC_SURFACES)


def brute_sections(gamma, A, top=20):
    """Direct double loop over the defining congruences."""
    n = A.n
    out = []
    for n1 in range(top + 1):
        for n2 in range(top + 1):
            lam = Fraction(A.minf * n1 + A.m0 * n2, n)
            j = Fraction(A.kinf * n1 - A.k0 * n2, n)
            if (gamma.theta_c.denominator == 1 and lam == gamma.lam
                    and (lam - gamma.g).denominator == 1 and (j - gamma.f).denominator == 1):
                out.append(MonomialSection(n1, n2))
    return out


def test_surface_validation():
    with pytest.raises(InvalidSpecError):
        SurfaceSpec(2, 2, 1, 1)
    with pytest.raises(InvalidSpecError):
        SurfaceSpec(0, 1, 1, 1)


def test_hopf_invariants():
    inv = surface_invariants(HOPF)
    assert (inv.n, inv.pi1_free_rank, inv.pi1_torsion, inv.algebraic) == (1, 1, [], False)


def test_algebraic_surface():
    inv = surface_invariants(SurfaceSpec(1, 0, 1, 0))
    assert inv.n == 0 and inv.algebraic and inv.pi1_free_rank == 2


def test_torsion_three():
    inv = surface_invariants(SurfaceSpec(2, 1, 1, 1))
    assert (inv.n, inv.pi1_free_rank, inv.pi1_torsion) == (3, 1, [3])


@given(st.integers(1, 6), st.integers(-6, 6), st.integers(1, 6), st.integers(-6, 6))
def test_torsion_order_is_abs_n(m0, k0, mi, ki):
    if math.gcd(m0, k0) != 1 or math.gcd(mi, ki) != 1:
        return
    A = SurfaceSpec(m0, k0, mi, ki)
    inv = surface_invariants(A)
    if A.n == 0:
        assert inv.algebraic and inv.pi1_free_rank == 2
    else:
        assert math.prod(inv.pi1_torsion) == abs(A.n) and inv.pi1_free_rank == 1


def test_hopf_sections_of_q_squared():
    got = sections(make_char(0, 0, 2, 0), HOPF)
    assert got == [MonomialSection(0, 2), MonomialSection(1, 1), MonomialSection(2, 0)]


def test_nonintegral_theta_has_no_sections():
    assert sections(make_char(0, 0, 2, Fraction(1, 2)), HOPF) == []


def test_enumeration_matches_brute_force_on_torsion_surface():
    A = SurfaceSpec(2, 1, 1, 1)
    for f in [Fraction(p, 3) for p in range(-3, 4)]:
        for g in range(0, 3):
            gamma = make_char(f, g, 2, 0)
            if in_dual_lattice(gamma.f, gamma.g, A):
                assert sections(gamma, A) == brute_sections(gamma, A)


@given(surfaces, st.integers(0, 6), st.integers(0, 6), st.integers(-2, 2))
def test_enumeration_matches_brute_force(A, n1, n2, shift):
    rng = random.Random(n1 * 31 + n2 * 7 + shift)
    gamma, _ = random_character_with_section(rng, A)
    gamma = PicardChar(gamma.f + shift, gamma.g, gamma.lam, gamma.theta_c)
    assert sections(gamma, A) == brute_sections(gamma, A)


@pytest.mark.parametrize("k", range(6))
def test_hopf_cohomology_positive(k):
    assert cohomology_dims(make_char(0, 0, k, 0), HOPF).as_tuple() == (k + 1, k + 1, 0)


def test_hopf_cohomology_generic():
    assert cohomology_dims(make_char(0, 0, Fraction(1, 2), 0), HOPF).as_tuple() == (0, 0, 0)


def test_hopf_cohomology_serre_dual_side():
    assert cohomology_dims(make_char(0, 0, -3, 0), HOPF).as_tuple() == (0, 2, 2)


def test_canonical_character_of_hopf():
    assert canonical_char(HOPF) == make_char(-1, -2, -2, 0)


@given(surfaces, st.integers(0, 10_000))
def test_cohomology_tripwires(A, seed):
    rng = random.Random(seed)
    gamma, _ = random_character_with_section(rng, A)
    gamma = PicardChar(gamma.f, gamma.g, gamma.lam * rng.choice([1, -1]), gamma.theta_c)
    h = cohomology_dims(gamma, A)
    assert h.h0 - h.h1 + h.h2 == 0
    assert h.h0 * h.h2 == 0
    dual = char_quotient(gamma, canonical_char(A))
    assert h.h2 == len(brute_sections(dual, A, 40))


def test_hopf_picard_is_c_star():
    assert in_dual_lattice(Fraction(2), Fraction(-1), HOPF)
    assert not in_dual_lattice(Fraction(1, 2), Fraction(0), HOPF)
    with pytest.raises(InvalidSpecError):
        char_validate(make_char(Fraction(1, 2), 0, 0, 0), HOPF)


def test_restrict_trivial_character():
    assert restrict_char(PicardChar(), HOPF) == trivial_bundle()


def test_restrict_hopf_power():
    assert restrict_char(make_char(0, 0, 3, 0), HOPF, Chart.D0) == normalize(1, 0, 0, 3, 0)


def test_restrict_flat_character():
    L = restrict_char(make_char(0, Fraction(2), 2, Fraction(1, 3)), HOPF)
    assert L == normalize(1, 0, 0, 0, Fraction(1, 3))


def test_restrict_sections():
    assert (restrict_section(MonomialSection(1, 0), HOPF).j, restrict_section(MonomialSection(1, 0), HOPF).a) == (1, 1)
    assert restrict_section(MonomialSection(0, 0), HOPF).j == 0
    r = restrict_section(MonomialSection(1, 1), SurfaceSpec(2, 1, 1, 1))
    assert (r.j, r.a) == (0, 1)


def test_restrict_section_non_integral():
    with pytest.raises(NonIntegralExponentError):
        restrict_section(MonomialSection(1, 0), SurfaceSpec(2, 1, 1, 1))


@given(surfaces, st.integers(0, 10_000))
def test_restriction_is_injective_into_basis(A, seed):
    gamma, _ = random_character_with_section(random.Random(seed), A)
    secs = sections(gamma, A)
    idx = [restrict_section(s, A, gamma) for s in secs]
    assert len(set(idx)) == len(idx)
    basis = set(basis_of(restrict_char(gamma, A), 40))
    assert set(idx) <= basis


@given(surfaces, st.integers(0, 10_000))
def test_interval_bijection(A, seed):
    gamma, _ = random_character_with_section(random.Random(seed), A)
    lo, hi = generator_interval(gamma, A)
    js = range(math.ceil(lo), math.floor(hi) + 1)
    mapped = []
    for j in js:
        try:
            mapped.append(section_from_index(j, gamma, A))
        except (NonIntegralExponentError, ValueError):
            continue
    assert sorted(mapped) == sections(gamma, A)


def test_products():
    g = make_char(Fraction(1), 2, 3, 0)
    assert char_product(g, PicardChar()) == g
    assert same_class(char_product(g, char_inverse(g)), PicardChar())
    assert section_product(MonomialSection(1, 0), MonomialSection(0, 1)) == MonomialSection(1, 1)


@given(surfaces, st.integers(0, 10_000))
def test_sections_closed_under_products(A, seed):
    rng = random.Random(seed)
    g1, _ = random_character_with_section(rng, A, 3)
    g2, _ = random_character_with_section(rng, A, 3)
    prod = char_product(g1, g2)
    for s1 in sections(g1, A):
        for s2 in sections(g2, A):
            assert is_section(section_product(s1, s2), prod, A)
