import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hopfmirror.bundles_compact import HOPF, MonomialSection, PicardChar, SurfaceSpec, make_char
from hopfmirror.bundles_open import SectionIndex, canonical_index, hom_bundle, normalize, trivial_bundle
from hopfmirror.errors import NotASectionError
from hopfmirror.fukaya_model import mirror_lagrangian
from hopfmirror.mirror_verify import (
    NONALGEBRAIC_SURFACES,
    compare_constants,
    end_swap,
    filter_consistency,
    phi_compact,
    phi_open,
    random_character_with_section,
    run_suite,
    to_jsonable,
    verify_associativity,
    verify_compact_products,
    verify_diagram,
    verify_open_products,
    verify_perturbation,
)

O = trivial_bundle()


def test_phi_open_keeps_index():
    L = normalize(2, 1, 3)
    idx = canonical_index(L, 1, 2)
    Lag, out = phi_open(L, idx)
    assert Lag == mirror_lagrangian(L) and out == idx


def test_phi_compact_on_hopf():
    g1 = make_char(0, 0, 2, 0)
    assert phi_compact(PicardChar(), g1, MonomialSection(1, 1), HOPF).index.j == 1
    assert phi_compact(PicardChar(), PicardChar(), MonomialSection(0, 0), HOPF).index.j == 0
    js = [phi_compact(PicardChar(), g1, s, HOPF).index.j
          for s in (MonomialSection(0, 2), MonomialSection(1, 1), MonomialSection(2, 0))]
    assert js == sorted(js)
    with pytest.raises(NotASectionError):
        phi_compact(PicardChar(), g1, MonomialSection(1, 0), HOPF)


def test_open_products_on_worked_example():
    L0, L1, L2 = normalize(1, 0, -1), O, normalize(1, -1, 1)
    i0 = canonical_index(hom_bundle(L0, L1), 0, 0)
    i1 = canonical_index(hom_bundle(L1, L2), 0, 0)
    rep = verify_open_products(L0, L1, L2, i0, i1, 6)
    assert rep.passed and rep.max_abs_diff < 1e-12
    assert rep.sign_convention_used["theta_third_term_sign"] == 1


def test_open_products_with_identity():
    L = normalize(1, 1, 2, Fraction(1, 4), Fraction(3, 4))
    idx = canonical_index(L, 0, 1)
    rep = verify_open_products(O, O, L, SectionIndex(0, 0, 0), idx, 6)
    assert rep.passed and rep.side_a == {idx: pytest.approx(1)}


def test_compact_product_of_coordinates():
    g1, g2 = make_char(0, 0, 1, 0), make_char(0, 0, 2, 0)
    assert verify_compact_products(HOPF, PicardChar(), g1, g2, MonomialSection(1, 0), MonomialSection(0, 1)).passed
    assert verify_compact_products(HOPF, PicardChar(), g1, g1, MonomialSection(0, 1), MonomialSection(0, 0)).passed


def test_diagram_examples():
    rep = verify_diagram(HOPF, PicardChar(), PicardChar(), MonomialSection(0, 0))
    assert rep.passed and list(rep.side_b) == [SectionIndex(0, 0, 0)]
    rep = verify_diagram(HOPF, PicardChar(), make_char(0, 0, 2, 0), MonomialSection(2, 0))
    assert rep.passed and (next(iter(rep.side_b)).j, next(iter(rep.side_b)).a) == (2, 2)


@given(st.sampled_from(NONALGEBRAIC_SURFACES), st.integers(0, 10_000))
def test_diagram_symmetric_under_end_swap(A, seed):
    rng = random.Random(seed)
    gamma, s = random_character_with_section(rng, A)
    assert verify_diagram(A, PicardChar(), gamma, s).passed
    B, gamma2, s2 = end_swap(A, gamma, s)
    assert verify_diagram(B, PicardChar(), gamma2, s2).passed


def test_end_swap_is_involution():
    A = SurfaceSpec(2, 1, 3, 1)
    g = make_char(Fraction(1, 7), 0, 1, 0)
    s = MonomialSection(2, 5)
    assert end_swap(*end_swap(A, g, s)) == (A, g, s)


@pytest.mark.parametrize("side", ["B", "A"])
def test_associativity_on_a_fixed_chain(side):
    labels = [normalize(1, 0, 0), normalize(1, 0, 1), normalize(1, 1, 3), normalize(2, 1, 3, Fraction(1, 2))]
    idx = [canonical_index(hom_bundle(labels[i], labels[i + 1]), 0, 0) for i in range(3)]
    rep = verify_associativity(labels, idx, 2, side=side)
    assert rep.passed, rep.extra["problems"]
    assert rep.extra["truncation_residual"] < 1e-10


def test_associativity_rejects_repeated_objects():
    with pytest.raises(ValueError):
        verify_associativity([O, O, O, O], [SectionIndex(0, 0, 0)] * 3, 2)


def test_perturbation_report():
    assert verify_perturbation(O, normalize(1, 0, 2), 3).passed


def test_filter_consistency():
    for L in (normalize(1, 0, 2), normalize(2, 1, 1), normalize(1, 0, 0)):
        assert filter_consistency(L, 4)


def test_compare_constants_detects_support_mismatch():
    a = {SectionIndex(0, 0, 0): 1 + 0j}
    b = {SectionIndex(0, 0, 0): 1 + 0j, SectionIndex(1, 1, 1): 0.5 + 0j}
    ok, worst, problems = compare_constants({"a": a, "b": b}, 1e-8)
    assert not ok and worst == 0.5 and problems


def test_compare_constants_ignores_noise_floor():
    a = {SectionIndex(0, 0, 0): 1 + 0j, SectionIndex(1, 1, 1): 1e-300 + 0j}
    b = {SectionIndex(0, 0, 0): 1 + 1e-12j}
    assert compare_constants({"a": a, "b": b}, 1e-8)[0]


def test_json_encoding():
    doc = to_jsonable({"r": Fraction(3, 4), "i": Fraction(2), "c": 1 + 2j, SectionIndex(1, 2, 3): [Fraction(1, 2)]})
    assert doc == {"r": "3/4", "i": "2", "c": [1.0, 2.0], "(1,2)": ["1/2"]}
    json.dumps(doc)


def test_run_suite_counts():
    rep = verify_diagram(HOPF, PicardChar(), PicardChar(), MonomialSection(0, 0))
    summary = run_suite([rep, rep])
    assert summary["summary"]["pass"] == 2 and summary["summary"]["fail"] == 0
    assert len(summary["cases"]) == 2
