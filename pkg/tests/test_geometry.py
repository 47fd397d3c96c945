import itertools
import json
import math
from fractions import Fraction
from functools import reduce

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import monomials, quasi_smooth_brute, wps_well_formed_brute
from wphyper.exactmath import BudgetExceeded
from wphyper.geometry import (
    ClassificationReport,
    Hypersurface,
    VarietyClass,
    WeightSystem,
    check_orbit_closure,
    classify_hypersurface,
    first_nonvanishing,
    hyp_volume,
    hyp_well_formed,
    quasi_smooth_general,
    section_count,
    strata,
    stratum_singularity,
    wps_well_formed,
)
from wphyper.singularities import CertificateKind, SingularityClass, reid_tai_direct

X66 = Hypersurface.of(66, (33, 22, 6, 5))


@st.composite
def small_hypersurfaces(draw, max_len=5):
    n = draw(st.integers(3, max_len))
    w = draw(st.lists(st.integers(1, 12), min_size=n, max_size=n))
    assume(math.prod(w) <= 10**4)
    d = draw(st.integers(max(w), 40))
    return Hypersurface.of(d, w)


def well_formed_oracle(h):
    """Ambient well-formed and every gcd of all weights but two divides d."""
    a = list(h.weights)
    if not wps_well_formed_brute(a):
        return False
    for i, j in itertools.combinations(range(len(a)), 2):
        rest = [x for k, x in enumerate(a) if k not in (i, j)]
        if h.degree % reduce(math.gcd, rest):
            return False
    return True


def test_weights_sorted_and_validated():
    assert WeightSystem((1, 5, 3)).weights == (5, 3, 1)
    with pytest.raises(ValueError):
        WeightSystem((1,))
    with pytest.raises(ValueError):
        Hypersurface.of(0, (1, 1))
    assert str(X66) == "X_66 in P(33,22,6,5)"


def test_x66_strata():
    rep = classify_hypersurface(X66)
    found = {sv.stratum.weights: (sv.stratum.in_base_locus, str(sv.singularity)) for sv in rep.strata}
    assert found[(5,)] == (True, "1/5(3,2) x A^0".replace(" x A^0", ""))
    assert found[(33, 22)] == (False, "1/11(6,5)")
    assert found[(33, 6)] == (False, "1/3(1,2)")
    assert found[(22, 6)] == (False, "1/2(1,1)")
    assert rep.well_formed and rep.quasi_smooth
    assert rep.variety_class == VarietyClass("CalabiYau")
    assert rep.overall.kind is SingularityClass.CANONICAL_NOT_TERMINAL
    assert rep.volume == Fraction(1, 330)
    assert rep.M == 5


@pytest.mark.parametrize(
    "d, w, cls, sing, vol",
    [
        (28, (14, 5, 4, 3, 1), "GeneralType(1)", SingularityClass.TERMINAL, Fraction(1, 30)),
        (66, (33, 22, 6, 5, 1), "Fano(1)", SingularityClass.TERMINAL, Fraction(1, 330)),
        (12, (3, 3, 2, 2, 1), "GeneralType(1)", SingularityClass.TERMINAL, Fraction(1, 3)),
        (64, (19, 16, 11, 9, 7, 1), "GeneralType(1)", SingularityClass.TERMINAL, Fraction(4, 13167)),
    ],
)
def test_known_reports(d, w, cls, sing, vol):
    rep = classify_hypersurface(Hypersurface.of(d, w), verify=True)
    assert str(rep.variety_class) == cls
    assert rep.overall.kind is sing
    assert rep.volume == vol
    assert rep.verified


def test_not_well_formed_and_not_quasi_smooth():
    assert hyp_well_formed(Hypersurface.of(5, (2, 2, 1))) == (False, "ambient-not-well-formed")
    rep = classify_hypersurface(Hypersurface.of(5, (2, 2, 1)))
    assert not rep.well_formed
    assert not quasi_smooth_general(Hypersurface.of(7, (5, 3, 2)))
    rep = classify_hypersurface(Hypersurface.of(7, (5, 3, 2)))
    assert rep.quasi_smooth is False and not rep.verified


def test_dimension_rule():
    h = Hypersurface.of(3486, (1743, 1162, 498, 42, 41))
    assert hyp_well_formed(h) == (True, "quasi-smooth-dim>=3")


@settings(max_examples=300)
@given(small_hypersurfaces())
def test_quasi_smooth_matches_brute_force(h):
    assert quasi_smooth_general(h) == quasi_smooth_brute(h.weights, h.degree)


@settings(max_examples=300)
@given(st.lists(st.integers(1, 30), min_size=2, max_size=6))
def test_wps_well_formed_matches_brute_force(w):
    assert wps_well_formed(WeightSystem(tuple(w))) == wps_well_formed_brute(sorted(w, reverse=True))


def _sweep(length, top, max_degree):
    for w in itertools.combinations_with_replacement(range(top, 0, -1), length):
        for d in range(w[0] + 1, max_degree + 1):
            yield Hypersurface.of(d, w)


@pytest.mark.parametrize("length, top, max_degree", [(4, 9, 36), (5, 6, 24)])
def test_well_formed_matches_gcd_rule_when_quasi_smooth(length, top, max_degree):
    checked = 0
    for h in _sweep(length, top, max_degree):
        if quasi_smooth_general(h):
            checked += 1
            assert hyp_well_formed(h)[0] == well_formed_oracle(h), h
    assert checked > 100


@given(small_hypersurfaces())
def test_volume_identity(h):
    assert hyp_volume(h) == Fraction(h.degree, math.prod(h.weights))


@settings(max_examples=150)
@given(small_hypersurfaces(), st.integers(0, 60))
def test_section_count_is_monomials_mod_equation(h, ell):
    expect = len(monomials(h.weights, ell)) - (len(monomials(h.weights, ell - h.degree)) if ell >= h.degree else 0)
    assert section_count(h, ell) == expect


def test_sections():
    h = Hypersurface.of(50, (25, 10, 8, 7))
    assert [section_count(h, ell) for ell in (4, 5, 12)] == [0, 0, 0]
    assert first_nonvanishing(h) == 7
    assert first_nonvanishing(Hypersurface.of(1734, (867, 578, 102, 96, 91))) == 91
    with pytest.raises(BudgetExceeded):
        section_count(h, 10**7)


@settings(max_examples=150)
@given(small_hypersurfaces(max_len=5))
def test_classification_agrees_with_direct_loop(h):
    assume(quasi_smooth_general(h) and hyp_well_formed(h)[0])
    rep = classify_hypersurface(h, verify=True)
    for sv in rep.strata:
        if sv.singularity.r > 1:
            exact = reid_tai_direct(sv.singularity).kind
            assert sv.verdict.kind.compatible_with(exact)
        if any(c.kind is CertificateKind.ORBIT_CLOSURE for c in sv.verdict.certificates):
            assert check_orbit_closure(h, sv.stratum, sv.verdict)
    assert rep.overall.kind.compatible_with(
        min(
            (reid_tai_direct(sv.singularity).kind for sv in rep.strata if sv.singularity.r > 1),
            key=lambda k: [SingularityClass.NOT_CANONICAL, SingularityClass.CANONICAL_NOT_TERMINAL, SingularityClass.TERMINAL].index(k),
            default=SingularityClass.TERMINAL,
        )
    )


@settings(max_examples=100)
@given(small_hypersurfaces())
def test_base_locus_type_independent_of_choice(h):
    assume(quasi_smooth_general(h) and hyp_well_formed(h)[0])
    for s in strata(h, singular_only=True):
        if s.in_base_locus and s.r > 1:
            stratum_singularity(h, s, verify=True)


def test_report_json_round_trip():
    for d, w in [(66, (33, 22, 6, 5)), (28, (14, 5, 4, 3, 1)), (6521466, (3260733, 2173822, 931638, 151662, 1806, 1805))]:
        rep = classify_hypersurface(Hypersurface.of(d, w))
        again = ClassificationReport.from_dict(json.loads(json.dumps(rep.to_dict())))
        assert again == rep
