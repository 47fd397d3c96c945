import json

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import reid_tai_min
from wphyper.exactmath import BudgetExceeded
from wphyper.singularities import (
    AdjunctionContext,
    Certificate,
    CertificateKind,
    IllFormedError,
    QuotientSingularity,
    SingularityClass,
    SingularityVerdict,
    check_certificate,
    classify,
    meet,
    normalize,
    reid_tai_direct,
    reid_tai_minimum,
)

T = SingularityClass.TERMINAL
CNT = SingularityClass.CANONICAL_NOT_TERMINAL
NC = SingularityClass.NOT_CANONICAL


@st.composite
def singularities(draw, max_r=300, max_len=6):
    r = draw(st.integers(2, max_r))
    w = draw(st.lists(st.integers(1, r - 1), min_size=1, max_size=max_len))
    if draw(st.booleans()):
        # bias towards Gorenstein cases, where the interesting verdicts live
        last = (-sum(w)) % r
        if last:
            w.append(last)
    sing = QuotientSingularity(r, tuple(w))
    assume(sing.well_formed)
    return sing


@pytest.mark.parametrize(
    "r, weights, expected",
    [
        (5, (3, 2), CNT),
        (2, (1, 1, 1), T),
        (11, (6, 5), CNT),
        (11, (6, 5, 1), T),
        (7, (1, 2, 4), CNT),
        (3, (1, 1), NC),
        (39, (3, 3, 2, 2, 12, 28, 28), T),
    ],
)
def test_known_types(r, weights, expected):
    sing = QuotientSingularity(r, weights)
    assert classify(sing).kind is expected
    assert reid_tai_direct(sing).kind is expected


def test_weight_subset_certificate_is_reported():
    v = classify(QuotientSingularity(11, (6, 5)))
    kinds = [c.kind for c in v.certificates]
    assert CertificateKind.WEIGHT_SUBSET in kinds and CertificateKind.GORENSTEIN_SUM in kinds
    sub = next(c for c in v.certificates if c.kind is CertificateKind.WEIGHT_SUBSET)
    assert sub.subsets == ((5, 6),)


def test_normalize_and_text():
    s = normalize(11, [6, 5, 22, 17])
    assert str(s) == "1/11(6,5,6) x A^1"
    assert s.trivial_rank == 1
    with pytest.raises(ValueError):
        QuotientSingularity(5, (5,))


def test_ill_formed_rejected():
    with pytest.raises(IllFormedError):
        classify(QuotientSingularity(4, (2, 2)))
    with pytest.raises(IllFormedError):
        reid_tai_direct(QuotientSingularity(6, (2, 3)))


def test_budget():
    sing = QuotientSingularity(10**6 + 3, (1, 2, 10**6))
    with pytest.raises(BudgetExceeded):
        reid_tai_minimum(sing, budget=10)
    assert reid_tai_direct(sing, budget=10).kind is SingularityClass.UNKNOWN
    # certificates still work with the loop disabled
    assert classify(QuotientSingularity(10**6 + 3, (1, 10**6 + 2, 5)), budget=0).kind is SingularityClass.CANONICAL_AT_LEAST


def test_index_one_promotion():
    sing = QuotientSingularity(11, (6, 5, 3))
    assert classify(sing, budget=0).kind is SingularityClass.CANONICAL_AT_LEAST
    v = classify(sing, AdjunctionContext(1), budget=0)
    assert v.kind is T
    assert reid_tai_direct(sing).kind is T


def test_meet():
    assert meet([T, CNT]) is CNT
    assert meet([T, SingularityClass.UNKNOWN, CNT]) is SingularityClass.UNKNOWN
    assert meet([]) is T


@settings(max_examples=1500)
@given(singularities())
def test_classify_agrees_with_brute_force(sing):
    low = reid_tai_min(sing.r, sing.weights)
    exact = T if low > sing.r else CNT if low == sing.r else NC
    v = classify(sing)
    assert v.kind is exact
    for cert in v.certificates:
        assert check_certificate(sing, cert)
        if cert.kind in (CertificateKind.WEIGHT_SUBSET, CertificateKind.GORENSTEIN_SUM):
            assert low >= sing.r
            if len(cert.subsets) >= 2:
                assert low > sing.r


@settings(max_examples=500)
@given(singularities(max_r=2000))
def test_certificates_only_never_contradict(sing):
    low = reid_tai_min(sing.r, sing.weights)
    v = classify(sing, budget=0)
    exact = T if low > sing.r else CNT if low == sing.r else NC
    assert v.kind.compatible_with(exact)


@settings(max_examples=300)
@given(singularities(), st.data())
def test_splitting_a_weight_never_lowers_sums(sing, data):
    j = data.draw(st.integers(0, len(sing.weights) - 1))
    b = sing.weights[j]
    c = data.draw(st.integers(1, sing.r - 1))
    e = (b - c) % sing.r
    assume(e)
    split = sing.weights[:j] + (c, e) + sing.weights[j + 1:]
    for i in range(1, sing.r):
        assert sum(i * x % sing.r for x in split) >= sum(i * x % sing.r for x in sing.weights)


def test_tampered_certificates_fail():
    sing = QuotientSingularity(11, (6, 5))
    assert not check_certificate(sing, Certificate(CertificateKind.WEIGHT_SUBSET, subsets=((6, 6),)))
    assert not check_certificate(sing, Certificate(CertificateKind.DIRECT_REID_TAI, minimum=12, witness=1))
    assert not check_certificate(sing, Certificate(CertificateKind.GORENSTEIN_SUM, subsets=((6,),)))


@settings(max_examples=200)
@given(singularities())
def test_verdict_json_round_trip(sing):
    v = classify(sing)
    assert SingularityVerdict.from_dict(json.loads(json.dumps(v.to_dict()))) == v
