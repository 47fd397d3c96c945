import itertools
import json
import math
from fractions import Fraction
from functools import reduce

import pytest

from oracles import quasi_smooth_brute, wps_well_formed_brute
from wphyper.geometry import Hypersurface, quasi_smooth_general
from wphyper.search import RecordKind, RecordSet, SearchConfig, enumerate_cy_surfaces, quasi_smooth_kernel


def brute_records(max_weight):
    """Both records by listing every candidate with the slow oracles."""
    found = []
    for a in itertools.combinations_with_replacement(range(max_weight, 0, -1), 4):
        d = sum(a)
        if not wps_well_formed_brute(list(a)):
            continue
        if any(d % reduce(math.gcd, [x for k, x in enumerate(a) if k not in (i, j)]) for i, j in itertools.combinations(range(4), 2)):
            continue
        if quasi_smooth_brute(a, d):
            found.append(a)
    vol = {a: Fraction(sum(a), math.prod(a)) for a in found}
    best_vol = min(vol.values())
    best_bottom = max(a[3] for a in found)
    return (
        best_vol,
        sorted((a for a in found if vol[a] == best_vol), reverse=True),
        best_bottom,
        sorted((a for a in found if a[3] == best_bottom), reverse=True),
    )


def test_matches_brute_force_enumeration():
    vol, vol_at, bottom, bottom_at = brute_records(12)
    r = enumerate_cy_surfaces(SearchConfig(12, RecordKind.MIN_VOLUME))
    assert (r.best, r.achievers) == (vol, vol_at)
    r = enumerate_cy_surfaces(SearchConfig(12, RecordKind.MAX_BOTTOM_WEIGHT))
    assert (r.best, r.achievers) == (bottom, bottom_at)


def test_small_record():
    r = enumerate_cy_surfaces(SearchConfig(6, RecordKind.MIN_VOLUME))
    assert r.best == Fraction(1, 20)
    assert r.achievers == [(6, 5, 4, 3)]


@pytest.mark.parametrize("kind", list(RecordKind))
def test_deterministic_across_workers(kind):
    results = [enumerate_cy_surfaces(SearchConfig(24, kind, workers)) for workers in (1, 2, 3, 8)]
    assert all(r == results[0] for r in results)


def test_records_are_monotone_in_the_bound():
    prev_vol = prev_bottom = None
    for w in range(4, 31, 2):
        vol = enumerate_cy_surfaces(SearchConfig(w, RecordKind.MIN_VOLUME), recheck=False).best
        bottom = enumerate_cy_surfaces(SearchConfig(w, RecordKind.MAX_BOTTOM_WEIGHT), recheck=False).best
        if prev_vol is not None:
            assert vol <= prev_vol and bottom >= prev_bottom
        prev_vol, prev_bottom = vol, bottom


def test_kernel_matches_general_criterion():
    for a in itertools.combinations_with_replacement(range(14, 0, -1), 4):
        d = sum(a)
        assert quasi_smooth_kernel(a, d) == quasi_smooth_general(Hypersurface.of(d, a)), a


def test_json_round_trip_and_note():
    r = enumerate_cy_surfaces(SearchConfig(10, RecordKind.MIN_VOLUME))
    data = json.loads(json.dumps(r.to_dict()))
    assert "a0 <= 10" in data["note"]
    assert RecordSet.from_dict(data) == r


def test_config_guards():
    with pytest.raises(ValueError):
        SearchConfig(0)
    with pytest.raises(ValueError):
        SearchConfig(201)
    with pytest.raises(ValueError):
        SearchConfig(10, workers=0)
    with pytest.raises(ValueError):
        SearchConfig(10, dimension=3)


@pytest.mark.parametrize("a", [(25, 10, 8, 7), (12, 9, 8, 7), (33, 22, 6, 5)])
def test_record_achievers_pass_slow_oracles(a):
    assert wps_well_formed_brute(list(a))
    assert quasi_smooth_brute(a, sum(a))
