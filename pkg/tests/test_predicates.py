from itertools import combinations, product

import pytest
from hypothesis import given

from conftest import all_families, families, family_pairs
from extset.errors import GroundSizeError, PreconditionError
from extset.family import Family, mask_of, popcount, relative_complement
from extset.predicates import (
    is_cross_sperner,
    is_cross_t_intersecting,
    is_downset,
    is_iu,
    is_s_union,
    is_t_intersecting,
    is_upset,
)
from extset.separated import SeparatedParams, build_candidates


def test_t_intersecting_examples():
    assert is_t_intersecting(Family.of(3, [(1, 2), (2, 3), (1, 3)]), 1)
    v = is_t_intersecting(Family.of(2, [(1,), (2,)]), 1)
    assert not v and v.witness == (mask_of([1]), mask_of([2]))
    assert is_t_intersecting(Family.of(3, [(1, 2, 3)]), 3)


def test_diagonal_counts():
    # a single small set fails a larger threshold against itself
    v = is_t_intersecting(Family.of(3, [(1,)]), 2)
    assert not v and v.witness == (1, 1)


def test_s_union_examples():
    assert is_s_union(Family.of(4, [(1, 2), (1, 3)]), 3)
    assert not is_s_union(Family.of(4, [(1, 2), (3, 4)]), 3)
    assert is_s_union(Family.of(4, [()]), 0)


def test_iu_examples():
    assert is_iu(Family.of(4, [(1,), (1, 2), (1, 3), (1, 2, 3)]))
    v = is_iu(Family.of(4, [(1, 2), (1, 3, 4)]))
    assert not v and v.reason
    assert not is_iu(Family.of(4, [()]))
    assert not is_iu(Family.of(2, [(1, 2)]))


def test_cross_t_examples():
    p = SeparatedParams(2, 3, 3, 2)
    assert is_cross_t_intersecting(build_candidates(p, "Fa", 3), build_candidates(p, "Ga", 3), 1)
    f = Family.of(4, [(1, 2)])
    assert is_cross_t_intersecting(f, Family.empty(4), 1)
    assert not is_cross_t_intersecting(f, Family.of(4, [(3, 4)]), 1)
    with pytest.raises(GroundSizeError):
        is_cross_t_intersecting(f, Family.of(5, [(1,)]), 1)


def test_cross_sperner_examples():
    assert is_cross_sperner(Family.of(3, [(1, 2)]), Family.of(3, [(1, 3)]))
    assert not is_cross_sperner(Family.of(3, [(1,)]), Family.of(3, [(1, 2)]))
    assert is_cross_sperner(Family.empty(3), Family.of(3, [(1,)]))


def test_negative_thresholds_rejected():
    with pytest.raises(PreconditionError):
        is_t_intersecting(Family.of(2, [(1,)]), -1)


def _lex_first_bad(f, bad):
    """Reference witness: lexicographically smallest violating ordered pair by canonical index."""
    ms = f.members
    for a, b in product(range(len(ms)), repeat=2):
        if bad(ms[a], ms[b]):
            return ms[a], ms[b]
    return None


@given(families(max_size=8))
def test_witness_is_lexicographically_smallest(f):
    for t in (1, 2):
        v = is_t_intersecting(f, t)
        assert v.witness == _lex_first_bad(f, lambda x, y: popcount(x & y) < t)
    for s in (1, 2, 3):
        v = is_s_union(f, s)
        assert v.witness == _lex_first_bad(f, lambda x, y: popcount(x | y) > s)


@given(family_pairs(max_size=8))
def test_cross_matches_brute_force(pair):
    f, g = pair
    for t in (1, 2):
        ok = all(popcount(x & y) >= t for x in f for y in g)
        assert bool(is_cross_t_intersecting(f, g, t)) == ok
    inc = any(x & y in (x, y) for x in f for y in g)
    assert bool(is_cross_sperner(f, g)) == (not inc)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_complement_duality_all_families(n):
    full = (1 << n) - 1
    for f in all_families(n):
        c = relative_complement(f, full)
        for s in range(n + 1):
            lhs = bool(is_s_union(f, s))
            rhs = all(popcount(x & y) >= n - s for x in c for y in c)
            assert lhs == rhs


def test_complement_duality_n4_sample(rng):
    full = 15
    for _ in range(3000):
        f = Family.of(4, (m for m in range(16) if rng.random() < 0.3))
        c = relative_complement(f, full)
        for s in range(5):
            assert bool(is_s_union(f, s)) == bool(is_t_intersecting(c, 4 - s))


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_cross_sperner_bridge(size):
    u = (1 << size) - 1
    subsets = range(u + 1)
    for a, b in product(subsets, repeat=2):
        if a & b and (a | b) != u:
            c = u & ~b
            assert not (a & c == a or a & c == c)


def test_monotone_checks():
    down = Family.of(3, [(), (1,), (2,), (1, 2)])
    up = Family.of(3, [(1, 2), (1, 2, 3)])
    assert is_downset(down) and not is_upset(down)
    assert is_upset(up) and not is_downset(up)
    assert is_downset(Family.empty(3)) and is_upset(Family.empty(3))


def test_iu_brute_force_n3():
    full = 7
    for f in all_families(3):
        ok = all(x & y and (x | y) != full for x, y in combinations(f.members, 2))
        ok = ok and all(x and x != full for x in f)
        assert bool(is_iu(f)) == ok
