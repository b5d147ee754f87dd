from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import families
from extset.errors import ExtsetError, PreconditionError
from extset.family import Family, power_set, restrict
from extset.params import (
    budget_holds,
    correlation_check,
    degree_stats,
    family_params,
    parse_rational,
    product_measure,
    sperner_budget_check,
    sperner_partition,
    sturdiness,
)
from extset.predicates import is_downset, is_upset

TRIANGLE = Family.of(3, [(1, 2), (2, 3), (1, 3)])
STAR4 = power_set(4).filter(lambda m: m & 1)


def monotone_families(n):
    """All downsets and all upsets over [n], as Family lists."""
    size = 1 << n
    downs = []
    for ind in range(1 << size):
        ok = True
        rest = ind
        while rest and ok:
            s = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            b = s
            while b:
                low = b & -b
                if not ind >> (s ^ low) & 1:
                    ok = False
                    break
                b ^= low
        if ok:
            downs.append(ind)
    full = size - 1
    to_fam = lambda ind: Family.of(n, (s for s in range(size) if ind >> s & 1))  # noqa: E731
    down_f = [to_fam(d) for d in downs]
    up_f = [Family.of(n, (full & ~m for m in d)) for d in down_f]
    return down_f, up_f


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("2") == 2
    assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)
    for bad in ("0.5", "1/0", "a/b", "1/2/3"):
        with pytest.raises(ExtsetError):
            parse_rational(bad)


def test_degree_examples():
    assert degree_stats(STAR4).diversity == 0
    r = degree_stats(TRIANGLE)
    assert (r.max_degree, r.diversity) == (2, 1)
    r = degree_stats(Family.empty(3))
    assert (r.max_degree, r.diversity) == (0, 0)


def test_sturdiness_examples():
    assert sturdiness(STAR4) == (0, (2, 1))
    assert sturdiness(TRIANGLE)[0] == 1
    f = power_set(4).filter(lambda m: m & 1 and not m & 8)
    assert sturdiness(f)[0] == 0
    with pytest.raises(PreconditionError):
        sturdiness(Family.of(1, [(1,)]))


@given(families(n_min=2))
def test_param_identities(f):
    rep = family_params(f)
    assert rep.diversity == len(f) - rep.max_degree
    assert rep.sturdiness <= rep.diversity
    assert rep.max_degree == max(len(restrict(f, "contains", i)) for i in range(1, f.n + 1))
    assert rep.diversity == min(len(restrict(f, "avoids", i)) for i in range(1, f.n + 1))
    brute = min(
        (len(restrict(f, "pair", i, j)), (i, j))
        for i in range(1, f.n + 1)
        for j in range(1, f.n + 1)
        if i != j
    )
    assert (rep.sturdiness, rep.sturdiness_pair) == brute


def test_measure_examples():
    assert product_measure(power_set(3), "1/2") == 1
    p = Fraction(2, 7)
    assert product_measure(Family.of(5, [()]), p) == (1 - p) ** 5
    assert product_measure(Family.of(2, [(1,)]), "1/3") == Fraction(2, 9)
    for bad in ("0", "1", "3/2"):
        with pytest.raises(PreconditionError):
            product_measure(power_set(2), bad)


@given(st.integers(1, 10), st.integers(1, 50), st.integers(2, 51))
def test_normalization(n, a, b):
    if a >= b:
        return
    assert product_measure(power_set(n), Fraction(a, b)) == 1


def test_budget_examples():
    assert budget_holds(Fraction(1, 4), Fraction(1, 4))
    assert not budget_holds(Fraction(1, 2), Fraction(1, 4))
    assert sperner_budget_check(Family.of(2, [(1,)]), Family.of(2, [(2,)]), "1/2")


@given(st.fractions(0, 1), st.fractions(0, 1))
def test_budget_against_rational_root(r, y):
    # with x = r^2 the check reads r + sqrt(y) <= 1, i.e. y <= (1 - r)^2
    assert budget_holds(r * r, y) == (y <= (1 - r) ** 2)


def test_correlation_examples():
    up = Family.of(3, [(1, 2), (1, 2, 3), (1, 3)])
    assert correlation_check(power_set(3), up, "1/2")
    r = correlation_check(Family.of(2, [()]), Family.of(2, [(1, 2)]), "1/2")
    assert r.holds and r.lhs == 0 and r.rhs == Fraction(1, 16)
    assert r.down_is_downset and r.up_is_upset
    assert not correlation_check(up, power_set(3), "1/2").down_is_downset


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_correlation_all_monotone(n):
    downs, ups = monotone_families(n)
    assert all(is_downset(d) for d in downs) and all(is_upset(u) for u in ups)
    expected = {1: 3, 2: 6, 3: 20, 4: 168}[n]
    assert len(downs) == expected
    ps = ["1/10", "1/2", "9/10"] if n == 4 else ["1/10", "1/4", "1/2", "3/4", "9/10"]
    for d in downs:
        for u in ups:
            for p in ps:
                assert correlation_check(d, u, p)


def test_sperner_partition_shape():
    f, g = Family.of(3, [(1,)]), Family.of(3, [(2,)])
    a, b, c, d = sperner_partition(f, g)
    assert a == Family.of(3, [(1, 2), (1, 2, 3)])
    assert b == Family.of(3, [(1,), (1, 3)])
    assert c == Family.of(3, [(2,), (2, 3)])
    assert d == Family.of(3, [(), (3,)])
    assert is_upset(a.union(b)) and is_upset(a.union(c))
