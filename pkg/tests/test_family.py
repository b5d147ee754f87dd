import warnings

import pytest
from hypothesis import given

from conftest import all_families, families
from extset.errors import ElementRangeError, GroundSizeError, ParseError, PreconditionError
from extset.family import (
    DuplicateSetWarning,
    Family,
    mask_of,
    parse_family,
    power_set,
    relative_complement,
    restrict,
    serialize,
    sets_up_to,
    to_json,
    uniform_sets,
)

TRIANGLE = Family.of(3, [(1, 2), (2, 3), (1, 3)])


def star(n, e=1):
    return power_set(n).filter(lambda m: m >> (e - 1) & 1)


def test_parse_basic():
    assert parse_family("n=3\n{1,2}\n{1,3}") == Family.of(3, [(1, 2), (1, 3)])


def test_parse_empty_set_literal():
    f = parse_family("n=3\n{}")
    assert f.members == (0,)


def test_parse_element_out_of_range():
    with pytest.raises(ElementRangeError):
        parse_family("n=2\n{3}")


@pytest.mark.parametrize(
    "text",
    ["", "{1}", "n=3\n{1,,2}", "n=3\n{2,1}", "n=3\n1,2", "n=0\n{}", "n=31\n{}", '{"n": 3}', "{bad json"],
)
def test_parse_malformed(text):
    with pytest.raises((ParseError, ElementRangeError)):
        parse_family(text)


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as info:
        parse_family("n=3\n# comment\n{1}\n{1 2}")
    assert info.value.line == 4


def test_parse_duplicates_warn_and_dedup():
    with pytest.warns(DuplicateSetWarning):
        f = parse_family("n=3\n{1}\n{1}\n{2}")
    assert len(f) == 2


def test_comments_and_blank_lines():
    assert parse_family("# hi\n\nn=2\n  {1}\n# x\n{1,2}\n") == Family.of(2, [(1,), (1, 2)])


def test_json_form():
    f = parse_family('{"n": 4, "sets": [[1, 3], [], [2]]}')
    assert f == Family.of(4, [(1, 3), (), (2,)])
    assert parse_family_json_roundtrip(f) == f


def parse_family_json_roundtrip(f):
    import json

    return parse_family(json.dumps(to_json(f)))


def test_canonical_order():
    f = Family.of(3, [(1, 2, 3), (2,), (), (1, 3), (1,)])
    assert f.as_sets() == [(), (1,), (2,), (1, 3), (1, 2, 3)]


def test_ground_cap():
    with pytest.raises(GroundSizeError):
        Family.of(31, [])
    with pytest.raises(GroundSizeError):
        Family.of(0, [])
    Family.of(30, [(30,)])


def test_mask_range():
    with pytest.raises(ElementRangeError):
        Family.of(2, [(3,)])
    with pytest.raises(ElementRangeError):
        mask_of([0])


@given(families())
def test_roundtrip(f):
    assert parse_family(serialize(f)) == f
    assert serialize(parse_family(serialize(f))) == serialize(f)


def test_restrict_examples():
    assert restrict(TRIANGLE, "pair", 1, 2) == Family.of(3, [(3,)])
    assert restrict(TRIANGLE, "avoids", 1) == Family.of(3, [(2, 3)])
    assert restrict(TRIANGLE, "contains", 1) == Family.of(3, [(2,), (3,)])
    assert len(restrict(star(4), "pair", 2, 1)) == 0


def test_restrict_errors():
    with pytest.raises(PreconditionError) as info:
        restrict(TRIANGLE, "pair", 2, 2)
    assert info.value.reason == "i-equals-j"
    with pytest.raises(ElementRangeError):
        restrict(TRIANGLE, "contains", 4)
    with pytest.raises(PreconditionError):
        restrict(TRIANGLE, "sideways", 1)


@given(families())
def test_restrict_counts(f):
    for i in range(1, f.n + 1):
        assert len(restrict(f, "contains", i)) + len(restrict(f, "avoids", i)) == len(f)
        assert restrict(f, "contains", i).n == f.n
        for j in range(1, f.n + 1):
            if i != j:
                assert restrict(f, "pair", i, j).issubset(restrict(f, "contains", i))


def test_relative_complement_examples():
    u = mask_of([3, 4])
    assert relative_complement(Family.of(4, [(3,)]), u) == Family.of(4, [(4,)])
    assert relative_complement(Family.of(4, [()]), u) == Family.of(4, [u])
    with pytest.raises(PreconditionError) as info:
        relative_complement(Family.of(4, [(1,)]), u)
    assert info.value.reason == "not-contained"


@given(families())
def test_relative_complement_involution(f):
    u = (1 << f.n) - 1
    c = relative_complement(f, u)
    assert len(c) == len(f)
    assert relative_complement(c, u) == f


def test_universe_builders():
    assert len(power_set(4)) == 16
    assert len(sets_up_to(4, 2)) == 11
    assert len(uniform_sets(5, 2)) == 10


def test_set_algebra():
    a, b = Family.of(3, [(1,), (2,)]), Family.of(3, [(2,), (3,)])
    assert a.union(b) == Family.of(3, [(1,), (2,), (3,)])
    assert a.difference(b) == Family.of(3, [(1,)])
    assert a.intersection(b) == Family.of(3, [(2,)])
    with pytest.raises(GroundSizeError):
        a.union(Family.of(4, []))


def test_all_families_helper():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert sum(1 for _ in all_families(2)) == 16
