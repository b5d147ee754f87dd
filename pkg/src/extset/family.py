"""Ground sets, set masks and families of subsets.

A subset of ``[n] = {1, ..., n}`` is stored as an ``int`` whose bit ``i - 1``
is set iff element ``i`` belongs to the subset.  A :class:`Family` is an
immutable, deduplicated tuple of such masks kept in canonical order
(cardinality first, then numeric value).
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from .errors import ElementRangeError, GroundSizeError, ParseError, PreconditionError

MAX_GROUND = 30

__all__ = [
    "MAX_GROUND",
    "DuplicateSetWarning",
    "Family",
    "check_ground",
    "mask_of",
    "elements",
    "popcount",
    "format_set",
    "full_mask",
    "power_set",
    "sets_up_to",
    "uniform_sets",
    "parse_family",
    "parse_family_json",
    "serialize",
    "to_json",
    "restrict",
    "relative_complement",
]


class DuplicateSetWarning(UserWarning):
    """A family file listed the same set more than once."""


def check_ground(n: int) -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise GroundSizeError(f"ground size must be an integer, got {n!r}")
    if not 1 <= n <= MAX_GROUND:
        raise GroundSizeError(f"ground size {n} outside [1, {MAX_GROUND}]")
    return n


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(elems: Iterable[int], n: int | None = None) -> int:
    """Mask of a collection of 1-based elements, range-checked against ``n``."""
    mask = 0
    for e in elems:
        if e < 1 or (n is not None and e > n):
            raise ElementRangeError(f"element {e} outside [1, {n}]")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> tuple[int, ...]:
    """Sorted 1-based elements of a mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"


def _canonical_key(mask: int) -> tuple[int, int]:
    return popcount(mask), mask


@dataclass(frozen=True)
class Family:
    """An immutable family of subsets of ``[n]``.

    Build one with :meth:`Family.of`, which validates, deduplicates and
    sorts.  The raw constructor assumes ``members`` is already canonical.
    """

    n: int
    members: tuple[int, ...] = field(default=())

    @classmethod
    def of(cls, n: int, sets: Iterable[int | Iterable[int]] = ()) -> "Family":
        """Family over ``[n]`` from masks or iterables of 1-based elements."""
        check_ground(n)
        limit = full_mask(n)
        seen = set()
        for s in sets:
            m = s if isinstance(s, int) else mask_of(s, n)
            if m < 0 or m & ~limit:
                raise ElementRangeError(f"set {s!r} is not a subset of [{n}]")
            seen.add(m)
        return cls(n, tuple(sorted(seen, key=_canonical_key)))

    @classmethod
    def empty(cls, n: int) -> "Family":
        check_ground(n)
        return cls(n, ())

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in self.member_set

    def __repr__(self) -> str:
        body = ", ".join(format_set(m) for m in self.members)
        return f"Family(n={self.n}, {{{body}}})"

    def as_sets(self) -> list[tuple[int, ...]]:
        return [elements(m) for m in self.members]

    def issubset(self, other: "Family") -> bool:
        return self.member_set <= other.member_set

    def union(self, other: "Family") -> "Family":
        _same_ground(self, other)
        return Family.of(self.n, self.member_set | other.member_set)

    def difference(self, other: "Family") -> "Family":
        _same_ground(self, other)
        return Family(self.n, tuple(m for m in self.members if m not in other.member_set))

    def intersection(self, other: "Family") -> "Family":
        _same_ground(self, other)
        return Family(self.n, tuple(m for m in self.members if m in other.member_set))

    def filter(self, pred) -> "Family":
        return Family(self.n, tuple(m for m in self.members if pred(m)))

    def total_size(self) -> int:
        return sum(popcount(m) for m in self.members)


def _same_ground(f: Family, g: Family) -> None:
    if f.n != g.n:
        raise GroundSizeError(f"ground sizes differ: {f.n} vs {g.n}")


def power_set(n: int) -> Family:
    check_ground(n)
    return Family.of(n, range(1 << n))


def sets_up_to(n: int, size: int) -> Family:
    """All subsets of ``[n]`` with at most ``size`` elements."""
    check_ground(n)
    return Family.of(n, (m for m in range(1 << n) if popcount(m) <= size))


def uniform_sets(n: int, size: int) -> Family:
    check_ground(n)
    return Family.of(n, (mask_of(c) for c in combinations(range(1, n + 1), size)))


# ---------------------------------------------------------------------------
# file formats

_HEADER = re.compile(r"^n\s*=\s*(\d+)$")
_SET = re.compile(r"^\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}$")


def parse_set_line(line: str, n: int, lineno: int | None = None) -> int:
    m = _SET.match(line)
    if not m:
        raise ParseError(f"malformed set {line!r}", lineno)
    if m.group(1) is None:
        return 0
    elems = [int(x) for x in m.group(1).split(",")]
    if any(b <= a for a, b in zip(elems, elems[1:])):
        raise ParseError(f"elements of {line!r} are not strictly increasing", lineno)
    for e in elems:
        if not 1 <= e <= n:
            raise ElementRangeError(f"line {lineno}: element {e} outside [1, {n}]")
    return mask_of(elems)


def content_lines(text: str) -> Iterator[tuple[int, str]]:
    """(line number, stripped text) for every non-blank, non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _collect(n: int, masks: list[int]) -> Family:
    if len(set(masks)) != len(masks):
        warnings.warn(
            f"{len(masks) - len(set(masks))} duplicate set(s) dropped",
            DuplicateSetWarning,
            stacklevel=3,
        )
    return Family.of(n, masks)


def parse_family(text: str) -> Family:
    """Parse a family file, or its JSON form (detected by a leading ``{``)."""
    lines = list(content_lines(text))
    if not lines:
        raise ParseError("empty family file")
    if lines[0][1].startswith("{"):
        return parse_family_json(text)
    lineno, header = lines[0]
    m = _HEADER.match(header)
    if not m:
        raise ParseError(f"expected 'n=<int>' header, got {header!r}", lineno)
    n = int(m.group(1))
    try:
        check_ground(n)
    except GroundSizeError as exc:
        raise ParseError(str(exc), lineno) from None
    return _collect(n, [parse_set_line(line, n, no) for no, line in lines[1:]])


def parse_family_json(text: str) -> Family:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "n" not in data or "sets" not in data:
        raise ParseError('JSON family needs keys "n" and "sets"')
    n = data["n"]
    try:
        check_ground(n)
    except GroundSizeError as exc:
        raise ParseError(str(exc)) from None
    masks = []
    for s in data["sets"]:
        if not isinstance(s, list) or any(not isinstance(e, int) for e in s):
            raise ParseError(f"set {s!r} is not a list of integers")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ParseError(f"set {s!r} is not sorted")
        masks.append(mask_of(s, n))
    return _collect(n, masks)


def serialize(f: Family) -> str:
    return "\n".join([f"n={f.n}"] + [format_set(m) for m in f.members]) + "\n"


def to_json(f: Family) -> dict:
    return {"n": f.n, "sets": [list(elements(m)) for m in f.members]}


# ---------------------------------------------------------------------------
# restrictions


def _check_index(i: int, n: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= n:
        raise ElementRangeError(f"index {i!r} outside [1, {n}]")


def restrict(f: Family, mode: str, i: int, j: int | None = None) -> Family:
    """Restriction ``F(i)``, ``F(i-bar)`` or ``F(i, j-bar)``.

    ``mode`` is ``"contains"``, ``"avoids"`` or ``"pair"``.  The ground size
    never changes; removed elements simply become unused.
    """
    _check_index(i, f.n)
    bi = 1 << (i - 1)
    if mode == "contains":
        return Family.of(f.n, (m & ~bi for m in f.members if m & bi))
    if mode == "avoids":
        return Family(f.n, tuple(m for m in f.members if not m & bi))
    if mode == "pair":
        if j is None:
            raise PreconditionError("pair mode needs a second index j")
        _check_index(j, f.n)
        if i == j:
            raise PreconditionError("pair mode needs i != j", reason="i-equals-j")
        bj = 1 << (j - 1)
        return Family.of(f.n, (m & ~bi for m in f.members if m & bi and not m & bj))
    raise PreconditionError(f"unknown restriction mode {mode!r}")


def relative_complement(f: Family, universe: int) -> Family:
    """``{universe \\ F : F in f}``; every member must lie inside ``universe``."""
    if universe & ~full_mask(f.n):
        raise ElementRangeError(f"universe {format_set(universe)} not inside [{f.n}]")
    for m in f.members:
        if m & ~universe:
            raise PreconditionError(
                f"member {format_set(m)} not contained in {format_set(universe)}",
                reason="not-contained",
            )
    return Family.of(f.n, (universe & ~m for m in f.members))
