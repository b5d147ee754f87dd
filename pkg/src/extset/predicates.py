"""Exact decision procedures for the family properties used throughout.

Every pairwise check includes the diagonal ``F = F'``.  On failure the
returned :class:`Verdict` carries the violating pair that comes first in
canonical member order, so results do not depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GroundSizeError, PreconditionError
from .family import Family, format_set, full_mask, popcount

__all__ = [
    "Verdict",
    "is_t_intersecting",
    "is_s_union",
    "is_iu",
    "is_cross_t_intersecting",
    "is_cross_sperner",
    "is_downset",
    "is_upset",
]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        d: dict = {"holds": self.holds}
        if self.witness is not None:
            d["witness"] = [format_set(m) for m in self.witness]
            d["reason"] = self.reason
        return d


_OK = Verdict(True)


def _first_bad_pair(f: Family, bad) -> tuple[int, int] | None:
    ms = f.members
    for a in range(len(ms)):
        x = ms[a]
        for b in range(a, len(ms)):
            if bad(x, ms[b]):
                return x, ms[b]
    return None


def _first_bad_cross(f: Family, g: Family, bad) -> tuple[int, int] | None:
    if f.n != g.n:
        raise GroundSizeError(f"ground sizes differ: {f.n} vs {g.n}")
    for x in f.members:
        for y in g.members:
            if bad(x, y):
                return x, y
    return None


def _nonneg(name: str, v: int) -> None:
    if v < 0:
        raise PreconditionError(f"{name} must be non-negative, got {v}")


def is_t_intersecting(f: Family, t: int) -> Verdict:
    _nonneg("t", t)
    w = _first_bad_pair(f, lambda x, y: popcount(x & y) < t)
    return _OK if w is None else Verdict(False, w, f"intersection smaller than {t}")


def is_s_union(f: Family, s: int) -> Verdict:
    _nonneg("s", s)
    w = _first_bad_pair(f, lambda x, y: popcount(x | y) > s)
    return _OK if w is None else Verdict(False, w, f"union larger than {s}")


def is_iu(f: Family) -> Verdict:
    """Intersecting and no two members (possibly equal) cover ``[n]``."""
    full = full_mask(f.n)

    def bad(x, y):
        return not x & y or (x | y) == full

    w = _first_bad_pair(f, bad)
    if w is None:
        return _OK
    reason = "disjoint pair" if not w[0] & w[1] else "pair covers the ground set"
    return Verdict(False, w, reason)


def is_cross_t_intersecting(f: Family, g: Family, t: int) -> Verdict:
    w = _first_bad_cross(f, g, lambda x, y: popcount(x & y) < t)
    return _OK if w is None else Verdict(False, w, f"cross intersection smaller than {t}")


def is_cross_sperner(f: Family, g: Family) -> Verdict:
    w = _first_bad_cross(f, g, lambda x, y: x & y == x or x & y == y)
    return _OK if w is None else Verdict(False, w, "comparable cross pair")


def is_downset(f: Family) -> bool:
    """Closed under removing single elements (hence under all subsets)."""
    s = f.member_set
    for m in f.members:
        x = m
        while x:
            low = x & -x
            if m ^ low not in s:
                return False
            x ^= low
    return True


def is_upset(f: Family) -> bool:
    s = f.member_set
    full = full_mask(f.n)
    for m in f.members:
        x = full & ~m
        while x:
            low = x & -x
            if m | low not in s:
                return False
            x ^= low
    return True
