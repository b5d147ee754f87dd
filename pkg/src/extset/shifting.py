"""Shifting operators ``s_{i,j}`` and joint fixpoint compression."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import ElementRangeError, GroundSizeError, PreconditionError
from .family import Family

__all__ = [
    "ShiftPair",
    "all_pairs",
    "shift_set",
    "shift_once",
    "is_shifted",
    "FixpointResult",
    "shift_pair_to_fixpoint",
    "shift_potential",
]


@dataclass(frozen=True, order=True)
class ShiftPair:
    i: int
    j: int

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise PreconditionError(f"shift pair needs 1 <= i < j, got ({self.i}, {self.j})")

    def check(self, n: int) -> None:
        if self.j > n:
            raise ElementRangeError(f"shift pair ({self.i}, {self.j}) outside [{n}]")


def all_pairs(k: int) -> list[ShiftPair]:
    return [ShiftPair(i, j) for i, j in combinations(range(1, k + 1), 2)]


def _as_pairs(pairs: Iterable) -> list[ShiftPair]:
    out = {p if isinstance(p, ShiftPair) else ShiftPair(*p) for p in pairs}
    return sorted(out)


def shift_set(mask: int, pair: ShiftPair) -> int:
    """Replace j by i in a single set when j is present and i absent."""
    bi, bj = 1 << (pair.i - 1), 1 << (pair.j - 1)
    if mask & bj and not mask & bi:
        return mask ^ bj ^ bi
    return mask


def _shift_members(members: tuple[int, ...], present, bi: int, bj: int) -> list[int] | None:
    out = None
    for idx, m in enumerate(members):
        if m & bj and not m & bi:
            img = m ^ bj ^ bi
            if img not in present:
                if out is None:
                    out = list(members[:idx])
                out.append(img)
                continue
        if out is not None:
            out.append(m)
    return out


def shift_once(f: Family, pair: ShiftPair | tuple[int, int]) -> Family:
    if not isinstance(pair, ShiftPair):
        pair = ShiftPair(*pair)
    pair.check(f.n)
    moved = _shift_members(f.members, f.member_set, 1 << (pair.i - 1), 1 << (pair.j - 1))
    return f if moved is None else Family.of(f.n, moved)


def is_shifted(f: Family, allowed: Iterable) -> bool:
    for pair in _as_pairs(allowed):
        pair.check(f.n)
        if _shift_members(f.members, f.member_set, 1 << (pair.i - 1), 1 << (pair.j - 1)):
            return False
    return True


def shift_potential(f: Family) -> int:
    """Sum of all elements over all members; strictly drops on every productive shift."""
    total = 0
    for m in f.members:
        e = 1
        while m:
            if m & 1:
                total += e
            m >>= 1
            e += 1
    return total


@dataclass(frozen=True)
class FixpointResult:
    f: Family
    g: Family
    log: tuple[ShiftPair, ...]

    def log_json(self) -> list[list[int]]:
        return [[p.i, p.j] for p in self.log]


def shift_pair_to_fixpoint(f: Family, g: Family, allowed: Iterable | None = None) -> FixpointResult:
    """Shift f and g with the same operator until both are fixed.

    Pairs are scanned in lexicographic order and the scan restarts after
    every productive step, so the log is deterministic.  ``allowed=None``
    means every pair ``i < j`` of the ground set.
    """
    if f.n != g.n:
        raise GroundSizeError(f"ground sizes differ: {f.n} vs {g.n}")
    pairs = all_pairs(f.n) if allowed is None else _as_pairs(allowed)
    for p in pairs:
        p.check(f.n)
    masks = [(1 << (p.i - 1), 1 << (p.j - 1)) for p in pairs]
    fm, gm = f.members, g.members
    fs, gs = set(fm), set(gm)
    log = []
    changed = True
    while changed:
        changed = False
        for p, (bi, bj) in zip(pairs, masks):
            nf = _shift_members(fm, fs, bi, bj)
            ng = _shift_members(gm, gs, bi, bj)
            if nf is None and ng is None:
                continue
            if nf is not None:
                fm, fs = tuple(nf), set(nf)
            if ng is not None:
                gm, gs = tuple(ng), set(ng)
            log.append(p)
            changed = True
            break
    return FixpointResult(Family.of(f.n, fm), Family.of(g.n, gm), tuple(log))
