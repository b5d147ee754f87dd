"""Whole-family bit kernels for exhaustive sweeps over tiny ground sets.

A family over ``[n]`` is encoded as a single indicator integer whose bit
``S`` is set iff the subset with mask ``S`` is a member.  Shifting a whole
family then costs a handful of integer operations, which is what makes the
exhaustive pair sweeps (millions of pairs at n = 4) practical.  Every kernel
here mirrors a :class:`~extset.family.Family` operation and is
cross-checked against it in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .family import Family, popcount

__all__ = ["to_indicator", "from_indicator", "iter_members", "Kernel"]


def to_indicator(f: Family) -> int:
    ind = 0
    for m in f.members:
        ind |= 1 << m
    return ind


def iter_members(ind: int) -> Iterator[int]:
    while ind:
        low = ind & -ind
        yield low.bit_length() - 1
        ind ^= low


def from_indicator(n: int, ind: int) -> Family:
    return Family.of(n, iter_members(ind))


def submasks(mask: int) -> Iterator[int]:
    """Every submask of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass
class _ShiftOp:
    i: int
    j: int
    movable: int  # indicator of sets containing j but not i
    distance: int  # S -> S - distance replaces j by i


class Kernel:
    """Precomputed tables for ground size ``n`` and intersection threshold ``t``."""

    def __init__(self, n: int, t: int = 1):
        if not 1 <= n <= 6:
            raise ValueError("indicator kernels support 1 <= n <= 6")
        self.n, self.t = n, t
        size = 1 << n
        self.full = (1 << size) - 1
        self.by_size = [0] * (n + 1)
        for s in range(size):
            self.by_size[popcount(s)] |= 1 << s
        self.ops = []
        for i, j in combinations(range(1, n + 1), 2):
            bi, bj = 1 << (i - 1), 1 << (j - 1)
            movable = sum(1 << s for s in range(size) if s & bj and not s & bi)
            self.ops.append(_ShiftOp(i, j, movable, bj - bi))
        # sets meeting S in fewer than t points
        self.low = [sum(1 << x for x in range(size) if popcount(s & x) < t) for s in range(size)]
        # nip[s][a]: sets x whose intersection with s has t-th smallest element a
        self.nip = [[0] * (n + 1) for _ in range(size)]
        for s in range(size):
            for x in range(size):
                a = _kth(s & x, t)
                if a:
                    self.nip[s][a] |= 1 << x

    # -- shifting -------------------------------------------------------

    @staticmethod
    def shift(ind: int, op: _ShiftOp) -> int:
        d = op.distance
        moved = ind & op.movable & ~(ind << d)
        return (ind & ~moved) | (moved >> d)

    def fixpoint(self, f: int, g: int, ops=None) -> tuple[int, int, list[tuple[int, int]]]:
        """Joint fixpoint with lexicographic scan and restart, as in shifting.py."""
        ops = self.ops if ops is None else ops
        log = []
        changed = True
        while changed:
            changed = False
            for op in ops:
                nf, ng = self.shift(f, op), self.shift(g, op)
                if nf != f or ng != g:
                    f, g = nf, ng
                    log.append((op.i, op.j))
                    changed = True
                    break
        return f, g, log

    def is_shifted(self, ind: int) -> bool:
        return all(self.shift(ind, op) == ind for op in self.ops)

    # -- intersections --------------------------------------------------

    def cross_ok(self, f: int, g: int) -> bool:
        low = self.low
        while f:
            b = f & -f
            if g & low[b.bit_length() - 1]:
                return False
            f ^= b
        return True

    def partner(self, f: int, within: int | None = None) -> int:
        """Largest g (inside ``within``) that is cross t-intersecting with f."""
        out = self.full if within is None else within
        low = self.low
        while f:
            b = f & -f
            out &= ~low[b.bit_length() - 1]
            f ^= b
        return out

    def iter_cross_pairs(
        self, within_f: int | None = None, within_g: int | None = None
    ) -> Iterator[tuple[int, int]]:
        """All cross t-intersecting (f, g) with f inside ``within_f``, g inside ``within_g``."""
        uf = self.full if within_f is None else within_f
        ug = uf if within_g is None else within_g
        for f in submasks(uf):
            yield from ((f, g) for g in submasks(self.partner(f, ug)))

    # -- necessary intersection points ------------------------------------

    def max_nip(self, f: int, g: int) -> int | None:
        best = 0
        nip = self.nip
        for s in iter_members(f):
            row = nip[s]
            for a in range(self.n, best, -1):
                if g & row[a]:
                    best = a
                    break
        return best or None

    def witnesses(self, f: int, g: int, a: int) -> tuple[int, int]:
        fw = gw = 0
        for s in iter_members(f):
            hit = g & self.nip[s][a]
            if hit:
                fw |= 1 << s
                gw |= hit
        return fw, gw

    def weight(self, ind: int, table) -> int:
        return sum((ind & cls).bit_count() * table[s] for s, cls in enumerate(self.by_size) if table[s])

    def drop_element(self, ind: int, a: int) -> int:
        """Remove element a from every member (all members must contain a)."""
        return ind >> (1 << (a - 1))

    def compress(self, f: int, g: int, w1, w2) -> tuple[int, int, str, int] | None:
        """One compression step; None when the pair is terminal."""
        a = self.max_nip(f, g)
        if a is None or a == self.t:
            return None
        fw, gw = self.witnesses(f, g, a)
        if fw == f or gw == g:
            return None
        if self.weight(fw, w1) >= self.weight(gw, w2):
            return f | self.drop_element(fw, a), g & ~gw, "F+G-", a
        return f & ~fw, g | self.drop_element(gw, a), "F-G+", a

    def to_terminal(self, f: int, g: int, w1, w2) -> tuple[int, int, str, int, int]:
        """Shift and compress until terminal, as in nip.compress_to_terminal.

        Returns (f, g, label, a, number of compressions).
        """
        steps = 0
        while True:
            f, g, _ = self.fixpoint(f, g)
            a = self.max_nip(f, g)
            if a == self.t:
                return f, g, "a=t-star", a, steps
            fw, gw = self.witnesses(f, g, a)
            if fw == f:
                return f, g, "(S,K)", a, steps
            if gw == g:
                return f, g, "(K,S)", a, steps
            f, g, _, _ = self.compress(f, g, w1, w2)
            steps += 1


def _kth(mask: int, t: int) -> int:
    for _ in range(t - 1):
        if not mask:
            return 0
        mask &= mask - 1
    return (mask & -mask).bit_length()
