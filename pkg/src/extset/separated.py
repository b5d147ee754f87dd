"""Separated universes H(n, k, l), A-profiles, candidate families and bounds.

Blocks are consecutive integer intervals: block ``i`` (1-based) is
``[(i-1)n + 1, i n]`` and its minimum ``v_i = (i-1)n + 1``.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable

from .errors import (
    ElementRangeError,
    InternalConsistencyError,
    ParseError,
    PreconditionError,
)
from .family import MAX_GROUND, Family, content_lines, format_set, parse_set_line, popcount

__all__ = [
    "BlockStructure",
    "SeparatedParams",
    "WeightTable",
    "binom",
    "enumerate_H",
    "a_profile",
    "a_family",
    "block_shift_pairs",
    "build_candidates",
    "k_family",
    "s_family",
    "build_KS",
    "weight_tables",
    "family_weight",
    "profile_counts",
    "BoundReport",
    "t3_bound",
    "f23_sum",
    "f23_hypothesis_holds",
    "f_increment_terms",
    "parse_separated",
    "serialize_separated",
]

IDENTITY_CHECK_LIMIT = 16


def binom(m: int, r: int) -> int:
    """Binomial coefficient, zero outside ``0 <= r <= m``."""
    if r < 0 or m < 0 or r > m:
        return 0
    return comb(m, r)


@dataclass(frozen=True)
class BlockStructure:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise PreconditionError(f"block size and count must be positive, got n={self.n}, k={self.k}")
        if self.n * self.k > MAX_GROUND:
            raise PreconditionError(
                f"ground size n*k = {self.n * self.k} exceeds {MAX_GROUND}", reason="ground-cap"
            )

    @property
    def ground(self) -> int:
        return self.n * self.k

    def block(self, i: int) -> int:
        """Mask of block ``X_i``."""
        if not 1 <= i <= self.k:
            raise ElementRangeError(f"block index {i} outside [1, {self.k}]")
        return ((1 << self.n) - 1) << ((i - 1) * self.n)

    def minimum(self, i: int) -> int:
        """Element ``v_i`` (1-based)."""
        if not 1 <= i <= self.k:
            raise ElementRangeError(f"block index {i} outside [1, {self.k}]")
        return (i - 1) * self.n + 1

    def minima_mask(self, upto: int | None = None) -> int:
        """Mask of ``{v_1, ..., v_upto}`` (all minima by default)."""
        upto = self.k if upto is None else upto
        return sum(1 << ((i - 1) * self.n) for i in range(1, upto + 1))

    def block_of(self, e: int) -> int:
        if not 1 <= e <= self.ground:
            raise ElementRangeError(f"element {e} outside [1, {self.ground}]")
        return (e - 1) // self.n + 1


@dataclass(frozen=True)
class SeparatedParams:
    n: int
    k: int
    l: int  # noqa: E741
    lp: int
    t: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"block size must be positive, got {self.n}")
        if not self.k >= self.l >= self.lp >= self.t >= 1:
            raise PreconditionError(
                f"need k >= l >= l' >= t >= 1, got k={self.k}, l={self.l}, l'={self.lp}, t={self.t}"
            )

    @property
    def blocks(self) -> BlockStructure:
        return BlockStructure(self.n, self.k)

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "l": self.l, "lp": self.lp, "t": self.t}


@dataclass(frozen=True)
class WeightTable:
    """Non-negative weights indexed by set size ``0..k``."""

    values: tuple[Fraction, ...] = field()

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise PreconditionError("weights must be non-negative")
        object.__setattr__(self, "values", vals)

    def __call__(self, size: int) -> Fraction:
        return self.values[size]

    @property
    def k(self) -> int:
        return len(self.values) - 1

    def is_non_increasing(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    def to_json(self) -> list[str]:
        return [str(v) for v in self.values]


def enumerate_H(bs: BlockStructure, l: int) -> Family:  # noqa: E741
    """All l-sets meeting every block at most once."""
    if not 0 <= l <= bs.k:
        raise PreconditionError(f"l={l} must lie in [0, k={bs.k}]")
    out = []
    for chosen in combinations(range(bs.k), l):
        for offsets in product(range(bs.n), repeat=l):
            out.append(sum(1 << (b * bs.n + o) for b, o in zip(chosen, offsets)))
    return Family.of(bs.ground, out)


def a_profile(h: int, bs: BlockStructure) -> int:
    """Mask over ``[k]`` of blocks in which h is exactly the block minimum."""
    if h >> bs.ground:
        raise ElementRangeError(f"set {format_set(h)} outside [{bs.ground}]")
    out = 0
    block = (1 << bs.n) - 1
    for i in range(bs.k):
        part = (h >> (i * bs.n)) & block
        if part & (part - 1):
            raise PreconditionError(
                f"set {format_set(h)} meets block {i + 1} more than once", reason="not-separated"
            )
        if part == 1:
            out |= 1 << i
    return out


def a_family(f: Family, bs: BlockStructure) -> Family:
    if f.n != bs.ground:
        raise PreconditionError(f"family ground {f.n} does not match n*k = {bs.ground}")
    return Family.of(bs.k, (a_profile(m, bs) for m in f.members))


def block_shift_pairs(bs: BlockStructure) -> list[tuple[int, int]]:
    """Shift pairs ``i < j`` lying in a common block."""
    pairs = []
    for b in range(bs.k):
        base = b * bs.n
        pairs.extend((base + x, base + y) for x, y in combinations(range(1, bs.n + 1), 2))
    return pairs


def build_candidates(p: SeparatedParams, which: str, a: int | None = None) -> Family:
    """The candidate families F_0, G_0, F_a, G_a as sub-families of H."""
    bs = p.blocks
    if which == "F0":
        vmask = bs.minima_mask(p.lp)
        return enumerate_H(bs, p.l).filter(lambda m: popcount(m & vmask) >= p.t)
    if which == "G0":
        return Family.of(bs.ground, [bs.minima_mask(p.lp)])
    if which not in ("Fa", "Ga"):
        raise PreconditionError(f"unknown candidate {which!r}")
    if a is None or not 1 <= a <= p.l:
        raise PreconditionError(f"candidate {which} needs a in [1, l={p.l}], got {a}")
    vmask = bs.minima_mask(a)
    if which == "Fa":
        return enumerate_H(bs, p.l).filter(lambda m: m & vmask == vmask)
    return enumerate_H(bs, p.lp).filter(lambda m: popcount(m & vmask) >= p.t)


def k_family(k: int, a: int, l: int, t: int) -> Family:  # noqa: E741
    """Sets of size at most l in ``[k]`` meeting ``[a]`` in at least t points."""
    if not (0 <= t <= a <= k and 0 <= l <= k):
        raise PreconditionError(f"K_k(a,l,t) needs t <= a <= k and l <= k, got k={k} a={a} l={l} t={t}")
    low = (1 << a) - 1
    return Family.of(k, (m for m in range(1 << k) if popcount(m) <= l and popcount(m & low) >= t))


def s_family(k: int, a: int, l: int) -> Family:  # noqa: E741
    """Sets of size at most l in ``[k]`` containing ``[a]``."""
    if not (0 <= a <= k and 0 <= l <= k):
        raise PreconditionError(f"S_k(a,l) needs a <= k and l <= k, got k={k} a={a} l={l}")
    low = (1 << a) - 1
    return Family.of(k, (m for m in range(1 << k) if popcount(m) <= l and m & low == low))


def build_KS(k: int, a: int, l: int, t: int, which: str) -> Family:  # noqa: E741
    if which == "K":
        return k_family(k, a, l, t)
    if which == "S":
        if t > a:
            raise PreconditionError(f"need t <= a, got t={t}, a={a}")
        return s_family(k, a, l)
    raise PreconditionError(f"unknown structured family {which!r}")


def _profile_weight(k: int, l: int, n: int, j: int) -> int:  # noqa: E741
    return binom(k - j, l - j) * (n - 1) ** (l - j) if j <= l else 0


def weight_tables(p: SeparatedParams) -> tuple[WeightTable, WeightTable]:
    """``w(j) = C(k-j, l-j) (n-1)^(l-j)`` for l and for l', j in ``[0, k]``."""
    if p.n < 2:
        warnings.warn("weight tables may fail to be non-increasing when n < 2", stacklevel=2)
    w1 = WeightTable(tuple(_profile_weight(p.k, p.l, p.n, j) for j in range(p.k + 1)))
    w2 = WeightTable(tuple(_profile_weight(p.k, p.lp, p.n, j) for j in range(p.k + 1)))
    return w1, w2


def family_weight(f: Family, w: WeightTable) -> Fraction:
    return sum((w(popcount(m)) for m in f.members), Fraction(0))


def profile_counts(bs: BlockStructure, l: int) -> dict[int, int]:  # noqa: E741
    """Number of members of H(n, k, l) with each A-profile, by enumeration."""
    counts: dict[int, int] = {}
    for m in enumerate_H(bs, l).members:
        a = a_profile(m, bs)
        counts[a] = counts.get(a, 0) + 1
    return counts


@dataclass(frozen=True)
class BoundReport:
    params: SeparatedParams
    f_values: dict[int, Fraction]
    g_values: dict[int, Fraction]
    bound: Fraction
    argmax: tuple[str, int]
    identities_checked: bool

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "f": [{"a": a, "value": _num(v)} for a, v in sorted(self.f_values.items())],
            "g": [{"a": a, "value": _num(v)} for a, v in sorted(self.g_values.items())],
            "bound": _num(self.bound),
            "argmax": {"kind": self.argmax[0], "a": self.argmax[1]},
            "identities_checked": self.identities_checked,
        }


def _num(v: Fraction) -> int | str:
    return v.numerator if v.denominator == 1 else str(v)


def t3_bound(p: SeparatedParams) -> BoundReport:
    """Bound on ``|F| + |G|`` for non-empty cross t-intersecting separated pairs.

    ``f(a)`` and ``g(a)`` are evaluated as weights of the structured families
    over ``[k]``; when ``n k`` is small they are cross-checked against direct
    enumeration of F_0, G_0, F_a, G_a.
    """
    if p.n < 2:
        raise PreconditionError("t3_bound needs block size n >= 2", reason="n-too-small")
    w1, w2 = weight_tables(p)
    k, l, lp, t = p.k, p.l, p.lp, p.t
    f_vals = {
        a: family_weight(k_family(k, a, l, t), w1) + family_weight(s_family(k, a, lp), w2)
        for a in range(t, lp + 1)
    }
    g_vals = {
        a: family_weight(s_family(k, a, l), w1) + family_weight(k_family(k, a, lp, t), w2)
        for a in range(t, l + 1)
    }
    bound, argmax = f_vals[lp], ("f", lp)
    for a in range(lp + 1, l + 1):
        if g_vals[a] > bound:
            bound, argmax = g_vals[a], ("g", a)
    checked = p.n * p.k <= IDENTITY_CHECK_LIMIT
    if checked:
        got = len(build_candidates(p, "F0")) + len(build_candidates(p, "G0"))
        if got != f_vals[lp]:
            raise InternalConsistencyError(f"|F_0|+|G_0| = {got} but f(l') = {f_vals[lp]}")
        for a in range(lp + 1, l + 1):
            got = len(build_candidates(p, "Fa", a)) + len(build_candidates(p, "Ga", a))
            if got != g_vals[a]:
                raise InternalConsistencyError(f"|F_{a}|+|G_{a}| = {got} but g({a}) = {g_vals[a]}")
    return BoundReport(p, f_vals, g_vals, bound, argmax, checked)


def f23_sum(n: int, k: int, l: int, lp: int) -> int:  # noqa: E741
    """Closed form ``sum_{j=1}^{l} (C(k,j) - C(k-l',j)) C(k-j,l-j) (n-1)^(l-j) + 1``.

    Evaluated for any inputs; the original size hypothesis ``n > 3l`` is
    reported separately by :func:`f23_hypothesis_holds`.
    """
    return sum(
        (binom(k, j) - binom(k - lp, j)) * binom(k - j, l - j) * (n - 1) ** (l - j)
        for j in range(1, l + 1)
    ) + 1


def f23_hypothesis_holds(n: int, l: int) -> bool:  # noqa: E741
    return n > 3 * l


def f_increment_terms(p: SeparatedParams, a: int) -> tuple[Fraction, Fraction]:
    """The gain and loss making up ``f(a+1) - f(a)`` for ``a`` in ``[t, l'-1]``.

    gain = sum_{j=0}^{l-t} C(a, t-1) C(k-a-1, j) w1(j+t)
    loss = sum_{j=0}^{l'-a} C(k-a-1, j) w2(j+a)
    """
    if not p.t <= a <= p.lp - 1:
        raise PreconditionError(f"a={a} outside [t, l'-1] = [{p.t}, {p.lp - 1}]")
    w1, w2 = weight_tables(p)
    k, t = p.k, p.t
    gain = sum(
        (binom(a, t - 1) * binom(k - a - 1, j) * w1(j + t) for j in range(p.l - t + 1) if j + t <= k),
        Fraction(0),
    )
    loss = sum(
        (binom(k - a - 1, j) * w2(j + a) for j in range(p.lp - a + 1) if j + a <= k),
        Fraction(0),
    )
    return gain, loss


# ---------------------------------------------------------------------------
# separated instance files

_SEP_HEADER = re.compile(r"^n\s*=\s*(\d+)\s+k\s*=\s*(\d+)$")


def parse_separated(text: str) -> tuple[BlockStructure, Family]:
    """Parse ``n=<int> k=<int>`` followed by one set per line (global numbering)."""
    lines = list(content_lines(text))
    if not lines:
        raise ParseError("empty separated instance file")
    lineno, header = lines[0]
    m = _SEP_HEADER.match(header)
    if not m:
        raise ParseError(f"expected 'n=<int> k=<int>' header, got {header!r}", lineno)
    try:
        bs = BlockStructure(int(m.group(1)), int(m.group(2)))
    except PreconditionError as exc:
        raise ParseError(str(exc), lineno) from None
    masks = []
    for no, line in lines[1:]:
        mask = parse_set_line(line, bs.ground, no)
        try:
            a_profile(mask, bs)
        except PreconditionError as exc:
            raise ParseError(str(exc), no) from None
        masks.append(mask)
    return bs, Family.of(bs.ground, masks)


def serialize_separated(bs: BlockStructure, f: Iterable[int]) -> str:
    return "\n".join([f"n={bs.n} k={bs.k}"] + [format_set(m) for m in f]) + "\n"
