"""Necessary intersection points and weight-non-decreasing compression.

For a cross t-intersecting pair (f, g) over ``[k]``, an element ``a`` is a
necessary intersection point (NIP) when some cross pair F, G has
``|[a] & F & G| = t`` with ``a`` in ``F & G``.  For a fixed pair this ``a``
is exactly the t-th smallest element of ``F & G``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InternalConsistencyError, PreconditionError
from .family import Family, format_set
from .predicates import is_cross_t_intersecting
from .separated import WeightTable, family_weight, k_family, s_family
from .shifting import all_pairs, shift_pair_to_fixpoint

__all__ = [
    "kth_smallest",
    "NipReport",
    "max_nip",
    "CompressResult",
    "compress_step",
    "TraceStep",
    "Terminal",
    "compress_to_terminal",
    "pair_weight",
    "structured_maximum",
]

STEP_CAP = 10_000


def kth_smallest(mask: int, t: int) -> int | None:
    """1-based t-th smallest element of ``mask``, or None if it has fewer."""
    for _ in range(t - 1):
        if not mask:
            return None
        mask &= mask - 1
    if not mask:
        return None
    return (mask & -mask).bit_length()


@dataclass(frozen=True)
class NipReport:
    max_nip: int | None
    f_witnesses: Family
    g_witnesses: Family

    def to_dict(self) -> dict:
        return {
            "max_nip": self.max_nip,
            "f_witnesses": [format_set(m) for m in self.f_witnesses],
            "g_witnesses": [format_set(m) for m in self.g_witnesses],
        }


def _witnesses(f: Family, g: Family, t: int, a: int) -> tuple[Family, Family]:
    fw, gw = set(), set()
    for x in f.members:
        for y in g.members:
            if kth_smallest(x & y, t) == a:
                fw.add(x)
                gw.add(y)
    return Family.of(f.n, fw), Family.of(g.n, gw)


def _nip_of(f: Family, g: Family, t: int) -> int | None:
    best = None
    for x in f.members:
        for y in g.members:
            a = kth_smallest(x & y, t)
            if a is not None and (best is None or a > best):
                best = a
    return best


def max_nip(f: Family, g: Family, t: int) -> NipReport:
    if t < 1:
        raise PreconditionError(f"t must be positive, got {t}")
    if not f.members or not g.members:
        raise PreconditionError("max_nip needs non-empty families", reason="empty-family")
    verdict = is_cross_t_intersecting(f, g, t)
    if not verdict:
        raise PreconditionError(
            f"families are not cross {t}-intersecting: {verdict.to_dict()['witness']}",
            reason="not-cross-intersecting",
        )
    a = _nip_of(f, g, t)
    if a is None:
        return NipReport(None, Family.empty(f.n), Family.empty(g.n))
    fw, gw = _witnesses(f, g, t, a)
    return NipReport(a, fw, gw)


def pair_weight(f: Family, g: Family, w1: WeightTable, w2: WeightTable) -> Fraction:
    return family_weight(f, w1) + family_weight(g, w2)


@dataclass(frozen=True)
class CompressResult:
    f: Family
    g: Family
    branch: str  # "F+G-" or "F-G+"
    a: int
    added: Family


def compress_step(f: Family, g: Family, t: int, w1: WeightTable, w2: WeightTable) -> CompressResult:
    """One compression at the maximal NIP ``a``.

    Members of the witness family on the heavier side lose ``a``; the
    witness family on the other side is discarded.  Ties go to ``F+ G-``.
    """
    rep = max_nip(f, g, t)
    a = rep.max_nip
    if a is None:
        raise PreconditionError("no necessary intersection point", reason="no-nip")
    if a == t:
        raise PreconditionError("terminal: a equals t", reason="a-equals-t")
    if rep.f_witnesses == f:
        raise PreconditionError("f equals its witness family", reason="f-equals-witness")
    if rep.g_witnesses == g:
        raise PreconditionError("g equals its witness family", reason="g-equals-witness")
    drop = ~(1 << (a - 1))
    if family_weight(rep.f_witnesses, w1) >= family_weight(rep.g_witnesses, w2):
        added = Family.of(f.n, (m & drop for m in rep.f_witnesses))
        return CompressResult(f.union(added), g.difference(rep.g_witnesses), "F+G-", a, added)
    added = Family.of(g.n, (m & drop for m in rep.g_witnesses))
    return CompressResult(f.difference(rep.f_witnesses), g.union(added), "F-G+", a, added)


@dataclass(frozen=True)
class TraceStep:
    kind: str  # "shift" | "compress"
    detail: object
    a_before: int | None
    a_after: int | None
    weight_before: Fraction
    weight_after: Fraction

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "detail": self.detail,
            "a_before": self.a_before,
            "a_after": self.a_after,
            "weight_before": str(self.weight_before),
            "weight_after": str(self.weight_after),
        }


@dataclass(frozen=True)
class Terminal:
    f: Family
    g: Family
    label: str  # "(S,K)", "(K,S)" or "a=t-star"
    a: int
    weight: Fraction
    initial_weight: Fraction
    trace: tuple[TraceStep, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "a": self.a,
            "weight": str(self.weight),
            "initial_weight": str(self.initial_weight),
            "f": [format_set(m) for m in self.f],
            "g": [format_set(m) for m in self.g],
            "trace": [s.to_dict() for s in self.trace],
        }


def compress_to_terminal(
    f: Family,
    g: Family,
    t: int,
    w1: WeightTable,
    w2: WeightTable,
    allowed_shifts: Iterable | None = None,
) -> Terminal:
    """Alternate joint shifting and compression until a terminal pair is reached.

    A pair is terminal when its maximal NIP equals t (every member contains
    ``[t]``), or when one side coincides with its witness family.  The
    maximal NIP strictly drops on every compression, so the loop ends; a
    step cap guards against implementation errors.
    """
    pairs = all_pairs(f.n) if allowed_shifts is None else list(allowed_shifts)
    start = pair_weight(f, g, w1, w2)
    trace: list[TraceStep] = []
    a = max_nip(f, g, t).max_nip
    while True:
        if f.n * (len(trace) + 1) > STEP_CAP:
            raise InternalConsistencyError("compression exceeded its step cap")
        fix = shift_pair_to_fixpoint(f, g, pairs)
        if fix.log:
            a_new = max_nip(fix.f, fix.g, t).max_nip
            w = pair_weight(f, g, w1, w2)
            trace.append(TraceStep("shift", fix.log_json(), a, a_new, w, pair_weight(fix.f, fix.g, w1, w2)))
            f, g, a = fix.f, fix.g, a_new
        rep = max_nip(f, g, t)
        a = rep.max_nip
        w = pair_weight(f, g, w1, w2)
        if a == t:
            return Terminal(f, g, "a=t-star", a, w, start, tuple(trace))
        if rep.f_witnesses == f:
            return Terminal(f, g, "(S,K)", a, w, start, tuple(trace))
        if rep.g_witnesses == g:
            return Terminal(f, g, "(K,S)", a, w, start, tuple(trace))
        step = compress_step(f, g, t, w1, w2)
        a_new = max_nip(step.f, step.g, t).max_nip
        detail = {"branch": step.branch, "added": [format_set(m) for m in step.added]}
        trace.append(TraceStep("compress", detail, a, a_new, w, pair_weight(step.f, step.g, w1, w2)))
        f, g, a = step.f, step.g, a_new


def structured_maximum(
    k: int, l: int, lp: int, t: int, w1: WeightTable, w2: WeightTable  # noqa: E741
) -> tuple[Fraction, tuple[str, int]]:
    """Best weight among the structured pairs (K, S) for a in [t, l'] and (S, K) for a in [t, l].

    Returns the value and ``("KS", a)`` / ``("SK", a)`` for the first maximizer.
    """
    best: tuple[Fraction, tuple[str, int]] | None = None
    for a in range(t, lp + 1):
        v = family_weight(k_family(k, a, l, t), w1) + family_weight(s_family(k, a, lp), w2)
        if best is None or v > best[0]:
            best = (v, ("KS", a))
    for a in range(t, l + 1):
        v = family_weight(s_family(k, a, l), w1) + family_weight(k_family(k, a, lp, t), w2)
        if v > best[0]:
            best = (v, ("SK", a))
    return best

