"""Brute-force oracles: pair maximization, maximal IU-families, sweeps.

The pair oracle only enumerates subsets of one universe.  For a fixed f the
best partner is the set of *all* compatible members of the other universe,
and every cross t-intersecting g for f is contained in it, so the outer
loop alone is exhaustive.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from pathlib import Path
from typing import Iterable, Iterator

from .errors import PreconditionError
from .family import Family, full_mask, popcount, serialize, sets_up_to
from .indicator import Kernel, iter_members
from .nip import structured_maximum
from .params import budget_holds, family_params
from .predicates import is_iu
from .separated import (
    SeparatedParams,
    WeightTable,
    enumerate_H,
    f23_hypothesis_holds,
    f23_sum,
    t3_bound,
    weight_tables,
)

__all__ = [
    "SearchBudget",
    "ExtremalReport",
    "best_partner",
    "exhaustive_pair_max",
    "iu_compatibility_graph",
    "maximal_cliques",
    "iu_maximal_families",
    "IUSearchReport",
    "iu_search",
    "cross_sperner_measure_classes",
    "t2_violations",
    "SweepRecord",
    "extremal_sweep",
]

DEFAULT_TIME_CAP = 600.0


def _default_time_cap() -> float:
    env = os.environ.get("EXTSET_BUDGET_SECS")
    return float(env) if env else DEFAULT_TIME_CAP


@dataclass(frozen=True)
class SearchBudget:
    max_universe_bits: int = 20
    time_cap: float = field(default_factory=_default_time_cap)
    parallel_chunks: int = 1
    jobs: int = 1

    def __post_init__(self):
        if not 0 <= self.max_universe_bits <= 20:
            raise PreconditionError("max_universe_bits must lie in [0, 20]")
        if self.parallel_chunks < 1 or self.jobs < 1:
            raise PreconditionError("parallel_chunks and jobs must be positive")


@dataclass(frozen=True)
class ExtremalReport:
    optimum: Fraction | None
    witnesses: tuple[Family, Family] | None
    method: str
    exhaustive: bool
    nodes: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        return {
            "optimum": None if self.optimum is None else _num(self.optimum),
            "witnesses": None
            if self.witnesses is None
            else [[list(s) for s in w.as_sets()] for w in self.witnesses],
            "method": self.method,
            "exhaustive": self.exhaustive,
        }


def _num(v: Fraction) -> int | str:
    return v.numerator if v.denominator == 1 else str(v)


def best_partner(f: Family, universe: Family, t: int) -> Family:
    """Every member of ``universe`` meeting all of f in at least t points."""
    if not f.members:
        raise PreconditionError("best_partner needs a non-empty family", reason="empty-family")
    return universe.filter(lambda y: all(popcount(x & y) >= t for x in f.members))


# ---------------------------------------------------------------------------
# pair maximization


class _Timeout(Exception):
    pass


def _scaled(universe: Family, w: WeightTable | None, scale: int) -> list[int]:
    if w is None:
        return [scale] * len(universe)
    return [int(w(popcount(m)) * scale) for m in universe.members]


def _search_chunk(args) -> tuple[int | None, tuple[int, ...], int, bool]:
    outer_w, compat, inner_w, tops, deadline = args
    m = len(outer_w)
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + outer_w[i]
    # inner weight of a partner mask, grouped by equal weights
    groups: dict[int, int] = {}
    for idx, w in enumerate(inner_w):
        groups[w] = groups.get(w, 0) | (1 << idx)
    groups_list = [(w, g) for w, g in groups.items() if w]

    def inner(mask: int) -> int:
        return sum(w * (mask & g).bit_count() for w, g in groups_list)

    best = [None, ()]
    nodes = [0]

    def visit(start: int, fw: int, partner: int, chosen: tuple[int, ...], part_w: int):
        for i in range(start, m):
            if best[0] is not None and fw + suffix[i] + part_w <= best[0]:
                return
            p2 = partner & compat[i]
            if not p2:
                continue
            nodes[0] += 1
            if not nodes[0] & 4095 and time.monotonic() > deadline:
                raise _Timeout
            fw2 = fw + outer_w[i]
            pw2 = inner(p2)
            here = chosen + (i,)
            if best[0] is None or fw2 + pw2 > best[0]:
                best[0], best[1] = fw2 + pw2, here
            if fw2 + suffix[i + 1] + pw2 > best[0]:
                visit(i + 1, fw2, p2, here, pw2)

    full = (1 << len(inner_w)) - 1
    finished = True
    try:
        for i in tops:
            if time.monotonic() > deadline:
                raise _Timeout
            p2 = full & compat[i]
            if not p2:
                continue
            nodes[0] += 1
            fw2, pw2 = outer_w[i], inner(p2)
            if best[0] is None or fw2 + pw2 > best[0]:
                best[0], best[1] = fw2 + pw2, (i,)
            if fw2 + suffix[i + 1] + pw2 > best[0]:
                visit(i + 1, fw2, p2, (i,), pw2)
    except _Timeout:
        finished = False
    return best[0], best[1], nodes[0], finished


def exhaustive_pair_max(
    universe_f: Family,
    universe_g: Family,
    t: int,
    w1: WeightTable | None = None,
    w2: WeightTable | None = None,
    budget: SearchBudget | None = None,
) -> ExtremalReport:
    """Maximum of ``w1(f) + w2(g)`` over non-empty cross t-intersecting pairs.

    ``None`` weights mean unit weight per member.  The smaller universe is
    enumerated; ties resolve to the lexicographically smallest outer subset.
    """
    budget = budget or SearchBudget()
    if universe_f.n != universe_g.n:
        raise PreconditionError("universes live on different ground sets")
    swap = len(universe_g) < len(universe_f)
    outer_u, inner_u = (universe_g, universe_f) if swap else (universe_f, universe_g)
    outer_t, inner_t = (w2, w1) if swap else (w1, w2)
    method = f"partner-closed enumeration over {'g' if swap else 'f'} ({len(outer_u)} members)"
    if len(outer_u) > budget.max_universe_bits:
        return ExtremalReport(None, None, method, False)

    dens = [v.denominator for tbl in (w1, w2) if tbl is not None for v in tbl.values]
    scale = lcm(*dens) if dens else 1
    outer_w = _scaled(outer_u, outer_t, scale)
    inner_w = _scaled(inner_u, inner_t, scale)
    compat = []
    for x in outer_u.members:
        mask = 0
        for idx, y in enumerate(inner_u.members):
            if popcount(x & y) >= t:
                mask |= 1 << idx
        compat.append(mask)

    deadline = time.monotonic() + budget.time_cap
    chunks = budget.parallel_chunks
    tasks = [
        (outer_w, compat, inner_w, range(c, len(outer_w), chunks), deadline) for c in range(chunks)
    ]
    if budget.jobs > 1 and chunks > 1:
        with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
            results = list(pool.map(_search_chunk, tasks))
    else:
        results = [_search_chunk(task) for task in tasks]

    best = None
    for score, chosen, _, _ in results:
        if score is None:
            continue
        if best is None or score > best[0] or (score == best[0] and chosen < best[1]):
            best = (score, chosen)
    nodes = sum(r[2] for r in results)
    exhaustive = all(r[3] for r in results)
    if best is None:
        return ExtremalReport(None, None, method, exhaustive, nodes)

    chosen = Family.of(outer_u.n, (outer_u.members[i] for i in best[1]))
    partner = best_partner(chosen, inner_u, t)
    pair = (partner, chosen) if swap else (chosen, partner)
    return ExtremalReport(Fraction(best[0], scale), pair, method, exhaustive, nodes)


# ---------------------------------------------------------------------------
# maximal cliques


def iu_compatibility_graph(n: int) -> tuple[list[int], list[int]]:
    """Vertices (proper non-empty subsets of [n]) and bitset adjacency.

    Two sets are adjacent iff they intersect and do not cover ``[n]``.
    """
    full = full_mask(n)
    verts = [m for m in range(1, full)]
    adj = []
    for x in verts:
        row = 0
        for idx, y in enumerate(verts):
            if y != x and x & y and (x | y) != full:
                row |= 1 << idx
        adj.append(row)
    return verts, adj


def _degeneracy_order(adj: list[int]) -> list[int]:
    remaining = (1 << len(adj)) - 1
    order = []
    while remaining:
        v = min(iter_members(remaining), key=lambda u: ((adj[u] & remaining).bit_count(), u))
        order.append(v)
        remaining &= ~(1 << v)
    return order


def _pivot_cliques(adj: list[int], r: list[int], p: int, x: int) -> Iterator[list[int]]:
    if not p:
        if not x:
            yield list(r)
        return
    pivot = max(iter_members(p | x), key=lambda u: ((p & adj[u]).bit_count(), -u))
    for v in iter_members(p & ~adj[pivot]):
        r.append(v)
        yield from _pivot_cliques(adj, r, p & adj[v], x & adj[v])
        r.pop()
        bit = 1 << v
        p &= ~bit
        x |= bit


def maximal_cliques(adj: list[int]) -> Iterator[list[int]]:
    """All maximal cliques of a bitset graph.

    Bron-Kerbosch with Tomita pivoting inside, degeneracy ordering at the
    top level.  Each clique is yielded once, as a list of vertex indices.
    """
    order = _degeneracy_order(adj)
    later = (1 << len(adj)) - 1
    earlier = 0
    for v in order:
        bit = 1 << v
        later &= ~bit
        yield from _pivot_cliques(adj, [v], adj[v] & later, adj[v] & earlier)
        earlier |= bit


def iu_maximal_families(n: int) -> Iterator[Family]:
    """Stream every inclusion-maximal IU-family over ``[n]``, 3 <= n <= 6."""
    if not 3 <= n <= 6:
        raise PreconditionError(f"IU clique search supports 3 <= n <= 6, got {n}")
    verts, adj = iu_compatibility_graph(n)
    for clique in maximal_cliques(adj):
        yield Family.of(n, (verts[i] for i in clique))


@dataclass(frozen=True)
class IUSearchReport:
    n: int
    count: int
    max_size: int
    max_size_witness: Family | None
    max_sturdiness: int
    max_sturdiness_witness: Family | None
    exhaustive: bool

    @property
    def size_bound(self) -> int:
        return 2 ** (self.n - 2)

    @property
    def sturdiness_bound(self) -> Fraction:
        return Fraction(2) ** (self.n - 4)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "maximal_families": self.count,
            "max_size": self.max_size,
            "size_bound": self.size_bound,
            "max_sturdiness": self.max_sturdiness,
            "sturdiness_bound": _num(self.sturdiness_bound),
            "max_size_witness": None if self.max_size_witness is None else self.max_size_witness.as_sets(),
            "max_sturdiness_witness": None
            if self.max_sturdiness_witness is None
            else self.max_sturdiness_witness.as_sets(),
            "exhaustive": self.exhaustive,
        }


def iu_search(n: int, budget: SearchBudget | None = None, check: bool = False) -> IUSearchReport:
    """Aggregate size and sturdiness over all maximal IU-families.

    With ``check`` every streamed family is re-verified with :func:`is_iu`.
    """
    budget = budget or SearchBudget()
    deadline = time.monotonic() + budget.time_cap
    count = max_size = max_beta = 0
    size_w = beta_w = None
    exhaustive = True
    for fam in iu_maximal_families(n):
        if check and not is_iu(fam):
            raise AssertionError(f"clique {fam} is not an IU-family")
        count += 1
        if len(fam) > max_size:
            max_size, size_w = len(fam), fam
        beta = family_params(fam).sturdiness
        if beta_w is None or beta > max_beta:
            max_beta, beta_w = beta, fam
        if time.monotonic() > deadline:
            exhaustive = False
            break
    return IUSearchReport(n, count, max_size, size_w, max_beta, beta_w, exhaustive)


# ---------------------------------------------------------------------------
# cross-Sperner measure classes


def _incomparable_tables(n: int) -> list[int]:
    size = 1 << n
    table = []
    for s in range(size):
        row = 0
        for x in range(size):
            if s & x != s and s & x != x:
                row |= 1 << x
        table.append(row)
    return table


def cross_sperner_measure_classes(n: int) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Size profiles ``(f, g)`` realised by cross-Sperner pairs over ``[n]``.

    The product measure of a family depends only on how many members it has
    of each size, so these profile pairs cover every cross-Sperner pair
    exactly.  For each f the admissible g are the subfamilies of the sets
    incomparable to every member of f; their profiles fill a box.
    """
    if not 1 <= n <= 4:
        raise PreconditionError("cross-Sperner enumeration supports n <= 4")
    kernel = Kernel(n)
    inc = _incomparable_tables(n)
    every = (1 << (1 << n)) - 1
    keys = set()
    for f in range(every + 1):
        partner = every
        for s in iter_members(f):
            partner &= inc[s]
        keys.add((_profile(kernel, f), _profile(kernel, partner)))
    out = set()
    for pf, box in keys:
        for pg in product(*(range(c + 1) for c in box)):
            out.add((pf, pg))
    return out


def _profile(kernel: Kernel, ind: int) -> tuple[int, ...]:
    return tuple((ind & cls).bit_count() for cls in kernel.by_size)


def profile_measure(profile: Iterable[int], p: Fraction) -> Fraction:
    prof = list(profile)
    n = len(prof) - 1
    q = 1 - p
    return sum((c * p**s * q ** (n - s) for s, c in enumerate(prof) if c), Fraction(0))


def t2_violations(n: int, ps: Iterable[Fraction]) -> list[tuple[Fraction, tuple, tuple]]:
    """Cross-Sperner profile pairs breaking the measure budget (expected: none)."""
    classes = sorted(cross_sperner_measure_classes(n))
    bad = []
    for p in ps:
        p = Fraction(p)
        cache: dict[tuple, Fraction] = {}
        for pf, pg in classes:
            x = cache.get(pf)
            if x is None:
                x = cache[pf] = profile_measure(pf, p)
            y = cache.get(pg)
            if y is None:
                y = cache[pg] = profile_measure(pg, p)
            if not budget_holds(x, y):
                bad.append((p, pf, pg))
    return bad


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class SweepRecord:
    target: str
    params: dict
    optimum: Fraction | int | None
    bound: Fraction | int | None
    status: str  # pass | equal | violation | expected-counterexample | mismatch | skipped
    witnesses: tuple[Family, ...] = ()
    witness_files: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        conv = lambda v: None if v is None else _num(Fraction(v))  # noqa: E731
        return {
            "target": self.target,
            "params": self.params,
            "optimum": conv(self.optimum),
            "bound": conv(self.bound),
            "status": self.status,
            "witness_files": self.witness_files,
        }

    @property
    def failed(self) -> bool:
        return self.status in ("violation", "mismatch")


def _compare(optimum, bound) -> str:
    if optimum > bound:
        return "violation"
    return "equal" if optimum == bound else "pass"


def _sweep_t3(ranges: dict, budget: SearchBudget) -> Iterator[SweepRecord]:
    for n in ranges.get("n", [2, 3]):
        for k in ranges.get("k", [1, 2, 3]):
            for t in ranges.get("t", [1]):
                for l in range(t, k + 1):  # noqa: E741
                    for lp in range(t, l + 1):
                        yield _t3_instance(SeparatedParams(n, k, l, lp, t), budget)


def _t3_instance(p: SeparatedParams, budget: SearchBudget) -> SweepRecord:
    bs = p.blocks
    uf, ug = enumerate_H(bs, p.l), enumerate_H(bs, p.lp)
    rep = exhaustive_pair_max(uf, ug, p.t, budget=budget)
    bound = t3_bound(p).bound
    if rep.optimum is None or not rep.exhaustive:
        return SweepRecord("t3", p.to_dict(), rep.optimum, bound, "skipped")
    return SweepRecord("t3", p.to_dict(), rep.optimum, bound, _compare(rep.optimum, bound), rep.witnesses)


def _sweep_f23(ranges: dict, budget: SearchBudget) -> Iterator[SweepRecord]:
    for n in ranges.get("n", [2, 3, 4]):
        for k in ranges.get("k", [2, 3]):
            for l in range(2, k + 1):  # noqa: E741
                for lp in range(2, l + 1):
                    p = SeparatedParams(n, k, l, lp, 1)
                    bound = f23_sum(n, k, l, lp)
                    params = p.to_dict() | {"hypothesis": f23_hypothesis_holds(n, l)}
                    bs = p.blocks
                    rep = exhaustive_pair_max(enumerate_H(bs, l), enumerate_H(bs, lp), 1, budget=budget)
                    if rep.optimum is None or not rep.exhaustive:
                        yield SweepRecord("f23", params, rep.optimum, bound, "skipped")
                        continue
                    status = _compare(rep.optimum, bound)
                    if status == "violation" and not params["hypothesis"]:
                        status = "expected-counterexample"
                    yield SweepRecord("f23", params, rep.optimum, bound, status, rep.witnesses)


def _sweep_n1(ranges: dict, budget: SearchBudget) -> Iterator[SweepRecord]:
    for k in ranges.get("k", [1, 2, 3]):
        for t in ranges.get("t", [1, 2]):
            for l in range(t, k + 1):  # noqa: E741
                for lp in range(t, l + 1):
                    for wn in ranges.get("n", [2]):
                        w1, w2 = weight_tables(SeparatedParams(wn, k, l, lp, t))
                        yield _n1_instance(k, l, lp, t, w1, w2, budget, {"weights": f"separated n={wn}"})


def _n1_instance(k, l, lp, t, w1, w2, budget, extra=None) -> SweepRecord:  # noqa: E741
    params = {"k": k, "l": l, "lp": lp, "t": t} | (extra or {})
    rep = exhaustive_pair_max(sets_up_to(k, l), sets_up_to(k, lp), t, w1, w2, budget)
    bound, _ = structured_maximum(k, l, lp, t, w1, w2)
    if rep.optimum is None or not rep.exhaustive:
        return SweepRecord("n1", params, rep.optimum, bound, "skipped")
    status = _compare(rep.optimum, bound)
    if status == "pass":
        status = "mismatch"
    return SweepRecord("n1", params, rep.optimum, bound, status, rep.witnesses)


def _sweep_t1(ranges: dict, budget: SearchBudget) -> Iterator[SweepRecord]:
    for n in ranges.get("n", [3, 4]):
        rep = iu_search(n, budget)
        params = {"n": n, "max_size": rep.max_size, "size_bound": rep.size_bound}
        status = "skipped" if not rep.exhaustive else _compare(rep.max_sturdiness, rep.sturdiness_bound)
        if rep.max_size > rep.size_bound:
            status = "violation"
        yield SweepRecord("t1", params, rep.max_sturdiness, rep.sturdiness_bound, status, (rep.max_sturdiness_witness,))


def _sweep_t2(ranges: dict, budget: SearchBudget) -> Iterator[SweepRecord]:
    ps = [Fraction(p) for p in ranges.get("p", ["1/2"])]
    for n in ranges.get("n", [1, 2, 3, 4]):
        bad = t2_violations(n, ps)
        status = "pass" if not bad else "violation"
        yield SweepRecord("t2", {"n": n, "p": [str(p) for p in ps]}, len(bad), 0, status)


_SWEEPS = {"t1": _sweep_t1, "t2": _sweep_t2, "n1": _sweep_n1, "t3": _sweep_t3, "f23": _sweep_f23}


def extremal_sweep(
    target: str,
    ranges: dict | None = None,
    budget: SearchBudget | None = None,
    witness_dir: str | Path | None = None,
) -> list[SweepRecord]:
    """Run the oracle for ``target`` over a parameter grid and compare with its bound.

    ``ranges`` maps parameter names (n, k, t, p) to value lists.  When
    ``witness_dir`` is given, witnesses of violations, counterexamples and
    equality instances are written there as family files.
    """
    if target not in _SWEEPS:
        raise PreconditionError(f"unknown sweep target {target!r}; choose from {sorted(_SWEEPS)}")
    budget = budget or SearchBudget()
    records = list(_SWEEPS[target](ranges or {}, budget))
    if witness_dir is not None:
        out = Path(witness_dir)
        out.mkdir(parents=True, exist_ok=True)
        for idx, rec in enumerate(records):
            if rec.status in ("violation", "expected-counterexample", "equal", "mismatch"):
                for side, fam in zip("fg", rec.witnesses):
                    if fam is None:
                        continue
                    path = out / f"{rec.target}-{idx:04d}-{side}.fam"
                    path.write_text(serialize(fam))
                    rec.witness_files.append(str(path))
    return records

