"""Degree, diversity, sturdiness and exact product-measure arithmetic.

All measures are :class:`fractions.Fraction`; no floating point enters a
verdict.  The square-root inequality ``sqrt(x) + sqrt(y) <= 1`` is decided
through its radical-free equivalent.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import ExtsetError, PreconditionError
from .family import Family, popcount
from .predicates import is_downset, is_upset

__all__ = [
    "ParamReport",
    "parse_rational",
    "degree_stats",
    "sturdiness",
    "family_params",
    "product_measure",
    "budget_holds",
    "sperner_budget_check",
    "CorrelationResult",
    "correlation_check",
    "sperner_partition",
]


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"num/den"`` (or an integer) without going through floats."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    parts = str(text).strip().split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            return Fraction(int(parts[0]), int(parts[1]))
    except (ValueError, ZeroDivisionError):
        pass
    raise ExtsetError(f"expected a rational 'num/den', got {text!r}")


@dataclass(frozen=True)
class ParamReport:
    max_degree: int
    diversity: int
    max_degree_element: int | None
    diversity_element: int | None
    sturdiness: int | None = None
    sturdiness_pair: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "max_degree_element": self.max_degree_element,
            "diversity": self.diversity,
            "diversity_element": self.diversity_element,
            "sturdiness": self.sturdiness,
            "sturdiness_pair": list(self.sturdiness_pair) if self.sturdiness_pair else None,
        }


def _degrees(f: Family) -> list[int]:
    deg = [0] * f.n
    for m in f.members:
        i = 0
        while m:
            if m & 1:
                deg[i] += 1
            m >>= 1
            i += 1
    return deg


def degree_stats(f: Family) -> ParamReport:
    """Maximum degree and diversity; smallest element wins ties.

    The empty family reports zeros with no witness element.
    """
    if not f.members:
        return ParamReport(0, 0, None, None)
    deg = _degrees(f)
    top = max(deg)
    best = deg.index(top) + 1
    avoid = [len(f) - d for d in deg]
    low = min(avoid)
    return ParamReport(top, low, best, avoid.index(low) + 1)


def sturdiness(f: Family) -> tuple[int, tuple[int, int]]:
    """Minimum of ``|F(i, j-bar)|`` over ordered pairs ``i != j``.

    Returns the value and the lexicographically smallest minimizing pair.
    """
    if f.n < 2:
        raise PreconditionError("sturdiness needs n >= 2", reason="n-too-small")
    best = None
    for i, j in product(range(f.n), repeat=2):
        if i == j:
            continue
        bi, bj = 1 << i, 1 << j
        c = sum(1 for m in f.members if m & bi and not m & bj)
        if best is None or c < best[0]:
            best = (c, (i + 1, j + 1))
            if c == 0:
                break
    return best


def family_params(f: Family) -> ParamReport:
    rep = degree_stats(f)
    if f.n < 2:
        return rep
    beta, pair = sturdiness(f)
    return ParamReport(
        rep.max_degree, rep.diversity, rep.max_degree_element, rep.diversity_element, beta, pair
    )


def _check_p(p: Fraction) -> Fraction:
    p = parse_rational(p)
    if not 0 < p < 1:
        raise PreconditionError(f"p must lie in (0, 1), got {p}", reason="p-range")
    return p


def product_measure(f: Family, p) -> Fraction:
    """``sum over F of p^|F| (1-p)^(n-|F|)``, grouped by cardinality."""
    p = _check_p(p)
    q = 1 - p
    sizes = Counter(popcount(m) for m in f.members)
    return sum((c * p**s * q ** (f.n - s) for s, c in sizes.items()), Fraction(0))


def budget_holds(x: Fraction, y: Fraction) -> bool:
    """``sqrt(x) + sqrt(y) <= 1`` for ``x, y >= 0``, decided without radicals."""
    rest = 1 - x - y
    return rest >= 0 and 4 * x * y <= rest * rest


def sperner_budget_check(f: Family, g: Family, p) -> bool:
    """Measure budget for a cross-Sperner pair (the pair is not re-verified)."""
    return budget_holds(product_measure(f, p), product_measure(g, p))


@dataclass(frozen=True)
class CorrelationResult:
    holds: bool
    lhs: Fraction
    rhs: Fraction
    down_is_downset: bool
    up_is_upset: bool

    def __bool__(self) -> bool:
        return self.holds


def correlation_check(down: Family, up: Family, p) -> CorrelationResult:
    """Compare ``mu(down & up)`` with ``mu(down) * mu(up)`` exactly.

    Monotonicity of the inputs is reported, not enforced.
    """
    lhs = product_measure(down.intersection(up), p)
    rhs = product_measure(down, p) * product_measure(up, p)
    return CorrelationResult(lhs <= rhs, lhs, rhs, is_downset(down), is_upset(up))


def _up_closure(n: int, gens: Family) -> set[int]:
    out = set()
    for x in range(1 << n):
        for m in gens.members:
            if m & x == m:
                out.add(x)
                break
    return out


def sperner_partition(f: Family, g: Family) -> tuple[Family, Family, Family, Family]:
    """Split ``2^[n]`` into A, B, C, D by which of f, g a set contains a member of.

    A: above both; B: above f only; C: above g only; D: above neither.
    """
    if f.n != g.n:
        raise PreconditionError("families live on different ground sets")
    n = f.n
    uf, ug = _up_closure(n, f), _up_closure(n, g)
    parts: tuple[list[int], ...] = ([], [], [], [])
    for x in range(1 << n):
        parts[_part(x in uf, x in ug)].append(x)
    return tuple(Family.of(n, p) for p in parts)  # type: ignore[return-value]


def _part(in_f: bool, in_g: bool) -> int:
    if in_f and in_g:
        return 0
    if in_f:
        return 1
    if in_g:
        return 2
    return 3

