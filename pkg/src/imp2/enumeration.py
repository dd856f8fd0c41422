"""Bijective enumeration of IMP2 sentences.

Products of enumerations are interleaved by sum-layered tupling (Cantor
pairing for two components) and the alternatives of a syntactic category
are interleaved round-robin in grammar order.  Everything is exact integer
arithmetic; indices of realistic sentences run to dozens of digits.
"""

from __future__ import annotations

from math import comb, isqrt
from typing import Optional, Sequence

from .syntax import (
    Add, And, Assign, Eq, FalseB, If, Lit, Loc, Lt, Mul, Not, Or, ReadBit,
    Seq, Skip, Sub, TrueB, While,
)

__all__ = [
    "pair_rank", "pair_unrank", "tuple_rank", "tuple_unrank",
    "union_schedule", "union_rank",
    "sentence_rank", "sentence_unrank", "bool_rank", "bool_unrank",
    "arith_rank", "arith_unrank",
    "P_RULES", "B_RULES", "A_RULES",
]

INF = None  # size marker for an infinite alternative


def _check_index(n: int) -> None:
    if n < 0:
        raise ValueError(f"enumeration index must be non-negative, got {n}")


# -- products -----------------------------------------------------------------

def pair_rank(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + a


def pair_unrank(i: int) -> tuple[int, int]:
    _check_index(i)
    s = (isqrt(8 * i + 1) - 1) // 2
    a = i - s * (s + 1) // 2
    return a, s - a


def _below_layer(s: int, k: int) -> int:
    """Number of k-tuples of naturals whose sum is less than s."""
    return comb(s + k - 1, k)


def _with_sum(total: int, r: int) -> int:
    """Number of r-tuples of naturals summing to exactly ``total``."""
    if r == 0:
        return 1 if total == 0 else 0
    return comb(total + r - 1, r - 1)


def tuple_rank(components: Sequence[int], k: Optional[int] = None) -> int:
    """Rank of a k-tuple: by coordinate sum, then lexicographically.

    For ``k == 2`` this is exactly :func:`pair_rank`.
    """
    if k is None:
        k = len(components)
    if k < 1:
        raise ValueError("tuple arity must be at least 1")
    if len(components) != k:
        raise ValueError(f"expected {k} components, got {len(components)}")
    for c in components:
        _check_index(c)
    if k == 1:
        return components[0]
    if k == 2:
        return pair_rank(components[0], components[1])
    s = sum(components)
    rank = _below_layer(s, k)
    remaining = s
    for i, a in enumerate(components[:-1]):
        r = k - i
        # tuples in this layer with the same prefix and a smaller component i
        rank += comb(remaining + r - 1, r - 1) - comb(remaining - a + r - 1, r - 1)
        remaining -= a
    return rank


def _find_layer(i: int, k: int) -> int:
    hi = 1
    while _below_layer(hi, k) <= i:
        hi *= 2
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _below_layer(mid, k) <= i:
            lo = mid
        else:
            hi = mid
    return lo


def tuple_unrank(i: int, k: int) -> tuple[int, ...]:
    _check_index(i)
    if k < 1:
        raise ValueError("tuple arity must be at least 1")
    if k == 1:
        return (i,)
    if k == 2:
        return pair_unrank(i)
    s = _find_layer(i, k)
    rem = i - _below_layer(s, k)
    remaining = s
    out = []
    for pos in range(k - 1):
        r = k - pos
        top = comb(remaining + r - 1, r - 1)
        # largest a with  top - C(remaining - a + r - 1, r - 1) <= rem
        lo, hi = 0, remaining + 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if top - comb(remaining - mid + r - 1, r - 1) <= rem:
                lo = mid
            else:
                hi = mid
        rem -= top - comb(remaining - lo + r - 1, r - 1)
        out.append(lo)
        remaining -= lo
    out.append(remaining)
    return tuple(out)


# -- unions -------------------------------------------------------------------

def _emitted_before(sizes: Sequence[Optional[int]], t: int) -> int:
    """Positions used by rounds 0..t-1."""
    return sum(t if s is INF else min(s, t) for s in sizes)


def union_schedule(sizes: Sequence[Optional[int]], position: int) -> tuple[int, int]:
    """Map a union position to ``(rule_index, inner_index)``.

    Round ``t`` emits element ``t`` of every rule, in order, that still has
    one; ``None`` marks an infinite rule.
    """
    _check_index(position)
    infinite = [r for r, s in enumerate(sizes) if s is INF]
    finite_max = max((s for s in sizes if s is not INF), default=0)
    base = _emitted_before(sizes, finite_max)
    if position >= base:
        if not infinite:
            raise ValueError(f"position {position} beyond union of size {base}")
        # past the last finite rule only the infinite ones remain
        t, j = divmod(position - base, len(infinite))
        return infinite[j], finite_max + t
    lo, hi = 0, finite_max
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _emitted_before(sizes, mid) <= position:
            lo = mid
        else:
            hi = mid
    t = lo
    j = position - _emitted_before(sizes, t)
    for r, s in enumerate(sizes):
        if s is INF or s > t:
            if j == 0:
                return r, t
            j -= 1
    raise AssertionError("unreachable")


def union_rank(sizes: Sequence[Optional[int]], rule: int, inner: int) -> int:
    """Inverse of :func:`union_schedule`."""
    _check_index(inner)
    size = sizes[rule]
    if size is not INF and inner >= size:
        raise ValueError(f"inner index {inner} beyond rule of size {size}")
    pos = _emitted_before(sizes, inner)
    for s in sizes[:rule]:
        if s is INF or s > inner:
            pos += 1
    return pos


# -- the IMP2 grammar -----------------------------------------------------------

P_RULES = ("skip", "assign", "while", "seq", "if")
_P_SIZES = (1, INF, INF, INF, INF)
B_RULES = ("true", "false", "eq", "lt", "and", "or", "not")
_B_SIZES = (1, 1, INF, INF, INF, INF, INF)
A_RULES = ("readbit", "numeral", "loc", "add", "sub", "mul")
_A_SIZES = (1, INF, INF, INF, INF, INF)

_SKIP, _TRUE, _FALSE, _READBIT = Skip(), TrueB(), FalseB(), ReadBit()
_A_PAIR = {3: Add, 4: Sub, 5: Mul}
_A_PAIR_RULE = {Add: 3, Sub: 4, Mul: 5}
_B_PAIR = {2: Eq, 3: Lt, 4: And, 5: Or}
_B_PAIR_RULE = {Eq: 2, Lt: 3, And: 4, Or: 5}

# Recursion follows tree depth, which stays modest even for huge indices
# because every product at least halves the bit length of its components.


def arith_unrank(n: int):
    rule, i = union_schedule(_A_SIZES, n)
    if rule == 0:
        return _READBIT
    if rule == 1:
        return Lit(i)
    if rule == 2:
        return Loc(i)
    a, b = pair_unrank(i)
    return _A_PAIR[rule](arith_unrank(a), arith_unrank(b))


def arith_rank(e) -> int:
    t = type(e)
    if t is ReadBit:
        return union_rank(_A_SIZES, 0, 0)
    if t is Lit:
        return union_rank(_A_SIZES, 1, e.n)
    if t is Loc:
        return union_rank(_A_SIZES, 2, e.index)
    rule = _A_PAIR_RULE[t]
    return union_rank(_A_SIZES, rule, pair_rank(arith_rank(e.l), arith_rank(e.r)))


def bool_unrank(n: int):
    rule, i = union_schedule(_B_SIZES, n)
    if rule == 0:
        return _TRUE
    if rule == 1:
        return _FALSE
    if rule == 6:
        return Not(bool_unrank(i))
    a, b = pair_unrank(i)
    if rule <= 3:
        return _B_PAIR[rule](arith_unrank(a), arith_unrank(b))
    return _B_PAIR[rule](bool_unrank(a), bool_unrank(b))


def bool_rank(e) -> int:
    t = type(e)
    if t is TrueB:
        return union_rank(_B_SIZES, 0, 0)
    if t is FalseB:
        return union_rank(_B_SIZES, 1, 0)
    if t is Not:
        return union_rank(_B_SIZES, 6, bool_rank(e.e))
    rule = _B_PAIR_RULE[t]
    sub = arith_rank if rule <= 3 else bool_rank
    return union_rank(_B_SIZES, rule, pair_rank(sub(e.l), sub(e.r)))


def sentence_unrank(n: int):
    """The IMP2 sentence at position ``n``."""
    rule, i = union_schedule(_P_SIZES, n)
    if rule == 0:
        return _SKIP
    if rule == 1:
        loc, a = pair_unrank(i)
        return Assign(loc, arith_unrank(a))
    if rule == 2:
        b, p = pair_unrank(i)
        return While(bool_unrank(b), sentence_unrank(p))
    if rule == 3:
        p, q = pair_unrank(i)
        return Seq(sentence_unrank(p), sentence_unrank(q))
    b, p, q = tuple_unrank(i, 3)
    return If(bool_unrank(b), sentence_unrank(p), sentence_unrank(q))


def sentence_rank(s) -> int:
    """Position of sentence ``s``; inverse of :func:`sentence_unrank`."""
    t = type(s)
    if t is Skip:
        return union_rank(_P_SIZES, 0, 0)
    if t is Assign:
        inner = pair_rank(s.location, arith_rank(s.expr))
        return union_rank(_P_SIZES, 1, inner)
    if t is While:
        inner = pair_rank(bool_rank(s.cond), sentence_rank(s.body))
        return union_rank(_P_SIZES, 2, inner)
    if t is Seq:
        inner = pair_rank(sentence_rank(s.first), sentence_rank(s.second))
        return union_rank(_P_SIZES, 3, inner)
    if t is If:
        inner = tuple_rank(
            (bool_rank(s.cond), sentence_rank(s.then_branch), sentence_rank(s.else_branch)), 3
        )
        return union_rank(_P_SIZES, 4, inner)
    raise TypeError(f"not an IMP2 sentence: {s!r}")
