"""Independent, deliberately naive implementations used as test oracles."""

import itertools
import random

from imp2.syntax import (
    Add, And, Assign, Eq, FalseB, If, Lit, Loc, Lt, Mul, Not, Or, ReadBit,
    Seq, Skip, Sub, TrueB, While,
)


class _Stop(Exception):
    def __init__(self, status):
        self.status = status


def reference_execute(sentence, y, threshold, max_bits=1 << 20):
    """Recursive big-step evaluator charging steps in the same order as the VM.

    Expression nodes are charged when their value is produced, an
    assignment when it stores, a ``while`` each time its guard value is
    tested, and ``skip``/``;``/``if`` when entered.  Returns
    ``(status, steps, bits_consumed, output_or_None)`` with status names as
    strings.
    """
    mem = {}
    st = {"steps": 0, "cursor": 0}
    # guard configurations seen so far; the cursor in the key makes a read
    # forget everything before it
    seen = set()

    def charge(n=1):
        st["steps"] += n
        if st["steps"] > threshold:
            raise _Stop("ThresholdSurpassed")

    def arith(e):
        if isinstance(e, ReadBit):
            charge()
            if st["cursor"] == len(y):
                raise _Stop("ReadPastEnd")
            b = int(y[st["cursor"]])
            st["cursor"] += 1
            return b
        if isinstance(e, Lit):
            charge()
            return e.n
        if isinstance(e, Loc):
            charge()
            return mem.get(e.index, 0)
        a = arith(e.l)
        b = arith(e.r)
        charge()
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return max(0, a - b)
        v = a * b
        if v.bit_length() > max_bits:
            raise _Stop("ThresholdSurpassed")
        return v

    def boolean(e):
        if isinstance(e, TrueB):
            charge()
            return True
        if isinstance(e, FalseB):
            charge()
            return False
        if isinstance(e, Not):
            v = boolean(e.e)
            charge()
            return not v
        if isinstance(e, (Eq, Lt)):
            a = arith(e.l)
            b = arith(e.r)
            charge()
            return a == b if isinstance(e, Eq) else a < b
        a = boolean(e.l)
        b = boolean(e.r)
        charge()
        return (a and b) if isinstance(e, And) else (a or b)

    def run(s):
        if isinstance(s, Skip):
            charge()
        elif isinstance(s, Assign):
            v = arith(s.expr)
            charge()
            mem[s.location] = v
        elif isinstance(s, Seq):
            charge()
            run(s.first)
            run(s.second)
        elif isinstance(s, If):
            charge()
            if boolean(s.cond):
                run(s.then_branch)
            else:
                run(s.else_branch)
        elif isinstance(s, While):
            while True:
                key = (id(s), st["cursor"], tuple(sorted((k, v) for k, v in mem.items() if v)))
                if key in seen:
                    raise _Stop("LoopDetected")
                seen.add(key)
                c = boolean(s.cond)
                charge()
                if not c:
                    break
                run(s.body)

    try:
        run(sentence)
    except _Stop as e:
        return e.status, st["steps"], st["cursor"], None
    if st["cursor"] < len(y):
        return "Extension", st["steps"], st["cursor"], None
    out = "".join(bin(mem[i] + 1)[3:] for i in sorted(mem) if mem[i])
    return "Halted", st["steps"], st["cursor"], out


def all_bitstrings(max_len):
    """Every bit string of length <= max_len in length-lexicographic order."""
    out = [""]
    for n in range(1, max_len + 1):
        out += ["".join(b) for b in itertools.product("01", repeat=n)]
    return out


def tuples_by_sum(k, max_sum):
    """All k-tuples with coordinate sum <= max_sum, by sum then lexicographic."""
    out = []
    for s in range(max_sum + 1):
        layer = [t for t in itertools.product(range(s + 1), repeat=k) if sum(t) == s]
        out += sorted(layer)
    return out


def round_robin(sizes, limit):
    """Literal round-robin schedule of (rule, inner) pairs, first ``limit`` entries."""
    out = []
    t = 0
    while len(out) < limit:
        emitted = False
        for r, s in enumerate(sizes):
            if s is None or t < s:
                out.append((r, t))
                emitted = True
        if not emitted:
            break
        t += 1
    return out[:limit]


def naive_ranks(xs):
    """Average ranks, 1-based, computed by explicit counting."""
    ranks = []
    for x in xs:
        below = sum(1 for v in xs if v < x)
        equal = sum(1 for v in xs if v == x)
        ranks.append(below + (equal + 1) / 2)
    return ranks


def naive_pearson(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    return sxy / (sxx * syy) ** 0.5


def naive_spearman(xs, ys):
    return naive_pearson(naive_ranks(xs), naive_ranks(ys))


def random_arith(rng, depth):
    c = rng.randrange(6 if depth > 0 else 3)
    if c == 0:
        return ReadBit()
    if c == 1:
        return Lit(rng.choice([0, 1, 2, 5, rng.randrange(10**6)]))
    if c == 2:
        return Loc(rng.randrange(4))
    return (Add, Sub, Mul)[c - 3](random_arith(rng, depth - 1), random_arith(rng, depth - 1))


def random_bool(rng, depth):
    c = rng.randrange(7 if depth > 0 else 2)
    if c == 0:
        return TrueB()
    if c == 1:
        return FalseB()
    if c == 2:
        return Eq(random_arith(rng, depth - 1), random_arith(rng, depth - 1))
    if c == 3:
        return Lt(random_arith(rng, depth - 1), random_arith(rng, depth - 1))
    if c == 4:
        return And(random_bool(rng, depth - 1), random_bool(rng, depth - 1))
    if c == 5:
        return Or(random_bool(rng, depth - 1), random_bool(rng, depth - 1))
    return Not(random_bool(rng, depth - 1))


def random_sentence(rng: random.Random, depth=4):
    c = rng.randrange(5 if depth > 0 else 2)
    if c == 0:
        return Skip()
    if c == 1:
        return Assign(rng.randrange(4), random_arith(rng, max(depth - 1, 0)))
    if c == 2:
        return While(random_bool(rng, depth - 1), random_sentence(rng, depth - 1))
    if c == 3:
        return Seq(random_sentence(rng, depth - 1), random_sentence(rng, depth - 1))
    return If(random_bool(rng, depth - 1), random_sentence(rng, depth - 1),
              random_sentence(rng, depth - 1))
