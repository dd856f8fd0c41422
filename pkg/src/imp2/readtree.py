"""Exact aggregate execution of one sentence over all of its input streams.

A run depends on its input only through the bits it actually reads, so the
inputs of a sentence form a binary tree of read events.  A node at depth d
that terminates without reading stands for every input extending its path:
one Halted program of length d and 2**(l-d) Extension programs of each
longer length l.  Subtrees are memoised on the machine state at the read,
which collapses the many paths that reach identical configurations.

Per-depth subtree statistics are stored sparsely:

``counts[(kind, r)]``
    number of nodes of kind ``h`` (halt), ``o`` (loop), ``t`` (limit) or
    ``r`` (read) at relative depth ``r``;
``outs[(r, output)]``
    ``[count, first_suffix]`` for halting nodes, ``first_suffix`` being the
    lexicographically smallest path that reaches one.
"""

from __future__ import annotations

from .interpreter import (
    DEFAULT_MAX_VALUE_BITS, EV_HALT, EV_LOOP, EV_READ, Code, Status,
    extract_output, run_segment,
)

__all__ = ["SentenceExplorer", "Tally"]


class Tally:
    """Status counts and output records for a set of programs of one length."""

    __slots__ = ("status", "outputs")

    def __init__(self):
        self.status = dict.fromkeys(Status, 0)
        # output -> [halt_count, first_suffix]
        self.outputs: dict[str, list] = {}

    @property
    def total(self) -> int:
        return sum(self.status.values())

    def add(self, other: "Tally", prefix: str = "") -> None:
        for s, c in other.status.items():
            self.status[s] += c
        outs = self.outputs
        for x, (c, suf) in other.outputs.items():
            rec = outs.get(x)
            if rec is None:
                outs[x] = [c, prefix + suf]
            else:
                rec[0] += c
                cand = prefix + suf
                if cand < rec[1]:
                    rec[1] = cand


_HALT, _LOOP, _LIMIT, _READ = "h", "o", "t", "r"
_KIND_STATUS = {_LOOP: Status.LOOP_DETECTED, _LIMIT: Status.THRESHOLD_SURPASSED}


class _Stats:
    __slots__ = ("counts", "outs")

    def __init__(self, counts, outs):
        self.counts = counts
        self.outs = outs


class SentenceExplorer:
    """Explores the read tree of one compiled sentence."""

    def __init__(self, code: Code, threshold: int, max_value_bits: int = DEFAULT_MAX_VALUE_BITS):
        self.code = code
        self.threshold = threshold
        self.max_value_bits = max_value_bits
        self._memo: dict = {}
        self._terminal: dict = {}
        self.root = self._advance(0, [], {}, 0)

    # -- nodes ----------------------------------------------------------------
    # A node is ("r", state) for a pending read or (kind, output) for a
    # terminal; state = (pc, stack, memory, steps) frozen for hashing.

    def _advance(self, pc, stack, mem, steps):
        event, pc, steps = run_segment(self.code, pc, stack, mem, steps,
                                       self.threshold, self.max_value_bits)
        if event == EV_READ:
            return (_READ, (pc, tuple(stack), frozenset(mem.items()), steps))
        if event == EV_HALT:
            return (_HALT, extract_output(mem))
        if event == EV_LOOP:
            return (_LOOP, None)
        return (_LIMIT, None)

    def child(self, node, bit: int):
        pc, stack, mem, steps = node[1]
        return self._advance(pc + 1, list(stack) + [bit], dict(mem), steps)

    # -- full subtrees ----------------------------------------------------------

    def _terminal_stats(self, node) -> _Stats:
        st = self._terminal.get(node)
        if st is None:
            kind, output = node
            if kind == _HALT:
                st = _Stats({(_HALT, 0): 1}, {(0, output): (1, "")})
            else:
                st = _Stats({(kind, 0): 1}, {})
            self._terminal[node] = st
        return st

    def stats(self, node, budget: int) -> _Stats:
        """Statistics of the subtree under ``node`` down to ``budget`` more bits."""
        if node[0] != _READ:
            return self._terminal_stats(node)
        key = (node[1], budget)
        st = self._memo.get(key)
        if st is not None:
            return st
        counts = {(_READ, 0): 1}
        outs: dict = {}
        if budget > 0:
            for bit in (0, 1):
                sub = self.stats(self.child(node, bit), budget - 1)
                for (kind, r), c in sub.counts.items():
                    k = (kind, r + 1)
                    counts[k] = counts.get(k, 0) + c
                tag = "01"[bit]
                for (r, x), (c, suf) in sub.outs.items():
                    k = (r + 1, x)
                    prev = outs.get(k)
                    # bit 0 is visited first, so its suffixes are smaller
                    outs[k] = (c, tag + suf) if prev is None else (prev[0] + c, prev[1])
        st = _Stats(counts, outs)
        self._memo[key] = st
        return st

    @staticmethod
    def slice(st: _Stats, depth: int) -> Tally:
        """Tally of all programs whose input has exactly ``depth`` bits."""
        t = Tally()
        c = st.counts
        ext = loop = limit = 0
        for r in range(depth + 1):
            w = 1 << (depth - r)
            if r < depth:
                ext += c.get((_HALT, r), 0) * w
            loop += c.get((_LOOP, r), 0) * w
            limit += c.get((_LIMIT, r), 0) * w
        t.status[Status.HALTED] = c.get((_HALT, depth), 0)
        t.status[Status.EXTENSION] = ext
        t.status[Status.LOOP_DETECTED] = loop
        t.status[Status.THRESHOLD_SURPASSED] = limit
        t.status[Status.READ_PAST_END] = c.get((_READ, depth), 0)
        for (r, x), (cnt, suf) in st.outs.items():
            if r == depth:
                t.outputs[x] = [cnt, suf]
        return t

    def tally(self, length: int) -> Tally:
        """All inputs of exactly ``length`` bits."""
        return self.slice(self.stats(self.root, length), length)

    def tallies(self, max_length: int) -> list[Tally]:
        st = self.stats(self.root, max_length)
        return [self.slice(st, ell) for ell in range(max_length + 1)]

    def tally_range(self, length: int, lo: int, hi: int) -> Tally:
        """Inputs of ``length`` bits whose lexicographic index lies in ``[lo, hi)``."""
        if not 0 <= lo <= hi <= 1 << length:
            raise ValueError("input range out of bounds")
        out = Tally()
        self._walk(self.root, 0, length, lo, hi, "", out)
        return out

    def _walk(self, node, d, length, lo, hi, path, out: Tally) -> None:
        if lo >= hi:
            return
        size = 1 << (length - d)
        if lo == 0 and hi == size:
            out.add(self.slice(self.stats(node, length - d), length - d), path)
            return
        kind = node[0]
        if kind == _READ:
            # d < length here, a partial range implies size >= 2
            half = size >> 1
            self._walk(self.child(node, 0), d + 1, length, lo, min(hi, half), path + "0", out)
            self._walk(self.child(node, 1), d + 1, length, max(lo, half) - half, hi - half,
                       path + "1", out)
        elif kind == _HALT:
            # a proper subset of the extensions of a node that stopped reading
            out.status[Status.EXTENSION] += hi - lo
        else:
            out.status[_KIND_STATUS[kind]] += hi - lo

    def clear(self) -> None:
        self._memo.clear()
