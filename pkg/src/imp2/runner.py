"""Sweeping the program space and aggregating run results.

A sweep covers every program of code length 1..L that falls in one
partition.  Within each (code length, prefix length) stratum the flattened
program index space is cut into ``count`` contiguous ranges, the last one
taking the remainder; partition ``index`` owns range ``index``.

Two execution routes produce identical aggregates: ``"tree"`` explores the
read tree of each sentence once (see :mod:`imp2.readtree`), ``"direct"``
runs every program separately and is kept as an oracle.
"""

from __future__ import annotations

import io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from . import __version__
from .codec import (
    count_programs, encode_index, encode_program, iterate_stratum,
    sentence_range, stratum_size, strata,
)
from .enumeration import sentence_unrank
from .interpreter import DEFAULT_MAX_VALUE_BITS, Status, compile_sentence, execute
from .readtree import SentenceExplorer, Tally

__all__ = [
    "PartitionSpec", "RunAggregate", "MergeError", "sweep", "merge",
    "partition_range", "halting_programs", "write_results", "read_results",
    "dumps_results", "loads_results", "results_body",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionSpec:
    index: int = 0
    count: int = 1

    def __post_init__(self):
        if self.count < 1 or not 0 <= self.index < self.count:
            raise ValueError(f"invalid partition {self.index}/{self.count}")

    @classmethod
    def parse(cls, text: str) -> "PartitionSpec":
        """Parse the ``i/k`` command-line form."""
        try:
            i, k = text.split("/")
            return cls(int(i), int(k))
        except ValueError:
            raise ValueError(f"partition must look like i/k, got {text!r}") from None

    def __str__(self) -> str:
        return f"{self.index}/{self.count}"


def partition_range(size: int, part: PartitionSpec) -> tuple[int, int]:
    chunk = size // part.count
    lo = part.index * chunk
    hi = size if part.index == part.count - 1 else lo + chunk
    return lo, hi


class MergeError(ValueError):
    pass


@dataclass
class RunAggregate:
    max_len: int
    threshold: int
    max_value_bits: int = DEFAULT_MAX_VALUE_BITS
    partition_count: int = 1
    partitions: tuple = (0,)
    seed: Optional[int] = None
    version: str = __version__
    # output -> [halt_count, first_program]; spf is len(first_program)
    outputs: dict = field(default_factory=dict)
    status: dict = field(default_factory=lambda: dict.fromkeys(Status, 0))
    total_programs: int = 0
    # free-form provenance lines, e.g. the command line that produced the run
    extra: dict = field(default_factory=dict)

    def spf(self, output: str) -> int:
        return len(self.outputs[output][1])

    def halt_count(self, output: str) -> int:
        return self.outputs[output][0]

    @property
    def halted(self) -> int:
        return self.status[Status.HALTED]

    def add_tally(self, tally: Tally, prefix: str) -> None:
        for s, c in tally.status.items():
            self.status[s] += c
            self.total_programs += c
        self._add_outputs((x, c, prefix + suf) for x, (c, suf) in tally.outputs.items())

    def add_outcome(self, program_bits: str, outcome) -> None:
        self.status[outcome.status] += 1
        self.total_programs += 1
        if outcome.status is Status.HALTED:
            self._add_outputs([(outcome.output, 1, program_bits)])

    def _add_outputs(self, records) -> None:
        outs = self.outputs
        for x, c, prog in records:
            rec = outs.get(x)
            if rec is None:
                outs[x] = [c, prog]
            else:
                rec[0] += c
                # enumeration order of programs is (length, lexicographic)
                if (len(prog), prog) < (len(rec[1]), rec[1]):
                    rec[1] = prog

    def absorb(self, other: "RunAggregate") -> None:
        """Add another aggregate's counts, ignoring metadata."""
        for s, c in other.status.items():
            self.status[s] += c
        self.total_programs += other.total_programs
        self._add_outputs((x, c, p) for x, (c, p) in other.outputs.items())

    def rows(self) -> list[tuple[str, int, int, str]]:
        """``(output, halt_count, spf, first_program)`` sorted by output length then value."""
        return [(x, c, len(p), p) for x, (c, p) in
                sorted(self.outputs.items(), key=lambda kv: (len(kv[0]), kv[0]))]

    def metadata(self) -> dict:
        return {
            "max_len": self.max_len,
            "threshold": self.threshold,
            "max_value_bits": self.max_value_bits,
            "partitions": ",".join(map(str, self.partitions)) + f"/{self.partition_count}",
            "seed": "" if self.seed is None else self.seed,
            "version": self.version,
            "total_programs": self.total_programs,
            **self.extra,
        }


# -- sweeping -----------------------------------------------------------------

def _sentence_units(max_len: int, chunk: int) -> Iterator[tuple[int, int, int]]:
    for k in range(1, max_len + 1, 2):
        r = sentence_range(k)
        for lo in range(r.start, r.stop, chunk):
            yield k, lo, min(lo + chunk, r.stop)


def _sweep_unit(max_len, threshold, max_bits, part_index, part_count, k, n_lo, n_hi) -> RunAggregate:
    part = PartitionSpec(part_index, part_count)
    agg = RunAggregate(max_len, threshold, max_bits)
    first = sentence_range(k).start
    depth = max_len - k
    for n in range(n_lo, n_hi):
        prefix = encode_index(n)
        if part_count == 1:
            # whole program space: every input length from one exploration
            explorer = SentenceExplorer(compile_sentence(sentence_unrank(n)), threshold, max_bits)
            for t in explorer.tallies(depth):
                agg.add_tally(t, prefix)
            continue
        explorer = None
        for ell in range(depth + 1):
            block = 1 << ell
            lo, hi = partition_range(stratum_size(k + ell, k), part)
            start = (n - first) * block
            ylo, yhi = max(lo - start, 0), min(hi - start, block)
            if ylo >= yhi:
                continue
            if explorer is None:
                explorer = SentenceExplorer(compile_sentence(sentence_unrank(n)), threshold, max_bits)
            if ylo == 0 and yhi == block:
                agg.add_tally(explorer.tally(ell), prefix)
            else:
                agg.add_tally(explorer.tally_range(ell, ylo, yhi), prefix)
    return agg


def _direct_unit(max_len, threshold, max_bits, part_index, part_count, m, k) -> RunAggregate:
    part = PartitionSpec(part_index, part_count)
    agg = RunAggregate(max_len, threshold, max_bits)
    lo, hi = partition_range(stratum_size(m, k), part)
    for p in iterate_stratum(m, k, lo, hi):
        agg.add_outcome(encode_program(p), execute(p, threshold=threshold, max_value_bits=max_bits))
    return agg


def _unit_name(unit) -> str:
    return "unit-" + "-".join(map(str, unit)) + ".res"


def sweep(max_len: int, threshold: int, partition: PartitionSpec = PartitionSpec(),
          workers: int = 1, method: str = "tree", seed: Optional[int] = None,
          max_value_bits: int = DEFAULT_MAX_VALUE_BITS, chunk: int = 64,
          checkpoint_dir: Optional[os.PathLike] = None) -> RunAggregate:
    """Execute every program of length 1..``max_len`` in ``partition``.

    ``checkpoint_dir`` stores each finished work unit atomically and skips
    units already present, so an interrupted sweep can be resumed.
    """
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    if method == "tree":
        units = list(_sentence_units(max_len, chunk))
        fn = _sweep_unit
    elif method == "direct":
        units = [(s.code_length, s.prefix_length) for s in strata(max_len)]
        fn = _direct_unit
    else:
        raise ValueError(f"unknown sweep method {method!r}")

    result = RunAggregate(max_len, threshold, max_value_bits, partition.count,
                          (partition.index,), seed)
    ckpt = Path(checkpoint_dir) if checkpoint_dir is not None else None
    pending = []
    for unit in units:
        path = ckpt / _unit_name(unit) if ckpt else None
        if path is not None and path.exists():
            result.absorb(read_results(path))
        else:
            pending.append(unit)
    if ckpt:
        ckpt.mkdir(parents=True, exist_ok=True)
        log.info("resuming: %d of %d units already done", len(units) - len(pending), len(units))

    common = (max_len, threshold, max_value_bits, partition.index, partition.count)

    def finished(unit, part: RunAggregate):
        if ckpt:
            _atomic_write(ckpt / _unit_name(unit), dumps_results(part))
            with open(ckpt / "manifest.txt", "a") as fh:
                fh.write(_unit_name(unit) + "\n")
        result.absorb(part)

    if workers <= 1:
        for unit in pending:
            finished(unit, fn(*common, *unit))
    else:
        with ProcessPoolExecutor(workers) as pool:
            futures = [(u, pool.submit(fn, *common, *u)) for u in pending]
            for unit, fut in futures:
                finished(unit, fut.result())
    return result


def halting_programs(max_len: int, threshold: int,
                     max_value_bits: int = DEFAULT_MAX_VALUE_BITS) -> Iterator[tuple[str, str]]:
    """Yield ``(program_bits, output)`` for every Halted program, by direct execution."""
    for s in strata(max_len):
        for p in iterate_stratum(s.code_length, s.prefix_length):
            out = execute(p, threshold=threshold, max_value_bits=max_value_bits)
            if out.status is Status.HALTED:
                yield encode_program(p), out.output


def merge(aggregates: Iterable[RunAggregate], require_complete: bool = True) -> RunAggregate:
    """Combine partition aggregates; the result equals a single-partition sweep."""
    aggs = list(aggregates)
    if not aggs:
        raise MergeError("nothing to merge")
    head = aggs[0]
    key = lambda a: (a.max_len, a.threshold, a.max_value_bits, a.version, a.partition_count)
    for a in aggs[1:]:
        if key(a) != key(head):
            raise MergeError(f"metadata mismatch: {key(a)} vs {key(head)}")
    seen: set = set()
    for a in aggs:
        overlap = seen.intersection(a.partitions)
        if overlap:
            raise MergeError(f"partitions {sorted(overlap)} covered twice")
        seen.update(a.partitions)
    missing = set(range(head.partition_count)) - seen
    if require_complete and missing:
        raise MergeError(f"partitions {sorted(missing)} missing")
    seeds = {a.seed for a in aggs}
    seed = seeds.pop() if len(seeds) == 1 else None
    if missing:
        out = RunAggregate(head.max_len, head.threshold, head.max_value_bits, head.partition_count,
                           tuple(sorted(seen)), seed, head.version)
    else:
        # a complete merge is indistinguishable from a single-partition sweep
        out = RunAggregate(head.max_len, head.threshold, head.max_value_bits, 1, (0,), seed,
                           head.version)
    for a in aggs:
        out.absorb(a)
    return out


# -- persistence ----------------------------------------------------------------

def dumps_results(agg: RunAggregate) -> str:
    buf = io.StringIO()
    for k, v in agg.metadata().items():
        buf.write(f"{k}={v}\n")
    buf.write("\noutput,halt_count,spf,first_program\n")
    for x, c, spf, prog in agg.rows():
        buf.write(f"{x},{c},{spf},{prog}\n")
    buf.write("\nstatus,count\n")
    for s in Status:
        buf.write(f"{s.value},{agg.status[s]}\n")
    return buf.getvalue()


def results_body(text: str) -> str:
    """The CSV sections of a results file, without the metadata header."""
    return text[text.index("\n\n") + 2:]


def loads_results(text: str) -> RunAggregate:
    header, body, statuses = text.rstrip("\n").split("\n\n")
    meta = dict(line.split("=", 1) for line in header.splitlines())
    known = ("max_len", "threshold", "max_value_bits", "partitions", "seed", "version",
             "total_programs")
    parts, count = meta["partitions"].split("/")
    agg = RunAggregate(
        max_len=int(meta["max_len"]),
        threshold=int(meta["threshold"]),
        max_value_bits=int(meta["max_value_bits"]),
        partition_count=int(count),
        partitions=tuple(int(p) for p in parts.split(",")),
        seed=int(meta["seed"]) if meta["seed"] else None,
        version=meta["version"],
        total_programs=int(meta["total_programs"]),
        extra={k: v for k, v in meta.items() if k not in known},
    )
    lines = body.splitlines()
    if lines[0] != "output,halt_count,spf,first_program":
        raise ValueError("results file lacks the output table header")
    for line in lines[1:]:
        x, c, spf, prog = line.split(",")
        if len(prog) != int(spf):
            raise ValueError(f"spf {spf} does not match first program {prog!r}")
        agg.outputs[x] = [int(c), prog]
    lines = statuses.splitlines()
    if lines[0] != "status,count":
        raise ValueError("results file lacks the status table header")
    for line in lines[1:]:
        s, c = line.split(",")
        agg.status[Status(s)] = int(c)
    return agg


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_results(agg: RunAggregate, path: os.PathLike) -> None:
    _atomic_write(Path(path), dumps_results(agg))


def read_results(path: os.PathLike) -> RunAggregate:
    return loads_results(Path(path).read_text(encoding="utf-8"))
