"""Complexity tables and correlation analysis.

``D(x)`` is the fraction of Halted programs that output ``x``, kept as an
exact rational; ``CTM(x) = -log2 D(x)``; ``SPF(x)`` is the length of the
shortest halting program found for ``x``.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy.stats import rankdata

from .interpreter import Status
from .runner import RunAggregate

__all__ = [
    "Row", "ComplexityTable", "ExternalDistribution", "CorrelationReport",
    "UndefinedCorrelation", "build_table", "load_external", "spearman", "pearson",
    "permutation_test", "correlate_tables", "ctm_vs_spf", "complete_output_length",
    "significance", "write_report", "STATUS_LABELS",
]


class UndefinedCorrelation(ValueError):
    """Fewer than two points, or no variance on one side."""


@dataclass(frozen=True)
class Row:
    output: str
    halt_count: int
    D: Fraction
    ctm: float
    spf: int


@dataclass
class ComplexityTable:
    rows: list
    denominator: int
    name: str = "imp2"

    def __post_init__(self):
        self._by = {r.output: r for r in self.rows}

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, x: str) -> bool:
        return x in self._by

    def __getitem__(self, x: str) -> Row:
        return self._by[x]

    def strings(self) -> list[str]:
        return [r.output for r in self.rows]

    def ctm_values(self) -> dict[str, float]:
        return {r.output: r.ctm for r in self.rows}


def build_table(agg: RunAggregate, name: str = "imp2") -> ComplexityTable:
    den = agg.status[Status.HALTED]
    if den == 0 or not agg.outputs:
        raise ValueError("aggregate has no Halted programs")
    log_den = math.log2(den)
    rows = [Row(x, c, Fraction(c, den), log_den - math.log2(c), spf)
            for x, c, spf, _ in agg.rows()]
    return ComplexityTable(rows, den, name)


@dataclass
class ExternalDistribution:
    """An output distribution of another machine, keyed by string."""

    values: dict
    value_kind: str  # "frequency" or "ctm"
    name: str = "external"

    def __post_init__(self):
        if self.value_kind not in ("frequency", "ctm"):
            raise ValueError(f"unknown value kind {self.value_kind!r}")
        if self.value_kind == "frequency" and any(v <= 0 for v in self.values.values()):
            raise ValueError("frequencies must be positive")

    def strings(self) -> list[str]:
        return list(self.values)

    def ctm_values(self) -> dict[str, float]:
        # -log2 of an unnormalised frequency differs from CTM by a constant,
        # which neither correlation coefficient can see.
        if self.value_kind == "ctm":
            return dict(self.values)
        return {s: -math.log2(v) for s, v in self.values.items()}


def load_external(path: os.PathLike, name: Optional[str] = None) -> ExternalDistribution:
    """Read a ``string,frequency`` or ``string,ctm`` CSV."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) != 2 or header[0] != "string" or header[1] not in ("frequency", "ctm"):
            raise ValueError(f"{path}: header must be string,frequency or string,ctm")
        values: dict = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            s, v = row
            if s.strip("01"):
                raise ValueError(f"{path}:{lineno}: not a bit string: {s!r}")
            if s in values:
                raise ValueError(f"{path}:{lineno}: duplicate string {s!r}")
            values[s] = float(v)
    return ExternalDistribution(values, header[1], name or path.stem)


# -- correlation ----------------------------------------------------------------

def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two vectors of equal length")
    if len(x) < 2:
        raise UndefinedCorrelation("correlation needs at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = dx @ dx
    syy = dy @ dy
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelation("correlation undefined for a constant vector")
    r = (dx @ dy) / math.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman's rho with average ranks for ties."""
    if len(xs) != len(ys):
        raise ValueError("spearman needs two vectors of equal length")
    if len(xs) < 2:
        raise UndefinedCorrelation("correlation needs at least two points")
    return pearson(rankdata(xs), rankdata(ys))


_METHODS = {"spearman": spearman, "pearson": pearson}


@dataclass
class CorrelationReport:
    method: str
    scope: str
    n: int
    coefficient: Optional[float]
    p_value: Optional[float]
    permutations: int
    rng_seed: Optional[int]
    label: str = ""

    @property
    def defined(self) -> bool:
        return self.coefficient is not None


def _row_correlations(x: np.ndarray, Y: np.ndarray) -> np.ndarray:
    dx = x - x.mean()
    dY = Y - Y.mean(axis=1, keepdims=True)
    num = dY @ dx
    den = np.sqrt((dx @ dx) * np.einsum("ij,ij->i", dY, dY))
    return num / den


def permutation_test(xs, ys, method: str = "spearman", permutations: int = 20000,
                     rng_seed: int = 0, scope: str = "global", label: str = "") -> CorrelationReport:
    """One-sided permutation test of the null hypothesis of a random ranking.

    ``p = (1 + #{permuted coefficient >= observed}) / (permutations + 1)``.
    """
    if method not in _METHODS:
        raise ValueError(f"unknown correlation method {method!r}")
    observed = _METHODS[method](xs, ys)
    x = np.asarray(rankdata(xs) if method == "spearman" else xs, dtype=float)
    y = np.asarray(rankdata(ys) if method == "spearman" else ys, dtype=float)
    rng = np.random.default_rng(rng_seed)
    hits = 0
    batch = max(1, min(permutations, 2_000_000 // max(len(y), 1)))
    done = 0
    while done < permutations:
        b = min(batch, permutations - done)
        Y = rng.permuted(np.broadcast_to(y, (b, len(y))), axis=1)
        # tolerance absorbs rounding in coefficients that tie the observed one
        hits += int(np.count_nonzero(_row_correlations(x, Y) >= observed - 1e-12))
        done += b
    p = (1 + hits) / (permutations + 1)
    return CorrelationReport(method, scope, len(x), observed, p, permutations, rng_seed, label)


def significance(p: float) -> str:
    if p < 0.001:
        return "very high"
    if p < 0.01:
        return "high"
    if p < 0.1:
        return "low"
    return "very low"


Source = Union[ComplexityTable, ExternalDistribution]


def _scope_filter(scope) -> tuple[str, callable]:
    if scope in (None, "global"):
        return "global", lambda s: True
    kind, ell = scope
    if kind == "length":
        return f"={ell}", lambda s: len(s) == ell
    if kind == "upto":
        return f"<={ell}", lambda s: len(s) <= ell
    raise ValueError(f"unknown scope {scope!r}")


def _joined(a: Source, b: Source, scope) -> tuple[str, list[str], list[float], list[float]]:
    label, keep = _scope_filter(scope)
    va, vb = a.ctm_values(), b.ctm_values()
    common = sorted((s for s in va if s in vb and keep(s)), key=lambda s: (len(s), s))
    return label, common, [va[s] for s in common], [vb[s] for s in common]


def correlate_tables(a: Source, b: Source, scope=None, method: str = "spearman",
                     permutations: int = 20000, rng_seed: int = 0,
                     allow_undefined: bool = False) -> CorrelationReport:
    """Correlate two distributions over the strings they share.

    ``scope`` is ``None``/``"global"``, ``("length", l)`` or ``("upto", l)``.
    Values are compared as CTM, so higher frequency means lower value on
    both sides.  With ``allow_undefined`` a degenerate join yields a report
    whose coefficient and p-value are ``None`` instead of raising.
    """
    label, common, xa, xb = _joined(a, b, scope)
    name = f"{getattr(a, 'name', 'a')} vs {getattr(b, 'name', 'b')}"
    if len(common) < 2 and not allow_undefined:
        raise UndefinedCorrelation(
            f"only {len(common)} common strings in scope {label}; need at least two")
    try:
        return permutation_test(xa, xb, method, permutations, rng_seed, label, name)
    except UndefinedCorrelation:
        if not allow_undefined:
            raise
        return CorrelationReport(method, label, len(common), None, None, permutations, rng_seed, name)


def ctm_vs_spf(table: ComplexityTable, scope=None, method: str = "spearman",
               permutations: int = 20000, rng_seed: int = 0,
               allow_undefined: bool = False) -> CorrelationReport:
    label, keep = _scope_filter(scope)
    rows = [r for r in table.rows if keep(r.output)]
    try:
        return permutation_test([r.ctm for r in rows], [r.spf for r in rows], method,
                                permutations, rng_seed, label, "CTM vs SPF")
    except UndefinedCorrelation:
        if not allow_undefined:
            raise
        return CorrelationReport(method, label, len(rows), None, None, permutations, rng_seed,
                                 "CTM vs SPF")


def complete_output_length(strings: Union[ComplexityTable, Iterable[str]]) -> Optional[int]:
    """Largest l such that every string of length <= l is present.

    ``None`` when the empty string itself is missing.
    """
    present = set(strings.strings() if isinstance(strings, ComplexityTable) else strings)
    if "" not in present:
        return None
    by_len: dict = {}
    for s in present:
        by_len[len(s)] = by_len.get(len(s), 0) + 1
    ell = 0
    while by_len.get(ell + 1, 0) == 1 << (ell + 1):
        ell += 1
    return ell


# -- report files -----------------------------------------------------------------

# Coarser labels for comparing status tallies with other sweeps.
STATUS_LABELS = {
    Status.HALTED: "Halted",
    Status.THRESHOLD_SURPASSED: "Threshold surpassed",
    Status.LOOP_DETECTED: "Loop reached",
    # a read on an exhausted stream never returns, so it counts as a loop
    Status.READ_PAST_END: "Loop reached",
    Status.EXTENSION: "Extensions",
}


def _fmt(v) -> str:
    if v is None:
        return "undefined"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def write_report(outdir: os.PathLike, table: Optional[ComplexityTable] = None,
                 aggregate: Optional[RunAggregate] = None,
                 reports: Sequence[CorrelationReport] = (),
                 scatters: Optional[Mapping[str, tuple]] = None,
                 status_names: Mapping = STATUS_LABELS) -> list[Path]:
    """Write plot-ready CSV files plus ``manifest.txt`` listing them.

    ``scatters`` maps a name to a pair of sources joined into
    ``scatter_<name>.csv``.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if aggregate is not None:
        strings = list(aggregate.outputs)
        _write_csv(out / "summary.csv", ["quantity", "value"], [
            ("total_programs", aggregate.total_programs),
            ("strings_produced", len(strings)),
            ("largest_output_length", max((len(s) for s in strings), default=0)),
            ("complete_output_length", complete_output_length(strings)),
            ("max_len", aggregate.max_len),
            ("threshold", aggregate.threshold),
        ])
        written.append(out / "summary.csv")
        total = aggregate.total_programs or 1
        _write_csv(out / "statuses.csv", ["status", "label", "count", "percentage"], [
            (s.value, status_names.get(s, s.value), aggregate.status[s],
             f"{100 * aggregate.status[s] / total:.6f}") for s in Status])
        written.append(out / "statuses.csv")

    if table is not None:
        _write_csv(out / "ctm_spf.csv", ["output", "halt_count", "D", "ctm", "spf"],
                   [(r.output, r.halt_count, f"{r.D.numerator}/{r.D.denominator}", r.ctm, r.spf)
                    for r in table.rows])
        written.append(out / "ctm_spf.csv")

    if reports:
        _write_csv(out / "correlations.csv",
                   ["comparison", "scope", "method", "coefficient", "p_value", "n",
                    "permutations", "seed"],
                   [(r.label, r.scope, r.method, r.coefficient, r.p_value, r.n,
                     r.permutations, r.rng_seed) for r in reports])
        written.append(out / "correlations.csv")

    for name, (a, b) in (scatters or {}).items():
        _, common, xa, xb = _joined(a, b, None)
        path = out / f"scatter_{name}.csv"
        _write_csv(path, ["string", getattr(a, "name", "a"), getattr(b, "name", "b")],
                   zip(common, xa, xb))
        written.append(path)

    with open(out / "manifest.txt", "w", encoding="utf-8", newline="\n") as fh:
        for p in written:
            fh.write(p.name + "\n")
    return written
