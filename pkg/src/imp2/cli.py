"""Command-line entry point: ``imp2 <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (bad program, mismatched
results, undefined correlation, ...) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import shlex
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import (
    UndefinedCorrelation, build_table, complete_output_length, correlate_tables,
    ctm_vs_spf, load_external, write_report,
)
from .codec import MalformedProgram, ProgramCode, count_programs, decode_program
from .enumeration import sentence_rank, sentence_unrank
from .interpreter import Status, execute
from .runner import MergeError, PartitionSpec, merge, read_results, sweep, write_results
from .syntax import ParseError, parse, to_text
from .threshold import ThresholdError, estimate_threshold

log = logging.getLogger("imp2")


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"not a natural number: {text!r}")
    return value


def _pos(text: str) -> int:
    value = _nat(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _partition(text: str) -> PartitionSpec:
    try:
        return PartitionSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def cmd_unrank(args) -> None:
    print(to_text(sentence_unrank(args.index)))


def cmd_rank(args) -> None:
    text = Path(args.file).read_text() if args.file else args.text
    if text is None:
        raise ValueError("give a sentence or --file")
    print(sentence_rank(parse(text)))


def cmd_exec(args) -> None:
    if args.sentence is not None:
        if args.bits is not None:
            raise ValueError("give either program bits or --sentence, not both")
        program = ProgramCode(args.sentence, args.input or "")
    elif args.bits is not None:
        program = decode_program(args.bits)
    else:
        raise ValueError("give program bits or --sentence")
    if program.input.strip("01"):
        raise ValueError(f"not a bit string: {program.input!r}")
    out = execute(program, threshold=args.threshold)
    line = f"{out.status.value} steps={out.steps_used} bits_consumed={out.bits_consumed}"
    if out.status is Status.HALTED:
        line += f" output={out.output}"
    print(line)


def cmd_count(args) -> None:
    total, rows = count_programs(args.max_len, table=True)
    if args.table:
        print("code_length,prefix_length,sentences,inputs,programs")
        for s in rows:
            print(f"{s.code_length},{s.prefix_length},{s.sentence_count},{s.input_count},{s.size}")
    print(total)


def cmd_threshold(args) -> None:
    est = estimate_threshold(args.max_len, args.samples, args.budget, args.quantile,
                             args.safety_factor, args.seed)
    text = est.dumps()
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)


def cmd_run(args) -> None:
    t0 = time.perf_counter()
    agg = sweep(args.max_len, args.threshold, args.partition, workers=args.workers,
                method=args.method, seed=args.seed, checkpoint_dir=args.checkpoint)
    agg.extra["flags"] = args.flags
    write_results(agg, args.out)
    log.info("swept %d programs in %.1fs", agg.total_programs, time.perf_counter() - t0)
    print(f"total_programs={agg.total_programs} halted={agg.halted} strings={len(agg.outputs)}")


def cmd_merge(args) -> None:
    agg = merge([read_results(p) for p in args.paths], require_complete=not args.allow_partial)
    agg.extra["flags"] = args.flags
    write_results(agg, args.out)
    print(f"total_programs={agg.total_programs} halted={agg.halted} strings={len(agg.outputs)}")


def cmd_analyze(args) -> None:
    agg = read_results(args.results)
    table = build_table(agg)
    kw = dict(permutations=args.permutations, rng_seed=args.seed, allow_undefined=True)
    longest = max(len(s) for s in agg.outputs)
    complete = complete_output_length(table)
    reports = [ctm_vs_spf(table, None, "spearman", **kw), ctm_vs_spf(table, None, "pearson", **kw)]
    if complete is not None:
        upto = ("upto", complete)
        reports += [ctm_vs_spf(table, upto, "spearman", **kw),
                    ctm_vs_spf(table, upto, "pearson", **kw)]
    reports += [ctm_vs_spf(table, ("length", ell), "spearman", **kw) for ell in range(1, longest + 1)]
    scatters = {}
    for path in args.external:
        ext = load_external(path)
        reports.append(correlate_tables(table, ext, None, **kw))
        if complete is not None:
            reports.append(correlate_tables(table, ext, ("upto", complete), **kw))
        reports += [correlate_tables(table, ext, ("length", ell), **kw)
                    for ell in range(1, longest + 1)]
        scatters[ext.name] = (table, ext)
    files = write_report(args.report, table, agg, reports, scatters)
    for r in reports:
        coef = "undefined" if r.coefficient is None else f"{r.coefficient:.6f}"
        p = "undefined" if r.p_value is None else f"{r.p_value:.6g}"
        print(f"{r.label:>24} {r.method:>8} {r.scope:>7} n={r.n:<4} coef={coef} p={p}")
    log.info("wrote %d report files to %s", len(files), args.report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="imp2", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("unrank", help="print the sentence at an index")
    s.add_argument("index", type=_nat)
    s.set_defaults(fn=cmd_unrank)

    s = sub.add_parser("rank", help="print the index of a sentence")
    s.add_argument("text", nargs="?")
    s.add_argument("--file")
    s.set_defaults(fn=cmd_rank)

    s = sub.add_parser("exec", help="execute one program")
    s.add_argument("bits", nargs="?", help="program code as a bit string")
    s.add_argument("--sentence", type=_nat)
    s.add_argument("--input", default="")
    s.add_argument("--threshold", type=_pos, default=10**6)
    s.set_defaults(fn=cmd_exec)

    s = sub.add_parser("count", help="count programs up to a code length")
    s.add_argument("--max-len", type=_nat, required=True)
    s.add_argument("--table", action="store_true", help="also print per-stratum counts")
    s.set_defaults(fn=cmd_count)

    s = sub.add_parser("threshold", help="estimate a halting threshold by sampling")
    s.add_argument("--max-len", type=_pos, required=True)
    s.add_argument("--samples", type=_pos, default=10**5)
    s.add_argument("--budget", type=_pos, default=10**6)
    s.add_argument("--quantile", type=float, default=1.0)
    s.add_argument("--safety-factor", type=float, default=2.0)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_threshold)

    s = sub.add_parser("run", help="sweep the program space")
    s.add_argument("--max-len", type=_pos, required=True)
    s.add_argument("--threshold", type=_pos, required=True)
    s.add_argument("--partition", type=_partition, default=PartitionSpec())
    s.add_argument("--out", required=True)
    s.add_argument("--workers", type=_pos, default=os.cpu_count() or 1)
    s.add_argument("--method", choices=("tree", "direct"), default="tree")
    s.add_argument("--checkpoint", help="directory for resumable per-unit results")
    s.add_argument("--seed", type=int, help="seed of the threshold estimate, recorded only")
    s.set_defaults(fn=cmd_run)

    s = sub.add_parser("merge", help="merge partition results")
    s.add_argument("paths", nargs="+")
    s.add_argument("--out", required=True)
    s.add_argument("--allow-partial", action="store_true")
    s.set_defaults(fn=cmd_merge)

    s = sub.add_parser("analyze", help="complexity tables and correlations")
    s.add_argument("--results", required=True)
    s.add_argument("--external", action="append", default=[])
    s.add_argument("--report", required=True)
    s.add_argument("--permutations", type=_pos, default=20000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(fn=cmd_analyze)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.flags = shlex.join(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.fn(args)
    except (ParseError, MalformedProgram, MergeError, ThresholdError,
            UndefinedCorrelation, ValueError, OSError) as e:
        print(f"imp2 {args.command}: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
