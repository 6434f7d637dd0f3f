"""Command line front end: compress, decompress, verify, stats, bench.

Exit codes: 0 success, 1 I/O failure, 2 malformed compressed stream,
3 invalid input symbol, 64 usage error. File outputs are written to a
temporary sibling and renamed into place on success, so a failed run
never leaves a partial file at the target path. '-' names stdin or
stdout.
"""

import argparse
import contextlib
import json
import os
import sys
import tempfile
from time import perf_counter

from .codec import compress, decompress, verify
from .errors import CodecError, IngestError, InvalidSymbolError, StreamFormatError
from .sections import compressed_size_bytes, sectionize
from .seqio import IngestNote, IngestPolicy, LineWriter, ingest, iter_normalized

EXIT_OK = 0
EXIT_IO = 1
EXIT_FORMAT = 2
EXIT_SYMBOL = 3
EXIT_USAGE = 64

STDIO = "-"


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here is 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _policy_from(args) -> IngestPolicy:
    return IngestPolicy(
        fasta_mode=args.fasta,
        case_fold=not args.no_case_fold,
        iupac_to_n=args.iupac_to_n,
        strict=not args.iupac_to_n,
    )


def _add_policy_flags(parser):
    parser.add_argument("--fasta", action="store_true",
                        help="drop '>' header lines before coding")
    parser.add_argument("--iupac-to-n", action="store_true",
                        help="map IUPAC ambiguity letters (R,Y,S,W,...) to N")
    parser.add_argument("--no-case-fold", action="store_true",
                        help="reject lowercase instead of folding it")


@contextlib.contextmanager
def _text_input(path):
    if path == STDIO:
        yield sys.stdin
    else:
        # latin-1 decodes any byte; junk is then reported with line and
        # column by the alphabet check instead of a bare decode error.
        with open(path, "r", encoding="latin-1", newline="") as handle:
            yield handle


@contextlib.contextmanager
def _binary_input(path):
    if path == STDIO:
        yield sys.stdin.buffer
    else:
        with open(path, "rb") as handle:
            yield handle


@contextlib.contextmanager
def _atomic_output(path, mode):
    """Write to a temp sibling and rename into place only on success."""
    if path == STDIO:
        yield sys.stdout.buffer if "b" in mode else sys.stdout
        if "b" in mode:
            sys.stdout.buffer.flush()
        else:
            sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(
        dir=directory, prefix=os.path.basename(path) + ".", suffix=".part"
    )
    try:
        with os.fdopen(fd, mode) as handle:
            yield handle
        os.replace(tmp_path, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp_path)
        raise


def _ratio_text(bases, size_bytes):
    return f"{8 * size_bytes / bases:.4f}" if bases else "n/a"


def _cmd_compress(args) -> int:
    policy = _policy_from(args)
    note = IngestNote()
    with _text_input(args.input) as src, _atomic_output(args.output, "wb") as sink:
        stats = compress(iter_normalized(src, policy, note), sink)
    print(
        f"compress: {stats.input_bases} bases ({stats.input_n_bases} N), "
        f"{stats.sections} sections, {stats.output_bytes} bytes, "
        f"{_ratio_text(stats.input_bases, stats.output_bytes)} bits/base, "
        f"{stats.elapsed * 1000:.1f} ms",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_decompress(args) -> int:
    with _binary_input(args.input) as src, _atomic_output(args.output, "w") as sink:
        writer = LineWriter(sink, args.line_width)
        stats = decompress(src, writer)
        writer.finish()
    print(
        f"decompress: {stats.input_bases} bases ({stats.input_n_bases} N), "
        f"{stats.sections} sections, {stats.output_bytes} bytes in, "
        f"{_ratio_text(stats.input_bases, stats.output_bytes)} bits/base, "
        f"{stats.elapsed * 1000:.1f} ms",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    with _binary_input(args.input) as src:
        report = verify(src, permissive=True)
    print(f"{args.input}: {report.summary()}")
    for issue in report.issues:
        print(f"  {issue}")
    return EXIT_OK if report.well_formed else EXIT_FORMAT


def _stats_payload(args) -> dict:
    start = perf_counter()
    if args.compressed:
        with _binary_input(args.input) as src:
            report = verify(src, permissive=False)
        bases = report.total_bases
        n_bases = report.n_bases
        sections = report.sections
        size = report.stream_bytes
    else:
        policy = _policy_from(args)
        with _text_input(args.input) as src:
            seq = ingest(src, policy)
        secs = sectionize(seq.symbols)
        bases = len(seq.symbols)
        n_bases = seq.symbols.count("N")
        sections = len(secs)
        size = compressed_size_bytes(secs)
    elapsed_ms = (perf_counter() - start) * 1000
    return {
        "bases": bases,
        "n_bases": n_bases,
        "sections": sections,
        "bytes": size,
        "bits_per_base": round(8 * size / bases, 4) if bases else None,
        "elapsed_ms": round(elapsed_ms, 3),
    }


def _cmd_stats(args) -> int:
    payload = _stats_payload(args)
    if args.format == "json":
        print(json.dumps(payload))
    elif args.format == "csv":
        keys = list(payload)
        print(",".join(keys))
        print(",".join("" if payload[k] is None else str(payload[k]) for k in keys))
    else:
        ratio = payload["bits_per_base"]
        print(
            f"{args.input}: {payload['bases']} bases ({payload['n_bases']} N), "
            f"{payload['sections']} sections, {payload['bytes']} bytes, "
            f"{'n/a' if ratio is None else format(ratio, '.4f')} bits/base, "
            f"{payload['elapsed_ms']:.1f} ms"
        )
    return EXIT_OK


def _cmd_bench(args) -> int:
    from . import bench

    report_dir = args.report_dir
    corpus_dir = args.corpus_dir
    if args.synthetic:
        corpus_dir = os.path.join(report_dir, "corpus")
        bench.generate_corpus(bench.reference_corpus_spec(seed=args.seed), corpus_dir)
    elif corpus_dir is None:
        raise _UsageError("bench needs a corpus directory or --synthetic")
    report = bench.run_bench(
        corpus_dir, repeats=args.repeats, external=args.external
    )
    paths = bench.write_report(report, report_dir, figures=not args.no_figures)
    print(bench.to_text(report))
    print(
        "report files: " + ", ".join(str(p) for p in paths.values()),
        file=sys.stderr,
    )
    return EXIT_OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="dfc",
        description="Fixed-width DNA sequence codec: 2 bits per base, "
        "N runs stored by count.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compress", help="encode a sequence file (.dfc by convention)")
    p.add_argument("input", help="sequence file, or - for stdin")
    p.add_argument("-o", "--output", required=True, help="output path, or - for stdout")
    _add_policy_flags(p)
    p.set_defaults(handler=_cmd_compress)

    p = sub.add_parser("decompress", help="decode a compressed file back to symbols")
    p.add_argument("input", help="compressed file, or - for stdin")
    p.add_argument("-o", "--output", required=True, help="output path, or - for stdout")
    p.add_argument("--line-width", type=int, metavar="N",
                   help="wrap output lines every N symbols")
    p.set_defaults(handler=_cmd_decompress)

    p = sub.add_parser("verify", help="check structure of a compressed file")
    p.add_argument("input", help="compressed file, or - for stdin")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("stats", help="report size and predicted ratio for a file")
    p.add_argument("input", help="sequence file (or compressed file with --compressed)")
    p.add_argument("--compressed", action="store_true",
                   help="input is already compressed; report its actual layout")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    _add_policy_flags(p)
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("bench", help="benchmark a corpus directory")
    p.add_argument("corpus_dir", nargs="?", help="directory of sequence files")
    p.add_argument("--synthetic", action="store_true",
                   help="generate the built-in reference corpus and benchmark it")
    p.add_argument("--seed", type=int, default=1, help="seed for --synthetic")
    p.add_argument("--repeats", type=int, default=3,
                   help="timing repeats per file (median is reported)")
    p.add_argument("--external", metavar="CMD",
                   help="external compressor command; gets the input path "
                        "appended (or at {input}) and must write to stdout")
    p.add_argument("--report-dir", default="bench-report",
                   help="where report files and figures go")
    p.add_argument("--no-figures", action="store_true",
                   help="skip rendering figures")
    p.set_defaults(handler=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    where = getattr(args, "input", None) or getattr(args, "corpus_dir", None) or ""
    prefix = f"dfc: {where}: " if where else "dfc: "
    try:
        return args.handler(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except BrokenPipeError:
        # Keep interpreter shutdown from re-raising on the final flush.
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_IO
    except (IngestError, InvalidSymbolError) as exc:
        print(prefix + str(exc), file=sys.stderr)
        return EXIT_SYMBOL
    except StreamFormatError as exc:
        print(prefix + str(exc), file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"dfc: {exc}", file=sys.stderr)
        return EXIT_IO
    except CodecError as exc:
        print(prefix + str(exc), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
