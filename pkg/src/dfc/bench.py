"""Corpus benchmark harness: per-file ratio and timing reports.

run_bench compresses every file in a directory to a temp file, times
encode and decode (median of repeats), confirms the round trip and the
analytic size prediction, and can shell out to an external compressor
for comparison columns. Reports are emitted as text, CSV, and markdown,
plus rendered figures; the CSV column set is fixed so downstream
tooling can rely on it.

A synthetic corpus generator is included because the ratio of N-free
input depends only on its length: files matching well-known benchmark
sequence lengths reproduce the reference ratios without shipping any
sequence data.
"""

import statistics
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from io import BytesIO, StringIO
from pathlib import Path
from time import perf_counter
from typing import Optional, Sequence

import numpy as np

from .codec import compress, decompress
from .errors import CodecError
from .sections import compressed_size_bytes, sectionize
from .seqio import IngestPolicy, ingest

CSV_HEADER = ("name,bases,n_bases,sections,bytes,bits_per_base,"
              "encode_ms,decode_ms,ext_bits_per_base,ext_ms")

_ACGT = np.frombuffer(b"ACGT", dtype=np.uint8)


class BenchError(CodecError):
    """The harness refuses to report numbers for a broken run."""


@dataclass(frozen=True)
class NRun:
    """An N run to splice into a synthetic sequence."""

    position: int
    length: int


def leading(length: int) -> tuple:
    return (NRun(0, length),)


def interior(length: int, at: int) -> tuple:
    return (NRun(at, length),)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    base_count: int
    n_runs: tuple = ()
    seed: int = 1


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    entries: tuple


# Lengths spanning 9.6 kb to 22.4 Mb; N-free, so each file's ratio is
# fixed by its length alone.
REFERENCE_LENGTHS = (9647, 121024, 155939, 229354, 22432531)


def reference_corpus_spec(seed: int = 1) -> SyntheticCorpusSpec:
    """The built-in N-free corpus used for ratio reproduction."""
    return SyntheticCorpusSpec(tuple(
        CorpusEntry(name=f"nfree_{length:08d}", base_count=length, seed=seed + i)
        for i, length in enumerate(REFERENCE_LENGTHS)
    ))


def generate_corpus(spec: SyntheticCorpusSpec, out_dir) -> list:
    """Write one .seq file per entry; deterministic for a given spec."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for entry in spec.entries:
        runs = sorted(entry.n_runs, key=lambda r: r.position)
        end = 0
        for run in runs:
            if run.position < end or run.length < 1:
                raise ValueError(f"{entry.name}: overlapping or empty N runs")
            if run.position + run.length > entry.base_count:
                raise ValueError(f"{entry.name}: N run past end of sequence")
            end = run.position + run.length
        rng = np.random.default_rng(entry.seed)
        symbols = _ACGT[rng.integers(0, 4, entry.base_count, dtype=np.uint8)]
        for run in runs:
            symbols[run.position:run.position + run.length] = ord("N")
        path = out / f"{entry.name}.seq"
        with open(path, "w", encoding="ascii") as handle:
            handle.write(symbols.tobytes().decode("ascii"))
            handle.write("\n")
        paths.append(path)
    return paths


@dataclass(frozen=True)
class BenchRow:
    name: str
    bases: int
    n_bases: int
    sections: int
    bytes: int
    bits_per_base: float
    encode_ms: float
    decode_ms: float
    ext_bits_per_base: Optional[float] = None
    ext_ms: Optional[float] = None


@dataclass(frozen=True)
class CorpusReport:
    rows: tuple
    repeats: int
    external: Optional[str] = None
    notes: tuple = ()

    @property
    def average_bits_per_base(self) -> Optional[float]:
        if not self.rows:
            return None
        return statistics.fmean(r.bits_per_base for r in self.rows)

    @property
    def average_ext_bits_per_base(self) -> Optional[float]:
        values = [r.ext_bits_per_base for r in self.rows
                  if r.ext_bits_per_base is not None]
        return statistics.fmean(values) if values else None


def _sniff_policy(path: Path) -> IngestPolicy:
    with open(path, "rb") as handle:
        first = handle.read(1)
    return IngestPolicy(fasta_mode=first == b">")


def _run_external(command: str, input_path: Path):
    """Time one external compressor run; returns (bytes, ms) or None."""
    parts = shlex.split(command)
    if any("{input}" in p for p in parts):
        parts = [p.replace("{input}", str(input_path)) for p in parts]
    else:
        parts.append(str(input_path))
    try:
        start = perf_counter()
        proc = subprocess.run(
            parts, stdout=subprocess.PIPE, stderr=subprocess.DEVNULL, check=True
        )
        elapsed = perf_counter() - start
    except (FileNotFoundError, subprocess.CalledProcessError):
        return None
    return len(proc.stdout), elapsed * 1000


def run_bench(corpus_dir, repeats: int = 3,
              external: Optional[str] = None) -> CorpusReport:
    """Benchmark every file in a directory.

    FASTA files are detected by their leading '>' and header-stripped.
    Round-trip or size-prediction mismatches abort the whole run: no
    numbers get reported for a broken codec.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    corpus = Path(corpus_dir)
    if not corpus.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus}")
    files = sorted(p for p in corpus.iterdir()
                   if p.is_file() and not p.name.startswith("."))
    rows = []
    notes = []
    external_available = external is not None
    for path in files:
        with open(path, "r", encoding="latin-1", newline="") as handle:
            seq = ingest(handle, _sniff_policy(path)).symbols
        sections = sectionize(seq)
        predicted = compressed_size_bytes(sections)

        with tempfile.TemporaryDirectory(prefix="dfc-bench-") as tmp:
            packed = Path(tmp) / (path.name + ".dfc")
            encode_times = []
            stats = None
            for _ in range(repeats):
                with open(packed, "wb") as sink:
                    stats = compress(seq, sink)
                encode_times.append(stats.elapsed * 1000)
            if stats.output_bytes != predicted:
                raise BenchError(
                    f"{path.name}: compressed size {stats.output_bytes} "
                    f"!= predicted {predicted}"
                )
            decode_times = []
            decoded = None
            for _ in range(repeats):
                buffer = StringIO()
                with open(packed, "rb") as src:
                    dstats = decompress(src, buffer)
                decode_times.append(dstats.elapsed * 1000)
                decoded = buffer.getvalue()
            if decoded != seq:
                raise BenchError(f"{path.name}: round trip mismatch")

        ext_ratio = ext_ms = None
        if external_available:
            result = _run_external(external, path)
            if result is None:
                external_available = False
                notes.append(f"external command unavailable: {external!r}")
            else:
                ext_bytes, ext_ms = result
                ext_ratio = 8 * ext_bytes / len(seq) if seq else None
        rows.append(BenchRow(
            name=path.name,
            bases=stats.input_bases,
            n_bases=stats.input_n_bases,
            sections=stats.sections,
            bytes=stats.output_bytes,
            bits_per_base=stats.bits_per_base if seq else 0.0,
            encode_ms=statistics.median(encode_times),
            decode_ms=statistics.median(decode_times),
            ext_bits_per_base=ext_ratio,
            ext_ms=ext_ms,
        ))
    return CorpusReport(rows=tuple(rows), repeats=repeats,
                        external=external, notes=tuple(notes))


def _fmt(value, pattern="{:.4f}") -> str:
    return "" if value is None else pattern.format(value)


def to_csv(report: CorpusReport) -> str:
    lines = [CSV_HEADER]
    for r in report.rows:
        lines.append(
            f"{r.name},{r.bases},{r.n_bases},{r.sections},{r.bytes},"
            f"{r.bits_per_base:.4f},{r.encode_ms:.3f},{r.decode_ms:.3f},"
            f"{_fmt(r.ext_bits_per_base)},{_fmt(r.ext_ms, '{:.3f}')}"
        )
    if report.rows:
        lines.append(
            f"average,,,,,{report.average_bits_per_base:.4f},,,"
            f"{_fmt(report.average_ext_bits_per_base)},"
        )
    return "\n".join(lines) + "\n"


def to_markdown(report: CorpusReport) -> str:
    out = ["## Compression ratio (bits/base)", ""]
    header = "| sequence | size | ours |"
    rule = "| --- | --- | --- |"
    if report.external:
        header += " external |"
        rule += " --- |"
    out += [header, rule]
    for r in report.rows:
        line = f"| {r.name} | {r.bases} | {r.bits_per_base:.4f} |"
        if report.external:
            line += f" {_fmt(r.ext_bits_per_base) or 'n/a'} |"
        out.append(line)
    if report.rows:
        line = f"| average | -- | {report.average_bits_per_base:.4f} |"
        if report.external:
            line += f" {_fmt(report.average_ext_bits_per_base) or 'n/a'} |"
        out.append(line)
    out += ["", f"## Running time (ms, median of {report.repeats})", ""]
    header = "| sequence | encode | decode |"
    rule = "| --- | --- | --- |"
    if report.external:
        header += " external |"
        rule += " --- |"
    out += [header, rule]
    for r in report.rows:
        line = f"| {r.name} | {r.encode_ms:.3f} | {r.decode_ms:.3f} |"
        if report.external:
            line += f" {_fmt(r.ext_ms, '{:.3f}') or 'n/a'} |"
        out.append(line)
    for note in report.notes:
        out += ["", f"note: {note}"]
    return "\n".join(out) + "\n"


def to_text(report: CorpusReport) -> str:
    if not report.rows:
        return "empty corpus: nothing to report\n"
    name_w = max([len(r.name) for r in report.rows] + [len("average")])
    lines = [
        f"{'sequence':<{name_w}}  {'bases':>10}  {'bytes':>10}  "
        f"{'bits/base':>9}  {'encode ms':>10}  {'decode ms':>10}"
    ]
    for r in report.rows:
        lines.append(
            f"{r.name:<{name_w}}  {r.bases:>10}  {r.bytes:>10}  "
            f"{r.bits_per_base:>9.4f}  {r.encode_ms:>10.3f}  {r.decode_ms:>10.3f}"
        )
    lines.append(
        f"{'average':<{name_w}}  {'':>10}  {'':>10}  "
        f"{report.average_bits_per_base:>9.4f}  {'':>10}  {'':>10}"
    )
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def write_report(report: CorpusReport, out_dir, figures: bool = True) -> dict:
    """Write text, CSV, and markdown reports (and figures) to a directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "text": out / "report.txt",
        "csv": out / "report.csv",
        "markdown": out / "report.md",
    }
    paths["text"].write_text(to_text(report), encoding="ascii")
    paths["csv"].write_text(to_csv(report), encoding="ascii")
    paths["markdown"].write_text(to_markdown(report), encoding="ascii")
    if figures and report.rows:
        from . import figures as fig

        for key, path in fig.render_report_figures(report, out).items():
            paths[key] = path
    return paths


@dataclass(frozen=True)
class ScalingResult:
    """Throughput ladder: (bases, encode_s, decode_s) rows and fits."""

    rows: tuple
    encode_slope: float
    decode_slope: float


def scaling_check(lengths: Sequence[int] = (1402033, 5608132, 22432531),
                  repeats: int = 3, seed: int = 0) -> ScalingResult:
    """Time encode/decode over a length ladder and fit log-log slopes.

    Runs fully in memory so the fit sees codec time, not disk time.
    A slope near 1.0 means linear scaling.
    """
    if len(lengths) < 2:
        raise ValueError("need at least two ladder lengths to fit a slope")
    rows = []
    for i, length in enumerate(lengths):
        rng = np.random.default_rng(seed + i)
        seq = _ACGT[rng.integers(0, 4, length, dtype=np.uint8)].tobytes().decode("ascii")
        # One untimed pass absorbs warm-up costs (allocator, caches)
        # that would otherwise inflate the smallest rung.
        warmup = BytesIO()
        compress(seq, warmup)
        packed = warmup.getvalue()
        decompress(BytesIO(packed), StringIO())
        encode_times = []
        decode_times = []
        for _ in range(repeats):
            stats = compress(seq, BytesIO())
            encode_times.append(stats.elapsed)
        for _ in range(repeats):
            dstats = decompress(BytesIO(packed), StringIO())
            decode_times.append(dstats.elapsed)
        rows.append((length, statistics.median(encode_times),
                     statistics.median(decode_times)))
    sizes = np.log([r[0] for r in rows])
    encode_slope = float(np.polyfit(sizes, np.log([r[1] for r in rows]), 1)[0])
    decode_slope = float(np.polyfit(sizes, np.log([r[2] for r in rows]), 1)[0])
    return ScalingResult(tuple(rows), encode_slope, decode_slope)
