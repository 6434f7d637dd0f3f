import io
import json
import subprocess
import sys

import pytest

from dfc import compress
from dfc.cli import main

ATGC_STREAM = bytes.fromhex("00000000040000001b")


def run_cli(*argv):
    return main(list(argv))


def packed_bytes(seq):
    sink = io.BytesIO()
    compress(seq, sink)
    return sink.getvalue()


@pytest.fixture
def seq_file(tmp_path):
    path = tmp_path / "input.seq"
    path.write_text("NNACGT\nACGTNN\n")
    return path


# -- compress / decompress ----------------------------------------------------

def test_compress_writes_exact_stream(tmp_path, seq_file, capsys):
    out = tmp_path / "out.dfc"
    assert run_cli("compress", str(seq_file), "-o", str(out)) == 0
    assert out.read_bytes() == packed_bytes("NNACGTACGTNN")
    summary = capsys.readouterr().err
    assert "bits/base" in summary and "sections" in summary


def test_roundtrip_via_cli(tmp_path, seq_file):
    packed = tmp_path / "out.dfc"
    restored = tmp_path / "restored.seq"
    assert run_cli("compress", str(seq_file), "-o", str(packed)) == 0
    assert run_cli("decompress", str(packed), "-o", str(restored)) == 0
    assert restored.read_text() == "NNACGTACGTNN"


def test_decompress_line_width(tmp_path, seq_file):
    packed = tmp_path / "out.dfc"
    wrapped = tmp_path / "wrapped.seq"
    run_cli("compress", str(seq_file), "-o", str(packed))
    assert run_cli("decompress", str(packed), "-o", str(wrapped),
                   "--line-width", "5") == 0
    text = wrapped.read_text()
    assert text == "NNACG\nTACGT\nNN\n"


def test_compress_fasta_flag(tmp_path):
    fasta = tmp_path / "in.fa"
    fasta.write_text(">rec one\nacgt\n>rec two\nNNNN\n")
    out = tmp_path / "out.dfc"
    assert run_cli("compress", str(fasta), "-o", str(out), "--fasta") == 0
    assert out.read_bytes() == packed_bytes("ACGTNNNN")


def test_compress_iupac_flag(tmp_path):
    path = tmp_path / "in.seq"
    path.write_text("ACRYGT\n")
    out = tmp_path / "out.dfc"
    assert run_cli("compress", str(path), "-o", str(out), "--iupac-to-n") == 0
    assert out.read_bytes() == packed_bytes("ACNNGT")


def test_compress_reference_length_summary(tmp_path, capsys):
    path = tmp_path / "ref.seq"
    path.write_text("ACGT" * 30256)  # 121024 bases, N-free
    out = tmp_path / "ref.dfc"
    assert run_cli("compress", str(path), "-o", str(out)) == 0
    assert out.stat().st_size == 30264
    assert "2.0005 bits/base" in capsys.readouterr().err


# -- exit codes -----------------------------------------------------------------

def test_exit_missing_input_is_io_error(tmp_path, capsys):
    code = run_cli("compress", str(tmp_path / "absent.seq"), "-o",
                   str(tmp_path / "x.dfc"))
    assert code == 1
    assert "absent.seq" in capsys.readouterr().err


def test_exit_invalid_symbol(tmp_path, capsys):
    bad = tmp_path / "bad.seq"
    bad.write_text("ACGTXACGT\n")
    code = run_cli("compress", str(bad), "-o", str(tmp_path / "x.dfc"))
    assert code == 3
    err = capsys.readouterr().err
    assert "bad.seq" in err and "'X'" in err


def test_exit_malformed_stream(tmp_path, capsys):
    broken = tmp_path / "broken.dfc"
    broken.write_bytes(ATGC_STREAM[:-1])
    code = run_cli("decompress", str(broken), "-o", str(tmp_path / "y.seq"))
    assert code == 2
    err = capsys.readouterr().err
    assert "broken.dfc" in err and "truncated" in err


def test_exit_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli("frobnicate")
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        run_cli("compress", "input-only")
    assert exc.value.code == 64


# -- atomic output ----------------------------------------------------------------

def test_failed_compress_leaves_no_partial_file(tmp_path, capsys):
    bad = tmp_path / "bad.seq"
    bad.write_text("ACGT" * 100 + "!" + "ACGT" * 100)
    out = tmp_path / "out.dfc"
    assert run_cli("compress", str(bad), "-o", str(out)) == 3
    assert not out.exists()
    assert list(tmp_path.glob("*.part")) == []


def test_failed_compress_preserves_existing_output(tmp_path):
    bad = tmp_path / "bad.seq"
    bad.write_text("ACGTQ\n")
    out = tmp_path / "out.dfc"
    out.write_bytes(b"keep me")
    assert run_cli("compress", str(bad), "-o", str(out)) == 3
    assert out.read_bytes() == b"keep me"


# -- verify ------------------------------------------------------------------------

def test_verify_ok(tmp_path, capsys):
    good = tmp_path / "good.dfc"
    good.write_bytes(ATGC_STREAM)
    assert run_cli("verify", str(good)) == 0
    out = capsys.readouterr().out
    assert "well-formed" in out and "1 sections" in out


def test_verify_truncated(tmp_path, capsys):
    broken = tmp_path / "broken.dfc"
    broken.write_bytes(ATGC_STREAM[:6])
    assert run_cli("verify", str(broken)) == 2
    out = capsys.readouterr().out
    assert "truncated" in out


def test_verify_non_canonical_padding_still_ok(tmp_path, capsys):
    blob = bytes.fromhex("0000000003000000") + b"\x1d"
    path = tmp_path / "pad.dfc"
    path.write_bytes(blob)
    assert run_cli("verify", str(path)) == 0
    assert "non-canonical" in capsys.readouterr().out


# -- stats ---------------------------------------------------------------------------

def test_stats_text_prediction(tmp_path, capsys):
    path = tmp_path / "seq.txt"
    path.write_text("A" * 9647)
    assert run_cli("stats", str(path)) == 0
    out = capsys.readouterr().out
    assert "2420 bytes" in out and "2.0068 bits/base" in out


def test_stats_all_n(tmp_path, capsys):
    path = tmp_path / "n.txt"
    path.write_text("NNNN")
    assert run_cli("stats", str(path)) == 0
    out = capsys.readouterr().out
    assert "4 bases (4 N)" in out and "1 sections" in out
    assert "8 bytes" in out and "16.0000 bits/base" in out


def test_stats_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("")
    assert run_cli("stats", str(path)) == 0
    out = capsys.readouterr().out
    assert "0 bases" in out and "n/a" in out


def test_stats_json_keys(tmp_path, capsys):
    path = tmp_path / "seq.txt"
    path.write_text("ACGTN")
    assert run_cli("stats", str(path), "--format", "json") == 0
    payload = json.loads(capsys.readouterr().out)
    assert list(payload) == ["bases", "n_bases", "sections", "bytes",
                             "bits_per_base", "elapsed_ms"]
    assert payload["bases"] == 5
    assert payload["n_bases"] == 1
    assert payload["sections"] == 2


def test_stats_json_null_ratio_for_empty(tmp_path, capsys):
    path = tmp_path / "empty.txt"
    path.write_text("")
    run_cli("stats", str(path), "--format", "json")
    assert json.loads(capsys.readouterr().out)["bits_per_base"] is None


def test_stats_csv(tmp_path, capsys):
    path = tmp_path / "seq.txt"
    path.write_text("ACGT")
    assert run_cli("stats", str(path), "--format", "csv") == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    assert header == "bases,n_bases,sections,bytes,bits_per_base,elapsed_ms"
    assert row.startswith("4,0,1,9,18.0,")


def test_stats_compressed_mode(tmp_path, capsys):
    packed = tmp_path / "x.dfc"
    packed.write_bytes(packed_bytes("NNACGTACGTNN"))
    assert run_cli("stats", str(packed), "--compressed", "--format", "json") == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["bases"] == 12
    assert payload["n_bases"] == 4
    assert payload["bytes"] == len(packed_bytes("NNACGTACGTNN"))


# -- bench -------------------------------------------------------------------------

def test_bench_command_writes_reports(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.seq").write_text("ACGT" * 300 + "\n")
    (corpus / "b.seq").write_text("NN" + "ACGT" * 10 + "\n")
    report_dir = tmp_path / "report"
    code = run_cli("bench", str(corpus), "--repeats", "1",
                   "--report-dir", str(report_dir), "--no-figures")
    assert code == 0
    assert (report_dir / "report.csv").exists()
    assert (report_dir / "report.md").exists()
    assert (report_dir / "report.txt").exists()
    out = capsys.readouterr().out
    assert "a.seq" in out and "b.seq" in out and "average" in out


def test_bench_requires_corpus_or_synthetic(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run_cli("bench", "--repeats", "1", "--report-dir", str(tmp_path / "r"))
    assert exc.value.code == 64


# -- stdio mode (real subprocesses) ----------------------------------------------------

def _pipe(args, data):
    return subprocess.run(
        [sys.executable, "-m", "dfc", *args],
        input=data, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
    )


def test_stdin_stdout_match_file_mode(tmp_path):
    raw = b"NNACGT\nACGTNN\n"
    proc = _pipe(["compress", "-", "-o", "-"], raw)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout == packed_bytes("NNACGTACGTNN")

    back = _pipe(["decompress", "-", "-o", "-"], proc.stdout)
    assert back.returncode == 0, back.stderr
    assert back.stdout == b"NNACGTACGTNN"


def test_stdin_verify_exit_codes():
    ok = _pipe(["verify", "-"], ATGC_STREAM)
    assert ok.returncode == 0
    bad = _pipe(["verify", "-"], ATGC_STREAM[:4])
    assert bad.returncode == 2


def test_console_usage_exit_code_subprocess():
    proc = _pipe(["compress"], b"")
    assert proc.returncode == 64
