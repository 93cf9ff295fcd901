import io
import json

import pytest

from twodom.cli import InputError, RunConfig, main, run
from twodom.construct import random_member
from twodom.tree import encode_graph6, path_tree

P4 = encode_graph6(path_tree(4))
P5 = encode_graph6(path_tree(5))
P6 = encode_graph6(path_tree(6))


def call(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_compute_p4(capsys):
    code, out = call(["compute", P4], capsys)
    assert code == 0
    assert out.out == f"{P4}\t3\t3\ttrue\n"


def test_compute_brute_and_json(capsys):
    code, out = call(["compute", P5, "--brute", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out.out) == {"graph6": P5, "gamma2": 3, "alpha2": 4, "equal": False}


def test_recognize_p5_rejected(capsys, tmp_path):
    certs = tmp_path / "certs.jsonl"
    code, out = call(["recognize", P5, P6, "--cert-out", str(certs)], capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0].split("\t")[1:] == ["3", "4", "false"]
    assert lines[1].split("\t")[1:] == ["4", "4", "true"]
    assert len(certs.read_text().splitlines()) == 1


def test_verify_cert(capsys, tmp_path):
    certs = tmp_path / "c.json"
    call(["recognize", P6, "--cert-out", str(certs)], capsys)
    code, out = call(["verify-cert", P6, P5, "--cert", str(certs)], capsys)
    assert code == 0
    rows = [line.split("\t") for line in out.out.splitlines()]
    assert rows[0][1:] == ["true", "-", "-"]
    assert rows[1][1:3] == ["false", "Mismatch"]


def test_verify_cert_missing_file(capsys, tmp_path):
    code, out = call(["verify-cert", P6, "--cert", str(tmp_path / "nope.json")], capsys)
    assert code == 1 and "certificate" in out.err


def test_generate_is_byte_stable(capsys):
    _, a = call(["generate", "--seed", "9", "--steps", "4", "--count", "3"], capsys)
    _, b = call(["generate", "--seed", "9", "--steps", "4", "--count", "3"], capsys)
    assert a.out == b.out and len(a.out.splitlines()) == 3
    t, _ = random_member(9, 4)
    assert a.out.split("\t")[0] == encode_graph6(t)


def test_sweep_small(capsys):
    code, out = call(["sweep", "--max-n", "4"], capsys)
    assert code == 0
    assert out.out.splitlines() == ["1\t1\t1\ttrue", "2\t1\t1\ttrue", "3\t1\t1\ttrue", "4\t2\t2\ttrue"]


def test_sweep_parallel_matches_serial(capsys):
    _, serial = call(["sweep", "--max-n", "9"], capsys)
    _, par = call(["sweep", "--max-n", "9", "--jobs", "2"], capsys)
    assert serial.out == par.out


def test_sweep_jobs_from_env(capsys, monkeypatch):
    monkeypatch.setenv("TWODOM_JOBS", "0")
    code, out = call(["sweep", "--max-n", "3"], capsys)
    assert code == 1 and "jobs" in out.err


def test_sweep_cap(capsys):
    code, out = call(["sweep", "--max-n", "19"], capsys)
    assert code == 1


def test_sweep_mismatch_exit(monkeypatch):
    import twodom.cli as cli

    monkeypatch.setattr(cli, "_sweep_part", lambda args: (1, 0, [("@", 1, 1, False)]))
    buf = io.StringIO()
    assert run(RunConfig("sweep", max_n=1), buf) == 2
    assert "mismatch" in buf.getvalue()


def test_patterns_selfcheck(capsys):
    code, out = call(["patterns-selfcheck"], capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0].startswith("id\t")
    assert len(lines) == 1 + 25 + 1
    assert lines[-1] == "discrepancy\tB7\tdiamonds=3\talpha2=4"


def test_patterns_selfcheck_failure(monkeypatch):
    import twodom.cli as cli
    from twodom.errors import SelfCheckFailed

    def boom():
        raise SelfCheckFailed("T3", "squares are not 2-dominating")

    monkeypatch.setattr(cli.pt, "load_registry", boom)
    buf = io.StringIO()
    assert run(RunConfig("patterns-selfcheck"), buf) == 2
    assert buf.getvalue().startswith("FAIL\tT3")


@pytest.mark.parametrize("argv", [["compute"], ["compute", "Bw"], ["compute", "~~"], ["compute", "--input", "/nonexistent"]])
def test_invalid_input_exit_1(argv, capsys):
    code, out = call(argv, capsys)
    assert code == 1 and out.err.startswith("twodom:")


def test_input_file(tmp_path, capsys):
    f = tmp_path / "trees.g6"
    f.write_text(f"# comment\n{P4}\n\n{P5}\n")
    code, out = call(["compute", "--input", str(f)], capsys)
    assert code == 0 and len(out.out.splitlines()) == 2


def test_brute_cap(capsys):
    code, out = call(["compute", encode_graph6(path_tree(23)), "--brute"], capsys)
    assert code == 1


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("bogus")
    with pytest.raises(InputError):
        RunConfig("compute", fmt="xml")
