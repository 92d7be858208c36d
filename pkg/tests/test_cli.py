import io
import json

import numpy as np
import pytest

from markovlab.cli import load_config, main
from markovlab.serialize import read_csv


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_measure_csv(path, atoms, weights):
    lines = ["index,atom_or_a,weight_or_b"]
    for i, (a, w) in enumerate(zip(atoms, weights)):
        lines.append(f"{i},{a},{w}")
    path.write_text("\n".join(lines) + "\n")


def write_pair_csv(path, a, b):
    lines = ["index,atom_or_a,weight_or_b"]
    for i, ai in enumerate(a):
        bi = b[i] if i < len(b) else ""
        lines.append(f"{i},{ai},{bi}")
    path.write_text("\n".join(lines) + "\n")


def test_markov_fwd_two_atoms(tmp_path, capsys):
    src = tmp_path / "pair.csv"
    write_pair_csv(src, [-1.0, 1.0], [0.0])
    out = tmp_path / "mu.csv"
    code, _, _ = run(capsys, "markov", "fwd", "--in", str(src), "--out", str(out))
    assert code == 0
    _, rows, meta = read_csv(out)
    assert [float(r["weight_or_b"]) for r in rows] == [0.5, 0.5]
    assert "version" in meta


def test_markov_inv_then_fwd_roundtrip(tmp_path, capsys):
    src = tmp_path / "mu.csv"
    write_measure_csv(src, [-1.0, 0.5, 2.0], [0.25, 0.25, 0.5])
    mid = tmp_path / "pair.csv"
    assert run(capsys, "markov", "inv", "--in", str(src), "--out", str(mid))[0] == 0
    back = tmp_path / "mu2.csv"
    assert run(capsys, "markov", "fwd", "--in", str(mid), "--out", str(back))[0] == 0
    _, rows, _ = read_csv(back)
    weights = [float(r["weight_or_b"]) for r in rows]
    assert np.allclose(weights, [0.25, 0.25, 0.5], atol=1e-10)


def test_markov_bad_input_exits_2(tmp_path, capsys):
    src = tmp_path / "bad.csv"
    write_measure_csv(src, [0.0, 1.0], [0.9, 0.9])  # weights do not sum to 1
    code, _, err = run(capsys, "markov", "inv", "--in", str(src))
    assert code == 2
    assert "error:" in err
    code, _, err = run(capsys, "markov", "inv", "--in", str(tmp_path / "none.csv"))
    assert code == 2


def test_sample_de_csv(tmp_path, capsys):
    out = tmp_path / "j.csv"
    code, _, _ = run(
        capsys, "sample", "de", "--n", "6", "--seed", "4", "--out", str(out)
    )
    assert code == 0
    header, rows, meta = read_csv(out)
    assert header == ["i", "a_i", "b_i"]
    assert len(rows) == 6
    assert rows[-1]["b_i"] == ""
    assert meta["seed"] == "4"


def test_sample_reruns_are_byte_identical(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for path in (a, b):
        run(capsys, "sample", "gue", "--n", "8", "--seed", "2", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_grow_chain(tmp_path, capsys):
    out = tmp_path / "chain.csv"
    code, _, _ = run(
        capsys, "grow", "--n", "6", "--chain", "--seed", "1", "--out", str(out)
    )
    assert code == 0
    _, rows, _ = read_csv(out)
    assert len(rows) == 7
    assert rows[0]["partition"] == ""
    assert sum(int(x) for x in rows[-1]["partition"].split(",")) == 6


def test_diagrams_partition_grid(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, _, _ = run(
        capsys,
        "diagrams",
        "--partition", "2,1",
        "--grid=-4:4:9",
        "--out", str(out),
    )
    assert code == 0
    header, rows, _ = read_csv(out)
    assert header == ["x", "omega", "varpi", "limit"]
    assert len(rows) == 9
    assert float(rows[0]["limit"]) == 4.0
    assert rows[0]["varpi"] == ""


def test_diagrams_ensemble_checks_pass(tmp_path, capsys):
    out = tmp_path / "d.csv"
    code, stdout, _ = run(
        capsys, "diagrams", "--ensemble", "gue", "--n", "60", "--seed", "3",
        "--out", str(out),
    )
    assert code == 0
    assert "PASS sup_distance_submatrix_diagram" in stdout
    assert "PASS sup_distance_critical_diagram" in stdout


def test_clt_csv_output(tmp_path, capsys):
    out = tmp_path / "clt.csv"
    code, _, _ = run(
        capsys,
        "clt", "--ensemble", "unimodular", "--n", "40", "--M", "150",
        "--kmax", "3", "--seed", "5", "--out", str(out),
    )
    # exit code reports the variance checks, which need large M to settle
    assert code in (0, 1)
    header, rows, _ = read_csv(out)
    assert header == [
        "ensemble", "k", "n", "M", "mean", "var", "var_lo", "var_hi",
        "target", "pass",
    ]
    assert [r["k"] for r in rows] == ["1", "2", "3"]
    assert rows[0]["ensemble"] == "unimodular-trace"
    # k = 1 and k = 2 statistics are deterministic
    assert float(rows[0]["var"]) < 1e-20
    assert float(rows[1]["var"]) < 1e-20


def test_clt_unknown_ensemble(capsys):
    with pytest.raises(SystemExit):
        main(["clt", "--ensemble", "nope"])


def test_verify_all_passes(capsys):
    code, stdout, _ = run(capsys, "verify", "--suite", "all")
    assert code == 0
    assert "FAIL" not in stdout
    assert "PASS trace_vs_transition" in stdout
    assert "PASS bass_series" in stdout


def test_verify_single_suite_json(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, stdout, _ = run(
        capsys,
        "verify", "--suite", "jm-path", "--l", "2", "--m", "3",
        "--format", "json", "--out", str(out),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "verify"
    assert [c["name"] for c in doc["checks"]] == ["jm_path_l2_m3"]
    assert "PASS jm_path_l2_m3" in stdout


def test_linearize_passes(tmp_path, capsys):
    out = tmp_path / "lin.csv"
    code, stdout, _ = run(
        capsys, "linearize", "--nodes", "100", "--out", str(out)
    )
    assert code == 0
    _, rows, _ = read_csv(out)
    assert {r["direction"] for r in rows} == {"c2", "c3"}
    assert "PASS linearize_residual_c2" in stdout
    assert "PASS linearize_shrink_c3" in stdout


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=5\nseed=9  # trailing comment\n")
    out = tmp_path / "j.csv"
    code, _, _ = run(
        capsys, "sample", "de", "--config", str(cfg), "--out", str(out)
    )
    assert code == 0
    _, rows, meta = read_csv(out)
    assert len(rows) == 5
    assert meta["seed"] == "9"
    # explicit flag beats the config value
    code, _, _ = run(
        capsys, "sample", "de", "--config", str(cfg), "--n", "3", "--out", str(out)
    )
    _, rows, _ = read_csv(out)
    assert len(rows) == 3


def test_load_config_rejects_bad_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just-a-token\n")
    with pytest.raises(ValueError):
        load_config(str(cfg))


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
