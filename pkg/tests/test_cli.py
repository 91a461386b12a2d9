import json
import subprocess
import sys

import numpy as np
import pytest

from gammatrix import cli


def write(path, values, header=True):
    lines = ([f"# n={len(values)}"] if header else []) + [repr(float(v)) for v in values]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def load_json(path):
    return json.loads(open(path).read())


def strip_timings(doc):
    return {k: v for k, v in doc.items() if k != "timings"}


def test_read_vector(tmp_path):
    p = write(tmp_path / "v.txt", [1, 2, 3])
    np.testing.assert_array_equal(cli.read_vector(p), [1, 2, 3])
    (tmp_path / "bad.txt").write_text("# n=4\n1\n2\n")
    with pytest.raises(cli.CliError) as info:
        cli.read_vector(str(tmp_path / "bad.txt"))
    assert info.value.code == 1


def test_transform_ones(tmp_path, capsys):
    src = write(tmp_path / "ones.txt", np.ones(8))
    out = str(tmp_path / "y.txt")
    assert cli.main(["transform", "--op", "idsct", "--in", src, "--out", out]) == 0
    y = cli.read_vector(out)
    assert y[0] == pytest.approx(np.sqrt(8))
    np.testing.assert_allclose(y[1:], 0, atol=1e-12)


def test_transform_round_trip(tmp_path, rng):
    x = rng.standard_normal(64)
    src = write(tmp_path / "x.txt", x)
    mid, back = str(tmp_path / "m.txt"), str(tmp_path / "b.txt")
    assert cli.main(["transform", "--op", "idsct", "--in", src, "--out", mid]) == 0
    assert cli.main(["transform", "--op", "dsct", "--in", mid, "--out", back]) == 0
    np.testing.assert_allclose(cli.read_vector(back), x, atol=1e-10)


def test_transform_counts(tmp_path, capsys, rng):
    src = write(tmp_path / "x.txt", rng.standard_normal(64))
    assert cli.main(["transform", "--op", "idsct", "--in", src, "--out", str(tmp_path / "y.txt"), "--counts"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["counts"]["measured"]["stages"]["cs"] == [257, 126]
    assert doc["counts"]["predicted"]["cs"] == [257, 126]
    assert doc["counts"]["measured"]["stages"]["sn"] == doc["counts"]["predicted"]["sn"]
    assert set(doc["counts"]["predicted"]["matvec_additions_leading_order"]) == {"7/4 n log2 n", "5 n log2 n"}


def test_transform_errors(tmp_path):
    assert cli.main(["transform", "--op", "idsct", "--in", str(tmp_path / "nope"), "--out", "x"]) == 1
    src = write(tmp_path / "x.txt", np.ones(6))
    assert cli.main(["transform", "--op", "idsct", "--in", src, "--out", str(tmp_path / "y")]) == 2
    assert cli.main(["transform", "--op", "bogus", "--in", src, "--out", "y"]) == 2


def test_verify_counts(capsys):
    assert cli.main(["verify-counts", "--max-n", "4"]) == 0
    out = capsys.readouterr().out
    assert "5          2          0          1  pass" in out
    assert cli.main(["verify-counts", "--max-n", "4096"]) == 0
    assert cli.main(["verify-counts", "--max-n", "100"]) == 2


def test_verify_counts_mismatch(monkeypatch, capsys):
    monkeypatch.setattr(cli.tr, "predicted_counts_sn", lambda n: (0, 0))
    assert cli.main(["verify-counts", "--max-n", "16"]) == 3
    assert "MISMATCH" in capsys.readouterr().out


def test_precond(tmp_path):
    src = write(tmp_path / "t.txt", np.eye(8)[0])
    out = str(tmp_path / "p.json")
    assert cli.main(["precond", "--toeplitz", src, "--out", out]) == 0
    doc = load_json(out)
    assert doc["c"] == list(np.eye(8)[0]) and doc["b"] == [0.0] * 8

    src = write(tmp_path / "g.txt", 0.5 ** np.arange(32))
    assert cli.main(["precond", "--toeplitz", src, "--out", out, "--oracle-check"]) == 0
    assert load_json(out)["oracle"]["max_deviation"] <= 1e-9

    (tmp_path / "bad.txt").write_text("1\nfoo\n")
    assert cli.main(["precond", "--toeplitz", str(tmp_path / "bad.txt"), "--out", out]) == 1


def test_precond_oracle_deviation(tmp_path, monkeypatch, capsys):
    from gammatrix import toeplitz

    src = write(tmp_path / "t.txt", np.arange(8.0, 0, -1))
    real = toeplitz.reverse_row
    monkeypatch.setattr(toeplitz, "reverse_row", lambda t, variant="derived": real(t) + _bump(len(t)))
    assert cli.main(["precond", "--toeplitz", src, "--out", str(tmp_path / "p.json"), "--oracle-check"]) == 4
    assert "oracle" in capsys.readouterr().err


def _bump(n):
    # symmetric and satisfying both zero-sum identities, so it passes validation
    v = np.zeros(n)
    v[1] = v[n - 1] = 1e-6
    v[3] = v[n - 3] = -1e-6
    return v


def test_spectrum(tmp_path):
    out = str(tmp_path / "s.json")
    src = write(tmp_path / "t.txt", [3.0, 1, 0, 0, 0, 0, 0, 1])
    assert cli.main(["spectrum", "--toeplitz", src, "--epsilon", "0.1", "--out", out]) == 0
    assert load_json(out)["outliers"] == 0
    assert cli.main(["spectrum", "--toeplitz", src, "--epsilon", "0", "--out", out]) == 2
    assert cli.main(["spectrum", "--toeplitz", src, "--epsilon", "-1", "--out", out]) == 2


def test_spectrum_laplacian_matches_dense(tmp_path):
    from gammatrix import toeplitz as tp

    n = 256
    src = write(tmp_path / "t.txt", np.r_[2.0, 1.0, np.zeros(n - 2)])
    out = str(tmp_path / "s.json")
    assert cli.main(["spectrum", "--toeplitz", src, "--epsilon", "0.1", "--out", out]) == 0
    T = tp.toeplitz_from_generator([2, 1], n)
    G = tp.gamma_approx(T)
    dense = np.linalg.eigvals(np.linalg.solve(G.dense(), T.dense())).real
    assert load_json(out)["outliers"] == tp.count_outliers(dense, 0.1)


def test_spectrum_singular_preconditioner(tmp_path):
    # t = (1, 1, 1, 1) approximates to the all-ones matrix, which is singular
    src = write(tmp_path / "t.txt", np.ones(4))
    assert cli.main(["spectrum", "--toeplitz", src, "--epsilon", "0.1", "--out", str(tmp_path / "s.json")]) == 4


def test_solve(tmp_path, rng):
    out = str(tmp_path / "o.json")
    t = write(tmp_path / "t.txt", np.eye(8)[0])
    r = write(tmp_path / "r.txt", rng.standard_normal(8))
    assert cli.main(["solve", "--toeplitz", t, "--rhs", r, "--tol", "1e-10", "--maxit", "10", "--out", out]) == 0
    assert load_json(out)["iterations"] == 1
    assert cli.main(["solve", "--toeplitz", t, "--rhs", r, "--maxit", "0", "--out", out]) == 5
    r4 = write(tmp_path / "r4.txt", np.ones(4))
    assert cli.main(["solve", "--toeplitz", t, "--rhs", r4, "--out", out]) == 2


def test_solve_preconditioned_fewer_iterations(tmp_path, rng):
    n = 256
    t = write(tmp_path / "t.txt", np.r_[2.0, 1.0, np.zeros(n - 2)])
    r = write(tmp_path / "r.txt", rng.standard_normal(n))
    a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert cli.main(["solve", "--toeplitz", t, "--rhs", r, "--maxit", "2000", "--out", a]) == 0
    assert cli.main(["solve", "--toeplitz", t, "--rhs", r, "--maxit", "2000", "--no-precond", "--out", b]) == 0
    assert load_json(a)["iterations"] < load_json(b)["iterations"]


def test_deterministic_reports(tmp_path):
    r1, r2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    assert cli.main(["--seed", "7", "verify-counts", "--max-n", "256", "--report", r1]) == 0
    assert cli.main(["--seed", "7", "verify-counts", "--max-n", "256", "--report", r2]) == 0
    assert open(r1).read() == open(r2).read()


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("GAMMA_SEED", "42")
    assert cli.build_parser().parse_args(["verify-counts", "--max-n", "4"]).seed == 42


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "gammatrix", "verify-counts", "--max-n", "8"], capture_output=True, text=True)
    assert proc.returncode == 0 and "pass" in proc.stdout
