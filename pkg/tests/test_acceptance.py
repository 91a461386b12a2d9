"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test prints a single ``[PASS]``/``[FAIL]`` line (shown even when
output is captured) before asserting.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import random_asymmetric, random_gamma, random_symmetric
from gammatrix import algebra as alg
from gammatrix import toeplitz as tp
from gammatrix import transforms as tr
from gammatrix.pcg import pcg
from gammatrix.spectral import build_q_dense

SEED = 8128


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            sys.stdout.write(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}\n")
        return ok

    return emit


def test_criterion_1_exact_counts(verdict):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    bad = []
    for r in range(2, 13):
        n = 2**r
        c1, c2 = tr.OpCounter(), tr.OpCounter()
        tr.cs(random_symmetric(rng, n), counter=c1)
        tr.sn(random_asymmetric(rng, n), counter=c2)
        if c1.as_tuple() != tr.predicted_counts_cs(n) or c2.as_tuple() != tr.predicted_counts_sn(n):
            bad.append((n, c1.as_tuple(), c2.as_tuple()))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    verdict(1, ok, f"CS/SN counts equal closed forms for n=4..4096 ({elapsed:.2f}s, mismatches={bad})")
    assert ok


def _corpus():
    rng = np.random.default_rng(SEED + 2)
    for r in range(2, 11):
        n = 2**r
        yield n, rng.standard_normal((n, 100))


def test_criterion_2_transform_oracle(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for n, x in _corpus():
        q = build_q_dense(n).matrix
        for fast, ref in ((tr.idsct(x), q.T @ x), (tr.dsct(x), q @ x)):
            rel = np.abs(fast - ref).max(axis=0) / np.abs(ref).max(axis=0)
            worst = max(worst, float(rel.max()))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 30.0
    verdict(2, ok, f"max relative deviation from dense Q products {worst:.2e} ({elapsed:.2f}s)")
    assert ok


def test_criterion_3_round_trip_energy(verdict):
    worst_rt = worst_en = 0.0
    for n, x in _corpus():
        y = tr.idsct(x)
        back = tr.dsct(y)
        worst_rt = max(worst_rt, float((np.abs(back - x).max(axis=0) / np.abs(x).max(axis=0)).max()))
        nx = np.linalg.norm(x, axis=0)
        worst_en = max(worst_en, float((np.abs(np.linalg.norm(y, axis=0) - nx) / nx).max()))
    ok = worst_rt <= 1e-10 and worst_en <= 1e-10
    verdict(3, ok, f"round trip {worst_rt:.2e}, energy {worst_en:.2e} (relative)")
    assert ok


def test_criterion_4_algebra_oracle(verdict):
    rng = np.random.default_rng(SEED + 4)
    worst_mv = worst_mm = 0.0
    class_failures = 0
    for n in (8, 16, 32):
        for _ in range(50):
            g1, g2 = random_gamma(rng, n), random_gamma(rng, n)
            x = rng.standard_normal(n)
            worst_mv = max(worst_mv, float(np.abs(alg.matvec(g1, x) - g1.dense() @ x).max()))
            worst_mm = max(worst_mm, float(np.abs(alg.matmul(g1, g2).dense() - g1.dense() @ g2.dense()).max()))
            b1, b2, c1 = random_gamma(rng, n, "B"), random_gamma(rng, n, "B"), random_gamma(rng, n, "C")
            class_failures += "C_n" not in alg.classify(alg.matmul(b1, b2))
            class_failures += "B_n" not in alg.classify(alg.matmul(c1, b1))
            class_failures += "B_n" not in alg.classify(alg.matmul(b2, c1))
    ok = worst_mv <= 1e-9 and worst_mm <= 1e-9 and class_failures == 0
    verdict(4, ok, f"matvec {worst_mv:.2e}, matmul {worst_mm:.2e}, class-rule violations {class_failures}")
    assert ok


def test_criterion_5_preconditioner_optimality(verdict):
    rng = np.random.default_rng(SEED + 5)
    worst = worst_stat = 0.0
    dump = None
    for n in (4, 8, 16, 32, 64, 5, 9):
        for _ in range(50):
            t = rng.standard_normal(n)
            g = tp.gamma_approx(t)
            o = tp.frobenius_projection_oracle(t)
            dev = max(float(np.abs(g.c - o.c).max()), float(np.abs(g.b - o.b).max()))
            if dev > worst:
                worst = dev
                if dev > 1e-9 and dump is None:
                    dump = {"n": n, "t": t.tolist(), "formula": [g.c.tolist(), g.b.tolist()], "oracle": [o.c.tolist(), o.b.tolist()]}
            worst_stat = max(worst_stat, max(abs(r) for r in tp.stationarity_residuals(g.b)))
    ok = worst <= 1e-9 and worst_stat <= 1e-10
    verdict(5, ok, f"formula vs projection oracle {worst:.2e}, stationarity {worst_stat:.2e}")
    if dump is not None:
        print(json.dumps(dump))
    assert ok


def test_criterion_6_clustering(verdict):
    t0 = time.perf_counter()
    gen = tp.GeneratorSeq.geometric(0.5, 30)
    pre, plain = {}, {}
    for n in (64, 256, 1024):
        T = tp.toeplitz_from_generator(gen, n)
        pre[n] = tp.preconditioned_spectrum(T, tp.gamma_approx(T), 0.1).outliers
        plain[n] = tp.count_outliers(np.linalg.eigvalsh(T.dense()), 0.1)
    elapsed = time.perf_counter() - t0
    bounded = all(pre[n] <= pre[64] + 2 for n in pre)
    growing = plain[64] < plain[256] < plain[1024]
    ok = bounded and growing and elapsed < 120.0
    verdict(6, ok, f"preconditioned outliers {pre}, unpreconditioned {plain} ({elapsed:.1f}s)")
    assert ok


def test_criterion_7_solver(verdict):
    rng = np.random.default_rng(SEED + 7)
    iters, errs = {}, {}
    for n in (64, 256, 1024):
        T = tp.toeplitz_from_generator([2, 1], n)
        rhs = rng.standard_normal(n)
        out = pcg(T, rhs, tp.gamma_approx(T), 1e-10, 5000)
        iters[n] = out.iterations if out.converged else None
        errs[n] = float(np.abs(out.solution - np.linalg.solve(T.dense(), rhs)).max())
    converged = all(v is not None for v in iters.values())
    spread = max(iters.values()) - min(iters.values()) if converged else None
    flat = converged and spread <= 5
    accurate = all(e <= 1e-8 for e in errs.values())

    # T already a gamma-matrix: its approximation is itself
    n = 64
    t = np.zeros(n)
    t[:3] = [4.0, 1.0, 0.5]
    t[-2:] = [0.5, 1.0]
    exact = pcg(tp.SymToeplitz(t), rng.standard_normal(n), tp.gamma_approx(t), 1e-10, 50)
    exact_ok = exact.converged and exact.iterations <= 2

    ok = flat and accurate and exact_ok
    verdict(
        7,
        ok,
        f"iterations {iters} (spread {spread}, limit 5: {'ok' if flat else 'exceeded'}); "
        f"max error vs direct {max(errs.values()):.1e}; exact preconditioner {exact.iterations} it",
    )
    assert ok


def _run(args):
    return subprocess.run([sys.executable, "-m", "gammatrix", *args], capture_output=True, text=True)


def _without_timings(text):
    doc = json.loads(text)
    doc.pop("timings", None)
    return doc


def test_criterion_8_cli_determinism(verdict, tmp_path):
    full = _run(["verify-counts", "--max-n", "4096"])
    rng = np.random.default_rng(SEED + 8)
    n = 64
    x = tmp_path / "x.txt"
    x.write_text("".join(f"{float(v)!r}\n" for v in rng.standard_normal(n)))
    t = tmp_path / "t.txt"
    t.write_text("".join(f"{float(v)!r}\n" for v in 0.5 ** np.arange(n)))

    def reports(tag):
        d = tmp_path / tag
        d.mkdir()
        out = {}
        out["verify"] = _run(["--seed", "5", "verify-counts", "--max-n", "1024", "--report", str(d / "v.json")])
        out["transform"] = _run(["--seed", "5", "transform", "--op", "idsct", "--in", str(x), "--out", str(d / "y.txt"), "--counts"])
        out["precond"] = _run(["--seed", "5", "precond", "--toeplitz", str(t), "--out", str(d / "p.json"), "--oracle-check"])
        out["spectrum"] = _run(["--seed", "5", "spectrum", "--toeplitz", str(t), "--epsilon", "0.1", "--out", str(d / "s.json")])
        out["solve"] = _run(["--seed", "5", "solve", "--toeplitz", str(t), "--rhs", str(x), "--out", str(d / "o.json")])
        codes = {k: p.returncode for k, p in out.items()}
        docs = {
            "verify": (d / "v.json").read_text(),
            "transform": _without_timings(out["transform"].stdout),
            "transform_vec": (d / "y.txt").read_text(),
            "precond": (d / "p.json").read_text(),
            "spectrum": _without_timings((d / "s.json").read_text()),
            "solve": _without_timings((d / "o.json").read_text()),
        }
        return codes, docs

    codes1, docs1 = reports("a")
    codes2, docs2 = reports("b")
    differing = [k for k in docs1 if docs1[k] != docs2[k]]
    ok = full.returncode == 0 and all(c == 0 for c in codes1.values()) and codes1 == codes2 and not differing
    verdict(8, ok, f"verify-counts 4096 exit {full.returncode}; exit codes {codes1}; differing reports {differing}")
    assert ok
