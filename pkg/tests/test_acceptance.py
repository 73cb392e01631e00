"""The seven end-to-end acceptance criteria at their stated sizes and tolerances.

Each test records a PASS/FAIL line shown in the pytest terminal summary; run
``python3 tests/test_acceptance.py`` to print them without the rest of the suite.
"""

import json
import subprocess
import sys
import time

import numpy as np

from nucspec.cli import main
from nucspec.constructions import (
    DEFAULT_S_GRID,
    jordan_case,
    kronecker_symmetrize,
    loglog_slopes,
    perturb_break_symmetry,
    quasinorm_sweep,
    random_operator,
    trace_one_shrinking_family,
)
from nucspec.core import Tolerance, multiset_equal, spectrum_of
from nucspec.fredholm import det_coeffs_from_traces, inverse_zeros
from nucspec.symmetry import (
    RouteDisagreementError,
    central_symmetry,
    equivalence_harness,
    normalized_traces,
    threshold_collapse_check,
)
from nucspec.traces import power_traces
from oracles import elementary_symmetric

N_GRID = (4, 16, 64, 256)


def test_criterion_1_recursion(record):
    t0 = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng(1001)
    for _ in range(100):
        dim = int(rng.integers(1, 21))
        t = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        alpha = det_coeffs_from_traces(power_traces(t, dim)).as_array()
        e = elementary_symmetric(np.linalg.eigvals(t))
        worst = max(worst, np.abs(alpha - e).max() / max(1.0, np.abs(alpha).max()))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 10
    record("1 recursion", ok, f"worst scaled error {worst:.2e} (limit 1e-8), {elapsed:.2f} s (limit 10 s)")
    assert ok


def test_criterion_2_zero_duality(record):
    t0 = time.perf_counter()
    tol = Tolerance(rel=1e-6)
    rng = np.random.default_rng(2002)
    failures = 0
    for _ in range(100):
        t, _ = jordan_case(rng)
        coeffs = det_coeffs_from_traces(power_traces(t, t.shape[0]))
        ok, _ = multiset_equal(inverse_zeros(coeffs, tol), spectrum_of(t, tol).nonzero(tol), tol)
        failures += not ok
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 10
    record("2 zero duality", ok, f"{failures}/100 mismatches, {elapsed:.2f} s (limit 10 s)")
    assert ok


def _consistent_witnesses(t, report) -> bool:
    lam = report.witness
    n = report.corroborating.witness
    eig = np.linalg.eigvals(t)
    scale = np.abs(eig).max()
    no_partner = not np.any(np.abs(eig + lam) <= 1e-8 * scale)
    return no_partner and isinstance(n, int) and n % 2 == 1


def test_criterion_3_central_symmetry(record):
    rng = np.random.default_rng(3003)
    worst_odd = 0.0
    wrong = disagreements = bad_witness = 0
    for i in range(200):
        t = kronecker_symmetrize(random_operator(int(rng.integers(1, 9)), rng), 2)
        s, _ = normalized_traces(t, 3 * t.shape[0])
        a = s.as_array()
        worst_odd = max(worst_odd, np.abs(a[0::2]).max() / np.abs(a).max())
        p = perturb_break_symmetry(t, 0.05, [3003, i])
        for op, expected in ((t, True), (p, False)):
            try:
                wrong += equivalence_harness(op, 2).verdict is not expected
            except RouteDisagreementError:
                disagreements += 1
        try:
            c = central_symmetry(p)
        except RouteDisagreementError:
            disagreements += 1
            continue
        wrong += c.verdict or c.corroborating.verdict
        bad_witness += not c.verdict and not _consistent_witnesses(p, c)
    ok = worst_odd <= 1e-9 and wrong == 0 and disagreements == 0 and bad_witness == 0
    record(
        "3 central symmetry",
        ok,
        f"max scaled odd trace {worst_odd:.1e} (limit 1e-9), {wrong} wrong verdicts, "
        f"{disagreements} disagreements, {bad_witness} inconsistent witnesses over 400 cases",
    )
    assert ok


def test_criterion_4_three_way(record):
    t0 = time.perf_counter()
    agree = total = 0
    for d in (2, 3, 4, 5):
        rng = np.random.default_rng(4000 + d)
        for i in range(50):
            t = kronecker_symmetrize(random_operator(int(rng.integers(1, 7)), rng), d)
            if i % 2:
                t = perturb_break_symmetry(t, 0.05, [4000 + d, i])
            total += 1
            try:
                res = equivalence_harness(t, d)
            except RouteDisagreementError:
                continue
            agree += res.verdict is (i % 2 == 0)
    elapsed = time.perf_counter() - t0
    ok = agree == total == 200 and elapsed < 30
    record("4 three-way equivalence", ok, f"{agree}/{total} agree, {elapsed:.2f} s (limit 30 s)")
    assert ok


def test_criterion_5_collapse(record):
    rng = np.random.default_rng(5005)
    cases = []
    for _ in range(50):
        d = int(rng.integers(2, 6))
        cases.append((kronecker_symmetrize(random_operator(int(rng.integers(1, 5)), rng), d), d))
    held = vacuous = 0
    for K in (1, 2, 3):
        for t, d in cases:
            r = threshold_collapse_check(t, d, K)
            held += r.holds and not r.vacuous
            vacuous += r.vacuous
    ok = held == 150 and vacuous == 0
    record("5 threshold collapse", ok, f"{held}/150 hold, {vacuous} vacuous")
    assert ok


def test_criterion_6_defect_family(record):
    errs = {"trace": 0.0, "trace_sq": 0.0, "l1": 0.0}
    for N in N_GRID:
        _, pt = trace_one_shrinking_family(N)
        errs["trace"] = max(errs["trace"], abs(pt.nuclear_trace - 1))
        errs["trace_sq"] = max(errs["trace_sq"], abs(pt.trace_sq * N - 1))
        errs["l1"] = max(errs["l1"], abs(pt.eigen_l1_mass - 1))
    slopes = loglog_slopes(quasinorm_sweep(N_grid=N_GRID, s_grid=DEFAULT_S_GRID))
    slope_err = max(abs(slopes[s] - (1 / s - 1)) for s in DEFAULT_S_GRID)
    ok = errs["trace"] <= 1e-12 and errs["trace_sq"] <= 1e-12 and errs["l1"] <= 1e-10 and slope_err <= 1e-6
    record(
        "6 defect family",
        ok,
        f"trace err {errs['trace']:.1e}, trace T^2 rel err {errs['trace_sq']:.1e}, "
        f"l1 mass rel err {errs['l1']:.1e}, slope err {slope_err:.1e}",
    )
    assert ok


def test_criterion_7_cli(record, tmp_path, capsys):
    selectors = ("kron-d2", "kron-d3", "kron-d4", "kron-d5", "broken", "defect")
    reproduced = total = 0
    for sel in selectors:
        out_dir = tmp_path / sel
        assert main(["gallery", sel, "--out", str(out_dir), "--seed", "7"]) == 0
        manifest = json.loads((out_dir / "manifest.json").read_text())
        for case in manifest["cases"]:
            total += 1
            code = main(["check", str(out_dir / case["file"]), "--d", str(case["d"])])
            reproduced += code == (0 if case["expected"] else 1)
    capsys.readouterr()

    def cli(*args):
        return subprocess.run([sys.executable, "-m", "nucspec", *args], capture_output=True)

    identical = True
    for sel in ("kron-d3", "broken"):
        snaps = []
        for k in range(2):
            dest = tmp_path / f"rerun-{sel}-{k}"
            cli("gallery", sel, "--out", str(dest), "--seed", "7")
            files = {p.name: p.read_bytes() for p in sorted(dest.iterdir())}
            check = cli("check", str(dest / "case_001.json"), "--d", "3" if sel == "kron-d3" else "2")
            snaps.append((files, check.stdout, check.returncode))
        identical &= snaps[0] == snaps[1]
    ok = reproduced == total and identical
    record("7 CLI end-to-end", ok, f"{reproduced}/{total} verdicts reproduced, byte-identical reruns: {identical}")
    assert ok


if __name__ == "__main__":
    import pytest

    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
