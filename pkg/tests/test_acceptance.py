"""Exit criteria for the package, one test per criterion.

The terminal summary prints a PASS/FAIL line for each criterion; the
``detail`` property of each test carries the measured worst case.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from qtdrazin.datasets import EXAMPLE1_REPORTED, example1, example1_paths
from qtdrazin.perturb import compute_bounds, perturb_report
from qtdrazin.qmatrix import chi_eigenvalues, qmat_drazin, qmat_norm2, qmat_power
from qtdrazin.spectral import (
    block_diagonalize,
    block_reassemble,
    drazin_residuals,
    norm_s,
    pinv_residuals,
    qt_drazin,
    qt_index,
    qt_index_by_rank,
    qt_pinv,
    qt_spectral_norm,
    qt_spectral_radius,
)
from qtdrazin.tensor import qt_power, qt_product, qt_transpose
from qtdrazin.testing import core_perturbation, planted_tensor, random_tensor

pytestmark = pytest.mark.filterwarnings("error")


@pytest.fixture
def detail(record_property):
    def add(text):
        record_property("detail", text)
        print(text)

    return add


def planted(rng, max_index=2, min_n=2):
    n = int(rng.integers(max(min_n, max_index), 5))
    n3 = int(rng.integers(1, 5))
    indices = rng.integers(0, max_index + 1, size=n3)
    return planted_tensor(rng, n, indices), indices


@pytest.mark.acceptance(1)
def test_example_reproduction(detail):
    a, e = example1()
    compute_bounds(a, e)  # warm caches and JIT before timing
    start = time.perf_counter()
    a, e = example1()
    report = compute_bounds(a, e)
    index = qt_index(a)
    elapsed = time.perf_counter() - start
    got = {
        "ADE": report.norms["ADE"],
        "AD": report.norms["AD"],
        "BD": report.norms["BD"],
        "BD_minus_AD": report.norms["BD_minus_AD"],
        "lower": report.bounds["lower_ADE"],
        "upper": report.bounds["upper_ADE"],
        "rel_error": report.bounds["rel_error"],
        "rel_bound": report.bounds["rel_bound_ADE_ADE"],
        "kappa_bound": report.bounds["kappa_bound"],
    }
    worst = max(abs(got[k] - EXAMPLE1_REPORTED[k]) for k in got)
    detail(f"max |computed - published| = {worst:.2e}, index {index}, {elapsed:.3f}s")
    for key, value in got.items():
        assert abs(value - EXAMPLE1_REPORTED[key]) <= 5e-3, (key, value)
    assert index == EXAMPLE1_REPORTED["index"]
    assert report.status == "verified"
    assert elapsed < 1.0


@pytest.mark.acceptance(2)
def test_homomorphism_suite(rng, detail):
    start = time.perf_counter()
    worst = {"product": 0.0, "adjoint": 0.0, "power": 0.0}
    for _ in range(200):
        n1, n2, n4 = rng.integers(1, 5, size=3)
        n3 = int(rng.integers(1, 6))
        a = random_tensor(rng, n1, n2, n3)
        b = random_tensor(rng, n2, n4, n3)
        lhs = qt_product(a, b).bcirc_z
        rhs = a.bcirc_z @ b.bcirc_z
        worst["product"] = max(worst["product"], qmat_norm2(lhs - rhs) / (norm_s(a) * norm_s(b)))
        worst["adjoint"] = max(worst["adjoint"], qmat_norm2(qt_transpose(a).bcirc_z - a.bcirc_z.H))
        sq = random_tensor(rng, n1, n1, n3)
        k = int(rng.integers(0, 5))
        diff = qt_power(sq, k).bcirc_z - qmat_power(sq.bcirc_z, k)
        worst["power"] = max(worst["power"], qmat_norm2(diff) / max(1.0, norm_s(sq)) ** k)
    elapsed = time.perf_counter() - start
    detail(", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", {elapsed:.1f}s")
    assert worst["product"] <= 1e-10
    assert worst["adjoint"] <= 1e-12
    assert worst["power"] <= 1e-9
    assert elapsed < 30.0


@pytest.mark.acceptance(3)
def test_generalized_inverse_axioms(rng, detail):
    worst = {"pinv": 0.0, "drazin": 0.0, "routes": 0.0}
    for _ in range(100):
        a, _ = planted(rng)
        worst["pinv"] = max(worst["pinv"], max(pinv_residuals(a, qt_pinv(a)).values()))
        x = qt_drazin(a)
        worst["drazin"] = max(worst["drazin"], max(drazin_residuals(a, x).values()))
        norm = norm_s(a)
        per_block = block_reassemble(block_diagonalize(a).map(lambda b: qmat_drazin(b, None, norm, a.n3)))
        worst["routes"] = max(worst["routes"], norm_s(x - per_block) / max(1.0, norm_s(x)))
    detail(", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert worst["pinv"] <= 1e-8
    assert worst["drazin"] <= 1e-7
    assert worst["routes"] <= 1e-7


@pytest.mark.acceptance(4)
def test_index_theorem(rng, detail):
    mismatches = []
    for case in range(200):
        a, indices = planted(rng)
        by_blocks = qt_index(a, paranoid=False)
        by_rank = qt_index_by_rank(a)
        if not by_blocks == by_rank == max(indices):
            mismatches.append((case, list(indices), by_blocks, by_rank))
    detail(f"{200 - len(mismatches)}/200 cases agree")
    assert not mismatches


@pytest.mark.acceptance(5)
def test_drazin_l_invariance(rng, detail):
    worst = 0.0
    for _ in range(50):
        a, _ = planted(rng)
        k = qt_index(a)
        xs = [qt_drazin(a, l) for l in (k, k + 1, k + 2)]
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, norm_s(xs[i] - xs[j]) / max(1.0, norm_s(xs[i])))
    detail(f"max pairwise relative difference {worst:.1e}")
    assert worst <= 1e-7


@pytest.mark.acceptance(6)
def test_perturbation_theorem(rng, detail):
    worst = 0.0
    bounded = 0
    for _ in range(50):
        # n > max index keeps a nonzero core in every block, so A^D != 0
        a, _ = planted(rng, min_n=3)
        ad = qt_drazin(a)
        e = core_perturbation(rng, a, ad, float(rng.uniform(0.05, 0.9)))
        report = perturb_report(a, e)
        assert report.status in ("verified", "bound-inapplicable"), report.status
        assert report.verified, report.identities
        scales = {
            "projector_residual": report.norms["AAD"],
            "diff_residual_left": report.norms["BD_minus_AD"],
            "diff_residual_right": report.norms["BD_minus_AD"],
            "resolvent_residual_left": report.norms["BD"],
            "resolvent_residual_right": report.norms["BD"],
        }
        for name, scale in scales.items():
            worst = max(worst, getattr(report, name) / max(1.0, scale))
        if report.delta_holds:
            bounded += 1
            bd = report.norms["BD"]
            assert report.bounds["lower_ADE"] - 1e-9 <= bd <= report.bounds["upper_ADE"] + 1e-9
    detail(f"max scaled identity residual {worst:.1e}, bound interval checked on {bounded}/50")
    assert worst <= 1e-6
    assert bounded > 0


def _nonzero_chi_spectrum(t, count):
    ev = chi_eigenvalues(t.bcirc_z)
    return ev[np.argsort(-np.abs(ev), kind="stable")][:count]


def _multiset_distance(x, y):
    # greedy nearest matching; exact for separated spectra, conservative otherwise
    remaining = list(y)
    worst = 0.0
    for v in x:
        dist = [abs(v - w) for w in remaining]
        i = int(np.argmin(dist))
        worst = max(worst, dist[i])
        remaining.pop(i)
    return worst


@pytest.mark.acceptance(7)
def test_norm_and_radius_properties(rng, detail):
    worst = {"radius": 0.0, "submult": 0.0, "swap": 0.0}
    for _ in range(200):
        n1, n2 = rng.integers(1, 5, size=2)
        n3 = int(rng.integers(1, 6))
        a = random_tensor(rng, n1, n2, n3)
        b = random_tensor(rng, n2, n1, n3)
        ab, ba = qt_product(a, b), qt_product(b, a)
        na, nb = qt_spectral_norm(a), qt_spectral_norm(b)
        worst["radius"] = max(worst["radius"], qt_spectral_radius(ab) / qt_spectral_norm(ab) - 1)
        worst["submult"] = max(worst["submult"], qt_spectral_norm(ab) / (na * nb) - 1)
        count = 2 * n3 * min(n1, n2)
        sa, sb = _nonzero_chi_spectrum(ab, count), _nonzero_chi_spectrum(ba, count)
        worst["swap"] = max(worst["swap"], _multiset_distance(sa, sb) / (na * nb))
    detail(", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert worst["radius"] <= 1e-12
    assert worst["submult"] <= 1e-12
    assert worst["swap"] <= 1e-8


def _cli(*argv, cwd):
    return subprocess.run([sys.executable, "-m", "qtdrazin", *argv], capture_output=True, text=True, cwd=cwd)


@pytest.mark.acceptance(8)
def test_cli_end_to_end(tmp_path, detail):
    a_path, e_path = (str(p) for p in example1_paths())
    run = _cli("drazin", a_path, "-o", "AD.qt", cwd=tmp_path)
    assert run.returncode == 0, run.stderr
    run = _cli("verify", a_path, "AD.qt", "--as", "drazin", cwd=tmp_path)
    assert run.returncode == 0, run.stderr
    worst = float(run.stdout.strip().splitlines()[-1].split()[1])
    assert worst <= 1e-7

    run = _cli("perturb", a_path, e_path, "--reproducible", "-o", "r1.json", cwd=tmp_path)
    assert run.returncode == 0, run.stderr
    report = json.loads((tmp_path / "r1.json").read_text())
    assert abs(report["norms.AD"] - 0.3938) <= 5e-3

    run = _cli("inverse", a_path, "-o", "inv.qt", cwd=tmp_path)
    assert run.returncode == 3 and "Singular" in run.stderr

    again = _cli("perturb", a_path, e_path, "--reproducible", "-o", "r2.json", cwd=tmp_path)
    text = [_cli("perturb", a_path, e_path, "--format", "text", "--reproducible", cwd=tmp_path).stdout for _ in range(2)]
    identical = (tmp_path / "r1.json").read_bytes() == (tmp_path / "r2.json").read_bytes() and text[0] == text[1]
    detail(f"verify max residual {worst:.1e}, ||A^D||_s {report['norms.AD']:.4f}, byte-identical reports {identical}")
    assert again.returncode == 0
    assert identical
