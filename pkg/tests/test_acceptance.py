"""Acceptance criteria, each at its stated tolerance and runtime limit.

Every test prints a pass/fail line in the "acceptance criteria" section of
the pytest summary (see conftest.py).
"""

import json
import math
import time
import warnings

import numpy as np
import pytest

from lcsprobe import cli
from lcsprobe.ell1 import SummableVector, local_unboundedness_demo, unboundedness_witness
from lcsprobe.holomorphy import (
    DEFAULT_U,
    Triangle,
    cauchy_formula_check,
    conj_family,
    escape_demo,
    exp_family,
    quotient_errors,
    triangle_check,
    triangle_integral,
)
from lcsprobe.realanalytic import (
    complexification_failure_demo,
    product_radius_demo,
    runge_taylor,
    taylor_partial_sum_check,
    taylor_radius_estimate,
)
from lcsprobe.report import Verdict
from lcsprobe.sequences import IllConditionedWarning, default_schedule, independence_rank


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@pytest.mark.acceptance("1 independence: 200 random families, exact rank m at N = m (<= 30 s)")
def test_independence_exact_rank():
    rng = np.random.default_rng(0)
    full = 0
    with Timer() as t:
        for _ in range(200):
            m = int(rng.integers(1, 11))
            fam = cli.random_family(m, 3, rng)
            zs = [g.z for g in fam.generators]
            assert all(0.25 <= abs(z) <= 4 for z in zs)
            full += independence_rank(fam, m, mode="exact").rank == m
    print(f"full rank {full}/200 in {t.elapsed:.2f} s")
    assert full == 200
    assert t.elapsed <= 30


@pytest.mark.acceptance("2 escape: k = 0, 1, 2 at 5 points of U, member j <= k, non-member k+1 (<= 10 s)")
def test_escape():
    rng = np.random.default_rng(0)
    points = rng.uniform(-0.9, 0.9, 5) + 1j * rng.uniform(-0.9, 0.9, 5)
    with Timer() as t:
        for k in range(3):
            for z in points:
                assert DEFAULT_U.contains(z)
                rep = escape_demo(k, z)
                meas = rep.measurements
                assert meas["member_statuses"] == ["member"] * (k + 1), (k, z)
                assert meas["escape_status"] == "non-member", (k, z)
                m = len(meas["generators"])
                assert meas["truncations"] == list(default_schedule(m)) == [m + 1, 2 * m, 4 * m, 8 * m]
                res = meas["residuals"]
                assert min(res) >= 1e-3, res
                assert all(b >= a for a, b in zip(res, res[1:])), res
    print(f"15 escape demos in {t.elapsed:.2f} s")
    assert t.elapsed <= 10


@pytest.mark.acceptance("3 weak analyticity: triangle, Cauchy at 0, 0.1, 0.1i, conj control (<= 5 s)")
def test_weak_analyticity():
    f = exp_family()
    with Timer() as t:
        tri = triangle_check(f, Triangle((0, 0.3, 0.3j)), quad_order=32, N=10, tol=1e-10)
        assert tri.passed
        assert np.max(tri.measurements["per_coordinate_errors"]) <= 1e-10
        for z in (0, 0.1, 0.1j):
            rep = cauchy_formula_check(f, 0, 0.5, z, nodes=256, N=10, tol=1e-10)
            assert np.max(rep.measurements["per_coordinate_errors"]) <= 1e-10
        control = triangle_integral(conj_family(), Triangle((0, 1, 1j)), N=1).coords[0]
        assert abs(control - 1j) <= 1e-10
        assert cauchy_formula_check(conj_family(), 0, 0.5, 0.1, nodes=256, N=1).verdict is Verdict.FAIL
    assert t.elapsed <= 5


@pytest.mark.acceptance("4 difference quotients: halving h gives error ratio in [3.5, 4.5], j <= 3, n <= 10")
def test_difference_quotient_rate():
    f = exp_family()
    worst = [math.inf, -math.inf]
    for z in DEFAULT_U.grid(3, shrink=0.9):
        for j in (1, 2, 3):
            ratio = quotient_errors(f, j, z, 1e-3, 10) / quotient_errors(f, j, z, 5e-4, 10)
            worst = [min(worst[0], ratio.min()), max(worst[1], ratio.max())]
    print(f"ratios within [{worst[0]:.5f}, {worst[1]:.5f}]")
    assert 3.5 <= worst[0] and worst[1] <= 4.5


@pytest.mark.acceptance("5 l1 unboundedness: 1000 random x, N in {10, 1e3, 1e6}, local radii {2, 0.5, 0.01} (<= 10 s)")
def test_unboundedness():
    rng = np.random.default_rng(0)
    xs = [cli._random_vector(rng) for _ in range(1000)]
    radii = (2, 0.5, 0.01)
    with Timer() as t:
        sound = 0
        for x in xs:
            ok = True
            for N in (10, 1e3, 1e6):
                w = unboundedness_witness(x, N)
                ok &= w.distance_ok and w.value_ok and w.inequality_ok
            sound += ok
        local_ok = 0
        for i, x in enumerate(xs):
            d = local_unboundedness_demo(x, radii[i % 3], 1e6)
            local_ok += d.ok
    print(f"witnesses sound {sound}/1000, local demos {local_ok}/1000 in {t.elapsed:.2f} s")
    assert sound == 1000
    assert local_ok == 1000
    assert t.elapsed <= 10


@pytest.mark.acceptance("6 radius: within 10% of 1/n for n <= 50 at K = 40; infimum <= 1.1/n_max")
def test_radius():
    for n in range(1, 51):
        r = taylor_radius_estimate(runge_taylor(n, 40)).radius
        assert abs(r - 1 / n) <= 0.1 / n
    for n_max in (10, 50):
        rep = product_radius_demo(n_max, 40)
        assert rep.measurements["infimum"] <= 1.1 / n_max


@pytest.mark.acceptance("7 global Taylor: 5x5 grid in [-2, 2]^2, n <= 10, tol 1e-10, oracle K")
def test_global_taylor():
    grid = np.linspace(-2, 2, 5)
    for t0 in grid:
        for t in grid:
            rep = taylor_partial_sum_check(t0, t, range(1, 11), tol=1e-10)
            assert rep.passed, (t0, t, rep.measurements["errors"])


@pytest.mark.acceptance("8 real-analyticity failure: t = 0.1, n <= 300, bound from n = 4, super-polynomial, control 0")
def test_complexification_failure():
    rep = complexification_failure_demo(0.1, (1, 300), 20)
    meas = rep.measurements
    assert meas["threshold_index"] == 4
    assert meas["checks"]["bound_from_threshold"]
    assert meas["exponent_or_flag"] == "super-polynomial"
    assert meas["control_exponent_or_flag"] == 0
    assert rep.passed


@pytest.mark.acceptance("9 CLI: byte-identical reports for seed 0 modulo timestamp; exit codes 0 / 2 / 3")
def test_cli_contract(tmp_path):
    for experiment in cli.EXPERIMENTS:
        texts = []
        for i in range(2):
            out = tmp_path / f"{experiment}-{i}.json"
            cli.main([experiment, "--seed", "0", "--out", str(out)])
            doc = json.loads(out.read_text())
            doc.pop("timestamp")
            texts.append(cli.dumps(doc).encode())
        assert texts[0] == texts[1], experiment
    assert cli.main(["escape", "--out", str(tmp_path / "p.json")]) == 0
    assert cli.main(["cauchy", "--integrand", "conj", "--out", str(tmp_path / "f.json")]) == 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        code = cli.main(
            ["independence", "--mode", "floating", "--family", "0:1,0:1.000000001", "--out", str(tmp_path / "i.json")]
        )
    assert code == 3
