import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcsprobe._gauss import GaussianRational
from lcsprobe.ell1 import (
    SummableVector,
    TailBound,
    f_component_eval,
    g_eval,
    g_exact,
    g_partial,
    local_unboundedness_demo,
    sample_ball,
    tail_bound,
    unboundedness_witness,
    uniform_ball_bound,
    witness_report,
)
from lcsprobe.report import Verdict

coordinate = st.builds(
    complex, st.floats(-3, 3, allow_subnormal=False), st.floats(-3, 3, allow_subnormal=False)
).filter(lambda z: abs(z) <= 3)
vectors = st.dictionaries(st.integers(1, 40), coordinate, max_size=20).map(SummableVector)


def brute_g(x: SummableVector) -> complex:
    """Independent float oracle, only for moderate coordinates."""
    return sum(2**k * v ** (2 * k) for k, v in x.as_complex().items())


class TestVector:
    def test_construction(self):
        x = SummableVector({3: 0.5, 1: 0, 2: -1j})
        assert x.support == {2: GaussianRational(0, -1), 3: GaussianRational(0.5)}
        assert x.norm1 == 1.5
        assert SummableVector([0.5, 0, 0.25]).support.keys() == {1, 3}
        with pytest.raises(ValueError):
            SummableVector({0: 1})

    def test_immutable_operations(self):
        x = SummableVector({1: 0.5})
        y = x.with_coordinate(4, 1)
        assert x.max_index() == 1 and y.max_index() == 4
        assert (y - x).support == {4: GaussianRational(1)}
        assert x.scaled(2)[1] == 1


class TestG:
    def test_examples(self):
        assert g_eval(SummableVector()).value == 0
        assert g_eval(SummableVector([0.5])).value == 0.5
        assert g_exact(SummableVector([0.25] * 3)) == Fraction(2, 16) + Fraction(4, 256) + Fraction(8, 4096)
        assert g_eval(SummableVector([0.25] * 3)).value == pytest.approx(0.142578125, rel=1e-15)

    def test_log_space_handles_huge_terms(self):
        x = SummableVector({300: 3.0})
        val = g_eval(x)
        assert val.log_abs == pytest.approx(300 * math.log(2) + 600 * math.log(3))
        assert math.isinf(val.value.real)

    @given(vectors)
    def test_matches_exact_and_brute_force(self, x):
        exact = complex(g_exact(x))
        if math.isfinite(abs(exact)) and abs(exact) < 1e250:
            assert g_eval(x).value == pytest.approx(exact, rel=1e-9, abs=1e-300)
        if all(abs(v) <= 1 for v in x.as_complex().values()):
            assert g_eval(x).value == pytest.approx(brute_g(x), rel=1e-9, abs=1e-12)

    def test_f_component(self):
        assert f_component_eval(SummableVector(), 7).value == 0
        assert f_component_eval(SummableVector([0.5]), 1).value == 0.5
        assert f_component_eval(SummableVector([0.25]), 2).value == 0.5
        with pytest.raises(ValueError):
            f_component_eval(SummableVector(), 0)

    @given(vectors, st.integers(1, 5))
    def test_scaling_identity(self, x, n):
        a, b = f_component_eval(x, n), g_eval(x.scaled(n))
        assert a.log_abs == b.log_abs and a.phase == b.phase


class TestTails:
    def test_tail_bound_formula(self):
        tb = TailBound(3, 0.5)
        assert tb.bound == pytest.approx(0.25)
        with pytest.raises(ValueError):
            TailBound(1, 1.0)

    def test_uniform_ball_bound_examples(self):
        assert uniform_ball_bound(SummableVector(), 1).bound == 1
        assert uniform_ball_bound(SummableVector(), 5).bound == 0.0625

    def test_uniform_ball_bound_names_offending_index(self):
        with pytest.raises(ValueError, match="x_7"):
            uniform_ball_bound(SummableVector({7: 0.3}), 2)
        uniform_ball_bound(SummableVector({7: 0.3}), 8)

    def test_monte_carlo_ball(self):
        rng = np.random.default_rng(0)
        x = SummableVector({1: 0.1, 3: 0.05j, 6: -0.1})
        for m in (1, 3, 6):
            tb = uniform_ball_bound(x, m)
            for _ in range(100):
                y = sample_ball(x, 0.25, rng, range(1, 11))
                assert (y - x).norm1 < 0.25
                tail = complex(g_exact(y)) - g_partial(y, m)
                assert abs(tail) <= tb.bound

    @settings(max_examples=50)
    @given(st.dictionaries(st.integers(1, 30), st.builds(complex, st.floats(-0.17, 0.17), st.floats(-0.17, 0.17)), max_size=15))
    def test_truncated_eval_certified(self, d):
        x = SummableVector(d)
        for tol in (1e-3, 1e-8):
            val = g_eval(x, tol)
            assert val.error_bound <= tol
            assert abs(val.value - complex(g_exact(x))) <= val.error_bound + 1e-15

    def test_uncertifiable_tail(self):
        with pytest.raises(ValueError):
            tail_bound(SummableVector({5: 0.8}), 2)

    def test_scaled_vectors_stay_in_envelope(self):
        rng = np.random.default_rng(1)
        x = SummableVector({2: 0.2, 5: 0.1 + 0.1j})
        tb = uniform_ball_bound(SummableVector(), 1)
        for lam in rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20):
            lam = lam / max(1, abs(lam))
            assert abs(g_eval(x.scaled(complex(lam))).value) <= tb.bound


class TestWitness:
    def test_examples(self):
        w = unboundedness_witness(SummableVector(), 10)
        assert w.m == 4 and w.y == SummableVector({4: 1}) and w.g_y == 16
        w = unboundedness_witness(SummableVector([0.5]), 100)
        assert w.m == 7 and w.g_y == Fraction(257, 2)
        assert w.norm1_distance == 1.0 and w.ok

    def test_json_schema(self):
        d = unboundedness_witness(SummableVector([0.5]), 100).to_dict()
        assert set(d) == {"x", "N", "m", "y", "g_of_y", "norm1_distance", "inequality_check"}
        assert d["x"] == [[1, 0.5, 0.0]]
        assert d["g_of_y"] == [128.5, 0.0]
        assert witness_report(unboundedness_witness(SummableVector(), 10)).verdict is Verdict.PASS

    @settings(max_examples=100, deadline=None)
    @given(vectors, st.sampled_from([10, 1e3, 1e6]))
    def test_soundness(self, x, N):
        w = unboundedness_witness(x, N)
        assert w.ok
        assert w.g_y == g_exact(w.y)
        assert 4 * x[w.m].abs2() < 1
        # minimality: no smaller index satisfies both conditions
        gx2 = g_exact(x).abs2()
        for m in range(max(1, w.m - 5), w.m):
            slack = Fraction(2**m) - Fraction(N) - 1
            assert not (4 * x[m].abs2() < 1 and slack >= 0 and slack * slack >= gx2)

    @settings(max_examples=50, deadline=None)
    @given(vectors)
    def test_monotone_in_N(self, x):
        ms = [unboundedness_witness(x, N).m for N in (0, 10, 1e3, 1e6, 1e9)]
        assert ms == sorted(ms)


class TestLocalDemo:
    def test_examples(self):
        d = local_unboundedness_demo(SummableVector(), 0.5, 10)
        assert d.n == 4 and d.y == SummableVector({4: 0.25}) and d.value == 16
        d = local_unboundedness_demo(SummableVector(), 2, 10)
        assert d.n == 1 and d.inner.m == 4

    @pytest.mark.parametrize("radius", [2, 0.5, 0.01])
    def test_within_radius(self, radius):
        rng = np.random.default_rng(2)
        for _ in range(20):
            x = SummableVector({int(k): complex(*rng.uniform(-3, 3, 2)) for k in rng.integers(1, 20, 5)})
            d = local_unboundedness_demo(x, radius, 1e6)
            assert d.ok
            assert (d.y - x).norm1 <= radius
            assert d.value >= 1e6
            assert g_exact(d.y.scaled(d.n)) == d.inner.g_y
