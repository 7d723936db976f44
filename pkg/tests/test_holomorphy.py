import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcsprobe.holomorphy import (
    DEFAULT_U,
    PLANE,
    Rectangle,
    Triangle,
    cauchy_formula_check,
    cauchy_integral,
    conj_family,
    constant_family,
    derivative_exact,
    derivative_exact_log,
    difference_quotient,
    escape_demo,
    exp_family,
    quotient_errors,
    rate_check,
    sample_E_k,
    scalar_family,
    triangle_check,
    triangle_integral,
    weak_analyticity_check,
)
from lcsprobe.report import Verdict
from lcsprobe.sequences import EvaluationOverflow, GeneratorSpec, Membership, span_membership

f = exp_family()
inside = st.builds(complex, st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))


class TestDerivatives:
    def test_examples(self):
        np.testing.assert_allclose(derivative_exact(f, 0, 0, 3).coords, [1, 1, 1])
        np.testing.assert_allclose(derivative_exact(f, 1, 0, 4).coords, [1, 2, 3, 4])
        np.testing.assert_allclose(derivative_exact(f, 2, math.log(2), 3).coords, [2, 16, 72], rtol=1e-14)

    def test_overflow_and_log_path(self):
        big = exp_family(PLANE)
        with pytest.raises(EvaluationOverflow):
            derivative_exact(big, 1, 5, 200)
        log_abs, _ = derivative_exact_log(big, 1, 5, 200)
        assert log_abs[-1] == pytest.approx(math.log(200) + 1000)

    def test_domain_enforced(self):
        with pytest.raises(ValueError):
            derivative_exact(f, 0, 2, 3)
        with pytest.raises(ValueError):
            difference_quotient(f, 1, 0.99, 0.05, 3)

    def test_difference_quotient_examples(self):
        q = difference_quotient(f, 1, 0, 1e-3, 1).coords[0]
        assert abs(q - 1) <= 2e-6
        e1 = quotient_errors(f, 1, 0, 1e-3, 1)[0]
        e2 = quotient_errors(f, 1, 0, 5e-4, 1)[0]
        assert 3.5 <= e1 / e2 <= 4.5
        qi = difference_quotient(f, 1, 0, 1e-3j, 1).coords[0]
        assert abs(qi - 1) <= 2e-6

    def test_step_underflow_rejected(self):
        with pytest.raises(ValueError):
            difference_quotient(f, 1, 0, 1e-13, 3)

    def test_j_zero_is_evaluation(self):
        np.testing.assert_allclose(difference_quotient(f, 0, 0.1, 1e-3, 3).coords, np.exp(0.1 * np.arange(1, 4)))

    @pytest.mark.parametrize("j", [1, 2, 3])
    @pytest.mark.parametrize("z", DEFAULT_U.grid(3, shrink=0.9))
    def test_rate_on_grid(self, j, z):
        rep = rate_check(f, j, z, h=1e-3, N=10)
        assert rep.passed, rep.measurements["ratios"]


class TestEscape:
    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_escape_at_02(self, k):
        rep = escape_demo(k, 0.2)
        assert rep.verdict is Verdict.PASS
        assert rep.measurements["member_statuses"] == ["member"] * (k + 1)
        assert rep.measurements["escape_status"] == "non-member"
        assert rep.series["columns"] == ["N", "residual", "verdict"]

    def test_f0_first_derivative_escapes(self):
        rep = escape_demo(0, 0)
        assert rep.measurements["sub_verdicts"]["next_derivative_escapes"] is Verdict.PASS
        assert rep.measurements["generators"][0] == [0, 1.0, 0.0]

    def test_own_family_member(self):
        fam = sample_E_k(1, 0.2)
        res = span_membership(GeneratorSpec(1, cmath.exp(0.2)), fam)
        assert res.status is Membership.MEMBER
        assert abs(res.coefficients[1] - 1) < 1e-8

    def test_default_sample_contains_derivatives(self):
        fam = sample_E_k(2, 0.3j)
        for j in range(3):
            assert GeneratorSpec(j, cmath.exp(0.3j)) in fam.generators

    @settings(max_examples=20, deadline=None)
    @given(inside, st.complex_numbers(min_magnitude=0.01, max_magnitude=100, allow_nan=False, allow_infinity=False))
    def test_escape_verdict_scale_invariant(self, z, lam):
        fam = sample_E_k(1, z)
        target = GeneratorSpec(2, cmath.exp(z))
        base = span_membership(target, fam)
        scaled = span_membership(target, fam, scale=lam)
        assert base.status is scaled.status is Membership.NON_MEMBER
        np.testing.assert_allclose(scaled.residuals, base.residuals, rtol=1e-8)


class TestTriangles:
    def test_exp_triangle_vanishes(self):
        rep = triangle_check(f, Triangle((0, 0.3, 0.3j)), quad_order=32, N=10)
        assert rep.passed
        assert np.max(rep.measurements["per_coordinate_errors"]) <= 1e-10

    def test_constant_family(self):
        val = triangle_integral(constant_family(2.5), Triangle((0, 0.3, 0.3j))).coords
        np.testing.assert_allclose(val, 0, atol=1e-15)

    def test_conj_green_oracle(self):
        # integral of conj(zeta) over the boundary is 2i * area = i
        val = triangle_integral(conj_family(), Triangle((0, 1, 1j)), N=1).coords[0]
        assert abs(val - 1j) <= 1e-10

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            triangle_integral(f, Triangle((0, 0.1, 0.2)))
        val = triangle_integral(f, Triangle((0, 0.1, 0.2)), allow_degenerate=True).coords
        np.testing.assert_allclose(val, 0, atol=1e-15)

    def test_outside_domain_rejected(self):
        with pytest.raises(ValueError):
            triangle_integral(f, Triangle((0, 1.5, 0.3j)))

    @settings(max_examples=30, deadline=None)
    @given(inside, inside, inside)
    def test_split_additivity(self, a, b, c):
        tri = Triangle((a, b, c))
        if abs(tri.signed_area) < 1e-3:
            return
        cubic = scalar_family(lambda z: z**2 * z.conjugate() + cmath.exp(z))
        for fam in (conj_family(), cubic):
            whole = triangle_integral(fam, tri, N=1).coords[0]
            left, right = (triangle_integral(fam, t, N=1).coords[0] for t in tri.split())
            assert abs(left + right - whole) <= 1e-12 * max(abs(whole), abs(tri.signed_area))


class TestCauchy:
    def test_reproduces_ones_at_centre(self):
        rep = cauchy_formula_check(f, 0, 0.5, 0, 256, 10)
        assert rep.passed
        np.testing.assert_allclose(cauchy_integral(f, 0, 0.5, 0), np.ones(10), rtol=1e-12)

    @pytest.mark.parametrize("z", [0, 0.1, 0.1j])
    def test_direct_exponential_oracle(self, z):
        rep = cauchy_formula_check(f, 0, 0.5, z, 256, 10)
        assert np.max(rep.measurements["per_coordinate_errors"]) <= 1e-10
        assert set(rep.to_dict()) >= {"claim", "z0", "r", "z", "nodes", "per_coordinate_errors", "verdict"}

    def test_conj_negative_control(self):
        rep = cauchy_formula_check(conj_family(), 0, 0.5, 0.1, 256, 1)
        assert rep.verdict is Verdict.FAIL

    def test_rejects_and_warns(self):
        with pytest.raises(ValueError):
            cauchy_formula_check(f, 0, 0.5, 0.5)
        with pytest.raises(ValueError):
            cauchy_formula_check(f, 0, 1.0, 0.1)
        with pytest.warns(UserWarning):
            cauchy_formula_check(f, 0, 0.5, 0.49)

    @pytest.mark.parametrize("z", [0, 0.1, 0.1j, -0.2 + 0.1j])
    def test_radius_independence(self, z):
        a = cauchy_integral(f, 0, 0.3, z)
        b = cauchy_integral(f, 0, 0.5, z)
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_trapezoid_doubling(self):
        exact = f.evaluate(0.1, 10)
        errs = [np.abs(cauchy_integral(f, 0, 0.5, 0.1, nodes) - exact) / np.abs(exact) for nodes in (8, 16, 32, 64)]
        floor = 1e-13
        for coarse, fine in zip(errs, errs[1:]):
            active = coarse > floor * 100
            assert np.all(fine[active] * 100 <= coarse[active])
        assert np.max(errs[-1]) < 1e-13


class TestWeakAnalyticity:
    def test_passes_for_exp(self):
        assert weak_analyticity_check(f, range(1, 11)).passed
        assert weak_analyticity_check(f, [1]).passed

    def test_conj_coordinate_flagged(self):
        fam = f.with_coordinate(3, lambda z: complex(z).conjugate(), "conj at 3")
        rep = weak_analyticity_check(fam, range(1, 11))
        assert rep.verdict is Verdict.FAIL
        assert rep.measurements["failing_coordinates"] == [3]

    def test_rectangle_grid_inside(self):
        r = Rectangle()
        assert all(r.contains(p) for p in r.grid(3, 0.9))
        assert not r.contains(1)
