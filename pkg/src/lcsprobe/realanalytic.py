"""Real-analyticity probes for sequence-valued curves of one real variable.

Two product maps are examined coordinatewise:

* t -> (1/(1 + (nt)^2))_n, whose coordinate Taylor radii 1/n have infimum 0;
* t -> (sin(nt))_n, whose Taylor expansion converges globally in every
  coordinate, but whose value at the imaginary point it, |sin(int)| = sinh(nt),
  grows faster than every polynomial in n.

Exponential quantities are carried as logarithms; Taylor sums run in mpmath
at a working precision chosen from the largest term, since the terms of the
sine series at n|t - t0| = 20 already exceed 1e7 before cancelling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath
import numpy as np

from .report import Verdict, VerificationReport
from .sequences import FormalSequence, TruncatedVector

MIN_RADIUS_TERMS = 8
DIVERGENCE_RATIO = 1.2
GROWTH_THRESHOLD = 0.1
HALF_LOG_2 = math.log(2) / 2


def runge_component(n: int, t: float) -> float:
    return 1.0 / (1.0 + (n * t) ** 2)


@dataclass(frozen=True)
class TaylorSeries1D:
    """Coefficients c_j = f^(j)(center)/j!, j = 0..len-1.

    Coefficients may be ints or Fractions (kept exact) or floats.
    """

    center: float
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        for c in coeffs:
            if isinstance(c, float) and not math.isfinite(c):
                raise ValueError("Taylor coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    def __len__(self):
        return len(self.coefficients)

    def evaluate(self, t: float) -> float:
        dt = t - self.center
        return float(sum(c * dt**j for j, c in enumerate(self.coefficients)))


def runge_taylor(n: int, K: int) -> TaylorSeries1D:
    """Exact coefficients of 1/(1 + (nt)^2) at 0: c_2j = (-1)^j n^(2j), odd ones 0."""
    return TaylorSeries1D(0.0, tuple((-1) ** (j // 2) * n**j if j % 2 == 0 else 0 for j in range(K)))


def sin_taylor(K: int, n: int = 1) -> TaylorSeries1D:
    """Exact coefficients of sin(nt) at 0."""
    return TaylorSeries1D(
        0.0,
        tuple(Fraction((-1) ** (j // 2) * n**j, math.factorial(j)) if j % 2 else 0 for j in range(K)),
    )


def _log_abs(c) -> float:
    if isinstance(c, Fraction):
        return math.log(abs(c.numerator)) - math.log(c.denominator)
    return math.log(abs(c))


@dataclass(frozen=True)
class RadiusEstimate:
    radius: float
    divergent: bool
    roots: dict

    def __float__(self):
        return self.radius


def taylor_radius_estimate(series: TaylorSeries1D, K: int | None = None) -> RadiusEstimate:
    """Root-test estimate 1 / max |c_j|^(1/j) over the even j with K/2 <= j < K.

    Zero coefficients carry no information about the limsup and are skipped;
    if all are zero (as for an odd function about its center) the estimate
    is ``inf``.  The series is flagged divergent (radius 0) when the roots in
    the last quarter exceed those in the quarter before by more than
    ``DIVERGENCE_RATIO``, i.e. they keep growing.
    """
    K = len(series) if K is None else K
    if K < MIN_RADIUS_TERMS:
        raise ValueError(f"need at least {MIN_RADIUS_TERMS} coefficients, got {K}")
    if K > len(series):
        raise ValueError(f"series has only {len(series)} coefficients")
    roots = {
        j: math.exp(_log_abs(c) / j)
        for j, c in enumerate(series.coefficients[:K])
        if j >= K // 2 and j > 0 and j % 2 == 0 and c != 0
    }
    if not roots:
        return RadiusEstimate(math.inf, False, roots)
    early = [r for j, r in roots.items() if j < 3 * K // 4]
    late = [r for j, r in roots.items() if j >= 3 * K // 4]
    if early and late and max(late) > DIVERGENCE_RATIO * max(early):
        return RadiusEstimate(0.0, True, roots)
    return RadiusEstimate(1.0 / max(roots.values()), False, roots)


def product_radius_demo(n_max: int, K: int = 40) -> VerificationReport:
    """Per-coordinate radii of t -> (1/(1+(nt)^2))_n; their infimum shrinks like 1/n_max."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    radii = [taylor_radius_estimate(runge_taylor(n, K)).radius for n in range(1, n_max + 1)]
    inf_radius = min(radii)
    ok = inf_radius <= 1.1 / n_max
    return VerificationReport(
        claim="no common Taylor radius serves every coordinate of t -> (1/(1+(nt)^2))_n",
        verdict=Verdict.from_bool(ok),
        measurements={
            "indices": list(range(1, n_max + 1)),
            "radii": radii,
            "infimum": inf_radius,
            "n_max": n_max,
            "K": K,
        },
        tolerances={"infimum_at_most": 1.1 / n_max},
        series={"columns": ["n", "radius"], "rows": [[n, r] for n, r in enumerate(radii, 1)]},
    )


def _sin_derivative(j: int, x):
    """j-th derivative of sin at x (works for floats and mpmath numbers)."""
    sign = -1 if (j // 2) % 2 else 1
    if j % 2 == 0:
        return sign * (mpmath.sin(x) if isinstance(x, mpmath.mpf) else math.sin(x))
    return sign * (mpmath.cos(x) if isinstance(x, mpmath.mpf) else math.cos(x))


def sin_family_derivative(j: int, t: float, N: int) -> TruncatedVector:
    """j-th derivative of t -> (sin(nt))_n, truncated to n <= N."""
    if j < 0:
        raise ValueError("derivative order must be non-negative")
    return TruncatedVector(np.array([n**j * _sin_derivative(j, n * t) for n in range(1, N + 1)]))


def sine_remainder_bound(a: float, K: int) -> float:
    """a^(K+1)/(K+1)!, bounding the degree-K Taylor remainder of sin at offset a."""
    if a == 0:
        return 0.0
    return math.exp((K + 1) * math.log(a) - math.lgamma(K + 2))


def oracle_degree(a: float, tol: float) -> int:
    """Smallest K >= 2a with a^(K+1)/(K+1)! <= tol/2."""
    K = max(1, math.ceil(2 * a))
    while sine_remainder_bound(a, K) > tol / 2:
        K += 1
    return K


def taylor_partial_sum_check(
    t0: float,
    t: float,
    coords: Iterable[int] = range(1, 11),
    K: int | None = None,
    tol: float = 1e-10,
) -> VerificationReport:
    """Compare the degree-K Taylor polynomial of sin(n.) at t0 with sin(nt).

    ``K`` is the highest power kept.  When omitted it comes from the remainder
    bound (n|t - t0|)^(K+1)/(K+1)! <= tol/2 for the largest probed n.  A K
    below the domination regime n|t - t0| <= K/2 is refused.
    """
    coords = sorted(set(int(n) for n in coords))
    if not coords or coords[0] < 1:
        raise ValueError("coordinates must be positive integers")
    dt = t - t0
    a_max = coords[-1] * abs(dt)
    if K is None:
        K = oracle_degree(a_max, tol)
    elif a_max > K / 2:
        raise ValueError(f"K={K} is below the domination regime n|t - t0| <= K/2 (need K >= {math.ceil(2 * a_max)})")

    errors, bounds = [], []
    for n in coords:
        a = n * abs(dt)
        # working precision: enough digits above the largest term a^j/j!
        peak = max(0.0, a / math.log(10)) if a > 0 else 0.0
        with mpmath.workdps(30 + int(peak)):
            x0 = mpmath.mpf(n) * mpmath.mpf(t0)
            h = mpmath.mpf(n) * mpmath.mpf(dt)
            total, power, fact = mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(1)
            for j in range(K + 1):
                if j:
                    power *= h
                    fact *= j
                total += _sin_derivative(j, x0) * power / fact
            err = abs(total - mpmath.sin(mpmath.mpf(n) * mpmath.mpf(t)))
        errors.append(float(err))
        bounds.append(sine_remainder_bound(a, K))
    ok = all(e <= tol for e in errors)
    return VerificationReport(
        claim="the Taylor expansion of t -> (sin(nt))_n converges for all t, t0 in every coordinate",
        verdict=Verdict.from_bool(ok),
        measurements={
            "t0": t0,
            "t": t,
            "K": K,
            "indices": coords,
            "errors": errors,
            "remainder_bounds": bounds,
        },
        tolerances={"absolute": tol},
        series={"columns": ["n", "error", "remainder_bound"], "rows": [list(r) for r in zip(coords, errors, bounds)]},
    )


@dataclass
class GrowthProfile:
    """Polynomial-growth probe of |x_n| over a finite index range.

    ``exponent`` is the least m <= m_max for which |x_n| n^-m looks bounded,
    or None; ``flag`` is "polynomial", "super-polynomial" or "inconclusive".
    ``fitted_exponent`` is the least-squares slope of log|x_n| against log n.
    """

    indices: np.ndarray
    log_magnitudes: np.ndarray
    exponent: int | None
    flag: str
    thresholds: dict
    fitted_exponent: float = math.nan
    per_exponent: list = field(default_factory=list)

    @property
    def exponent_or_flag(self):
        return self.exponent if self.exponent is not None else self.flag

    def to_dict(self, claim: str = "") -> dict:
        return {
            "claim": claim,
            "indices": self.indices.tolist(),
            "log_magnitudes": self.log_magnitudes.tolist(),
            "exponent_or_flag": self.exponent_or_flag,
            "fitted_exponent": self.fitted_exponent,
            "thresholds": self.thresholds,
        }


def _probe_indices(lo: int, hi: int, max_points: int = 4096) -> np.ndarray:
    if hi - lo + 1 <= max_points:
        return np.arange(lo, hi + 1)
    return np.unique(np.round(np.geomspace(lo, hi, max_points)).astype(int))


def _block_max(values, mask) -> float:
    return float(values[mask].max()) if mask.any() else -math.inf


def growth_exponent_probe(
    seq: FormalSequence, m_max: int, n_range: tuple[int, int] = (1, 300), threshold: float = GROWTH_THRESHOLD
) -> GrowthProfile:
    """Least m <= m_max with (|x_n| n^-m) bounded on n_range, judged from finite data.

    m passes when both hold (log scale, slack ``threshold``):

    * the sup of log|x_n| - m log n over the whole range exceeds the sup over
      the lower half of the range by at most ``threshold``;
    * the block maximum of log|x_n| over (hi/2, hi] exceeds that over
      (hi/4, hi/2] by at most m log 2 + ``threshold``.

    If no m passes, the growth is flagged super-polynomial when the block
    increments themselves increase (hi/4 -> hi/2 -> hi), else inconclusive.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    if lo < 1 or hi < 4 * lo:
        raise ValueError("n_range must cover at least two octaves (hi >= 4 lo >= 4)")
    idx = _probe_indices(lo, hi)
    logs = np.array([seq.log(int(n))[0] for n in idx])
    logn = np.log(idx)
    lower = idx <= hi / 2
    b0 = idx <= hi / 4
    b1 = (idx > hi / 4) & lower
    b2 = idx > hi / 2
    M0, M1, M2 = _block_max(logs, b0), _block_max(logs, b1), _block_max(logs, b2)
    inc1, inc2 = M1 - M0, M2 - M1

    per, exponent = [], None
    for m in range(m_max + 1):
        scaled = logs - m * logn
        stability = float(scaled.max() - scaled[lower].max())
        octave = inc2 - m * math.log(2)
        ok = stability <= threshold and octave <= threshold
        per.append({"m": m, "sup_growth": stability, "octave_excess": octave, "bounded": ok})
        if ok and exponent is None:
            exponent = m
    if exponent is not None:
        flag = "polynomial"
    elif inc2 > inc1 + threshold and inc2 > 0:
        flag = "super-polynomial"
    else:
        flag = "inconclusive"
    thresholds = {
        "log_slack": threshold,
        "m_max": m_max,
        "n_range": [lo, hi],
        "block_increments": [inc1, inc2],
        "criterion": "sup stable under range doubling and top-octave growth <= m log 2 (finite-data surrogate)",
    }
    finite = np.isfinite(logs)
    slope = float(np.polyfit(logn[finite], logs[finite], 1)[0]) if finite.sum() >= 2 else math.nan
    return GrowthProfile(idx, logs, exponent, flag, thresholds, slope, per)


def log_sinh(a: float) -> float:
    """log sinh(a) for a > 0 without overflow."""
    if a <= 0:
        raise ValueError("log_sinh needs a > 0")
    if a < 1:
        return math.log(math.sinh(a))
    return a + math.log1p(-math.exp(-2 * a)) - math.log(2)


def sinh_bound_holds(a: float) -> bool:
    """sinh(a) >= e^a/4, evaluated in log space (true iff a >= ln(2)/2)."""
    return log_sinh(a) >= a - math.log(4)


def bound_threshold_index(t: float) -> int:
    """Smallest n with n t >= ln(2)/2."""
    return max(1, math.ceil(HALF_LOG_2 / t))


def imaginary_sine_sequence(t: float) -> FormalSequence:
    """n -> |sin(i n t)| = sinh(n t), with a log evaluator."""
    return FormalSequence(
        lambda n: math.sinh(n * t),
        f"|sin(i n {t})|",
        lambda n: (log_sinh(n * t), 0.0),
    )


def real_sine_sequence(t: float) -> FormalSequence:
    return FormalSequence(lambda n: math.sin(n * t), f"sin(n {t})")


def complexification_failure_demo(
    t: float, n_range: tuple[int, int] = (1, 300), m_max: int = 20
) -> VerificationReport:
    """At it the sine family leaves every polynomially bounded sequence space.

    Checks |sin(int)| = sinh(nt) against complex sine where representable,
    the bound sinh(nt) >= e^(nt)/4 from the first n with nt >= ln(2)/2, and
    super-polynomial growth of (sinh(nt))_n alongside a bounded real-axis
    control (sin(nt))_n.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    lo, hi = n_range
    n_star = bound_threshold_index(t)
    ns = np.arange(lo, hi + 1)
    bound_ok = all(sinh_bound_holds(n * t) for n in ns if n >= n_star)
    # below the threshold the bound must fail, confirming the threshold is sharp
    below_ok = all(not sinh_bound_holds(n * t) for n in ns if n < n_star)
    identity_err = max(
        (abs(abs(np.sin(1j * n * t)) - math.sinh(n * t)) / math.sinh(n * t) for n in ns if n * t < 700),
        default=0.0,
    )
    identity_ok = identity_err <= 1e-12
    growth = growth_exponent_probe(imaginary_sine_sequence(t), m_max, n_range)
    control = growth_exponent_probe(real_sine_sequence(t), m_max, n_range)
    checks = {
        "bound_from_threshold": bound_ok,
        "bound_fails_below_threshold": below_ok,
        "sinh_identity": bool(identity_ok),
        "super_polynomial": growth.flag == "super-polynomial",
        "real_axis_bounded": control.exponent == 0,
    }
    profile = growth.to_dict()
    profile.pop("claim")
    return VerificationReport(
        claim="(sin(nt))_n is real analytic in t but (|sin(int)|)_n grows faster than any polynomial",
        verdict=Verdict.from_bool(all(checks.values())),
        measurements={
            **profile,
            "t": t,
            "threshold_index": n_star,
            "identity_relative_error": identity_err,
            "control_exponent_or_flag": control.exponent_or_flag,
            "checks": checks,
        },
        tolerances={"log_slack": GROWTH_THRESHOLD, "identity_relative": 1e-12},
        series={
            "columns": ["n", "log_magnitude"],
            "rows": [[int(n), float(v)] for n, v in zip(growth.indices, growth.log_magnitudes)],
        },
    )
