"""The analytic map g(x) = sum_k 2^k x_k^(2k) on l^1 and its unboundedness witnesses.

Vectors are finitely supported and their coordinates are stored exactly as
Gaussian rationals, so every inequality in the witness construction
(|2 x_m| < 1, 2^m >= N + |g(x)| + 1, |g(y)| >= N, ||y - x||_1 <= 2) is
decided without rounding.  Floating evaluation of g goes through log space,
since 2^k x_k^(2k) overflows quickly once |x_k| > 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ._gauss import GaussianRational
from .report import Verdict, VerificationReport

_FLOAT_LOG_MAX = math.log(np.finfo(float).max)


class SummableVector:
    """Finitely supported element of l^1(N, C).

    Construct from a mapping ``{k: value}`` (k >= 1) or a sequence whose
    i-th entry is coordinate i + 1.  Zero entries are dropped.  Instances are
    immutable; operations return new vectors.
    """

    __slots__ = ("_support", "_norm1", "_g")

    def __init__(self, values: Mapping[int, object] | Iterable[object] = ()):
        if not isinstance(values, Mapping):
            values = {i + 1: v for i, v in enumerate(values)}
        support = {}
        for k, v in values.items():
            if int(k) != k or k < 1:
                raise ValueError(f"l^1 indices start at 1, got {k!r}")
            q = GaussianRational.of(v)
            if q:
                support[int(k)] = q
        self._support = dict(sorted(support.items()))
        self._norm1 = math.fsum(abs(v) for v in self._support.values())
        self._g = None

    @property
    def support(self) -> dict:
        return dict(self._support)

    @property
    def norm1(self) -> float:
        return self._norm1

    def __getitem__(self, k: int) -> GaussianRational:
        return self._support.get(int(k), GaussianRational(0))

    def __eq__(self, other):
        if not isinstance(other, SummableVector):
            return NotImplemented
        return self._support == other._support

    def __hash__(self):
        return hash(tuple(self._support.items()))

    def __repr__(self):
        items = ", ".join(f"{k}: {complex(v)}" for k, v in self._support.items())
        return f"SummableVector({{{items}}})"

    def __sub__(self, other: "SummableVector") -> "SummableVector":
        keys = set(self._support) | set(other._support)
        return SummableVector({k: self[k] - other[k] for k in keys})

    def max_index(self) -> int:
        return max(self._support, default=0)

    def scaled(self, factor) -> "SummableVector":
        f = GaussianRational.of(factor)
        return SummableVector({k: v * f for k, v in self._support.items()})

    def with_coordinate(self, k: int, value) -> "SummableVector":
        d = dict(self._support)
        d[int(k)] = GaussianRational.of(value)
        return SummableVector(d)

    def as_complex(self) -> dict:
        return {k: complex(v) for k, v in self._support.items()}

    def to_pairs(self) -> list:
        return [[k, float(v.re), float(v.im)] for k, v in self._support.items()]


@dataclass(frozen=True)
class TailBound:
    """Geometric bound ratio^m / (1 - ratio) >= sum_{k >= m} ratio^k."""

    m: int
    ratio: float
    bound: float = field(default=math.nan)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("tail start index must be >= 1")
        if not 0 <= self.ratio < 1:
            raise ValueError(f"ratio must lie in [0, 1), got {self.ratio}")
        if math.isnan(self.bound):
            object.__setattr__(self, "bound", self.ratio**self.m / (1 - self.ratio))


@dataclass(frozen=True)
class GValue:
    """Floating value of g with a certified bound on the omitted tail.

    ``value`` is ``inf`` when |g| exceeds the float range; ``log_abs`` and
    ``phase`` remain exact to rounding in that case.
    """

    value: complex
    error_bound: float
    log_abs: float
    phase: float
    terms_used: int


def _term_logs(x: SummableVector, upto: int | None = None):
    logs, phases = [], []
    for k, v in x.support.items():
        if upto is not None and k >= upto:
            break
        z = complex(v)
        logs.append(k * math.log(2) + 2 * k * math.log(abs(z)))
        phases.append(2 * k * cmath.phase(z))
    return np.array(logs), np.array(phases)


def _log_sum(logs, phases) -> tuple[complex, float, float]:
    if logs.size == 0:
        return 0j, -math.inf, 0.0
    top = logs.max()
    s = complex(np.sum(np.exp(logs - top) * np.exp(1j * phases)))
    if s == 0:
        return 0j, -math.inf, 0.0
    log_abs = top + math.log(abs(s))
    phase = cmath.phase(s)
    value = cmath.rect(math.exp(log_abs), phase) if log_abs < _FLOAT_LOG_MAX else complex(math.inf, math.inf)
    return value, log_abs, phase


def tail_bound(x: SummableVector, m: int) -> TailBound:
    """Bound on sum_{k >= m} |2^k x_k^(2k)| from ratio = 2 max_{k >= m} |x_k|^2."""
    tail = [v.abs2() for k, v in x.support.items() if k >= m]
    ratio = 2 * max(tail, default=Fraction(0))
    if ratio >= 1:
        raise ValueError(f"2|x_k|^2 = {float(ratio):.3g} >= 1 beyond index {m}: tail not certifiable")
    return TailBound(m, float(ratio))


def g_eval(x: SummableVector, tol: float = 0.0) -> GValue:
    """g(x) = sum_k 2^k x_k^(2k).

    With ``tol == 0`` every supported term is summed (finite support, so the
    result is exact up to rounding).  With ``tol > 0`` the sum stops at the
    smallest m whose certified tail bound is <= tol.
    """
    m = x.max_index() + 1
    err = 0.0
    if tol > 0:
        for cand in range(1, m):
            try:
                tb = tail_bound(x, cand)
            except ValueError:
                continue
            if tb.bound <= tol:
                m, err = cand, tb.bound
                break
    logs, phases = _term_logs(x, m)
    value, log_abs, phase = _log_sum(logs, phases)
    return GValue(value, err, log_abs, phase, m - 1)


def g_partial(x: SummableVector, m: int) -> complex:
    """Partial sum over k < m."""
    logs, phases = _term_logs(x, m)
    return _log_sum(logs, phases)[0]


def _int_pow(a: int, b: int, e: int) -> tuple[int, int]:
    """(a + bi)^e over the Gaussian integers."""
    ra, rb = 1, 0
    while e:
        if e & 1:
            ra, rb = ra * a - rb * b, ra * b + rb * a
        a, b = a * a - b * b, 2 * a * b
        e >>= 1
    return ra, rb


def _term_exact(k: int, v: GaussianRational) -> tuple[int, int, int]:
    """2^k v^(2k) as (re_num, im_num, den) with integer arithmetic only."""
    d = math.lcm(v.re.denominator, v.im.denominator)
    a, b = _int_pow(v.re.numerator * (d // v.re.denominator), v.im.numerator * (d // v.im.denominator), 2 * k)
    return a << k, b << k, d ** (2 * k)


def _g_parts(x: SummableVector) -> tuple[int, int, int]:
    """g(x) as unnormalised integers (re, im, den); cached since x is immutable."""
    if x._g is None:
        terms = [_term_exact(k, v) for k, v in x.support.items()]
        den = math.lcm(*(t[2] for t in terms)) if terms else 1
        re = sum(t[0] * (den // t[2]) for t in terms)
        im = sum(t[1] * (den // t[2]) for t in terms)
        x._g = (re, im, den)
    return x._g


def _to_gauss(parts) -> GaussianRational:
    re, im, den = parts
    return GaussianRational(Fraction(re, den), Fraction(im, den))


def _modulus_at_most(parts, bound: Fraction) -> bool:
    """Exact test of |re + i im| / den <= bound."""
    re, im, den = parts
    if bound < 0:
        return False
    return (re * re + im * im) * bound.denominator**2 <= bound.numerator**2 * den * den


def g_exact(x: SummableVector) -> GaussianRational:
    return _to_gauss(_g_parts(x))


def f_component_eval(x: SummableVector, n: int, tol: float = 0.0) -> GValue:
    """n-th coordinate of x -> (g(nx))_n."""
    if int(n) != n or n < 1:
        raise ValueError("component index must be a positive integer")
    return g_eval(x.scaled(int(n)), tol)


def uniform_ball_bound(x: SummableVector, m: int, radius: float = 0.25) -> TailBound:
    """Uniform tail bound for g on the open l^1 ball of ``radius`` about x.

    Requires |x_k| < 1/2 - radius for k >= m, so |y_k| < 1/2 on the ball and
    sum_{k >= m} sup |2^k y_k^(2k)| <= sum_{k >= m} 2^-k = 2^(1-m).
    """
    r = Fraction(radius)
    if not 0 < r < Fraction(1, 2):
        raise ValueError("radius must lie in (0, 1/2)")
    limit = (Fraction(1, 2) - r) ** 2
    for k, v in x.support.items():
        if k >= m and v.abs2() >= limit:
            raise ValueError(
                f"|x_{k}| = {abs(v):.4g} >= {float(Fraction(1, 2) - r):.4g}; choose m > {k}"
            )
    return TailBound(int(m), 0.5)


def sample_ball(x: SummableVector, radius: float, rng: np.random.Generator, indices) -> SummableVector:
    """Random point of the open l^1 ball about x, perturbing only ``indices``."""
    indices = list(indices)
    d = rng.normal(size=len(indices)) + 1j * rng.normal(size=len(indices))
    d *= rng.uniform(0, 1) * radius / np.sum(np.abs(d)) * (1 - 1e-9)
    out = dict(x.support)
    for k, dk in zip(indices, d):
        out[k] = x[k] + GaussianRational.of(complex(dk))
    return SummableVector(out)


@dataclass
class Witness:
    """y close to x with |g(y)| >= N."""

    x: SummableVector
    N: float
    m: int
    y: SummableVector
    distance_ok: bool
    value_ok: bool
    inequality_ok: bool
    _gx: tuple = field(repr=False)
    _gy: tuple = field(repr=False)

    @property
    def g_x(self) -> GaussianRational:
        return _to_gauss(self._gx)

    @property
    def g_y(self) -> GaussianRational:
        return _to_gauss(self._gy)

    @property
    def g_of_y(self) -> complex:
        return complex(self.g_y)

    @property
    def value(self) -> float:
        return abs(self.g_of_y)

    @property
    def norm1_distance(self) -> float:
        return (self.y - self.x).norm1

    @property
    def inequality_lhs(self) -> float:
        """2^m - |g(x)| - 2^m |x_m|^(2m), the lower estimate for |g(y)|."""
        xm2 = self.x[self.m].abs2()
        return float(2**self.m - 2**self.m * xm2**self.m) - abs(self.g_x)

    @property
    def ok(self) -> bool:
        return self.distance_ok and self.value_ok and self.inequality_ok

    def to_dict(self) -> dict:
        return {
            "x": self.x.to_pairs(),
            "N": self.N,
            "m": self.m,
            "y": self.y.to_pairs(),
            "g_of_y": [self.g_of_y.real, self.g_of_y.imag],
            "norm1_distance": self.norm1_distance,
            "inequality_check": {
                "lower_estimate": self.inequality_lhs,
                "holds": self.inequality_ok,
                "value_at_least_N": self.value_ok,
                "distance_at_most_2": self.distance_ok,
            },
        }


def unboundedness_witness(x: SummableVector, N) -> Witness:
    """Smallest m with |2 x_m| < 1 and 2^m >= N + |g(x)| + 1; y = x with y_m = 1."""
    Nq = Fraction(N)
    if Nq < 0:
        raise ValueError("N must be non-negative")
    gx = _g_parts(x)

    def big_enough(m):
        return _modulus_at_most(gx, Fraction(2**m) - Nq - 1)

    # 2^m >= N + |g(x)| + 1 is monotone in m: estimate its threshold, then fix it exactly
    log_g = g_eval(x).log_abs
    est = math.log2(float(Nq) + 1) if log_g < 0 else max(log_g / math.log(2), math.log2(float(Nq) + 1))
    m = max(1, int(est) - 1)
    while m > 1 and big_enough(m - 1):
        m -= 1
    while not big_enough(m):
        m += 1
    while 4 * x[m].abs2() >= 1:
        m += 1

    power = 2**m
    t_re, t_im, t_den = _term_exact(m, x[m])
    re, im, den = gx
    # g(y) = g(x) + 2^m - 2^m x_m^(2m)
    gy = ((re + power * den) * t_den - t_re * den, im * t_den - t_im * den, den * t_den)
    gy_re, gy_im, gy_den = gy
    xm2 = x[m].abs2()
    return Witness(
        x=x,
        N=float(N),
        m=m,
        y=x.with_coordinate(m, 1),
        distance_ok=(GaussianRational(1) - x[m]).abs2() <= 4,
        value_ok=(gy_re**2 + gy_im**2) * Nq.denominator**2 >= Nq.numerator**2 * gy_den**2,
        inequality_ok=_modulus_at_most(gx, power - power * xm2**m - Nq),
        _gx=gx,
        _gy=gy,
    )


@dataclass
class LocalWitness:
    """Point y in the ball of ``radius`` about x where coordinate n of f has modulus >= N."""

    x: SummableVector
    radius: float
    N: float
    n: int
    y: SummableVector
    inner: Witness
    within_radius: bool

    @property
    def value(self) -> float:
        return self.inner.value

    @property
    def ok(self) -> bool:
        return self.within_radius and self.inner.value_ok

    def to_dict(self) -> dict:
        return {
            "x": self.x.to_pairs(),
            "radius": self.radius,
            "N": self.N,
            "n": self.n,
            "m": self.inner.m,
            "y": self.y.to_pairs(),
            "g_of_ny": [self.inner.g_of_y.real, self.inner.g_of_y.imag],
            "norm1_distance": (self.y - self.x).norm1,
            "inequality_check": {
                "holds": self.inner.inequality_ok,
                "value_at_least_N": self.inner.value_ok,
                "within_radius": self.within_radius,
            },
        }


def local_unboundedness_demo(x: SummableVector, radius, N) -> LocalWitness:
    """Shrink the radius-2 witness for g into any ball via the n-th component of f.

    With n = ceil(2 / radius), the witness y' for g near n x satisfies
    ||y' - n x||_1 <= 2, so y = y'/n is within 2/n <= radius of x and
    f(y)_n = g(y') is at least N in modulus.
    """
    r = Fraction(radius)
    if r <= 0:
        raise ValueError("radius must be positive")
    n = math.ceil(Fraction(2) / r)
    inner = unboundedness_witness(x.scaled(n), N)
    y = inner.y.scaled(Fraction(1, n))
    diff = y - x
    # y and x differ in coordinate m only
    within = sum(v.abs2() for v in diff.support.values()) <= r * r if len(diff.support) <= 1 else diff.norm1 <= float(r)
    return LocalWitness(x, float(radius), float(N), n, y, inner, within)


def witness_report(w: Witness | LocalWitness) -> VerificationReport:
    local = isinstance(w, LocalWitness)
    return VerificationReport(
        claim=(
            "f(x) = (g(nx))_n is unbounded on every ball about x"
            if local
            else "g is unbounded on the closed l^1 ball of radius 2 about x"
        ),
        verdict=Verdict.from_bool(w.ok),
        measurements=w.to_dict(),
        tolerances={"exact": True},
    )
