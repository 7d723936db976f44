"""Coordinatewise probes of complex differentiability for curves into C^N.

The central object is the curve z -> (e^{nz})_n and its corestrictions to
the subspaces E_k spanned by n^j w^n (j <= k).  Differentiability is checked
in the ambient product space (difference quotients, contour integrals), and
membership of the resulting derivatives in E_k is tested separately with
:func:`lcsprobe.sequences.span_membership`.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .report import Verdict, VerificationReport
from .sequences import (
    LOG_MAX,
    EvaluationOverflow,
    GeneratorSpec,
    Membership,
    SpanningFamily,
    TruncatedVector,
    span_membership,
)

MIN_STEP = 1e-12
DEFAULT_QUAD_ORDER = 32
DEFAULT_CIRCLE_NODES = 256
RATE_WINDOW = (3.5, 4.5)


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Rectangle:
    """Open rectangle (re_min, re_max) x (im_min, im_max) in C."""

    re_min: float = -1.0
    re_max: float = 1.0
    im_min: float = -1.0
    im_max: float = 1.0

    def contains(self, z) -> bool:
        z = complex(z)
        return self.re_min < z.real < self.re_max and self.im_min < z.imag < self.im_max

    def contains_disk(self, center, radius: float) -> bool:
        c = complex(center)
        return (
            self.re_min < c.real - radius
            and c.real + radius < self.re_max
            and self.im_min < c.imag - radius
            and c.imag + radius < self.im_max
        )

    def grid(self, per_axis: int = 3, shrink: float = 0.5) -> list[complex]:
        """Regular grid of interior points (the box shrunk about its centre)."""
        cx = 0.5 * (self.re_min + self.re_max)
        cy = 0.5 * (self.im_min + self.im_max)
        hx = 0.5 * (self.re_max - self.re_min) * shrink
        hy = 0.5 * (self.im_max - self.im_min) * shrink
        xs = np.linspace(cx - hx, cx + hx, per_axis)
        ys = np.linspace(cy - hy, cy + hy, per_axis)
        return [complex(x, y) for y in ys for x in xs]


@dataclass(frozen=True)
class Disk:
    """Open disk |z - center| < radius."""

    center: complex = 0j
    radius: float = 1.0

    def contains(self, z) -> bool:
        return abs(complex(z) - self.center) < self.radius

    def contains_disk(self, center, radius: float) -> bool:
        return abs(complex(center) - self.center) + radius < self.radius


DEFAULT_U = Rectangle()
PLANE = Rectangle(-math.inf, math.inf, -math.inf, math.inf)


# ---------------------------------------------------------------------------
# curve families


@dataclass(frozen=True)
class CurveFamily:
    """A map U -> C^N given by its coordinate functions.

    ``value(z, n)`` is vectorised over an integer array ``n``.
    ``derivative(j, z, n)`` returns the j-th complex derivative of each
    coordinate (None when no closed form is known, e.g. for non-holomorphic
    controls).  ``log_derivative(j, z, n)`` optionally returns log-modulus
    and phase arrays for overflow-safe evaluation.
    """

    value: Callable[[complex, np.ndarray], np.ndarray]
    domain: Rectangle | Disk = DEFAULT_U
    label: str = ""
    derivative: Callable[[int, complex, np.ndarray], np.ndarray] | None = None
    log_derivative: Callable[[int, complex, np.ndarray], tuple] | None = None

    def evaluate(self, z, N: int) -> np.ndarray:
        n = np.arange(1, int(N) + 1)
        return np.asarray(self.value(complex(z), n), dtype=complex) * np.ones(n.size)

    def with_coordinate(self, index: int, func: Callable[[complex], complex], label: str = ""):
        """Copy of this family with coordinate ``index`` replaced by ``func``.

        The result carries no closed-form derivative.
        """
        base = self.value

        def value(z, n):
            out = np.asarray(base(z, n), dtype=complex) * np.ones(np.shape(n))
            return np.where(np.asarray(n) == index, func(z), out)

        return CurveFamily(value, self.domain, label or f"{self.label} with coordinate {index} replaced")


def _exp_value(z, n):
    return np.exp(n * z)


def _exp_derivative(j, z, n):
    return n.astype(float) ** j * np.exp(n * z)


def _exp_log_derivative(j, z, n):
    n = np.asarray(n, dtype=float)
    return j * np.log(n) + n * z.real, n * z.imag


def exp_family(domain=DEFAULT_U) -> CurveFamily:
    """The curve z -> (e^{nz})_{n >= 1}."""
    return CurveFamily(_exp_value, domain, "exp", _exp_derivative, _exp_log_derivative)


def constant_family(c=1.0, domain=DEFAULT_U) -> CurveFamily:
    c = complex(c)
    return CurveFamily(
        lambda z, n: np.full(np.shape(n), c, dtype=complex),
        domain,
        f"constant {c}",
        lambda j, z, n: np.full(np.shape(n), c if j == 0 else 0, dtype=complex),
    )


def scalar_family(func: Callable[[complex], complex], domain=PLANE, label="scalar") -> CurveFamily:
    """Every coordinate equals ``func(z)``; used for scalar negative controls."""
    return CurveFamily(lambda z, n: np.full(np.shape(n), func(z), dtype=complex), domain, label)


def conj_family(domain=PLANE) -> CurveFamily:
    return scalar_family(lambda z: complex(z).conjugate(), domain, "conj")


def _require_in_domain(fam: CurveFamily, *points):
    for p in points:
        if not fam.domain.contains(p):
            raise ValueError(f"point {complex(p)} lies outside the domain {fam.domain}")


# ---------------------------------------------------------------------------
# derivatives


def derivative_exact_log(fam: CurveFamily, j: int, z, N: int) -> tuple[np.ndarray, np.ndarray]:
    if fam.log_derivative is None:
        raise ValueError(f"family {fam.label!r} has no log-space derivative")
    _require_in_domain(fam, z)
    return fam.log_derivative(int(j), complex(z), np.arange(1, int(N) + 1))


def derivative_exact(fam: CurveFamily, j: int, z, N: int) -> TruncatedVector:
    """Closed-form j-th derivative, truncated to N coordinates.

    For :func:`exp_family` coordinate n holds n^j e^{nz}.  Raises
    :class:`EvaluationOverflow` when that leaves the float range; use
    :func:`derivative_exact_log` then.
    """
    if j < 0:
        raise ValueError("derivative order must be non-negative")
    if fam.derivative is None:
        raise ValueError(f"family {fam.label!r} has no closed-form derivative")
    _require_in_domain(fam, z)
    if fam.log_derivative is not None:
        log_abs, _ = derivative_exact_log(fam, j, z, N)
        if np.max(log_abs) > LOG_MAX:
            raise EvaluationOverflow(
                f"derivative magnitude exp({np.max(log_abs):.1f}) exceeds float range"
            )
    n = np.arange(1, int(N) + 1)
    return TruncatedVector(fam.derivative(int(j), complex(z), n))


def difference_quotient(fam: CurveFamily, j: int, z, h, N: int) -> TruncatedVector:
    """Central quotient (F(z+h) - F(z-h)) / 2h of F = (j-1)-st exact derivative.

    For j = 0 this is just the truncation of the family at z.
    """
    if j < 0:
        raise ValueError("derivative order must be non-negative")
    z = complex(z)
    if j == 0:
        _require_in_domain(fam, z)
        return TruncatedVector(fam.evaluate(z, N))
    h = complex(h)
    if abs(h) < MIN_STEP:
        raise ValueError(f"step |h| = {abs(h):.1e} below {MIN_STEP:g}: cancellation dominates")
    _require_in_domain(fam, z, z + h, z - h)
    if j == 1:
        up, down = fam.evaluate(z + h, N), fam.evaluate(z - h, N)
    else:
        up = derivative_exact(fam, j - 1, z + h, N).coords
        down = derivative_exact(fam, j - 1, z - h, N).coords
    return TruncatedVector((up - down) / (2 * h))


def quotient_errors(fam: CurveFamily, j: int, z, h, N: int) -> np.ndarray:
    """Per-coordinate relative error of the difference quotient against the exact derivative."""
    exact = derivative_exact(fam, j, z, N).coords
    approx = difference_quotient(fam, j, z, h, N).coords
    return np.abs(approx - exact) / np.abs(exact)


def rate_check(fam: CurveFamily, j: int, z, h=1e-3, N: int = 10, window=RATE_WINDOW) -> VerificationReport:
    """Halving h must shrink every coordinate's error by a factor inside ``window`` (O(h^2))."""
    e1 = quotient_errors(fam, j, z, h, N)
    e2 = quotient_errors(fam, j, z, complex(h) / 2, N)
    ratios = e1 / e2
    ok = bool(np.all((ratios >= window[0]) & (ratios <= window[1])))
    return VerificationReport(
        claim=f"central difference quotients converge to f^({j}) at rate O(h^2)",
        verdict=Verdict.from_bool(ok),
        measurements={"j": j, "z": complex(z), "h": complex(h), "N": N,
                      "errors_h": e1, "errors_half_h": e2, "ratios": ratios},
        tolerances={"ratio_window": list(window)},
    )


# ---------------------------------------------------------------------------
# escape of the (k+1)-st derivative from E_k


def sample_E_k(k: int, z, extra_points: Iterable[complex] | None = None) -> SpanningFamily:
    """Generators n^j w^n (j <= k) for a finite sample of nodes w in M.

    The default sample is w in {e^z, e^{z-1}, -e^z}: the node the curve
    passes through plus two nodes of different modulus / argument.  Nodes
    crowded near e^z make floating least squares unable to separate
    n^{k+1} e^{nz} from their span on short windows, so the default keeps
    them apart.  ``extra_points`` replaces the two companions by e^u for the
    given u.
    """
    z = complex(z)
    us = [z] + ([z - 1, z + 1j * math.pi] if extra_points is None else list(extra_points))
    gens = []
    for u in us:
        for j in range(k + 1):
            g = GeneratorSpec(j, cmath.exp(u))
            if g not in gens:
                gens.append(g)
    nodes = ", ".join(f"{complex(u):.4g}" for u in us)
    return SpanningFamily(tuple(gens), f"E_{k} sample at w = exp({{{nodes}}})")


def escape_demo(
    k: int,
    z,
    family: SpanningFamily | None = None,
    schedule: Sequence[int] | None = None,
    tol: float = 1e-8,
    h: float = 1e-3,
    N_rate: int = 10,
) -> VerificationReport:
    """Evidence that z -> (e^{nz}) into E_k is C^k but not C^{k+1}.

    (i) f^(j)(z) = h_{j,e^z} is a member of the E_k sample for j <= k;
    (ii) f^(k+1)(z) = h_{k+1,e^z} escapes it (NON_MEMBER);
    (iii) difference quotients of f^(k) converge coordinatewise to
    f^(k+1) at rate O(h^2), so the limit exists in C^N.
    """
    z = complex(z)
    fam = exp_family()
    _require_in_domain(fam, z)
    family = family if family is not None else sample_E_k(k, z)
    w = cmath.exp(z)

    members = [span_membership(GeneratorSpec(j, w), family, schedule, tol) for j in range(k + 1)]
    escape = span_membership(GeneratorSpec(k + 1, w), family, schedule, tol)
    rate = rate_check(fam, k + 1, z, h, N_rate)

    def member_verdict(res):
        return {Membership.MEMBER: Verdict.PASS, Membership.NON_MEMBER: Verdict.FAIL}.get(
            res.status, Verdict.INCONCLUSIVE
        )

    def escape_verdict(res):
        return {Membership.NON_MEMBER: Verdict.PASS, Membership.MEMBER: Verdict.FAIL}.get(
            res.status, Verdict.INCONCLUSIVE
        )

    sub = {
        "derivatives_in_E_k": Verdict.combine(member_verdict(r) for r in members),
        "next_derivative_escapes": escape_verdict(escape),
        "difference_quotient_rate": rate.verdict,
    }
    rows = [[N, r, escape.status.value] for N, r in zip(escape.truncations, escape.residuals)]
    return VerificationReport(
        claim=f"f_{k}: U -> E_{k}, z -> (e^(nz))_n is C^{k} but not C^{k + 1}",
        verdict=Verdict.combine(sub.values()),
        measurements={
            "k": k,
            "z": z,
            "family": family.label,
            "generators": [list(g.as_triple()) for g in family.generators],
            "sub_verdicts": sub,
            "member_statuses": [r.status.value for r in members],
            "member_residuals": [r.residuals[-1] for r in members],
            "member_coefficients": [r.coefficients for r in members],
            "truncations": escape.truncations,
            "residuals": escape.residuals,
            "escape_status": escape.status.value,
            "rate_ratios": rate.measurements["ratios"],
        },
        tolerances={"membership": tol, "non_member_factor": 10.0, "rate_window": list(RATE_WINDOW)},
        series={"columns": ["N", "residual", "verdict"], "rows": rows},
        notes=["non-membership is evidence from finite truncations, not a proof"],
    )


# ---------------------------------------------------------------------------
# contour integrals


@dataclass(frozen=True)
class Triangle:
    vertices: tuple

    def __post_init__(self):
        v = tuple(complex(p) for p in self.vertices)
        if len(v) != 3:
            raise ValueError("a triangle has exactly three vertices")
        object.__setattr__(self, "vertices", v)

    @property
    def signed_area(self) -> float:
        a, b, c = self.vertices
        return 0.5 * ((b - a).conjugate() * (c - a)).imag

    def edges(self):
        a, b, c = self.vertices
        return ((a, b), (b, c), (c, a))

    def split(self) -> tuple["Triangle", "Triangle"]:
        """Cut along the median from the first vertex; both halves keep the orientation."""
        a, b, c = self.vertices
        mid = 0.5 * (b + c)
        return Triangle((a, b, mid)), Triangle((a, mid, c))


def _check_triangle(fam: CurveFamily, tri: Triangle, allow_degenerate: bool):
    if not allow_degenerate and abs(tri.signed_area) == 0:
        raise ValueError("degenerate triangle (zero area)")
    # domains are convex, so vertices inside means triangle inside
    _require_in_domain(fam, *tri.vertices)


def triangle_integral(
    fam: CurveFamily,
    tri: Triangle,
    quad_order: int = DEFAULT_QUAD_ORDER,
    N: int = 10,
    allow_degenerate: bool = False,
) -> TruncatedVector:
    """Gauss-Legendre approximation of the boundary integral of each coordinate.

    ``quad_order`` nodes per edge; edges are summed in vertex order.
    """
    _check_triangle(fam, tri, allow_degenerate)
    s, w = np.polynomial.legendre.leggauss(int(quad_order))
    total = np.zeros(int(N), dtype=complex)
    for a, b in tri.edges():
        half = 0.5 * (b - a)
        for node, weight in zip(a + half * (s + 1), w):
            total += weight * half * fam.evaluate(node, N)
    return TruncatedVector(total)


def boundary_scale(fam: CurveFamily, tri: Triangle, quad_order: int = DEFAULT_QUAD_ORDER, N: int = 10):
    """Largest coordinate modulus over the quadrature nodes on the boundary."""
    s, _ = np.polynomial.legendre.leggauss(int(quad_order))
    peak = np.zeros(int(N))
    for a, b in tri.edges():
        for node in a + 0.5 * (b - a) * (s + 1):
            peak = np.maximum(peak, np.abs(fam.evaluate(node, N)))
    return peak


def triangle_check(
    fam: CurveFamily,
    tri: Triangle,
    quad_order: int = DEFAULT_QUAD_ORDER,
    N: int = 10,
    tol: float = 1e-10,
) -> VerificationReport:
    """Boundary integral must vanish relative to the boundary magnitude."""
    integral = triangle_integral(fam, tri, quad_order, N).coords
    scale = boundary_scale(fam, tri, quad_order, N)
    rel = np.abs(integral) / np.where(scale > 0, scale, 1.0)
    return VerificationReport(
        claim="integral of f over the boundary of each triangle in U vanishes",
        verdict=Verdict.from_bool(bool(np.all(rel <= tol))),
        measurements={"vertices": list(tri.vertices), "quad_order": quad_order,
                      "integrals": integral, "per_coordinate_errors": rel},
        tolerances={"relative": tol},
    )


def cauchy_integral(fam: CurveFamily, z0, r: float, z, nodes: int = DEFAULT_CIRCLE_NODES, N: int = 10):
    """Trapezoidal rule for (1/2 pi i) * circle integral of f(zeta)/(zeta - z)."""
    z0, z = complex(z0), complex(z)
    theta = 2 * np.pi * np.arange(int(nodes)) / int(nodes)
    ring = r * np.exp(1j * theta)
    total = np.zeros(int(N), dtype=complex)
    # fixed summation order, node by node
    for offset in ring:
        total += fam.evaluate(z0 + offset, N) * (offset / (offset - (z - z0)))
    return total / int(nodes)


def cauchy_formula_check(
    fam: CurveFamily,
    z0,
    r: float,
    z,
    nodes: int = DEFAULT_CIRCLE_NODES,
    N: int = 10,
    tol: float = 1e-10,
) -> VerificationReport:
    """Compare the Cauchy integral over |zeta - z0| = r with f(z), coordinatewise.

    Errors are relative to |f_n(z)| (absolute where f_n(z) = 0).
    """
    z0, z = complex(z0), complex(z)
    if r <= 0:
        raise ValueError("radius must be positive")
    if abs(z - z0) >= r:
        raise ValueError(f"z = {z} is not inside the circle |zeta - {z0}| = {r}")
    if not fam.domain.contains_disk(z0, r):
        raise ValueError(f"closed disk of radius {r} about {z0} is not inside {fam.domain}")
    if abs(z - z0) > 0.95 * r:
        warnings.warn("z within 0.05 r of the circle: trapezoidal accuracy degrades", stacklevel=2)
    integral = cauchy_integral(fam, z0, r, z, nodes, N)
    direct = fam.evaluate(z, N)
    diff = np.abs(integral - direct)
    mag = np.abs(direct)
    err = np.where(mag > 0, diff / np.where(mag > 0, mag, 1.0), diff)
    return VerificationReport(
        claim="f(z) = (1/2 pi i) * integral over |zeta - z0| = r of f(zeta)/(zeta - z)",
        verdict=Verdict.from_bool(bool(np.all(err <= tol))),
        measurements={"z0": z0, "r": r, "z": z, "nodes": int(nodes),
                      "per_coordinate_errors": err},
        tolerances={"relative": tol},
    )


def weak_analyticity_check(
    fam: CurveFamily,
    coords: Iterable[int],
    z0=0j,
    r: float = 0.5,
    points: Sequence[complex] = (0j, 0.1, 0.1j),
    tol: float = 1e-10,
    nodes: int = DEFAULT_CIRCLE_NODES,
) -> VerificationReport:
    """Cauchy's formula for each coordinate functional at each sample point.

    Coordinate projections separate the points of C^N, so this is the
    computable stand-in for composing with every continuous functional.
    """
    coords = sorted(set(int(n) for n in coords))
    if not coords or coords[0] < 1:
        raise ValueError("coordinates must be positive integers")
    N = coords[-1]
    idx = np.array(coords) - 1
    worst = np.zeros(len(coords))
    per_point = []
    for p in points:
        rep = cauchy_formula_check(fam, z0, r, p, nodes, N, tol)
        errs = np.asarray(rep.measurements["per_coordinate_errors"])[idx]
        per_point.append({"z": complex(p), "errors": errs})
        worst = np.maximum(worst, errs)
    failing = [n for n, e in zip(coords, worst) if not e <= tol]
    return VerificationReport(
        claim="lambda_n o f is complex analytic for every coordinate functional lambda_n",
        verdict=Verdict.from_bool(not failing),
        measurements={"coords": coords, "z0": complex(z0), "r": r, "nodes": int(nodes),
                      "per_coordinate_errors": worst, "per_point": per_point,
                      "failing_coordinates": failing},
        tolerances={"relative": tol},
    )
