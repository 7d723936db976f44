"""Complex sequences n -> C, the family n^k z^n, and linear-algebra certificates.

Elements of C^N are handled through two views: a :class:`FormalSequence`
(a computable map on the positive integers) and a :class:`TruncatedVector`
(its first N coordinates).  Because the topology on C^N is the product
topology, every statement is probed on finite coordinate windows with an
escalating truncation schedule.

Magnitudes like |z|^n leave the float range quickly, so every generator has
a log-space evaluation path (log-modulus plus phase) and all matrices are
assembled from logs with per-row rescaling.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._gauss import GaussianRational
from .report import Verdict, VerificationReport

# Largest log-magnitude we let the linear (non-log) path produce, ~log(1e300).
LOG_MAX = math.log(1e300)

DEFAULT_RANK_TOL = 1e-10
CONFIDENT_GAP = 1e4


class EvaluationOverflow(OverflowError):
    """The linear-space value would leave the float range; use the log path."""


class IllConditionedWarning(UserWarning):
    """Floating rank decision is too close to the singular-value threshold."""


def _wrap_phase(phi: float) -> float:
    phi = math.fmod(phi, 2 * math.pi)
    if phi > math.pi:
        phi -= 2 * math.pi
    elif phi <= -math.pi:
        phi += 2 * math.pi
    return phi


class GeneratorSpec:
    """The pair (k, z) naming the sequence n -> n^k z^n.

    ``z`` is stored exactly as a Gaussian rational (floats convert
    losslessly), so equality and hashing are exact and exact-mode rank
    computations need no further input.
    """

    __slots__ = ("k", "z_exact")

    def __init__(self, k: int, z):
        if int(k) != k:
            raise ValueError(f"exponent k must be an integer, got {k!r}")
        zq = GaussianRational.of(z)
        if not zq:
            raise ValueError("z must be nonzero")
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "z_exact", zq)

    def __setattr__(self, name, value):
        raise AttributeError("GeneratorSpec is immutable")

    @property
    def z(self) -> complex:
        return complex(self.z_exact)

    def __eq__(self, other):
        if not isinstance(other, GeneratorSpec):
            return NotImplemented
        return self.k == other.k and self.z_exact == other.z_exact

    def __hash__(self):
        return hash((self.k, self.z_exact))

    def __repr__(self):
        return f"GeneratorSpec(k={self.k}, z={self.z!r})"

    def as_triple(self) -> tuple[int, float, float]:
        z = self.z
        return (self.k, z.real, z.imag)


def _check_index(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"sequence index must be a positive integer, got {n!r}")
    return int(n)


def eval_h_log(spec: GeneratorSpec, n: int) -> tuple[float, float]:
    """Return ``(log|n^k z^n|, arg(n^k z^n))`` without ever forming z^n."""
    n = _check_index(n)
    z = spec.z
    log_abs = spec.k * math.log(n) + n * math.log(abs(z))
    return log_abs, _wrap_phase(n * cmath.phase(z))


def eval_h(spec: GeneratorSpec, n: int) -> complex:
    """Return n^k z^n.

    Raises :class:`EvaluationOverflow` when the modulus would exceed ~1e300;
    callers then switch to :func:`eval_h_log`.
    """
    log_abs, _ = eval_h_log(spec, n)
    if log_abs > LOG_MAX:
        raise EvaluationOverflow(
            f"|h_({spec.k},{spec.z})({n})| = exp({log_abs:.1f}) exceeds float range"
        )
    return complex(n**spec.k * spec.z**n)


def eval_h_exact(spec: GeneratorSpec, n: int) -> GaussianRational:
    n = _check_index(n)
    return GaussianRational(Fraction(n) ** spec.k) * spec.z_exact**n


@dataclass(frozen=True)
class FormalSequence:
    """A computable element of C^N.

    ``log_evaluator`` (optional) returns ``(log|value|, phase)`` and must
    agree with ``evaluator`` wherever the latter is representable.
    """

    evaluator: Callable[[int], complex]
    description: str = ""
    log_evaluator: Callable[[int], tuple[float, float]] | None = None

    def __call__(self, n: int) -> complex:
        return complex(self.evaluator(_check_index(n)))

    def log(self, n: int) -> tuple[float, float]:
        n = _check_index(n)
        if self.log_evaluator is not None:
            return self.log_evaluator(n)
        v = self(n)
        if v == 0:
            return -math.inf, 0.0
        return math.log(abs(v)), cmath.phase(v)

    def __repr__(self):
        return f"FormalSequence({self.description or '<anonymous>'})"


def h_sequence(spec: GeneratorSpec) -> FormalSequence:
    return FormalSequence(
        lambda n: eval_h(spec, n),
        f"h_({spec.k},{spec.z})",
        lambda n: eval_h_log(spec, n),
    )


def constant(c) -> FormalSequence:
    c = complex(c)
    return FormalSequence(lambda n: c, f"constant {c}")


def zero() -> FormalSequence:
    return constant(0)


def multiply(a: FormalSequence, b: FormalSequence) -> FormalSequence:
    """Pointwise product."""

    def log_eval(n):
        la, pa = a.log(n)
        lb, pb = b.log(n)
        return la + lb, _wrap_phase(pa + pb)

    return FormalSequence(
        lambda n: a(n) * b(n), f"({a.description})*({b.description})", log_eval
    )


def shift_apply(seq: FormalSequence) -> FormalSequence:
    """The shift operator: returns n -> seq(n+1)."""
    return FormalSequence(
        lambda n: seq(n + 1),
        f"S({seq.description})",
        lambda n: seq.log(n + 1),
    )


@dataclass(frozen=True, eq=False)
class TruncatedVector:
    """First N coordinates of a sequence; ``coords[n-1]`` is the value at n."""

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("a truncation needs a non-empty 1-d coordinate array")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def N(self) -> int:
        return self.coords.size

    def __len__(self):
        return self.coords.size

    def at(self, n: int) -> complex:
        return complex(self.coords[_check_index(n) - 1])


def truncate(seq: FormalSequence, N: int) -> TruncatedVector:
    if int(N) != N or N < 1:
        raise ValueError(f"truncation length must be a positive integer, got {N!r}")
    return TruncatedVector(np.array([seq(n) for n in range(1, int(N) + 1)], dtype=complex))


def truncate_log(seq: FormalSequence, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Log-space truncation: arrays of log-moduli and phases for n = 1..N."""
    pairs = [seq.log(n) for n in range(1, int(N) + 1)]
    return (np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))


@dataclass(frozen=True)
class SpanningFamily:
    """Finite family of generators spanning a sampled subspace of C^N."""

    generators: tuple
    label: str = ""

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            seen, dups = set(), []
            for g in gens:
                if g in seen:
                    dups.append(g)
                seen.add(g)
            raise ValueError(f"duplicate generators in family: {dups}")
        object.__setattr__(self, "generators", gens)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


# ---------------------------------------------------------------------------
# shift-operator eigenstructure


def nilpotency_check(
    spec: GeneratorSpec, N: int, tol: float = 1e-12, power: int | None = None
) -> VerificationReport:
    """Check that (S - z)^power annihilates h_{k,z} on the first N - power coordinates.

    ``power`` defaults to k + 1, which places h_{k,z} in the generalized
    eigenspace of the shift for eigenvalue z.  Each residual is compared with
    the largest intermediate magnitude feeding that coordinate.
    """
    p = spec.k + 1 if power is None else int(power)
    if p < 0:
        raise ValueError("power must be non-negative")
    if N < p + 1:
        raise ValueError(f"need N >= {p + 1} coordinates to apply (S - z)^{p}")
    z = spec.z
    v = truncate(h_sequence(spec), N).coords.copy()
    scale = np.abs(v)
    for _ in range(p):
        v = v[1:] - z * v[:-1]
        scale = np.maximum(scale[1:], abs(z) * scale[:-1])
    bad = np.flatnonzero(np.abs(v) > tol * scale)
    verdict = Verdict.from_bool(bad.size == 0)
    measurements = {
        "k": spec.k,
        "z": spec.z,
        "power": p,
        "N": int(N),
        "residuals": np.abs(v),
        "scales": scale,
    }
    if bad.size:
        measurements["violations"] = [
            {"n": int(i) + 1, "residual": float(abs(v[i])), "scale": float(scale[i])}
            for i in bad
        ]
    return VerificationReport(
        claim=f"(S - z)^{p} h_{spec.k},z = 0 (generalized eigenvector of the shift)",
        verdict=verdict,
        measurements=measurements,
        tolerances={"relative": tol},
    )


# ---------------------------------------------------------------------------
# independence


def _log_matrix(generators: Sequence[GeneratorSpec], N: int):
    n = np.arange(1, N + 1, dtype=float)[:, None]
    k = np.array([g.k for g in generators], dtype=float)[None, :]
    z = np.array([g.z for g in generators], dtype=complex)[None, :]
    log_abs = k * np.log(n) + n * np.log(np.abs(z))
    phase = n * np.angle(z)
    return log_abs, phase


def _from_logs(log_abs, phase):
    return np.exp(log_abs) * np.exp(1j * phase)


@dataclass
class RankCertificate:
    rank: int
    m: int
    N: int
    mode: str
    generators: tuple
    rescaled: bool
    tol: float
    singular_values: np.ndarray | None = None
    gap: float | None = None
    confident: bool = True
    determinant: GaussianRational | None = None

    @property
    def verdict(self) -> Verdict:
        if self.mode == "floating" and not self.confident:
            return Verdict.INCONCLUSIVE
        return Verdict.from_bool(self.rank == self.m)

    def to_dict(self) -> dict:
        out = {
            "claim": "generators n^k z^n are linearly independent in C^N",
            "generators": [list(g.as_triple()) for g in self.generators],
            "truncations": [self.N],
            "residuals": [],
            "rank": self.rank,
            "mode": self.mode,
            "tolerances": {"rank_rel": self.tol, "confident_gap": CONFIDENT_GAP},
            "verdict": self.verdict.value,
        }
        if self.singular_values is not None:
            out["singular_values"] = [float(s) for s in self.singular_values]
            out["gap"] = self.gap
        if self.determinant is not None:
            out["determinant"] = [str(self.determinant.re), str(self.determinant.im)]
        return out


def _gi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_exact_div(a, b):
    den = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % den or im % den:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return (re // den, im // den)


def bareiss_rank(rows):
    """Fraction-free (Bareiss) elimination over the Gaussian integers.

    ``rows`` is a list of lists of (re, im) integer pairs; it is modified in
    place.  Returns ``(rank, det)``, where ``det`` is the determinant as an
    integer pair for square input and ``None`` otherwise.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = (1, 0)
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != (0, 0)), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        top = rows[r]
        for i in range(r + 1, nrows):
            row = rows[i]
            lead = row[c]
            for j in range(c + 1, ncols):
                a = _gi_mul(p, row[j])
                b = _gi_mul(lead, top[j])
                row[j] = _gi_exact_div((a[0] - b[0], a[1] - b[1]), prev)
            row[c] = (0, 0)
        prev = p
        r += 1
    det = None
    if nrows == ncols:
        det = (0, 0) if r < nrows else (sign * rows[-1][-1][0], sign * rows[-1][-1][1])
    return r, det


def _exact_rank(generators, N, rescale_rows):
    row_factors = []
    int_rows = []
    for n in range(1, N + 1):
        row = [eval_h_exact(g, n) for g in generators]
        factor = Fraction(1)
        if rescale_rows:
            biggest = max(v.max_component() for v in row)
            factor = 1 / biggest
            row = [v * factor for v in row]
        lcm = 1
        for v in row:
            lcm = math.lcm(lcm, v.re.denominator, v.im.denominator)
        factor *= lcm
        row_factors.append(factor)
        int_rows.append([(int(v.re * lcm), int(v.im * lcm)) for v in row])
    rank, det = bareiss_rank(int_rows)
    det_q = None
    if det is not None:
        total = Fraction(1)
        for f in row_factors:
            total *= f
        det_q = GaussianRational(Fraction(det[0]) / total, Fraction(det[1]) / total)
    return rank, det_q


def assemble_matrix(generators, N: int, rescale_rows: bool = True) -> np.ndarray:
    """N x m evaluation matrix, rows divided by their largest modulus."""
    if not generators:
        return np.zeros((N, 0), dtype=complex)
    log_abs, phase = _log_matrix(generators, N)
    if rescale_rows:
        log_abs = log_abs - log_abs.max(axis=1, keepdims=True)
    elif log_abs.max() > LOG_MAX:
        raise EvaluationOverflow("unscaled evaluation matrix exceeds float range")
    return _from_logs(log_abs, phase)


def independence_rank(
    family: SpanningFamily,
    N: int,
    mode: str = "floating",
    tol: float = DEFAULT_RANK_TOL,
    rescale_rows: bool = True,
) -> RankCertificate:
    """Rank of the N x m matrix A[n, i] = n^k_i z_i^n.

    Floating mode counts singular values >= tol * sigma_max after row
    rescaling and column normalisation; the certificate is confident when
    sigma_r / sigma_{r+1} >= 1e4, with the threshold tol * sigma_max standing
    in for sigma_{r+1} at full rank.  Exact mode runs fraction-free
    elimination over Q(i) and also reports the determinant of the unscaled
    matrix when it is square.
    """
    gens = tuple(family.generators)
    m = len(gens)
    if N < m:
        raise ValueError(f"need N >= m = {m} rows, got N = {N}")
    if mode == "exact":
        rank, det = _exact_rank(gens, int(N), rescale_rows)
        return RankCertificate(rank, m, int(N), mode, gens, rescale_rows, tol, determinant=det)
    if mode != "floating":
        raise ValueError(f"unknown mode {mode!r} (expected 'exact' or 'floating')")
    if m == 0:
        return RankCertificate(0, 0, int(N), mode, gens, rescale_rows, tol, np.zeros(0), math.inf)
    A = assemble_matrix(gens, int(N), rescale_rows)
    A = A / np.linalg.norm(A, axis=0, keepdims=True)
    s = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(s >= tol * s[0]))
    if rank == 0:
        gap = math.inf
    elif rank < s.size:
        gap = math.inf if s[rank] == 0 else float(s[rank - 1] / s[rank])
    else:
        gap = float(s[-1] / (tol * s[0]))
    confident = gap >= CONFIDENT_GAP
    if not confident:
        warnings.warn(
            f"singular-value gap {gap:.3g} below {CONFIDENT_GAP:g}: raise N or use exact mode",
            IllConditionedWarning,
            stacklevel=2,
        )
    return RankCertificate(rank, m, int(N), mode, gens, rescale_rows, tol, s, gap, confident)


# ---------------------------------------------------------------------------
# span membership


class Membership(str, enum.Enum):
    MEMBER = "member"
    NON_MEMBER = "non-member"
    INCONCLUSIVE = "inconclusive"


@dataclass
class MembershipResult:
    """Outcome of :func:`span_membership`.

    A NON_MEMBER status is evidence (residuals that do not decay along the
    truncation schedule), not a proof: no finite window decides membership
    in C^N.
    """

    status: Membership
    target: GeneratorSpec
    family: SpanningFamily
    truncations: list
    residuals: list
    coefficients: np.ndarray
    tol: float
    coefficient_change: float = math.nan

    def to_dict(self) -> dict:
        verdict = {
            Membership.MEMBER: "member",
            Membership.NON_MEMBER: "non-member",
            Membership.INCONCLUSIVE: "inconclusive",
        }[self.status]
        return {
            "claim": f"h_({self.target.k},{self.target.z}) in span of {self.family.label or 'family'}",
            "generators": [list(g.as_triple()) for g in self.family.generators],
            "target": list(self.target.as_triple()),
            "truncations": list(self.truncations),
            "residuals": [float(r) for r in self.residuals],
            "rank": None,
            "mode": "floating",
            "tolerances": {"relative_residual": self.tol, "non_member_factor": 10.0},
            "verdict": verdict,
        }


def default_schedule(m: int) -> tuple[int, ...]:
    """(m+1, 2m, 4m, 8m); families with m < 2 use (m+1, 4, 8, 16)."""
    if m >= 2:
        return (m + 1, 2 * m, 4 * m, 8 * m)
    return (m + 1, 4, 8, 16)


# Non-decrease of residuals is judged with this relative slack for rounding.
_MONOTONE_SLACK = 1e-9


def _lstsq_rescaled(gens, target, N, scale=1.0):
    log_b, phase_b = _log_matrix([target], N)
    log_b, phase_b = log_b[:, 0], phase_b[:, 0]
    if gens:
        log_a, phase_a = _log_matrix(gens, N)
        row_scale = log_a.max(axis=1)
    else:
        log_a = phase_a = np.zeros((N, 0))
        row_scale = log_b
    shifted_b = log_b - row_scale
    if shifted_b.max() > LOG_MAX:
        raise EvaluationOverflow("target dominates the family beyond float range")
    b = scale * _from_logs(shifted_b, phase_b)
    if not gens:
        return np.zeros(0, dtype=complex), 1.0
    A = _from_logs(log_a - row_scale[:, None], phase_a)
    norms = np.linalg.norm(A, axis=0)
    y, *_ = np.linalg.lstsq(A / norms, b, rcond=None)
    coef = y / norms
    resid = np.linalg.norm(A @ coef - b) / np.linalg.norm(b)
    return coef, float(resid)


def span_membership(
    target: GeneratorSpec,
    family: SpanningFamily,
    schedule: Sequence[int] | None = None,
    tol: float = 1e-8,
    scale: complex = 1.0,
) -> MembershipResult:
    """Decide, on evidence from truncations, whether ``target`` lies in span(family).

    For each N in the schedule the least-squares problem min ||A c - b|| is
    solved after dividing row n by the largest generator modulus in that row
    (the same scaling is applied to the target, so the verdict is invariant
    under rescaling the target).  Relative residual = ||A c - b|| / ||b||.

    * MEMBER: relative residual <= tol at the largest N and the coefficients
      move by at most tol (relative) between the last two N.
    * NON_MEMBER: every relative residual >= 10 tol and the sequence is
      non-decreasing along the schedule.
    * INCONCLUSIVE otherwise.

    ``scale`` multiplies the target (a nonzero scalar multiple of h stays in
    or out of the span together with h).
    """
    if scale == 0:
        raise ValueError("target scale must be nonzero")
    gens = tuple(family.generators)
    m = len(gens)
    schedule = tuple(int(N) for N in (schedule or default_schedule(m)))
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"schedule must be strictly increasing: {schedule}")
    if schedule[0] < m + 1:
        raise ValueError(f"schedule must start at >= m + 1 = {m + 1}")

    residuals, coefs = [], []
    for N in schedule:
        c, r = _lstsq_rescaled(gens, target, N, scale)
        residuals.append(r)
        coefs.append(c)

    change = math.nan
    if len(coefs) >= 2 and m:
        denom = max(np.linalg.norm(coefs[-1]), np.finfo(float).tiny)
        change = float(np.linalg.norm(coefs[-1] - coefs[-2]) / denom)
    elif len(coefs) >= 2:
        change = 0.0

    is_member = residuals[-1] <= tol and len(coefs) >= 2 and change <= tol
    monotone = all(b >= a * (1 - _MONOTONE_SLACK) for a, b in zip(residuals, residuals[1:]))
    if is_member:
        status = Membership.MEMBER
    elif min(residuals) >= 10 * tol and monotone:
        status = Membership.NON_MEMBER
    else:
        status = Membership.INCONCLUSIVE
    return MembershipResult(
        status, target, family, list(schedule), residuals, coefs[-1], tol, change
    )
