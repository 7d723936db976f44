"""Command-line harness: named experiments that emit JSON reports and CSV series.

    lcsprobe <experiment-id> [--param value]... [--out path] [--csv path] [--seed n] [--force]
    lcsprobe list

Exit status: 0 pass, 2 fail, 3 inconclusive, 1 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .ell1 import SummableVector, local_unboundedness_demo, unboundedness_witness
from .holomorphy import (
    Triangle,
    conj_family,
    cauchy_formula_check,
    escape_demo,
    exp_family,
    triangle_check,
    weak_analyticity_check,
)
from .realanalytic import complexification_failure_demo, product_radius_demo, taylor_partial_sum_check
from .report import SCHEMA_VERSION, Verdict, VerificationReport, jsonable
from .sequences import GeneratorSpec, SpanningFamily, independence_rank

EXIT_CODES = {Verdict.PASS: 0, Verdict.FAIL: 2, Verdict.INCONCLUSIVE: 3}
EXIT_USAGE = 1


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    return complex(str(text).replace(" ", "").replace("i", "j"))


@dataclass(frozen=True)
class Param:
    name: str
    type: Callable
    default: object
    help: str


@dataclass(frozen=True)
class Experiment:
    id: str
    claim: str
    params: tuple
    runner: Callable[[dict, np.random.Generator], VerificationReport]

    def defaults(self) -> dict:
        return {p.name: p.default for p in self.params}

    def schema(self) -> str:
        lines = [f"lcsprobe {self.id} [--param value]... [--out path] [--csv path] [--seed n] [--force]"]
        for p in self.params:
            lines.append(f"  --{p.name.replace('_', '-')} ({p.type.__name__}, default {p.default!r}): {p.help}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# experiment runners


def _parse_family(text: str) -> SpanningFamily:
    gens = []
    for item in text.split(","):
        k, z = item.split(":")
        gens.append(GeneratorSpec(int(k), parse_complex(z)))
    return SpanningFamily(gens, "explicit")


def random_family(m: int, k_max: int, rng: np.random.Generator, denominator: int = 8) -> SpanningFamily:
    """m distinct generators with Gaussian-rational z, 1/4 <= |z| <= 4."""
    gens: list = []
    lo, hi = Fraction(1, 16), Fraction(16)
    while len(gens) < m:
        re, im = (Fraction(int(v), denominator) for v in rng.integers(-4 * denominator, 4 * denominator + 1, 2))
        if not lo <= re * re + im * im <= hi:
            continue
        g = GeneratorSpec(int(rng.integers(0, k_max + 1)), (re, im))
        if g not in gens:
            gens.append(g)
    return SpanningFamily(gens, f"random m={m} k<={k_max}")


def _run_independence(p, rng):
    family = _parse_family(p["family"]) if p["family"] else random_family(p["m"], p["k_max"], rng)
    N = p["N"] or len(family)
    cert = independence_rank(family, N, mode=p["mode"], tol=p["tol"])
    d = cert.to_dict()
    measurements = {k: v for k, v in d.items() if k not in ("claim", "verdict", "tolerances")}
    return VerificationReport(
        claim=d["claim"],
        verdict=cert.verdict,
        measurements=measurements,
        tolerances=d["tolerances"],
        series={"columns": ["k", "re", "im"], "rows": d["generators"]},
    )


def _run_escape(p, rng):
    return escape_demo(p["k"], p["z"], tol=p["tol"])


def _integrand(name: str):
    if name == "exp":
        return exp_family()
    if name == "conj":
        return conj_family()
    raise UsageError(f"unknown integrand {name!r} (choose exp or conj)")


def _run_weak(p, rng):
    fam = exp_family()
    if p["conj_coordinate"]:
        fam = fam.with_coordinate(p["conj_coordinate"], lambda z: complex(z).conjugate(), "conj")
    coords = range(1, p["N"] + 1)
    tri = triangle_check(fam, Triangle((0j, 0.3 + 0j, 0.3j)), N=p["N"], tol=p["tol"])
    weak = weak_analyticity_check(fam, coords, r=p["r"], tol=p["tol"])
    tri_err = tri.measurements["per_coordinate_errors"]
    cauchy_err = weak.measurements["per_coordinate_errors"]
    return VerificationReport(
        claim=weak.claim,
        verdict=Verdict.combine([tri.verdict, weak.verdict]),
        measurements={
            "coords": list(coords),
            "triangle_errors": tri_err,
            "cauchy_errors": cauchy_err,
            "failing_coordinates": weak.measurements["failing_coordinates"],
            "sub_verdicts": {"triangle": tri.verdict, "cauchy": weak.verdict},
        },
        tolerances={"relative": p["tol"]},
        series={
            "columns": ["n", "triangle_error", "cauchy_error"],
            "rows": [[n, float(a), float(b)] for n, a, b in zip(coords, tri_err, cauchy_err)],
        },
    )


def _run_cauchy(p, rng):
    rep = cauchy_formula_check(_integrand(p["integrand"]), p["z0"], p["r"], p["z"], p["nodes"], p["N"], p["tol"])
    errs = rep.measurements["per_coordinate_errors"]
    rep.series = {"columns": ["n", "error"], "rows": [[n, float(e)] for n, e in enumerate(errs, 1)]}
    return rep


def _parse_vector(text: str) -> SummableVector:
    """``"k:value,k:value"``; empty means the zero vector."""
    if not text or text == "0":
        return SummableVector()
    out = {}
    for item in text.split(","):
        k, v = item.split(":")
        out[int(k)] = parse_complex(v)
    return SummableVector(out)


def _random_vector(rng, max_support=20, max_index=40, max_abs=3.0) -> SummableVector:
    s = int(rng.integers(1, max_support + 1))
    idx = rng.choice(np.arange(1, max_index + 1), s, replace=False)
    mod = rng.uniform(0, max_abs, s)
    arg = rng.uniform(0, 2 * np.pi, s)
    return SummableVector({int(k): complex(r * np.exp(1j * a)) for k, r, a in zip(idx, mod, arg)})


def _run_unbounded(p, rng):
    x = _parse_vector(p["x"])
    local = local_unboundedness_demo(x, p["radius"], p["N"])
    fuzz_ok, fuzz_total = 0, 0
    for _ in range(p["samples"]):
        w = unboundedness_witness(_random_vector(rng), p["N"])
        fuzz_total += 1
        fuzz_ok += w.ok
    measurements = local.to_dict()
    measurements["random_witnesses"] = {"checked": fuzz_total, "sound": fuzz_ok}
    rows = [
        [k, float(local.x[k].re), float(local.x[k].im), float(local.y[k].re), float(local.y[k].im)]
        for k in sorted(set(local.x.support) | set(local.y.support))
    ]
    return VerificationReport(
        claim="f(x) = (g(nx))_n is unbounded on every l^1 ball",
        verdict=Verdict.from_bool(local.ok and fuzz_ok == fuzz_total),
        measurements=measurements,
        tolerances={"exact": True},
        series={"columns": ["k", "x_re", "x_im", "y_re", "y_im"], "rows": rows},
    )


def _run_radius(p, rng):
    return product_radius_demo(p["n_max"], p["K"])


def _run_taylor(p, rng):
    return taylor_partial_sum_check(p["t0"], p["t"], range(1, p["n_max"] + 1), p["K"] or None, p["tol"])


def _run_growth(p, rng):
    return complexification_failure_demo(p["t"], (p["n_min"], p["n_max"]), p["m_max"])


EXPERIMENTS = {
    e.id: e
    for e in (
        Experiment(
            "independence",
            "the sequences n^k z^n for distinct (k, z) are linearly independent",
            (
                Param("m", int, 6, "number of random generators"),
                Param("N", int, 0, "truncation length (0 means N = m)"),
                Param("mode", str, "exact", "exact or floating"),
                Param("k_max", int, 3, "largest power k in the random family"),
                Param("family", str, "", "explicit family 'k:z,k:z,...' (overrides the random one)"),
                Param("tol", float, 1e-10, "relative singular-value threshold (floating mode)"),
            ),
            _run_independence,
        ),
        Experiment(
            "escape",
            "z -> (e^(nz))_n into E_k is C^k but not C^(k+1)",
            (
                Param("k", int, 1, "smoothness order"),
                Param("z", parse_complex, 0.2 + 0j, "base point in the open square |Re|, |Im| < 1"),
                Param("tol", float, 1e-8, "membership residual tolerance"),
            ),
            _run_escape,
        ),
        Experiment(
            "weak-analytic",
            "every coordinate functional of z -> (e^(nz))_n is holomorphic",
            (
                Param("N", int, 10, "number of coordinates"),
                Param("r", float, 0.5, "Cauchy circle radius about 0"),
                Param("conj_coordinate", int, 0, "replace this coordinate by conj(z) (0 = none)"),
                Param("tol", float, 1e-10, "relative tolerance"),
            ),
            _run_weak,
        ),
        Experiment(
            "cauchy",
            "Cauchy's integral formula reproduces z -> (e^(nz))_n coordinatewise",
            (
                Param("integrand", str, "exp", "exp or conj (negative control)"),
                Param("z0", parse_complex, 0j, "circle centre"),
                Param("r", float, 0.5, "circle radius"),
                Param("z", parse_complex, 0.1 + 0j, "evaluation point inside the circle"),
                Param("nodes", int, 256, "trapezoid nodes"),
                Param("N", int, 10, "number of coordinates"),
                Param("tol", float, 1e-10, "relative tolerance"),
            ),
            _run_cauchy,
        ),
        Experiment(
            "unbounded",
            "x -> (g(nx))_n on l^1 is unbounded on every ball",
            (
                Param("x", str, "0", "centre 'k:value,...' (0 = origin)"),
                Param("radius", float, 0.5, "ball radius"),
                Param("N", float, 1e6, "required modulus"),
                Param("samples", int, 0, "additional random witness checks (seeded)"),
            ),
            _run_unbounded,
        ),
        Experiment(
            "radius",
            "coordinate Taylor radii of t -> (1/(1+(nt)^2))_n have infimum 0",
            (
                Param("n_max", int, 10, "number of coordinates"),
                Param("K", int, 40, "number of Taylor coefficients"),
            ),
            _run_radius,
        ),
        Experiment(
            "taylor-global",
            "t -> (sin(nt))_n equals its Taylor series about any t0, for all t",
            (
                Param("t0", float, 0.0, "expansion centre"),
                Param("t", float, 1.5, "evaluation point"),
                Param("n_max", int, 10, "number of coordinates"),
                Param("K", int, 0, "Taylor degree (0 = from the remainder bound)"),
                Param("tol", float, 1e-10, "absolute tolerance"),
            ),
            _run_taylor,
        ),
        Experiment(
            "growth-failure",
            "(|sin(int)|)_n = (sinh(nt))_n grows faster than any polynomial",
            (
                Param("t", float, 0.1, "imaginary part of the probe point"),
                Param("n_min", int, 1, "first index"),
                Param("n_max", int, 300, "last index"),
                Param("m_max", int, 20, "largest polynomial exponent tried"),
            ),
            _run_growth,
        ),
    )
}


def list_experiments() -> list[dict]:
    return [{"id": e.id, "claim": e.claim, "defaults": e.defaults()} for e in EXPERIMENTS.values()]


def format_listing() -> str:
    lines = []
    for row in list_experiments():
        defaults = " ".join(f"{k}={v!r}" for k, v in row["defaults"].items())
        lines.append(f"{row['id']:<15} {row['claim']}\n{'':<15} defaults: {defaults}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# running and output


def run(experiment: str, params: dict | None = None, seed: int = 0) -> tuple[Verdict, dict]:
    """Run one experiment; returns the verdict and the full output document.

    Parameter errors raise UsageError; errors raised by the mathematics are
    recorded in a failing report.
    """
    if experiment not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    exp = EXPERIMENTS[experiment]
    config = exp.defaults()
    for k, v in (params or {}).items():
        if k not in config:
            raise UsageError(f"unknown parameter {k!r} for {experiment}")
        config[k] = v
    rng = np.random.default_rng(seed)
    try:
        report = exp.runner(config, rng)
    except UsageError:
        raise
    except (ValueError, ArithmeticError) as err:
        report = VerificationReport(
            claim=exp.claim,
            verdict=Verdict.FAIL,
            measurements={"error": f"{type(err).__name__}: {err}"},
        )
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "lcsprobe",
        "version": __version__,
        "experiment": experiment,
        "config": {**config, "seed": seed},
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "report": report.to_dict(),
    }
    return report.verdict, doc


def dumps(doc: dict) -> str:
    return json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"


def _check_writable(path: Path, force: bool):
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")


def emit_csv(report: VerificationReport | dict, path, force: bool = False) -> Path:
    """Write the report's series as CSV (one header row, rows in stored order)."""
    path = Path(path)
    series = report.get("series") if isinstance(report, dict) else report.series
    if series is None:
        raise ValueError("report carries no series payload")
    _check_writable(path, force)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(series["columns"])
        for row in jsonable(series["rows"]):
            writer.writerow(row)
    return path


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser(exp: Experiment) -> argparse.ArgumentParser:
    parser = _Parser(prog=f"lcsprobe {exp.id}", add_help=False)
    for p in exp.params:
        parser.add_argument(f"--{p.name.replace('_', '-')}", dest=p.name, type=p.type, default=argparse.SUPPRESS)
    parser.add_argument("--out")
    parser.add_argument("--csv")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--force", action="store_true")
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(__doc__.strip())
        print()
        print(format_listing(), end="")
        return EXIT_USAGE if not argv else 0
    if argv[0] == "list":
        print(format_listing(), end="")
        return 0
    exp = EXPERIMENTS.get(argv[0])
    try:
        if exp is None:
            raise UsageError(f"unknown experiment {argv[0]!r}")
        args = vars(_build_parser(exp).parse_args(argv[1:]))
        out, csv_path, seed, force = (args.pop(k) for k in ("out", "csv", "seed", "force"))
        for target in (out, csv_path):
            if target:
                _check_writable(Path(target), force)
        verdict, doc = run(exp.id, args, seed)
    except (UsageError, FileExistsError) as err:
        print(f"error: {err}", file=sys.stderr)
        print(exp.schema() if exp else format_listing(), file=sys.stderr)
        return EXIT_USAGE
    text = dumps(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if csv_path:
        emit_csv(doc["report"], csv_path, force=True)
    print(f"{exp.id}: {verdict.value}", file=sys.stderr)
    return EXIT_CODES[verdict]


if __name__ == "__main__":
    sys.exit(main())
