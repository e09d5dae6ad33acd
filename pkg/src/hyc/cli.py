"""Command-line driver: ``hyc <subcommand> ...``.

Every subcommand prints deterministic JSON (or CSV for ``report``). Exit
codes: 0 when all checks pass, 1 when some check fails, 2 on usage, input
or domain errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from typing import Callable, Optional, Sequence

import numpy as np

from .carleson import carleson_norm
from .consts import a1_bound, a2_bound, constants_table, conjugate_exponent
from .errors import DomainError, NotApplicableError, UnsupportedMeasureError
from .hy import hardy_line_check, hy_line_check, hy_lower_bound, verify_eqnorm
from .laplace import taylor_bound_check
from .measure import HalfPlaneMeasure, random_measure
from .poisson_cz import (
    RealStepFunction,
    UHPMeasure,
    coverage_check,
    cz_decompose,
    cz_invariants_check,
    random_real_steps,
    strong_type_check,
    weak_type_check,
)
from .report import VerificationReport, dumps
from .stepfun import random_steps

SUITES = ("eqnorm", "thm2", "cz", "hy", "taylor", "sharpness")


class UsageError(Exception):
    pass


# --- helpers ----------------------------------------------------------------

def thread_count() -> int:
    raw = os.environ.get("HYC_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"HYC_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"HYC_THREADS must be a positive integer, got {raw!r}")
    return n


def pmap(fn: Callable, items: Sequence) -> list:
    """Order-preserving map, threaded when HYC_THREADS > 1."""
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def load_json(path: str) -> tuple[object, bytes]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(raw.decode("utf-8")), raw
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except UnicodeDecodeError:
        raise UsageError(f"{path}: not UTF-8 text") from None


def fixture_path(name: str) -> str:
    return str(resources.files("hyc").joinpath("fixtures", name))


def load_fixture(name: str, p: Optional[float] = None) -> HalfPlaneMeasure:
    data, _ = load_json(fixture_path(name))
    return HalfPlaneMeasure.from_json(data, p)


def emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def parse_grid(text: str) -> list[float]:
    """"start:stop:step" inclusive of stop (up to rounding)."""
    try:
        a, b, s = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--p-grid must look like start:stop:step, got {text!r}") from None
    if s <= 0 or b < a:
        raise UsageError("--p-grid needs step > 0 and stop >= start")
    n = int(math.floor((b - a) / s + 1e-9))
    return [round(a + k * s, 12) for k in range(n + 1)]


def _params_digest(params: dict) -> str:
    return digest(dumps(params).encode())


# --- subcommands ------------------------------------------------------------

def cmd_constants(args) -> int:
    emit(constants_table(args.p))
    return 0


def cmd_carleson(args) -> int:
    data, raw = load_json(args.measure)
    mu = HalfPlaneMeasure.from_json(data, args.p)
    res = carleson_norm(mu, args.tol)
    out = res.to_json()
    out["input_sha256"] = digest(raw)
    emit(out)
    return 0


def cmd_hy_bound(args) -> int:
    data, raw = load_json(args.measure)
    mu = HalfPlaneMeasure.from_json(data, args.p)
    est = hy_lower_bound(mu, args.p, args.budget, args.seed)
    out = est.to_json()
    out["input_sha256"] = digest(raw)
    emit(out)
    return 0


def cmd_cz(args) -> int:
    data, raw = load_json(args.f)
    f = RealStepFunction.from_json(data)
    out = cz_decompose(f, args.alpha).to_json()
    out["input_sha256"] = digest(raw)
    emit(out)
    return 0


def _merge(suite: str, seed: int, params: dict, parts: list[tuple[str, VerificationReport]]) -> VerificationReport:
    rep = VerificationReport(suite, seed, params)
    for prefix, sub in parts:
        rep.extend(sub, prefix)
    return rep


def suite_eqnorm(seed: int, n: int, p: Optional[float]) -> VerificationReport:
    ps = [p] if p else [1.25, 1.5, 2.0]
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(n):
        mu = random_measure(rng)
        for q in ps:
            cases.append((i, q, mu, int(rng.integers(2**31))))

    def run(case):
        i, q, mu, s = case
        return f"m{i}_p{q}.", verify_eqnorm(mu, q, 40, s)

    return _merge("eqnorm", seed, {"n": n, "p": ps}, pmap(run, cases))


def suite_thm2(seed: int, n: int, p: Optional[float]) -> VerificationReport:
    ps = [p] if p else [1.5, 2.0, 4.0]
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(n):
        f = random_real_steps(rng)
        atoms = tuple((float(rng.uniform(-5, 5)), float(rng.uniform(0.05, 3)), float(rng.uniform(0.1, 2)))
                      for _ in range(int(rng.integers(1, 7))))
        lam = float(f.sup() * rng.uniform(0.05, 1.0))
        cases.append((i, f, UHPMeasure(atoms), lam, ps[i % len(ps)], int(rng.integers(2**31))))

    def run(case):
        i, f, mu, lam, q, s = case
        out = [(f"t{i}.weak.", weak_type_check(f, mu, lam)), (f"t{i}.strong.", strong_type_check(f, mu, q, 1e-9))]
        out.append((f"t{i}.coverage.", coverage_check(f, lam, 2000, s)))
        return out

    parts = [x for group in pmap(run, cases) for x in group]
    rep = _merge("thm2", seed, {"n": n, "p": ps}, parts)
    for _, sub in parts:
        if sub.suite == "coverage" and sub.max_observed_ratio is not None:
            rep.observe_ratio(sub.max_observed_ratio)
    return rep


def suite_cz(seed: int, n: int, p: Optional[float]) -> VerificationReport:
    rng = np.random.default_rng(seed)
    cases = [(i, random_real_steps(rng), float(rng.uniform(0.05, 3.0))) for i in range(n)]
    return _merge("cz", seed, {"n": n}, pmap(lambda c: (f"f{c[0]}.", cz_invariants_check(c[1], c[2])), cases))


def suite_hy(seed: int, n: int, p: Optional[float]) -> VerificationReport:
    ps = [p] if p else [1.5, 2.0]
    rng = np.random.default_rng(seed)
    mu_dx = load_fixture("dx_on_axis.json")
    cases = [(i, random_steps(rng, max_pieces=6), ps[i % len(ps)]) for i in range(n)]

    def run(case):
        i, u, q = case
        return [(f"u{i}.line.", hy_line_check(u, q)), (f"u{i}.hardy.", hardy_line_check(u, q, mu_dx))]

    return _merge("hy", seed, {"n": n, "p": ps}, [x for g in pmap(run, cases) for x in g])


def suite_taylor(seed: int, n: int, p: Optional[float]) -> VerificationReport:
    return taylor_bound_check(n, seed)


def sharpness_rows(ps: Sequence[float], budget: int, seed: int) -> list[dict]:
    rows = []
    dy = load_fixture("truncated_dy.json")
    dy_norm = carleson_norm(dy).norm
    for q in ps:
        dirac = load_fixture("dirac_over_pprime.json", q)
        for name, mu, C in (("dirac_over_pprime", dirac, None), ("truncated_dy", dy, dy_norm)):
            carl = carleson_norm(mu)
            est = hy_lower_bound(mu, q, budget, seed, carleson=carl)
            rows.append({
                "measure": name,
                "p": q,
                "p_conj": conjugate_exponent(q),
                "carleson_norm": carl.norm,
                "lower_bound": est.lower_bound,
                "a1_envelope": carl.norm / a1_bound(q),
                "a2_envelope": a2_bound(q) * carl.norm,
            })
    return rows


def suite_sharpness(seed: int, n: int, p: Optional[float]) -> VerificationReport:
    ps = [p] if p else [1.25, 1.5, 2.0]
    rows = sharpness_rows(ps, n, seed)
    rep = VerificationReport("sharpness", seed, {"p": ps, "budget": n})
    for r in rows:
        tag = f"{r['measure']}_p{r['p']}."
        if r["measure"] == "dirac_over_pprime":
            rep.add(tag + "carleson_norm_eq_p_conj", abs(r["carleson_norm"] - r["p_conj"]), 1e-12 * r["p_conj"])
            rep.add(tag + "lower_bound_le_1", r["lower_bound"], 1.0, 1e-6)
        else:
            rep.add(tag + "carleson_norm_eq_1", abs(r["carleson_norm"] - 1.0), 1e-12)
        rep.add_ge(tag + "lower_bound_ge_C_over_A1", r["lower_bound"], r["a1_envelope"], 1e-9)
        rep.add(tag + "lower_bound_le_A2_C", r["lower_bound"], r["a2_envelope"])
    return rep


SUITE_FUNCS = {
    "eqnorm": (suite_eqnorm, 5),
    "thm2": (suite_thm2, 10),
    "cz": (suite_cz, 100),
    "hy": (suite_hy, 10),
    "taylor": (suite_taylor, 100_000),
    "sharpness": (suite_sharpness, 20),
}


def cmd_verify(args) -> int:
    fn, default_n = SUITE_FUNCS[args.suite]
    n = args.n if args.n is not None else default_n
    if n < 1:
        raise UsageError("--n must be positive")
    rep = fn(args.seed, n, args.p)
    rep.params["input_sha256"] = _params_digest({"suite": args.suite, "seed": args.seed, "n": n, "p": args.p})
    sys.stdout.write(rep.to_json() + "\n")
    return 0 if rep.passed else 1


def cmd_report(args) -> int:
    if args.suite != "sharpness":
        raise UsageError("report supports only --suite sharpness")
    ps = parse_grid(args.p_grid)
    for q in ps:
        if not 1.0 < q <= 2.0:
            raise UsageError(f"--p-grid values must lie in (1, 2], got {q}")
    rows = sharpness_rows(ps, args.budget, args.seed)
    if args.out == "json":
        emit({"rows": rows, "input_sha256": _params_digest({"p_grid": ps, "budget": args.budget, "seed": args.seed})})
        return 0
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    sys.stdout.write(buf.getvalue())
    return 0


# --- entry points -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyc", description="Carleson / Hausdorff-Young verification toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="table of named constants at exponent p")
    c.add_argument("--p", type=float, required=True)
    c.set_defaults(func=cmd_constants)

    c = sub.add_parser("carleson-norm", help="Carleson norm of a measure file")
    c.add_argument("--measure", required=True)
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--p", type=float, default=None, help="resolves p-dependent fields such as \"1/p'\"")
    c.set_defaults(func=cmd_carleson)

    c = sub.add_parser("hy-bound", help="lower bound for the HY constant of a measure")
    c.add_argument("--measure", required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--budget", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_hy_bound)

    c = sub.add_parser("cz", help="Calderon-Zygmund decomposition of a step function")
    c.add_argument("--f", required=True)
    c.add_argument("--alpha", type=float, required=True)
    c.set_defaults(func=cmd_cz)

    c = sub.add_parser("verify", help="run a seeded verification suite")
    c.add_argument("--suite", choices=SUITES, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--p", type=float, default=None)
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("report", help="plot-ready tables")
    c.add_argument("--suite", required=True)
    c.add_argument("--p-grid", required=True)
    c.add_argument("--out", choices=("csv", "json"), default="csv")
    c.add_argument("--budget", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_report)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        thread_count()
        return args.func(args)
    except (UsageError, DomainError, NotApplicableError, UnsupportedMeasureError) as exc:
        sys.stderr.write(f"hyc: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
