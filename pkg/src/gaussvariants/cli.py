"""Command-line front end: one subcommand per empirical check.

Every run writes a CSV (the data; fixed columns per subcommand, described
in --help) and a JSON summary (fitted constants, residuals, verdicts,
pass/fail where --check applies).  Identical configurations, including
--seed, produce byte-identical CSV output.

Exit codes: 0 ok, 2 configuration error, 3 table-coverage error,
4 failed check under --check.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import arith, charsums, cuspform, fit, kernels, lattice

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COVERAGE = 3
EXIT_CHECK_FAILED = 4


# ---------------------------------------------------------------------------
# Small plumbing: grids, kernel specs, cache, output
# ---------------------------------------------------------------------------

def parse_grid(text):
    """Grid syntax: '2^a..2^b' (geometric, step x2) or 'a:b:s' (arithmetic)."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        if not (lo.startswith("2^") and hi.startswith("2^")):
            raise ValueError(f"geometric grids look like 2^a..2^b, got {text!r}")
        a, b = int(lo[2:]), int(hi[2:])
        if b < a:
            raise ValueError("empty grid")
        return [float(2**e) for e in range(a, b + 1)]
    if text.count(":") == 2:
        a, b, s = (float(part) for part in text.split(":"))
        if s <= 0 or b < a:
            raise ValueError("bad arithmetic grid")
        out = []
        x = a
        while x <= b + 1e-9:
            out.append(float(x))
            x += s
        return out
    raise ValueError(f"cannot parse grid {text!r}")


def parse_kernel(text):
    """Kernel syntax: exp | cesaro:k | conc:Y | compact:Y."""
    name, _, arg = text.partition(":")
    if name == "exp":
        return kernels.KernelSpec.exponential()
    if name == "cesaro":
        return kernels.KernelSpec.cesaro(int(arg))
    if name == "conc":
        return kernels.KernelSpec.concentrating(float(arg))
    if name == "compact":
        return kernels.KernelSpec.compact(float(arg))
    raise ValueError(f"unknown kernel {text!r}")


def cache_dir(args):
    return os.environ.get("GV_CACHE") or args.cache


def cached_table(args, label, builder, n_max):
    """Fetch a coefficient table from the cache dir, building on miss."""
    directory = cache_dir(args)
    if not directory:
        return builder(n_max)
    path = os.path.join(directory, f"{label}-{n_max}.gvct")
    if os.path.exists(path):
        table = arith.read_table_cache(path)
        if table.label == label and table.n_max >= n_max:
            return table
    table = builder(n_max)
    arith.write_table_cache(path, table)
    return table


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    if path == "-":
        sys.stdout.buffer.write(payload)
        return
    with open(path, "wb") as fh:
        fh.write(payload)


def write_json(path, summary):
    summary = dict(summary)
    summary["schemaVersion"] = SCHEMA_VERSION
    payload = (json.dumps(summary, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if path == "-":
        sys.stdout.buffer.write(payload)
        return
    with open(path, "wb") as fh:
        fh.write(payload)


def out_paths(args, stem):
    if args.out:
        base, ext = os.path.splitext(args.out)
        if ext.lower() == ".csv":
            return args.out, base + ".json"
        return args.out + ".csv", args.out + ".json"
    return f"{stem}.csv", f"{stem}.json"


class CheckFailure(Exception):
    """Raised when --check is set and the run's criterion fails."""


def _check(args, ok, message):
    if args.check and not ok:
        raise CheckFailure(message)
    return bool(ok)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_tau(args):
    table = cached_table(args, "tau", cuspform.tau_table, args.table_size)
    csv_path, json_path = out_paths(args, "tau")
    rows = [(n, table[n]) for n in range(1, min(table.n_max, args.table_size) + 1)]
    write_csv(csv_path, ("n", "tau"), rows)
    write_json(json_path, {"label": "tau", "nMax": table.n_max, "csv": csv_path})
    return EXIT_OK


def cmd_second_moment(args):
    form = cuspform.CuspFormSeries(
        12, cached_table(args, "tau", cuspform.tau_table, args.table_size), "delta"
    )
    grid = parse_grid(args.grid)
    C, tail = cuspform.rankin_constant(form, args.table_size)
    rows = []
    for X in grid:
        val = cuspform.smoothed_second_moment(form, X)
        rows.append((X, val, val / X**1.5, val / X**1.5 / C - 1.0))
    gap = abs(rows[-1][2] / C - 1.0)
    ok = _check(args, gap <= 0.05, f"relative gap {gap:.4f} exceeds 5%")
    csv_path, json_path = out_paths(args, "second-moment")
    write_csv(csv_path, ("X", "smoothedSecondMoment", "ratioX32", "relGapToC"), rows)
    write_json(
        json_path,
        {
            "constant": C,
            "constantTailBound": tail,
            "relativeGapAtMaxX": gap,
            "tolerance": 0.05,
            "pass": ok,
        },
    )
    return EXIT_OK


def cmd_sign_scan(args):
    form = cuspform.CuspFormSeries(
        12, cached_table(args, "tau", cuspform.tau_table, args.table_size), "delta"
    )
    series = cuspform.partial_sums(form, args.nu)
    rows = []
    all_nonempty = True
    for X in parse_grid(args.grid):
        changes = cuspform.sign_changes(series, int(X), args.r)
        rows.append((int(X), len(changes), changes[0] if changes else -1))
        all_nonempty = all_nonempty and bool(changes)
    ok = _check(args, all_nonempty, "a window produced no sign change")
    csv_path, json_path = out_paths(args, "sign-scan")
    write_csv(csv_path, ("X", "nChanges", "firstChange"), rows)
    write_json(
        json_path,
        {"nu": args.nu, "r": args.r, "allWindowsNonempty": all_nonempty, "pass": ok},
    )
    return EXIT_OK


def cmd_short_interval(args):
    form = cuspform.CuspFormSeries(
        12, cached_table(args, "tau", cuspform.tau_table, args.table_size), "delta"
    )
    rows = []
    worst = 0.0
    for X in parse_grid(args.grid):
        val = cuspform.short_interval_average(form, int(X))
        norm = val / X ** (form.weight - 0.5)
        worst = max(worst, norm)
        rows.append((int(X), val, norm))
    csv_path, json_path = out_paths(args, "short-interval")
    write_csv(csv_path, ("X", "windowAverage", "normalized"), rows)
    write_json(json_path, {"maxNormalized": worst})
    return EXIT_OK


def cmd_count_circle(args):
    table = cached_table(args, "r_2", lambda n: arith.r_d_table(2, n), args.table_size)
    rows = []
    for R in parse_grid(args.grid):
        count = lattice.count_ball(2, R, table)
        vol = lattice.ball_volume(2, R)
        rows.append((R, count, vol, count - vol))
    csv_path, json_path = out_paths(args, "count-circle")
    write_csv(csv_path, ("R", "count", "volume", "discrepancy"), rows)
    write_json(
        json_path,
        {"maxAbsDiscrepancyOverSqrtR": max(abs(r[3]) / math.sqrt(r[0]) for r in rows)},
    )
    return EXIT_OK


def cmd_mean_square_p2(args):
    table = cached_table(args, "r_2", lambda n: arith.r_d_table(2, n), args.table_size)
    grid = parse_grid(args.grid)
    rows = [(X, lattice.mean_square_P2(X, table)) for X in grid]
    series = lattice.count_series(
        grid, [r[1] for r in rows], "sharp", "circle-discrepancy-mean-square"
    )
    slope = fit.estimate_exponent(series)
    ok = _check(args, abs(slope - 1.5) <= 0.05, f"slope {slope:.4f} not 1.5 +- 0.05")
    csv_path, json_path = out_paths(args, "mean-square-p2")
    write_csv(csv_path, ("X", "integral"), rows)
    write_json(json_path, {"slope": slope, "tolerance": 0.05, "pass": ok})
    return EXIT_OK


def cmd_hardy(args):
    table = cached_table(args, "r_2", lambda n: arith.r_d_table(2, n), args.table_size)
    rng = np.random.default_rng(args.seed)
    rows = []
    worst = 0.0
    for _ in range(args.count):
        # offsets stay in the middle band between integer shells, where the
        # truncated Bessel series is not Gibbs-limited by the count jumps
        R = float(rng.integers(10, 999)) + float(rng.uniform(0.3, 0.7))
        approx = lattice.hardy_identity(R, args.terms, table)
        exact = lattice.discrepancy(2, R, table)
        err = abs(approx - exact)
        worst = max(worst, err)
        rows.append((R, approx, exact, err))
    ok = _check(args, worst < 0.05, f"max |error| {worst:.4f} >= 0.05")
    csv_path, json_path = out_paths(args, "hardy")
    write_csv(csv_path, ("R", "besselSeries", "discrepancy", "absError"), rows)
    write_json(
        json_path,
        {"terms": args.terms, "maxAbsError": worst, "tolerance": 0.05, "pass": ok},
    )
    return EXIT_OK


_WITH_LOG = ((0.5, 1), (0.5, 0))
_WITHOUT_LOG = ((0.5, 0),)


def cmd_count_hyperboloid(args):
    table = cached_table(
        args, f"r_{args.d - 1}", lambda n: arith.r_d_table(args.d - 1, n), args.table_size
    )
    grid = parse_grid(args.grid)
    rows = [(R, lattice.hyperboloid_count(args.d, args.h, R, table)) for R in grid]
    summary = {"d": args.d, "h": args.h}
    if args.d == 3:
        series = lattice.count_series(
            grid, [r[1] for r in rows], "sharp", f"hyperboloid-sharp-{args.d}-{args.h}"
        )
        verdict = fit.log_term_verdict(series, _WITH_LOG, _WITHOUT_LOG, seed=args.seed)
        summary.update(
            {
                "verdict": verdict.verdict,
                "logCoefficient": verdict.log_coefficient,
                "logCoefficientSE": verdict.log_coefficient_se,
                "residualRatio": verdict.residual_ratio,
            }
        )
        root = math.isqrt(args.h)
        expected = "log" if root * root == args.h else "no-log"
        summary["expectedVerdict"] = expected
        _check(args, verdict.verdict == expected, f"verdict {verdict.verdict}")
        summary["pass"] = verdict.verdict == expected
    csv_path, json_path = out_paths(args, "count-hyperboloid")
    write_csv(csv_path, ("R", "count"), rows)
    write_json(json_path, summary)
    return EXIT_OK


def cmd_smooth_hyperboloid(args):
    table = cached_table(
        args, f"r_{args.d - 1}", lambda n: arith.r_d_table(args.d - 1, n), args.table_size
    )
    kernel = parse_kernel(args.kernel)
    grid = parse_grid(args.grid)
    rows = []
    for X in grid:
        if kernel.kind == "exponential":
            val = lattice.hyperboloid_smoothed(args.d, args.h, X, table)
        else:
            shell = lattice.hyperboloid_shell_table(
                args.d, args.h, min(table.n_max, kernels.kernel_support(kernel, X)), table
            )
            val = kernels.apply_kernel(shell, 0.0, kernel, X, strict=False)
        rows.append((X, val))
    csv_path, json_path = out_paths(args, "smooth-hyperboloid")
    write_csv(csv_path, ("X", "smoothed"), rows)
    series = lattice.count_series(
        grid, [r[1] for r in rows], "smoothed-exp", f"hyperboloid-smooth-{args.d}-{args.h}"
    )
    write_json(
        json_path,
        {"d": args.d, "h": args.h, "kernel": args.kernel, "slope": fit.estimate_exponent(series)},
    )
    return EXIT_OK


def cmd_short_hyperboloid(args):
    table = cached_table(
        args, f"r_{args.d - 1}", lambda n: arith.r_d_table(args.d - 1, n), args.table_size
    )
    rows = []
    worst = 0.0
    for X in parse_grid(args.grid):
        total, norm = lattice.hyperboloid_short_interval(args.d, args.h, X, table)
        worst = max(worst, norm)
        rows.append((X, total, norm))
    csv_path, json_path = out_paths(args, "short-hyperboloid")
    write_csv(csv_path, ("X", "windowSum", "normalized"), rows)
    write_json(
        json_path,
        {"d": args.d, "h": args.h, "lambda": lattice.power_saving_exponent(args.d), "maxNormalized": worst},
    )
    return EXIT_OK


def cmd_divisor_identity(args):
    n_needed = args.R * args.R + 1
    d_all, d_odd = arith.divisor_counts(n_needed)
    rows = []
    all_equal = True
    for R in range(1, args.R + 1):
        lhs, rhs, eq = lattice.divisor_identity_check(R, d_odd)
        rows.append((R, "odd-divisor", lhs, rhs, int(eq)))
        all_equal = all_equal and eq
    for R in range(2, args.R + 1, 2):
        direct, combined, eq = lattice.divisor_combination(R, d_all)
        rows.append((R, "combination", direct, combined, int(eq)))
        all_equal = all_equal and eq
    ok = _check(args, all_equal, "an exact divisor identity failed")
    csv_path, json_path = out_paths(args, "divisor-identity")
    write_csv(csv_path, ("R", "identity", "lhs", "rhs", "equal"), rows)
    write_json(json_path, {"maxR": args.R, "allEqual": all_equal, "pass": ok})
    return EXIT_OK


def cmd_gauss_sums(args):
    rows = []
    worst = {}

    def record(h, modulus, k, value, check, residual):
        rows.append((h, modulus, k, value.real, value.imag, check, residual))
        worst[check] = max(worst.get(check, 0.0), residual)

    for h in range(1, 9):
        odd = [n for n in range(3, 50, 2)]
        for i, n1 in enumerate(odd):
            for n2 in odd[i + 1 :]:
                if math.gcd(n1, n2) != 1:
                    continue
                prod = charsums.gauss_sum_H(h, n1 * n2)
                res = abs(prod - charsums.gauss_sum_H(h, n1) * charsums.gauss_sum_H(h, n2))
                record(h, n1 * n2, 0.5, prod, "H-multiplicative", res)
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97):
        for h in range(1, 9):
            if h % p == 0:
                continue
            val = charsums.gauss_sum_H(h, p)
            res = abs(val - arith.kronecker(-h, p) * math.sqrt(p))
            record(h, p, 0.5, val, "H-prime-eval", res)
    for h in range(1, 9):
        for p in (3, 5, 7):
            for j in range(2, 5):
                if h % p ** (j - 1) == 0:
                    continue
                val = charsums.gauss_sum_H(h, p**j)
                record(h, p**j, 0.5, val, "H-vanishing", abs(val))
    for h in range(1, 9):
        for c in range(1, 31):
            for k in (0.5, 1.5):
                g = charsums.gauss_sum_g(h, 4 * c, k)
                res = abs(g - charsums.two_piece_product(h, 4 * c, k))
                record(h, 4 * c, k, g, "two-piece", res)
    tol = 1e-9
    ok = _check(args, max(worst.values()) < tol, "a Gauss-sum residual exceeded 1e-9")
    csv_path, json_path = out_paths(args, "gauss-sums")
    write_csv(csv_path, ("h", "modulus", "k", "re", "im", "check", "residual"), rows)
    write_json(json_path, {"tolerance": tol, "worstResiduals": worst, "pass": ok})
    return EXIT_OK


def cmd_eisenstein_check(args):
    rows = []
    worst_reduction = 0.0
    for h in range(1, 21):
        for c in range(1, 51):
            for k in (1, 2):
                res = charsums.reduction_check(h, c, k)
                rows.append((h, c, k, 0.0, res, "reduction"))
                worst_reduction = max(worst_reduction, res / (4 * c))
    fact_ok = True
    for h in (1, 2, 3, 4, 9):
        for k in (0.5, 1.5):
            for w in (2.0, 1.75):
                res, bound = charsums.factorization_check(h, w, k, args.terms)
                rows.append((h, args.terms, k, w, res, "factorization"))
                fact_ok = fact_ok and res <= bound
    ok = _check(
        args,
        worst_reduction < 1e-9 and fact_ok,
        "an Eisenstein-coefficient identity failed",
    )
    csv_path, json_path = out_paths(args, "eisenstein-check")
    write_csv(csv_path, ("h", "cOrN", "k", "w", "residual", "check"), rows)
    write_json(
        json_path,
        {
            "worstReductionResidualOver4c": worst_reduction,
            "factorizationWithinTails": fact_ok,
            "pass": ok,
        },
    )
    return EXIT_OK


def cmd_kernels_verify(args):
    rows = []

    def record(kernel, params, residual, tol):
        rows.append((kernel, params, residual, tol))

    worst = {}
    for Y in (0.5, 1.5, 2.0, 10.0):
        for k in (1, 2, 3):
            if Y < 1:
                quad = kernels.Quadrature(30.0, 200.0, 20000)
            else:
                quad = kernels.Quadrature(0.5, 4000.0, 4_000_000)
            res = abs(kernels.cesaro_contour(Y, k, quad) - kernels.cesaro_closed(Y, k))
            record("cesaro", f"Y={Y};k={k}", res, 1e-6)
            worst["cesaro"] = max(worst.get("cesaro", 0.0), res)
    for X in (1.0, math.e, 3.0, 10.0):
        for Y in (1.0, 2.0, 4.0):
            quad = kernels.Quadrature(2.0, 15.0 * Y, max(600, int(300 * Y)))
            res = abs(
                kernels.concentrating_contour(X, Y, quad)
                - kernels.concentrating_closed(X, Y)
            )
            record("concentrating", f"X={X:g};Y={Y:g}", res, 1e-8)
            worst["concentrating"] = max(worst.get("concentrating", 0.0), res)
    for x in (0.1, 1.0, 5.0, 20.0, 50.0):
        quad = kernels.Quadrature(2.0, 40.0, 4000)
        res = abs(kernels.exp_contour(x, quad) - math.exp(-x))
        record("exponential", f"x={x:g}", res, 1e-6)
        worst["exponential"] = max(worst.get("exponential", 0.0), res)
    for Y in (10.0, 100.0):
        for sig in (0.5, 1.0, 2.0):
            s = complex(sig, 0.0)
            if abs(s) > Y / 2:
                continue
            res = abs(kernels.compact_Phi(Y, s) - 1.0 / s)
            record("compact", f"Y={Y:g};s={sig:g}", res, 2.0 / Y)
            worst["compact"] = max(worst.get("compact", 0.0), res * Y / 2.0)
    ok = _check(
        args,
        worst["cesaro"] < 1e-6
        and worst["concentrating"] < 1e-8
        and worst["exponential"] < 1e-6
        and worst["compact"] < 1.0,
        "a kernel identity exceeded its tolerance",
    )
    csv_path, json_path = out_paths(args, "kernels-verify")
    write_csv(csv_path, ("kernel", "params", "residual", "tolerance"), rows)
    write_json(json_path, {"maxResidualPerKernel": worst, "pass": ok})
    return EXIT_OK


def cmd_fit(args):
    data = np.loadtxt(args.data, delimiter=",", skiprows=1, ndmin=2)
    grid, values = data[:, 0], data[:, 1]
    model = []
    for term in args.model.split(","):
        a, _, b = term.partition(":")
        model.append((float(a), int(b or 0)))
    series = lattice.count_series(grid, values, "sharp", "cli-fit")
    result = fit.fit_model(series, model)
    csv_path, json_path = out_paths(args, "fit")
    write_csv(
        csv_path,
        ("exponent", "logPower", "coefficient"),
        [(a, b, c) for (a, b), c in zip(result.model, result.coefficients)],
    )
    write_json(
        json_path,
        {
            "residualNorm": result.residual_norm,
            "slopeEstimate": result.slope_estimate,
            "conditionNumber": result.condition_number,
        },
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="gv",
        description="Lattice counting for Gauss-circle variants: exact counts, "
        "Gauss sums, cutoff kernels, and asymptotic fits.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, table_size=None):
        p.add_argument("--out", help="output stem or .csv path (JSON goes beside it)")
        p.add_argument("--cache", help="coefficient cache directory (env GV_CACHE overrides)")
        p.add_argument("--check", action="store_true", help="exit 4 if the run's criterion fails")
        p.add_argument("--seed", type=int, default=0, help="seed for any randomized piece")
        if table_size is not None:
            p.add_argument("--table-size", type=int, default=table_size, help="coefficient table length")

    p = sub.add_parser("tau", help="build (and cache) the tau coefficient table; CSV: n,tau")
    common(p, table_size=1000)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser(
        "second-moment",
        help="smoothed second moment of delta partial sums vs its constant; "
        "CSV: X,smoothedSecondMoment,ratioX32,relGapToC",
    )
    common(p, table_size=164000)
    p.add_argument("--grid", default="2^8..2^12")
    p.set_defaults(func=cmd_second_moment)

    p = sub.add_parser(
        "sign-scan",
        help="sign changes of normalized partial sums in [X, X + X^r]; CSV: X,nChanges,firstChange",
    )
    common(p, table_size=21000)
    p.add_argument("--grid", default="2^4..2^13")
    p.add_argument("--nu", type=float, default=11 / 2 + 1 / 6 - 0.01)
    p.add_argument("--r", type=float, default=1.0)
    p.set_defaults(func=cmd_sign_scan)

    p = sub.add_parser(
        "short-interval",
        help="windowed second moment of delta partial sums; CSV: X,windowAverage,normalized",
    )
    common(p, table_size=70000)
    p.add_argument("--grid", default="2^10..2^16")
    p.set_defaults(func=cmd_short_interval)

    p = sub.add_parser(
        "count-circle", help="exact circle counts vs area; CSV: R,count,volume,discrepancy"
    )
    common(p, table_size=10000)
    p.add_argument("--grid", default="2^4..2^13")
    p.set_defaults(func=cmd_count_circle)

    p = sub.add_parser(
        "mean-square-p2",
        help="mean square of the circle discrepancy and its growth exponent; CSV: X,integral",
    )
    common(p, table_size=262200)
    p.add_argument("--grid", default="2^10..2^18")
    p.set_defaults(func=cmd_mean_square_p2)

    p = sub.add_parser(
        "hardy",
        help="Bessel-series discrepancy vs exact counts at random non-integer R; "
        "CSV: R,besselSeries,discrepancy,absError",
    )
    common(p, table_size=10**6)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--terms", type=int, default=10**6)
    p.set_defaults(func=cmd_hardy)

    p = sub.add_parser(
        "count-hyperboloid",
        help="sharp hyperboloid counts with the log-term verdict at d=3; CSV: R,count",
    )
    common(p, table_size=530000)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--grid", default="2^10..2^20")
    p.set_defaults(func=cmd_count_hyperboloid)

    p = sub.add_parser(
        "smooth-hyperboloid", help="kernel-smoothed hyperboloid counts; CSV: X,smoothed"
    )
    common(p, table_size=1_400_000)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--grid", default="2^8..2^16")
    p.add_argument("--kernel", default="exp", help="exp | cesaro:k | conc:Y | compact:Y")
    p.set_defaults(func=cmd_smooth_hyperboloid)

    p = sub.add_parser(
        "short-hyperboloid",
        help="sharp window sums of width X^(1-lambda); CSV: X,windowSum,normalized",
    )
    common(p, table_size=600000)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--grid", default="2^10..2^14")
    p.set_defaults(func=cmd_short_hyperboloid)

    p = sub.add_parser(
        "divisor-identity",
        help="exact odd-divisor identities on X^2+Y^2=Z^2+1; CSV: R,identity,lhs,rhs,equal",
    )
    common(p)
    p.add_argument("--R", type=int, default=200)
    p.set_defaults(func=cmd_divisor_identity)

    p = sub.add_parser(
        "gauss-sums",
        help="Gauss-sum invariant suite; CSV: h,modulus,k,re,im,check,residual",
    )
    common(p)
    p.set_defaults(func=cmd_gauss_sums)

    p = sub.add_parser(
        "eisenstein-check",
        help="reduction and L-factorization identities; CSV: h,cOrN,k,w,residual,check",
    )
    common(p)
    p.add_argument("--terms", type=int, default=2000)
    p.set_defaults(func=cmd_eisenstein_check)

    p = sub.add_parser(
        "kernels-verify",
        help="contour quadrature vs closed forms for all kernels; CSV: kernel,params,residual,tolerance",
    )
    common(p)
    p.set_defaults(func=cmd_kernels_verify)

    p = sub.add_parser("fit", help="standalone least-squares fit of a CSV (X,value)")
    common(p)
    p.add_argument("--data", required=True, help="input CSV with header and X,value columns")
    p.add_argument("--model", required=True, help="comma list of exponent:logpower terms")
    p.set_defaults(func=cmd_fit)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_CONFIG
    try:
        return args.func(args)
    except arith.TableCoverageError as exc:
        print(f"gv: table coverage: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except CheckFailure as exc:
        print(f"gv: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (ValueError, OSError) as exc:
        print(f"gv: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
