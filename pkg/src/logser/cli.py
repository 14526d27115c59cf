"""Command-line surface: `logser <subcommand> ...`.

Every library capability is reachable from here with machine-readable
output.  Results are emitted as JSON (default) or text; `bench` emits
CSV convergence tables.  Rationals cross the boundary as "p/q" strings
and reals as decimal strings with an explicit precision field, so
goldens never depend on binary float formatting.

Exit codes: 0 success, 1 domain error (for example unbalanced
coefficients), 2 usage error.  The environment variable
LOGSER_BLOCK_BUDGET overrides the default block budget.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from . import quadrature, relations
from .errors import SeriesError
from .evaluation import (
    DEFAULT_BLOCK_BUDGET,
    EvalResult,
    evaluate,
    gamma_partial,
    partial_sum_float,
    rearranged_terms,
    tail_bound,
)
from .vectors import ln_rational_vector, ln_vector, make_vector

_ENV_BUDGET = "LOGSER_BLOCK_BUDGET"

CSV_HEADER = "method,work,value,error_bound,abs_error_vs_reference,wall_time_micros"

_BENCH_METHODS = ("raw", "accelerated", "rearranged", "quadrature")


@dataclass(frozen=True)
class ConvergenceRow:
    """One benchmark measurement: method and work versus accuracy."""

    method: str
    work: int
    value: float
    error_bound: float
    abs_error_vs_reference: float
    wall_time_micros: int

    def as_csv(self) -> str:
        return (
            f"{self.method},{self.work},{self.value!r},{self.error_bound!r},"
            f"{self.abs_error_vs_reference!r},{self.wall_time_micros}"
        )


def _block_budget() -> int:
    raw = os.environ.get(_ENV_BUDGET)
    if raw is None:
        return DEFAULT_BLOCK_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise SeriesError(f"{_ENV_BUDGET} must be an integer, got {raw!r}") from exc
    if value < 2:
        raise SeriesError(f"{_ENV_BUDGET} must be >= 2, got {value}")
    return value


def _digits_for(abs_err: float) -> int:
    if abs_err <= 0 or math.isinf(abs_err):
        return 17
    return max(17, int(math.ceil(-math.log10(abs_err))) + 3)


def _real(value, digits: int) -> str:
    return mpmath.nstr(mpmath.mpf(value), digits)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        parts = [f"{payload['command']}"]
        inputs = payload.get("inputs", {})
        if inputs:
            parts.append("(" + ", ".join(f"{k}={v}" for k, v in inputs.items()) + ")")
        if "value" in payload:
            parts.append(f"= {payload['value']}")
        if "error_bound" in payload:
            kind = "heuristic" if payload.get("bound_is_heuristic") else "rigorous"
            parts.append(f"+- {payload['error_bound']} ({kind})")
        if "blocks_used" in payload:
            parts.append(f"[{payload['blocks_used']} blocks]")
        print(" ".join(parts))
        for key, value in payload.items():
            if key in {
                "command",
                "inputs",
                "value",
                "error_bound",
                "bound_is_heuristic",
                "blocks_used",
                "precision",
                "wall_time_micros",
            }:
                continue
            print(f"  {key}: {value}")


def _result_payload(
    command: str, inputs: dict, result: EvalResult, digits: int, micros: int
) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "value": _real(result.value, digits),
        "precision": digits,
        "error_bound": repr(result.error_bound),
        "bound_is_heuristic": result.bound_is_heuristic,
        "blocks_used": result.blocks_used,
        "wall_time_micros": micros,
    }


def _parse_coeffs(raw: str) -> list[Fraction]:
    try:
        return [Fraction(part.strip()) for part in raw.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise SeriesError(f"cannot parse coefficient list {raw!r}: {exc}") from exc


def _parse_ratio(raw: str) -> tuple[int, int]:
    parts = raw.split("/")
    try:
        if len(parts) == 1:
            return int(parts[0]), 1
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise SeriesError(f"expected M/L with positive integers, got {raw!r}")


# ----------------------------------------------------------------------
# subcommand handlers
# ----------------------------------------------------------------------


def _timed(fn, *args, **kwargs):
    start = time.perf_counter_ns()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter_ns() - start) // 1000


def _cmd_eval(args) -> int:
    vec = make_vector(args.T, _parse_coeffs(args.coeffs))
    result, micros = _timed(
        evaluate, vec, args.abs_err, args.method, block_budget=_block_budget()
    )
    digits = _digits_for(args.abs_err)
    inputs = {
        "T": args.T,
        "coeffs": [str(c) for c in vec.coeffs],
        "abs_err": repr(args.abs_err),
        "method": args.method,
    }
    _emit(_result_payload("eval", inputs, result, digits, micros), args.format)
    return 0


def _cmd_ln(args) -> int:
    vec = ln_vector(args.T)
    result, micros = _timed(
        evaluate, vec, args.abs_err, args.method, block_budget=_block_budget()
    )
    digits = _digits_for(args.abs_err)
    inputs = {"T": args.T, "abs_err": repr(args.abs_err), "method": args.method}
    _emit(_result_payload("ln", inputs, result, digits, micros), args.format)
    return 0


def _cmd_lnq(args) -> int:
    top, bottom = _parse_ratio(args.ratio)
    vec = ln_rational_vector(top, bottom)
    result, micros = _timed(
        evaluate, vec, args.abs_err, args.method, block_budget=_block_budget()
    )
    digits = _digits_for(args.abs_err)
    inputs = {
        "M": top,
        "L": bottom,
        "modulus": vec.modulus,
        "abs_err": repr(args.abs_err),
        "method": args.method,
    }
    _emit(_result_payload("lnq", inputs, result, digits, micros), args.format)
    return 0


def _cmd_pi(args) -> int:
    value, micros = _timed(quadrature.pi_estimate, args.abs_err)
    digits = _digits_for(args.abs_err)
    payload = {
        "command": "pi",
        "inputs": {"abs_err": repr(args.abs_err)},
        "value": _real(value, digits),
        "precision": digits,
        "error_bound": repr(args.abs_err),
        "bound_is_heuristic": True,
        "blocks_used": 1000,
        "wall_time_micros": micros,
        "arctan_cross_check": _real(quadrature.pi_arctan(), digits),
    }
    _emit(payload, args.format)
    return 0


def _cmd_gamma(args) -> int:
    partial, micros = _timed(gamma_partial, args.n)
    digits = 17
    payload = {
        "command": "gamma",
        "inputs": {"n": args.n},
        "value": _real(partial.value, digits),
        "precision": digits,
        # distance to the limit: the steps A_n - A_{n+1} lie in
        # (0, 1/(n(n+1))) and telescope to at most 1/n
        "error_bound": repr(1.0 / args.n),
        "bound_is_heuristic": False,
        "blocks_used": args.n,
        "wall_time_micros": micros,
    }
    _emit(payload, args.format)
    return 0


def _cmd_integral_check(args) -> int:
    check, micros = _timed(quadrature.integral_series_check, args.T, args.j, args.tol)
    digits = _digits_for(args.tol)
    payload = {
        "command": "integral-check",
        "inputs": {"T": args.T, "j": args.j, "tol": repr(args.tol)},
        "value": _real(check.integral_value, digits),
        "precision": digits,
        "error_bound": repr(check.tolerance),
        "bound_is_heuristic": True,
        "blocks_used": 0,
        "series_value": _real(check.series_value, digits),
        "discrepancy": repr(check.discrepancy),
        "tolerance": repr(check.tolerance),
        "wall_time_micros": micros,
    }
    _emit(payload, args.format)
    return 0


def _cmd_decompose(args) -> int:
    value, micros = _timed(quadrature.decomposition_check, args.T, args.tol)
    digits = _digits_for(args.tol)
    with mp.workprec(96):
        reference = float(mp.ln(args.T))
    payload = {
        "command": "decompose",
        "inputs": {"T": args.T, "tol": repr(args.tol)},
        "value": _real(value, digits),
        "precision": digits,
        "error_bound": repr(args.tol),
        "bound_is_heuristic": True,
        "blocks_used": 0,
        "reference_log": _real(reference, digits),
        "abs_error_vs_reference": repr(abs(value - reference)),
        "wall_time_micros": micros,
    }
    _emit(payload, args.format)
    return 0


def _cmd_relations(args) -> int:
    start = time.perf_counter_ns()
    basis = relations.divisor_relations(args.T)
    witnesses = relations.relation_witnesses(args.T, basis)
    micros = (time.perf_counter_ns() - start) // 1000
    entries = []
    for rel, witness in zip(basis.vectors, witnesses):
        ok, result = relations.verify_zero(witness, 1e-6)
        entries.append(
            {
                "relation": [str(c) for c in rel],
                "witness_modulus": witness.modulus,
                "witness_coeffs": [str(c) for c in witness.coeffs],
                "witness_value": _real(result.value, 17),
                "witness_bound": repr(result.error_bound),
                "verified_zero": ok,
            }
        )
    payload = {
        "command": "relations",
        "inputs": {"T": args.T},
        "family_size": basis.family_size,
        "relation_count": len(basis.vectors),
        "relations": entries,
        "wall_time_micros": micros,
    }
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(
            f"relations (T={args.T}) found {len(entries)} over a family of "
            f"{basis.family_size}"
        )
        for entry in entries:
            coeffs = ", ".join(entry["witness_coeffs"])
            print(
                f"  zero series ({coeffs}) value={entry['witness_value']} "
                f"verified={entry['verified_zero']}"
            )
    return 0


def _cmd_rearranged(args) -> int:
    terms, micros = _timed(rearranged_terms, args.T, args.n)
    total = sum(terms, Fraction(0))
    value = float(total)
    payload = {
        "command": "rearranged",
        "inputs": {"T": args.T, "n": args.n},
        "value": _real(value, 17),
        "precision": 17,
        # the partial sum itself is exact; only the decimal rendering rounds
        "error_bound": repr(math.ldexp(abs(value) + 1.0, -52)),
        "bound_is_heuristic": False,
        "blocks_used": args.n // (args.T + 1),
        "partial_sum": f"{total.numerator}/{total.denominator}",
        "terms": [f"{t.numerator}/{t.denominator}" for t in terms],
        "wall_time_micros": micros,
    }
    _emit(payload, args.format)
    return 0


# ----------------------------------------------------------------------
# bench
# ----------------------------------------------------------------------


def _bench_target(target: str, block_budget: int, max_work: int):
    """Returns (vector, scale, reference, kind)."""
    if target == "pi":
        with mp.workprec(120):
            reference = float(mp.pi)
        return make_vector(3, (1, -1, 0)), 3.0 * math.sqrt(3.0), reference, "pi"
    if target.startswith("ln:"):
        T = int(target.split(":", 1)[1])
        with mp.workprec(120):
            reference = float(mp.ln(T))
        return ln_vector(T), 1.0, reference, "ln"
    if target.startswith("vector:"):
        _, T, coeffs = target.split(":", 2)
        vec = make_vector(int(T), _parse_coeffs(coeffs))
        reference = float(partial_sum_float(vec, max(2, max_work) * 1000))
        return vec, 1.0, reference, "vector"
    raise SeriesError(f"unknown bench target {target!r}; use ln:T, pi, or vector:T:c1,...")


def _rearranged_prefix(T: int, count: int) -> tuple[float, float]:
    """(float prefix sum of the stream, rigorous error bound vs ln T)."""
    total = 0.0
    emitted = 0
    k = 0
    while emitted < count:
        base = k * T
        for j in range(1, T + 1):
            total += 1.0 / (base + j)
            emitted += 1
            if emitted == count:
                break
        else:
            total -= 1.0 / (k + 1)
            emitted += 1
        k += 1
    complete = count // (T + 1)
    bound = tail_bound(ln_vector(T), max(2, complete))
    if complete < 2:
        # the tail bound starts at two blocks; charge the skipped ones whole
        bound += 2.0 * (math.log(T + 1) + 2.0)
    elif count % (T + 1):
        # partial block k: its terms sum to less than 2(T+1)/(kT)
        bound += 2.0 * (T + 1) / (complete * T)
    return total, bound + 1e-12 * (1.0 + abs(total))


def bench(
    target: str,
    methods: list[str],
    work_schedule: list[int],
    *,
    block_budget: int = DEFAULT_BLOCK_BUDGET,
) -> list[ConvergenceRow]:
    """One ConvergenceRow per (method, work) pair, in schedule order."""
    if not methods:
        raise SeriesError("need at least one method")
    if not work_schedule or any(w < 1 for w in work_schedule):
        raise SeriesError("work schedule must be positive integers")
    for method in methods:
        if method not in _BENCH_METHODS:
            raise SeriesError(
                f"unknown method {method!r}; choose from {', '.join(_BENCH_METHODS)}"
            )
    vec, scale, reference, kind = _bench_target(target, block_budget, max(work_schedule))
    T = vec.modulus
    rows = []
    for method in methods:
        if method == "rearranged" and kind != "ln":
            raise SeriesError("rearranged benches only apply to ln:T targets")
        if method == "quadrature" and kind == "vector":
            raise SeriesError("quadrature benches only apply to ln:T and pi targets")
        for work in work_schedule:
            start = time.perf_counter_ns()
            if method == "raw":
                blocks = max(2, work)
                value = scale * float(partial_sum_float(vec, blocks))
                bound = scale * (tail_bound(vec, blocks) + 1e-15 * (1.0 + abs(value)))
            elif method == "accelerated":
                result = evaluate(
                    vec,
                    float("inf"),
                    "accelerated",
                    block_budget=block_budget,
                    prefix_blocks=max(2, work),
                )
                value = scale * float(result.value)
                bound = scale * result.error_bound
            elif method == "rearranged":
                value, bound = _rearranged_prefix(T, work)
            else:  # quadrature
                if kind == "pi":
                    value = scale * quadrature.fixed_panel_integral(3, 1, work)
                    finer = scale * quadrature.fixed_panel_integral(3, 1, work + 1)
                else:
                    value = math.fsum(
                        j * quadrature.fixed_panel_integral(T, j, work)
                        for j in range(1, T)
                    )
                    finer = math.fsum(
                        j * quadrature.fixed_panel_integral(T, j, work + 1)
                        for j in range(1, T)
                    )
                bound = abs(value - finer) + 1e-15 * (1.0 + abs(value))
            micros = (time.perf_counter_ns() - start) // 1000
            rows.append(
                ConvergenceRow(
                    method=method,
                    work=work,
                    value=value,
                    error_bound=bound,
                    abs_error_vs_reference=abs(value - reference),
                    wall_time_micros=micros,
                )
            )
    return rows


def _cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    schedule = [int(w) for w in args.work.split(",") if w.strip()]
    rows = bench(args.target, methods, schedule, block_budget=_block_budget())
    print(CSV_HEADER)
    for row in rows:
        print(row.as_csv())
    return 0


# ----------------------------------------------------------------------
# parser and entry point
# ----------------------------------------------------------------------


def _add_shared(parser, *, abs_err_default=1e-9) -> None:
    parser.add_argument("--abs-err", type=float, default=abs_err_default)
    parser.add_argument(
        "--method", choices=("raw", "accelerated"), default="accelerated"
    )
    parser.add_argument("--format", choices=("json", "text"), default="json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logser",
        description=(
            "Natural logarithms, pi and the Euler-Mascheroni partials via "
            "balanced cyclic harmonic series, with exact rational algebra."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a coefficient vector")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--coeffs", type=str, required=True)
    _add_shared(p)
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("ln", help="ln of a natural number")
    p.add_argument("T", type=int)
    _add_shared(p)
    p.set_defaults(handler=_cmd_ln)

    p = sub.add_parser("lnq", help="ln of a positive rational M/L")
    p.add_argument("ratio", type=str, metavar="M/L")
    _add_shared(p)
    p.set_defaults(handler=_cmd_lnq)

    p = sub.add_parser("pi", help="pi from the modulus-3 difference series")
    _add_shared(p)
    p.set_defaults(handler=_cmd_pi)

    p = sub.add_parser("gamma", help="partial H_n - ln n of the Euler-Mascheroni limit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_gamma)

    p = sub.add_parser("integral-check", help="integral vs series agreement")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_integral_check)

    p = sub.add_parser("decompose", help="rebuild ln T from weighted integrals")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("relations", help="zero-series relations for a composite modulus")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_relations)

    p = sub.add_parser("rearranged", help="terms of the rearranged stream")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(handler=_cmd_rearranged)

    p = sub.add_parser("bench", help="convergence benchmark (CSV to stdout)")
    p.add_argument("--target", type=str, required=True, metavar="ln:T|pi|vector:T:c1,...")
    p.add_argument("--methods", type=str, required=True)
    p.add_argument("--work", type=str, required=True)
    p.set_defaults(handler=_cmd_bench)

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse argv, dispatch, and return the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except SeriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
