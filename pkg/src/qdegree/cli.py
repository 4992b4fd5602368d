"""Command-line reproduction harness.

Subcommands ingest truth-table files or scheme parameters, run the
package's analyses/simulations, and emit a JSON report.  Reports are
deterministic for fixed (input, flags, seed): wall-clock timing is only
included when ``--timing`` is passed.  The exit code is 0 iff every
verdict in the report passes.

Truth-table file format: line 1 is the variable count n, line 2 is
exactly 2**n characters from {0,1} in row order (row r encodes the input
whose i-th variable is bit n-i of r).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, addressing, approxdeg, boolfn, discrimination, qsim, tails

SCHEMA_VERSION = 1


def _fraction_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator}


def _verdict(name: str, ok: bool, operation: str, tolerance: str, detail: str) -> dict:
    return {"name": name, "pass": bool(ok), "operation": operation,
            "tolerance": tolerance, "detail": detail}


def _report(command: str, input_desc: dict, seed: int | None,
            results: dict, verdicts: list[dict]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": "qdegree",
        "version": __version__,
        "command": command,
        "input": input_desc,
        "seed": seed,
        "results": results,
        "verdicts": verdicts,
        "failures": [v for v in verdicts if not v["pass"]],
        "wall_clock_s": None,
    }


def _load_table(path: str) -> boolfn.TruthTable:
    with open(path, "r", encoding="utf-8") as fh:
        return boolfn.parse_truth_table_text(fh.read())


def _spectrum_json(poly: boolfn.MultilinearPolynomial, limit: int = 256) -> dict:
    entries = sorted(poly.coeffs.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    if len(entries) > limit:
        return {"omitted": True, "nonzero_count": len(entries),
                "operation": "fourier_transform", "tolerance": "exact dyadic"}
    return {
        "omitted": False,
        "operation": "fourier_transform",
        "tolerance": "exact dyadic",
        "coefficients": [{"subset": sorted(s), "value": v} for s, v in entries],
    }


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> dict:
    tt = _load_table(args.path)
    st = boolfn.stats(tt)
    size = 1 << tt.n
    verdicts = []

    counts = [int(f.numerator * (size // f.denominator)) if f != 0 else 0
              for f in st.influences]
    influential = [i for i in range(tt.n) if counts[i] > 0]
    ok1 = all(counts[i] * (1 << st.degree) >= size for i in influential)
    verdicts.append(_verdict(
        "influence_vs_degree", ok1, "influence/truth_table_degree",
        "exact integer arithmetic",
        f"count_i * 2^deg >= 2^n for all {len(influential)} influential variables"))
    ok2 = sum(counts) <= st.degree * size
    verdicts.append(_verdict(
        "influence_sum_vs_degree", ok2, "influence/truth_table_degree",
        "exact integer arithmetic",
        f"sum of counts {sum(counts)} <= degree*2^n = {st.degree * size}"))
    ok3 = all(counts[i] * (1 << (2 * st.sensitivity)) >= 2 * size for i in influential)
    verdicts.append(_verdict(
        "influence_vs_sensitivity", ok3, "influence/sensitivity",
        "exact integer arithmetic",
        f"count_i * 2^(2s) >= 2^(n+1) with s={st.sensitivity}"))

    spectrum = _spectrum_json(boolfn.fourier_transform(tt))
    results = {
        "n": tt.n,
        "degree": {"value": st.degree, "operation": "truth_table_degree",
                   "tolerance": "exact integer"},
        "expectation": {"value": st.expectation, "operation": "stats",
                        "tolerance": "float64"},
        "variance": {"value": st.variance, "operation": "stats", "tolerance": "float64"},
        "sensitivity": {"value": st.sensitivity, "operation": "sensitivity",
                        "tolerance": "exact integer"},
        "influences": {"values": [_fraction_json(f) for f in st.influences],
                       "operation": "influence", "tolerance": "exact rational"},
        "significant_variables": sorted(boolfn.significant_variables(tt)),
        "fourier_spectrum": spectrum,
    }
    return _report("analyze", {"path": args.path}, None, results, verdicts)


# ---------------------------------------------------------------------------
# approxdeg


def cmd_approxdeg(args) -> dict:
    tt = _load_table(args.path)
    eps = args.eps
    per_degree = []
    last = None
    d_star = None
    for d in range(tt.n + 1):
        res = approxdeg.minimax_error(tt, d)
        per_degree.append({
            "d": d,
            "epsilon": res.epsilon,
            "epsilon_exact": _fraction_json(res.epsilon_exact),
            "operation": "minimax_error",
            "tolerance": "exact rational LP optimum",
        })
        if last is not None and res.epsilon_exact > last:
            raise RuntimeError("minimax error increased with degree; solver bug")
        last = res.epsilon_exact
        if d_star is None and res.epsilon <= eps + approxdeg.EPS_SLACK:
            d_star = d
            if not args.full_sweep:
                break
    verdicts = [
        _verdict("epsilon_monotone_in_degree", True, "minimax_error",
                 "exact rational comparison", "optimal error never increased with d"),
        _verdict("approx_degree_found", d_star is not None, "approx_degree",
                 f"eps + {approxdeg.EPS_SLACK}", f"approximate degree {d_star} at eps={eps}"),
    ]
    results = {
        "n": tt.n,
        "eps": eps,
        "approx_degree": d_star,
        "minimax_errors": per_degree,
        "exact_degree": {"value": boolfn.truth_table_degree(tt),
                         "operation": "truth_table_degree", "tolerance": "exact integer"},
    }
    return _report("approxdeg", {"path": args.path, "eps": eps}, None, results, verdicts)


# ---------------------------------------------------------------------------
# verify-bounds


def cmd_verify_bounds(args) -> dict:
    sweep = boolfn.exhaustive_inequality_sweep(args.n)
    counterexamples = []
    for v in sweep.violations:
        tt = boolfn.truth_table_from_code(v.code, args.n)
        counterexamples.append({
            "function_code": v.code,
            "truth_table": "".join(str(int(b)) for b in tt.values),
            "check": v.check,
            "variable": v.variable,
            "detail": v.detail,
        })
    verdicts = [_verdict(
        "exhaustive_inequalities", sweep.ok, "exhaustive_inequality_sweep",
        "exact integer arithmetic",
        f"{sweep.functions} functions on n={args.n}, {len(sweep.violations)} violations")]
    results = {
        "n": args.n,
        "functions_checked": sweep.functions,
        "checks": ["influence_vs_degree", "influence_sum_vs_degree",
                   "influence_vs_sensitivity"],
        "violations": counterexamples,
    }
    return _report("verify-bounds", {"n": args.n}, None, results, verdicts)


# ---------------------------------------------------------------------------
# scheme runs


def cmd_scheme1(args) -> dict:
    rng = np.random.default_rng(args.seed)
    scheme = addressing.generate_codewords(args.k, args.m, c=args.c, rng=args.seed)
    exact = {}
    worst_exact = 1.0
    for i in range(1, scheme.k + 1):
        p = addressing.scheme1_exact_success(scheme, scheme.codeword_bits(i))
        exact[f"codeword_{i}"] = p
        worst_exact = min(worst_exact, p)
    sampled_hits = 0
    max_queries = 0
    for _ in range(args.trials):
        x = rng.integers(0, 2, scheme.m, dtype=np.uint8)
        oracle = qsim.PhaseOracle(x)
        out = addressing.scheme1_quantum_eval(oracle, scheme, rng)
        sampled_hits += out == addressing.scheme1_address(x, scheme)
        max_queries = max(max_queries, oracle.query_count)
    gmax = scheme.gram.max_offdiagonal()
    verdicts = [
        _verdict("codeword_success", worst_exact >= 2 / 3 - 1e-9,
                 "scheme1_exact_success", "exact branch composition, 1e-9",
                 f"worst exact success over codewords {worst_exact:.6f} >= 2/3"),
        _verdict("gram_hypothesis", gmax <= 1.0 / scheme.k ** 2 + 1e-12,
                 "gram_from_codewords", "1e-12",
                 f"max |G_ij| = {gmax:.6g} <= 1/k^2 with t'={scheme.t_prime}"),
        _verdict("query_budget", max_queries <= scheme.query_budget,
                 "scheme1_quantum_eval", "exact count",
                 f"max observed {max_queries} <= budget {scheme.query_budget}"),
    ]
    results = {
        "descriptor": scheme.to_descriptor(),
        "exact_success": exact,
        "sampled": {"trials": args.trials,
                    "success_rate": sampled_hits / args.trials if args.trials else None,
                    "max_queries": max_queries,
                    "query_budget": scheme.query_budget},
    }
    return _report("scheme1", {"k": args.k, "m": args.m, "c": args.c},
                   args.seed, results, verdicts)


def cmd_scheme2(args) -> dict:
    rng = np.random.default_rng(args.seed)
    scheme = addressing.Scheme2.create(args.s, args.t)
    promise_worst = 1.0
    promise_checked = 0
    if scheme.k <= 1024:
        for value in range(scheme.k):
            address = qsim.int_to_bitstring(value, scheme.address_bits)
            tail = "".join(addressing.hadamard_codeword(
                address[j * scheme.s:(j + 1) * scheme.s]) for j in range(scheme.t))
            promise_worst = min(promise_worst, addressing.scheme2_exact_success(scheme, tail))
            promise_checked += 1
    random_worst = 1.0
    sampled_hits = 0
    max_queries = 0
    for _ in range(args.trials):
        x = rng.integers(0, 2, scheme.m, dtype=np.uint8)
        random_worst = min(random_worst, addressing.scheme2_exact_success(scheme, x))
        oracle = qsim.PhaseOracle(x)
        out = addressing.scheme2_quantum_eval(oracle, scheme, rng)
        sampled_hits += out == addressing.scheme2_address(x, scheme)
        max_queries = max(max_queries, oracle.query_count)
    verdicts = [
        _verdict("promise_success_exact_one", promise_worst >= 1.0 - 1e-12,
                 "scheme2_exact_success", "1e-12",
                 f"worst promise-tail success {promise_worst} over {promise_checked} tails"),
        _verdict("random_tail_success", random_worst >= 2 / 3 - 1e-9,
                 "scheme2_exact_success", "exact branch composition, 1e-9",
                 f"worst exact success over {args.trials} random tails {random_worst:.6f}"),
        _verdict("query_budget", max_queries <= scheme.query_budget,
                 "scheme2_quantum_eval", "exact count",
                 f"max observed {max_queries} <= budget {scheme.query_budget}"),
    ]
    results = {
        "descriptor": scheme.to_descriptor(),
        "k": scheme.k,
        "m": scheme.m,
        "promise_tails_checked": promise_checked,
        "promise_worst_success": promise_worst,
        "random_worst_success": random_worst,
        "sampled": {"trials": args.trials,
                    "success_rate": sampled_hits / args.trials if args.trials else None,
                    "max_queries": max_queries,
                    "query_budget": scheme.query_budget},
    }
    return _report("scheme2", {"s": args.s, "t": args.t}, args.seed, results, verdicts)


def cmd_discriminate(args) -> dict:
    rng = np.random.default_rng(args.seed)
    worst_success_dev = 0.0
    worst_e0 = 0.0
    worst_lam = 0.0
    delta_ok = True
    for _ in range(args.instances):
        k = args.k if args.k else int(rng.integers(2, 33))
        gram = discrimination.random_gram(k, rng)
        povm = discrimination.build_povm(gram)
        given = int(rng.integers(1, k + 1))
        probs = discrimination.outcome_distribution(povm, given)
        worst_success_dev = max(worst_success_dev, abs(probs[given] - 2 / 3))
        worst_e0 = min(worst_e0, float(np.linalg.eigvalsh(povm.element(0)).min()))
        worst_lam = max(worst_lam, float(gram.eigenvalues().max()))
        rep = discrimination.delta_norm_check(gram)
        delta_ok = delta_ok and rep.norms_ok and rep.spectrum_ok
    verdicts = [
        _verdict("success_exactly_two_thirds", worst_success_dev <= 1e-9,
                 "outcome_distribution", "1e-9",
                 f"max |Pr[correct] - 2/3| = {worst_success_dev:.3g}"),
        _verdict("e0_psd", worst_e0 >= -1e-9, "build_povm", "1e-9",
                 f"min E_0 eigenvalue {worst_e0:.3g}"),
        _verdict("gram_spectrum", worst_lam <= 1.5 + 1e-9, "build_povm", "1e-9",
                 f"max Gram eigenvalue {worst_lam:.6f} <= 3/2"),
        _verdict("delta_norms", delta_ok, "delta_norm_check", "1e-9",
                 "||A phi_j - phi_j|| <= (k-1)/k^2 and spectrum within [1/2, 3/2]"),
    ]
    results = {
        "instances": args.instances,
        "k": args.k if args.k else "random in [2, 32]",
        "max_success_deviation": worst_success_dev,
        "min_e0_eigenvalue": worst_e0,
        "max_gram_eigenvalue": worst_lam,
    }
    return _report("discriminate", {"k": args.k, "instances": args.instances},
                   args.seed, results, verdicts)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdegree",
        description="Exact desk-scale analyses of Boolean functions and "
                    "query-counted quantum addressing simulations.")
    parser.add_argument("--out", help="write the JSON report to this path instead of stdout")
    parser.add_argument("--timing", action="store_true",
                        help="include wall-clock seconds in the report "
                             "(makes reports non-reproducible byte-for-byte)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="degree/spectrum/influence/sensitivity report")
    p.add_argument("path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("approxdeg", help="minimax errors and approximate degree (n <= 5)")
    p.add_argument("path")
    p.add_argument("--eps", type=float, default=1 / 3)
    p.add_argument("--full-sweep", action="store_true",
                   help="report minimax errors for every d up to n")
    p.set_defaults(func=cmd_approxdeg)

    p = sub.add_parser("verify-bounds", help="exhaustive inequality suite (n <= 4)")
    p.add_argument("--n", type=int, required=True, choices=range(1, 5))
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("scheme1", help="codeword-discrimination addressing scheme")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_scheme1)

    p = sub.add_parser("scheme2", help="Hadamard-block addressing scheme")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_scheme2)

    p = sub.add_parser("discriminate", help="random Gram-matrix POVM suite")
    p.add_argument("--k", type=int, default=0,
                   help="state count (0 = random in [2, 32] per instance)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=200)
    p.set_defaults(func=cmd_discriminate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        report = args.func(args)
    except boolfn.TruthTableParseError as exc:
        error = {"schema": SCHEMA_VERSION, "tool": "qdegree", "version": __version__,
                 "command": args.command,
                 "error": {"kind": "parse", "message": str(exc),
                           "line": exc.line, "column": exc.column}}
        print(json.dumps(error, indent=2))
        return 2
    except (boolfn.CapacityError, ValueError, addressing.ConstructionError) as exc:
        error = {"schema": SCHEMA_VERSION, "tool": "qdegree", "version": __version__,
                 "command": args.command,
                 "error": {"kind": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(error, indent=2))
        return 2
    if args.timing:
        report["wall_clock_s"] = time.perf_counter() - started
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(v["pass"] for v in report["verdicts"]) else 1


if __name__ == "__main__":
    sys.exit(main())
