"""Command-line front end emitting deterministic CSV/JSON artifacts.

Commands: ``gap-curve``, ``regions``, ``verify``, ``classical-demo`` and
``gamma-bound``.  Identical flags (including the seed) produce byte-identical
output files; files are written atomically (temp file plus rename).  Exit
codes: 0 success / all checks pass, 1 usage error, 2 I/O error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VERIFY = 3

SUITES = (
    "entropy-max",
    "min-output",
    "classical-additivity",
    "gamma-bound",
    "dense-coding",
    "chi-consistency",
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _round12(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, (np.floating,)):
        return float(_fmt(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qmac-", text=True)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_json(path: str | None, payload) -> None:
    _write_text(path, json.dumps(_round12(payload), indent=2) + "\n")


def _grid(parser, args) -> np.ndarray:
    if not (0.0 <= args.p_min <= 1.0 and 0.0 <= args.p_max <= 1.0):
        parser.error("p values must lie in [0, 1]")
    if args.p_min > args.p_max:
        parser.error("--p-min must not exceed --p-max")
    if args.steps < 2:
        parser.error("--steps must be at least 2")
    return np.linspace(args.p_min, args.p_max, args.steps)


def _cmd_gap_curve(parser, args) -> int:
    from qmac.infoq import chi1_closed_form, chi2_prime_closed_form

    grid = _grid(parser, args)
    rows = []
    for p in grid:
        c1 = chi1_closed_form(p)
        c2 = chi2_prime_closed_form(p)
        rows.append((p, c1, c2, c2 - c1))
    if args.format == "json":
        payload = [
            {"p": p, "chi1": c1, "chi2_prime": c2, "gap": g} for p, c1, c2, g in rows
        ]
        _write_json(args.out, payload)
    else:
        lines = ["p,chi1,chi2_prime,gap"]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_regions(parser, args) -> int:
    from qmac.regions import known_region, region_record, strict_subset, subset

    names = ("psi_id", "phi1", "minkowski_phi1_psi_id", "phi1_x_psi_id")
    regions = {name: known_region(name) for name in names}
    payload = {
        "regions": [region_record(name, regions[name]) for name in names],
        "minkowski_subset_of_product": subset(
            regions["minkowski_phi1_psi_id"], regions["phi1_x_psi_id"]
        ),
        "strict": strict_subset(
            regions["minkowski_phi1_psi_id"], regions["phi1_x_psi_id"]
        ),
    }
    _write_json(args.out, payload)
    return EXIT_OK


def _cmd_gamma_bound(parser, args) -> int:
    from qmac.cmac import gamma_rb_bound

    grid = _grid(parser, args)
    lines = ["p,bound"]
    lines += [f"{_fmt(p)},{_fmt(gamma_rb_bound(p))}" for p in grid]
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_classical_demo(parser, args) -> int:
    from qmac.cmac import bsc_pair_mac, region_additivity_demo, xor_mac
    from qmac.regions import SamplingConfig, region_record

    demo = region_additivity_demo(
        bsc_pair_mac(), xor_mac(), SamplingConfig(samples=args.trials, seed=args.seed)
    )
    passed = demo.product_in_sum and demo.sum_in_product
    payload = {
        "seed": args.seed,
        "trials": args.trials,
        "regions": [
            region_record("bsc_pair", demo.first_region),
            region_record("xor", demo.second_region),
            region_record("minkowski_sum", demo.sum_region),
            region_record("product_sampled", demo.product_region),
        ],
        "hausdorff": demo.hausdorff,
        "pass": passed,
    }
    _write_json(args.out, payload)
    return EXIT_OK


def _child_seed(seed: int, index: int) -> int:
    return int(
        np.random.SeedSequence(entropy=seed, spawn_key=(index,)).generate_state(1)[0]
    )


def _suite_entropy_max(args) -> dict:
    from qmac.infoq import entropy_max_check

    worst_violation, worst_derivative = -np.inf, 0.0
    for k, p in enumerate((0.25, 0.5, 0.75)):
        report = entropy_max_check(p, args.trials, _child_seed(args.seed, k))
        worst_violation = max(worst_violation, report.max_violation)
        worst_derivative = max(worst_derivative, report.max_derivative)
    return {
        "check": "entropy-max",
        "trials": args.trials,
        "max_violation": worst_violation,
        "max_derivative": worst_derivative,
        "pass": worst_violation <= 1e-9 and worst_derivative < 1e-7,
    }


def _suite_min_output(args) -> dict:
    from qmac.infoq import min_output_entropy_scan

    worst_violation, worst_gap = -np.inf, 0.0
    for k, p in enumerate((0.25, 0.5, 0.75)):
        report = min_output_entropy_scan(p, args.trials, _child_seed(args.seed, 16 + k))
        worst_violation = max(worst_violation, report.max_violation)
        worst_gap = max(worst_gap, report.equality_gap)
    return {
        "check": "min-output",
        "trials": args.trials,
        "max_violation": worst_violation,
        "equality_gap": worst_gap,
        "pass": worst_violation <= 1e-9 and worst_gap <= 1e-12,
    }


def _suite_classical_additivity(args) -> dict:
    from qmac.cmac import additivity_sweep

    report = additivity_sweep(
        pairs=args.trials, trials_per_pair=2, seed=_child_seed(args.seed, 32)
    )
    payload = report.to_json()
    payload["check"] = "classical-additivity"
    return payload


def _suite_gamma_bound(args) -> dict:
    from qmac.cmac import gamma_rb_bound

    grid = np.linspace(0.5 / args.steps, 0.5, args.steps)
    worst = max(gamma_rb_bound(p) for p in grid)
    return {
        "check": "gamma-bound",
        "trials": args.steps,
        "max_violation": worst - 1.81,
        "max_bound": worst,
        "pass": worst < 1.81,
    }


def _suite_dense_coding(args) -> dict:
    from qmac.infoq import dense_coding_rate

    deviation = abs(dense_coding_rate() - 2.0)
    return {
        "check": "dense-coding",
        "trials": 1,
        "max_violation": deviation,
        "pass": deviation <= 1e-12,
    }


def _suite_chi_consistency(args) -> dict:
    from qmac.infoq import (
        SearchConfig,
        chi1_bruteforce,
        chi1_closed_form,
        chi2_prime_closed_form,
        chi2_prime_protocol,
    )

    ok = True
    worst = 0.0
    for k, p in enumerate((0.25, 0.5, 0.75)):
        closed = chi1_closed_form(p)
        found = chi1_bruteforce(
            p, SearchConfig(restarts=args.restarts, seed=_child_seed(args.seed, 48 + k))
        ).value
        ok = ok and (closed - 1e-4 <= found <= closed + 1e-6)
        worst = max(worst, abs(found - closed))
    for p in np.linspace(0.0, 1.0, 5):
        dev = abs(chi2_prime_protocol(p) - chi2_prime_closed_form(p))
        ok = ok and dev <= 1e-9
        worst = max(worst, dev)
    return {
        "check": "chi-consistency",
        "trials": args.restarts,
        "max_violation": worst,
        "pass": ok,
    }


_SUITE_RUNNERS = {
    "entropy-max": _suite_entropy_max,
    "min-output": _suite_min_output,
    "classical-additivity": _suite_classical_additivity,
    "gamma-bound": _suite_gamma_bound,
    "dense-coding": _suite_dense_coding,
    "chi-consistency": _suite_chi_consistency,
}


def _cmd_verify(parser, args) -> int:
    if args.suite is not None and args.suite not in SUITES:
        parser.error(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    names = SUITES if args.suite is None else (args.suite,)
    results = [_SUITE_RUNNERS[name](args) for name in names]
    all_pass = all(r["pass"] for r in results)
    payload = {"seed": args.seed, "suites": results, "pass": all_pass}
    _write_json(args.out, payload)
    return EXIT_OK if all_pass else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_grid(p, p_min, p_max, steps):
        p.add_argument("--p-min", type=float, default=p_min)
        p.add_argument("--p-max", type=float, default=p_max)
        p.add_argument("--steps", type=int, default=steps)

    def add_out(p):
        p.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")

    gap = sub.add_parser("gap-curve", help="chi1/chi2' rate curves and their gap (CSV)")
    add_grid(gap, 0.0, 1.0, 21)
    gap.add_argument("--format", choices=("csv", "json"), default="csv")
    add_out(gap)
    gap.set_defaults(func=_cmd_gap_curve)

    reg = sub.add_parser("regions", help="the four named rate regions plus verdicts (JSON)")
    add_out(reg)
    reg.set_defaults(func=_cmd_regions)

    ver = sub.add_parser("verify", help="numerical verification suites (JSON report)")
    ver.add_argument("--suite", default=None, help=f"one of: {', '.join(SUITES)}")
    ver.add_argument("--seed", type=int, required=True)
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--restarts", type=int, default=50)
    ver.add_argument("--steps", type=int, default=50)
    add_out(ver)
    ver.set_defaults(func=_cmd_verify)

    demo = sub.add_parser("classical-demo", help="classical pair regions and their sum (JSON)")
    demo.add_argument("--seed", type=int, required=True)
    demo.add_argument("--trials", type=int, default=200)
    add_out(demo)
    demo.set_defaults(func=_cmd_classical_demo)

    gamma = sub.add_parser("gamma-bound", help="regularized register-rate bound curve (CSV)")
    add_grid(gamma, 0.01, 0.5, 50)
    add_out(gamma)
    gamma.set_defaults(func=_cmd_gamma_bound)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("trials", "restarts"):
        if getattr(args, name, 1) < 1:
            parser.print_usage(sys.stderr)
            sys.stderr.write(f"qmac: error: --{name} must be positive\n")
            return EXIT_USAGE
    if getattr(args, "steps", 2) < 2:
        parser.print_usage(sys.stderr)
        sys.stderr.write("qmac: error: --steps must be at least 2\n")
        return EXIT_USAGE
    try:
        return args.func(parser, args)
    except SystemExit as exc:  # parser.error inside a command
        return int(exc.code or 0)
    except OSError as exc:
        sys.stderr.write(f"qmac: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
