"""Command-line front end: gen, solve, bench, verify, density."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .bench import BenchSpec, density_report, prepare, run_matrix, to_csv, write_csv
from .certificates import verify_epsilon_consistency, verify_lp_certificate
from .domains import load_problem, serialize
from .heuristics import CapabilityError, make_heuristic, parse_heuristic_selector
from .model import ConfigError, ModelError
from .solvers import ALGORITHMS, DEFAULT_EPSILON, DEFAULT_PENALTY, SolverConfig, solve

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
LP_CHECK_STATE_LIMIT = 20_000
OPTIMALITY_TOLERANCE = 1e-3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _algo(value: str) -> str:
    if value not in ALGORITHMS:
        raise argparse.ArgumentTypeError(f"unknown algorithm {value!r} (choose from {', '.join(ALGORITHMS)})")
    return value


def _heuristic(value: str) -> str:
    try:
        parse_heuristic_selector(value)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def _positive(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return x


def _non_negative(value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from None
    if x < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return x


def _add_solver_flags(p: argparse.ArgumentParser, default_algo: str | None = None) -> None:
    p.add_argument("--problem", required=True, help="fig2 | tw:<n>,<d>[,nc] | rand:<l>,<w>,<b>,<o>,<seed> | file:<path>")
    if default_algo is None:
        p.add_argument("--algo", required=True, type=_algo, help=f"one of {', '.join(ALGORITHMS)}")
    else:
        p.add_argument("--algo", default=default_algo, type=_algo, help=f"one of {', '.join(ALGORITHMS)}")
    p.add_argument("--heuristic", default="det", type=_heuristic, help="zero | det | table | pert:<w> (default det)")
    p.add_argument("--epsilon", default=DEFAULT_EPSILON, type=_positive)
    p.add_argument("--penalty", default=DEFAULT_PENALTY, type=_positive, help="give-up cost D")
    p.add_argument("--seed", default=0, type=int)
    p.add_argument("--timeout", default=None, type=_non_negative, help="wall-clock limit in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cgilao", description="SSP planning with iLAO*, CG-iLAO*, LRTDP and VI.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write a problem as grounded JSON")
    gen.add_argument("--problem", required=True)
    gen.add_argument("--out", type=Path, help="output file (default: stdout)")

    solve_p = sub.add_parser("solve", help="solve one problem and print a summary")
    _add_solver_flags(solve_p)
    solve_p.add_argument("--out", type=Path, help="write the run as a one-row CSV")

    bench = sub.add_parser("bench", help="run a problem x algorithm x heuristic x seed matrix")
    bench.add_argument("--problems", nargs="+", required=True)
    bench.add_argument("--algos", nargs="+", required=True, type=_algo)
    bench.add_argument("--heuristics", nargs="+", default=["det"], type=_heuristic)
    bench.add_argument("--seeds", type=int, default=1, help="seeds per cell (0..k-1)")
    bench.add_argument("--epsilon", default=DEFAULT_EPSILON, type=_positive)
    bench.add_argument("--penalty", default=DEFAULT_PENALTY, type=_positive)
    bench.add_argument("--timeout", default=None, type=_non_negative)
    bench.add_argument("--jobs", type=int, default=1, help="worker processes")
    bench.add_argument("--out", type=Path, help="CSV path (default: stdout)")

    verify = sub.add_parser("verify", help="solve, then check certificates")
    _add_solver_flags(verify)

    density = sub.add_parser("density", help="per-state |Â(s)|/|A(s)| of the final partial SSP")
    _add_solver_flags(density, default_algo="cg-ilao")
    return parser


def _config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(args.epsilon, args.penalty, args.seed, args.timeout)


def _run(args: argparse.Namespace):
    cfg = _config(args)
    problem = prepare(args.problem, cfg.penalty)
    kind, _ = parse_heuristic_selector(args.heuristic)
    vstar = problem.optimal() if kind == "pert" else None
    H = make_heuristic(args.heuristic, problem.ssp, cfg.penalty, cfg.seed, problem.table, vstar)
    return problem, cfg, solve(args.algo, problem.ssp, H, cfg)


def _summary(problem, result) -> list[str]:
    c = result.counters
    lines = [
        f"problem: {problem.selector} ({problem.ssp.num_states} states)",
        f"algorithm: {result.algorithm}",
        f"status: {result.status}",
        f"v_s0 = {result.v_s0:.6g}",
        f"q_values: {c.q_values} (guard {c.q_guard}), backups: {c.backups}, "
        f"expansions: {c.expansions}, heuristic calls: {c.heuristic_calls}",
    ]
    if result.partial is not None:
        lines.append(f"partial actions: {result.partial.partial_action_count()} of {result.partial.potential_action_count()}")
    lines += [cert.summary() for cert in result.certificates.values()]
    if result.diagnostics:
        lines.append(f"diagnostics: {result.diagnostics}")
    return lines


def cmd_gen(args: argparse.Namespace) -> int:
    ssp, _ = load_problem(args.problem)
    text = serialize(ssp, indent=1) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {ssp.num_states} states to {args.out}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    from .bench import run_single

    cfg = _config(args)
    problem = prepare(args.problem, cfg.penalty)
    metrics = run_single(problem, args.algo, args.heuristic, cfg)
    print(f"problem: {problem.selector} ({problem.ssp.num_states} states)")
    print(f"algorithm: {metrics.algo}, heuristic: {metrics.heuristic}")
    print(f"status: {metrics.status}")
    print(f"v_s0 = {metrics.v_s0:.6g}")
    print(f"q_values: {metrics.q_value_count} (guard {metrics.q_value_guard_count}), backups: {metrics.backup_count}, "
          f"expansions: {metrics.expansions}, heuristic calls: {metrics.heuristic_calls}")
    print(f"partial actions: {metrics.partial_actions} of {metrics.potential_actions}")
    if metrics.note:
        print(f"diagnostics: {metrics.note}")
    if args.out is not None:
        write_csv([metrics], args.out)
    return EXIT_OK if metrics.solved else EXIT_FAILED


def cmd_bench(args: argparse.Namespace) -> int:
    spec = BenchSpec(args.problems, args.algos, args.heuristics, args.seeds, args.epsilon, args.penalty,
                     args.timeout, args.out, args.jobs)
    rows = run_matrix(spec)
    if args.out is None:
        sys.stdout.write(to_csv(rows))
    else:
        solved = sum(r.solved for r in rows)
        print(f"{len(rows)} runs, {solved} solved; CSV written to {args.out}")
    for r in rows:
        if r.status == "error":
            print(f"error: {r.instance} {r.algo} {r.heuristic} seed {r.seed}: {r.note}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    problem, cfg, result = _run(args)
    for line in _summary(problem, result):
        print(line)
    ok = result.solved
    if problem.ssp.num_states <= LP_CHECK_STATE_LIMIT:
        if args.algo == "vi":
            reference = result
        else:
            reference = solve("vi", problem.ssp, make_heuristic("zero", problem.ssp, None), cfg)
            gap = abs(reference.v_s0 - result.v_s0)
            match = gap <= OPTIMALITY_TOLERANCE
            print(f"vi reference v_s0 = {reference.v_s0:.6g}: {'pass' if match else 'FAIL'} (gap {gap:.3g})")
            ok = ok and match
        eps_vi = verify_epsilon_consistency(problem.ssp, None, reference.value_function, cfg.epsilon)
        lp = verify_lp_certificate(problem.ssp, reference.value_function, cfg.epsilon)
        print(f"vi {eps_vi.summary()}")
        print(f"vi {lp.summary()}")
        ok = ok and eps_vi.ok and lp.ok
    else:
        print(f"lp-certificate: skipped ({problem.ssp.num_states} states > {LP_CHECK_STATE_LIMIT})")
    print("verify: pass" if ok else "verify: FAIL")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_density(args: argparse.Namespace) -> int:
    problem, _, result = _run(args)
    if result.partial is None:
        raise ConfigError(f"--algo {args.algo}: density needs a partial-SSP solver (ilao or cg-ilao)")
    print(f"problem: {problem.selector}, algorithm: {result.algorithm}, status: {result.status}")
    print(density_report(result.partial).format())
    return EXIT_OK if result.solved else EXIT_FAILED


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "bench": cmd_bench, "verify": cmd_verify, "density": cmd_density}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"cgilao: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ModelError, CapabilityError) as exc:
        print(f"cgilao: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cgilao: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
