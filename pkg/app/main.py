"""Command-line entry point for the Edge-Walk discrepancy tools.

Every command prints one JSON report (stdout or --output); the human summary
goes to stderr through the logger. Exit codes: 0 success, 1 algorithmic
failure, 2 usage/parse/precondition error, 3 numeric failure.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import ValidationError

from .config.logging_config import logger
from .config.settings import settings
from .core.discrepancy import discrepancy, indicator_matrix, inner_products
from .core.errors import EdgeWalkError, PreconditionError, RetriesExhausted
from .core.oracle import brute_force_disc, verify_partial
from .instances.generator import generate
from .instances.loader import format_set_system, load_coloring, load_fractional, load_instance, save_matrix, save_set_system
from .models.colorings import BeckFialaParams, SpencerParams, default_alpha, sharp_alpha
from .models.run_config import RunConfig
from .models.set_systems import ConstraintSet, FractionalColoring, SetSystem
from .workflows.bench import BenchRunner
from .workflows.edge_walk import PartialColorer, make_walk_params
from .workflows.full_coloring import BeckFialaColorer, SpencerColorer

Instance = Union[SetSystem, ConstraintSet]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="Set-system text file or CSV matrix")
    common.add_argument("--output", type=Path, help="Write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--runs", type=int, default=1)
    common.add_argument("--delta", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--big-c", dest="big_c", type=float)
    common.add_argument("--k1", type=float, help="Horizon constant, T = k1 / gamma^2")
    common.add_argument("--retries", type=int)
    common.add_argument("--tol", dest="eps_slack", type=float, help="Containment slack eps_slack")
    common.add_argument("--threshold", type=float, help="Uniform threshold c_j (partial, verify, bench)")
    common.add_argument("--degree", type=int, help="Frequency bound t (beckfiala)")
    common.add_argument("--rounding", choices=["randomized", "sign"], default="randomized")
    common.add_argument("--alpha", choices=["default", "sharp"], default="default",
                        help="Per-round threshold rule (spencer); sharp skips the feasibility check")
    common.add_argument("--target", choices=["partial", "spencer", "beckfiala"], default="partial",
                        help="What bench runs")
    common.add_argument("--trace", action="store_true", help="Record the walk's basis-change trace")
    common.add_argument("--coloring", type=Path, help="Coloring (disc) or JSON point (verify)")
    common.add_argument("--gen", choices=["bernoulli", "k-uniform", "low-degree", "singleton", "matrix-gaussian"])
    common.add_argument("--spec", type=Path, help="Generator spec as JSON")
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--p", type=float)
    common.add_argument("--k", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--gen-seed", dest="gen_seed", type=int)

    parser = argparse.ArgumentParser(prog="edgewalk", description=f"{settings.APP_NAME} {settings.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("gen", "Generate an instance"),
        ("partial", "Partial coloring by the Edge-Walk"),
        ("spencer", "Full coloring of a general set system"),
        ("beckfiala", "Full coloring of a bounded-degree set system"),
        ("disc", "Discrepancy of a given coloring"),
        ("brute", "Exact minimum discrepancy by enumeration"),
        ("verify", "Check the partial-coloring conditions for a point"),
        ("bench", "Statistics over independent seeded runs"),
    ]:
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


class CommandRunner:
    """Dispatches a RunConfig and returns (report, exit code)."""

    def __init__(self, config: RunConfig):
        self.config = config

    def instance(self) -> Instance:
        if self.config.input is not None:
            return load_instance(self.config.input)
        return generate(self.config.generator_spec())

    def set_system(self) -> SetSystem:
        instance = self.instance()
        if not isinstance(instance, SetSystem):
            raise PreconditionError(f"{self.config.command} needs a set system, not a matrix")
        return instance

    @staticmethod
    def constraints_of(instance: Instance) -> ConstraintSet:
        return indicator_matrix(instance) if isinstance(instance, SetSystem) else instance

    def thresholds(self, constraints: ConstraintSet) -> ConstraintSet:
        c = self.config.threshold
        if c is None:
            c = default_alpha(max(int(constraints.nonzero.sum()), 1), constraints.n)
        return constraints.with_thresholds(c)

    def run(self) -> Tuple[dict, int]:
        return getattr(self, f"cmd_{self.config.command}")()

    # -- commands ----------------------------------------------------------------

    def cmd_gen(self) -> Tuple[dict, int]:
        spec = self.config.generator_spec()
        instance = generate(spec)
        report = {"kind": spec.kind, "n": instance.n, "m": instance.m, "seed": spec.seed}
        if self.config.output is not None:
            if isinstance(instance, SetSystem):
                save_set_system(instance, self.config.output)
            else:
                save_matrix(instance, self.config.output)
            report["path"] = str(self.config.output)
        elif isinstance(instance, SetSystem):
            report["instance"] = format_set_system(instance)
        else:
            report["rows"] = instance.rows.tolist()
        logger.info(f"Generated {spec.kind} instance with n={instance.n}, m={instance.m}")
        return report, 0

    def cmd_partial(self) -> Tuple[dict, int]:
        cfg = self.config
        constraints = self.thresholds(self.constraints_of(self.instance()))
        params = make_walk_params(
            cfg.delta if cfg.delta is not None else settings.DEFAULT_DELTA,
            constraints.n, int(constraints.nonzero.sum()),
            gamma=cfg.gamma, big_c=cfg.big_c, k1=cfg.k1, max_retries=cfg.retries,
            eps_slack=cfg.eps_slack, seed=cfg.seed, record_trace=cfg.trace,
        )
        try:
            outcome, attempts = PartialColorer(constraints, None, params).run()
        except RetriesExhausted as e:
            report = e.best.to_report() if e.best is not None else {}
            report.update({"attempts": params.max_retries, "error": _error(e)})
            return report, e.exit_code
        logger.info(f"Partial coloring: {outcome.n_active_vars}/{constraints.n} coordinates fixed, "
                    f"{outcome.n_active_disc} tight constraints, {attempts} attempt(s)")
        return {**outcome.to_report(), "attempts": attempts}, 0

    def _pipeline(self, colorer) -> Tuple[dict, int]:
        try:
            result = colorer.run()
        except RetriesExhausted as e:
            return {"seed": self.config.seed, "error": _error(e), "progress": e.progress}, e.exit_code
        logger.info(f"Discrepancy {result.report.max_abs:g} (bound {result.report.bound:.3f}) "
                    f"after {len(result.rounds)} round(s)")
        return result.to_report(), 0

    def cmd_spencer(self) -> Tuple[dict, int]:
        cfg = self.config
        rule = {"alpha_rule": sharp_alpha, "require_feasible": False} if cfg.alpha == "sharp" else {}
        params = SpencerParams(delta=cfg.delta, walk_retries=cfg.retries, rounding=cfg.rounding,
                               big_c=cfg.big_c, gamma=cfg.gamma, seed=cfg.seed, **rule)
        return self._pipeline(SpencerColorer(self.set_system(), params))

    def cmd_beckfiala(self) -> Tuple[dict, int]:
        cfg = self.config
        sys_ = self.set_system()
        degree = cfg.degree if cfg.degree is not None else max(1, int(sys_.frequencies().max(initial=1)))
        params = BeckFialaParams(degree_t=degree, delta=cfg.delta, walk_retries=cfg.retries,
                                 big_c=cfg.big_c, gamma=cfg.gamma, seed=cfg.seed)
        return self._pipeline(BeckFialaColorer(sys_, params))

    def cmd_disc(self) -> Tuple[dict, int]:
        instance = self.instance()
        chi = load_coloring(self.config.coloring)
        if isinstance(instance, SetSystem):
            report = discrepancy(chi, instance)
        else:
            report = inner_products(chi.chi.astype(float), instance)
        logger.info(f"Discrepancy of the given coloring: {report.max_abs:g}")
        return report.to_report(), 0

    def cmd_brute(self) -> Tuple[dict, int]:
        result = brute_force_disc(self.set_system())
        logger.info(f"Minimum discrepancy {result.opt_disc} over {result.n_enumerated} colorings")
        return result.to_report(), 0

    def cmd_verify(self) -> Tuple[dict, int]:
        constraints = self.thresholds(self.constraints_of(self.instance()))
        x, x0 = load_fractional(self.config.coloring)
        delta = self.config.delta if self.config.delta is not None else settings.DEFAULT_DELTA
        check = verify_partial(x, x0 if x0 is not None else FractionalColoring.zeros(x.n), constraints, delta,
                               eps_slack=self.config.eps_slack)
        logger.info(f"Partial-coloring conditions hold: {check.holds} ({check.n_near} near-integral, "
                    f"{len(check.violating)} violated)")
        return check.to_report(), 0 if check.holds else 1

    def cmd_bench(self) -> Tuple[dict, int]:
        cfg = self.config
        runner = BenchRunner(
            self.instance(), target=cfg.target, runs=cfg.runs, seed=cfg.seed, delta=cfg.delta,
            gamma=cfg.gamma, big_c=cfg.big_c, k1=cfg.k1, threshold=cfg.threshold,
            degree_t=cfg.degree, eps_slack=cfg.eps_slack,
        )
        return runner.run().to_report(), 0


def _error(e: Exception) -> dict:
    return {"type": type(e).__name__, "message": str(e)}


def emit(report: dict, output: Optional[Path]) -> None:
    text = json.dumps(report, indent=2)
    if output is None:
        sys.stdout.write(text + "\n")
        sys.stdout.flush()
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8", newline="\n") as f:
        f.write(text + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if v is not None}
    # gen writes the instance itself; its report always goes to stdout
    output = options.get("output") if args.command != "gen" else None
    try:
        config = RunConfig(**options)
        report, code = CommandRunner(config).run()
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        report, code = {"command": args.command, "error": _error(e)}, 2
    except EdgeWalkError as e:
        logger.error(f"{args.command} failed: {e}")
        report, code = {"command": args.command, "error": _error(e)}, e.exit_code
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        report, code = {"command": args.command, "error": _error(e)}, 2
    else:
        report = {"command": config.command, **report}
    emit(report, output)
    return code


if __name__ == "__main__":
    sys.exit(main())
