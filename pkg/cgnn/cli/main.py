"""Argument parsing and command dispatch for ``python -m cgnn``."""

import argparse
import sys
from typing import Callable, Optional, Sequence

from cgnn.cli import commands
from cgnn.cli.error_handler import handle_errors
from cgnn.config import get_settings
from cgnn.exceptions import ValidationError
from cgnn.logging_config import setup_logger
from cgnn.regressors.networks import REGRESSOR_KINDS

settings = get_settings()
logger = setup_logger(__name__)


class CLIArgumentParser(argparse.ArgumentParser):
    """Reports usage errors through the structured error path instead of exiting."""

    def error(self, message: str) -> None:
        raise ValidationError(
            error_code="INVALID_ARGUMENTS",
            message=message,
            details={"usage": self.format_usage().strip()},
        )


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(part)) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from exc


def _grid(text: str) -> list[tuple[int, int]]:
    """``"128x32,1x1"`` -> ``[(128, 32), (1, 1)]``."""
    cells = []
    for part in text.split(","):
        try:
            probes, steps = part.lower().split("x")
            cells.append((int(probes), int(steps)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected TxK cells such as 128x32, got '{part}'") from exc
    return cells


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="Base seed; repetition i uses seed + i")
    parser.add_argument("--out", default=None, help="Output directory")


def _add_estimator(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("estimators")
    group.add_argument("--probes", type=int, default=None, help=f"Probe vectors T (default {settings.probes})")
    group.add_argument(
        "--lanczos-steps", type=int, default=None, help=f"Lanczos steps k (default {settings.lanczos_steps})"
    )
    group.add_argument("--cg-tol", type=float, default=None, help=f"CG tolerance (default {settings.cg_tolerance})")
    group.add_argument("--n-jobs", type=int, default=None, help="Workers running probes concurrently")
    group.add_argument("--oracle-mode", action="store_true", help="Dense factorizations instead of estimators")


def _add_training(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("training")
    group.add_argument("--epochs", type=int, default=None, help=f"Epochs (default {settings.epochs})")
    group.add_argument("--batch-size", type=int, default=None, help="Labeled vertices per step (default: all)")
    group.add_argument("--lr", type=float, default=None, help="Adam learning rate for the regressor")
    group.add_argument("--lr-correlation", type=float, default=None, help="Learning rate for alpha and beta")
    group.add_argument("--eta", type=float, default=None, help=f"Alpha margin (default {settings.eta})")
    group.add_argument("--freeze-alpha", type=float, default=None, help="Pin every alpha to this value")
    group.add_argument("--freeze-beta", type=float, default=None, help="Pin beta to this value")
    group.add_argument("--regressor", choices=sorted(REGRESSOR_KINDS), default="sage_mean")
    group.add_argument("--hidden-width", type=int, default=None)
    group.add_argument("--representation-dim", type=int, default=None)
    group.add_argument("--layers", type=int, default=None, help="Hidden layers of --hidden-width before the representation layer")
    group.add_argument("--feature-count", type=int, default=None, help="Keep only the first d feature columns")
    group.add_argument("--repetitions", type=int, default=settings.repetitions)


def build_parser() -> CLIArgumentParser:
    parser = CLIArgumentParser(
        prog="cgnn",
        description="Correlated graph regression experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser("generate", help="Write a synthetic dataset bundle")
    generate.add_argument("kind", help="ising+, ising-, ws or grid")
    generate.add_argument("--rows", type=int, default=35)
    generate.add_argument("--cols", type=int, default=35)
    generate.add_argument("--coupling", type=float, default=None, help="Ising coupling magnitude")
    generate.add_argument(
        "--coupling-scale",
        type=float,
        default=None,
        help="Multiplier on the coupling in the Gibbs sampler (1 for the bare Hamiltonian)",
    )
    generate.add_argument("--field-scale", type=float, default=None)
    generate.add_argument("--burn-in", type=int, default=None, help="Gibbs sweeps before the sample")
    generate.add_argument("--samples", type=int, default=1, help="Ising bundles drawn from one chain")
    generate.add_argument("--sample-gap", type=int, default=None, help="Gibbs sweeps between samples")
    generate.add_argument("--n", type=int, default=500)
    generate.add_argument("--k", type=int, default=10, help="Mean degree")
    generate.add_argument("--rewire-prob", type=float, default=0.1)
    _add_common(generate)
    generate.set_defaults(handler=commands.cmd_generate)

    train = subparsers.add_parser("train", help="Train and evaluate a method over seed repetitions")
    train.add_argument("method_positional", nargs="?", default=None, metavar="method")
    train.add_argument("--method", default="c-gnn")
    train.add_argument("--bundle", required=True)
    train.add_argument("--use-bundle-splits", action="store_true", help="Use splits.json instead of random splits")
    _add_common(train)
    _add_estimator(train)
    _add_training(train)
    train.set_defaults(handler=commands.cmd_train)

    predict = subparsers.add_parser("predict", help="Apply a saved model to a bundle")
    predict.add_argument("--model", required=True)
    predict.add_argument("--bundle", required=True)
    predict.add_argument(
        "--labeled-split", default=None, help="Split whose labels are conditioned on (default: all labeled)"
    )
    predict.add_argument("--fine-tune", action="store_true", help="Refit the regressor with alpha and beta fixed")
    predict.add_argument("--feature-count", type=int, default=None)
    _add_common(predict)
    predict.set_defaults(handler=commands.cmd_predict)

    validate = subparsers.add_parser("validate-estimator", help="Stochastic estimates against dense factorizations")
    validate.add_argument("--bundle", default=None, help="Graph to use instead of a generated small-world graph")
    validate.add_argument("--grid", type=_grid, default=[(settings.probes, settings.lanczos_steps)])
    validate.add_argument("--runs", type=int, default=100)
    validate.add_argument("--n", type=int, default=500)
    validate.add_argument("--k", type=int, default=10)
    validate.add_argument("--rewire-prob", type=float, default=0.1)
    validate.add_argument("--alpha", type=float, default=0.999)
    validate.add_argument("--beta", type=float, default=1.0)
    validate.add_argument("--labeled-fraction", type=float, default=0.5)
    validate.add_argument("--no-derivatives", action="store_true", help="Only the log-determinant column")
    _add_common(validate)
    _add_estimator(validate)
    validate.set_defaults(handler=commands.cmd_validate_estimator)

    scaling = subparsers.add_parser("benchmark-scaling", help="Time one loss+gradient evaluation per size")
    scaling.add_argument("--sizes", type=_int_list, default=[1000, 3000, 10000])
    scaling.add_argument("--k", type=int, default=10)
    scaling.add_argument("--rewire-prob", type=float, default=0.1)
    scaling.add_argument("--repeats", type=int, default=1)
    _add_common(scaling)
    _add_estimator(scaling)
    scaling.set_defaults(handler=commands.cmd_benchmark_scaling)

    inductive = subparsers.add_parser("inductive", help="Transfer a trained model to a new graph")
    inductive.add_argument("--train-bundle", required=True)
    inductive.add_argument("--test-bundle", required=True)
    inductive.add_argument("--fractions", type=_float_list, default=[0.0, 0.1, 0.3, 0.5, 0.7, 0.9])
    inductive.add_argument("--fine-tune-epochs", type=int, default=None)
    _add_common(inductive)
    _add_estimator(inductive)
    _add_training(inductive)
    inductive.set_defaults(handler=commands.cmd_inductive)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()

    def run() -> int:
        args = parser.parse_args(argv)
        handler: Callable[[argparse.Namespace], int] = args.handler
        logger.info(f"Starting command '{args.command}' (seed={args.seed})")
        code = handler(args)
        logger.info(f"Finished command '{args.command}' with exit code {code}")
        return code

    return handle_errors(run)


if __name__ == "__main__":
    sys.exit(main())
