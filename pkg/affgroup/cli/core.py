"""Command-line front end of AffGroup."""
import argparse
import json
import logging
import pathlib
import sys
import typing

import numpy as np

from .. import __version__
from ..client import AffGroup
from ..models.config import RunConfig
from ..modules.align import element_from_params
from ..modules.synth import blobs
from .dependencies import EXIT_CRITERION, EXIT_OK, EXIT_SHAPE, EXIT_USAGE, exit_code, load_config, parse_value


__all__ = ["build_parser", "main"]


logger = logging.getLogger(__name__)

Command = typing.Callable[[AffGroup, argparse.Namespace], int]

# Flag destinations that are RunConfig keys; every other flag belongs to the command line only.
_CONFIG_FLAGS = {
    "input": "input",
    "input_b": "input_b",
    "output": "output",
    "output_b": "output_b",
    "truth": "truth",
    "params": "params",
    "study": "study",
    "kernel": "kernel",
    "threshold": "invariance_threshold",
    "projection_measure": "projection_measure",
    "corpus_size": "corpus_size",
    "seed": "seed",
    "threads": "threads",
}


def _require(config: RunConfig, *keys: str) -> None:
    missing = [key for key in keys if getattr(config, key) is None]
    if missing:
        raise ValueError(f"Missing required setting(s): {', '.join('--' + key.replace('_', '-') for key in missing)}.")


def _emit(payload: typing.Any) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def cmd_gen_pair(client: AffGroup, args: argparse.Namespace) -> int:
    """Write f and ρ(g⁻¹)f and print the ground-truth element."""
    config = client.config
    _require(config, "output", "output_b")
    if config.input:
        f = client.read_grid(config.input)
    else:
        logger.info("No --input given; generating a blob image from seed %d.", config.seed)
        f = blobs((24, 24), np.random.default_rng(config.seed))
    f1, f2, params = client.gen_pair(f, config.params)
    client.write_grid(f1, config.output, binary=args.binary)
    client.write_grid(f2, config.output_b, binary=args.binary)
    truth = {"params": list(params), "g": element_from_params(params).to_json()}
    if config.truth:
        pathlib.Path(config.truth).write_text(json.dumps(truth, indent=2) + "\n")
    _emit(truth)
    return EXIT_OK


def cmd_lift(client: AffGroup, args: argparse.Namespace) -> int:
    _require(client.config, "input", "output")
    F = client.lift(client.read_grid(client.config.input))
    client.write_lifted(F, client.config.output)
    return EXIT_OK


def cmd_gconv(client: AffGroup, args: argparse.Namespace) -> int:
    _require(client.config, "input", "output")
    F = client.gconv(client.read_lifted(client.config.input))
    client.write_lifted(F, client.config.output)
    return EXIT_OK


def cmd_project(client: AffGroup, args: argparse.Namespace) -> int:
    _require(client.config, "input", "output")
    f = client.project(client.read_lifted(client.config.input))
    client.write_grid(f, client.config.output, binary=args.binary)
    return EXIT_OK


def cmd_invariance(client: AffGroup, args: argparse.Namespace) -> int:
    """Print the invariance report; exit 3 when the relative functional gap exceeds the threshold."""
    _require(client.config, "input", "input_b")
    report = client.invariance(client.read_grid(client.config.input), client.read_grid(client.config.input_b))
    _emit(report.to_json())
    if client.passes(report):
        return EXIT_OK
    logger.info("Relative functional gap %.3e exceeds threshold %.3e.", report.relative_gap, client.config.invariance_threshold)
    return EXIT_CRITERION


def cmd_convergence(client: AffGroup, args: argparse.Namespace) -> int:
    _require(client.config, "study")
    result = client.convergence(client.config.study)
    sys.stdout.write(result.to_csv())
    return EXIT_OK if result.decreasing else EXIT_CRITERION


def cmd_calibrate(client: AffGroup, args: argparse.Namespace) -> int:
    """Print the corpus gaps and the threshold to store as `invariance_threshold`."""
    result = client.calibrate()
    _emit(result.model_dump(mode="json"))
    return EXIT_OK if result.separated else EXIT_CRITERION


COMMANDS: typing.Dict[str, typing.Tuple[Command, str]] = {
    "gen-pair": (cmd_gen_pair, "Write an image and its affine warp with the ground-truth element."),
    "lift": (cmd_lift, "Lift a planar image onto G₂."),
    "gconv": (cmd_gconv, "Group-convolve a lifted signal with a bank kernel."),
    "project": (cmd_project, "Project a lifted signal back to the plane."),
    "invariance": (cmd_invariance, "Report the convolution-based invariance criteria of two images."),
    "convergence": (cmd_convergence, "Print a refinement study as CSV."),
    "calibrate": (cmd_calibrate, "Calibrate the invariance threshold on a generated corpus."),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file; flags override it.")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="Set any configuration key, dotted for nested ones (chart.rho_count=8).")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug records to stderr.")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int, help="Worker cap; AFFGROUP_THREADS applies when unset.")
    common.add_argument("--input")
    common.add_argument("--input-b")
    common.add_argument("--output")
    common.add_argument("--output-b")
    common.add_argument("--binary", action="store_true", help="Write PGM outputs as P5.")

    parser = argparse.ArgumentParser(prog="affgroup", description="Affine group convolutions over ℝ² ⋊ GL₂(ℝ).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    subparsers = {name: commands.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}

    subparsers["gen-pair"].add_argument("--params", type=float, nargs=6, metavar=("TX", "TY", "RHO", "THETA", "U", "W"))
    subparsers["gen-pair"].add_argument("--truth", help="Ground-truth JSON path.")
    subparsers["gconv"].add_argument("--kernel", help="Bank kernel name.")
    subparsers["project"].add_argument("--projection-measure", choices=["haar", "lebesgue"])
    subparsers["invariance"].add_argument("--kernel", help="Restrict the bank to one kernel.")
    subparsers["invariance"].add_argument("--threshold", type=float, help="Relative functional-gap threshold.")
    subparsers["convergence"].add_argument("--study", choices=["haar", "theorem4", "delta"])
    subparsers["calibrate"].add_argument("--corpus-size", type=int)
    return parser


def _overrides(args: argparse.Namespace) -> typing.Dict[str, typing.Any]:
    overrides = {}
    for assignment in args.set:
        if "=" not in assignment:
            raise ValueError(f"--set expects KEY=VALUE, got {assignment!r}.")
        key, raw = assignment.split("=", 1)
        overrides[key.strip()] = parse_value(raw)
    for dest, key in _CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = value
    return overrides


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    """Run the command line and return its exit status."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)

    command, _ = COMMANDS[args.command]
    try:
        client = AffGroup(load_config(args.config, _overrides(args)))
        return command(client, args)
    except Exception as error:
        code = exit_code(error, shape_code=EXIT_USAGE if args.command == "invariance" else EXIT_SHAPE)
        logger.error("%s failed: %s", args.command, error)
        logger.debug("Traceback:", exc_info=True)
        return code
