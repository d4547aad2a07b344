"""Command-line front end for charvar."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from collections.abc import Sequence
from functools import cache
from pathlib import Path
from typing import Any

import colorlog
import numpy as np

from . import __version__
from .config import load_config, load_json, read_text, resolve_settings
from .const import (
    CONF_COUNT,
    CONF_DEFAULT,
    CONF_FORMAT,
    CONF_LOGGER,
    CONF_LOGS,
    CONF_SEED,
    CONF_TOLERANCE,
    CONF_WORKERS,
    DOMAIN,
    EXIT_CHECK_FAILED,
    EXIT_HYPOTHESIS_NOT_MET,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    FORMAT_JSON,
    FORMAT_TEXT,
    LIFT_RELATOR_TOL,
    LOGGER,
    ROUND_TRIP_TOL,
    SUITE_COUNTS,
)
from .coordinator import SampleCoordinator
from .data import CheckResult, RunConfig, VerificationReport
from .exceptions import CharvarError, InvalidParameter, ShapeMismatch
from .liegroup import resolve_group, structure_summary
from .matrixrep import (
    MatrixRep,
    check_representation,
    deck_act,
    lift_to_universal_cover,
    obstruction_class,
)
from .presentation import (
    GroupClass,
    Presentation,
    abelianization_matrix,
    detect_classes,
    format_word,
    is_exponent_canceling,
    parse_group_spec,
    parse_presentation,
)
from .render import render
from .theorems import analyze
from .zmodule import cokernel

MODES = ("check", "lift", "obstruction", "deck", "sample")

TRANSLATIONS_FILE = Path(__file__).parent / "translations" / "en.json"


@cache
def translations() -> dict[str, Any]:
    """Return the bundled English message table."""
    return json.loads(TRANSLATIONS_FILE.read_text(encoding="utf-8"))


def error_message(error: CharvarError) -> str:
    """Return the user-facing message for an error."""
    messages = translations()["error"]
    template = messages.get(error.translation_key, messages["unknown"])
    return template.format_map(error.translation_placeholders)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="YAML run configuration")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--tol", type=float, dest=CONF_TOLERANCE, help="numerical tolerance")
    parser.add_argument("--count", type=int, help="samples per suite")
    parser.add_argument("--workers", type=int, help="worker threads for suites")
    parser.add_argument("--format", choices=(FORMAT_JSON, FORMAT_TEXT))
    parser.add_argument("--output", type=Path, help="write the result to a file")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")


def _add_group(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--group", help="group spec, e.g. 'surface 2' or 'raag x-y,y-z'")
    source.add_argument("--presentation", type=Path, help="presentation file")
    parser.add_argument("--class", dest="group_class", help="class tag, e.g. 'free_abelian 3'")


def build_parser() -> argparse.ArgumentParser:
    """Return the parser for all subcommands."""
    parser = argparse.ArgumentParser(
        prog=DOMAIN, description="Topology of representation spaces and character varieties."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze_parser = commands.add_parser("analyze", help="compute the invariant report")
    _add_group(analyze_parser)
    analyze_parser.add_argument("--target", required=True, help="Lie group name or descriptor file")
    _add_common(analyze_parser)

    verify_parser = commands.add_parser("verify", help="run numerical verifications")
    _add_group(verify_parser)
    verify_parser.add_argument("--mode", choices=MODES, default="check")
    verify_parser.add_argument("--matrices", type=Path, dest="matrices_path")
    verify_parser.add_argument("--deck", help="deck vector, e.g. '1,-2'")
    verify_parser.add_argument(
        "--suite",
        action="append",
        dest="suites",
        choices=tuple(SUITE_COUNTS),
        help="suite to run in sample mode (repeatable; default all)",
    )
    _add_common(verify_parser)

    group_parser = commands.add_parser("group", help="presentation tools")
    group_commands = group_parser.add_subparsers(dest="action", required=True)
    check_parser = group_commands.add_parser("check", help="parse and summarize a presentation")
    check_parser.add_argument("file", type=Path)
    _add_common(check_parser)

    lie_parser = commands.add_parser("lie", help="reductive group tools")
    lie_commands = lie_parser.add_subparsers(dest="action", required=True)
    info_parser = lie_commands.add_parser("info", help="structure of a reductive group")
    info_parser.add_argument("spec", help="group name or descriptor file")
    _add_common(info_parser)
    return parser


def _parse_deck(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.replace(",", " ").split())
    except ValueError as exception:
        raise InvalidParameter(f"Malformed deck vector '{text}'") from exception


def run_config(args: argparse.Namespace) -> RunConfig:
    """Resolve parsed arguments and the config file into a RunConfig."""
    file_config = load_config(args.config)
    cli_values = {
        CONF_TOLERANCE: args.tolerance,
        CONF_SEED: args.seed,
        CONF_COUNT: args.count,
        CONF_WORKERS: args.workers,
        CONF_FORMAT: args.format,
    }
    settings = resolve_settings(cli_values, file_config)
    if settings[CONF_TOLERANCE] <= 0:
        raise InvalidParameter(f"Tolerance must be positive, got {settings[CONF_TOLERANCE]}")
    if settings[CONF_COUNT] is not None and settings[CONF_COUNT] < 1:
        raise InvalidParameter(f"Count must be >= 1, got {settings[CONF_COUNT]}")
    if settings[CONF_WORKERS] < 1:
        raise InvalidParameter(f"Workers must be >= 1, got {settings[CONF_WORKERS]}")
    logger = dict(file_config[CONF_LOGGER])
    if args.verbose:
        logger[CONF_DEFAULT] = "debug"
    return RunConfig(
        command=args.command,
        group=getattr(args, "group", None) or getattr(args, "spec", None),
        target=getattr(args, "target", None),
        presentation_path=getattr(args, "presentation", None) or getattr(args, "file", None),
        group_class=getattr(args, "group_class", None),
        matrices_path=getattr(args, "matrices_path", None),
        mode=getattr(args, "mode", "check"),
        deck=_parse_deck(getattr(args, "deck", None)),
        suites=tuple(getattr(args, "suites", None) or ()),
        seed=settings[CONF_SEED],
        tolerance=settings[CONF_TOLERANCE],
        count=settings[CONF_COUNT],
        workers=settings[CONF_WORKERS],
        format=settings[CONF_FORMAT],
        output=args.output,
        logger=logger,
    )


def setup_logging(logger_config: dict[str, Any]) -> None:
    """Install a colored stderr handler with levels from the logger section."""
    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(
        colorlog.ColoredFormatter("%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s")
    )
    root = logging.getLogger(DOMAIN)
    root.handlers[:] = [handler]
    root.setLevel(logger_config.get(CONF_DEFAULT, "warning").upper())
    for name, level in logger_config.get(CONF_LOGS, {}).items():
        logging.getLogger(name).setLevel(level.upper())


def _load_group(config: RunConfig) -> tuple[Presentation, GroupClass | None]:
    tag = None if config.group_class is None else GroupClass.parse(config.group_class)
    if config.presentation_path is not None:
        text = read_text(config.presentation_path)
        return parse_presentation(text), tag
    if config.group is not None:
        presentation, detected = parse_group_spec(config.group)
        return presentation, tag or detected
    raise InvalidParameter("Give a group with --group or --presentation")


def run_analyze(config: RunConfig) -> tuple[dict[str, Any], int]:
    """Build the invariant report and pick the exit code from its refusals."""
    presentation, tag = _load_group(config)
    report = analyze(presentation, tag, resolve_group(config.target))
    code = EXIT_HYPOTHESIS_NOT_MET if report.hypothesis_not_met else EXIT_OK
    return report.as_dict(), code


def _load_rep(config: RunConfig, presentation: Presentation) -> MatrixRep:
    if config.matrices_path is None:
        raise InvalidParameter(f"Mode '{config.mode}' needs --matrices")
    data = load_json(config.matrices_path)
    if isinstance(data, dict):
        data.setdefault(CONF_TOLERANCE, config.tolerance)
    rep = MatrixRep.from_dict(data, str(config.matrices_path))
    if rep.generators != presentation.generator_names:
        raise ShapeMismatch(
            f"Matrices are for generators {list(rep.generators)}, "
            f"the presentation has {list(presentation.generator_names)}"
        )
    return rep


def _obstruction_genus(tag: GroupClass) -> int:
    if tag.kind == GroupClass.SURFACE:
        return tag.param
    if tag == GroupClass(GroupClass.FREE_ABELIAN, 2):
        return 1
    raise InvalidParameter(f"Obstruction classes need a surface group, got '{tag}'")


def _verify_lift(
    rep: MatrixRep, presentation: Presentation, report: VerificationReport
) -> None:
    lifted = lift_to_universal_cover(rep, presentation)
    real, su = lifted.relator_residuals(presentation)
    relator = float(max(real.max(initial=0.0), su.max(initial=0.0)))
    round_trip = float(np.abs(lifted.project().matrices - rep.matrices).max(initial=0.0))
    report.checks.append(CheckResult("lift_relators", relator <= LIFT_RELATOR_TOL, relator))
    report.checks.append(CheckResult("round_trip", round_trip <= ROUND_TRIP_TOL, round_trip))
    report.data["lift"] = lifted.as_dict()


def _verify_deck(
    config: RunConfig, rep: MatrixRep, presentation: Presentation, report: VerificationReport
) -> None:
    if config.deck is None:
        raise InvalidParameter("Mode 'deck' needs --deck")
    lifted = lift_to_universal_cover(rep, presentation)
    moved = deck_act(config.deck, lifted, presentation)
    drift = float(np.abs(moved.project_numerically() - rep.matrices).max(initial=0.0))
    report.checks.append(
        CheckResult(
            "projection",
            np.array_equal(moved.project().matrices, lifted.project().matrices)
            and drift <= ROUND_TRIP_TOL,
            drift,
        )
    )
    moved_off = not any(config.deck) or not np.allclose(moved.real_parts, lifted.real_parts)
    report.checks.append(
        CheckResult("freeness", moved_off, detail="real parts move for a nonzero deck vector")
    )
    report.data["deck"] = list(config.deck)
    report.data["lift"] = moved.as_dict()


def run_verify(config: RunConfig) -> tuple[dict[str, Any], int]:
    """Run one verification mode and return the report with its exit code."""
    if config.mode == "sample":
        coordinator = SampleCoordinator(config.tolerance, config.seed, config.workers)
        report = VerificationReport(config.mode, None)
        report.suites = coordinator.run(config.suites or tuple(SUITE_COUNTS), config.count)
        report.data["seed"] = config.seed
    else:
        presentation, tag = _load_group(config)
        rep = _load_rep(config, presentation)
        report = VerificationReport(config.mode, str(rep.target))
        check = check_representation(rep, presentation)
        report.checks.append(CheckResult("relators", check.passed, check.max_residual))
        if config.mode == "lift":
            _verify_lift(rep, presentation, report)
        elif config.mode == "deck":
            _verify_deck(config, rep, presentation, report)
        elif config.mode == "obstruction":
            tag = tag or next(iter(sorted(detect_classes(presentation), key=str)), None)
            if tag is None:
                raise InvalidParameter("Obstruction classes need a surface group")
            genus = _obstruction_genus(tag)
            report.data["class"] = obstruction_class(rep, genus)
            report.data["modulus"] = rep.n
    LOGGER.info("verify %s: passed=%s", config.mode, report.passed)
    return report.as_dict(), EXIT_OK if report.passed else EXIT_CHECK_FAILED


def run_group_check(config: RunConfig) -> tuple[dict[str, Any], int]:
    """Summarize a presentation file."""
    presentation = parse_presentation(read_text(config.presentation_path))
    canceling, rank = is_exponent_canceling(presentation)
    names = presentation.generator_names
    data = {
        "generators": list(names),
        "relators": [format_word(word, names) for word in presentation.relators],
        "abelianization": cokernel(abelianization_matrix(presentation)).as_dict(),
        "exponent_canceling": canceling,
        "abelian_rank": rank,
        "classes": sorted(map(str, detect_classes(presentation))),
    }
    return data, EXIT_OK


def run_lie_info(config: RunConfig) -> tuple[dict[str, Any], int]:
    """Describe the structure of a reductive group."""
    return structure_summary(resolve_group(config.group)), EXIT_OK


def write_output(text: str, path: Path | None) -> None:
    """Write to stdout, or atomically to path through a temporary file."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = path.resolve().parent
    with tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=directory, prefix=f".{path.name}.", delete=False
    ) as handle:
        handle.write(text)
    try:
        os.replace(handle.name, path)
    except OSError:
        os.unlink(handle.name)
        raise


COMMANDS = {
    "analyze": run_analyze,
    "verify": run_verify,
    "group": run_group_check,
    "lie": run_lie_info,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exception:
        # argparse exits with 2 on usage errors, which is reserved here
        return EXIT_OK if exception.code in (0, None) else EXIT_INPUT_ERROR
    try:
        config = run_config(args)
        setup_logging(config.logger)
        data, code = COMMANDS[config.command](config)
        write_output(render(config.command, data, config.format), config.output)
    except CharvarError as exception:
        LOGGER.debug("Command failed", exc_info=True)
        sys.stderr.write(f"{DOMAIN}: {error_message(exception)}\n")
        return EXIT_INPUT_ERROR
    except OSError as exception:
        sys.stderr.write(f"{DOMAIN}: cannot write output: {exception}\n")
        return EXIT_INPUT_ERROR
    messages = translations()["exit"]
    if config.output is not None:
        LOGGER.info("Wrote %s", config.output)
    if code == EXIT_HYPOTHESIS_NOT_MET:
        sys.stderr.write(f"{DOMAIN}: {messages['hypothesis_not_met']}\n")
    elif code == EXIT_CHECK_FAILED:
        sys.stderr.write(f"{DOMAIN}: {messages['check_failed']}\n")
    return code
