"""
CLI Commands Module.

This module defines the `extract`, `analyze`, `synth`, `smd` and `reproduce`
commands. Exit codes: 0 success, 1 usage error, 2 data or validation error,
3 I/O error.
"""
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
from pydantic import ValidationError

from models.archetype_model import SynthParams
from models.feature_model import MouthLandmarks
from models.trajectory_model import Dimensionality
from processing.published_table import reproduce_published_table
from processing.reconstruction import GapPolicy
from processing.statistics import (
    FILTER_MODES,
    classify_smd,
    cohort_analysis,
    dimensionality_agreement,
    filter_smd_rows,
    smd_from_summary,
)
from processing.synth import gen_cohort
from utils.config import (
    AVAILABLE_AGGREGATIONS,
    DEFAULT_AGGREGATION,
    DEFAULT_JOBS,
    DEFAULT_MAX_GAP,
    DEFAULT_MAX_INVALID_FRACTION,
    DEFAULT_SECOND_DERIVATIVE,
    PUBLISHED_TOLERANCE,
    REST_WINDOW_SECONDS,
    SECOND_DERIVATIVE_METHODS,
)
from utils.exceptions import EXIT_DATA, EXIT_OK, EXIT_USAGE, DataValidationError, OrofacialError, UsageError
from utils.observer import ProgressLogObserver
from utils.pipeline_engine import ExtractionEngine, ExtractionSettings
from utils.record_io import parse_manifest, read_source_text
from utils.report_io import FORMATS, parse_feature_table, write_feature_table, write_smd_report, write_table
from .components import show_error, show_failure_summary, show_info, show_result

logger = logging.getLogger(__name__)

DIMENSION_CHOICES = {
    "2d": (Dimensionality.D2,),
    "3d": (Dimensionality.D3,),
    "both": (Dimensionality.D3, Dimensionality.D2),
}


class OrofacialGroup(click.Group):
    """
    Command group that maps every failure onto the toolkit's exit codes.

    Click usage errors exit 1; toolkit errors exit with their own code.
    """

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            result = super().main(
                args=args, prog_name=prog_name, complete_var=complete_var, standalone_mode=False, **extra
            )
        except click.ClickException as e:
            e.show()
            code = EXIT_USAGE
        except click.exceptions.Abort:
            show_error("aborted")
            code = EXIT_USAGE
        except OrofacialError as e:
            show_error(str(e))
            code = e.exit_code
        else:
            code = result if isinstance(result, int) else EXIT_OK

        if standalone_mode:
            sys.exit(code)
        return code


def _sink(out: str):
    return sys.stdout if out == "-" else Path(out)


def _parse_landmarks(ctx, param, value: str) -> MouthLandmarks:
    try:
        top, bottom, left, right = (int(part) for part in value.split(","))
        return MouthLandmarks(top=top, bottom=bottom, left=left, right=right)
    except (ValueError, ValidationError) as e:
        raise click.BadParameter(f"expected four distinct indices top,bottom,left,right ({e})")


@click.group(cls=OrofacialGroup)
@click.option("--verbose", "-v", is_flag=True, help="Log debug messages to stderr.")
def cli(verbose: bool) -> None:
    """Orofacial kinematic features from 2D and 3D facial landmarks."""
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)


@cli.command("extract")
@click.argument("manifest", type=click.Path(dir_okay=False))
@click.option("--dim", type=click.Choice(list(DIMENSION_CHOICES)), default="2d", show_default=True)
@click.option("--smooth/--no-smooth", default=False, help="3-sample moving average before differentiation.")
@click.option("--gap-max", type=click.IntRange(min=0), default=DEFAULT_MAX_GAP, show_default=True,
              help="Longest run of missing depth frames filled by interpolation.")
@click.option("--max-invalid-fraction", type=click.FloatRange(0.0, 1.0), default=DEFAULT_MAX_INVALID_FRACTION,
              show_default=True)
@click.option("--accel-method", type=click.Choice(SECOND_DERIVATIVE_METHODS), default=DEFAULT_SECOND_DERIVATIVE,
              show_default=True)
@click.option("--landmarks", default="51,57,48,54", callback=_parse_landmarks, show_default=True,
              help="Mouth landmark indices top,bottom,left,right.")
@click.option("--rest-window", type=click.FloatRange(min=0.0, min_open=True), default=REST_WINDOW_SECONDS,
              show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=DEFAULT_JOBS, show_default=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="delimited", show_default=True)
@click.option("--out", default="-", show_default=True, help="Output file; '-' for stdout.")
def extract(manifest, dim, smooth, gap_max, max_invalid_fraction, accel_method, landmarks,
            rest_window, jobs, fmt, out) -> int:
    """Extract per-repetition features for every recording in MANIFEST."""
    settings = ExtractionSettings(
        dimensionalities=DIMENSION_CHOICES[dim],
        smooth=smooth,
        accel_method=accel_method,
        gap_policy=GapPolicy(max_gap=gap_max, max_invalid_fraction=max_invalid_fraction),
        landmarks=landmarks,
        rest_duration=rest_window,
    )
    cohort = parse_manifest(manifest)
    engine = ExtractionEngine(settings, jobs=jobs)
    engine.attach(ProgressLogObserver())
    result = engine.run(cohort)

    write_feature_table(result.rows, _sink(out), fmt)
    show_failure_summary(result.failures)
    return result.exit_code


@cli.command("analyze")
@click.argument("features", type=click.Path(dir_okay=False))
@click.argument("manifest", type=click.Path(dir_okay=False))
@click.option("--aggregation", type=click.Choice(list(AVAILABLE_AGGREGATIONS)), default=DEFAULT_AGGREGATION,
              show_default=True)
@click.option("--filter", "filter_mode", type=click.Choice(FILTER_MODES), default="all", show_default=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="delimited", show_default=True)
@click.option("--out", default="-", show_default=True, help="Output file; '-' for stdout.")
def analyze(features, manifest, aggregation, filter_mode, fmt, out) -> int:
    """Compare HC and PD for every feature in the FEATURES table."""
    rows = parse_feature_table(features)
    cohort = parse_manifest(manifest)
    report = cohort_analysis(rows, cohort, aggregation)

    for agreement in dimensionality_agreement(report):
        if not agreement.consistent:
            logger.info(
                f"{agreement.task.value} {agreement.feature}: {agreement.magnitude_3d.value} in 3D, "
                f"{agreement.magnitude_2d.value if agreement.magnitude_2d else 'absent'} in 2D"
            )

    write_smd_report(filter_smd_rows(report, filter_mode), _sink(out), fmt)
    return EXIT_OK


@cli.command("synth")
@click.option("--params", "params_file", type=click.Path(dir_okay=False), default=None,
              help="JSON file overriding the default cohort parameters.")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
def synth(params_file: Optional[str], seed: int, out_dir: str) -> int:
    """Generate a synthetic HC/PD cohort and print its manifest path."""
    params = SynthParams()
    if params_file is not None:
        try:
            params = SynthParams.model_validate_json(read_source_text(params_file))
        except ValidationError as e:
            raise DataValidationError(f"Invalid synthesis parameters in {params_file}: {e}")
    path = gen_cohort(params, seed, out_dir)
    show_result(str(path))
    return EXIT_OK


SUMMARY_FIELDS = ("mu1", "sd1", "n1", "mu2", "sd2", "n2")


def _summaries(values: Tuple[str, ...], flags: Dict[str, Any]) -> Dict[str, Any]:
    given = {name: value for name, value in flags.items() if value is not None}
    if values and given:
        raise UsageError("give the group summaries either positionally or as options, not both")
    if not values:
        missing = [f"--{name}" for name in SUMMARY_FIELDS if name not in given]
        if missing:
            raise UsageError(f"missing {', '.join(missing)}")
        return given
    if len(values) != len(SUMMARY_FIELDS):
        raise UsageError(f"expected 6 values MU1 SD1 N1 MU2 SD2 N2, got {len(values)}")
    try:
        return {
            name: int(value) if name.startswith("n") else float(value)
            for name, value in zip(SUMMARY_FIELDS, values)
        }
    except ValueError as e:
        raise UsageError(f"invalid group summary: {e}")


@cli.command("smd", context_settings={"ignore_unknown_options": True})
@click.option("--mu1", type=float, help="Mean of the first group (HC).")
@click.option("--sd1", type=float, help="SD of the first group.")
@click.option("--n1", type=int, help="Size of the first group.")
@click.option("--mu2", type=float, help="Mean of the second group (PD).")
@click.option("--sd2", type=float, help="SD of the second group.")
@click.option("--n2", type=int, help="Size of the second group.")
@click.argument("values", nargs=-1)
def smd(values, **flags) -> int:
    """
    Standardized mean difference from two group summaries.

    Pass --mu1 --sd1 --n1 --mu2 --sd2 --n2, or the six values in that order.
    """
    summaries = _summaries(values, flags)
    value = smd_from_summary(*(summaries[name] for name in SUMMARY_FIELDS))
    show_result(f"SMD={value:.2f} class={classify_smd(value).value}")
    return EXIT_OK


@cli.command("reproduce")
@click.option("--tolerance", type=click.FloatRange(min=0.0), default=PUBLISHED_TOLERANCE, show_default=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="delimited", show_default=True)
@click.option("--out", default="-", show_default=True, help="Output file; '-' for stdout.")
def reproduce(tolerance, fmt, out) -> int:
    """Recompute the published SMDs from their printed means and SDs."""
    table = reproduce_published_table(tolerance)
    write_table(table, _sink(out), fmt)
    failed = table.loc[~table["reproduced"]]
    for _, row in failed.iterrows():
        show_info(f"not reproduced: {row['task']} {row['feature']} {row['dimensionality']}")
    return EXIT_OK if failed.empty else EXIT_DATA
