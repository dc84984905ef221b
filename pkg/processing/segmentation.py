"""
Segmentation Module.

This module splits task recordings into single repetitions using manual
annotations and extracts the centred REST window used for normalization.
Window edges are timestamp based and closed: a frame exactly on an edge is
included.
"""
import logging
from typing import List, Sequence

import numpy as np

from models.annotation_model import RepetitionAnnotation, validate_annotations
from models.trajectory_model import Task, Trajectory
from utils.config import MIN_REPETITION_FRAMES, REST_WINDOW_SECONDS, TIME_TOLERANCE
from utils.exceptions import DataValidationError, InsufficientRestError, TooShortRepetitionError

logger = logging.getLogger(__name__)


def _window(times: np.ndarray, start: float, end: float) -> np.ndarray:
    return np.flatnonzero((times >= start - TIME_TOLERANCE) & (times <= end + TIME_TOLERANCE))


def split_repetitions(t: Trajectory, ann: Sequence[RepetitionAnnotation]) -> List[Trajectory]:
    """
    Cut a task recording into one trajectory per annotated repetition.

    Annotations for other tasks are ignored.

    Args:
        t: A BBP, PA or BIGSMILE recording
        ann: Manual repetition annotations

    Returns:
        Sub-trajectories in annotation order, each tagged with its repetition index

    Raises:
        TooShortRepetitionError: If a window holds fewer than three frames
    """
    if t.task is Task.REST:
        raise DataValidationError("REST recordings are not split into repetitions")

    annotations = [a for a in validate_annotations(ann) if a.task is t.task]
    skipped = len(ann) - len(annotations)
    if skipped:
        logger.warning(f"Ignoring {skipped} annotations not belonging to task {t.task.value}")

    times = t.timestamps()
    repetitions = []
    for annotation in annotations:
        indices = _window(times, annotation.start, annotation.end)
        if len(indices) < MIN_REPETITION_FRAMES:
            msg = (
                f"{t.subject_id}/{t.task.value} repetition {annotation.repetition_index} "
                f"[{annotation.start:g}, {annotation.end:g}] holds {len(indices)} frames, "
                f"need at least {MIN_REPETITION_FRAMES}"
            )
            logger.error(msg)
            raise TooShortRepetitionError(msg)
        repetitions.append(
            t.with_frames([t.frames[i] for i in indices], repetition=annotation.repetition_index)
        )

    logger.debug(f"Split {t.subject_id}/{t.task.value} into {len(repetitions)} repetitions")
    return repetitions


def rest_window(t: Trajectory, duration: float = REST_WINDOW_SECONDS) -> Trajectory:
    """
    Extract the centred window of a REST recording.

    Args:
        t: The REST recording
        duration: Window length in seconds

    Returns:
        Frames whose timestamps lie in [mid - duration/2, mid + duration/2],
        where mid is halfway between the first and last frame

    Raises:
        InsufficientRestError: If the recording is shorter than `duration`
    """
    if t.task is not Task.REST:
        raise DataValidationError(f"Expected a REST recording, got {t.task.value}")
    if len(t) == 0 or t.duration < duration - TIME_TOLERANCE:
        msg = (
            f"REST recording of {t.subject_id} lasts {t.duration:.2f} s, "
            f"need at least {duration:g} s"
        )
        logger.error(msg)
        raise InsufficientRestError(msg)

    times = t.timestamps()
    middle = (times[0] + times[-1]) / 2.0
    indices = _window(times, middle - duration / 2.0, middle + duration / 2.0)
    logger.debug(f"REST window of {t.subject_id}: {len(indices)} frames around {middle:.2f} s")
    return t.with_frames([t.frames[i] for i in indices])
