"""
Annotation Model Module.

This module defines manual repetition annotations and their ordering rules.
"""
import logging
from typing import Dict, Iterable, List

from pydantic import Field, model_validator

from utils.exceptions import DataValidationError
from .base_model import BaseModel
from .trajectory_model import Task

logger = logging.getLogger(__name__)


class RepetitionAnnotation(BaseModel):
    """Start and end time of one manually identified task repetition."""

    task: Task
    repetition_index: int = Field(..., ge=1)
    start: float
    end: float

    @model_validator(mode='after')
    def validate_interval(self):
        if not self.start < self.end:
            msg = (
                f"repetition {self.repetition_index}: start {self.start:g} "
                f"must be before end {self.end:g}"
            )
            logger.error(f"Annotation validation failed: {msg}")
            raise ValueError(msg)
        return self


def validate_annotations(annotations: Iterable[RepetitionAnnotation]) -> List[RepetitionAnnotation]:
    """
    Order annotations and check that repetitions of one task never overlap.

    Windows are closed intervals, so two repetitions sharing a boundary
    instant count as overlapping.

    Args:
        annotations: Annotations in any order

    Returns:
        Annotations sorted by task order of first appearance, then start time

    Raises:
        DataValidationError: On overlap, duplicate indices or index order that
            disagrees with time order
    """
    by_task: Dict[Task, List[RepetitionAnnotation]] = {}
    for annotation in annotations:
        by_task.setdefault(annotation.task, []).append(annotation)

    ordered: List[RepetitionAnnotation] = []
    for task, items in by_task.items():
        items = sorted(items, key=lambda a: (a.start, a.repetition_index))
        for previous, current in zip(items, items[1:]):
            if current.repetition_index == previous.repetition_index:
                msg = f"{task.value}: duplicate repetition index {current.repetition_index}"
                logger.error(msg)
                raise DataValidationError(msg)
            if current.start <= previous.end:
                msg = (
                    f"{task.value}: repetitions {previous.repetition_index} "
                    f"[{previous.start:g}, {previous.end:g}] and {current.repetition_index} "
                    f"[{current.start:g}, {current.end:g}] overlap"
                )
                logger.error(msg)
                raise DataValidationError(msg)
            if current.repetition_index < previous.repetition_index:
                msg = (
                    f"{task.value}: repetition {current.repetition_index} starts after "
                    f"repetition {previous.repetition_index}"
                )
                logger.error(msg)
                raise DataValidationError(msg)
        ordered.extend(items)
    return ordered
