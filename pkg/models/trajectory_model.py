"""
Trajectory Model Module.

This module defines recording-level metadata enums, the Trajectory type and
the invariant checker used by every parser and pipeline stage.
"""
import logging
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utils.config import LANDMARK_COUNT, MAX_FPS, MIN_FPS
from utils.exceptions import DataValidationError, MissingDepthError
from .base_model import BaseModel
from .landmark_model import LandmarkFrame

logger = logging.getLogger(__name__)


class Group(str, Enum):
    HC = "HC"
    PD = "PD"


class Task(str, Enum):
    BBP = "BBP"
    PA = "PA"
    BIGSMILE = "BIGSMILE"
    REST = "REST"


class Dimensionality(str, Enum):
    D2 = "2D"
    D3 = "3D"

    @property
    def width(self) -> int:
        """Coordinates per landmark."""
        return 2 if self is Dimensionality.D2 else 3


class Trajectory(BaseModel):
    """
    An ordered sequence of landmark frames plus recording metadata.

    For D3 trajectories every frame carries world coordinates in metres
    instead of pixels.
    """

    subject_id: str
    group: Group
    task: Task
    dimensionality: Dimensionality
    frames: Tuple[LandmarkFrame, ...]
    nominal_fps: float
    repetition: Optional[int] = None
    resolution: Optional[Tuple[int, int]] = None

    @classmethod
    def from_arrays(
        cls,
        subject_id: str,
        group: Group,
        task: Task,
        dimensionality: Dimensionality,
        timestamps: np.ndarray,
        points: np.ndarray,
        nominal_fps: float,
        depth: Optional[np.ndarray] = None,
        valid: Optional[np.ndarray] = None,
        repetition: Optional[int] = None,
        resolution: Optional[Tuple[int, int]] = None,
    ) -> "Trajectory":
        """
        Build a trajectory from stacked arrays.

        Args:
            timestamps: (N,) seconds
            points: (N, 68, 2) pixels or (N, 68, 3) world metres
            depth: Optional (N, 68) metres
            valid: Optional (N, 68) flags

        Returns:
            The assembled Trajectory
        """
        frames = tuple(
            LandmarkFrame.build(
                timestamps[i],
                points[i],
                None if depth is None else depth[i],
                None if valid is None else valid[i],
            )
            for i in range(len(timestamps))
        )
        return cls(
            subject_id=subject_id,
            group=group,
            task=task,
            dimensionality=dimensionality,
            frames=frames,
            nominal_fps=float(nominal_fps),
            repetition=repetition,
            resolution=resolution,
        )

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def duration(self) -> float:
        """Time between first and last frame in seconds."""
        if not self.frames:
            return 0.0
        return self.frames[-1].timestamp - self.frames[0].timestamp

    @property
    def has_depth(self) -> bool:
        return bool(self.frames) and all(frame.depth is not None for frame in self.frames)

    def timestamps(self) -> np.ndarray:
        return np.array([frame.timestamp for frame in self.frames], dtype=float)

    def points_array(self) -> np.ndarray:
        """Stack all frame coordinates into an (N, 68, d) array."""
        if not self.frames:
            return np.empty((0, LANDMARK_COUNT, self.dimensionality.width))
        try:
            return np.stack([frame.points for frame in self.frames])
        except ValueError as e:
            raise DataValidationError(f"Frames of {self.subject_id}/{self.task.value} have ragged shapes: {e}")

    def validity_array(self) -> np.ndarray:
        """(N, 68) mask of usable landmarks."""
        if not self.frames:
            return np.empty((0, LANDMARK_COUNT), dtype=bool)
        return np.stack([frame.validity_mask() for frame in self.frames])

    def depth_array(self) -> np.ndarray:
        """(N, 68) depth readings; raises when any frame lacks depth."""
        if not self.has_depth:
            raise MissingDepthError(
                f"3D requested but no depth in recording {self.subject_id}/{self.task.value}"
            )
        return np.stack([frame.depth for frame in self.frames])

    def with_frames(self, frames: Sequence[LandmarkFrame], **updates) -> "Trajectory":
        """Copy of this trajectory with a different frame sequence."""
        return self.model_copy(update={"frames": tuple(frames), **updates})


def validate_trajectory(t: Trajectory) -> List[str]:
    """
    Check every Trajectory invariant.

    Args:
        t: The trajectory to check

    Returns:
        Human-readable violations tagged with the frame index; empty when valid
    """
    violations: List[str] = []
    expected_width = t.dimensionality.width

    if not (MIN_FPS <= t.nominal_fps <= MAX_FPS):
        violations.append(f"nominal_fps {t.nominal_fps:g} outside [{MIN_FPS:g}, {MAX_FPS:g}]")

    previous = None
    for index, frame in enumerate(t.frames):
        if not np.isfinite(frame.timestamp):
            violations.append(f"non-finite timestamp @{index}")
        elif frame.timestamp < 0:
            violations.append(f"negative timestamp @{index}")
        if previous is not None and not frame.timestamp > previous:
            violations.append(f"non-monotonic timestamp @{index}")
        previous = frame.timestamp

        if frame.n_points != LANDMARK_COUNT:
            violations.append(f"landmark count {frame.n_points} ≠ {LANDMARK_COUNT} @{index}")
        if frame.width != expected_width:
            violations.append(
                f"coordinate width {frame.width} does not match {t.dimensionality.value} @{index}"
            )
        if frame.depth is not None:
            if frame.depth.shape[0] != LANDMARK_COUNT:
                violations.append(f"depth count {frame.depth.shape[0]} ≠ {LANDMARK_COUNT} @{index}")
            if np.any(~np.isfinite(frame.depth)) or np.any(frame.depth < 0):
                violations.append(f"invalid depth value @{index}")
        if frame.valid is not None and frame.valid.shape[0] != frame.n_points:
            violations.append(f"validity count {frame.valid.shape[0]} ≠ {frame.n_points} @{index}")

        if t.resolution is not None and t.dimensionality is Dimensionality.D2 and frame.width == 2:
            width, height = t.resolution
            mask = frame.validity_mask()
            u = frame.points[mask, 0]
            v = frame.points[mask, 1]
            if np.any((u < 0) | (u >= width) | (v < 0) | (v >= height)):
                violations.append(f"landmark outside {width}x{height} image @{index}")

    if violations:
        logger.debug(f"Trajectory {t.subject_id}/{t.task.value} has {len(violations)} violations")
    return violations
