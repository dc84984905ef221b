"""
Reconstruction Module.

This module converts pixel-space landmarks with registered depth into 3D world
coordinates using the pinhole camera model. Colour and depth streams are
assumed to be registered and rectified upstream, so no lens distortion model
is applied.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import Field

from models.base_model import BaseModel
from models.landmark_model import CameraIntrinsics, WorldPoint
from models.trajectory_model import Dimensionality, Trajectory
from utils.config import DEFAULT_MAX_GAP, DEFAULT_MAX_INVALID_FRACTION, MOUTH_LANDMARKS
from utils.exceptions import DimensionalityMismatchError, InvalidDepthError, ReconstructionError

logger = logging.getLogger(__name__)


class GapPolicy(BaseModel):
    """
    How landmarks without a depth reading are treated.

    Runs of at most `max_gap` missing frames bounded by valid readings are
    filled by linear interpolation of the world coordinates; anything else
    invalidates the affected frames.
    """

    max_gap: int = Field(DEFAULT_MAX_GAP, ge=0)
    max_invalid_fraction: float = Field(DEFAULT_MAX_INVALID_FRACTION, ge=0, le=1)


def back_project(u: float, v: float, z: float, k: CameraIntrinsics) -> WorldPoint:
    """
    Map a pixel and its depth to camera-centred world coordinates.

    Args:
        u: Column in pixels
        v: Row in pixels
        z: Depth in metres
        k: Camera intrinsics

    Returns:
        The world point (x_w, y_w, z_w)

    Raises:
        InvalidDepthError: If z is not a positive finite number
    """
    if not np.isfinite(z) or z <= 0:
        raise InvalidDepthError(f"Depth must be positive, got {z}")
    return WorldPoint(
        x_w=(u - k.cx) * z / k.fx,
        y_w=(v - k.cy) * z / k.fy,
        z_w=float(z),
    )


def project(p: WorldPoint, k: CameraIntrinsics) -> Tuple[float, float]:
    """
    Project a world point back onto the image plane.

    Raises:
        InvalidDepthError: If the point is not in front of the camera
    """
    if p.z_w <= 0:
        raise InvalidDepthError(f"Point must lie in front of the camera, got z_w={p.z_w}")
    return (k.fx * p.x_w / p.z_w + k.cx, k.fy * p.y_w / p.z_w + k.cy)


def back_project_array(pixels: np.ndarray, depth: np.ndarray, k: CameraIntrinsics) -> np.ndarray:
    """
    Vectorised back-projection.

    Args:
        pixels: (..., 2) array of (u, v)
        depth: (...) array of z; entries that are not positive yield NaN
        k: Camera intrinsics

    Returns:
        (..., 3) array of world coordinates
    """
    pixels = np.asarray(pixels, dtype=float)
    z = np.asarray(depth, dtype=float)
    z = np.where(np.isfinite(z) & (z > 0), z, np.nan)
    world = np.empty(pixels.shape[:-1] + (3,))
    world[..., 0] = (pixels[..., 0] - k.cx) * z / k.fx
    world[..., 1] = (pixels[..., 1] - k.cy) * z / k.fy
    world[..., 2] = z
    return world


def _missing_runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """Half-open [start, stop) index ranges where mask is True."""
    padded = np.concatenate(([False], mask, [False])).astype(int)
    edges = np.flatnonzero(np.diff(padded))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def reconstruct_trajectory(
    t2d: Trajectory,
    k: CameraIntrinsics,
    policy: GapPolicy = GapPolicy(),
    required: Optional[Sequence[int]] = None,
) -> Trajectory:
    """
    Build a D3 trajectory from a D2 trajectory that carries per-landmark depth.

    Args:
        t2d: 2D trajectory with a depth array on every frame
        k: Intrinsics of the colour stream
        policy: Gap handling policy
        required: Landmarks a frame needs to count as reconstructed; defaults
            to the four mouth landmarks. Other landmarks without depth are
            flagged invalid individually.

    Returns:
        The D3 trajectory; timestamps are preserved and frames that could not
        be reconstructed are kept but flagged invalid

    Raises:
        MissingDepthError: If any frame lacks depth
        ReconstructionError: If more than `policy.max_invalid_fraction` of the
            frames could not be reconstructed
    """
    if t2d.dimensionality is not Dimensionality.D2:
        raise DimensionalityMismatchError(
            f"Reconstruction needs a 2D trajectory, got {t2d.dimensionality.value}"
        )
    logger.info(f"Reconstructing {t2d.subject_id}/{t2d.task.value} ({len(t2d)} frames)")

    depth = t2d.depth_array()
    pixels = t2d.points_array()
    times = t2d.timestamps()
    n_frames, n_landmarks = depth.shape

    if n_frames == 0:
        raise ReconstructionError("Cannot reconstruct an empty trajectory", {"frames": 0})

    usable = t2d.validity_array() & np.isfinite(depth) & (depth > 0)
    world = back_project_array(pixels, np.where(usable, depth, np.nan), k)
    resolved = usable.copy()
    filled = 0

    for j in range(n_landmarks):
        column = usable[:, j]
        if column.all() or not column.any():
            continue
        for start, stop in _missing_runs(~column):
            if start == 0 or stop == n_frames or stop - start > policy.max_gap:
                continue
            t0, t1 = times[start - 1], times[stop]
            weight = (times[start:stop] - t0) / (t1 - t0)
            before, after = world[start - 1, j], world[stop, j]
            world[start:stop, j] = before + weight[:, None] * (after - before)
            resolved[start:stop, j] = True
            filled += stop - start

    if required is None:
        required = tuple(MOUTH_LANDMARKS.values())
    frame_ok = resolved[:, list(required)].all(axis=1)
    invalid = int(n_frames - frame_ok.sum())
    statistics = {
        "frames": int(n_frames),
        "invalid_frames": invalid,
        "invalid_fraction": invalid / n_frames,
        "missing_readings": int((~usable).sum()),
        "interpolated_readings": int(filled),
    }
    logger.debug(f"Reconstruction statistics for {t2d.subject_id}/{t2d.task.value}: {statistics}")

    if statistics["invalid_fraction"] > policy.max_invalid_fraction:
        msg = (
            f"Reconstruction failed for {t2d.subject_id}/{t2d.task.value}: "
            f"{invalid}/{n_frames} frames invalid "
            f"(limit {policy.max_invalid_fraction:.0%})"
        )
        logger.error(msg)
        raise ReconstructionError(msg, statistics)

    valid = resolved & frame_ok[:, None]
    world[~valid] = np.nan

    return Trajectory.from_arrays(
        subject_id=t2d.subject_id,
        group=t2d.group,
        task=t2d.task,
        dimensionality=Dimensionality.D3,
        timestamps=times,
        points=world,
        nominal_fps=t2d.nominal_fps,
        valid=valid,
        repetition=t2d.repetition,
    )
