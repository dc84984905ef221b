"""
Shared builders for the test suite.
"""
import os
import sys
from typing import Optional, Sequence

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.trajectory_model import Dimensionality, Group, Task, Trajectory

FPS = 30.0
INTRINSICS = dict(fx=600.0, fy=600.0, cx=320.0, cy=240.0, width=640, height=480)


def mouth_points(tb: float, wm: float, center=(320.0, 300.0), base: Optional[np.ndarray] = None) -> np.ndarray:
    """A (68, 2) frame with a symmetric diamond mouth; the other landmarks are spread around the face."""
    if base is None:
        angles = np.linspace(0.0, 2.0 * np.pi, 68, endpoint=False)
        base = np.column_stack((320.0 + 100.0 * np.cos(angles), 240.0 + 100.0 * np.sin(angles)))
    points = np.array(base, dtype=float)
    cx, cy = center
    points[51] = (cx, cy - tb / 2.0)
    points[57] = (cx, cy + tb / 2.0)
    points[48] = (cx - wm / 2.0, cy)
    points[54] = (cx + wm / 2.0, cy)
    return points


def make_trajectory(
    points: np.ndarray,
    timestamps: Optional[Sequence[float]] = None,
    task: Task = Task.BBP,
    depth: Optional[np.ndarray] = None,
    valid: Optional[np.ndarray] = None,
    subject_id: str = "S01",
    group: Group = Group.HC,
    fps: float = FPS,
) -> Trajectory:
    points = np.asarray(points, dtype=float)
    if timestamps is None:
        timestamps = np.arange(points.shape[0]) / fps
    dimensionality = Dimensionality.D2 if points.shape[-1] == 2 else Dimensionality.D3
    return Trajectory.from_arrays(
        subject_id=subject_id,
        group=group,
        task=task,
        dimensionality=dimensionality,
        timestamps=np.asarray(timestamps, dtype=float),
        points=points,
        nominal_fps=fps,
        depth=depth,
        valid=valid,
    )


def mouth_trajectory(tb: Sequence[float], wm: Sequence[float], task: Task = Task.BBP, **kwargs) -> Trajectory:
    """2D trajectory whose TB and WM follow the given per-frame values."""
    points = np.stack([mouth_points(a, b) for a, b in zip(tb, wm)])
    return make_trajectory(points, task=task, **kwargs)


def assert_trajectories_equal(test, expected: Trajectory, actual: Trajectory) -> None:
    """Field-by-field comparison; numpy arrays are compared exactly."""
    test.assertEqual(expected.subject_id, actual.subject_id)
    test.assertEqual(expected.task, actual.task)
    test.assertEqual(expected.dimensionality, actual.dimensionality)
    test.assertEqual(len(expected), len(actual))
    for a, b in zip(expected.frames, actual.frames):
        test.assertEqual(a.timestamp, b.timestamp)
        np.testing.assert_array_equal(a.points, b.points)
        for name in ("depth", "valid"):
            left, right = getattr(a, name), getattr(b, name)
            test.assertEqual(left is None, right is None)
            if left is not None:
                np.testing.assert_array_equal(left, right)
