"""
Synthetic Data Module.

This module generates landmark trajectories and whole cohorts whose mouth
motion is sinusoidal, so every kinematic feature has a closed form. The face
is a flat, fronto-parallel 68-point template; the mouth opens vertically and
the commissures move horizontally in phase.
"""
import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import Field

from models.annotation_model import RepetitionAnnotation
from models.archetype_model import GroundTruth, MotionArchetype, SynthParams
from models.base_model import BaseModel
from models.landmark_model import CameraIntrinsics
from models.manifest_model import CohortManifest, ManifestEntry
from models.trajectory_model import Dimensionality, Group, Task, Trajectory
from utils.config import LANDMARK_COUNT, MIN_FEATURE_FRAMES, NOMINAL_FPS, VGA_HEIGHT, VGA_WIDTH
from utils.exceptions import DataValidationError, StorageError
from utils.landmark_io import write_landmark_stream
from utils.record_io import write_annotations, write_intrinsics, write_manifest

logger = logging.getLogger(__name__)

# Mouth size and position relative to the face width
MOUTH_WIDTH_RATIO = 0.30
MOUTH_HEIGHT_RATIO = 0.12
MOUTH_OFFSET_RATIO = 0.20
FACE_WIDTH_PX = 200.0
FACE_WIDTH_SPREAD = 0.1


class FaceGeometry(BaseModel):
    """Placement of the synthetic face in the image and in front of the camera."""

    face_width: float = Field(FACE_WIDTH_PX, gt=0)
    center: Tuple[float, float] = (VGA_WIDTH / 2.0, VGA_HEIGHT / 2.0)
    distance: float = Field(0.40, gt=0)


class SyntheticRecording(BaseModel):
    task: Task
    trajectory: Trajectory
    annotations: Tuple[RepetitionAnnotation, ...] = ()


class SyntheticSubject(BaseModel):
    """All recordings of one synthetic subject."""

    subject_id: str
    group: Group
    archetype: MotionArchetype
    geometry: FaceGeometry
    rest: Trajectory
    recordings: Tuple[SyntheticRecording, ...]


def face_template() -> np.ndarray:
    """
    Static 68-point face in face-width units, centred on the origin, y pointing down.

    Mouth landmarks (48-67) are left at zero; they are animated separately.
    """
    points = np.zeros((LANDMARK_COUNT, 2))
    jaw = np.linspace(0.0, np.pi, 17)
    points[0:17] = np.column_stack((-0.5 * np.cos(jaw), -0.1 + 0.55 * np.sin(jaw)))

    brow_x = np.linspace(-0.40, -0.08, 5)
    brow_y = -0.33 - 0.04 * np.sin(np.linspace(0.0, np.pi, 5))
    points[17:22] = np.column_stack((brow_x, brow_y))
    points[22:27] = np.column_stack((-brow_x[::-1], brow_y[::-1]))

    points[27:31] = np.column_stack((np.zeros(4), np.linspace(-0.25, -0.02, 4)))
    points[31:36] = np.column_stack((np.linspace(-0.10, 0.10, 5), np.full(5, 0.05)))

    theta = np.pi - np.arange(6) * np.pi / 3
    eye = np.column_stack((0.07 * np.cos(theta), -0.03 * np.sin(theta)))
    points[36:42] = eye + (-0.20, -0.22)
    points[42:48] = eye + (0.20, -0.22)
    return points


def _mouth_points(tb: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """
    (N, 20, 2) mouth offsets from the mouth centre.

    `left` and `right` are the horizontal distances of landmarks 48 and 54 from
    the midline; `tb` is the distance between landmarks 51 and 57.
    """
    theta = np.pi - np.arange(12) * np.pi / 6
    cos, sin = np.cos(theta), np.sin(theta)
    half_width = np.where(cos < 0, left[:, None], right[:, None])
    outer = np.stack((cos * half_width, -sin * tb[:, None] / 2.0), axis=-1)
    outer[:, [3, 9], 0] = 0.0
    outer[:, [0, 6], 1] = 0.0
    outer[:, 0, 0] = -left
    outer[:, 6, 0] = right
    outer[:, 3, 1] = -tb / 2.0
    outer[:, 9, 1] = tb / 2.0

    theta = np.pi - np.arange(8) * np.pi / 4
    cos, sin = np.cos(theta), np.sin(theta)
    half_width = 0.8 * np.where(cos < 0, left[:, None], right[:, None])
    inner = np.stack((cos * half_width, -sin * 0.3 * tb[:, None]), axis=-1)
    inner[:, [2, 6], 0] = 0.0
    return np.concatenate((outer, inner), axis=1)


def _render(
    timestamps: np.ndarray,
    phase: np.ndarray,
    a: MotionArchetype,
    geometry: FaceGeometry,
    intrinsics: Optional[CameraIntrinsics],
    decimals: Optional[int],
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    n = timestamps.shape[0]
    width = geometry.face_width
    center = np.asarray(geometry.center, dtype=float)
    points = np.repeat((face_template() * width + center)[None], n, axis=0)

    tb = MOUTH_HEIGHT_RATIO * width * (1.0 + a.tb_amplitude * phase)
    half = MOUTH_WIDTH_RATIO * width / 2.0
    right = half * (1.0 + a.wm_amplitude * phase)
    left = half * (1.0 + a.asymmetry * a.wm_amplitude * phase)
    points[:, 48:68] = _mouth_points(tb, left, right) + center + (0.0, MOUTH_OFFSET_RATIO * width)

    if a.jitter_sd > 0:
        rng = np.random.default_rng(a.seed)
        points = points + rng.normal(0.0, a.jitter_sd, size=points.shape)
    if decimals is not None:
        points = np.round(points, decimals)

    depth = None
    if intrinsics is not None:
        distance = geometry.distance if decimals is None else round(geometry.distance, decimals + 1)
        depth = np.full((n, LANDMARK_COUNT), distance)
    return points, depth


def _frame_times(duration: float, fps: float) -> np.ndarray:
    return np.arange(int(math.floor(duration * fps + 1e-9)) + 1) / fps


def _assemble(
    subject_id: str,
    group: Group,
    task: Task,
    timestamps: np.ndarray,
    phase: np.ndarray,
    a: MotionArchetype,
    fps: float,
    geometry: Optional[FaceGeometry],
    intrinsics: Optional[CameraIntrinsics],
    decimals: Optional[int],
) -> Trajectory:
    if geometry is None:
        center = (VGA_WIDTH / 2.0, VGA_HEIGHT / 2.0)
        if intrinsics is not None:
            center = (intrinsics.width / 2.0, intrinsics.height / 2.0)
        geometry = FaceGeometry(center=center)
    points, depth = _render(timestamps, phase, a, geometry, intrinsics, decimals)
    resolution = (intrinsics.width, intrinsics.height) if intrinsics is not None else (VGA_WIDTH, VGA_HEIGHT)
    return Trajectory.from_arrays(
        subject_id=subject_id,
        group=group,
        task=task,
        dimensionality=Dimensionality.D2,
        timestamps=timestamps,
        points=points,
        nominal_fps=fps,
        depth=depth,
        resolution=resolution,
    )


def ground_truth(a: MotionArchetype, task: Task = Task.BBP) -> GroundTruth:
    """
    Closed-form normalized features of whole-cycle sinusoidal motion.

    TB moves with amplitude `tb_amplitude`; WM with the average of both
    commissure amplitudes. Areas are products of the two, so their mean,
    range and concordance follow from the moments of a sine
    (E[s^2] = 1/2, E[s^4] = 3/8).
    """
    if task is Task.REST or a.tb_amplitude == a.wm_amplitude == 0:
        zeros = {name: 0.0 for name in GroundTruth.model_fields if name not in ("mean_Area", "ccc_Area")}
        return GroundTruth(mean_Area=1.0, ccc_Area=None, **zeros)

    omega = 2.0 * math.pi * a.rate
    tb = a.tb_amplitude
    wm = a.wm_amplitude * (1.0 + a.asymmetry) / 2.0

    def area(s: float) -> float:
        return (1.0 + tb * s) * (1.0 + wm * s)

    candidates = [-1.0, 1.0]
    if tb * wm > 0:
        vertex = -(tb + wm) / (2.0 * tb * wm)
        if -1.0 <= vertex <= 1.0:
            candidates.append(vertex)
    areas = [area(s) for s in candidates]

    left, right = a.asymmetry * a.wm_amplitude, a.wm_amplitude
    p_left, q_left = tb + left, tb * left
    p_right, q_right = tb + right, tb * right
    var_left = p_left ** 2 / 2.0 + q_left ** 2 / 8.0
    var_right = p_right ** 2 / 2.0 + q_right ** 2 / 8.0
    covariance = p_left * p_right / 2.0 + q_left * q_right / 8.0
    denominator = var_left + var_right + ((q_left - q_right) / 2.0) ** 2
    concordance = 2.0 * covariance / denominator if denominator > 0 else None

    return GroundTruth(
        delta_TB=2.0 * tb,
        max_vel_TB=omega * tb,
        min_vel_TB=-omega * tb,
        max_acc_TB=omega ** 2 * tb,
        min_acc_TB=-(omega ** 2) * tb,
        delta_WM=2.0 * wm,
        max_vel_WM=omega * wm,
        min_vel_WM=-omega * wm,
        max_acc_WM=omega ** 2 * wm,
        min_acc_WM=-(omega ** 2) * wm,
        mean_Area=1.0 + tb * wm / 2.0,
        delta_Area=max(areas) - min(areas),
        ccc_Area=concordance,
    )


def gen_trajectory(
    a: MotionArchetype,
    task: Task,
    duration: float,
    fps: float = NOMINAL_FPS,
    intrinsics: Optional[CameraIntrinsics] = None,
    geometry: Optional[FaceGeometry] = None,
    subject_id: str = "SYN01",
    group: Group = Group.HC,
    decimals: Optional[int] = None,
) -> Tuple[Trajectory, GroundTruth]:
    """
    Generate one continuous recording with sinusoidal mouth motion.

    Args:
        a: Motion archetype
        task: Task label; REST keeps the mouth still
        duration: Seconds from first to last frame
        fps: Frame rate
        intrinsics: When given, per-landmark depth of a planar face is emitted
        geometry: Face placement; defaults to the image centre at 0.4 m
        decimals: Round pixel coordinates to this many decimals

    Returns:
        The 2D trajectory and the closed-form features it implies

    Raises:
        DataValidationError: If duration * fps is below five frames
    """
    if duration * fps < MIN_FEATURE_FRAMES:
        raise DataValidationError(f"duration {duration:g} s at {fps:g} fps yields fewer than {MIN_FEATURE_FRAMES} frames")
    timestamps = _frame_times(duration, fps)
    if task is Task.REST:
        phase = np.zeros_like(timestamps)
    else:
        phase = np.sin(2.0 * np.pi * a.rate * timestamps)
    trajectory = _assemble(subject_id, group, task, timestamps, phase, a, fps, geometry, intrinsics, decimals)
    return trajectory, ground_truth(a, task)


def gen_recording(
    a: MotionArchetype,
    task: Task,
    reps: int,
    fps: float = NOMINAL_FPS,
    intrinsics: Optional[CameraIntrinsics] = None,
    geometry: Optional[FaceGeometry] = None,
    cycles_per_repetition: int = 2,
    pause: float = 0.5,
    subject_id: str = "SYN01",
    group: Group = Group.HC,
    decimals: Optional[int] = None,
) -> Tuple[Trajectory, List[RepetitionAnnotation]]:
    """
    Generate a task recording of several repetitions separated by still pauses.

    Each repetition lasts `cycles_per_repetition / a.rate` seconds and starts
    at phase zero.

    Returns:
        The 2D trajectory and one annotation per repetition
    """
    if task is Task.REST:
        raise DataValidationError("Use gen_trajectory for REST recordings")
    if reps < 1:
        raise DataValidationError(f"reps must be at least 1, got {reps}")

    length = cycles_per_repetition / a.rate
    starts = pause + np.arange(reps) * (length + pause)
    timestamps = _frame_times(pause * (reps + 1) + reps * length, fps)
    phase = np.zeros_like(timestamps)
    annotations = []
    for index, start in enumerate(starts, start=1):
        inside = (timestamps >= start) & (timestamps <= start + length)
        phase[inside] = np.sin(2.0 * np.pi * a.rate * (timestamps[inside] - start))
        annotations.append(
            RepetitionAnnotation(task=task, repetition_index=index, start=float(start), end=float(start + length))
        )

    trajectory = _assemble(subject_id, group, task, timestamps, phase, a, fps, geometry, intrinsics, decimals)
    return trajectory, annotations


def _subject_archetype(base: MotionArchetype, rng: np.random.Generator, spread: float, seed: int) -> MotionArchetype:
    def draw(value: float) -> float:
        return value * float(np.exp(rng.normal(0.0, spread)))

    return MotionArchetype(
        tb_amplitude=min(draw(base.tb_amplitude), 1.0),
        wm_amplitude=min(draw(base.wm_amplitude), 1.0),
        rate=min(draw(base.rate), 5.0),
        asymmetry=min(draw(base.asymmetry), 1.0),
        jitter_sd=base.jitter_sd,
        seed=seed,
    )


def gen_cohort_records(params: SynthParams, seed: int) -> List[SyntheticSubject]:
    """
    Generate a whole cohort in memory.

    Every subject gets its own child seed, so subjects are independent of
    generation order and the cohort is reproducible bit for bit.
    """
    layout = [(Group.HC, i) for i in range(params.n_hc)] + [(Group.PD, i) for i in range(params.n_pd)]
    children = np.random.SeedSequence(seed).spawn(len(layout))
    near, far = params.face_distance
    logger.info(f"Generating synthetic cohort: {params.n_hc} HC, {params.n_pd} PD, seed {seed}")

    subjects = []
    for (group, index), child in zip(layout, children):
        rng = np.random.default_rng(child)
        subject_id = f"{group.value}{index + 1:02d}"
        base = params.hc if group is Group.HC else params.pd
        jitter_seed = int(child.generate_state(1)[0])
        archetype = _subject_archetype(base, rng, params.spread, jitter_seed)

        center = (VGA_WIDTH / 2.0, VGA_HEIGHT / 2.0)
        if params.intrinsics is not None:
            center = (params.intrinsics.width / 2.0, params.intrinsics.height / 2.0)
        geometry = FaceGeometry(
            face_width=FACE_WIDTH_PX * float(np.exp(rng.normal(0.0, FACE_WIDTH_SPREAD))),
            center=center,
            distance=float(rng.uniform(near, far)),
        )

        rest, _ = gen_trajectory(
            archetype, Task.REST, params.rest_duration, params.fps, params.intrinsics, geometry,
            subject_id, group, params.decimals,
        )
        recordings = []
        for offset, task in enumerate(params.tasks, start=1):
            task_archetype = archetype.model_copy(update={"seed": jitter_seed + offset})
            trajectory, annotations = gen_recording(
                task_archetype, task, params.reps_per_task, params.fps, params.intrinsics, geometry,
                params.cycles_per_repetition, params.pause, subject_id, group, params.decimals,
            )
            recordings.append(SyntheticRecording(task=task, trajectory=trajectory, annotations=tuple(annotations)))

        subjects.append(SyntheticSubject(
            subject_id=subject_id,
            group=group,
            archetype=archetype,
            geometry=geometry,
            rest=rest,
            recordings=tuple(recordings),
        ))
    return subjects


def gen_cohort(params: SynthParams, seed: int, out_dir: Union[str, Path]) -> Path:
    """
    Write a synthetic cohort and its manifest.

    Layout: `<out_dir>/manifest.json`, a shared `intrinsics.json` when depth is
    emitted, and per subject `REST.jsonl`, `<TASK>.jsonl` and
    `<TASK>_annotations.csv`. Manifest paths are relative to `out_dir`.

    Returns:
        Path of the written manifest

    Raises:
        StorageError: If a file cannot be written
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f"Cannot create output directory {out_dir}: {e}")
        raise StorageError(f"Cannot create output directory {out_dir}: {e}")

    intrinsics_file = None
    if params.intrinsics is not None:
        intrinsics_file = Path("intrinsics.json")
        write_intrinsics(params.intrinsics, out_dir / intrinsics_file)

    entries: List[ManifestEntry] = []
    for subject in gen_cohort_records(params, seed):
        folder = Path(subject.subject_id)
        try:
            (out_dir / folder).mkdir(exist_ok=True)
        except OSError as e:
            raise StorageError(f"Cannot create {out_dir / folder}: {e}")

        rest_file = folder / "REST.jsonl"
        write_landmark_stream(subject.rest, out_dir / rest_file)
        entries.append(ManifestEntry(
            subject_id=subject.subject_id, group=subject.group, task=Task.REST,
            landmark_file=rest_file, intrinsics_file=intrinsics_file,
        ))
        for recording in subject.recordings:
            landmark_file = folder / f"{recording.task.value}.jsonl"
            annotation_file = folder / f"{recording.task.value}_annotations.csv"
            write_landmark_stream(recording.trajectory, out_dir / landmark_file)
            write_annotations(recording.annotations, out_dir / annotation_file)
            entries.append(ManifestEntry(
                subject_id=subject.subject_id, group=subject.group, task=recording.task,
                landmark_file=landmark_file, annotation_file=annotation_file,
                intrinsics_file=intrinsics_file, rest_file=rest_file,
            ))

    manifest = CohortManifest(entries=tuple(entries), root=out_dir)
    path = out_dir / "manifest.json"
    write_manifest(manifest, path)
    logger.info(f"Wrote synthetic cohort with {len(manifest.subjects())} subjects to {out_dir}")
    return path
