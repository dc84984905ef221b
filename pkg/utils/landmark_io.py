"""
Landmark Stream I/O Module.

This module reads and writes landmark streams: one JSON object per line,
`{"t": seconds, "pts": [[u, v] x 68], "z": [metres x 68]?, "valid": [bool x 68]?}`.
3D trajectories use `[x_w, y_w, z_w]` triples in "pts". Parsing never raises
anything but toolkit errors, whatever the input bytes.
"""
import json
import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel as PydanticBaseModel, ConfigDict, StrictBool, StrictFloat, ValidationError

from models.landmark_model import LandmarkFrame
from models.trajectory_model import Dimensionality, Group, Task, Trajectory, validate_trajectory
from utils.config import LANDMARK_COUNT, NOMINAL_FPS
from utils.exceptions import ParseError, SchemaError, TrajectoryValidationError
from utils.record_io import Sink, Source, open_sink, read_source_bytes

logger = logging.getLogger(__name__)


class FrameRecord(PydanticBaseModel):
    """Wire shape of one landmark stream line."""

    model_config = ConfigDict(allow_inf_nan=False, extra="ignore")

    t: StrictFloat
    pts: List[List[StrictFloat]]
    z: Optional[List[StrictFloat]] = None
    valid: Optional[List[StrictBool]] = None


def _decode_line(raw: bytes, line: int) -> FrameRecord:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"not valid UTF-8: {e.reason}", line)
    try:
        document = json.loads(text)
    except (ValueError, RecursionError) as e:
        raise ParseError(f"invalid JSON: {e}", line)
    try:
        record = FrameRecord.model_validate(document)
    except (ValidationError, ValueError, TypeError, OverflowError, RecursionError) as e:
        raise SchemaError(f"invalid frame record: {e}", line)

    if len(record.pts) != LANDMARK_COUNT:
        raise SchemaError(f"landmark count {len(record.pts)} ≠ {LANDMARK_COUNT}", line)
    widths = {len(point) for point in record.pts}
    if len(widths) != 1 or widths.pop() not in (2, 3):
        raise SchemaError("every point must have 2 (pixel) or 3 (world) coordinates", line)
    if record.z is not None and len(record.z) != LANDMARK_COUNT:
        raise SchemaError(f"depth count {len(record.z)} ≠ {LANDMARK_COUNT}", line)
    if record.valid is not None and len(record.valid) != LANDMARK_COUNT:
        raise SchemaError(f"validity count {len(record.valid)} ≠ {LANDMARK_COUNT}", line)
    return record


def parse_landmark_stream(
    source: Source,
    subject_id: str = "unknown",
    group: Group = Group.HC,
    task: Task = Task.REST,
    nominal_fps: Optional[float] = None,
    resolution: Optional[Tuple[int, int]] = None,
) -> Trajectory:
    """
    Parse a landmark stream into a validated Trajectory.

    Args:
        source: Path, raw bytes or an open file
        subject_id, group, task: Recording metadata
        nominal_fps: Frame rate; estimated from the median frame interval when omitted
        resolution: Image size used for the pixel bounds check

    Returns:
        The trajectory; dimensionality follows the point width of the stream

    Raises:
        ParseError: On undecodable lines, with the line number
        SchemaError: On records of the wrong shape, with the line number
        TrajectoryValidationError: If the frames violate trajectory invariants
        MissingFileError: If a path does not exist
    """
    raw = read_source_bytes(source)
    frames: List[LandmarkFrame] = []
    width = None
    for number, line in enumerate(raw.split(b"\n"), start=1):
        if not line.strip():
            continue
        record = _decode_line(line, number)
        record_width = len(record.pts[0])
        if width is None:
            width = record_width
        elif record_width != width:
            raise SchemaError(f"point width {record_width} differs from earlier frames ({width})", number)
        frames.append(LandmarkFrame.build(record.t, record.pts, record.z, record.valid))

    if not frames:
        raise ParseError("empty landmark stream")

    if nominal_fps is None:
        nominal_fps = NOMINAL_FPS
        if len(frames) > 1:
            interval = float(np.median(np.diff([frame.timestamp for frame in frames])))
            if interval > 0:
                nominal_fps = 1.0 / interval

    trajectory = Trajectory(
        subject_id=subject_id,
        group=group,
        task=task,
        dimensionality=Dimensionality.D2 if width == 2 else Dimensionality.D3,
        frames=tuple(frames),
        nominal_fps=float(nominal_fps),
        resolution=resolution,
    )
    violations = validate_trajectory(trajectory)
    if violations:
        logger.error(f"Landmark stream for {subject_id}/{task.value} failed validation: {violations[:3]}")
        raise TrajectoryValidationError(violations)

    logger.debug(f"Parsed {len(frames)} frames for {subject_id}/{task.value}")
    return trajectory


def _frame_record(frame: LandmarkFrame) -> dict:
    points = np.asarray(frame.points)
    finite = np.all(np.isfinite(points), axis=1)
    record = {"t": frame.timestamp, "pts": np.where(finite[:, None], points, 0.0).tolist()}
    if frame.depth is not None:
        depth = np.asarray(frame.depth)
        record["z"] = np.where(np.isfinite(depth), depth, 0.0).tolist()
    if frame.valid is not None or not finite.all():
        valid = finite if frame.valid is None else finite & np.asarray(frame.valid)
        record["valid"] = valid.tolist()
    return record


def write_landmark_stream(t: Trajectory, sink: Sink) -> None:
    """
    Write a trajectory as a landmark stream.

    Non-finite coordinates are written as 0 and flagged invalid.
    """
    with open_sink(sink) as handle:
        for frame in t.frames:
            handle.write(json.dumps(_frame_record(frame), separators=(",", ":")) + "\n")
    logger.debug(f"Wrote {len(t)} frames for {t.subject_id}/{t.task.value}")
