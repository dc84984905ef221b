"""
Archetype Model Module.

This module defines the parameters of synthetic mouth motion and the closed-form
feature values they imply.
"""
import logging
from typing import Optional, Tuple

from pydantic import Field, field_validator, model_validator

from utils.config import MAX_FPS, MIN_FPS, NOMINAL_FPS, REST_WINDOW_SECONDS, VGA_HEIGHT, VGA_WIDTH
from .base_model import BaseModel
from .landmark_model import CameraIntrinsics
from .trajectory_model import Task

logger = logging.getLogger(__name__)


class MotionArchetype(BaseModel):
    """
    Sinusoidal mouth motion of one kind of subject.

    Amplitudes are fractions of the resting opening. `asymmetry` is the ratio
    of left to right commissure excursion; 1.0 moves both sides identically.
    """

    tb_amplitude: float = Field(0.5, ge=0, le=1)
    wm_amplitude: float = Field(0.2, ge=0, le=1)
    rate: float = Field(1.0, gt=0, le=5)
    asymmetry: float = Field(1.0, gt=0, le=1)
    jitter_sd: float = Field(0.0, ge=0)
    seed: int = 0


class GroundTruth(BaseModel):
    """Expected normalized features of a jitter-free synthetic repetition."""

    delta_TB: float
    max_vel_TB: float
    min_vel_TB: float
    max_acc_TB: float
    min_acc_TB: float
    delta_WM: float
    max_vel_WM: float
    min_vel_WM: float
    max_acc_WM: float
    min_acc_WM: float
    mean_Area: float
    delta_Area: float
    ccc_Area: Optional[float] = None


def _default_hc() -> MotionArchetype:
    return MotionArchetype(tb_amplitude=0.6, wm_amplitude=0.25, rate=1.0, asymmetry=0.9, jitter_sd=0.5)


def _default_pd() -> MotionArchetype:
    return MotionArchetype(tb_amplitude=0.39, wm_amplitude=0.1625, rate=0.9, asymmetry=0.7, jitter_sd=0.5)


def _default_intrinsics() -> CameraIntrinsics:
    return CameraIntrinsics(fx=600.0, fy=600.0, cx=320.0, cy=240.0, width=VGA_WIDTH, height=VGA_HEIGHT)


class SynthParams(BaseModel):
    """Shape of a synthetic cohort. Defaults mirror a 12 HC / 8 PD study."""

    hc: MotionArchetype = Field(default_factory=_default_hc)
    pd: MotionArchetype = Field(default_factory=_default_pd)
    n_hc: int = Field(12, ge=2)
    n_pd: int = Field(8, ge=2)
    reps_per_task: int = Field(5, ge=1)
    tasks: Tuple[Task, ...] = (Task.BBP, Task.PA, Task.BIGSMILE)
    cycles_per_repetition: int = Field(2, ge=1)
    pause: float = Field(0.5, gt=0)
    rest_duration: float = Field(20.0, ge=REST_WINDOW_SECONDS)
    fps: float = Field(NOMINAL_FPS, ge=MIN_FPS, le=MAX_FPS)
    spread: float = Field(0.15, ge=0, le=1)
    intrinsics: Optional[CameraIntrinsics] = Field(default_factory=_default_intrinsics)
    face_distance: Tuple[float, float] = (0.30, 0.50)
    decimals: Optional[int] = Field(3, ge=0, le=12)

    @field_validator('tasks')
    @classmethod
    def validate_tasks(cls, v: Tuple[Task, ...]) -> Tuple[Task, ...]:
        if Task.REST in v:
            raise ValueError("REST is generated for every subject and cannot be listed as a task")
        if len(set(v)) != len(v):
            raise ValueError("tasks must be unique")
        return v

    @model_validator(mode='after')
    def validate_face_distance(self):
        near, far = self.face_distance
        if not 0 < near <= far:
            raise ValueError(f"face_distance must satisfy 0 < near <= far, got {self.face_distance}")
        return self
