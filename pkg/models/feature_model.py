"""
Feature Model Module.

This module defines the mouth property series, REST normalization factors and
the thirteen per-repetition kinematic features.
"""
import logging
from typing import Any, Dict, NamedTuple, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from utils.config import LANDMARK_COUNT, MOUTH_LANDMARKS
from .base_model import BaseModel, frozen_array
from .trajectory_model import Dimensionality, Group, Task

logger = logging.getLogger(__name__)

PROPERTY_NAMES: Tuple[str, ...] = ("TB", "WM", "AreaLeft", "AreaRight", "Area")

# Column order of every feature table
FEATURE_NAMES: Tuple[str, ...] = (
    "delta_TB",
    "max_vel_TB",
    "min_vel_TB",
    "max_acc_TB",
    "min_acc_TB",
    "delta_WM",
    "max_vel_WM",
    "min_vel_WM",
    "max_acc_WM",
    "min_acc_WM",
    "mean_Area",
    "delta_Area",
    "ccc_Area",
)


class MouthLandmarks(BaseModel):
    """Landmark indices used for the mouth properties."""

    top: int = Field(MOUTH_LANDMARKS["top"], ge=0, lt=LANDMARK_COUNT)
    bottom: int = Field(MOUTH_LANDMARKS["bottom"], ge=0, lt=LANDMARK_COUNT)
    left: int = Field(MOUTH_LANDMARKS["left"], ge=0, lt=LANDMARK_COUNT)
    right: int = Field(MOUTH_LANDMARKS["right"], ge=0, lt=LANDMARK_COUNT)

    @model_validator(mode='after')
    def validate_distinct(self):
        indices = (self.top, self.bottom, self.left, self.right)
        if len(set(indices)) != 4:
            raise ValueError(f"mouth landmark indices must be distinct, got {indices}")
        return self

    @property
    def indices(self) -> Tuple[int, int, int, int]:
        return (self.top, self.bottom, self.left, self.right)


class MouthProperties(NamedTuple):
    TB: float
    WM: float
    AreaLeft: float
    AreaRight: float
    Area: float


class PropertySeries(BaseModel):
    """
    Per-frame mouth properties of one recording or repetition.

    Raw 2D series are in px / px², raw 3D series in m / m²; normalized series
    are dimensionless.
    """

    timestamps: np.ndarray
    TB: np.ndarray
    WM: np.ndarray
    AreaLeft: np.ndarray
    AreaRight: np.ndarray
    Area: np.ndarray
    dimensionality: Dimensionality
    normalized: bool = False

    @field_validator('timestamps', 'TB', 'WM', 'AreaLeft', 'AreaRight', 'Area', mode='before')
    @classmethod
    def validate_series(cls, v: Any) -> np.ndarray:
        series = frozen_array(v)
        if series.ndim != 1:
            raise ValueError(f"series must be one-dimensional, got shape {series.shape}")
        return series

    @model_validator(mode='after')
    def validate_lengths(self):
        n = self.timestamps.shape[0]
        for name in PROPERTY_NAMES:
            if getattr(self, name).shape[0] != n:
                raise ValueError(f"{name} has {getattr(self, name).shape[0]} samples, expected {n}")
        return self

    def __len__(self) -> int:
        return int(self.timestamps.shape[0])

    @property
    def units(self) -> Dict[str, str]:
        """Unit of each property."""
        if self.normalized:
            return {name: "1" for name in PROPERTY_NAMES}
        length = "px" if self.dimensionality is Dimensionality.D2 else "m"
        return {
            "TB": length,
            "WM": length,
            "AreaLeft": f"{length}^2",
            "AreaRight": f"{length}^2",
            "Area": f"{length}^2",
        }

    def get(self, name: str) -> np.ndarray:
        return getattr(self, name)


class NormalizationFactors(BaseModel):
    """Per-subject REST means used to make properties dimensionless."""

    mean_TB: float = Field(..., gt=0)
    mean_WM: float = Field(..., gt=0)
    mean_AreaLeft: float = Field(..., gt=0)
    mean_AreaRight: float = Field(..., gt=0)
    mean_Area: float = Field(..., gt=0)
    dimensionality: Dimensionality

    def factor(self, name: str) -> float:
        return getattr(self, f"mean_{name}")


class FeatureVector(BaseModel):
    """The thirteen kinematic features of one repetition."""

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
    ccc_Area: float

    @model_validator(mode='after')
    def validate_feature_ranges(self):
        for name in ("delta_TB", "delta_WM", "delta_Area"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")
        for prop in ("TB", "WM"):
            if getattr(self, f"max_vel_{prop}") < getattr(self, f"min_vel_{prop}"):
                raise ValueError(f"max_vel_{prop} below min_vel_{prop}")
            if getattr(self, f"max_acc_{prop}") < getattr(self, f"min_acc_{prop}"):
                raise ValueError(f"max_acc_{prop} below min_acc_{prop}")
        if not -1.0 <= self.ccc_Area <= 1.0:
            raise ValueError(f"ccc_Area must lie in [-1, 1], got {self.ccc_Area}")
        return self

    def as_dict(self) -> Dict[str, float]:
        """Features in table column order."""
        return {name: float(getattr(self, name)) for name in FEATURE_NAMES}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)


class FeatureRow(BaseModel):
    """One line of the feature table."""

    subject_id: str
    group: Group
    task: Task
    dimensionality: Dimensionality
    repetition: int = Field(..., ge=1)
    features: FeatureVector

    def as_flat_dict(self) -> Dict[str, Any]:
        return {
            "subject_id": self.subject_id,
            "group": self.group.value,
            "task": self.task.value,
            "dimensionality": self.dimensionality.value,
            "repetition": self.repetition,
            **self.features.as_dict(),
        }
