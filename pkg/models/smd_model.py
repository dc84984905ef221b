"""
SMD Model Module.

This module defines the effect-size magnitude classes and cohort report rows.
"""
import logging
import math
from enum import Enum
from typing import Optional

from pydantic import Field, model_validator

from utils.config import LARGE_SMD, MEDIUM_SMD
from utils.exceptions import DataValidationError
from .base_model import BaseModel
from .trajectory_model import Dimensionality, Task

logger = logging.getLogger(__name__)


class Magnitude(str, Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"

    @classmethod
    def from_smd(cls, value: float) -> "Magnitude":
        """
        Classify an effect size by its absolute value.

        Breakpoints are inclusive on the upper class: |v| = 0.5 is medium and
        |v| = 0.8 is large.
        """
        if not math.isfinite(value):
            raise DataValidationError(f"Cannot classify non-finite SMD {value}")
        magnitude = abs(value)
        if magnitude >= LARGE_SMD:
            return cls.LARGE
        if magnitude >= MEDIUM_SMD:
            return cls.MEDIUM
        return cls.SMALL

    @property
    def at_least_medium(self) -> bool:
        return self is not Magnitude.SMALL


class SmdRow(BaseModel):
    """Group statistics and effect size for one (task, feature, dimensionality)."""

    task: Task
    feature: str
    dimensionality: Dimensionality
    hc_mean: float
    hc_sd: float = Field(..., ge=0)
    hc_n: int = Field(..., ge=2)
    pd_mean: float
    pd_sd: float = Field(..., ge=0)
    pd_n: int = Field(..., ge=2)
    smd: float
    magnitude: Magnitude

    @model_validator(mode='after')
    def validate_magnitude(self):
        expected = Magnitude.from_smd(self.smd)
        if expected is not self.magnitude:
            msg = f"magnitude {self.magnitude.value} inconsistent with SMD {self.smd:g} ({expected.value})"
            logger.error(f"SmdRow validation failed: {msg}")
            raise ValueError(msg)
        return self


class AgreementRow(BaseModel):
    """Whether a feature's 3D effect carries over to 2D landmarks."""

    task: Task
    feature: str
    magnitude_3d: Optional[Magnitude] = None
    magnitude_2d: Optional[Magnitude] = None
    consistent: bool
