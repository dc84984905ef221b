"""
Landmark Model Module.

This module defines per-frame landmark data, camera intrinsics and 3D world points.
"""
import logging
import math
from typing import Any, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from .base_model import BaseModel, frozen_array

logger = logging.getLogger(__name__)


class LandmarkFrame(BaseModel):
    """
    One video frame worth of facial landmarks.

    `points` holds (u, v) pixel pairs for 2D frames or (x_w, y_w, z_w) metre
    triples for reconstructed 3D frames. `depth` is sampled at each landmark
    pixel; z = 0 means the camera returned no reading. `valid` flags landmarks
    that may be used downstream.
    """

    timestamp: float
    points: np.ndarray
    depth: Optional[np.ndarray] = None
    valid: Optional[np.ndarray] = None

    @field_validator('points', mode='before')
    @classmethod
    def validate_points(cls, v: Any) -> np.ndarray:
        points = frozen_array(v)
        if points.ndim != 2 or points.shape[1] not in (2, 3):
            raise ValueError(f"points must be an (n, 2) or (n, 3) array, got shape {points.shape}")
        return points

    @field_validator('depth', mode='before')
    @classmethod
    def validate_depth(cls, v: Any) -> Optional[np.ndarray]:
        if v is None:
            return None
        depth = frozen_array(v)
        if depth.ndim != 1:
            raise ValueError(f"depth must be one value per landmark, got shape {depth.shape}")
        return depth

    @field_validator('valid', mode='before')
    @classmethod
    def validate_valid(cls, v: Any) -> Optional[np.ndarray]:
        if v is None:
            return None
        valid = frozen_array(v, dtype=bool)
        if valid.ndim != 1:
            raise ValueError(f"valid must be one flag per landmark, got shape {valid.shape}")
        return valid

    @classmethod
    def build(
        cls,
        timestamp: float,
        points: Any,
        depth: Any = None,
        valid: Any = None,
    ) -> "LandmarkFrame":
        """
        Build a frame from arrays already known to be well-formed.

        Skips pydantic validation; used on hot paths inside the pipeline.
        """
        return cls.model_construct(
            timestamp=float(timestamp),
            points=frozen_array(points),
            depth=None if depth is None else frozen_array(depth),
            valid=None if valid is None else frozen_array(valid, dtype=bool),
        )

    @property
    def n_points(self) -> int:
        return int(self.points.shape[0])

    @property
    def width(self) -> int:
        """Coordinate count per landmark (2 for pixels, 3 for world points)."""
        return int(self.points.shape[1])

    def validity_mask(self) -> np.ndarray:
        """Landmarks that are flagged valid and have finite coordinates."""
        mask = np.all(np.isfinite(self.points), axis=1)
        if self.valid is not None and self.valid.shape[0] == mask.shape[0]:
            mask = mask & self.valid
        return mask

    def depth_mask(self) -> np.ndarray:
        """Landmarks with a usable depth reading (z > 0)."""
        if self.depth is None:
            return np.zeros(self.n_points, dtype=bool)
        depth = np.asarray(self.depth)
        return np.isfinite(depth) & (depth > 0)


class CameraIntrinsics(BaseModel):
    """Pinhole intrinsics of the colour stream the depth was registered to."""

    fx: float = Field(..., gt=0)
    fy: float = Field(..., gt=0)
    cx: float
    cy: float
    width: int = Field(..., gt=0)
    height: int = Field(..., gt=0)

    @model_validator(mode='after')
    def validate_principal_point(self):
        """Principal point must lie strictly inside the sensor."""
        if not (0 < self.cx < self.width):
            msg = f"cx={self.cx} outside sensor width {self.width}"
            logger.error(f"Intrinsics validation failed: {msg}")
            raise ValueError(msg)
        if not (0 < self.cy < self.height):
            msg = f"cy={self.cy} outside sensor height {self.height}"
            logger.error(f"Intrinsics validation failed: {msg}")
            raise ValueError(msg)
        return self

    def shifted(self, du: float, dv: float) -> "CameraIntrinsics":
        """Copy with the principal point moved by (du, dv) pixels."""
        return CameraIntrinsics.model_construct(
            fx=self.fx, fy=self.fy, cx=self.cx + du, cy=self.cy + dv,
            width=self.width, height=self.height,
        )


class WorldPoint(BaseModel):
    """A landmark position in camera-centred world coordinates (metres)."""

    x_w: float
    y_w: float
    z_w: float

    @model_validator(mode='after')
    def validate_finite(self):
        if not all(math.isfinite(c) for c in (self.x_w, self.y_w, self.z_w)):
            raise ValueError("world point coordinates must be finite")
        return self

    def as_array(self) -> np.ndarray:
        return np.array([self.x_w, self.y_w, self.z_w], dtype=float)
