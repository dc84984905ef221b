"""
Kinematics Module.

This module computes the mouth properties (TB, WM, AreaLeft, AreaRight, Area),
normalizes them by REST means and derives the per-repetition kinematic
features. Every function works on 2D pixels or 3D world coordinates alike.
"""
import logging
from typing import Dict, Sequence

import numpy as np
from scipy.ndimage import uniform_filter1d

from models.feature_model import (
    PROPERTY_NAMES,
    FeatureVector,
    MouthLandmarks,
    MouthProperties,
    NormalizationFactors,
    PropertySeries,
)
from models.landmark_model import LandmarkFrame
from models.trajectory_model import Dimensionality, Trajectory
from utils.config import (
    DEFAULT_SECOND_DERIVATIVE,
    MIN_FEATURE_FRAMES,
    MIN_REST_FRAMES,
    SECOND_DERIVATIVE_METHODS,
    SMOOTHING_WINDOW,
)
from utils.exceptions import (
    DataValidationError,
    DegenerateRestError,
    DimensionalityMismatchError,
    InsufficientRestError,
    PropertyUndefinedError,
    TooFewFramesError,
    UndefinedCCCError,
)

logger = logging.getLogger(__name__)


def _triangle_area(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    ab = b - a
    ac = c - a
    if a.shape[-1] == 2:
        return 0.5 * np.abs(ab[..., 0] * ac[..., 1] - ab[..., 1] * ac[..., 0])
    return 0.5 * np.linalg.norm(np.cross(ab, ac), axis=-1)


def _mouth_geometry(points: np.ndarray, landmarks: MouthLandmarks) -> Dict[str, np.ndarray]:
    """Properties for an (..., 68, d) array of landmark positions."""
    top = points[..., landmarks.top, :]
    bottom = points[..., landmarks.bottom, :]
    left = points[..., landmarks.left, :]
    right = points[..., landmarks.right, :]
    area_left = _triangle_area(top, bottom, left)
    area_right = _triangle_area(top, bottom, right)
    return {
        "TB": np.linalg.norm(top - bottom, axis=-1),
        "WM": np.linalg.norm(left - right, axis=-1),
        "AreaLeft": area_left,
        "AreaRight": area_right,
        "Area": area_left + area_right,
    }


def mouth_properties(
    frame: LandmarkFrame,
    dimensionality: Dimensionality,
    landmarks: MouthLandmarks = MouthLandmarks(),
) -> MouthProperties:
    """
    Compute the five mouth properties of a single frame.

    Args:
        frame: Landmark frame in pixels (2D) or metres (3D)
        dimensionality: Which coordinate system the frame uses
        landmarks: Indices of the top, bottom, left and right mouth landmarks

    Returns:
        TB, WM, AreaLeft, AreaRight and Area

    Raises:
        DimensionalityMismatchError: If the frame width disagrees with `dimensionality`
        PropertyUndefinedError: If a required landmark is invalid or missing
    """
    if frame.width != dimensionality.width:
        raise DimensionalityMismatchError(
            f"{dimensionality.value} properties requested for a frame with {frame.width} coordinates"
        )
    if max(landmarks.indices) >= frame.n_points:
        raise PropertyUndefinedError(f"Frame has only {frame.n_points} landmarks")
    mask = frame.validity_mask()
    if not all(mask[i] for i in landmarks.indices):
        raise PropertyUndefinedError(f"Mouth landmark invalid at t={frame.timestamp:g}")

    values = _mouth_geometry(np.asarray(frame.points), landmarks)
    return MouthProperties(**{name: float(values[name]) for name in PROPERTY_NAMES})


def property_series(t: Trajectory, landmarks: MouthLandmarks = MouthLandmarks()) -> PropertySeries:
    """
    Compute mouth properties for every usable frame of a trajectory.

    Frames whose mouth landmarks are not all valid are dropped.
    """
    points = t.points_array()
    if points.shape[0] and points.shape[-1] != t.dimensionality.width:
        raise DimensionalityMismatchError(
            f"{t.subject_id}/{t.task.value} is tagged {t.dimensionality.value} "
            f"but holds {points.shape[-1]} coordinates per landmark"
        )
    keep = t.validity_array()[:, list(landmarks.indices)].all(axis=1)
    dropped = int((~keep).sum())
    if dropped:
        logger.debug(f"Dropping {dropped} frames of {t.subject_id}/{t.task.value} with invalid mouth landmarks")

    values = _mouth_geometry(points[keep], landmarks)
    return PropertySeries(
        timestamps=t.timestamps()[keep],
        dimensionality=t.dimensionality,
        **values,
    )


def rest_factors(rest: Trajectory, landmarks: MouthLandmarks = MouthLandmarks()) -> NormalizationFactors:
    """
    Average each mouth property over a REST window.

    Args:
        rest: The REST window (see segmentation.rest_window)
        landmarks: Mouth landmark indices

    Returns:
        Per-property means in the trajectory's dimensionality

    Raises:
        InsufficientRestError: If fewer than three usable frames remain
        DegenerateRestError: If any mean is not strictly positive
    """
    series = property_series(rest, landmarks)
    if len(series) < MIN_REST_FRAMES:
        msg = f"REST window of {rest.subject_id} has {len(series)} usable frames, need {MIN_REST_FRAMES}"
        logger.error(msg)
        raise InsufficientRestError(msg)

    means = {name: float(np.mean(series.get(name))) for name in PROPERTY_NAMES}
    degenerate = [name for name, value in means.items() if not value > 0]
    if degenerate:
        msg = f"REST mean of {', '.join(degenerate)} is not positive for {rest.subject_id}"
        logger.error(msg)
        raise DegenerateRestError(msg)

    logger.debug(f"REST factors for {rest.subject_id} ({rest.dimensionality.value}): {means}")
    return NormalizationFactors(
        dimensionality=rest.dimensionality,
        **{f"mean_{name}": value for name, value in means.items()},
    )


def normalize(series: PropertySeries, factors: NormalizationFactors) -> PropertySeries:
    """Divide each property by its REST mean."""
    if series.dimensionality is not factors.dimensionality:
        raise DimensionalityMismatchError(
            f"Cannot normalize a {series.dimensionality.value} series "
            f"with {factors.dimensionality.value} REST factors"
        )
    if series.normalized:
        raise DataValidationError("Series is already normalized")
    return series.model_copy(update={
        **{name: series.get(name) / factors.factor(name) for name in PROPERTY_NAMES},
        "normalized": True,
    })


def _check_series(values: Sequence[float], timestamps: Sequence[float]):
    v = np.asarray(values, dtype=float)
    t = np.asarray(timestamps, dtype=float)
    if v.ndim != 1 or v.shape != t.shape:
        raise DataValidationError(f"values {v.shape} and timestamps {t.shape} must be matching 1-D arrays")
    if v.shape[0] < 3:
        raise TooFewFramesError(f"Differentiation needs at least 3 samples, got {v.shape[0]}")
    if not np.all(np.diff(t) > 0):
        raise DataValidationError("timestamps must be strictly increasing")
    return v, t


def differentiate(values: Sequence[float], timestamps: Sequence[float]) -> np.ndarray:
    """
    First derivative on a possibly non-uniform time grid.

    Interior samples use the centred difference (v[i+1] - v[i-1]) / (t[i+1] - t[i-1]);
    the two endpoints use one-sided differences.

    Returns:
        Derivative with the same length as the input

    Raises:
        TooFewFramesError: With fewer than three samples
    """
    v, t = _check_series(values, timestamps)
    d = np.empty_like(v)
    d[1:-1] = (v[2:] - v[:-2]) / (t[2:] - t[:-2])
    d[0] = (v[1] - v[0]) / (t[1] - t[0])
    d[-1] = (v[-1] - v[-2]) / (t[-1] - t[-2])
    return d


def second_derivative(
    values: Sequence[float],
    timestamps: Sequence[float],
    method: str = DEFAULT_SECOND_DERIVATIVE,
) -> np.ndarray:
    """
    Second derivative on a possibly non-uniform time grid.

    Args:
        values: Samples
        timestamps: Strictly increasing times
        method: "stencil" uses the three-point non-uniform formula, with the
            endpoints taking their neighbour's value; "repeated" applies
            `differentiate` twice

    Returns:
        Second derivative with the same length as the input
    """
    if method not in SECOND_DERIVATIVE_METHODS:
        raise DataValidationError(
            f"Unknown second-derivative method '{method}', expected one of {SECOND_DERIVATIVE_METHODS}"
        )
    if method == "repeated":
        return differentiate(differentiate(values, timestamps), timestamps)

    v, t = _check_series(values, timestamps)
    h = np.diff(t)
    d2 = np.empty_like(v)
    d2[1:-1] = 2.0 * ((v[2:] - v[1:-1]) / h[1:] - (v[1:-1] - v[:-2]) / h[:-1]) / (h[1:] + h[:-1])
    d2[0] = d2[1]
    d2[-1] = d2[-2]
    return d2


def smooth(values: Sequence[float], window: int = SMOOTHING_WINDOW) -> np.ndarray:
    """Centred moving average; edges repeat the nearest sample."""
    return uniform_filter1d(np.asarray(values, dtype=float), size=window, mode="nearest")


def smooth_series(series: PropertySeries, window: int = SMOOTHING_WINDOW) -> PropertySeries:
    return series.model_copy(update={name: smooth(series.get(name), window) for name in PROPERTY_NAMES})


def ccc(x: Sequence[float], y: Sequence[float]) -> float:
    """
    Lin's concordance correlation coefficient with population moments.

    Raises:
        UndefinedCCCError: If both series are constant
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.shape[0] < 2:
        raise DataValidationError(f"CCC needs two equal-length series of at least 2 samples, got {x.shape} and {y.shape}")
    if np.ptp(x) == 0 and np.ptp(y) == 0:
        raise UndefinedCCCError("CCC is undefined for two constant series")

    mean_x, mean_y = x.mean(), y.mean()
    covariance = np.mean((x - mean_x) * (y - mean_y))
    denominator = x.var() + y.var() + (mean_x - mean_y) ** 2
    return float(np.clip(2.0 * covariance / denominator, -1.0, 1.0))


def motion_features(series: PropertySeries, accel_method: str = DEFAULT_SECOND_DERIVATIVE) -> Dict[str, float]:
    """
    The twelve motion features of a normalized repetition (everything but CCC).
    """
    t = series.timestamps
    features: Dict[str, float] = {}
    for name in ("TB", "WM"):
        v = series.get(name)
        velocity = differentiate(v, t)
        acceleration = second_derivative(v, t, accel_method)
        features[f"delta_{name}"] = float(v.max() - v.min())
        features[f"max_vel_{name}"] = float(velocity.max())
        features[f"min_vel_{name}"] = float(velocity.min())
        features[f"max_acc_{name}"] = float(acceleration.max())
        features[f"min_acc_{name}"] = float(acceleration.min())
    features["mean_Area"] = float(series.Area.mean())
    features["delta_Area"] = float(series.Area.max() - series.Area.min())
    return features


def extract_features(
    rep: Trajectory,
    factors: NormalizationFactors,
    smooth: bool = False,
    accel_method: str = DEFAULT_SECOND_DERIVATIVE,
    landmarks: MouthLandmarks = MouthLandmarks(),
) -> FeatureVector:
    """
    Compute the thirteen features of one repetition.

    Args:
        rep: A single repetition
        factors: REST factors of the same subject and dimensionality
        smooth: Apply a 3-sample centred moving average before differentiation
        accel_method: Second-derivative scheme
        landmarks: Mouth landmark indices

    Returns:
        The feature vector

    Raises:
        DimensionalityMismatchError: If rep and factors differ in dimensionality
        TooFewFramesError: If fewer than five valid frames remain
        UndefinedCCCError: If AreaLeft and AreaRight are both constant
    """
    if rep.dimensionality is not factors.dimensionality:
        raise DimensionalityMismatchError(
            f"{rep.dimensionality.value} repetition with {factors.dimensionality.value} REST factors"
        )
    raw = property_series(rep, landmarks)
    if len(raw) < MIN_FEATURE_FRAMES:
        msg = (
            f"{rep.subject_id}/{rep.task.value} repetition {rep.repetition} has "
            f"{len(raw)} valid frames, need {MIN_FEATURE_FRAMES}"
        )
        logger.error(msg)
        raise TooFewFramesError(msg)

    series = normalize(raw, factors)
    if smooth:
        series = smooth_series(series)

    features = motion_features(series, accel_method)
    features["ccc_Area"] = ccc(series.AreaLeft, series.AreaRight)
    return FeatureVector(**features)
