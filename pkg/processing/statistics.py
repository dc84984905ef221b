"""
Statistics Module.

This module computes standardized mean differences between the HC and PD
groups and turns feature tables into cohort reports.
"""
import logging
import math
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from models.feature_model import FEATURE_NAMES, FeatureRow
from models.manifest_model import CohortManifest
from models.smd_model import AgreementRow, Magnitude, SmdRow
from models.trajectory_model import Dimensionality, Group, Task
from utils.aggregation_factory import AggregationFactory
from utils.config import DEFAULT_AGGREGATION
from utils.exceptions import DataValidationError, DegenerateGroupsError, InsufficientGroupError

logger = logging.getLogger(__name__)

# Report order
DIMENSIONALITY_ORDER: Tuple[Dimensionality, ...] = (Dimensionality.D3, Dimensionality.D2)
FILTER_MODES = ("all", "medium-large")


class NConvention(str, Enum):
    """How many observations per group a published summary is assumed to rest on."""

    SUBJECTS = "subjects"
    VIDEOS = "videos"
    EQUAL = "equal"

    @property
    def sizes(self) -> Tuple[int, int]:
        """(n_HC, n_PD) plugged into the pooled standard deviation."""
        if self is NConvention.SUBJECTS:
            return (12, 8)
        if self is NConvention.VIDEOS:
            return (48, 32)
        return (10, 10)


def pooled_sd(s1: float, n1: int, s2: float, n2: int) -> float:
    return math.sqrt(((n1 - 1) * s1 ** 2 + (n2 - 1) * s2 ** 2) / (n1 + n2 - 2))


def smd_from_summary(mu1: float, s1: float, n1: int, mu2: float, s2: float, n2: int) -> float:
    """
    Standardized mean difference from group summaries.

    Args:
        mu1, s1, n1: Mean, sample SD and size of the first group
        mu2, s2, n2: Mean, sample SD and size of the second group

    Returns:
        (mu1 - mu2) / pooled SD

    Raises:
        InsufficientGroupError: If either group has fewer than two observations
        DegenerateGroupsError: If the pooled SD is zero
    """
    if n1 < 2 or n2 < 2:
        raise InsufficientGroupError(f"SMD needs at least 2 observations per group, got {n1} and {n2}")
    if s1 < 0 or s2 < 0:
        raise DataValidationError(f"Standard deviations must be non-negative, got {s1} and {s2}")
    pooled = pooled_sd(s1, n1, s2, n2)
    if pooled == 0:
        raise DegenerateGroupsError("Pooled standard deviation is zero")
    return (mu1 - mu2) / pooled


def smd(g1: Sequence[float], g2: Sequence[float]) -> float:
    """
    Standardized mean difference of two samples, mean(g1) - mean(g2) over the pooled SD.

    Raises:
        InsufficientGroupError: If either sample has fewer than two values
        DegenerateGroupsError: If both samples are constant
    """
    a = np.asarray(g1, dtype=float)
    b = np.asarray(g2, dtype=float)
    if a.size < 2 or b.size < 2:
        raise InsufficientGroupError(f"SMD needs at least 2 observations per group, got {a.size} and {b.size}")
    if np.ptp(a) == 0 and np.ptp(b) == 0:
        raise DegenerateGroupsError("Both groups are constant; pooled standard deviation is zero")
    return smd_from_summary(
        float(a.mean()), float(a.std(ddof=1)), a.size,
        float(b.mean()), float(b.std(ddof=1)), b.size,
    )


def classify_smd(value: float) -> Magnitude:
    return Magnitude.from_smd(value)


def feature_frame(rows: Sequence[FeatureRow]) -> pd.DataFrame:
    """Flatten feature rows into a DataFrame with one column per feature."""
    columns = ["subject_id", "group", "task", "dimensionality", "repetition", *FEATURE_NAMES]
    return pd.DataFrame([row.as_flat_dict() for row in rows], columns=columns)


def _apply_manifest_groups(frame: pd.DataFrame, manifest: CohortManifest) -> pd.DataFrame:
    groups = {subject: group.value for subject, group in manifest.subjects().items()}
    unknown = sorted(set(frame["subject_id"]) - set(groups))
    if unknown:
        msg = f"Feature table lists subjects missing from the manifest: {', '.join(unknown)}"
        logger.error(msg)
        raise DataValidationError(msg)
    expected = frame["subject_id"].map(groups)
    mismatched = sorted(set(frame.loc[expected != frame["group"], "subject_id"]))
    if mismatched:
        msg = f"Group in feature table disagrees with manifest for: {', '.join(mismatched)}"
        logger.error(msg)
        raise DataValidationError(msg)
    return frame


def cohort_analysis(
    rows: Sequence[FeatureRow],
    manifest: Optional[CohortManifest] = None,
    aggregation: str = DEFAULT_AGGREGATION,
) -> List[SmdRow]:
    """
    Compare HC and PD for every (task, feature, dimensionality) in a feature table.

    Args:
        rows: Feature rows of the whole cohort
        manifest: Optional manifest used to confirm each subject's group
        aggregation: Name of the aggregation strategy ("per_subject" or "per_repetition")

    Returns:
        SMD rows ordered by task, then dimensionality (3D before 2D), then feature

    Raises:
        InsufficientGroupError: If a group has fewer than two observations
        DegenerateGroupsError: If a feature is constant across both groups
    """
    frame = feature_frame(rows)
    if manifest is not None:
        frame = _apply_manifest_groups(frame, manifest)

    strategy = AggregationFactory.create_strategy(aggregation)
    observations = strategy.aggregate(frame)
    logger.info(f"Cohort analysis over {len(observations)} observations ({strategy.describe()})")

    results: List[SmdRow] = []
    for task in Task:
        for dimensionality in DIMENSIONALITY_ORDER:
            block = observations[
                (observations["task"] == task.value)
                & (observations["dimensionality"] == dimensionality.value)
            ]
            if block.empty:
                continue
            hc = block[block["group"] == Group.HC.value]
            pd_ = block[block["group"] == Group.PD.value]
            for feature in FEATURE_NAMES:
                try:
                    value = smd(hc[feature].to_numpy(), pd_[feature].to_numpy())
                except (InsufficientGroupError, DegenerateGroupsError) as e:
                    msg = f"{task.value} {dimensionality.value} {feature}: {e}"
                    logger.error(msg)
                    raise type(e)(msg) from e
                results.append(SmdRow(
                    task=task,
                    feature=feature,
                    dimensionality=dimensionality,
                    hc_mean=float(hc[feature].mean()),
                    hc_sd=float(hc[feature].std(ddof=1)),
                    hc_n=len(hc),
                    pd_mean=float(pd_[feature].mean()),
                    pd_sd=float(pd_[feature].std(ddof=1)),
                    pd_n=len(pd_),
                    smd=value,
                    magnitude=classify_smd(value),
                ))
    return results


def filter_smd_rows(rows: Sequence[SmdRow], mode: str = "all") -> List[SmdRow]:
    """
    Filter a report.

    "medium-large" keeps a (task, feature) pair in both dimensionalities when
    either of them reaches a medium effect.
    """
    if mode not in FILTER_MODES:
        raise DataValidationError(f"Unknown filter '{mode}', expected one of {FILTER_MODES}")
    if mode == "all":
        return list(rows)
    keep = {(row.task, row.feature) for row in rows if row.magnitude.at_least_medium}
    return [row for row in rows if (row.task, row.feature) in keep]


def dimensionality_agreement(rows: Sequence[SmdRow]) -> List[AgreementRow]:
    """
    Flag features whose 3D effect is at least medium but small (or absent) in 2D.
    """
    magnitudes: Dict[Tuple[Task, str], Dict[Dimensionality, Magnitude]] = {}
    for row in rows:
        magnitudes.setdefault((row.task, row.feature), {})[row.dimensionality] = row.magnitude

    result = []
    for (task, feature), by_dim in magnitudes.items():
        m3 = by_dim.get(Dimensionality.D3)
        m2 = by_dim.get(Dimensionality.D2)
        lost = m3 is not None and m3.at_least_medium and (m2 is None or not m2.at_least_medium)
        result.append(AgreementRow(
            task=task, feature=feature, magnitude_3d=m3, magnitude_2d=m2, consistent=not lost,
        ))
    return result
