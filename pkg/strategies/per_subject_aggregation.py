"""
Per-Subject Aggregation Module.

Each subject contributes one observation per task and dimensionality: the mean
over that subject's repetitions. Group sizes then equal subject counts.
"""
import logging

import pandas as pd

from models.feature_model import FEATURE_NAMES
from .aggregation_strategy import BaseAggregationStrategy

logger = logging.getLogger(__name__)


class PerSubjectAggregation(BaseAggregationStrategy):
    """Average repetitions within each subject."""

    def aggregate(self, frame: pd.DataFrame) -> pd.DataFrame:
        self.check_columns(frame)
        if frame.empty:
            return frame.loc[:, [*self.KEY_COLUMNS, *FEATURE_NAMES]].copy()

        observations = (
            frame.groupby(self.KEY_COLUMNS, sort=False)[list(FEATURE_NAMES)]
            .mean()
            .reset_index()
        )
        logger.debug(f"Averaged {len(frame)} repetitions into {len(observations)} subject observations")
        return observations

    def describe(self) -> str:
        return "per-subject means"
