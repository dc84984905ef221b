"""
Per-Repetition Aggregation Module.

Every repetition counts as an independent observation, which inflates group
sizes relative to the subject count.
"""
import logging

import pandas as pd

from models.feature_model import FEATURE_NAMES
from .aggregation_strategy import BaseAggregationStrategy

logger = logging.getLogger(__name__)


class PerRepetitionAggregation(BaseAggregationStrategy):
    """Pool all repetitions."""

    def aggregate(self, frame: pd.DataFrame) -> pd.DataFrame:
        self.check_columns(frame)
        logger.debug(f"Using {len(frame)} repetitions as observations")
        return frame.loc[:, [*self.KEY_COLUMNS, *FEATURE_NAMES]].reset_index(drop=True)

    def describe(self) -> str:
        return "pooled repetitions"
