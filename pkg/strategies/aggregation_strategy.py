"""
Aggregation Strategy Module.

This module defines the interface and base classes for turning per-repetition
feature rows into group observations using the Strategy pattern.
"""
import logging
from abc import ABC, abstractmethod
from typing import List

import pandas as pd

from models.feature_model import FEATURE_NAMES
from utils.exceptions import DataValidationError

logger = logging.getLogger(__name__)


class AggregationStrategy(ABC):
    """
    Abstract base class for observation aggregation.

    Follows the Strategy design pattern so the unit of analysis can be swapped
    without touching the effect-size code.
    """

    @abstractmethod
    def aggregate(self, frame: pd.DataFrame) -> pd.DataFrame:
        """
        Reduce a feature table to the observations compared between groups.

        Args:
            frame: One row per repetition with key columns and every feature

        Returns:
            One row per observation with the same columns
        """
        pass

    @abstractmethod
    def describe(self) -> str:
        """
        Describe the unit of analysis.

        Returns:
            A human-readable description
        """
        pass


class BaseAggregationStrategy(AggregationStrategy):
    """
    Base implementation with the column checks shared by every strategy.
    """

    KEY_COLUMNS: List[str] = ["subject_id", "group", "task", "dimensionality"]

    def __init__(self):
        """Initialize the strategy."""
        logger.debug(f"Initialized {self.__class__.__name__}")

    def check_columns(self, frame: pd.DataFrame) -> None:
        """
        Check that a feature table has every key and feature column.

        Raises:
            DataValidationError: Naming the missing columns
        """
        missing = [c for c in [*self.KEY_COLUMNS, *FEATURE_NAMES] if c not in frame.columns]
        if missing:
            msg = f"Feature table lacks columns: {', '.join(missing)}"
            logger.error(msg)
            raise DataValidationError(msg)
