"""
Aggregation Factory Module.

This module implements the Factory pattern for creating aggregation strategies.
"""
import logging
from typing import Dict, Type

from strategies.aggregation_strategy import AggregationStrategy
from strategies.per_repetition_aggregation import PerRepetitionAggregation
from strategies.per_subject_aggregation import PerSubjectAggregation
from utils.config import AVAILABLE_AGGREGATIONS
from utils.exceptions import DataValidationError

logger = logging.getLogger(__name__)


class AggregationFactory:
    """
    Factory class for creating aggregation strategies.

    Decouples the choice of analysis unit from the code that computes effect sizes.
    """

    # Map of strategy names to their classes
    _strategies: Dict[str, Type[AggregationStrategy]] = {
        "per_subject": PerSubjectAggregation,
        "per_repetition": PerRepetitionAggregation,
    }

    @classmethod
    def create_strategy(cls, strategy_type: str, **kwargs) -> AggregationStrategy:
        """
        Create an aggregation strategy of the specified type.

        Args:
            strategy_type: The registered strategy name
            **kwargs: Additional parameters to pass to the strategy constructor

        Returns:
            A new instance of the specified strategy type

        Raises:
            DataValidationError: If the strategy type is unknown
        """
        logger.debug(f"Creating aggregation strategy of type '{strategy_type}'")

        if strategy_type not in cls._strategies:
            valid_types = ", ".join(cls._strategies.keys())
            msg = f"Unknown aggregation: {strategy_type}. Valid types: {valid_types}"
            logger.error(msg)
            raise DataValidationError(msg)

        strategy = cls._strategies[strategy_type](**kwargs)
        logger.debug(f"Created {strategy.__class__.__name__}")
        return strategy

    @classmethod
    def register_strategy(cls, name: str, strategy_class: Type[AggregationStrategy]) -> None:
        """
        Register a new strategy type.

        Args:
            name: The name to associate with the strategy type
            strategy_class: The strategy class to register

        Raises:
            ValueError: If the strategy name is already registered
        """
        logger.info(f"Registering aggregation strategy '{name}'")

        if name in cls._strategies:
            msg = f"Aggregation strategy '{name}' is already registered"
            logger.error(msg)
            raise ValueError(msg)

        cls._strategies[name] = strategy_class

    @classmethod
    def get_available_strategies(cls) -> Dict[str, str]:
        """
        Get a dictionary of available strategy types and their descriptions.

        Returns:
            A dictionary mapping strategy names to their descriptions
        """
        return {name: AVAILABLE_AGGREGATIONS.get(name, "") for name in cls._strategies}
