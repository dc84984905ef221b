"""
Base Model Module.

This module defines the base model class that all domain models inherit from.
Models are immutable value objects; numpy arrays held by a model are made
read-only so instances are safe to share between worker threads.
"""
import logging
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel as PydanticBaseModel, ConfigDict

logger = logging.getLogger(__name__)


def frozen_array(value: Any, dtype: Any = float) -> np.ndarray:
    """
    Convert a value to a read-only numpy array.

    Args:
        value: Array-like input
        dtype: Target dtype

    Returns:
        A non-writeable copy of the input as an ndarray
    """
    array = np.array(value, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


class BaseModel(PydanticBaseModel):
    """
    Base model for all domain types.

    Instances are frozen; numpy fields are allowed and should be stored
    through `frozen_array`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, use_enum_values=False)

    def to_record(self, data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """
        Convert the model into a JSON-compatible dictionary.

        Args:
            data: Dictionary to convert (if None, the model's own fields are used)

        Returns:
            Dictionary with numpy arrays, numpy scalars and enums replaced by plain values
        """
        if data is None:
            data = self.model_dump()

        result = {}
        for key, value in data.items():
            if key.startswith('_'):
                continue
            result[key] = self._to_plain(value)
        return result

    def _to_plain(self, value: Any) -> Any:
        if isinstance(value, dict):
            return self.to_record(value)
        if isinstance(value, (list, tuple)):
            return [self._to_plain(item) for item in value]
        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, np.generic):
            return value.item()
        if isinstance(value, Enum):
            return value.value
        return value
