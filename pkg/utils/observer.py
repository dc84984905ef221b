"""
Observer Pattern Module.

This module lets batch components publish progress events (`entry_started`,
`entry_completed`, `entry_failed`) without knowing who listens.
"""
import logging
import threading
from abc import ABC, abstractmethod
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class Observer(ABC):
    """Receives pipeline events from a Subject."""

    @abstractmethod
    def update(self, subject: 'Subject', event_type: str, data: Dict[str, Any]) -> None:
        """
        Handle one event.

        Args:
            subject: The publisher
            event_type: Event name, e.g. "entry_failed"
            data: Event payload; always carries subject_id and task for entry events
        """


class Subject:
    """
    Publisher side of the pattern.

    Observers are called in attachment order, one event at a time, so an
    observer may keep unsynchronised state even when workers publish in parallel.
    """

    def __init__(self):
        self._observers: List[Observer] = []
        self._lock = threading.Lock()

    def attach(self, observer: Observer) -> None:
        with self._lock:
            if observer not in self._observers:
                self._observers.append(observer)
        logger.debug(f"{observer.__class__.__name__} listening to {self.__class__.__name__}")

    def notify(self, event_type: str, data: Dict[str, Any]) -> None:
        """Deliver an event to every attached observer."""
        with self._lock:
            for observer in list(self._observers):
                observer.update(self, event_type, data)


class ProgressLogObserver(Observer):
    """
    Concrete observer that reports pipeline progress through logging.

    Keeps per-event counts so callers can summarise a batch run.
    """

    def __init__(self):
        """Initialize the observer with empty counters."""
        self._counts: Dict[str, int] = {}
        self._failures: List[Dict[str, Any]] = []

    def update(self, subject: Subject, event_type: str, data: Dict[str, Any]) -> None:
        """
        Record and log a pipeline event.

        Args:
            subject: The subject that triggered the update
            event_type: The type of event that occurred
            data: Additional data about the event
        """
        self._counts[event_type] = self._counts.get(event_type, 0) + 1
        label = f"{data.get('subject_id', '?')}/{data.get('task', '?')}"

        if event_type == "entry_started":
            logger.info(f"Processing {label}")
        elif event_type == "entry_completed":
            logger.info(f"Finished {label}: {data.get('rows', 0)} feature rows")
        elif event_type == "entry_failed":
            self._failures.append(data)
            logger.warning(f"Failed {label}: {data.get('error', 'unknown error')}")
        else:
            logger.debug(f"Pipeline event {event_type} for {label}")

    def get_event_count(self, event_type: str) -> int:
        """
        Get the count of a specific event type.

        Args:
            event_type: The type of event to count

        Returns:
            Number of events of that type seen so far
        """
        return self._counts.get(event_type, 0)

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return list(self._failures)
