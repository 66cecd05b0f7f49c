"""Partitioned replicated pub-sub log simulator with fault injection."""

from .broker import (
    Broker,
    ConsumerPosition,
    Record,
    StreamBus,
    Topic,
    TopicError,
    UnavailableError,
)
from .sink import (
    CRASH_AFTER_WRITE,
    CRASH_BEFORE_WRITE,
    SinkCrash,
    SinkResult,
    sink_to_store,
)

__all__ = [
    "Broker",
    "CRASH_AFTER_WRITE",
    "CRASH_BEFORE_WRITE",
    "ConsumerPosition",
    "Record",
    "SinkCrash",
    "SinkResult",
    "StreamBus",
    "Topic",
    "TopicError",
    "UnavailableError",
    "sink_to_store",
]
