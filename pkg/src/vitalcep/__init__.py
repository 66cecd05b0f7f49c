"""vitalcep: semantic event processing for vital-sign sensor streams."""

__version__ = "0.1.0"
