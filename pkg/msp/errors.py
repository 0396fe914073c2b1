"""Exceptions raised by the MSP toolkit."""

from typing import Optional


class MSPError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class InvalidArgumentError(MSPError, ValueError):
    """A parameter violates its documented precondition."""


class IngestError(MSPError):
    """A sequence file or string could not be turned into reads."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class PartitionCapacityError(MSPError):
    """The mapper table for one partition outgrew the memory budget."""

    def __init__(self, partition_index: int, entries: int, limit: int):
        self.partition_index = partition_index
        self.entries = entries
        self.limit = limit
        super().__init__(
            f"partition {partition_index} holds more than {limit} distinct k-mers "
            f"({entries} seen); increase p or t, or raise --mem"
        )


class DataCorruptionError(MSPError):
    """On-disk artifacts contradict each other."""


class PhaseError(MSPError):
    """A pipeline phase failed or was run out of order."""

    def __init__(self, phase: str, message: str):
        self.phase = phase
        super().__init__(f"{phase} phase: {message}")
