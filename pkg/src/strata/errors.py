"""Exception hierarchy.

Everything the toolkit can signal derives from ``StrataError`` so callers
can catch a single type at the boundary (the CLI maps subtypes to exit
codes, the HTTP service maps them to statuses).
"""

from __future__ import annotations


class StrataError(Exception):
    """Base class for all toolkit errors."""


class DatasetSyntaxError(StrataError):
    """The dataset document text is not well-formed."""


class SchemaError(StrataError):
    """A document field is missing, unknown, or mistyped. Carries the path."""

    def __init__(self, message: str, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(StrataError):
    """Dataset invariants are violated. Carries the violation records."""

    def __init__(self, violations) -> None:
        summary = "; ".join(str(v) for v in violations)
        super().__init__(f"dataset failed validation: {summary}")
        self.violations = list(violations)


class LimitError(StrataError):
    """A generation request exceeds the configured size cap."""


class SpecError(StrataError):
    """Hierarchy constraints contradict each other on this dataset."""


class CycleError(StrataError):
    """Generational edges form a cycle. ``cycle`` holds one offending loop."""

    def __init__(self, cycle) -> None:
        super().__init__("generational cycle: " + " -> ".join(cycle))
        self.cycle = list(cycle)


class ConfigError(StrataError):
    """Layout configuration is inconsistent or incomplete."""


class NumericalError(StrataError):
    """The simulation produced a non-finite coordinate."""

    def __init__(self, tick: int, node_id: str) -> None:
        super().__init__(f"non-finite coordinate at tick {tick} for node {node_id!r}")
        self.tick = tick
        self.node_id = node_id


class UnknownNodeError(StrataError):
    """A person id does not exist in the dataset."""


class TraceMissingError(StrataError):
    """The layout was produced without trace recording."""
