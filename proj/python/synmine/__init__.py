"""Incremental discovery of sound free-choice workflow nets."""

from ._synmine import (
    EventLog,
    InconclusiveError,
    ParseError,
    StructureError,
    WorkflowNet,
    alignment_cost,
    discover,
    initial_net,
    read_log,
    read_pnml_string,
    score,
)

__all__ = [
    "EventLog",
    "InconclusiveError",
    "ParseError",
    "StructureError",
    "WorkflowNet",
    "alignment_cost",
    "discover",
    "initial_net",
    "read_log",
    "read_pnml_string",
    "score",
]
