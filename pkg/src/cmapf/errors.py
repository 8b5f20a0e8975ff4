"""Exception types shared across the package."""

from __future__ import annotations


class CmapfError(Exception):
    """Base class for all errors raised by cmapf."""


class NotACommEdge(CmapfError):
    pass


class ZeroAgents(CmapfError):
    pass


class AgentCountMismatch(CmapfError):
    pass


class NotSightMoveable(CmapfError):
    pass


class NotCompleteCommunication(CmapfError):
    pass


class NotNeighborCommunicable(CmapfError):
    pass


class BaseSelfLoopMissing(CmapfError):
    pass


class PreconditionViolated(CmapfError):
    pass


class DisconnectedGrid(CmapfError):
    pass


class BaseBlocked(CmapfError):
    pass


class Disconnected(CmapfError):
    pass


class MalformedModel(CmapfError):
    """A SAT model that violates the encoding's exactly-one constraints."""


class BudgetExhausted(CmapfError):
    """Search hit its state budget before deciding; the answer is unknown."""

    def __init__(self, states_explored: int):
        super().__init__(f"search budget exhausted after {states_explored} states")
        self.states_explored = states_explored


class ParseError(CmapfError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class RangeError(ParseError):
    pass


class DuplicateEdgeWarning(UserWarning):
    pass
