"""
Exceptions raised by the frame engine.

OutOfScope is deliberately not an exception: points outside the theorem's
region are a legitimate answer and travel as result values.
"""


class GaborError(Exception):
    """Base class for engine errors."""


class InvalidWindowError(GaborError, ValueError):
    """The window violates a piecewise-polynomial window invariant."""


class DomainError(GaborError, ValueError):
    """An operation was called outside its precondition."""


class ConstructionError(GaborError, RuntimeError):
    """Internal consistency failure while building or auditing a dual window."""
