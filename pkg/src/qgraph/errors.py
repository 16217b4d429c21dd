class QGraphError(Exception):
    """Base class for library errors."""


class NotRegularError(QGraphError):
    """Raised when an operation needs a regular graph (alpha < 1, gamma = 1/2)."""


class NumericalFailure(QGraphError):
    """A bracket without a sign change, or a root outside its zone."""


class EnumerationCapError(QGraphError, ValueError):
    """Direct orbit enumeration requested beyond the configured length cap."""
