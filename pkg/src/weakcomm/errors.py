"""Exception hierarchy shared by every module."""


class WeakCommError(Exception):
    pass


class StructuralError(WeakCommError, ValueError):
    """Mismatched degrees, out-of-range generator indices and similar."""


class ContainmentError(WeakCommError, ValueError):
    """An element was expected to lie in a group but does not."""


class PreconditionError(WeakCommError, ValueError):
    pass


class ResourceLimitError(WeakCommError, RuntimeError):
    """A configured cap (enumeration, cosets, relators) would be exceeded."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class TableStateError(WeakCommError, RuntimeError):
    pass


class ConsistencyError(WeakCommError, RuntimeError):
    """A construction produced an object violating its own invariants."""


class ParseError(WeakCommError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
