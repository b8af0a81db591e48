"""Exception types.  Input errors derive from ValueError; broken
mathematical invariants derive from InvariantViolation so callers (and the
CLI exit codes) can tell misuse from bugs."""


class K2Error(Exception):
    pass


class NotOddSquarefree(K2Error, ValueError):
    pass


class NonResidue(K2Error, ValueError):
    pass


class NotRepresented(K2Error, ValueError):
    pass


class DegenerateSymbol(K2Error, ValueError):
    pass


class InvalidDiscriminant(K2Error, ValueError):
    pass


class RangeExceeded(K2Error, OverflowError):
    pass


class SieveTooLarge(K2Error, MemoryError):
    pass


class InvariantViolation(K2Error, RuntimeError):
    pass


class PellFailure(InvariantViolation):
    pass


class ConsistencyViolation(InvariantViolation):
    pass


class TableViolation(InvariantViolation):
    def __init__(self, d: int, message: str):
        super().__init__(f"d={d}: {message}")
        self.d = d
