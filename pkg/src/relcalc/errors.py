"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RelcalcError(Exception):
    """Base class for user-facing errors."""


class UnknownSymbol(RelcalcError):
    def __init__(self, name: str):
        super().__init__(f"unknown symbol {name!r}")
        self.name = name


class TypeMismatch(RelcalcError):
    def __init__(self, position, expected, found, note: str = ""):
        where = "/".join(getattr(p, "value", str(p)) for p in position) or "<root>"
        msg = f"type mismatch at {where}: expected {expected}, found {found}"
        if note:
            msg += f" ({note})"
        super().__init__(msg)
        self.position = tuple(position)
        self.expected = expected
        self.found = found


class ParseError(RelcalcError):
    def __init__(self, position: int, message: str):
        super().__init__(f"parse error at offset {position}: {message}")
        self.position = position
        self.message = message


class MissingBinding(RelcalcError):
    pass


class IllTyped(RelcalcError):
    pass


class StepMismatch(RelcalcError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class TypeDrift(RelcalcError):
    def __init__(self, index: int, before, after):
        super().__init__(f"step {index}: type changed from {before} to {after}")
        self.index = index


class InvalidInput(RelcalcError):
    pass


class BadCoarity(RelcalcError):
    pass


class BadType(RelcalcError):
    pass


class ScopeError(RelcalcError):
    pass


class PFLTypeError(RelcalcError):
    pass
