"""Exception types shared across the package."""


class CocloneError(Exception):
    """Base class for all library errors."""


class ArityOutOfRange(CocloneError):
    """An arity, function rank or size parameter is outside its supported range."""


class ArityMismatch(CocloneError):
    """Tuples or argument lists do not have the expected common length."""


class Underflow(CocloneError):
    """An operation would reduce a relation below arity 1."""


class SizeMismatch(CocloneError):
    """A permutation's size does not match the relation it is applied to."""


class UnboundVariable(CocloneError):
    """A formula body references a variable missing from the variable list."""


class KindMismatch(CocloneError):
    """Two fingerprints of different kind (total/partial) or rank were combined."""


class EmptyRelation(CocloneError):
    """The empty relation was passed where classification requires tuples."""


class FingerprintCollision(CocloneError):
    """Two catalog entries share a bounded-arity fingerprint; raise the rank."""


class ChainArityError(CocloneError):
    """A derivation chain's step indices are inconsistent with the running arity."""


class ParseError(CocloneError):
    """A relation/chain literal failed to parse.

    Carries the input text and the offset of the offending character.
    """

    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} (at position {pos}: {text[:pos]!r} >><< {text[pos:pos + 12]!r})"
        super().__init__(message)
