"""Exception hierarchy.

User-input problems (bad polynomials, rejected rings, unusable windows)
are distinguished from internal invariant breaches so the CLI can map
them to different exit codes.
"""


class CrdiamError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CrdiamError):
    """Malformed polynomial text, job specification, or report document."""


class RingRejected(CrdiamError):
    """Base class for rings the constructor refuses to build."""


class NonHomogeneous(RingRejected):
    """A defining generator is not homogeneous (or has degree < 1)."""


class NotArtinian(RingRejected):
    """The quotient has an infinite monomial basis."""


class NotRegularSequence(RingRejected):
    """The defining generators fail the complete-intersection length test."""


class NotInIdeal(CrdiamError):
    """express_in_ideal was called on an element with nonzero normal form."""


class RingMismatch(CrdiamError):
    """Two objects over different quotient rings were combined."""


class TooNarrow(CrdiamError):
    """The window is too small for the requested analyzer."""


class OutOfWindow(CrdiamError):
    """A degree outside the stored window was requested."""


class InternalInvariantError(CrdiamError):
    """A mathematically impossible state; indicates a bug, not bad input."""


class DivisionFailure(InternalInvariantError):
    """A lifted differential square had an entry outside the defining ideal."""


class SpliceFailure(InternalInvariantError):
    """The complete-resolution junction system was unsolvable."""
