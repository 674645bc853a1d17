"""Exception hierarchy shared by all qforge modules."""


class QForgeError(Exception):
    """Base class for all qforge errors."""


class NonUnitInverse(QForgeError):
    """Inversion requested for a scalar that is not a single nonzero term."""


class ZeroBase(QForgeError):
    """Specialization at s = 0 is undefined for Laurent polynomials."""


class DivisionFailure(QForgeError):
    """Exact division in the Laurent ring left a nonzero remainder."""


class DimensionMismatch(QForgeError):
    """Tensor-space dimensions of the operands disagree."""


class BadPositions(QForgeError):
    """Embedding positions are not strictly increasing or out of range."""


class NonLaurentInverse(QForgeError):
    """Matrix inverse has an entry outside the Laurent ring."""


class UnknownGenerator(QForgeError):
    """A word mentions a generator the rewrite system does not know."""


class ShapeMismatch(QForgeError):
    """Operator-matrix shapes are not conformable."""


class NonOrientable(QForgeError):
    """A relation's leading coefficient is not a unit monomial."""


class NameClash(QForgeError):
    """Two combined presentations share a generator name."""


class MissingConjugate(QForgeError):
    """Conjugation requested but a generator has no conjugate partner."""


class NotHecke(QForgeError):
    """Operation requires a Hecke-type braid matrix."""


class NotProportional(QForgeError):
    """A matrix expected to be proportional to the antisymmetrizer is not."""


class TooLarge(QForgeError):
    """Combinatorial guard tripped (factorial blow-up)."""


class VerificationFailed(QForgeError):
    """A constructive identity check failed during construction."""


class UnknownSuite(QForgeError):
    """CLI asked to run a suite that does not exist."""


class UnknownAlgebra(QForgeError):
    """CLI asked for an algebra presentation that does not exist."""


class ParseError(QForgeError):
    """Malformed textual input (scalar, polynomial, or exchange format)."""
