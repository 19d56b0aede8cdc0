"""Library exceptions. Every error named by an operation has its own class."""


class DoubleError(Exception):
    """Base class for every library failure."""


# --- algebra kernel ---
class NotAssociative(DoubleError):
    """Structure constants violate associativity beyond tolerance."""


class NoUnit(DoubleError):
    """The unit equations have no solution."""


class SplitFailed(DoubleError):
    """Minimal idempotents could not be separated within tolerance."""


# --- input ---
class ParseError(DoubleError):
    """Input file is not readable JSON."""


class SchemaError(DoubleError):
    """Input file violates the schema or the unit constraints."""


class ZeroDimension(DoubleError):
    """Global dimension vanishes."""


class InvalidGroup(DoubleError):
    """Multiplication table does not define a group."""


class NotAGroupCategory(DoubleError):
    """A category was expected to be Vec_G for a given group and is not."""


# --- morphisms ---
class ShapeMismatch(DoubleError):
    """Domain/codomain words or block shapes do not match."""


class WordTooLong(DoubleError):
    """A tensor word would exceed three letters."""


class SingularF(DoubleError):
    """An F-block is not invertible."""


class DegenerateBasis(DoubleError):
    """A family of intertwiners is linearly dependent."""


# --- tube algebra and center ---
class NotInXi0(DoubleError):
    """Element has components with i != k."""


class BranchAmbiguous(DoubleError):
    """No square root of φ(z) yields integer multiplicities."""


class ZeroIdempotent(DoubleError):
    """Idempotent has no component above the threshold."""


class NotProportional(DoubleError):
    """Element is not a multiple of the expected idempotent."""


class ConjugationUnresolved(DoubleError):
    """S² of an idempotent does not match any idempotent."""


class NonIntegerFusion(DoubleError):
    """Verlinde coefficients are not non-negative integers."""


class NotIdempotent(DoubleError):
    """Element built from a half-braiding is not idempotent."""


class HexagonFailed(DoubleError):
    """R-symbols violate the hexagon equations."""


class NoMatching(DoubleError):
    """No bijection between Hopf irreps and tube simples matches the data."""
