"""Exception classes for the polmorph toolkit."""

from typing import Any, Dict, Optional

from beartype import beartype


class PolmorphError(Exception):
    """Base exception for all polmorph errors."""

    @beartype
    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        """Initialize a polmorph error.

        Args:
            message: Human-readable error description
            code: Stable identifier of the failed precondition
            details: Extra data describing the offending input
        """
        super().__init__(message)
        self.message: str = message
        self.code: Optional[str] = code
        self.details: Optional[Dict[str, Any]] = details


class NonSquareError(PolmorphError):
    """Raised when an operation needs a square matrix."""

    @beartype
    def __init__(
        self,
        message: str = "Matrix is not square.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="NonSquare", details=details)


class SingularMatrixError(PolmorphError):
    """Raised when a matrix has zero determinant but must be invertible."""

    @beartype
    def __init__(
        self,
        message: str = "Matrix is singular.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="Singular", details=details)


class OrderTooLargeError(PolmorphError):
    """Raised when a coset enumeration would exceed the configured order cap."""

    @beartype
    def __init__(
        self,
        message: str = "Cokernel order exceeds the enumeration cap.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="OrderTooLarge", details=details)


class SizeMismatchError(PolmorphError):
    """Raised when matrix sizes disagree with the dimensions of the polarization types."""

    @beartype
    def __init__(
        self,
        message: str = "Matrix size does not match the polarization types.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="SizeMismatch", details=details)


class LengthMismatchError(PolmorphError):
    """Raised when two polarization types of different lengths are compared."""

    @beartype
    def __init__(
        self,
        message: str = "Polarization types have different lengths.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="LengthMismatch", details=details)


class DegenerateFormError(PolmorphError):
    """Raised when an alternating form is singular."""

    @beartype
    def __init__(
        self,
        message: str = "Alternating form is degenerate.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="Degenerate", details=details)


class NotAlternatingError(PolmorphError):
    """Raised when a matrix is not antisymmetric with zero diagonal."""

    @beartype
    def __init__(
        self,
        message: str = "Matrix is not alternating.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="NotAlternating", details=details)


class DimensionClashError(PolmorphError):
    """Raised when the isogeny part of a morphism type joins spaces of different dimension."""

    @beartype
    def __init__(
        self,
        message: str = "Source and target of the isogeny block have different dimensions.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="DimensionClash", details=details)


class NotTwoByTwoError(PolmorphError):
    """Raised when an elliptic operation receives a matrix that is not 2x2."""

    @beartype
    def __init__(
        self,
        message: str = "Elliptic operations need a 2x2 matrix.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="NotTwoByTwo", details=details)


class BadDivisorError(PolmorphError):
    """Raised when a Hecke degree does not fit the canonical form of the isogeny."""

    @beartype
    def __init__(
        self,
        message: str = "Degree does not satisfy the Hecke coprimality pattern.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="BadDivisor", details=details)


class NotSymplecticError(PolmorphError):
    """Raised when a witness matrix does not preserve its polarization form."""

    @beartype
    def __init__(
        self,
        message: str = "Matrix is not symplectic for the given polarization type.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="NotSymplectic", details=details)


class NotIntegralError(PolmorphError):
    """Raised when an integer matrix was expected but a denominator survived."""

    @beartype
    def __init__(
        self,
        message: str = "Matrix is not integral.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="NotIntegral", details=details)


class DegenerateRestrictionError(PolmorphError):
    """Raised when a polarization restricts to a singular form on a sublattice."""

    @beartype
    def __init__(
        self,
        message: str = "Polarization restricts to a degenerate form; input is inconsistent.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="DegenerateRestriction", details=details)


class InvalidSiegelPointError(PolmorphError):
    """Raised when a point is not in the Siegel upper half-space."""

    @beartype
    def __init__(
        self,
        message: str = "Point is not in the Siegel upper half-space.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="InvalidSiegelPoint", details=details)


class NearSingularBlockError(PolmorphError):
    """Raised when the normalising block of a period basis is numerically singular."""

    @beartype
    def __init__(
        self,
        message: str = "Right block of the period basis is numerically singular.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="NearSingularBlock", details=details)


class InvalidTypeError(PolmorphError):
    """Raised when a construction needs a valid type but the checker rejected it."""

    @beartype
    def __init__(
        self,
        message: str = "Type datum is not valid.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="InvalidType", details=details)


class DocumentError(PolmorphError):
    """Raised when an input document cannot be parsed."""

    @beartype
    def __init__(
        self,
        message: str = "Malformed input document.",
        details: Optional[Dict[str, Any]] = None
    ) -> None:
        super().__init__(message, code="MalformedDocument", details=details)
