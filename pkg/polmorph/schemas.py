"""Pydantic schemas for the discrete and numeric data of polmorph."""

from fractions import Fraction
from math import prod
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from beartype import beartype
from pydantic import BaseModel, ConfigDict, Field, StrictInt, field_validator, model_validator
from typing_extensions import Self


class IntMatrix(BaseModel):
    """An arbitrary-precision integer matrix stored in row-major order."""

    model_config = ConfigDict(frozen=True)

    rows: int = Field(..., ge=0, description="Number of rows")
    cols: int = Field(..., ge=0, description="Number of columns")
    entries: Tuple[StrictInt, ...] = Field(default=(), description="Entries in row-major order")

    @model_validator(mode="after")
    def _check_entry_count(self) -> Self:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        """Build a matrix from a list of rows.

        Args:
            rows: The rows of the matrix
            cols: Column count, required only when there are no rows

        Returns:
            The matrix
        """
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else (cols or 0)
        if any(len(row) != n_cols for row in rows):
            raise ValueError("rows have different lengths")
        return cls(rows=n_rows, cols=n_cols, entries=tuple(int(x) for row in rows for x in row))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        """Return a fresh list-of-rows copy of the matrix."""
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def __str__(self) -> str:
        return str(self.to_rows())


class RatMatrix(BaseModel):
    """An exact rational matrix; entries are fractions in lowest terms."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: int = Field(..., ge=0, description="Number of rows")
    cols: int = Field(..., ge=0, description="Number of columns")
    entries: Tuple[Fraction, ...] = Field(default=(), description="Entries in row-major order")

    @field_validator("entries", mode="before")
    @classmethod
    def _coerce_fractions(cls, value: Any) -> Any:
        # Fraction normalises to lowest terms with a positive denominator.
        return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in value)

    @model_validator(mode="after")
    def _check_entry_count(self) -> Self:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> "RatMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else (cols or 0)
        if any(len(row) != n_cols for row in rows):
            raise ValueError("rows have different lengths")
        return cls(rows=n_rows, cols=n_cols, entries=tuple(Fraction(x) for row in rows for x in row))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)


class FiniteAbelianGroup(BaseModel):
    """A finite abelian group in invariant-factor form f1 | f2 | ... | fk."""

    model_config = ConfigDict(frozen=True)

    invariant_factors: Tuple[StrictInt, ...] = Field(
        default=(), description="Invariant factors, each at least 2 and dividing the next"
    )

    @field_validator("invariant_factors")
    @classmethod
    def _check_chain(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        for f in value:
            if f < 2:
                raise ValueError(f"invariant factors must be at least 2, got {f}")
        for a, b in zip(value, value[1:]):
            if b % a:
                raise ValueError(f"invariant factor {a} does not divide {b}")
        return value

    @classmethod
    def from_diagonal(cls, diagonal: Sequence[int]) -> "FiniteAbelianGroup":
        """Build the group Z/s1 x Z/s2 x ... from a Smith diagonal, dropping units."""
        if any(s == 0 for s in diagonal):
            raise ValueError("a zero diagonal entry gives an infinite group")
        return cls(invariant_factors=tuple(abs(s) for s in diagonal if abs(s) != 1))

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        return " x ".join(f"Z{f}" for f in self.invariant_factors)


class PolarizationType(BaseModel):
    """A polarization type D = (d1, ..., dn) with d_i | d_{i+1}; n is part of the datum."""

    model_config = ConfigDict(frozen=True)

    divisors: Tuple[StrictInt, ...] = Field(default=(), description="Elementary divisors d1 | d2 | ... | dn")

    @field_validator("divisors")
    @classmethod
    def _check_chain(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        for d in value:
            if d < 1:
                raise ValueError(f"divisors must be positive, got {d}")
        for a, b in zip(value, value[1:]):
            if b % a:
                raise ValueError(f"divisor {a} does not divide {b}")
        return value

    @classmethod
    @beartype
    def of(cls, *divisors: int) -> "PolarizationType":
        """Shorthand constructor, e.g. ``PolarizationType.of(1, 2)``."""
        return cls(divisors=divisors)

    @classmethod
    @beartype
    def principal(cls, n: int) -> "PolarizationType":
        return cls(divisors=(1,) * n)

    @property
    def dim(self) -> int:
        return len(self.divisors)

    @property
    def degree(self) -> int:
        return prod(self.divisors)

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.divisors) + ")"


class GramForm(BaseModel):
    """The alternating Gram matrix of a polarization in a symplectic basis."""

    model_config = ConfigDict(frozen=True)

    matrix: IntMatrix = Field(..., description="The 2n x 2n alternating matrix")

    @field_validator("matrix")
    @classmethod
    def _check_alternating(cls, value: IntMatrix) -> IntMatrix:
        if not value.is_square or value.rows % 2:
            raise ValueError("Gram matrix must be square of even size")
        for i in range(value.rows):
            if value[i, i]:
                raise ValueError("Gram matrix must have zero diagonal")
            for j in range(i + 1, value.rows):
                if value[i, j] != -value[j, i]:
                    raise ValueError("Gram matrix must be antisymmetric")
        return value


class IsogenyType(BaseModel):
    """The datum (delta, M) of an isogeny relative to symplectic bases."""

    model_config = ConfigDict(frozen=True)

    source_type: PolarizationType = Field(..., description="Polarization type D of the source")
    target_type: PolarizationType = Field(..., description="Polarization type E of the target")
    matrix: IntMatrix = Field(..., description="Rational representation M, 2n x 2n")


class EmbeddingType(BaseModel):
    """The datum (delta, M) of an embedding given as a sum of complementary embeddings."""

    model_config = ConfigDict(frozen=True)

    sub_type: PolarizationType = Field(..., description="Polarization type D of the subvariety X")
    complement_type: PolarizationType = Field(..., description="Polarization type D' of the complement X'")
    ambient_type: PolarizationType = Field(..., description="Polarization type E of the ambient variety")
    matrix: IntMatrix = Field(..., description="Rational representation M of the sum X x X' -> ambient")


class MorphismType(BaseModel):
    """The datum (delta, tau) of a morphism through its Poincare decomposition."""

    model_config = ConfigDict(frozen=True)

    delta: Tuple[
        PolarizationType, PolarizationType, PolarizationType,
        PolarizationType, PolarizationType, PolarizationType,
    ] = Field(..., description="Polarization types (D, D', E, H, H', K)")
    tau: Tuple[IntMatrix, IntMatrix, IntMatrix] = Field(..., description="Matrices (M, N, P)")

    @property
    def source_embedding(self) -> EmbeddingType:
        d, d_comp, e = self.delta[:3]
        return EmbeddingType(sub_type=d, complement_type=d_comp, ambient_type=e, matrix=self.tau[0])

    @property
    def target_embedding(self) -> EmbeddingType:
        h, h_comp, k = self.delta[3:]
        return EmbeddingType(sub_type=h, complement_type=h_comp, ambient_type=k, matrix=self.tau[1])

    @property
    def isogeny(self) -> IsogenyType:
        return IsogenyType(source_type=self.delta[0], target_type=self.delta[3], matrix=self.tau[2])


class CheckReport(BaseModel):
    """Verdict of a type checker with the kernel data it computed on the way."""

    model_config = ConfigDict(frozen=True)

    valid: bool = Field(..., description="Whether every condition holds")
    kernel: Optional[FiniteAbelianGroup] = Field(None, description="Cokernel F of M (kernel of the isogeny)")
    target_kernel: Optional[FiniteAbelianGroup] = Field(None, description="Cokernel G of N, morphism types only")
    determinant: Optional[int] = Field(None, description="Determinant of M, sign included")
    induced_matrix: Optional[IntMatrix] = Field(None, description="Q = N (P+0) M^-1 when integral")
    factorization: Optional[Tuple[IntMatrix, IntMatrix]] = Field(
        None, description="Witness (P_bar, R) with P = P_bar R and Coker(R) = F"
    )
    failures: Tuple[str, ...] = Field(default=(), description="Identifiers of the failed conditions")

    @model_validator(mode="after")
    def _valid_iff_no_failures(self) -> Self:
        if self.valid == bool(self.failures):
            raise ValueError("a report is valid exactly when it lists no failures")
        return self


class MorphismDecomposition(BaseModel):
    """Output of the computational Poincare decomposition of a morphism."""

    model_config = ConfigDict(frozen=True)

    morphism_type: MorphismType = Field(..., description="Recovered datum (delta, tau)")
    basis_change: Tuple[IntMatrix, IntMatrix] = Field(
        ..., description="Block unimodular changes from saturated bases to symplectic bases on V and W"
    )
    compatible: bool = Field(..., description="Whether the middle isogeny preserves the polarizations")


class SiegelPoint(BaseModel):
    """A point Z of the Siegel upper half-space, stored as real and imaginary parts."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., ge=0, description="Genus n")
    real: Tuple[float, ...] = Field(default=(), description="Re Z, row-major n x n")
    imag: Tuple[float, ...] = Field(default=(), description="Im Z, row-major n x n")

    @model_validator(mode="after")
    def _check_sizes(self) -> Self:
        if len(self.real) != self.dim ** 2 or len(self.imag) != self.dim ** 2:
            raise ValueError(f"a genus-{self.dim} Siegel point needs {self.dim ** 2} entries per part")
        return self

    @classmethod
    def from_matrix(cls, z: Any) -> "SiegelPoint":
        arr = np.asarray(z, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("Siegel point must be a square matrix")
        return cls(
            dim=arr.shape[0],
            real=tuple(arr.real.ravel().tolist()),
            imag=tuple(arr.imag.ravel().tolist()),
        )

    def matrix(self) -> np.ndarray:
        n = self.dim
        z = np.array(self.real, dtype=float) + 1j * np.array(self.imag, dtype=float)
        return z.reshape((n, n))


class PeriodBasis(BaseModel):
    """A lattice basis of C^n as the 2n columns of an n x 2n complex matrix."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., ge=0, description="Complex dimension n")
    real: Tuple[float, ...] = Field(default=(), description="Real parts, row-major n x 2n")
    imag: Tuple[float, ...] = Field(default=(), description="Imaginary parts, row-major n x 2n")
    pol_type: PolarizationType = Field(..., description="Type whose Gram matrix the basis is symplectic for")

    @model_validator(mode="after")
    def _check_sizes(self) -> Self:
        expected = 2 * self.dim ** 2
        if len(self.real) != expected or len(self.imag) != expected:
            raise ValueError(f"a dimension-{self.dim} period basis needs {expected} entries per part")
        if self.pol_type.dim != self.dim:
            raise ValueError("polarization type dimension differs from the period basis dimension")
        return self

    @classmethod
    def from_matrix(cls, columns: Any, pol_type: PolarizationType) -> "PeriodBasis":
        arr = np.asarray(columns, dtype=complex)
        n = arr.shape[0]
        if arr.shape != (n, 2 * n):
            raise ValueError("period basis must be an n x 2n matrix")
        return cls(
            dim=n,
            real=tuple(arr.real.ravel().tolist()),
            imag=tuple(arr.imag.ravel().tolist()),
            pol_type=pol_type,
        )

    def matrix(self) -> np.ndarray:
        n = self.dim
        cols = np.array(self.real, dtype=float) + 1j * np.array(self.imag, dtype=float)
        return cols.reshape((n, 2 * n))


class RealizedMorphism(BaseModel):
    """Siegel points of source and target produced from the pieces of a morphism type."""

    model_config = ConfigDict(frozen=True)

    z_v: SiegelPoint = Field(..., description="Point of the source V with type E")
    z_w: SiegelPoint = Field(..., description="Point of the target W with type K")
    q: IntMatrix = Field(..., description="Rational representation of f: V -> W")
    z_y: SiegelPoint = Field(..., description="Point of the image Y with type H")
