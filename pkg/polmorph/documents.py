"""JSON documents for type data, Siegel points and check reports.

Integers travel as decimal strings so that entries of any size survive the
round trip; complex numbers travel as [re, im] pairs of doubles.
"""

import sys
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar

from beartype import beartype
from pydantic import BaseModel, ConfigDict, Field, StringConstraints, ValidationError
from typing_extensions import Annotated

from polmorph.exceptions import DocumentError
from polmorph.schemas import (
    CheckReport,
    EmbeddingType,
    FiniteAbelianGroup,
    IntMatrix,
    IsogenyType,
    MorphismDecomposition,
    MorphismType,
    PolarizationType,
    RealizedMorphism,
    SiegelPoint,
)

# Decimal entries have no length cap
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

DecimalString = Annotated[str, StringConstraints(pattern=r"^-?[0-9]+$")]
ComplexPair = Tuple[float, float]
Kind = Literal["isogeny", "embedding", "morphism"]

# Slot names of the polarization types and matrices for each kind of datum
POLARIZATION_SLOTS: Dict[str, Tuple[str, ...]] = {
    "isogeny": ("D", "E"),
    "embedding": ("D", "D_comp", "E"),
    "morphism": ("D", "D_comp", "E", "H", "H_comp", "K"),
}
MATRIX_SLOTS: Dict[str, Tuple[str, ...]] = {
    "isogeny": ("M",),
    "embedding": ("M",),
    "morphism": ("M", "N", "P"),
}

T = TypeVar("T", bound=BaseModel)


class TypeDocument(BaseModel):
    """Input and output document of the command line."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Optional[Kind] = Field(None, description="Kind of type datum, if the document holds one")
    polarizations: Dict[str, List[DecimalString]] = Field(
        default_factory=dict, description="Divisor chains by slot name (D, D_comp, E, H, H_comp, K)"
    )
    matrices: Dict[str, List[List[DecimalString]]] = Field(
        default_factory=dict, description="Integer matrices by name, as rows of decimal strings"
    )
    siegel_points: Dict[str, List[List[ComplexPair]]] = Field(
        default_factory=dict, description="Complex matrices by name, entries as [re, im]"
    )
    parameters: Dict[str, DecimalString] = Field(
        default_factory=dict, description="Named integer parameters such as the Hecke degree p"
    )
    constraints: Dict[str, List[DecimalString]] = Field(
        default_factory=dict, description="Prescribed matrix columns, keyed by column index"
    )

    def _lookup(self, table: Dict[str, Any], name: str, what: str) -> Any:
        if name not in table:
            raise DocumentError(f"missing {what} '{name}'", details={"name": name})
        return table[name]

    @beartype
    def polarization(self, name: str) -> PolarizationType:
        chain = self._lookup(self.polarizations, name, "polarization")
        return _validated(PolarizationType, {"divisors": [int(x) for x in chain]}, f"polarization {name}")

    @beartype
    def matrix(self, name: str) -> IntMatrix:
        rows = self._lookup(self.matrices, name, "matrix")
        try:
            return IntMatrix.from_rows([[int(x) for x in row] for row in rows])
        except ValueError as e:
            raise DocumentError(f"matrix {name}: {e}", details={"name": name}) from e

    @beartype
    def siegel_point(self, name: str) -> SiegelPoint:
        rows = self._lookup(self.siegel_points, name, "Siegel point")
        if not rows:
            return SiegelPoint(dim=0)
        try:
            return SiegelPoint.from_matrix([[complex(re, im) for re, im in row] for row in rows])
        except ValueError as e:
            raise DocumentError(f"Siegel point {name}: {e}", details={"name": name}) from e

    @beartype
    def parameter(self, name: str) -> int:
        return int(self._lookup(self.parameters, name, "parameter"))

    @beartype
    def column_constraints(self) -> Dict[int, Tuple[int, ...]]:
        try:
            return {int(k): tuple(int(x) for x in col) for k, col in self.constraints.items()}
        except ValueError as e:
            raise DocumentError(f"constraint keys must be column indices: {e}") from e

    def _require_kind(self, kind: str) -> None:
        if self.kind is not None and self.kind != kind:
            raise DocumentError(f"expected a document of kind {kind}, got {self.kind}", details={"kind": self.kind})

    @beartype
    def isogeny_type(self) -> IsogenyType:
        self._require_kind("isogeny")
        return IsogenyType(source_type=self.polarization("D"), target_type=self.polarization("E"), matrix=self.matrix("M"))

    @beartype
    def embedding_type(self) -> EmbeddingType:
        self._require_kind("embedding")
        return EmbeddingType(
            sub_type=self.polarization("D"),
            complement_type=self.polarization("D_comp"),
            ambient_type=self.polarization("E"),
            matrix=self.matrix("M"),
        )

    @beartype
    def morphism_type(self) -> MorphismType:
        self._require_kind("morphism")
        delta = tuple(self.polarization(slot) for slot in POLARIZATION_SLOTS["morphism"])
        tau = tuple(self.matrix(slot) for slot in MATRIX_SLOTS["morphism"])
        return MorphismType(delta=delta, tau=tau)


def _validated(model: Type[T], data: Dict[str, Any], what: str) -> T:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise DocumentError(f"invalid {what}: {e}", details={"errors": e.errors(include_url=False)}) from e


@beartype
def load_document(text: str) -> TypeDocument:
    """Parse a JSON document.

    Raises:
        DocumentError: If the text is not a well-formed TypeDocument
    """
    try:
        return TypeDocument.model_validate_json(text)
    except ValidationError as e:
        raise DocumentError(f"malformed document: {e}", details={"errors": e.errors(include_url=False)}) from e


@beartype
def dump_document(doc: TypeDocument) -> str:
    return doc.model_dump_json(indent=2)


# -- encoders -------------------------------------------------------------------

@beartype
def encode_int(x: int) -> str:
    return str(x)


@beartype
def encode_matrix(m: IntMatrix) -> List[List[str]]:
    return [[str(x) for x in row] for row in m.to_rows()]


@beartype
def encode_polarization(d: PolarizationType) -> List[str]:
    return [str(x) for x in d.divisors]


@beartype
def encode_group(g: FiniteAbelianGroup) -> List[str]:
    return [str(f) for f in g.invariant_factors]


@beartype
def encode_siegel_point(z: SiegelPoint) -> List[List[List[float]]]:
    n = z.dim
    return [[[z.real[i * n + j], z.imag[i * n + j]] for j in range(n)] for i in range(n)]


@beartype
def encode_report(report: CheckReport) -> Dict[str, Any]:
    """JSON form of a check report; absent data is null."""
    return {
        "valid": report.valid,
        "failures": list(report.failures),
        "kernel": encode_group(report.kernel) if report.kernel is not None else None,
        "target_kernel": encode_group(report.target_kernel) if report.target_kernel is not None else None,
        "determinant": encode_int(report.determinant) if report.determinant is not None else None,
        "induced_matrix": encode_matrix(report.induced_matrix) if report.induced_matrix is not None else None,
        "factorization": (
            [encode_matrix(m) for m in report.factorization] if report.factorization is not None else None
        ),
    }


@beartype
def morphism_document(t: MorphismType) -> TypeDocument:
    """A morphism type as a document of kind ``morphism``."""
    return TypeDocument(
        kind="morphism",
        polarizations={
            slot: encode_polarization(d) for slot, d in zip(POLARIZATION_SLOTS["morphism"], t.delta)
        },
        matrices={slot: encode_matrix(m) for slot, m in zip(MATRIX_SLOTS["morphism"], t.tau)},
    )


@beartype
def encode_decomposition(result: MorphismDecomposition) -> Dict[str, Any]:
    return {
        "compatible": result.compatible,
        "type": morphism_document(result.morphism_type).model_dump(mode="json"),
        "basis_change": [encode_matrix(m) for m in result.basis_change],
    }


@beartype
def encode_realized_morphism(result: RealizedMorphism) -> Dict[str, Any]:
    return {
        "siegel_points": {
            "Z_V": encode_siegel_point(result.z_v),
            "Z_W": encode_siegel_point(result.z_w),
            "Z_Y": encode_siegel_point(result.z_y),
        },
        "matrices": {"Q": encode_matrix(result.q)},
    }
