"""Checkers for isogeny, embedding and morphism types, and the operations around them.

A type datum is a tuple of polarization types plus integer matrices written in
symplectic bases. The checkers here decide validity exactly and report the
kernel data computed on the way; they raise only when the input shapes do not
fit together.
"""

import logging
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

from beartype import beartype

from polmorph.exact_core import (
    Lattice,
    block_diagonal,
    cokernel,
    det,
    diagonal,
    integer_inverse,
    intersect_with_coordinate_block,
    matmul,
    project_to_block,
    rat_inverse,
    rat_matmul,
    rat_matrix_to_int,
    snf,
)
from polmorph.exceptions import (
    BadDivisorError,
    DimensionClashError,
    NotSymplecticError,
    NotTwoByTwoError,
    SingularMatrixError,
    SizeMismatchError,
)
from polmorph.schemas import (
    CheckReport,
    EmbeddingType,
    FiniteAbelianGroup,
    IntMatrix,
    IsogenyType,
    MorphismType,
    PolarizationType,
    RatMatrix,
)
from polmorph.symplectic import (
    gram_matrix,
    gram_pullback,
    is_symplectic,
    product_type,
    symplectic_inverse,
    type_divides,
)

logger = logging.getLogger(__name__)

# Stable failure identifiers carried by CheckReport.failures
GRAM_EQUATION = "gram_equation"
GRAM_PRODUCT = "gram_product"
SATURATION_X = "saturation_x"
SATURATION_XCOMP = "saturation_xcomp"
KERNEL_KILL = "kernel_kill"
INDUCED_INTEGRALITY = "induced_integrality"
TYPE_MISMATCH = "type_mismatch"

AnyType = Union[IsogenyType, EmbeddingType, MorphismType]


def _require_shape(m: IntMatrix, rows: int, cols: int, what: str) -> None:
    if m.shape != (rows, cols):
        raise SizeMismatchError(
            f"{what} must be {rows}x{cols}, got {m.rows}x{m.cols}",
            details={"matrix": what, "expected": (rows, cols), "shape": m.shape},
        )


def _dedupe(failures: Sequence[str]) -> Tuple[str, ...]:
    return tuple(dict.fromkeys(failures))


# -- isogenies ----------------------------------------------------------------

@beartype
def check_isogeny_type(d: PolarizationType, e: PolarizationType, m: IntMatrix) -> CheckReport:
    """Decide whether ``m`` is the type of an isogeny from type ``d`` to type ``e``.

    The condition is the exact Gram equation tm . E . m == D. The report carries
    the kernel F = Coker(m) whenever det m != 0 and always the signed determinant.

    Args:
        d: Polarization type of the source
        e: Polarization type of the target
        m: Rational representation, 2n x 2n

    Returns:
        CheckReport with failures drawn from gram_equation and type_mismatch

    Raises:
        SizeMismatchError: If d and e differ in dimension or m is not 2n x 2n
    """
    if d.dim != e.dim:
        raise SizeMismatchError(
            f"source type {d} and target type {e} have different dimensions",
            details={"d": list(d.divisors), "e": list(e.divisors)},
        )
    _require_shape(m, 2 * d.dim, 2 * d.dim, "isogeny matrix")
    failures = []
    if not type_divides(e, d):
        failures.append(TYPE_MISMATCH)
    if gram_pullback(m, gram_matrix(e)) != gram_matrix(d):
        failures.append(GRAM_EQUATION)
    determinant = det(m)
    kernel = cokernel(m) if determinant else None
    if not failures:
        assert abs(determinant) * e.degree == d.degree
    return CheckReport(
        valid=not failures,
        kernel=kernel,
        determinant=determinant,
        failures=_dedupe(failures),
    )


@beartype
def kernel_structure(m: IntMatrix) -> FiniteAbelianGroup:
    """The kernel F of the isogeny represented by ``m``, i.e. Coker(m).

    Raises:
        SingularMatrixError: If det m == 0
    """
    return cokernel(m)


@beartype
def standard_isogeny_matrix(d: PolarizationType) -> IntMatrix:
    """The matrix 1 x Delta = diag(1, ..., 1, d1, ..., dn).

    It is a valid isogeny type from ``d`` to the principal type of the same
    dimension, with kernel Z_{d1} x ... x Z_{dn}.
    """
    return diagonal((1,) * d.dim + d.divisors)


# -- embeddings ---------------------------------------------------------------

def _saturation_failures(m: IntMatrix, n: int) -> List[str]:
    # L = m^-1 Z^k must meet each coordinate block exactly in its integer points.
    k = m.rows
    lattice = Lattice.from_generators(rat_inverse(m))
    failures = []
    if intersect_with_coordinate_block(lattice, 0, 2 * n) != Lattice.coordinate_block(k, 0, 2 * n):
        failures.append(SATURATION_X)
    if intersect_with_coordinate_block(lattice, 2 * n, k) != Lattice.coordinate_block(k, 2 * n, k):
        failures.append(SATURATION_XCOMP)
    return failures


@beartype
def check_embedding_type(
    d: PolarizationType,
    d_comp: PolarizationType,
    e: PolarizationType,
    m: IntMatrix,
) -> CheckReport:
    """Decide whether ``m`` is the type of a sum of complementary embeddings.

    Two conditions are checked: the block Gram equation tm . E . m == D + D'
    (product ordering, X block first), and the saturation condition that
    L = m^-1 Z^k meets Q^{2n} x 0 in exactly Z^{2n} x 0 and 0 x Q^{2n'} in
    exactly 0 x Z^{2n'}. The second says that the kernel F of the sum map
    injects into both factors.

    Args:
        d: Type of the subvariety X
        d_comp: Type of the complement X'
        e: Type of the ambient variety
        m: Rational representation of the sum X x X' -> ambient

    Returns:
        CheckReport with failures drawn from gram_product, saturation_x,
        saturation_xcomp and type_mismatch

    Raises:
        SizeMismatchError: If the sizes disagree with the types
    """
    n, n_comp = d.dim, d_comp.dim
    if e.dim != n + n_comp:
        raise SizeMismatchError(
            f"ambient type {e} has dimension {e.dim}, expected {n + n_comp}",
            details={"d": list(d.divisors), "d_comp": list(d_comp.divisors), "e": list(e.divisors)},
        )
    size = 2 * e.dim
    _require_shape(m, size, size, "embedding matrix")
    failures = []
    if not type_divides(e, product_type(d, d_comp)):
        failures.append(TYPE_MISMATCH)
    expected = block_diagonal(gram_matrix(d), gram_matrix(d_comp))
    if gram_pullback(m, gram_matrix(e)) != expected:
        failures.append(GRAM_PRODUCT)
    determinant = det(m)
    kernel = None
    if determinant:
        kernel = cokernel(m)
        failures.extend(_saturation_failures(m, n))
    else:
        failures.extend([SATURATION_X, SATURATION_XCOMP])
    return CheckReport(
        valid=not failures,
        kernel=kernel,
        determinant=determinant,
        failures=_dedupe(failures),
    )


# -- morphisms ----------------------------------------------------------------

def _pad_isogeny(p: IntMatrix, rows: int, cols: int) -> IntMatrix:
    # The block matrix [[P, 0], [0, 0]] of the given size.
    out = [[0] * cols for _ in range(rows)]
    for i, row in enumerate(p.to_rows()):
        out[i][:len(row)] = row
    return IntMatrix.from_rows(out, cols=cols)


@beartype
def check_morphism_type(t: MorphismType) -> CheckReport:
    """Decide whether (delta, tau) is the type of a morphism.

    The five conditions are: M is an embedding type for (D, D', E), N is an
    embedding type for (H, H', K), P is an isogeny type for (D, H), P kills
    the kernel of the source sum map, and Q = N (P + 0) M^-1 is integral.

    The kernel-kill condition is decided as P . L_F in Z^{2m}, where L_F is
    the projection of M^-1 Z^{2(n+n')} onto the X block. When it holds the
    report also carries a witness (P_bar, R) with P = P_bar . R and
    Coker(R) isomorphic to F.

    Raises:
        SizeMismatchError: If a matrix does not fit its types
        DimensionClashError: If D and H have different lengths
    """
    d, d_comp, e, h, h_comp, k = t.delta
    m_mat, n_mat, p_mat = t.tau
    if d.dim != h.dim:
        raise DimensionClashError(details={"d": list(d.divisors), "h": list(h.divisors)})
    source = check_embedding_type(d, d_comp, e, m_mat)
    target = check_embedding_type(h, h_comp, k, n_mat)
    isogeny = check_isogeny_type(d, h, p_mat)
    failures = list(source.failures) + list(target.failures) + list(isogeny.failures)

    factorization = None
    induced = None
    if source.determinant:
        inverse = rat_inverse(m_mat)
        l_f = project_to_block(Lattice.from_generators(inverse), 0, 2 * d.dim)
        p_bar = rat_matmul(p_mat, l_f.basis)
        if p_bar.is_integral:
            # L_F contains Z^{2n}, so R = B_F^-1 = denominator * numerators^-1 is integral.
            inv_num = rat_inverse(l_f.numerators)
            r = RatMatrix(
                rows=inv_num.rows,
                cols=inv_num.cols,
                entries=tuple(x * l_f.denominator for x in inv_num.entries),
            )
            factorization = (rat_matrix_to_int(p_bar), rat_matrix_to_int(r))
        else:
            failures.append(KERNEL_KILL)
        q = rat_matmul(n_mat, _pad_isogeny(p_mat, n_mat.cols, m_mat.rows), inverse)
        if q.is_integral:
            induced = rat_matrix_to_int(q)
        else:
            failures.append(INDUCED_INTEGRALITY)
        if factorization is not None:
            assert induced is not None, "kernel kill holds but the induced matrix is not integral"
    else:
        failures.extend([KERNEL_KILL, INDUCED_INTEGRALITY])

    failures = _dedupe(failures)
    logger.debug("morphism type check: failures=%s", failures)
    return CheckReport(
        valid=not failures,
        kernel=source.kernel,
        target_kernel=target.kernel,
        determinant=source.determinant,
        induced_matrix=induced,
        factorization=factorization,
        failures=failures,
    )


# -- elliptic curves ------------------------------------------------------------

def _require_two_by_two(m: IntMatrix) -> None:
    if m.shape != (2, 2):
        raise NotTwoByTwoError(details={"shape": m.shape})


@beartype
def elliptic_canonical(m: IntMatrix) -> Tuple[int, int]:
    """Canonical diagonal (d1, d2) of a 2x2 isogeny matrix.

    These are the Smith invariants: d1 | d2 and d1 * d2 == |det m|. They are
    constant on GL(2, Z) x GL(2, Z) orbits.

    Raises:
        NotTwoByTwoError: If m is not 2x2
        SingularMatrixError: If det m == 0
    """
    _require_two_by_two(m)
    s, _, _ = snf(m)
    if s[1, 1] == 0:
        raise SingularMatrixError(details={"shape": m.shape})
    return s[0, 0], s[1, 1]


def _hecke_split(m: IntMatrix, p: int) -> Tuple[int, int, IntMatrix, IntMatrix]:
    _require_two_by_two(m)
    s, u, v = snf(m)
    d1, d2 = s[0, 0], s[1, 1]
    if d2 == 0:
        raise SingularMatrixError(details={"shape": m.shape})
    if p < 1 or d2 % p:
        raise BadDivisorError(f"{p} does not divide d2 = {d2}", details={"p": p, "d1": d1, "d2": d2})
    b = d2 // p
    if b % d1 or gcd(b, p) != 1:
        raise BadDivisorError(
            f"need d1 | d2/p and gcd(d2/p, p) = 1; got d1 = {d1}, d2/p = {b}, p = {p}",
            details={"p": p, "d1": d1, "d2": d2},
        )
    return d1, b, integer_inverse(u), integer_inverse(v)


@beartype
def hecke_factor(m: IntMatrix, p: int) -> Tuple[IntMatrix, IntMatrix]:
    """Factor an elliptic isogeny as X -u-> U -g-> Y with u of type (a, b) and g of type (1, p).

    With canonical form (a, b p), the admissible degrees p are those with
    a | b and gcd(b, p) = 1.

    Returns:
        (m_u, m_g) with m_g . m_u == m

    Raises:
        BadDivisorError: If p does not fit the canonical form of m
        SingularMatrixError: If det m == 0
        NotTwoByTwoError: If m is not 2x2
    """
    a, b, u_inv, v_inv = _hecke_split(m, p)
    m_g = matmul(u_inv, diagonal((1, p)))
    m_u = matmul(diagonal((a, b)), v_inv)
    assert matmul(m_g, m_u) == m
    return m_u, m_g


@beartype
def hecke_factor_reversed(m: IntMatrix, p: int) -> Tuple[IntMatrix, IntMatrix]:
    """The other side of the Hecke diagram: X -h-> V -v-> Y with h of type (1, p).

    Returns:
        (m_h, m_v) with m_v . m_h == m
    """
    a, b, u_inv, v_inv = _hecke_split(m, p)
    m_h = matmul(diagonal((1, p)), v_inv)
    m_v = matmul(u_inv, diagonal((a, b)))
    assert matmul(m_v, m_h) == m
    return m_h, m_v


# -- stabilizers and the symplectic action --------------------------------------

def _conjugate(m: IntMatrix, a: IntMatrix) -> Optional[IntMatrix]:
    b = rat_matmul(m, a, rat_inverse(m))
    return rat_matrix_to_int(b) if b.is_integral else None


@beartype
def is_in_stabilizer(a: IntMatrix, t: IsogenyType) -> Tuple[bool, Optional[IntMatrix]]:
    """Whether A in Sp(D, Z) is matched by some B in Sp(E, Z) with M A = B M.

    B is forced to be M A M^-1; the pair is accepted when that matrix is
    integral and symplectic for E.

    Returns:
        (True, B) on success, (False, None) otherwise

    Raises:
        SizeMismatchError: If a is not 2n x 2n
    """
    if not is_symplectic(a, t.source_type):
        return False, None
    b = _conjugate(t.matrix, a)
    if b is None or not is_symplectic(b, t.target_type):
        return False, None
    return True, b


@beartype
def is_in_embedding_stabilizer(
    a: IntMatrix, a_comp: IntMatrix, t: EmbeddingType
) -> Tuple[bool, Optional[IntMatrix]]:
    """Whether (A, A') in Sp(D) x Sp(D') is matched by B = M (A + A') M^-1 in Sp(E)."""
    if not is_symplectic(a, t.sub_type) or not is_symplectic(a_comp, t.complement_type):
        return False, None
    b = _conjugate(t.matrix, block_diagonal(a, a_comp))
    if b is None or not is_symplectic(b, t.ambient_type):
        return False, None
    return True, b


def _checked_inverse(a: IntMatrix, d: PolarizationType, slot: str) -> IntMatrix:
    try:
        return symplectic_inverse(a, d)
    except SizeMismatchError as e:
        raise NotSymplecticError(
            f"witness {slot} has the wrong size for type {d}", details={"slot": slot}
        ) from e
    except NotSymplecticError as e:
        raise NotSymplecticError(
            f"witness {slot} is not in Sp({d}, Z)", details={"slot": slot}
        ) from e


def _require_symplectic(a: IntMatrix, d: PolarizationType, slot: str) -> None:
    _checked_inverse(a, d, slot)


@beartype
def apply_equivalence(t: AnyType, witnesses: Sequence[IntMatrix]) -> AnyType:
    """Act on a type datum by symplectic changes of basis.

    Isogenies take witnesses (A, B) and M becomes B M A^-1. Embeddings take
    (A, A', B) and M becomes B M (A + A')^-1. Morphisms take
    (A, A', B, C, C', B_K) for the slots (D, D', E, H, H', K) and become
    (B M (A + A')^-1, B_K N (C + C')^-1, C P A^-1).

    Raises:
        NotSymplecticError: If a witness is not symplectic for its slot
        SizeMismatchError: If the number of witnesses is wrong for the kind
    """
    moved = _move(t, witnesses)
    before, after = _check(t), _check(moved)
    assert after.valid == before.valid, "symplectic change of basis changed the verdict"
    assert after.kernel == before.kernel, "symplectic change of basis changed the kernel"
    return moved


def _check(t: AnyType) -> CheckReport:
    if isinstance(t, IsogenyType):
        return check_isogeny_type(t.source_type, t.target_type, t.matrix)
    if isinstance(t, EmbeddingType):
        return check_embedding_type(t.sub_type, t.complement_type, t.ambient_type, t.matrix)
    return check_morphism_type(t)


def _move(t: AnyType, witnesses: Sequence[IntMatrix]) -> AnyType:
    if isinstance(t, IsogenyType):
        _require_count(witnesses, 2, "isogeny")
        a, b = witnesses
        a_inv = _checked_inverse(a, t.source_type, "A")
        _require_symplectic(b, t.target_type, "B")
        return t.model_copy(update={"matrix": matmul(b, t.matrix, a_inv)})
    if isinstance(t, EmbeddingType):
        _require_count(witnesses, 3, "embedding")
        a, a_comp, b = witnesses
        inv = block_diagonal(
            _checked_inverse(a, t.sub_type, "A"),
            _checked_inverse(a_comp, t.complement_type, "A'"),
        )
        _require_symplectic(b, t.ambient_type, "B")
        return t.model_copy(update={"matrix": matmul(b, t.matrix, inv)})
    _require_count(witnesses, 6, "morphism")
    a, a_comp, b, c, c_comp, b_k = witnesses
    d, d_comp, e, h, h_comp, k = t.delta
    m_mat, n_mat, p_mat = t.tau
    a_inv = _checked_inverse(a, d, "A")
    source_inv = block_diagonal(a_inv, _checked_inverse(a_comp, d_comp, "A'"))
    target_inv = block_diagonal(_checked_inverse(c, h, "C"), _checked_inverse(c_comp, h_comp, "C'"))
    _require_symplectic(b, e, "B")
    _require_symplectic(b_k, k, "B_K")
    tau = (
        matmul(b, m_mat, source_inv),
        matmul(b_k, n_mat, target_inv),
        matmul(c, p_mat, a_inv),
    )
    return t.model_copy(update={"tau": tau})


def _require_count(witnesses: Sequence[IntMatrix], expected: int, kind: str) -> None:
    if len(witnesses) != expected:
        raise SizeMismatchError(
            f"{kind} types take {expected} witnesses, got {len(witnesses)}",
            details={"kind": kind, "expected": expected, "got": len(witnesses)},
        )


@beartype
def elliptic_embedding_constraints(k: int) -> Dict[int, Tuple[int, ...]]:
    """Fixed first two columns of the reduced form of an elliptic curve of degree k
    in a principally polarized surface; the other two columns are free."""
    return {0: (0, 0, 1, 0), 1: (-k, 0, 0, 1)}
