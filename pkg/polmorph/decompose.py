"""Poincare decomposition of a morphism of polarized abelian varieties.

Given the rational representation q of f: V -> W in symplectic bases, the
complementary pairs are recovered from lattices alone:

    X'  from the saturated kernel of q,
    X   from the orthogonal complement of X' under the form of V,
    Y   from the saturation of the image of q,
    Y'  from the orthogonal complement of Y under the form of W.
"""

import logging
from typing import Tuple

from beartype import beartype

from polmorph.exact_core import (
    block_diagonal,
    hstack,
    integer_kernel,
    matmul,
    rat_inverse,
    rat_matmul,
    rat_matrix_to_int,
    saturation,
    submatrix,
    transpose,
)
from polmorph.exceptions import DegenerateFormError, DegenerateRestrictionError, SizeMismatchError
from polmorph.schemas import IntMatrix, MorphismDecomposition, MorphismType, PolarizationType
from polmorph.symplectic import alternating_type, gram_matrix, gram_pullback

logger = logging.getLogger(__name__)


def _symplectic_basis(basis: IntMatrix, form: IntMatrix, label: str) -> Tuple[PolarizationType, IntMatrix, IntMatrix]:
    """Type of the restricted form, the basis change c and the symplectic basis basis . c."""
    restricted = gram_pullback(basis, form)
    try:
        pol_type, c = alternating_type(restricted)
    except DegenerateFormError as e:
        raise DegenerateRestrictionError(
            f"the polarization restricts to a degenerate form on {label}",
            details={"sublattice": label, "rank": basis.cols},
        ) from e
    return pol_type, c, matmul(basis, c)


@beartype
def decompose_morphism(e_amb: PolarizationType, k_amb: PolarizationType, q: IntMatrix) -> MorphismDecomposition:
    """Recover the type (delta, tau) of the morphism with rational representation ``q``.

    Args:
        e_amb: Polarization type E of the source V
        k_amb: Polarization type K of the target W
        q: Integer matrix of size 2 dim(W) x 2 dim(V)

    Returns:
        MorphismDecomposition holding the recovered type, the block basis
        changes from the saturated lattice bases to symplectic bases on V and
        on W, and whether tP . H . P == D

    Raises:
        SizeMismatchError: If q does not fit the two types
        DegenerateRestrictionError: If a restricted form is singular, which
            cannot happen for an actual morphism
    """
    if q.shape != (2 * k_amb.dim, 2 * e_amb.dim):
        raise SizeMismatchError(
            f"q must be {2 * k_amb.dim}x{2 * e_amb.dim}, got {q.rows}x{q.cols}",
            details={"shape": q.shape, "e": list(e_amb.divisors), "k": list(k_amb.divisors)},
        )
    e_form = gram_matrix(e_amb)
    k_form = gram_matrix(k_amb)

    lam_xcomp = integer_kernel(q)
    lam_x = integer_kernel(matmul(transpose(lam_xcomp), e_form))
    lam_y = saturation(q)
    lam_ycomp = integer_kernel(matmul(transpose(lam_y), k_form))
    logger.debug(
        "sublattice ranks: X=%d X'=%d Y=%d Y'=%d",
        lam_x.cols, lam_xcomp.cols, lam_y.cols, lam_ycomp.cols,
    )

    d, c_x, s_x = _symplectic_basis(lam_x, e_form, "X")
    d_comp, c_xcomp, s_xcomp = _symplectic_basis(lam_xcomp, e_form, "X'")
    h, c_y, s_y = _symplectic_basis(lam_y, k_form, "Y")
    h_comp, c_ycomp, s_ycomp = _symplectic_basis(lam_ycomp, k_form, "Y'")

    m_mat = hstack(s_x, s_xcomp)
    n_mat = hstack(s_y, s_ycomp)
    # q maps the X block into the span of S_Y, so N^-1 q S_X = [P; 0].
    image = rat_matrix_to_int(rat_matmul(rat_inverse(n_mat), q, s_x))
    p_mat = submatrix(image, 0, s_y.cols, 0, image.cols)

    compatible = p_mat.shape == (2 * h.dim, 2 * d.dim) and gram_pullback(p_mat, gram_matrix(h)) == gram_matrix(d)
    morphism_type = MorphismType(delta=(d, d_comp, e_amb, h, h_comp, k_amb), tau=(m_mat, n_mat, p_mat))
    logger.debug("decomposition types: D=%s D'=%s H=%s H'=%s compatible=%s", d, d_comp, h, h_comp, compatible)
    return MorphismDecomposition(
        morphism_type=morphism_type,
        basis_change=(block_diagonal(c_x, c_xcomp), block_diagonal(c_y, c_ycomp)),
        compatible=compatible,
    )
