"""Floating-point Siegel-space layer.

Lattice bases are columns of an n x 2n complex matrix. A basis is normalised
by the unique element of GL(n, C) that turns its right block into
Delta = diag(d); the left block is then the Siegel coordinate Z. Acting with
an integer matrix M on a basis means new column j = sum_i lambda_i M_ij.

All classification decisions are made exactly elsewhere; this module only
produces and checks numerical witnesses.
"""

import logging

import numpy as np
from beartype import beartype

from polmorph._config import DEFAULT_MAX_CONDITION, DEFAULT_TOL
from polmorph.exact_core import AnyMatrix, rat_inverse
from polmorph.exceptions import (
    InvalidSiegelPointError,
    InvalidTypeError,
    NearSingularBlockError,
    NotSymplecticError,
    SizeMismatchError,
)
from polmorph.morphism_types import check_embedding_type, check_isogeny_type, check_morphism_type
from polmorph.schemas import (
    EmbeddingType,
    IntMatrix,
    MorphismType,
    PeriodBasis,
    PolarizationType,
    RealizedMorphism,
    SiegelPoint,
)
from polmorph.symplectic import gram_matrix, is_symplectic

logger = logging.getLogger(__name__)


def _as_float(m: AnyMatrix) -> np.ndarray:
    return np.array([float(x) for x in m.entries], dtype=float).reshape((m.rows, m.cols))


def _is_positive_definite(a: np.ndarray, tol: float) -> bool:
    sym = (a + a.T) / 2
    return bool(np.linalg.eigvalsh(sym).min() > tol)


@beartype
def validate_siegel(z: SiegelPoint, tol: float = DEFAULT_TOL) -> bool:
    """Whether z is symmetric with positive definite imaginary part, within ``tol``."""
    if z.dim == 0:
        return True
    mat = z.matrix()
    if np.abs(mat - mat.T).max() > tol:
        return False
    return _is_positive_definite(mat.imag, tol)


@beartype
def period_basis(z: SiegelPoint, d: PolarizationType, tol: float = DEFAULT_TOL) -> PeriodBasis:
    """The lattice basis (Z | Delta) attached to a Siegel point and a type.

    Raises:
        InvalidSiegelPointError: If z is not in the Siegel upper half-space
        SizeMismatchError: If the genus of z differs from the length of d
    """
    if z.dim != d.dim:
        raise SizeMismatchError(
            f"genus-{z.dim} point cannot carry a type of length {d.dim}",
            details={"dim": z.dim, "type": list(d.divisors)},
        )
    if not validate_siegel(z, tol):
        raise InvalidSiegelPointError(details={"dim": z.dim})
    columns = np.hstack([z.matrix(), np.diag(np.array(d.divisors, dtype=complex)).reshape((z.dim, z.dim))])
    return PeriodBasis.from_matrix(columns, d)


@beartype
def validate_period_basis(
    p: PeriodBasis,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> bool:
    """Check the Riemann relations for a lattice basis and its type.

    The alternating form with Gram matrix gram(pol_type) on the basis columns
    extends to a real bilinear form A on C^n = R^{2n}. The basis is valid when
    A(iu, iv) = A(u, v) and A(iu, u) is positive definite. Both tests are
    relative: ``tol`` is scaled by the largest entry of A, which grows like
    the inverse of Im Z.
    """
    n = p.dim
    if n == 0:
        return True
    pi = p.matrix()
    real = np.vstack([pi.real, pi.imag])
    condition = np.linalg.cond(real)
    if not np.isfinite(condition) or condition > max_condition:
        return False
    r_inv = np.linalg.inv(real)
    form = r_inv.T @ _as_float(gram_matrix(p.pol_type)) @ r_inv
    eye = np.eye(n)
    zero = np.zeros((n, n))
    j0 = np.block([[zero, -eye], [eye, zero]])
    scaled_tol = tol * max(1.0, float(np.abs(form).max()))
    if np.abs(j0.T @ form @ j0 - form).max() > scaled_tol:
        return False
    return _is_positive_definite(j0.T @ form, scaled_tol)


@beartype
def normalize(
    p: PeriodBasis,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> SiegelPoint:
    """Siegel coordinate Z = Delta . G2^-1 . G1 of a basis with columns (G1 | G2).

    Raises:
        NearSingularBlockError: If G2 has condition number above ``max_condition``
        InvalidSiegelPointError: If the result is not a Siegel point
    """
    n = p.dim
    if n == 0:
        return SiegelPoint(dim=0)
    pi = p.matrix()
    left, right = pi[:, :n], pi[:, n:]
    condition = np.linalg.cond(right)
    logger.debug("normalising block condition number %.3g", condition)
    if not np.isfinite(condition) or condition > max_condition:
        raise NearSingularBlockError(details={"condition": float(condition), "max_condition": max_condition})
    delta = np.diag(np.array(p.pol_type.divisors, dtype=float))
    z = SiegelPoint.from_matrix(delta @ np.linalg.solve(right, left))
    if not validate_siegel(z, tol):
        raise InvalidSiegelPointError(
            "normalised basis does not give a Siegel point", details={"dim": n}
        )
    return z


def _act(p: PeriodBasis, m: np.ndarray, pol_type: PolarizationType) -> PeriodBasis:
    return PeriodBasis.from_matrix(p.matrix() @ m, pol_type)


@beartype
def transport(
    z_target: SiegelPoint,
    e: PolarizationType,
    d: PolarizationType,
    m: IntMatrix,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> SiegelPoint:
    """Source point of the isogeny of type (d, e, m) over the target point ``z_target``.

    The target basis lambda of type e is pulled back to gamma = lambda . m,
    a basis of the source lattice symplectic for type d.

    Raises:
        InvalidTypeError: If (d, e, m) is not a valid isogeny type
        NearSingularBlockError: If gamma cannot be normalised
    """
    report = check_isogeny_type(d, e, m)
    if not report.valid:
        raise InvalidTypeError(details={"failures": list(report.failures)})
    gamma = _act(period_basis(z_target, e, tol), _as_float(m), d)
    return normalize(gamma, tol, max_condition)


@beartype
def descend(
    z_source: SiegelPoint,
    d: PolarizationType,
    e: PolarizationType,
    m: IntMatrix,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> SiegelPoint:
    """Target point of the isogeny of type (d, e, m) from the source point; inverse of transport.

    Raises:
        InvalidTypeError: If (d, e, m) is not a valid isogeny type
    """
    report = check_isogeny_type(d, e, m)
    if not report.valid:
        raise InvalidTypeError(details={"failures": list(report.failures)})
    lam = _act(period_basis(z_source, d, tol), _as_float(rat_inverse(m)), e)
    return normalize(lam, tol, max_condition)


@beartype
def sp_action(
    z: SiegelPoint,
    d: PolarizationType,
    r: IntMatrix,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> SiegelPoint:
    """Action of r in Sp(D, Z), i.e. transport(z, d, d, r).

    With this convention sp_action(sp_action(z, r1), r2) == sp_action(z, r1 . r2).

    Raises:
        NotSymplecticError: If r is not in Sp(D, Z)
    """
    if not is_symplectic(r, d):
        raise NotSymplecticError(details={"type": list(d.divisors)})
    return transport(z, d, d, r, tol, max_condition)


@beartype
def product_point(z_sub: SiegelPoint, z_comp: SiegelPoint) -> SiegelPoint:
    """Block-diagonal Siegel point of a product."""
    n, n_comp = z_sub.dim, z_comp.dim
    out = np.zeros((n + n_comp, n + n_comp), dtype=complex)
    out[:n, :n] = z_sub.matrix()
    out[n:, n:] = z_comp.matrix()
    return SiegelPoint.from_matrix(out)


def _product_basis(p: PeriodBasis, p_comp: PeriodBasis) -> np.ndarray:
    # Rows: X then X'; columns: the 2n X columns then the 2n' X' columns.
    n, n_comp = p.dim, p_comp.dim
    out = np.zeros((n + n_comp, 2 * (n + n_comp)), dtype=complex)
    out[:n, :2 * n] = p.matrix()
    out[n:, 2 * n:] = p_comp.matrix()
    return out


@beartype
def realize_embedding(
    z_sub: SiegelPoint,
    z_comp: SiegelPoint,
    t: EmbeddingType,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> SiegelPoint:
    """Ambient Siegel point of the sum of embeddings of type ``t`` over a pair of points.

    The product basis of X x X' is carried to the ambient lattice by M^-1 and
    normalised with the ambient type.

    Raises:
        InvalidTypeError: If t is not a valid embedding type
        NearSingularBlockError: If the ambient basis cannot be normalised
    """
    report = check_embedding_type(t.sub_type, t.complement_type, t.ambient_type, t.matrix)
    if not report.valid:
        raise InvalidTypeError(details={"failures": list(report.failures)})
    product = _product_basis(
        period_basis(z_sub, t.sub_type, tol), period_basis(z_comp, t.complement_type, tol)
    )
    ambient = PeriodBasis.from_matrix(product @ _as_float(rat_inverse(t.matrix)), t.ambient_type)
    return normalize(ambient, tol, max_condition)


@beartype
def realize_morphism(
    z_x: SiegelPoint,
    z_xcomp: SiegelPoint,
    z_ycomp: SiegelPoint,
    t: MorphismType,
    tol: float = DEFAULT_TOL,
    max_condition: float = DEFAULT_MAX_CONDITION,
) -> RealizedMorphism:
    """Build source, target and image points of a morphism of type ``t``.

    The image Y gets the basis Pi_X . P^-1 normalised with type H; V and W are
    the ambient points of the two sums of embeddings; q = N (P + 0) M^-1.

    Raises:
        InvalidTypeError: If t is not a valid morphism type
    """
    report = check_morphism_type(t)
    if not report.valid:
        raise InvalidTypeError(details={"failures": list(report.failures)})
    d, _, _, h, _, _ = t.delta
    z_y = descend(z_x, d, h, t.tau[2], tol, max_condition)
    z_v = realize_embedding(z_x, z_xcomp, t.source_embedding, tol, max_condition)
    z_w = realize_embedding(z_y, z_ycomp, t.target_embedding, tol, max_condition)
    assert report.induced_matrix is not None
    return RealizedMorphism(z_v=z_v, z_w=z_w, q=report.induced_matrix, z_y=z_y)
