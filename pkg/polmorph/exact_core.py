"""Exact linear algebra over the integers and the rationals.

Normal forms (Hermite, Smith), fraction-free determinants, rational inverses,
cokernels of integer matrices and lattices in Q^k stored in a canonical form.
All functions are pure; matrices are immutable :class:`IntMatrix` values.
"""

import itertools
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

from beartype import beartype
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from polmorph.exceptions import (
    NonSquareError,
    NotIntegralError,
    OrderTooLargeError,
    SingularMatrixError,
    SizeMismatchError,
)
from polmorph.schemas import FiniteAbelianGroup, IntMatrix, RatMatrix

logger = logging.getLogger(__name__)

Rows = List[List[int]]


# -- construction helpers ---------------------------------------------------

@beartype
def identity(n: int) -> IntMatrix:
    return IntMatrix(rows=n, cols=n, entries=tuple(int(i == j) for i in range(n) for j in range(n)))


@beartype
def zeros(rows: int, cols: int) -> IntMatrix:
    return IntMatrix(rows=rows, cols=cols, entries=(0,) * (rows * cols))


@beartype
def diagonal(values: Sequence[int]) -> IntMatrix:
    n = len(values)
    return IntMatrix(
        rows=n, cols=n,
        entries=tuple(int(values[i]) if i == j else 0 for i in range(n) for j in range(n)),
    )


@beartype
def transpose(m: IntMatrix) -> IntMatrix:
    return IntMatrix(
        rows=m.cols, cols=m.rows,
        entries=tuple(m.entries[i * m.cols + j] for j in range(m.cols) for i in range(m.rows)),
    )


@beartype
def block_diagonal(*blocks: IntMatrix) -> IntMatrix:
    """Direct sum of matrices along the diagonal (zero-size blocks allowed)."""
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0:c0 + b.cols] = b.entries[i * b.cols:(i + 1) * b.cols]
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(out, cols=cols)


@beartype
def hstack(*blocks: IntMatrix) -> IntMatrix:
    """Concatenate matrices with equal row counts side by side."""
    if not blocks:
        raise SizeMismatchError("hstack needs at least one block.")
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise SizeMismatchError("hstack blocks have different row counts.")
    cols = sum(b.cols for b in blocks)
    out = [[x for b in blocks for x in b.entries[i * b.cols:(i + 1) * b.cols]] for i in range(rows)]
    return IntMatrix.from_rows(out, cols=cols)


@beartype
def submatrix(m: IntMatrix, row_start: int, row_stop: int, col_start: int, col_stop: int) -> IntMatrix:
    rows = m.to_rows()[row_start:row_stop]
    return IntMatrix.from_rows([r[col_start:col_stop] for r in rows], cols=col_stop - col_start)


def _mul_rows(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], inner: int, cols: int) -> Rows:
    bt = [[b[k][j] for k in range(inner)] for j in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


@beartype
def matmul(*factors: IntMatrix) -> IntMatrix:
    """Product of one or more integer matrices, left to right."""
    if not factors:
        raise SizeMismatchError("matmul needs at least one factor.")
    result = factors[0]
    for f in factors[1:]:
        if result.cols != f.rows:
            raise SizeMismatchError(
                f"cannot multiply {result.rows}x{result.cols} by {f.rows}x{f.cols}",
                details={"left": result.shape, "right": f.shape},
            )
        result = IntMatrix.from_rows(
            _mul_rows(result.to_rows(), f.to_rows(), result.cols, f.cols), cols=f.cols
        )
    return result


AnyMatrix = Union[IntMatrix, RatMatrix]


@beartype
def as_rat(m: AnyMatrix) -> RatMatrix:
    if isinstance(m, RatMatrix):
        return m
    return RatMatrix(rows=m.rows, cols=m.cols, entries=tuple(Fraction(x) for x in m.entries))


@beartype
def rat_matmul(*factors: AnyMatrix) -> RatMatrix:
    """Product of integer or rational matrices, always returned as a rational matrix."""
    result = as_rat(factors[0])
    for f in factors[1:]:
        f = as_rat(f)
        if result.cols != f.rows:
            raise SizeMismatchError(
                f"cannot multiply {result.rows}x{result.cols} by {f.rows}x{f.cols}",
                details={"left": result.shape, "right": f.shape},
            )
        result = RatMatrix.from_rows(
            _mul_rows(result.to_rows(), f.to_rows(), result.cols, f.cols), cols=f.cols
        )
    return result


@beartype
def rat_matrix_to_int(r: RatMatrix) -> IntMatrix:
    """Convert a rational matrix with trivial denominators to an integer matrix."""
    if not r.is_integral:
        raise NotIntegralError(details={"shape": r.shape})
    return IntMatrix(rows=r.rows, cols=r.cols, entries=tuple(x.numerator for x in r.entries))


# -- row operations ---------------------------------------------------------

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _combine_rows(m: Rows, r: int, i: int, x: int, y: int, z: int, w: int) -> None:
    # (row_r, row_i) <- (x row_r + y row_i, z row_r + w row_i)
    row_r, row_i = m[r], m[i]
    m[r] = [x * a + y * b for a, b in zip(row_r, row_i)]
    m[i] = [z * a + w * b for a, b in zip(row_r, row_i)]


def _add_row(m: Rows, target: int, source: int, q: int) -> None:
    src = m[source]
    m[target] = [a + q * b for a, b in zip(m[target], src)]


def _add_col(m: Rows, target: int, source: int, q: int) -> None:
    for row in m:
        row[target] += q * row[source]


def _swap_cols(m: Rows, a: int, b: int) -> None:
    for row in m:
        row[a], row[b] = row[b], row[a]


def _identity_rows(n: int) -> Rows:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _row_hermite(a: Rows, n_rows: int, n_cols: int) -> Tuple[Rows, Rows, int]:
    """Row Hermite form h = u a; returns (h, u, rank)."""
    h = [row[:] for row in a]
    u = _identity_rows(n_rows)
    r = 0
    for j in range(n_cols):
        if r == n_rows:
            break
        for i in range(r + 1, n_rows):
            b = h[i][j]
            if b == 0:
                continue
            a_rj = h[r][j]
            if a_rj == 0:
                h[r], h[i] = h[i], h[r]
                u[r], u[i] = u[i], u[r]
                continue
            g, x, y = _xgcd(a_rj, b)
            z, w = -b // g, a_rj // g
            _combine_rows(h, r, i, x, y, z, w)
            _combine_rows(u, r, i, x, y, z, w)
        pivot = h[r][j]
        if pivot == 0:
            continue
        if pivot < 0:
            h[r] = [-v for v in h[r]]
            u[r] = [-v for v in u[r]]
            pivot = -pivot
        for i in range(r):
            q = h[i][j] // pivot
            if q:
                _add_row(h, i, r, -q)
                _add_row(u, i, r, -q)
        r += 1
    return h, u, r


# -- normal forms -----------------------------------------------------------

@beartype
def hnf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Args:
        m: Any integer matrix

    Returns:
        (h, u) with h = u m, u unimodular, pivots positive, entries above each
        pivot reduced into [0, pivot) and zero rows at the bottom
    """
    h, u, _ = _row_hermite(m.to_rows(), m.rows, m.cols)
    return IntMatrix.from_rows(h, cols=m.cols), IntMatrix.from_rows(u, cols=m.rows)


def _smallest_in_cross(a: Rows, t: int, rows: int, cols: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, rows):
        if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best[0]][best[1]])):
            best = (i, t)
    for j in range(t, cols):
        if a[t][j] and (best is None or abs(a[t][j]) < abs(a[best[0]][best[1]])):
            best = (t, j)
    return best


def _smallest_in_block(a: Rows, t: int, rows: int, cols: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def _smith(a: Rows, rows: int, cols: int) -> Tuple[Rows, Rows, Rows]:
    a = [row[:] for row in a]
    u = _identity_rows(rows)
    v = _identity_rows(cols)
    for t in range(min(rows, cols)):
        pos = _smallest_in_block(a, t, rows, cols)
        if pos is None:
            break
        while True:
            i, j = pos
            if i != t:
                a[t], a[i] = a[i], a[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                _swap_cols(a, t, j)
                _swap_cols(v, t, j)
            p = a[t][t]
            remainder = False
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    _add_row(a, i, t, -q)
                    _add_row(u, i, t, -q)
                remainder = remainder or a[i][t] != 0
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    _add_col(a, j, t, -q)
                    _add_col(v, j, t, -q)
                remainder = remainder or a[t][j] != 0
            if remainder:
                pos = _smallest_in_cross(a, t, rows, cols)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            # Pull an indivisible row into row t; the next sweep leaves a smaller remainder.
            _add_row(a, t, bad, 1)
            _add_row(u, t, bad, 1)
            pos = (t, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v


@beartype
def snf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form.

    Args:
        m: Any integer matrix

    Returns:
        (s, u, v) with s = u m v, u and v unimodular, s diagonal with
        nonnegative entries s1 | s2 | ...
    """
    s, u, v = _smith(m.to_rows(), m.rows, m.cols)
    return (
        IntMatrix.from_rows(s, cols=m.cols),
        IntMatrix.from_rows(u, cols=m.rows),
        IntMatrix.from_rows(v, cols=m.cols),
    )


def smith_diagonal(m: IntMatrix) -> Tuple[int, ...]:
    s, _, _ = snf(m)
    return tuple(s[i, i] for i in range(min(s.rows, s.cols)))


def _bareiss(a: Rows, n: int) -> int:
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


@beartype
def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Raises:
        NonSquareError: If m is not square
    """
    if not m.is_square:
        raise NonSquareError(details={"shape": m.shape})
    return _bareiss(m.to_rows(), m.rows)


@beartype
def rat_inverse(m: IntMatrix) -> RatMatrix:
    """Exact inverse over the rationals by Gauss-Jordan elimination.

    Raises:
        NonSquareError: If m is not square
        SingularMatrixError: If det m == 0
    """
    if not m.is_square:
        raise NonSquareError(details={"shape": m.shape})
    n = m.rows
    x = [[Fraction(v) for v in row] for row in m.to_rows()]
    y = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        piv = next((r for r in range(i, n) if x[r][i] != 0), None)
        if piv is None:
            raise SingularMatrixError(details={"shape": m.shape})
        x[i], x[piv] = x[piv], x[i]
        y[i], y[piv] = y[piv], y[i]
        p = x[i][i]
        x[i] = [v / p for v in x[i]]
        y[i] = [v / p for v in y[i]]
        for r in range(n):
            if r != i and x[r][i] != 0:
                f = x[r][i]
                x[r] = [a - f * b for a, b in zip(x[r], x[i])]
                y[r] = [a - f * b for a, b in zip(y[r], y[i])]
    return RatMatrix.from_rows(y, cols=n)


@beartype
def integer_inverse(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix."""
    return rat_matrix_to_int(rat_inverse(m))


# -- cokernels ----------------------------------------------------------------

@beartype
def cokernel(m: IntMatrix) -> FiniteAbelianGroup:
    """Invariant factors of Z^k / m Z^k for a nonsingular square m.

    Raises:
        NonSquareError: If m is not square
        SingularMatrixError: If det m == 0 (infinite cokernel)
    """
    if not m.is_square:
        raise NonSquareError(details={"shape": m.shape})
    diag = smith_diagonal(m)
    if any(s == 0 for s in diag):
        raise SingularMatrixError("Cokernel of a singular matrix is infinite.", details={"shape": m.shape})
    return FiniteAbelianGroup.from_diagonal(diag)


@beartype
def kernel_cosets(m: IntMatrix, max_order: int) -> List[RatMatrix]:
    """Coset representatives of L / Z^k where L = m^-1 Z^k.

    The representatives are sum_i c_i v_i / s_i with 0 <= c_i < s_i, where s is
    the Smith diagonal of m and v_i the columns of its right transform.

    Args:
        m: Square nonsingular integer matrix
        max_order: Largest |det m| that may be enumerated

    Returns:
        |det m| column vectors (k x 1 rational matrices), pairwise distinct mod Z^k

    Raises:
        OrderTooLargeError: If |det m| > max_order
    """
    if not m.is_square:
        raise NonSquareError(details={"shape": m.shape})
    s, _, v = snf(m)
    k = m.rows
    diag = [s[i, i] for i in range(k)]
    if any(d == 0 for d in diag):
        raise SingularMatrixError(details={"shape": m.shape})
    order = 1
    for d in diag:
        order *= d
    if order > max_order:
        raise OrderTooLargeError(
            f"Cokernel has order {order}, above the cap {max_order}.",
            details={"order": order, "max_order": max_order},
        )
    cols = [v.column(i) for i in range(k)]
    cosets = []
    for coeffs in itertools.product(*(range(d) for d in diag)):
        vec = [Fraction(0)] * k
        for c, d, col in zip(coeffs, diag, cols):
            if c:
                for r in range(k):
                    vec[r] += Fraction(c * col[r], d)
        cosets.append(RatMatrix(rows=k, cols=1, entries=tuple(vec)))
    return cosets


@beartype
def integer_kernel(m: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the saturated lattice {x in Z^cols : m x = 0}."""
    h, u, rank = _row_hermite(transpose(m).to_rows(), m.cols, m.rows)
    basis = u[rank:]
    return transpose(IntMatrix.from_rows(basis, cols=m.cols)) if basis else zeros(m.cols, 0)


@beartype
def saturation(m: IntMatrix) -> IntMatrix:
    """Basis (as columns) of (Q-span of the columns of m) intersected with Z^rows."""
    annihilator = integer_kernel(transpose(m))
    return integer_kernel(transpose(annihilator))


# -- lattices -----------------------------------------------------------------

class Lattice(BaseModel):
    """A full-or-partial rank lattice in Q^k in canonical form.

    The lattice is (1/denominator) times the column span of ``numerators``;
    the denominator is the exponent of the lattice over Z^k and the numerator
    columns are the transpose of a row Hermite form, so equal lattices compare
    equal field by field.
    """

    model_config = ConfigDict(frozen=True)

    ambient_dim: int = Field(..., ge=0, description="Dimension k of the ambient space Q^k")
    denominator: int = Field(1, ge=1, description="Smallest d with d L contained in Z^k")
    numerators: IntMatrix = Field(..., description="Integer basis of d L as columns, column Hermite form")

    @model_validator(mode="after")
    def _check_shape(self) -> Self:
        if self.numerators.rows != self.ambient_dim:
            raise ValueError("numerator basis must have ambient_dim rows")
        return self

    @classmethod
    @beartype
    def from_generators(cls, generators: AnyMatrix) -> "Lattice":
        """Normalise the lattice spanned over Z by the columns of ``generators``."""
        gens = as_rat(generators)
        k = gens.rows
        den = 1
        for x in gens.entries:
            den = lcm(den, x.denominator)
        rows = [[int(x * den) for x in gens.column(j)] for j in range(gens.cols)]
        h, _, rank = _row_hermite(rows, len(rows), k)
        basis = h[:rank]
        g = den
        for row in basis:
            for x in row:
                g = gcd(g, x)
        basis = [[x // g for x in row] for row in basis]
        numerators = transpose(IntMatrix.from_rows(basis, cols=k)) if basis else zeros(k, 0)
        return cls(ambient_dim=k, denominator=den // g, numerators=numerators)

    @classmethod
    @beartype
    def standard(cls, k: int) -> "Lattice":
        return cls.from_generators(identity(k))

    @classmethod
    @beartype
    def coordinate_block(cls, k: int, first: int, last: int) -> "Lattice":
        """The lattice Z^{[first, last)} x 0 inside Q^k."""
        cols = [[int(i == j) for j in range(first, last)] for i in range(k)]
        return cls.from_generators(IntMatrix.from_rows(cols, cols=last - first))

    @property
    def rank(self) -> int:
        return self.numerators.cols

    @property
    def basis(self) -> RatMatrix:
        d = self.denominator
        return RatMatrix(
            rows=self.numerators.rows,
            cols=self.numerators.cols,
            entries=tuple(Fraction(x, d) for x in self.numerators.entries),
        )

    @beartype
    def includes(self, other: "Lattice") -> bool:
        """Whether ``other`` is a sublattice of this lattice."""
        if other.ambient_dim != self.ambient_dim:
            return False
        rows = [a + b for a, b in zip(self.basis.to_rows(), other.basis.to_rows())]
        merged = Lattice.from_generators(RatMatrix.from_rows(rows, cols=self.rank + other.rank))
        return merged == self


def _check_block(l: Lattice, first: int, last: int) -> None:
    if not 0 <= first <= last <= l.ambient_dim:
        raise SizeMismatchError(
            f"block [{first}, {last}) is not inside Q^{l.ambient_dim}",
            details={"first": first, "last": last, "ambient_dim": l.ambient_dim},
        )


@beartype
def intersect_with_coordinate_block(l: Lattice, first: int, last: int) -> Lattice:
    """The sublattice of vectors of ``l`` vanishing outside the coordinates [first, last)."""
    _check_block(l, first, last)
    rows = l.numerators.to_rows()
    outside = [row for i, row in enumerate(rows) if not first <= i < last]
    combos = integer_kernel(IntMatrix.from_rows(outside, cols=l.rank))
    gens = rat_matmul(l.basis, combos)
    return Lattice.from_generators(gens)


@beartype
def project_to_block(l: Lattice, first: int, last: int) -> Lattice:
    """Image of ``l`` under the coordinate projection onto [first, last)."""
    _check_block(l, first, last)
    rows = l.basis.to_rows()[first:last]
    return Lattice.from_generators(RatMatrix.from_rows(rows, cols=l.rank))
