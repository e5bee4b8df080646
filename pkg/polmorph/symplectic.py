"""Polarization types, their Gram matrices and integral symplectic groups.

Symplectic bases are ordered so that basis vector i pairs with vector i + n;
every Gram matrix and block convention in the package follows that ordering.
"""

import logging
import random
from typing import List, Optional, Tuple

from beartype import beartype

from polmorph.exact_core import (
    block_diagonal,
    identity,
    matmul,
    rat_inverse,
    rat_matmul,
    rat_matrix_to_int,
    transpose,
)
from polmorph.exceptions import (
    DegenerateFormError,
    LengthMismatchError,
    NotAlternatingError,
    NotSymplecticError,
    SizeMismatchError,
)
from polmorph.schemas import GramForm, IntMatrix, PolarizationType

logger = logging.getLogger(__name__)

Rows = List[List[int]]


@beartype
def gram_matrix(d: PolarizationType) -> IntMatrix:
    """The 2n x 2n matrix [[0, Delta], [-Delta, 0]] with Delta = diag(d)."""
    n = d.dim
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i, di in enumerate(d.divisors):
        rows[i][i + n] = di
        rows[i + n][i] = -di
    return IntMatrix.from_rows(rows, cols=2 * n)


@beartype
def gram(d: PolarizationType) -> GramForm:
    """Gram form of a polarization of type ``d`` in a symplectic basis."""
    return GramForm(matrix=gram_matrix(d))


@beartype
def gram_pullback(m: IntMatrix, g: IntMatrix) -> IntMatrix:
    """The pulled-back form tm . g . m."""
    return matmul(transpose(m), g, m)


@beartype
def is_symplectic(a: IntMatrix, d: PolarizationType) -> bool:
    """Whether ``a`` lies in Sp(D, Z), i.e. ta . D . a == D.

    Raises:
        SizeMismatchError: If ``a`` is not 2n x 2n
    """
    size = 2 * d.dim
    if a.shape != (size, size):
        raise SizeMismatchError(
            f"expected a {size}x{size} matrix for type {d}, got {a.rows}x{a.cols}",
            details={"shape": a.shape, "type": list(d.divisors)},
        )
    g = gram_matrix(d)
    return gram_pullback(a, g) == g


@beartype
def symplectic_inverse(a: IntMatrix, d: PolarizationType) -> IntMatrix:
    """Inverse of an element of Sp(D, Z), computed as D^-1 . ta . D.

    Raises:
        NotSymplecticError: If ``a`` is not in Sp(D, Z)
    """
    if not is_symplectic(a, d):
        raise NotSymplecticError(details={"type": list(d.divisors)})
    g = gram_matrix(d)
    return rat_matrix_to_int(rat_matmul(rat_inverse(g), transpose(a), g))


def _shear(d: PolarizationType, i: int, j: int, t: int, upper: bool) -> IntMatrix:
    # [[I, S], [0, I]] (or its lower analogue) with Delta.S symmetric
    n = d.dim
    rows = [[int(r == c) for c in range(2 * n)] for r in range(2 * n)]
    lo, hi = min(i, j), max(i, j)
    entries = [(lo, hi, t * (d.divisors[hi] // d.divisors[lo])), (hi, lo, t)] if lo != hi else [(lo, lo, t)]
    for r, c, v in entries:
        if upper:
            rows[r][c + n] += v
        else:
            rows[r + n][c] += v
    return IntMatrix.from_rows(rows, cols=2 * n)


def _levi(d: PolarizationType, i: int, j: int, t: int) -> IntMatrix:
    # diag(U, V) with U = I + t E_ij (i > j) and V = Delta^-1 U^-T Delta
    n = d.dim
    rows = [[int(r == c) for c in range(2 * n)] for r in range(2 * n)]
    rows[i][j] += t
    rows[j + n][i + n] -= t * (d.divisors[i] // d.divisors[j])
    return IntMatrix.from_rows(rows, cols=2 * n)


@beartype
def random_symplectic(d: PolarizationType, word_length: int, seed: int) -> IntMatrix:
    """A random word in elementary generators of Sp(D, Z).

    The generator set is: upper and lower shears [[I, S], [0, I]] with
    Delta.S symmetric (single diagonal entries, and symmetric pairs scaled by
    d_j / d_i), and block-diagonal elementary moves diag(U, Delta^-1 U^-T Delta).
    No claim is made that these generate the whole group for non-principal D.

    Args:
        d: Polarization type
        word_length: Number of generators multiplied together
        seed: Seed of the private random generator

    Returns:
        An element of Sp(D, Z); identity for word_length 0
    """
    rng = random.Random(seed)
    n = d.dim
    result = identity(2 * n)
    if n == 0:
        return result
    for _ in range(word_length):
        kind = rng.randrange(3) if n > 1 else rng.randrange(2)
        t = rng.choice((-1, 1))
        if kind == 2:
            i, j = rng.sample(range(n), 2)
            gen = _levi(d, max(i, j), min(i, j), t)
        else:
            gen = _shear(d, rng.randrange(n), rng.randrange(n), t, upper=kind == 0)
        result = matmul(gen, result)
    assert is_symplectic(result, d)
    return result


@beartype
def type_divides(e: PolarizationType, d: PolarizationType) -> bool:
    """Termwise divisibility e_i | d_i of two divisor chains of the same length.

    Raises:
        LengthMismatchError: If the chains have different lengths
    """
    if e.dim != d.dim:
        raise LengthMismatchError(details={"e": list(e.divisors), "d": list(d.divisors)})
    return all(di % ei == 0 for ei, di in zip(e.divisors, d.divisors))


# -- Frobenius normal form of alternating forms ------------------------------------

def _require_alternating(j: IntMatrix) -> None:
    if not j.is_square:
        raise NotAlternatingError("Alternating form must be square.", details={"shape": j.shape})
    for i in range(j.rows):
        if j[i, i]:
            raise NotAlternatingError(details={"row": i})
        for k in range(i + 1, j.rows):
            if j[i, k] != -j[k, i]:
                raise NotAlternatingError(details={"row": i, "col": k})


class _FormReducer:
    """Congruence moves on an alternating matrix, mirrored on the basis change."""

    def __init__(self, form: Rows) -> None:
        self.a = [row[:] for row in form]
        k = len(form)
        self.c = [[int(r == s) for s in range(k)] for r in range(k)]

    def add(self, target: int, source: int, q: int) -> None:
        # e_target += q e_source
        for row in self.c:
            row[target] += q * row[source]
        for row in self.a:
            row[target] += q * row[source]
        src = self.a[source]
        self.a[target] = [x + q * y for x, y in zip(self.a[target], src)]

    def swap(self, x: int, y: int) -> None:
        if x == y:
            return
        for row in self.c:
            row[x], row[y] = row[y], row[x]
        for row in self.a:
            row[x], row[y] = row[y], row[x]
        self.a[x], self.a[y] = self.a[y], self.a[x]

    def negate(self, x: int) -> None:
        for row in self.c:
            row[x] = -row[x]
        for row in self.a:
            row[x] = -row[x]
        self.a[x] = [-v for v in self.a[x]]

    def smallest(self, p: int) -> Optional[Tuple[int, int]]:
        best = None
        k = len(self.a)
        for i in range(p, k):
            row = self.a[i]
            for l in range(i + 1, k):
                if row[l] and (best is None or abs(row[l]) < abs(self.a[best[0]][best[1]])):
                    best = (i, l)
        return best


@beartype
def alternating_type(j: IntMatrix) -> Tuple[PolarizationType, IntMatrix]:
    """Frobenius normal form of a nondegenerate alternating integer form.

    Args:
        j: Alternating matrix

    Returns:
        (d, c) with c unimodular and tc . j . c == gram(d)

    Raises:
        NotAlternatingError: If ``j`` is not alternating
        DegenerateFormError: If ``j`` is singular
    """
    _require_alternating(j)
    k = j.rows
    if k % 2:
        raise DegenerateFormError("Alternating form of odd size is singular.", details={"size": k})
    red = _FormReducer(j.to_rows())
    divisors = []
    for p in range(0, k, 2):
        pos = red.smallest(p)
        if pos is None:
            raise DegenerateFormError(details={"rank": p, "size": k})
        while True:
            i, l = pos
            red.swap(p, i)
            red.swap(p + 1, l)
            if red.a[p][p + 1] < 0:
                red.negate(p + 1)
            x = red.a[p][p + 1]
            leftover = False
            for col in range(p + 2, k):
                q = red.a[p][col] // x
                if q:
                    red.add(col, p + 1, -q)
                r = red.a[p + 1][col] // x
                if r:
                    red.add(col, p, r)
                leftover = leftover or bool(red.a[p][col] or red.a[p + 1][col])
            if leftover:
                pos = red.smallest(p)
                continue
            bad = next(
                (r for r in range(p + 2, k) for col in range(p + 2, k) if red.a[r][col] % x),
                None,
            )
            if bad is None:
                break
            red.add(p, bad, 1)
            pos = (p, p + 1)
        divisors.append(red.a[p][p + 1])
    n = k // 2
    order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    c = [[row[o] for o in order] for row in red.c]
    return PolarizationType(divisors=tuple(divisors)), IntMatrix.from_rows(c, cols=k)


@beartype
def product_type(d: PolarizationType, d_comp: PolarizationType) -> PolarizationType:
    """Divisor chain of the block form gram(d) + gram(d_comp)."""
    form = block_diagonal(gram_matrix(d), gram_matrix(d_comp))
    return alternating_type(form)[0]


@beartype
def product_index_map(n: int, n_comp: int) -> Tuple[int, ...]:
    """Ambient index of each product coordinate.

    Product coordinates list the X block (x_1..x_n, y_1..y_n) then the X'
    block; the ambient symplectic basis pairs index i with i + n + n'.
    """
    total = n + n_comp
    x_block = [i for i in range(n)] + [total + i for i in range(n)]
    comp_block = [n + i for i in range(n_comp)] + [total + n + i for i in range(n_comp)]
    return tuple(x_block + comp_block)


@beartype
def standard_product_matrix(n: int, n_comp: int) -> IntMatrix:
    """Permutation matrix sending product coordinates to their ambient positions."""
    size = 2 * (n + n_comp)
    rows = [[0] * size for _ in range(size)]
    for p, a in enumerate(product_index_map(n, n_comp)):
        rows[a][p] = 1
    return IntMatrix.from_rows(rows, cols=size)
