"""
Tests for the isogeny, embedding and morphism type checkers.

Checker verdicts are compared with independent oracles: direct Gram
multiplication for isogenies and coset enumeration of the kernel for the
saturation and kernel-kill conditions.
"""
import itertools
import random
from math import gcd

import pytest

from polmorph.exact_core import (
    block_diagonal,
    cokernel,
    det,
    diagonal,
    identity,
    kernel_cosets,
    matmul,
    zeros,
)
from polmorph.exceptions import (
    BadDivisorError,
    DimensionClashError,
    NotSymplecticError,
    NotTwoByTwoError,
    SingularMatrixError,
    SizeMismatchError,
)
from polmorph.morphism_types import (
    GRAM_EQUATION,
    GRAM_PRODUCT,
    INDUCED_INTEGRALITY,
    KERNEL_KILL,
    SATURATION_X,
    SATURATION_XCOMP,
    TYPE_MISMATCH,
    apply_equivalence,
    check_embedding_type,
    check_isogeny_type,
    check_morphism_type,
    elliptic_canonical,
    elliptic_embedding_constraints,
    hecke_factor,
    hecke_factor_reversed,
    is_in_embedding_stabilizer,
    is_in_stabilizer,
    kernel_structure,
    standard_isogeny_matrix,
)
from polmorph.schemas import FiniteAbelianGroup, IsogenyType, MorphismType
from polmorph.search import search_gram_solutions, search_isogeny_matrices
from polmorph.symplectic import gram_matrix, random_symplectic, standard_product_matrix
from tests.factories import (
    DIAGONAL_KERNEL_EMBEDDING,
    EMPTY,
    REDUCED_ELLIPTIC_EMBEDDING,
    base_embedding_types,
    base_morphism_types,
    coset_oracle_embedding,
    coset_oracle_kernel_kill,
    det2,
    mat,
    morphism_witnesses,
    pt,
    random_isogeny_type,
    random_unimodular,
)

# Both complements inject, so the sum map is not an embedding of a sum.
DOUBLED_PRODUCT = mat([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 2, 0, 0],
    [0, 0, 0, 2],
])


def elliptic_gram_oracle(m, d):
    """tM . J . M == d J by explicit multiplication of 2x2 matrices."""
    (a, b), (c, e) = m.to_rows()
    j = [[0, 1], [-1, 0]]
    mt = [[a, c], [b, e]]
    mm = [[a, b], [c, e]]
    left = [[sum(mt[i][k] * j[k][l] for k in range(2)) for l in range(2)] for i in range(2)]
    out = [[sum(left[i][k] * mm[k][l] for k in range(2)) for l in range(2)] for i in range(2)]
    return out == [[0, d], [-d, 0]]


def admissible_degrees(d1, d2):
    return [p for p in range(1, d2 + 1) if d2 % p == 0 and (d2 // p) % d1 == 0 and gcd(d2 // p, p) == 1]


def random_nonsingular_2x2(rng, max_det):
    while True:
        m = mat([[rng.randint(-9, 9) for _ in range(2)] for _ in range(2)])
        if 0 < abs(det2(m)) <= max_det:
            return m


def run_elliptic_suite(bound):
    values = range(-bound, bound + 1)
    for d in range(1, 7):
        for entries in itertools.product(values, repeat=4):
            m = mat([entries[:2], entries[2:]])
            report = check_isogeny_type(pt(d), pt(1), m)
            assert report.valid == elliptic_gram_oracle(m, d), (d, entries)
            if not report.valid:
                continue
            d1, d2 = elliptic_canonical(m)
            assert d2 % d1 == 0
            assert d1 * d2 == d
            assert kernel_structure(m) == FiniteAbelianGroup.from_diagonal((d1, d2))
            assert len(kernel_cosets(m, 64)) == d
            assert report.kernel == kernel_structure(m)


class TestIsogenyTypes:
    """check_isogeny_type and the kernel of an isogeny."""

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_standard_cyclic_isogeny(self, p):
        report = check_isogeny_type(pt(p), pt(1), diagonal((1, p)))
        assert report.valid
        assert report.kernel == FiniteAbelianGroup(invariant_factors=(p,))
        assert report.determinant == p

    def test_symplectic_matrix_has_trivial_kernel(self):
        d = pt(1, 2)
        report = check_isogeny_type(d, d, random_symplectic(d, 10, 3))
        assert report.valid
        assert report.kernel.is_trivial

    def test_identity_is_not_a_degree_two_isogeny(self):
        report = check_isogeny_type(pt(2), pt(1), identity(2))
        assert not report.valid
        assert report.failures == (GRAM_EQUATION,)

    def test_negative_determinant_is_recorded(self):
        report = check_isogeny_type(pt(2), pt(1), mat([[0, -1], [2, 0]]))
        assert report.valid
        assert report.determinant == 2
        report = check_isogeny_type(pt(2), pt(1), mat([[0, 1], [2, 0]]))
        assert not report.valid
        assert report.determinant == -2

    def test_target_type_must_divide_source(self):
        report = check_isogeny_type(pt(1), pt(2), identity(2))
        assert TYPE_MISMATCH in report.failures
        assert GRAM_EQUATION in report.failures

    def test_singular_matrix_has_no_kernel(self):
        report = check_isogeny_type(pt(1), pt(1), zeros(2, 2))
        assert not report.valid
        assert report.kernel is None
        assert report.determinant == 0

    def test_standard_isogeny_matrix(self):
        d = pt(1, 2, 6)
        m = standard_isogeny_matrix(d)
        report = check_isogeny_type(d, pt(1, 1, 1), m)
        assert report.valid
        assert report.kernel == FiniteAbelianGroup(invariant_factors=(2, 6))

    def test_dimension_mismatch(self):
        with pytest.raises(SizeMismatchError):
            check_isogeny_type(pt(1), pt(1, 1), identity(2))

    def test_wrong_matrix_size(self):
        with pytest.raises(SizeMismatchError) as exc_info:
            check_isogeny_type(pt(1), pt(1), identity(4))
        assert exc_info.value.details["expected"] == (2, 2)

    def test_elliptic_suite_small(self):
        run_elliptic_suite(2)

    @pytest.mark.slow
    def test_elliptic_suite_exhaustive(self):
        run_elliptic_suite(6)


class TestEmbeddingTypes:
    """check_embedding_type and the saturation condition."""

    @pytest.mark.parametrize("index", range(5))
    def test_base_embeddings_are_valid(self, index):
        t = base_embedding_types()[index]
        report = check_embedding_type(t.sub_type, t.complement_type, t.ambient_type, t.matrix)
        assert report.valid, report.failures

    def test_diagonal_kernel(self):
        report = check_embedding_type(pt(2), pt(2), pt(1, 2), DIAGONAL_KERNEL_EMBEDDING)
        assert report.valid
        assert report.kernel == FiniteAbelianGroup(invariant_factors=(2,))
        assert abs(report.determinant) == 2

    def test_doubled_product_fails_both_saturations(self):
        report = check_embedding_type(pt(2), pt(2), pt(1, 1), DOUBLED_PRODUCT)
        assert not report.valid
        assert report.failures == (SATURATION_X, SATURATION_XCOMP)
        assert report.kernel == FiniteAbelianGroup(invariant_factors=(2, 2))

    def test_type_mismatch(self):
        report = check_embedding_type(pt(1), pt(1), pt(1, 2), standard_product_matrix(1, 1))
        assert report.failures[0] == TYPE_MISMATCH
        assert GRAM_PRODUCT in report.failures

    def test_singular_matrix_fails_both_saturations(self):
        report = check_embedding_type(pt(1), pt(1), pt(1, 1), zeros(4, 4))
        assert SATURATION_X in report.failures
        assert SATURATION_XCOMP in report.failures
        assert report.kernel is None

    def test_reduced_elliptic_embedding_matches_constraints(self):
        constraints = elliptic_embedding_constraints(1)
        for j, column in constraints.items():
            assert REDUCED_ELLIPTIC_EMBEDDING.column(j) == column

    def test_ambient_dimension_mismatch(self):
        with pytest.raises(SizeMismatchError):
            check_embedding_type(pt(1), pt(1), pt(1), identity(2))

    def run_oracle_equivalence(self, d, bound, constraints=None):
        e = pt(1, 1)
        target = block_diagonal(gram_matrix(d), gram_matrix(d))
        solutions = search_gram_solutions(gram_matrix(e), target, bound, constraints)
        assert solutions
        verdicts = set()
        for m in solutions:
            report = check_embedding_type(d, d, e, m)
            assert GRAM_PRODUCT not in report.failures
            oracle = coset_oracle_embedding(m, 1)
            assert report.valid == oracle, m
            verdicts.add(oracle)
        return verdicts

    def test_oracle_equivalence_principal(self):
        assert self.run_oracle_equivalence(pt(1), 2, elliptic_embedding_constraints(1)) == {True}

    def test_oracle_equivalence_saturated_sub_block(self):
        assert self.run_oracle_equivalence(pt(2), 2, elliptic_embedding_constraints(2)) == {True}

    def test_oracle_equivalence_unsaturated_sub_block(self):
        constraints = {0: (1, 0, 0, 0), 1: (0, 0, 2, 0)}
        assert self.run_oracle_equivalence(pt(2), 2, constraints) == {False}

    @pytest.mark.slow
    @pytest.mark.parametrize("d", [pt(1), pt(2)])
    def test_oracle_equivalence_exhaustive(self, d):
        self.run_oracle_equivalence(d, 2)


class TestMorphismTypes:
    """check_morphism_type, kernel kill and the induced matrix."""

    @pytest.mark.parametrize("index", range(7))
    def test_base_morphisms_are_valid(self, index):
        t = base_morphism_types()[index]
        report = check_morphism_type(t)
        assert report.valid, report.failures
        assert report.induced_matrix is not None
        p_bar, r = report.factorization
        assert matmul(p_bar, r) == t.tau[2]
        assert cokernel(r) == report.kernel

    def test_kernel_kill_fails_for_the_wrong_isogeny(self):
        t = MorphismType(
            delta=(pt(2), pt(2), pt(1, 2), pt(1), EMPTY, pt(1)),
            tau=(DIAGONAL_KERNEL_EMBEDDING, identity(2), mat([[0, -1], [2, 0]])),
        )
        report = check_morphism_type(t)
        assert not report.valid
        assert KERNEL_KILL in report.failures
        assert INDUCED_INTEGRALITY in report.failures
        assert report.factorization is None
        assert report.induced_matrix is None

    def test_failures_of_parts_are_collected_in_order(self):
        t = MorphismType(
            delta=(pt(2), pt(2), pt(1, 1), pt(1), EMPTY, pt(1)),
            tau=(DOUBLED_PRODUCT, identity(2), identity(2)),
        )
        report = check_morphism_type(t)
        assert report.failures[:3] == (SATURATION_X, SATURATION_XCOMP, GRAM_EQUATION)
        assert len(set(report.failures)) == len(report.failures)

    def test_singular_source(self):
        t = MorphismType(
            delta=(pt(1), pt(1), pt(1, 1), pt(1), EMPTY, pt(1)),
            tau=(zeros(4, 4), identity(2), identity(2)),
        )
        report = check_morphism_type(t)
        assert KERNEL_KILL in report.failures
        assert INDUCED_INTEGRALITY in report.failures

    def test_dimension_clash(self):
        t = MorphismType(
            delta=(pt(1), EMPTY, pt(1), pt(1, 1), EMPTY, pt(1, 1)),
            tau=(identity(2), identity(4), zeros(4, 2)),
        )
        with pytest.raises(DimensionClashError) as exc_info:
            check_morphism_type(t)
        assert exc_info.value.code == "DimensionClash"

    def test_kernel_kill_oracle_equivalence(self):
        rng = random.Random(41)
        verdicts = set()
        for t in base_morphism_types():
            d, h = t.delta[0], t.delta[3]
            if d.dim != 1:
                continue
            candidates = search_isogeny_matrices(d, h, bound=2)
            for p in rng.sample(candidates, min(len(candidates), 12)):
                for _ in range(3):
                    witnesses = morphism_witnesses(t, rng, 4)
                    moved = apply_equivalence(t.model_copy(update={"tau": (t.tau[0], t.tau[1], p)}), witnesses)
                    m_mat, _, p_mat = moved.tau
                    report = check_morphism_type(moved)
                    oracle = coset_oracle_kernel_kill(m_mat, p_mat, d.dim)
                    assert (KERNEL_KILL not in report.failures) == oracle
                    if oracle:
                        assert report.induced_matrix is not None
                    verdicts.add(oracle)
        assert verdicts == {True, False}


class TestEquivariance:
    """Symplectic changes of basis preserve validity and kernels."""

    def test_isogeny_types(self):
        rng = random.Random(101)
        for _ in range(70):
            t = random_isogeny_type(rng, 2)
            report = check_isogeny_type(t.source_type, t.target_type, t.matrix)
            witnesses = (
                random_symplectic(t.source_type, rng.randint(0, 12), rng.randrange(10**6)),
                random_symplectic(t.target_type, rng.randint(0, 12), rng.randrange(10**6)),
            )
            moved = apply_equivalence(t, witnesses)
            moved_report = check_isogeny_type(moved.source_type, moved.target_type, moved.matrix)
            assert moved_report.valid
            assert moved_report.kernel == report.kernel

    def test_embedding_types(self):
        rng = random.Random(202)
        bases = base_embedding_types()
        for _ in range(70):
            t = rng.choice(bases)
            report = check_embedding_type(t.sub_type, t.complement_type, t.ambient_type, t.matrix)
            witnesses = tuple(
                random_symplectic(d, rng.randint(0, 12), rng.randrange(10**6))
                for d in (t.sub_type, t.complement_type, t.ambient_type)
            )
            moved = apply_equivalence(t, witnesses)
            moved_report = check_embedding_type(moved.sub_type, moved.complement_type, moved.ambient_type, moved.matrix)
            assert moved_report.valid
            assert moved_report.kernel == report.kernel

    def test_morphism_types(self):
        rng = random.Random(303)
        bases = base_morphism_types()
        for _ in range(60):
            t = rng.choice(bases)
            report = check_morphism_type(t)
            moved = apply_equivalence(t, morphism_witnesses(t, rng, rng.randint(0, 12)))
            moved_report = check_morphism_type(moved)
            assert moved_report.valid, moved_report.failures
            assert moved_report.kernel == report.kernel
            assert moved_report.target_kernel == report.target_kernel

    def test_invalid_datum_stays_invalid(self):
        rng = random.Random(404)
        t = IsogenyType(source_type=pt(2), target_type=pt(1), matrix=identity(2))
        for _ in range(20):
            witnesses = (
                random_symplectic(pt(2), rng.randint(0, 12), rng.randrange(10**6)),
                random_symplectic(pt(1), rng.randint(0, 12), rng.randrange(10**6)),
            )
            moved = apply_equivalence(t, witnesses)
            assert not check_isogeny_type(moved.source_type, moved.target_type, moved.matrix).valid

    def test_verdict_change_is_asserted(self, monkeypatch):
        t = IsogenyType(source_type=pt(2), target_type=pt(1), matrix=diagonal((1, 2)))
        broken = t.model_copy(update={"matrix": identity(2)})
        monkeypatch.setattr("polmorph.morphism_types._move", lambda datum, witnesses: broken)
        with pytest.raises(AssertionError):
            apply_equivalence(t, (identity(2), identity(2)))

    def test_wrong_witness_count(self):
        t = IsogenyType(source_type=pt(2), target_type=pt(1), matrix=diagonal((1, 2)))
        with pytest.raises(SizeMismatchError) as exc_info:
            apply_equivalence(t, [identity(2)])
        assert exc_info.value.details == {"kind": "isogeny", "expected": 2, "got": 1}

    def test_non_symplectic_witness(self):
        t = IsogenyType(source_type=pt(2), target_type=pt(1), matrix=diagonal((1, 2)))
        with pytest.raises(NotSymplecticError) as exc_info:
            apply_equivalence(t, [identity(2), diagonal((1, 2))])
        assert exc_info.value.details == {"slot": "B"}

    def test_wrong_witness_size(self):
        t = base_embedding_types()[0]
        with pytest.raises(NotSymplecticError) as exc_info:
            apply_equivalence(t, [identity(4), identity(2), identity(4)])
        assert exc_info.value.details == {"slot": "A"}


class TestElliptic:
    """Canonical forms and Hecke factorizations of elliptic isogenies."""

    def test_canonical_of_diagonal(self):
        assert elliptic_canonical(diagonal((2, 3))) == (1, 6)
        assert elliptic_canonical(diagonal((2, 4))) == (2, 4)

    def test_canonical_is_invariant(self):
        rng = random.Random(61)
        for _ in range(40):
            m = random_nonsingular_2x2(rng, 60)
            moved = matmul(random_unimodular(2, rng), m, random_unimodular(2, rng))
            assert elliptic_canonical(moved) == elliptic_canonical(m)

    def test_canonical_rejects_singular_and_wrong_size(self):
        with pytest.raises(SingularMatrixError):
            elliptic_canonical(mat([[1, 2], [2, 4]]))
        with pytest.raises(NotTwoByTwoError):
            elliptic_canonical(identity(4))

    def test_hecke_factorizations_reconstruct(self):
        rng = random.Random(71)
        for _ in range(100):
            m = random_nonsingular_2x2(rng, 50)
            d1, d2 = elliptic_canonical(m)
            p = rng.choice(admissible_degrees(d1, d2))
            m_u, m_g = hecke_factor(m, p)
            assert matmul(m_g, m_u) == m
            assert elliptic_canonical(m_u) == (d1, d2 // p)
            assert elliptic_canonical(m_g) == (1, p)
            m_h, m_v = hecke_factor_reversed(m, p)
            assert matmul(m_v, m_h) == m
            assert elliptic_canonical(m_h) == (1, p)
            assert elliptic_canonical(m_v) == (d1, d2 // p)

    def test_cyclic_isogeny_factors_through_itself(self):
        m_u, m_g = hecke_factor(diagonal((1, 5)), 5)
        assert abs(det(m_u)) == 1
        assert elliptic_canonical(m_g) == (1, 5)

    @pytest.mark.parametrize("p", [2, 3])
    def test_inadmissible_degree(self, p):
        # (1, 4): p = 2 leaves gcd(2, 2) = 2, p = 3 does not divide
        with pytest.raises(BadDivisorError) as exc_info:
            hecke_factor(diagonal((1, 4)), p)
        assert exc_info.value.details["p"] == p

    def test_non_positive_degree(self):
        with pytest.raises(BadDivisorError):
            hecke_factor_reversed(diagonal((1, 4)), 0)


class TestStabilizers:
    """Pairs (A, B) with M A = B M."""

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_lower_unipotent_is_accepted(self, p):
        t = IsogenyType(source_type=pt(p), target_type=pt(1), matrix=diagonal((1, p)))
        ok, b = is_in_stabilizer(mat([[1, 0], [p, 1]]), t)
        assert ok
        assert b == mat([[1, 0], [p * p, 1]])

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_upper_unipotent_is_rejected(self, p):
        t = IsogenyType(source_type=pt(p), target_type=pt(1), matrix=diagonal((1, p)))
        assert is_in_stabilizer(mat([[1, 1], [0, 1]]), t) == (False, None)

    def test_non_symplectic_is_rejected(self):
        t = IsogenyType(source_type=pt(2), target_type=pt(1), matrix=diagonal((1, 2)))
        assert is_in_stabilizer(diagonal((1, 2)), t) == (False, None)

    def test_accepted_elements_are_closed_under_products(self):
        p = 3
        t = IsogenyType(source_type=pt(p), target_type=pt(1), matrix=diagonal((1, p)))
        accepted = []
        for seed in range(200):
            a = random_symplectic(pt(p), 5, seed)
            ok, b = is_in_stabilizer(a, t)
            if ok:
                assert matmul(t.matrix, a) == matmul(b, t.matrix)
                accepted.append(a)
        assert len(accepted) >= 2
        for a1, a2 in itertools.product(accepted[:10], repeat=2):
            ok, _ = is_in_stabilizer(matmul(a1, a2), t)
            assert ok

    def test_product_stabilizer(self):
        t = base_embedding_types()[0]
        a = mat([[1, 1], [0, 1]])
        a_comp = mat([[0, -1], [1, 0]])
        ok, b = is_in_embedding_stabilizer(a, a_comp, t)
        assert ok
        assert matmul(t.matrix, block_diagonal(a, a_comp)) == matmul(b, t.matrix)

    def test_product_stabilizer_rejects_non_symplectic(self):
        t = base_embedding_types()[0]
        assert is_in_embedding_stabilizer(diagonal((1, 2)), identity(2), t) == (False, None)
