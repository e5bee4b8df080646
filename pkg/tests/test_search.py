"""
Tests for the bounded isogeny and embedding searches.
"""
import pytest

from polmorph.exact_core import block_diagonal, det, diagonal
from polmorph.morphism_types import (
    check_embedding_type,
    check_isogeny_type,
    elliptic_embedding_constraints,
)
from polmorph.search import search_embedding_matrices, search_gram_solutions, search_isogeny_matrices
from polmorph.symplectic import gram_matrix, gram_pullback
from tests.factories import EMPTY, REDUCED_ELLIPTIC_EMBEDDING, coset_oracle_embedding, mat, pt


def assert_determinant_law(d, e, bound):
    found = search_isogeny_matrices(d, e, bound=bound)
    assert found
    for m in found:
        assert check_isogeny_type(d, e, m).valid
        assert abs(det(m)) * e.degree == d.degree
    return found


class TestIsogenySearch:
    """search_isogeny_matrices."""

    def test_degree_two_elliptic(self):
        found = search_isogeny_matrices(pt(2), pt(1), bound=2)
        assert diagonal((1, 2)) in found
        assert mat([[0, -1], [2, 0]]) in found

    def test_results_are_sorted_and_unique(self):
        found = search_isogeny_matrices(pt(3), pt(1), bound=2)
        keys = [m.entries for m in found]
        assert keys == sorted(set(keys))

    def test_no_solutions_when_types_do_not_divide(self):
        assert search_isogeny_matrices(pt(1), pt(2), bound=3) == []

    def test_zero_dimensional_types(self):
        found = search_isogeny_matrices(EMPTY, EMPTY, bound=1)
        assert len(found) == 1
        assert found[0].shape == (0, 0)

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
    def test_determinant_law_elliptic(self, d):
        for e in (e for e in range(1, d + 1) if d % e == 0):
            assert_determinant_law(pt(d), pt(e), 3)

    def test_determinant_law_surface(self):
        assert_determinant_law(pt(1, 2), pt(1, 1), 1)

    @pytest.mark.slow
    @pytest.mark.parametrize("d", [pt(1, 1), pt(2, 2), pt(1, 2)])
    def test_determinant_law_surface_to_principal(self, d):
        assert_determinant_law(d, pt(1, 1), 3)

    @pytest.mark.slow
    @pytest.mark.parametrize("d,e", [(pt(1, 2), pt(1, 2)), (pt(2, 4), pt(1, 2)), (pt(1, 4), pt(1, 2))])
    def test_determinant_law_surface_to_non_principal(self, d, e):
        assert_determinant_law(d, e, 3)

    def test_worker_count_does_not_change_the_result(self):
        serial = search_isogeny_matrices(pt(6), pt(1), bound=3, jobs=1)
        parallel = search_isogeny_matrices(pt(6), pt(1), bound=3, jobs=3)
        assert serial == parallel


class TestEmbeddingSearch:
    """search_embedding_matrices and the raw Gram solution set."""

    def test_reduced_elliptic_curves_of_degree_one(self):
        constraints = elliptic_embedding_constraints(1)
        found = search_embedding_matrices(pt(1), pt(1), pt(1, 1), bound=2, column_constraints=constraints)
        assert found
        assert REDUCED_ELLIPTIC_EMBEDDING in found
        for m in found:
            for j, column in constraints.items():
                assert m.column(j) == column
            assert check_embedding_type(pt(1), pt(1), pt(1, 1), m).valid
            assert coset_oracle_embedding(m, 1)

    def test_constrained_search_in_parallel(self):
        constraints = elliptic_embedding_constraints(1)
        serial = search_embedding_matrices(pt(1), pt(1), pt(1, 1), 2, constraints, jobs=1)
        parallel = search_embedding_matrices(pt(1), pt(1), pt(1, 1), 2, constraints, jobs=2)
        assert serial == parallel

    def test_elliptic_curve_with_empty_complement(self):
        found = search_embedding_matrices(pt(2), EMPTY, pt(2), bound=1)
        assert diagonal((1, 1)) in found
        for m in found:
            assert det(m) == 1

    def test_impossible_ambient_type(self):
        assert search_embedding_matrices(pt(1), pt(1), pt(1, 2), bound=2) == []
        assert search_embedding_matrices(pt(1), pt(1), pt(1), bound=2) == []

    def test_gram_solutions_satisfy_the_equation(self):
        g = gram_matrix(pt(1, 1))
        target = block_diagonal(gram_matrix(pt(2)), gram_matrix(pt(2)))
        constraints = {0: (1, 0, 0, 0), 1: (0, 0, 2, 0)}
        found = search_gram_solutions(g, target, 2, constraints)
        assert found
        for m in found:
            assert gram_pullback(m, g) == target

    def test_gram_solutions_without_constraints(self):
        found = search_gram_solutions(gram_matrix(pt(1)), gram_matrix(pt(1)), bound=1)
        # SL(2, Z) elements with entries in {-1, 0, 1}
        assert len(found) == 20
        for m in found:
            assert det(m) == 1
