import numpy as np
import pytest

from spinstab.exactlin import (
    FieldMatrix,
    IntMatrix,
    inverse,
    kernel_basis,
    lattice_basis,
    naive_rank_gf2,
    rank,
    rows_to_ints,
    rref,
    smith_normal_form,
    snf_inverse,
    solve,
)
from spinstab.exceptions import InputValidationError


def test_gf2_matrices_are_packed(gf2):
    m = FieldMatrix.from_array(gf2, [[1, 0, 1], [0, 1, 1]])
    assert m.packed
    assert m.to_array().tolist() == [[1, 0, 1], [0, 1, 1]]
    assert m.shape == (2, 3)


def test_packing_spans_several_words(gf2):
    rng = np.random.default_rng(1)
    bits = rng.integers(0, 2, size=(5, 150))
    m = FieldMatrix.from_array(gf2, bits)
    assert m.words.shape == (5, 3)
    assert np.array_equal(m.to_array(), bits)


def test_packed_rank_matches_naive_rank(gf2):
    rng = np.random.default_rng(7)
    shapes = [(1, 1), (1, 64), (64, 1), (64, 64)]
    shapes += [tuple(int(k) for k in rng.integers(1, 65, size=2)) for _ in range(196)]
    for i, (nrows, ncols) in enumerate(shapes):
        bits = rng.integers(0, 2, size=(nrows, ncols))
        if i % 2 and nrows > 2:
            bits[-1] = bits[0] ^ bits[1]
        m = FieldMatrix.from_array(gf2, bits)
        assert rank(m) == naive_rank_gf2(rows_to_ints(m), m.ncols), (nrows, ncols)


@pytest.mark.parametrize("k", [1, 37, 64])
def test_packed_rank_of_full_rank_square(gf2, k):
    rng = np.random.default_rng(k)
    bits = np.triu(rng.integers(0, 2, size=(k, k)), 1) + np.eye(k, dtype=np.int64)
    m = FieldMatrix.from_array(gf2, bits[rng.permutation(k)])
    assert rank(m) == k
    assert naive_rank_gf2(rows_to_ints(m), m.ncols) == k


def test_rref_is_reduced(gf7):
    m = FieldMatrix.from_array(gf7, [[2, 4, 1], [1, 2, 3], [3, 6, 4]])
    reduced, pivots = rref(m)
    assert pivots == [0, 2]
    dense = reduced.to_array()
    assert dense[0, 0] == 1 and dense[1, 2] == 1
    assert dense[1, 0] == 0 and dense[0, 2] == 0
    assert not dense[2].any()


@pytest.mark.parametrize("fixture", ["gf2", "gf16", "gf7"])
def test_kernel_rows_are_annihilated(fixture, request):
    field = request.getfixturevalue(fixture)
    rng = np.random.default_rng(3)
    m = FieldMatrix.from_array(field, field.random(rng, (6, 11)))
    kernel = kernel_basis(m)
    assert kernel.nrows == m.ncols - rank(m)
    assert (m @ kernel.transpose()).is_zero()


def test_solve_returns_solution_or_none(gf7):
    m = FieldMatrix.from_array(gf7, [[1, 1], [2, 2]])
    assert solve(m, [3, 6]) is not None
    assert solve(m, [3, 5]) is None


def test_solve_rejects_bad_rhs_length(gf7):
    m = FieldMatrix.identity(gf7, 3)
    with pytest.raises(InputValidationError):
        solve(m, [1, 2])


def test_inverse_roundtrip(gf16):
    m = FieldMatrix.from_array(gf16, [[1, 2, 0], [0, 3, 5], [0, 0, 7]])
    assert rank(m) == 3
    assert inverse(m) @ m == FieldMatrix.identity(gf16, 3)


def test_singular_inverse_raises(gf7):
    with pytest.raises(InputValidationError):
        inverse(FieldMatrix.from_array(gf7, [[1, 2], [2, 4]]))


def test_power_matches_repeated_product(gf4):
    m = FieldMatrix.from_array(gf4, [[1, 1], [2, 3]])
    assert m.power(5) == m @ m @ m @ m @ m
    assert m.power(0) == FieldMatrix.identity(gf4, 2)


def test_mixing_fields_is_rejected(gf2, gf7):
    with pytest.raises(InputValidationError):
        FieldMatrix.identity(gf2, 2) + FieldMatrix.identity(gf7, 2)


def test_smith_normal_form_divisibility():
    m = IntMatrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    snf = smith_normal_form(m)
    assert snf.divisors == (2, 6, 12)
    assert snf.U @ m @ snf.V == snf.diagonal


def test_smith_normal_form_of_singular_matrix():
    snf = smith_normal_form(IntMatrix([[1, 2], [2, 4]]))
    assert snf.divisors == (1, 0)
    assert snf.rank == 1
    assert snf.torsion == ()


def test_snf_inverse_gives_adjugate():
    m = IntMatrix([[2, 1], [1, 1]])
    adj, den = snf_inverse(m)
    scaled = m @ adj
    assert scaled == IntMatrix([[den, 0], [0, den]])


def test_lattice_basis_removes_redundant_generators():
    basis = lattice_basis([[2, 0], [0, 2], [1, 1], [3, 3]])
    assert basis.nrows == 2
    assert basis.abs_det() == 2
