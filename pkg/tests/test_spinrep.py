from collections import Counter

import numpy as np
import pytest

from spinstab.chevalley import ADJOINT, HALF_SPIN, build_algebra
from spinstab.exceptions import InputValidationError, RepresentationBuildError
from spinstab.roots import build_root_system
from spinstab.spinrep import (
    SparseAction,
    anisotropic_vector,
    b_type_subalgebra,
    build_group_representation,
    check_representation,
    check_restrictedness,
    direct_sum,
    halfspin_basis,
    halfspin_rep,
    halfspin_weights,
    quadratic_value,
    vector_rep,
)


def test_halfspin_basis_parity():
    assert len(halfspin_basis(5, 0)) == 16
    assert len(halfspin_basis(5, 1)) == 16
    assert set(halfspin_basis(5, 0)).isdisjoint(halfspin_basis(5, 1))


def test_halfspin_weights_have_even_minus_signs():
    weights = halfspin_weights(6, 0)
    assert weights.shape == (32, 6)
    assert set(np.abs(weights).ravel().tolist()) == {1}
    assert all((row < 0).sum() % 2 == 0 for row in weights)


def test_halfspin_d5_is_a_representation(halfspin_d5_gf2):
    assert halfspin_d5_gf2.dim == 16
    assert check_representation(halfspin_d5_gf2) == []


def test_halfspin_d5_is_restricted_in_characteristic_two(halfspin_d5_gf2):
    assert check_restrictedness(halfspin_d5_gf2) == []


def test_halfspin_d5_is_restricted_in_characteristic_seven(halfspin_d5_gf7):
    alg = halfspin_d5_gf7.algebra
    indices = list(range(0, alg.n_roots, 7)) + list(range(alg.n_roots, alg.dim))
    assert check_restrictedness(halfspin_d5_gf7, indices) == []


def test_restrictedness_uses_the_algebra_p_map(halfspin_d5_gf2, monkeypatch):
    alg = halfspin_d5_gf2.algebra
    monkeypatch.setattr(alg, "p_power", lambda x: alg.zero())
    torus = list(range(alg.n_roots, alg.dim))
    assert check_restrictedness(halfspin_d5_gf2, torus) == torus


def test_halfspin_d5_odd_characteristic(halfspin_d5_gf7):
    rng = np.random.default_rng(0)
    pairs = [tuple(rng.choice(45, size=2, replace=False)) for _ in range(120)]
    assert check_representation(halfspin_d5_gf7, pairs) == []


def test_torus_acts_diagonally_with_weights(halfspin_d5_gf7):
    alg = halfspin_d5_gf7.algebra
    for k in range(alg.rank):
        m = halfspin_d5_gf7.act(alg.t(k)).to_array()
        assert not (m - np.diag(np.diag(m))).any()


def test_vector_rep_is_a_representation(vector_d5_gf7):
    assert vector_d5_gf7.dim == 10
    assert check_representation(vector_d5_gf7) == []


def test_vector_rep_preserves_hyperbolic_form(vector_d5_gf7):
    f = vector_d5_gf7.field
    rng = np.random.default_rng(3)
    alg = vector_d5_gf7.algebra
    # la forma polar de Q es invariante: B(xu, v) + B(u, xv) = 0
    gram = np.zeros((10, 10), dtype=np.int64)
    for a in range(10):
        gram[a, 9 - a] = 1
    for _ in range(5):
        x = alg.random_element(rng)
        m = vector_d5_gf7.act(x).to_array()
        assert not f.reduce(m.T @ gram + gram @ m).any()


def test_restricted_representation_on_half_spin_lattice(gf2):
    alg = build_algebra(build_root_system("D", 4), HALF_SPIN, gf2)
    rep = halfspin_rep(4, 0, algebra=alg)
    assert rep.dim == 8
    assert check_representation(rep) == []


def test_halfspin_incompatible_with_adjoint_lattice(gf2):
    alg = build_algebra(build_root_system("D", 4), ADJOINT, gf2)
    with pytest.raises(RepresentationBuildError):
        halfspin_rep(4, 0, algebra=alg)


@pytest.mark.parametrize("r, parity", [(2, 0), (5, 2)])
def test_halfspin_argument_checks(r, parity, gf2):
    with pytest.raises(RepresentationBuildError):
        halfspin_rep(r, parity, field=gf2)


def test_halfspin_rank_mismatch(d4_gf2):
    with pytest.raises(RepresentationBuildError):
        halfspin_rep(5, 0, algebra=d4_gf2)


def test_halfspin_needs_field_or_algebra():
    with pytest.raises(InputValidationError):
        halfspin_rep(4, 0)


def test_anisotropic_vector_is_anisotropic(gf2, gf7):
    for field in (gf2, gf7):
        assert quadratic_value(anisotropic_vector(5, field), 5, field) != 0


def test_b_type_subalgebra_in_odd_characteristic(halfspin_d5_gf7):
    realization = b_type_subalgebra(halfspin_d5_gf7)
    assert realization.dim == realization.expected_dim == 36
    rep = realization.representation
    assert rep.dim == 16
    pairs = [(i, (3 * i + 1) % 36) for i in range(36) if i != (3 * i + 1) % 36]
    assert check_representation(rep, pairs) == []


def test_b_type_rejects_isotropic_vector(halfspin_d5_gf7):
    y = np.zeros(10, dtype=np.int64)
    y[0] = 1
    with pytest.raises(RepresentationBuildError):
        b_type_subalgebra(halfspin_d5_gf7, y)


def test_direct_sum_dimensions(vector_d5_gf7, halfspin_d5_gf7):
    rep = direct_sum(vector_d5_gf7, halfspin_d5_gf7)
    assert rep.dim == 26
    assert rep.weight_multiset() == vector_d5_gf7.weight_multiset() + halfspin_d5_gf7.weight_multiset()


def test_direct_sum_requires_same_algebra(vector_d5_gf7, halfspin_d5_gf2):
    with pytest.raises(InputValidationError):
        direct_sum(vector_d5_gf7, halfspin_d5_gf2)


@pytest.mark.parametrize("n, rep, dim", [
    (10, "spin", 16),
    (10, "vector", 10),
    (10, "vector+halfspin", 26),
    (9, "spin", 16),
])
def test_build_group_representation(n, rep, dim, gf7):
    assert build_group_representation(n, rep, gf7).dim == dim


@pytest.mark.parametrize("n, rep", [(5, "spin"), (9, "vector"), (10, "adjoint")])
def test_build_group_representation_rejects(n, rep, gf7):
    with pytest.raises(InputValidationError):
        build_group_representation(n, rep, gf7)


def test_sparse_action_combine_cancels():
    a = SparseAction.from_entries(2, [(0, 1, 1), (1, 0, 2)])
    b = SparseAction.from_entries(2, [(0, 1, 2)])
    combined = SparseAction.combine([a, b], [1, 1], 3)
    assert combined.nnz == 1
    assert (int(combined.rows[0]), int(combined.cols[0]), int(combined.values[0])) == (1, 0, 2)


def test_header_describes_module(halfspin_d5_gf2):
    header = halfspin_d5_gf2.header()
    assert header["kind"] == "halfspin"
    assert header["dim"] == 16
    assert header["algebra_dim"] == 45
    assert header["meta"]["rank"] == 5


def test_weight_multiset_counts(halfspin_d5_gf2):
    assert halfspin_d5_gf2.weight_multiset() == Counter(tuple(w) for w in halfspin_weights(5, 0).tolist())
