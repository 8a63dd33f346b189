import itertools

import numpy as np
import pytest

from spinstab.chevalley import (
    ADJOINT,
    HALF_SPIN,
    SIMPLY_CONNECTED,
    SPECIAL_ORTHOGONAL,
    Subalgebra,
    bracket,
    build_algebra,
    center,
    center_order,
    character_lattice,
    chevalley_constants,
    cocycle_sign,
    extraspecial_pairs,
    span_dim,
)
from spinstab.exactlin import FieldMatrix
from spinstab.exceptions import InputValidationError, RootDataError
from spinstab.roots import build_root_system


def _jacobi(alg, a, b, c):
    f = alg.field
    total = f.vadd(alg.bracket(a, alg.bracket(b, c)), alg.bracket(b, alg.bracket(c, a)))
    return f.vadd(total, alg.bracket(c, alg.bracket(a, b)))


def test_dimension(d5_gf2):
    assert d5_gf2.dim == 45
    assert d5_gf2.n_roots == 40


@pytest.mark.parametrize("fixture", ["d4_gf2", "d5_gf7"])
def test_jacobi_identity_on_random_triples(fixture, request):
    alg = request.getfixturevalue(fixture)
    rng = np.random.default_rng(11)
    for _ in range(10):
        a, b, c = (alg.random_element(rng) for _ in range(3))
        assert not _jacobi(alg, a, b, c).any()


def test_jacobi_identity_on_all_basis_triples(gf7):
    alg = build_algebra(build_root_system("D", 4), SIMPLY_CONNECTED, gf7)
    basis = [alg.basis_vector(i) for i in range(alg.dim)]
    for i, j, k in itertools.combinations(range(alg.dim), 3):
        assert not _jacobi(alg, basis[i], basis[j], basis[k]).any(), (i, j, k)


def test_bracket_is_alternating(d5_gf7):
    rng = np.random.default_rng(5)
    a = d5_gf7.random_element(rng)
    b = d5_gf7.random_element(rng)
    assert not d5_gf7.bracket(a, a).any()
    assert np.array_equal(d5_gf7.bracket(a, b), d5_gf7.field.vneg(d5_gf7.bracket(b, a)))


def test_structure_constants_are_signs_and_antisymmetric():
    rs = build_root_system("D", 5)
    sc = chevalley_constants(rs)
    assert set(np.abs(sc.coef).tolist()) == {1}
    for alpha in rs.roots[:10]:
        for beta in rs.roots:
            assert sc.value(alpha, beta) == -sc.value(beta, alpha)


def test_sign_cocycle_on_roots():
    rs = build_root_system("D", 4)
    for alpha in rs.roots:
        assert cocycle_sign(rs, alpha, alpha) == -1
        for beta in rs.roots[::5]:
            product = cocycle_sign(rs, alpha, beta) * cocycle_sign(rs, beta, alpha)
            assert product == (-1) ** (alpha.inner(beta) % 2)


def test_integer_bracket_of_opposite_root_vectors_is_coroot(d5_gf7):
    alpha = d5_gf7.rs.simple[1]
    value = d5_gf7.integer_bracket(d5_gf7.e(alpha), d5_gf7.e(-alpha))
    assert [int(v) % 7 for v in value] == d5_gf7.h(alpha).tolist()


def test_extraspecial_pairs_cover_nonsimple_positive_roots():
    rs = build_root_system("D", 6)
    pairs = extraspecial_pairs(rs)
    assert len(pairs) == rs.n_positive - rs.rank


@pytest.mark.parametrize("tag, over_roots, in_weights", [
    (SIMPLY_CONNECTED, 4, 1),
    (ADJOINT, 1, 4),
    (HALF_SPIN, 2, 2),
    (SPECIAL_ORTHOGONAL, 2, 2),
])
def test_d4_character_lattice_indices(tag, over_roots, in_weights):
    lattice = character_lattice(build_root_system("D", 4), tag)
    assert lattice.index_over_roots == over_roots
    assert lattice.index_in_weights == in_weights


def test_half_spin_lattice_requires_even_rank():
    with pytest.raises(RootDataError):
        character_lattice(build_root_system("D", 5), HALF_SPIN)


def test_unknown_lattice_tag_rejected():
    with pytest.raises(RootDataError):
        character_lattice(build_root_system("D", 4), "twisted")


@pytest.mark.parametrize("root_type, rank, order", [("D", 4, 4), ("D", 5, 4), ("E", 8, 1)])
def test_center_order(root_type, rank, order):
    assert center_order(build_root_system(root_type, rank)) == order


def test_lie_center_in_characteristic_two(d4_gf2, d5_gf2):
    assert center(d4_gf2).nrows == 2
    assert center(d5_gf2).nrows == 1


def test_lie_center_trivial_in_odd_characteristic(d5_gf7):
    assert center(d5_gf7).nrows == 0


def test_two_power_matches_ad_square(d4_gf2):
    rng = np.random.default_rng(2)
    for _ in range(5):
        x = d4_gf2.random_element(rng)
        lhs = d4_gf2.ad_matrix(d4_gf2.p_power(x))
        ad = d4_gf2.ad_matrix(x)
        assert lhs == ad @ ad


@pytest.mark.parametrize("lattice", [SIMPLY_CONNECTED, HALF_SPIN, ADJOINT])
def test_jacobson_formula_on_random_pairs(gf2, lattice):
    alg = build_algebra(build_root_system("D", 4), lattice, gf2)
    f = alg.field
    rng = np.random.default_rng(17)
    for _ in range(1000):
        x, y = alg.random_element(rng), alg.random_element(rng)
        rhs = f.vadd(f.vadd(alg.p_power(x), alg.p_power(y)), alg.bracket(x, y))
        assert np.array_equal(alg.p_power(f.vadd(x, y)), rhs)


@pytest.mark.parametrize("lattice", [SIMPLY_CONNECTED, HALF_SPIN, ADJOINT])
def test_two_power_on_every_basis_element(gf2, lattice):
    alg = build_algebra(build_root_system("D", 4), lattice, gf2)
    for i in range(alg.dim):
        expected = alg.basis_vector(i) if i >= alg.n_roots else alg.zero()
        assert np.array_equal(alg.p_power(alg.basis_vector(i)), expected), i


def test_two_power_on_basis(d4_gf2):
    alpha = d4_gf2.rs.simple[0]
    assert not d4_gf2.p_power(d4_gf2.e(alpha)).any()
    assert np.array_equal(d4_gf2.p_power(d4_gf2.t(1)), d4_gf2.t(1))


def test_p_power_in_odd_characteristic(d5_gf7):
    rng = np.random.default_rng(4)
    x = d5_gf7.random_element(rng)
    z = d5_gf7.p_power(x)
    assert d5_gf7.ad_matrix(z) == d5_gf7.ad_matrix(x).power(7)


def test_symplectic_form_is_alternating(d4_gf2):
    rng = np.random.default_rng(9)
    for _ in range(10):
        t = rng.integers(0, 2, size=4)
        s = rng.integers(0, 2, size=4)
        assert d4_gf2.symplectic_form(t, t) == 0
        assert d4_gf2.symplectic_form(t, s) == d4_gf2.symplectic_form(s, t)


def test_symplectic_form_needs_characteristic_two(d5_gf7):
    with pytest.raises(InputValidationError):
        d5_gf7.symplectic_form(np.zeros(5, dtype=np.int64), np.zeros(5, dtype=np.int64))


def test_symplectic_form_rejects_non_toral_elements(d4_gf2):
    with pytest.raises(InputValidationError):
        d4_gf2.symplectic_form(d4_gf2.e(d4_gf2.rs.simple[0]), d4_gf2.t(0))


def test_centralizer_of_torus_is_torus(d5_gf7):
    whole = Subalgebra.from_indices(d5_gf7, range(d5_gf7.dim), "d5")
    torus = [d5_gf7.t(k) for k in range(5)]
    cent = whole.centralizer(torus)
    assert cent.nrows == 5
    assert not cent.to_array()[:, :d5_gf7.n_roots].any()


def test_subalgebra_coordinates_roundtrip(d5_gf7):
    indices = list(range(d5_gf7.n_roots, d5_gf7.dim))
    torus = Subalgebra.from_indices(d5_gf7, indices, "t")
    coords = np.array([1, 2, 3, 4, 5])
    assert np.array_equal(torus.coordinates(torus.to_parent(coords)), coords)
    assert not torus.contains(d5_gf7.e(d5_gf7.rs.simple[0]))


def test_lie_element_wrappers_reject_mixed_algebras(d4_gf2, d5_gf2):
    a = d4_gf2.element(d4_gf2.t(0))
    b = d5_gf2.element(d5_gf2.t(0))
    with pytest.raises(InputValidationError):
        bracket(a, b)


def test_span_dim(gf7):
    vectors = [np.array([1, 0, 2]), np.array([2, 0, 4]), np.array([0, 1, 0])]
    assert span_dim(vectors, gf7) == 2
    assert span_dim([], gf7) == 0


def test_algebra_to_dict(d4_gf2):
    data = d4_gf2.to_dict()
    assert data["schema"] == "spinstab.algebra/1"
    assert data["dimension"] == 28
    assert len(data["constants"]) == len(chevalley_constants(d4_gf2.rs).coef)


def test_ad_matrix_is_field_matrix(d4_gf2):
    assert isinstance(d4_gf2.ad_matrix(d4_gf2.t(0)), FieldMatrix)
