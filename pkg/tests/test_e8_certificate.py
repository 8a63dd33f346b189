from collections import Counter

import numpy as np
import pytest

from spinstab.e8_certificate import (
    EXPECTED_PAIRINGS,
    NAMED_INVOLUTIONS,
    RCircElement,
    analyze_stabilizer,
    build_gamma_system,
    centralizer_of_t0,
    check_t0,
    conjugate_witnesses,
    gamma_action,
    gamma_preserving_weyl,
    group_stab_enum,
    hadamard_matrix,
    infinitesimal_stab,
    mu2_part,
    predicted_d8_centralizer,
    predicted_e8_centralizer,
    run_certificate,
    same_span,
    sample_r_circ,
    sample_r_prime,
    tower_closed_form,
    tower_rank,
    two_power_tower,
)
from spinstab.exceptions import InputValidationError
from spinstab.fields import get_field
from spinstab.spinrep import check_representation, e8_restriction_halfspin, halfspin_weights


# ============================================================================
# SISTEMA Γ (SIN CUERPO)
# ============================================================================

def test_hadamard_is_kronecker_cube():
    h8 = hadamard_matrix()
    assert h8.shape == (8, 8)
    assert (h8[0] == 1).all()
    assert np.array_equal(h8 @ h8.T, 8 * np.eye(8, dtype=np.int64))


def test_reference_gamma_system_is_valid():
    gamma = build_gamma_system()
    assert gamma.valid, gamma.checks
    assert gamma.pairing_matrix[0].tolist() == [-1, 1, 0, 0, 0, 0, 0, 0]
    assert np.array_equal(gamma.pairing_matrix, EXPECTED_PAIRINGS)


def test_pairing_lattice_quotient_is_four_copies_of_z2():
    snf = mu2_part()
    assert snf.divisors == (1, 1, 1, 1, 2, 2, 2, 2)
    assert snf.torsion == (2, 2, 2, 2)


def test_tampered_hadamard_fails_checks():
    h8 = hadamard_matrix()
    h8[3, 5] *= -1
    gamma = build_gamma_system(h8)
    assert not gamma.valid
    assert not gamma.checks["hadamard_kronecker"]
    assert not gamma.checks["matches_expected_pairings"]


def test_tampered_certificate_fails_every_part():
    h8 = hadamard_matrix()
    h8[0, 0] = -1
    certificate = run_certificate(field_ext=5, samples=1, seed=0, h8=h8)
    assert certificate["passed"] is False
    assert set(certificate["parts"].values()) == {"FAIL"}


def test_gamma_shape_checked():
    with pytest.raises(InputValidationError):
        build_gamma_system(np.ones((4, 4), dtype=np.int64))


def test_gamma_preserving_weyl_group():
    elements = gamma_preserving_weyl()
    # AGL(3, 2) sobre las coordenadas por los 16 caracteres con signo
    assert len(elements) == 1344 * 16
    for w in elements[::997]:
        images = gamma_action(w)
        assert sorted(j for j, _ in images) == list(range(8))


def test_named_involutions_act_diagonally_on_gamma():
    from spinstab.roots import SignedPermutation
    for perm in NAMED_INVOLUTIONS.values():
        w = SignedPermutation(perm, (1,) * 8)
        assert w in set(gamma_preserving_weyl())
        assert [j for j, _ in gamma_action(w)] == list(range(8))


# ============================================================================
# CONTEXTO E8 SOBRE GF(32)
# ============================================================================

@pytest.mark.slow
def test_t0_is_maximal_totally_isotropic_and_toral(e8_gf32):
    report = check_t0(e8_gf32)
    assert report.dim == 4
    assert report.isotropic and report.maximal and report.toral


@pytest.mark.slow
def test_centralizers_of_t0(e8_gf32):
    in_e8, in_d8 = centralizer_of_t0(e8_gf32)
    assert in_e8.nrows == 24
    assert in_d8.nrows == 8
    assert same_span(in_e8, predicted_e8_centralizer(e8_gf32))
    assert same_span(in_d8, predicted_d8_centralizer(e8_gf32))


@pytest.mark.slow
def test_sampled_element_has_t0_as_infinitesimal_stabilizer(e8_gf32):
    x = sample_r_circ(e8_gf32.field, seed=0, setting=e8_gf32)
    assert x.has_distinct_products()
    assert tower_rank(e8_gf32, x) == 4
    stab = infinitesimal_stab(e8_gf32, x)
    assert stab.nrows == 4
    assert same_span(stab, e8_gf32.t0)


@pytest.mark.slow
def test_two_power_tower_matches_closed_form(e8_gf32):
    x = sample_r_circ(e8_gf32.field, seed=1, setting=e8_gf32)
    for k in range(1, 5):
        assert np.array_equal(two_power_tower(e8_gf32, x, k), tower_closed_form(e8_gf32, x, k))


@pytest.mark.slow
def test_tower_starts_at_one(e8_gf32):
    x = RCircElement((1,) * 8, (1,) * 8, 5)
    with pytest.raises(InputValidationError):
        tower_closed_form(e8_gf32, x, 0)


@pytest.mark.slow
def test_group_stabilizer_is_elementary_abelian_of_order_16(e8_gf32):
    x = sample_r_circ(e8_gf32.field, seed=2, setting=e8_gf32)
    elements = group_stab_enum(e8_gf32, x)
    report = analyze_stabilizer(e8_gf32, x, elements)
    assert report.order == 16
    assert report.elementary_abelian_16
    assert report.diagonal_only
    assert all(report.named_lifts.values()), report.named_lifts


@pytest.mark.slow
def test_stabilizers_are_conjugate(e8_gf32):
    x = sample_r_circ(e8_gf32.field, seed=3, stream=0, setting=e8_gf32)
    y = sample_r_circ(e8_gf32.field, seed=3, stream=1, setting=e8_gf32)
    assert conjugate_witnesses(e8_gf32, x, y).verified
    same = conjugate_witnesses(e8_gf32, x, x)
    assert same.verified
    assert same.b == (1,) * 8


@pytest.mark.slow
def test_r_prime_keeps_diagonal_stabilizer(e8_gf32):
    f = e8_gf32.field
    x = sample_r_prime(f, seed=0, setting=e8_gf32)
    assert f.mul(x.lam[0], x.mu[0]) == f.mul(x.lam[1], x.mu[1])
    assert len(group_stab_enum(e8_gf32, x)) >= 16


@pytest.mark.parametrize("e", [1, 3])
def test_small_fields_rejected_for_sampling(e):
    with pytest.raises(InputValidationError):
        sample_r_circ(get_field(2, e), seed=0)
    with pytest.raises(InputValidationError):
        sample_r_prime(get_field(2, e), seed=0)


@pytest.mark.slow
def test_full_certificate_passes():
    certificate = run_certificate(field_ext=5, samples=3, seed=0, r_prime_samples=1)
    assert certificate["parts"] == {"i": "PASS", "ii": "PASS", "iii": "PASS", "iv": "PASS"}
    assert certificate["passed"] is True
    assert certificate["snf_divisors"] == [1, 1, 1, 1, 2, 2, 2, 2]
    assert len(certificate["sample_reports"]) == 3


def test_certificate_requires_samples():
    with pytest.raises(InputValidationError):
        run_certificate(samples=0)


# ============================================================================
# RESTRICCIÓN E8 → D8
# ============================================================================

@pytest.mark.slow
def test_e8_restriction_matches_clifford_half_spin():
    rep = e8_restriction_halfspin(get_field(2))
    assert rep.dim == 128
    assert rep.weight_multiset() == Counter(tuple(w) for w in halfspin_weights(8, 0).tolist())
    pairs = [(i, i + 1) for i in range(0, 40, 7)]
    assert check_representation(rep, pairs) == []
