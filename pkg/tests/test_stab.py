import numpy as np
import pytest

from spinstab.chevalley import center, span_dim
from spinstab.elements import ExponentVector
from spinstab.exceptions import InputValidationError, WitnessMismatchError
from spinstab.fields import get_field, parse_field
from spinstab.spinrep import halfspin_rep
from spinstab.stab import (
    ALL_TARGETS,
    FREENESS_TARGETS,
    ODD_CHAR_TARGETS,
    SMALL_N_TARGETS,
    StabilizerReport,
    certify_target,
    conjugate_vector,
    decode_witness,
    encode_witness,
    find_target,
    fixed_space_dim,
    ladder_fields,
    match_target,
    representation_for_target,
    search_generic_stab,
    stab_dim,
    torus_conjugate,
    trial_rng,
    verify_targets,
    verify_witness,
)


def test_table_of_small_n_values():
    assert [t.n for t in SMALL_N_TARGETS] == list(range(6, 15))
    assert [t.expected_dim for t in SMALL_N_TARGETS] == [11, 14, 21, 21, 29, 24, 35, 16, 28]


def test_target_names_are_unique():
    names = [t.name for t in ALL_TARGETS]
    assert len(names) == len(set(names))


def test_find_target():
    assert find_target("spin10").expected_dim == 29
    with pytest.raises(InputValidationError):
        find_target("spin99")


def test_match_target_falls_back_from_halfspin_to_spin():
    assert match_target(8, "halfspin", 2).name == "spin8"
    assert match_target(16, "halfspin", 7, "hspin").name == "hspin16-p7"
    assert match_target(9, "halfspin", 2) is None
    assert match_target(30, "spin", 2) is None


def test_ladder_fields():
    assert [f.q for f in ladder_fields(2)] == [2, 4, 16]
    assert [f.q for f in ladder_fields(7)] == [7]


def test_trial_rng_is_reproducible():
    a = trial_rng(42, 3).integers(0, 1000, size=5)
    b = trial_rng(42, 3).integers(0, 1000, size=5)
    c = trial_rng(42, 4).integers(0, 1000, size=5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_stab_dim_of_zero_vector(halfspin_d5_gf2):
    assert stab_dim(halfspin_d5_gf2, np.zeros(16, dtype=np.int64)) == 45


def test_fixed_space_of_zero_element(halfspin_d5_gf7):
    assert fixed_space_dim(halfspin_d5_gf7, np.zeros(45, dtype=np.int64)) == 16


def test_search_is_deterministic(halfspin_d5_gf2):
    first = search_generic_stab(halfspin_d5_gf2, 8, seed=5)
    second = search_generic_stab(halfspin_d5_gf2, 8, seed=5)
    assert first.to_dict() == second.to_dict()
    assert sum(first.histogram.values()) == first.trials_run == 8
    assert first.passed is None


def test_search_stops_at_target(halfspin_d5_gf2):
    report = search_generic_stab(halfspin_d5_gf2, 200, seed=1, target=45)
    assert report.trials_run == 1


def test_search_requires_trials(halfspin_d5_gf2):
    with pytest.raises(InputValidationError):
        search_generic_stab(halfspin_d5_gf2, 0, seed=0)


def test_report_roundtrip_through_dict(halfspin_d5_gf2):
    report = search_generic_stab(halfspin_d5_gf2, 4, seed=2, target=29)
    data = report.to_dict()
    assert data["schema"] == "spinstab.stab/1"
    assert "runtime_ms" not in data
    assert "runtime_ms" in report.to_dict(include_runtime=True)
    again = StabilizerReport.from_dict(data)
    assert again.min_dim == report.min_dim
    assert again.histogram == report.histogram
    assert verify_witness(halfspin_d5_gf2, again) == report.min_dim


def test_tampered_report_is_rejected(halfspin_d5_gf2):
    report = search_generic_stab(halfspin_d5_gf2, 4, seed=2)
    report.min_dim += 1
    with pytest.raises(WitnessMismatchError):
        verify_witness(halfspin_d5_gf2, report)


@pytest.mark.parametrize("q, dim", [(2, 13), (16, 7)])
def test_witness_encoding(q, dim):
    field = get_field(2, {2: 1, 16: 4}[q])
    v = field.random(np.random.default_rng(0), dim)
    assert np.array_equal(decode_witness(encode_witness(v, field), field, dim), v)


def test_witness_decoding_rejects_wrong_length(gf16):
    text = encode_witness(np.arange(5), gf16)
    with pytest.raises(InputValidationError):
        decode_witness(text, gf16, 6)
    with pytest.raises(InputValidationError):
        decode_witness("no es base64!", gf16, 5)


def test_stab_dim_invariant_under_root_conjugation(halfspin_d5_gf2):
    rng = np.random.default_rng(17)
    roots = halfspin_d5_gf2.algebra.rs.roots
    for _ in range(50):
        v = halfspin_d5_gf2.field.random(rng, 16)
        alpha = roots[int(rng.integers(len(roots)))]
        moved = conjugate_vector(halfspin_d5_gf2, v, alpha)
        assert stab_dim(halfspin_d5_gf2, moved) == stab_dim(halfspin_d5_gf2, v)


def test_stab_dim_invariant_under_torus(halfspin_d5_gf7):
    rng = np.random.default_rng(23)
    for _ in range(20):
        v = halfspin_d5_gf7.field.random(rng, 16)
        c = ExponentVector(tuple(rng.integers(0, 3, size=5).tolist()), 3)
        moved = torus_conjugate(halfspin_d5_gf7, v, c, 3)
        assert stab_dim(halfspin_d5_gf7, moved) == stab_dim(halfspin_d5_gf7, v)


def test_conjugate_vector_requires_characteristic_two(halfspin_d5_gf7):
    with pytest.raises(InputValidationError):
        conjugate_vector(halfspin_d5_gf7, np.zeros(16, dtype=np.int64), halfspin_d5_gf7.algebra.rs.roots[0])


@pytest.mark.parametrize("rank", [4, 5, 6, 7])
def test_lie_fixed_space_bound_on_random_elements(rank):
    rep = halfspin_rep(rank, 0, field=get_field(7))
    alg = rep.algebra
    central = center(alg)
    rng = np.random.default_rng(8 + rank)
    checked = 0
    while checked < 200:
        x = alg.random_element(rng)
        if not x.any():
            continue
        if central.nrows and span_dim(list(central.to_array()) + [x], rep.field) == central.nrows:
            continue
        checked += 1
        assert 4 * fixed_space_dim(rep, x) <= 3 * rep.dim


@pytest.mark.parametrize("name", ["spin6", "spin7", "spin8", "spin9", "spin10"])
def test_certify_small_targets(name):
    row = certify_target(find_target(name), trials=64, seed=0)
    assert row.passed, row.to_dict()
    assert row.found == row.expected


@pytest.mark.slow
def test_certify_full_small_n_table():
    ledger = verify_targets(SMALL_N_TARGETS, trials=64, seed=0)
    assert all(row.passed for row in ledger), [row.to_dict() for row in ledger if not row.passed]


@pytest.mark.parametrize("targets", [FREENESS_TARGETS, ODD_CHAR_TARGETS], ids=["freeness", "odd"])
def test_certify_freeness_and_odd_characteristic_targets(targets):
    ledger = verify_targets(targets, trials=64, seed=0)
    assert all(row.passed for row in ledger), [row.to_dict() for row in ledger if not row.passed]
    for row in ledger:
        assert row.found == row.expected
        rep = representation_for_target(find_target(row.target), parse_field(row.field))
        assert verify_witness(rep, row.report) == row.expected


def test_ledger_row_dict_has_no_report():
    row = certify_target(find_target("spin6"), trials=8, seed=3)
    data = row.to_dict()
    assert "report" not in data
    assert data["char"] == 2
