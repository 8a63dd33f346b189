import json

import pytest
from click.testing import CliRunner

from spinstab.chevalley import SIMPLY_CONNECTED
from spinstab.exceptions import InputValidationError
from spinstab.fields import get_field
from spinstab.io import read_json
from spinstab.validation import validate_schema
from spinstab_cli.commands import EXIT_ERROR, EXIT_MISSED, EXIT_OK, build_default_map, cli
from spinstab_cli.config import CIConfig, Config, get_config, load_config_file
from spinstab_cli.services.campaign_service import RunHistory, build_manifest, utc_now
from spinstab_cli.services.rep_cache import RepresentationCache, get_rep_cache, reset_rep_cache


@pytest.fixture(autouse=True)
def fresh_cache():
    reset_rep_cache()
    yield
    reset_rep_cache()


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(cli, args, obj={})


# ============================================================================
# eddim / concordance
# ============================================================================

def test_eddim_table(runner):
    result = invoke(runner, ["eddim", "15..20"])
    assert result.exit_code == EXIT_OK
    for value in ("23", "24", "120", "103", "341", "326"):
        assert value in result.output


def test_eddim_csv_and_json(runner, tmp_path):
    path = tmp_path / "ed.json"
    result = invoke(runner, ["eddim", "20..24", "--group", "HSpin", "--csv", "--json", str(path)])
    assert result.exit_code == EXIT_OK
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("n,group,value")
    data = read_json(path)
    assert validate_schema(data, "spinstab.edtable/1")
    assert [row["value"] for row in data["rows"]] == [322, 2 ** 11 - 276]


def test_eddim_flags_small_n(runner):
    result = invoke(runner, ["eddim", "13..15"])
    assert result.exit_code == EXIT_OK
    assert "n = 13" in result.output


def test_eddim_bad_range(runner):
    assert invoke(runner, ["eddim", "x..y"]).exit_code == EXIT_ERROR


def test_concordance(runner):
    result = invoke(runner, ["concordance", "--csv"])
    assert result.exit_code == EXIT_OK
    assert result.output.startswith("claim,statement,command")
    assert "e8-verify" in result.output


# ============================================================================
# stab
# ============================================================================

def test_stab_zero_trials_is_usage_error(runner):
    assert invoke(runner, ["stab", "--n", "6", "--seed", "0", "--trials", "0"]).exit_code == EXIT_ERROR


def test_stab_requires_group_or_n(runner, tmp_path):
    result = invoke(runner, ["stab", "--seed", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR


def test_stab_odd_n_rejects_halfspin(runner, tmp_path):
    result = invoke(runner, ["stab", "--n", "9", "--rep", "halfspin", "--seed", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR


def test_stab_small_target(runner, tmp_path):
    report_path = tmp_path / "stab.json"
    args = ["stab", "--n", "6", "--seed", "0", "--trials", "16", "--cache-dir", str(tmp_path / "cache"),
            "--json", str(report_path)]
    result = invoke(runner, args)
    assert result.exit_code == EXIT_OK, result.output
    assert "PASS" in result.output
    data = read_json(report_path)
    assert data["min_dim"] == 11
    assert data["passed"] is True
    assert "runtime_ms" not in data

    history = RunHistory(tmp_path / "cache").entries()
    assert len(history) == 1
    assert history[0]["command"] == "stab"
    assert validate_schema(history[0], "spinstab.manifest/1")


def test_stab_is_reproducible(runner, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        invoke(runner, ["stab", "--group", "spin7", "--seed", "3", "--trials", "8",
                        "--cache-dir", str(tmp_path / "cache"), "--json", str(path)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_stab_without_target_reports_histogram(runner, tmp_path):
    csv_path = tmp_path / "hist.csv"
    result = invoke(runner, ["stab", "--n", "10", "--rep", "vector", "--char", "7", "--seed", "1",
                             "--trials", "3", "--cache-dir", str(tmp_path), "--csv", str(csv_path)])
    assert result.exit_code == EXIT_OK, result.output
    assert csv_path.read_text(encoding="utf-8").startswith("dim_stab,ensayos,porcentaje")


def test_stab_unknown_group(runner, tmp_path):
    result = invoke(runner, ["stab", "--group", "spin99", "--seed", "0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR


def test_stab_group_rejects_contradicting_options(runner, tmp_path):
    result = invoke(runner, ["stab", "--group", "spin14", "--n", "12", "--char", "7", "--seed", "0",
                             "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR
    assert "no es compatible" in result.output
    assert "--n 12" in result.output


def test_stab_group_accepts_matching_options(runner, tmp_path):
    result = invoke(runner, ["stab", "--group", "spin6", "--n", "6", "--rep", "spin", "--char", "2",
                             "--seed", "0", "--trials", "16", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_OK, result.output


def test_config_file_supplies_defaults(runner, tmp_path):
    config_path = tmp_path / "spinstab.cfg"
    config_path.write_text("# campaña corta\nseed = 4\ntrials = 2\n", encoding="utf-8")
    report_path = tmp_path / "stab.json"
    result = invoke(runner, ["--config", str(config_path), "stab", "--n", "10", "--rep", "vector",
                             "--char", "7", "--cache-dir", str(tmp_path), "--json", str(report_path)])
    assert result.exit_code == EXIT_OK, result.output
    data = read_json(report_path)
    assert data["trials"] == 2
    assert data["rng"]["seed"] == 4


def test_config_file_maps_flag_names_to_parameters(runner, tmp_path):
    config_path = tmp_path / "spinstab.cfg"
    config_path.write_text("char = 3\njson = -\n", encoding="utf-8")
    result = invoke(runner, ["--config", str(config_path), "fixed-space", "--n", "10",
                             "--partition", "2,2,1x6", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_OK, result.output
    assert '"field": "GF(3)"' in result.output


def test_build_default_map_per_command():
    default_map = build_default_map(cli, {"char": "3", "json": "-", "group": "spin7", "max": "true",
                                          "csv": "hist.csv"})
    assert default_map["stab"] == {"characteristic": "3", "json_path": "-", "group_name": "spin7",
                                   "csv_path": "hist.csv"}
    assert default_map["fixed-space"] == {"characteristic": "3", "json_path": "-", "max_eigenspace": "true"}
    # --csv de eddim es booleana: no recibe una ruta
    assert "as_csv" not in default_map["eddim"]
    assert default_map["eddim"]["group"] == "spin7"


def test_config_file_rejects_unknown_keys(runner, tmp_path):
    config_path = tmp_path / "spinstab.cfg"
    config_path.write_text("seed = 1\ncaracteristica = 3\n", encoding="utf-8")
    result = invoke(runner, ["--config", str(config_path), "concordance"])
    assert result.exit_code == EXIT_ERROR
    assert "caracteristica" in result.output
    with pytest.raises(InputValidationError):
        build_default_map(cli, {"caracteristica": "3"})


# ============================================================================
# fixed-space
# ============================================================================

def test_fixed_space_torus_max_eigenspace(runner):
    result = invoke(runner, ["fixed-space", "--n", "10", "--torus", "1,1,1,1,0", "--max"])
    assert result.exit_code == EXIT_OK
    assert "= 6" in result.output


def test_fixed_space_torus_rank_mismatch(runner):
    result = invoke(runner, ["fixed-space", "--n", "10", "--torus", "1,1"])
    assert result.exit_code == EXIT_ERROR


def test_fixed_space_requires_one_mode(runner):
    result = invoke(runner, ["fixed-space", "--n", "10"])
    assert result.exit_code == EXIT_ERROR


def test_fixed_space_jordan_type(runner, tmp_path):
    path = tmp_path / "fixed.json"
    result = invoke(runner, ["fixed-space", "--n", "9", "--partition", "2,2,1x5", "--jordan",
                             "--cache-dir", str(tmp_path), "--json", str(path)])
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["jordan_type"] == "(2^4,1^8)"
    assert data["module_dim"] == 16


def test_fixed_space_survey_needs_seed(runner, tmp_path):
    result = invoke(runner, ["fixed-space", "--n", "10", "--survey", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR


def test_fixed_space_survey(runner, tmp_path):
    path = tmp_path / "survey.json"
    result = invoke(runner, ["fixed-space", "--n", "10", "--survey", "--order", "2", "--samples", "10",
                             "--seed", "0", "--cache-dir", str(tmp_path), "--json", str(path)])
    assert result.exit_code == EXIT_OK, result.output
    data = read_json(path)
    assert data["torus_mode"] == "exhaustive"
    assert data["torus_checked"] == 2 ** 5
    assert data["torus_violations"] == data["lie_violations"] == 0


# ============================================================================
# e8-verify
# ============================================================================

def test_e8_verify_tampered_matrix_fails(runner, tmp_path):
    result = invoke(runner, ["e8-verify", "--seed", "0", "--samples", "1", "--tamper", "0,0",
                             "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_MISSED
    assert "FAIL" in result.output
    assert RunHistory(tmp_path).last()["config"]["tampered"] is True


def test_e8_verify_bad_tamper_index(runner, tmp_path):
    result = invoke(runner, ["e8-verify", "--seed", "0", "--tamper", "9,0", "--cache-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR


@pytest.mark.slow
def test_e8_verify_passes(runner, tmp_path):
    path = tmp_path / "e8.json"
    result = invoke(runner, ["e8-verify", "--seed", "0", "--samples", "2", "--r-prime-samples", "0",
                             "--cache-dir", str(tmp_path), "--json", str(path)])
    assert result.exit_code == EXIT_OK, result.output
    assert validate_schema(read_json(path), "spinstab.e8/1")


# ============================================================================
# spin-table
# ============================================================================

@pytest.mark.slow
def test_spin_table_small_set(runner, tmp_path):
    path = tmp_path / "ledger.json"
    csv_path = tmp_path / "ledger.csv"
    result = invoke(runner, ["spin-table", "--seed", "0", "--trials", "64", "--cache-dir", str(tmp_path),
                             "--json", str(path), "--csv", str(csv_path)])
    assert result.exit_code == EXIT_OK, result.output
    data = read_json(path)
    assert validate_schema(data, "spinstab.ledger/1")
    assert all(row["passed"] for row in data["rows"])
    assert RunHistory(tmp_path).last()["summary"]["failed"] == 0


@pytest.mark.parametrize("target_set, expected", [
    ("freeness", {"spin15": 0, "spin17": 0, "spin19": 0, "spin18": 0, "spin16-vw": 0, "spin20-vw": 0,
                  "hspin20": 0}),
    ("odd", {"hspin16-p7": 0, "spin14-p7": 28}),
])
def test_spin_table_freeness_and_odd_sets(runner, tmp_path, target_set, expected):
    path = tmp_path / "ledger.json"
    result = invoke(runner, ["spin-table", "--seed", "0", "--set", target_set, "--cache-dir", str(tmp_path),
                             "--json", str(path)])
    assert result.exit_code == EXIT_OK, result.output
    data = read_json(path)
    assert validate_schema(data, "spinstab.ledger/1")
    assert {row["target"]: row["found"] for row in data["rows"]} == expected
    assert all(row["passed"] for row in data["rows"])
    assert RunHistory(tmp_path).last()["config"]["set"] == target_set


# ============================================================================
# CONFIGURACIÓN Y SERVICIOS
# ============================================================================

def test_config_selection(monkeypatch):
    assert get_config("ci") is CIConfig
    monkeypatch.delenv("SPINSTAB_ENV", raising=False)
    assert get_config() is Config


def test_unknown_environment(runner):
    assert invoke(runner, ["--env", "produccion", "concordance"]).exit_code == EXIT_ERROR


def test_load_config_file(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("--field-ext = 2\nCACHE_DIR=/tmp/x  # comentario\n\n", encoding="utf-8")
    assert load_config_file(path) == {"field_ext": "2", "cache_dir": "/tmp/x"}
    path.write_text("sin igual\n", encoding="utf-8")
    from spinstab.exceptions import ReportReadError
    with pytest.raises(ReportReadError):
        load_config_file(path)


def test_representation_cache_hits_after_reload(tmp_path, gf2):
    cache = RepresentationCache(tmp_path)
    first = cache.representation("halfspin", 4, SIMPLY_CONNECTED, gf2)
    assert cache.stats() == {"hits": 0, "misses": 1, "entries": 1}
    assert cache.representation("halfspin", 4, SIMPLY_CONNECTED, gf2) is first

    reloaded = RepresentationCache(tmp_path, verify=True)
    again = reloaded.representation("halfspin", 4, SIMPLY_CONNECTED, gf2)
    assert reloaded.stats()["hits"] == 1
    assert again.dim == first.dim


def test_corrupted_cache_entry_is_rebuilt(tmp_path, gf2):
    cache = RepresentationCache(tmp_path)
    cache.representation("vector", 4, SIMPLY_CONNECTED, gf2)
    entry = next(iter(cache.manifest.values()))
    (tmp_path / entry["file"]).write_bytes(b"SPNR basura")
    rebuilt = RepresentationCache(tmp_path)
    rep = rebuilt.representation("vector", 4, SIMPLY_CONNECTED, gf2)
    assert rep.dim == 8
    assert rebuilt.stats()["misses"] == 1


def test_cache_singleton_follows_directory(tmp_path):
    a = get_rep_cache(tmp_path / "a")
    assert get_rep_cache(tmp_path / "a") is a
    assert get_rep_cache(tmp_path / "b") is not a


def test_cache_group_representation_odd_n(tmp_path):
    cache = RepresentationCache(tmp_path)
    rep = cache.group_representation(9, "spin", get_field(7))  # B_4 dentro de D_5
    assert rep.dim == 16


def test_run_history_appends(tmp_path):
    history = RunHistory(tmp_path)
    assert history.last() is None
    started = utc_now()
    history.append(build_manifest("eddim", {"range": "15..20"}, {}, started, utc_now(), {}))
    history.append(build_manifest("stab", {}, {"report": "abc"}, started, utc_now(), {"min_dim": 29}))
    assert [m["command"] for m in history.entries()] == ["eddim", "stab"]
    assert history.last()["digests"] == {"report": "abc"}
