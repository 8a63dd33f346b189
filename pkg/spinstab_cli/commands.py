"""
================================================================================
COMANDOS DE LA CLI DE SPINSTAB
================================================================================
Subcomandos:
- stab         búsqueda de estabilizador genérico (objetivo o n/rep/char)
- fixed-space  tipos de Jordan, dim V^x y autoespacios de elementos del toro
- eddim        tabla de dimensión esencial
- e8-verify    certificado E8 / HSpin_16
- spin-table   campaña de la tabla para n pequeño (y de libertad genérica)
- concordance  afirmación → comando que la verifica

Códigos de salida: 0 objetivo alcanzado, 1 objetivo no alcanzado,
2 error de uso o de construcción.
================================================================================
"""

import functools
import sys
import time
from typing import Dict, Optional

import click
from click.core import ParameterSource

from spinstab.analysis import campaign_summary, concordance_frame, ed_table_frame, histogram_frame, ledger_frame
from spinstab.chevalley import SIMPLY_CONNECTED, center, span_dim
from spinstab.e8_certificate import hadamard_matrix, run_certificate
from spinstab.edim import ed_table, generic_freeness_inequality, parse_range
from spinstab.elements import (
    ExponentVector,
    Partition,
    enumerate_exponent_vectors,
    jordan_type,
    nilpotent_from_partition,
    sample_exponent_vectors,
    semisimple_bound_violations,
    torus_fixed_dim,
    torus_max_eigenspace,
)
from spinstab.exceptions import InputValidationError, SpinStabError, format_error_message
from spinstab.fields import get_field, parse_field
from spinstab.io import canonical_json, save_json, save_table_csv
from spinstab.roots import build_root_system
from spinstab.spinrep import halfspin_weights
from spinstab.stab import (
    FREENESS_TARGETS,
    ODD_CHAR_TARGETS,
    SMALL_N_TARGETS,
    fixed_space_dim,
    find_target,
    ladder_fields,
    match_target,
    search_generic_stab,
    trial_rng,
    verify_witness,
)
from spinstab.utils import get_logger, set_log_level, sha256_bytes
from spinstab.validation import validate_characteristic, validate_group_args, validate_rep_tag
from spinstab_cli.config import get_config, load_config_file, option_key
from spinstab_cli.services.campaign_service import CampaignService, ledger_summary, utc_now
from spinstab_cli.services.rep_cache import get_rep_cache

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MISSED = 1
EXIT_ERROR = 2

EXHAUSTIVE_LIMIT = 200_000


def handle_errors(command):
    """Convierte los errores del dominio en el código de salida 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SpinStabError as e:
            click.echo(format_error_message(e), err=True)
            sys.exit(EXIT_ERROR)

    return wrapper


def _digest(data) -> str:
    return sha256_bytes(canonical_json(data).encode("utf-8"))


def _emit_json(data, path: Optional[str]) -> str:
    """Escribe `data` en `path` ('-' = stdout) y devuelve el sha256 del contenido."""
    if path == "-":
        click.echo(canonical_json(data), nl=False)
        return _digest(data)
    if path:
        return save_json(data, path)
    return _digest(data)


def _service(ctx: click.Context, cache_dir: Optional[str], verify: bool = False) -> CampaignService:
    config = ctx.obj["config"]
    cache = get_rep_cache(cache_dir or config.CACHE_DIR, verify=verify)
    return CampaignService(cache)


_FLAG_WORDS = {"1", "0", "true", "false", "t", "f", "yes", "no", "y", "n", "on", "off"}


def build_default_map(group: click.Group, values: Dict[str, str]) -> Dict[str, Dict[str, str]]:
    """
    Traduce las claves del archivo de configuración (nombres largos de las
    opciones) al nombre del parámetro de cada subcomando, que es la clave que
    espera `ctx.default_map`. Una opción booleana solo recibe valores booleanos.

    Raises:
        InputValidationError: alguna clave no es opción de ningún subcomando
    """
    default_map: Dict[str, Dict[str, str]] = {}
    used = set()
    for command_name, command in group.commands.items():
        defaults = {}
        for param in command.params:
            if not isinstance(param, click.Option):
                continue
            for opt in param.opts:
                key = option_key(opt)
                if not opt.startswith("--") or key not in values:
                    continue
                used.add(key)
                if param.is_flag and values[key].lower() not in _FLAG_WORDS:
                    continue
                defaults[param.name] = values[key]
        default_map[command_name] = defaults
    unknown = sorted(set(values) - used)
    if unknown:
        raise InputValidationError("Claves de configuración desconocidas", field="config",
                                   value=unknown, expected_format="nombre largo de una opción")
    return default_map


# ============================================================================
# GRUPO PRINCIPAL
# ============================================================================

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_file", type=click.Path(dir_okay=False),
              help="Archivo clave = valor con valores por defecto de las opciones.")
@click.option("--env", default=None, help="Configuración base (default | development | ci).")
@click.option("--log-level", default=None, help="Nivel de logging (DEBUG, INFO, WARNING...).")
@click.pass_context
@handle_errors
def cli(ctx: click.Context, config_file: Optional[str], env: Optional[str], log_level: Optional[str]):
    """Estabilizadores genéricos de Spin_n y dimensión esencial."""
    config = get_config(env)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config
    set_log_level(log_level or config.LOG_LEVEL)
    if config_file:
        values = load_config_file(config_file)
        ctx.default_map = build_default_map(cli, values)
        ctx.obj["config_file"] = values


# ============================================================================
# stab
# ============================================================================

def _explicit(ctx: click.Context, name: str) -> bool:
    return ctx.get_parameter_source(name) == ParameterSource.COMMANDLINE


def _check_target_options(ctx: click.Context, target, n, rep, characteristic, hspin) -> None:
    """--n, --rep, --char y --hspin dados junto con --group deben coincidir con el objetivo."""
    reps = {target.rep}
    if target.rep in ("spin", "halfspin") and target.n % 2 == 0:
        reps = {"spin", "halfspin"}
    conflicts = []
    if _explicit(ctx, "n") and n != target.n:
        conflicts.append(f"--n {n} (objetivo: {target.n})")
    if _explicit(ctx, "rep") and validate_rep_tag(rep) not in reps:
        conflicts.append(f"--rep {rep} (objetivo: {target.rep})")
    if _explicit(ctx, "characteristic") and characteristic != target.characteristic:
        conflicts.append(f"--char {characteristic} (objetivo: {target.characteristic})")
    if _explicit(ctx, "hspin") and hspin != target.half_spin_lattice:
        conflicts.append(f"--hspin (objetivo: {target.isogeny})")
    if conflicts:
        raise click.UsageError(f"{target.name} no es compatible con " + ", ".join(conflicts))


@cli.command("stab")
@click.option("--group", "group_name", default=None, help="Objetivo con nombre (spin14, hspin20, ...).")
@click.option("--n", type=click.IntRange(min=6), default=None)
@click.option("--rep", default="spin", show_default=True, help="spin | halfspin | vector | vector+halfspin")
@click.option("--char", "characteristic", type=int, default=2, show_default=True)
@click.option("--hspin", is_flag=True, help="Retículo half-spin (HSpin_n).")
@click.option("--field-ext", type=click.IntRange(min=1, max=8), default=None,
              help="Fija GF(char^e) en lugar de la escalera de cuerpos.")
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, required=True)
@click.option("--json", "json_path", default=None, help="Ruta del reporte JSON ('-' = stdout).")
@click.option("--csv", "csv_path", default=None, help="Histograma de dim g_v en CSV.")
@click.option("--cache-dir", default=None)
@click.option("--timings", is_flag=True, help="Incluye runtime_ms en el reporte.")
@click.option("--verify-cache", is_flag=True, help="Verifica las representaciones recargadas.")
@click.pass_context
@handle_errors
def stab_command(ctx, group_name, n, rep, characteristic, hspin, field_ext, trials, seed, json_path,
                 csv_path, cache_dir, timings, verify_cache):
    """Dimensión mínima del estabilizador infinitesimal sobre vectores aleatorios."""
    config = ctx.obj["config"]
    started = utc_now()
    trials = trials or config.TRIALS
    service = _service(ctx, cache_dir, verify_cache)
    ladder = (field_ext,) if field_ext else config.FIELD_LADDER

    if group_name:
        target = find_target(group_name)
        _check_target_options(ctx, target, n, rep, characteristic, hspin)
    else:
        if n is None:
            raise click.UsageError("Se requiere --group o --n")
        rep = validate_rep_tag(rep)
        validate_characteristic(characteristic)
        validate_group_args(n, rep)
        target = match_target(n, rep, characteristic, "hspin" if hspin else "spin")

    if target is not None:
        row = service.certify([target], trials, seed, ladder)[0]
        report = row.report
        field = parse_field(row.field)
        representation = service.cache.target_representation(target, field)
    else:
        field = ladder_fields(characteristic, ladder)[0]
        representation = service.cache.group_representation(n, rep, field, hspin)
        report = search_generic_stab(representation, trials, seed,
                                     group={"n": n, "isogeny": "hspin" if hspin else "spin", "rep": rep})
    verify_witness(representation, report)

    data = report.to_dict(include_runtime=timings or config.REPORT_TIMINGS)
    digest = _emit_json(data, json_path)
    if csv_path:
        save_table_csv(histogram_frame(report), csv_path)

    if json_path != "-":
        name = target.name if target else f"n={n} {rep}"
        click.echo(f"Grupo: {name}  Representación: {report.rep}  Cuerpo: {field.name}")
        click.echo(f"Ensayos: {report.trials_run}/{report.trials}  dim mínima: {report.min_dim}")
        if report.target is not None:
            click.echo(f"Objetivo: {report.target}  {'PASS' if report.passed else 'FAIL'}")
        click.echo(histogram_frame(report).to_string(index=False))

    service.record("stab", {"target": target.name if target else None, "n": n, "rep": rep,
                            "char": characteristic, "trials": trials, "seed": seed,
                            "ladder": list(ladder)},
                   {"report": digest}, started,
                   {"min_dim": report.min_dim, "passed": report.passed})
    sys.exit(EXIT_MISSED if report.passed is False else EXIT_OK)


# ============================================================================
# fixed-space
# ============================================================================

@cli.command("fixed-space")
@click.option("--n", type=click.IntRange(min=6), required=True)
@click.option("--partition", default=None, help="Partición del nilpotente (ej. 2,2,2,2,1x8).")
@click.option("--jordan", is_flag=True, help="Muestra el tipo de Jordan sobre la (half-)spin.")
@click.option("--torus", default=None, help="Exponentes c_1,...,c_r del elemento del toro.")
@click.option("--order", "modulus", type=click.IntRange(min=2), default=64, show_default=True,
              help="Orden m de ζ para --torus / --survey.")
@click.option("--max", "max_eigenspace", is_flag=True, help="Mayor autoespacio en vez de dim V^t.")
@click.option("--survey", is_flag=True, help="Cotas 3/4 (Lie) y 5/8 (toro) sobre muestras.")
@click.option("--samples", type=click.IntRange(min=1), default=200, show_default=True)
@click.option("--char", "characteristic", type=int, default=None,
              help="Característica impar para nilpotentes y muestras (default: config).")
@click.option("--seed", type=int, default=None, help="Obligatoria con --survey.")
@click.option("--cache-dir", default=None)
@click.option("--json", "json_path", default=None)
@click.pass_context
@handle_errors
def fixed_space_command(ctx, n, partition, jordan, torus, modulus, max_eigenspace, survey, samples,
                        characteristic, seed, cache_dir, json_path):
    """dim V^x para nilpotentes por partición y elementos del toro."""
    config = ctx.obj["config"]
    characteristic = validate_characteristic(characteristic or config.DEFAULT_ODD_CHAR)
    r = (n + 1) // 2
    modes = [bool(partition), bool(torus), survey]
    if sum(modes) != 1:
        raise click.UsageError("Elija exactamente uno de --partition, --torus o --survey")
    weights = halfspin_weights(r, 0)

    if partition:
        field = get_field(characteristic)
        service = _service(ctx, cache_dir)
        rep = service.cache.representation("halfspin", r, SIMPLY_CONNECTED, field)
        lam = Partition.parse(partition, n)
        nil = nilpotent_from_partition(n, lam, field, algebra=rep.algebra)
        result = {"n": n, "partition": str(lam), "field": field.name, "module_dim": rep.dim,
                  "fixed_dim": fixed_space_dim(rep, nil.element)}
        if jordan:
            result["jordan_type"] = str(jordan_type(rep.act(nil.element)))
        click.echo(f"Partición {lam} en so_{n}: dim V^x = {result['fixed_dim']} (dim V = {rep.dim})")
        if jordan:
            click.echo(f"Tipo de Jordan sobre la spin: {result['jordan_type']}")

    elif torus:
        c = ExponentVector.parse(torus, modulus)
        if c.rank != r:
            raise click.BadParameter(f"se esperaban {r} exponentes", param_hint="--torus")
        value = torus_max_eigenspace(weights, c) if max_eigenspace else torus_fixed_dim(weights, c)
        result = {"n": n, "torus": list(c.coords), "order": modulus, "module_dim": len(weights),
                  "max_eigenspace" if max_eigenspace else "fixed_dim": value}
        label = "mayor autoespacio" if max_eigenspace else "dim V^t"
        click.echo(f"t = {c} sobre la half-spin de D{r}: {label} = {value}")

    else:
        if seed is None:
            raise click.UsageError("--survey requiere --seed")
        if n % 2:
            raise click.BadParameter("la encuesta usa la half-spin de D_{n/2}: n debe ser par",
                                     param_hint="--n")
        result = _survey(ctx, n, r, weights, modulus, samples, characteristic, seed, cache_dir)
        for key, value in result.items():
            click.echo(f"{key}: {value}")

    _emit_json(result, json_path)
    violations = result.get("lie_violations", 0) + result.get("torus_violations", 0)
    sys.exit(EXIT_MISSED if violations else EXIT_OK)


def _survey(ctx, n, r, weights, modulus, samples, characteristic, seed, cache_dir) -> dict:
    roots = build_root_system("D", r).roots
    if modulus ** r <= EXHAUSTIVE_LIMIT:
        vectors = list(enumerate_exponent_vectors(r, modulus))
        mode = "exhaustive"
    else:
        vectors = sample_exponent_vectors(r, modulus, samples, trial_rng(seed, 0))
        mode = "sampled"
    torus_bad = semisimple_bound_violations(weights, roots, vectors)

    field = get_field(characteristic)
    rep = _service(ctx, cache_dir).cache.representation("halfspin", r, SIMPLY_CONNECTED, field)
    alg = rep.algebra
    central = center(alg)
    lie_bad = 0
    checked = 0
    for k in range(samples):
        x = alg.random_element(trial_rng(seed, k + 1))
        if central.nrows and span_dim(list(central.to_array()) + [x], field) == central.nrows:
            continue
        checked += 1
        if 4 * fixed_space_dim(rep, x) > 3 * rep.dim:
            lie_bad += 1
    return {"n": n, "order": modulus, "torus_mode": mode, "torus_checked": len(vectors),
            "torus_violations": len(torus_bad), "lie_checked": checked, "lie_violations": lie_bad}


# ============================================================================
# eddim
# ============================================================================

@cli.command("eddim")
@click.argument("n_range")
@click.option("--group", type=click.Choice(["Spin", "HSpin"]), default="Spin", show_default=True)
@click.option("--csv", "as_csv", is_flag=True, help="Emite CSV por stdout.")
@click.option("--inequality", is_flag=True, help="Añade la desigualdad de libertad genérica.")
@click.option("--json", "json_path", default=None)
@handle_errors
def eddim_command(n_range, group, as_csv, inequality, json_path):
    """Tabla de ed(Spin_n) / ed(HSpin_n) para un rango 'a..b'."""
    span = parse_range(n_range)
    results = ed_table(span.start, span.stop - 1, group)
    frame = ed_table_frame(results)
    if inequality and len(frame):
        checks = [generic_freeness_inequality(int(k)) for k in frame["n"]]
        frame["lhs"] = [c.lhs for c in checks]
        frame["rhs"] = [c.rhs for c in checks]
        frame["inequality"] = [c.holds for c in checks]
    if as_csv:
        click.echo(frame.to_csv(index=False, lineterminator="\n"), nl=False)
    else:
        click.echo(frame.to_string(index=False))
        for result in results:
            if not result.in_formula_domain:
                click.echo(f"n = {result.n}: fuera del dominio de la fórmula cerrada (valor tabulado)")
    if json_path:
        _emit_json({"schema": "spinstab.edtable/1", "rows": [r.to_dict() for r in results]}, json_path)
    sys.exit(EXIT_OK)


# ============================================================================
# e8-verify
# ============================================================================

@cli.command("e8-verify")
@click.option("--seed", type=int, required=True)
@click.option("--field-ext", type=click.IntRange(min=4, max=8), default=None)
@click.option("--samples", type=click.IntRange(min=1), default=None)
@click.option("--r-prime-samples", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--tamper", default=None, help="Invierte el signo de la entrada i,j de H_8.")
@click.option("--json", "json_path", default=None)
@click.option("--cache-dir", default=None)
@click.pass_context
@handle_errors
def e8_verify_command(ctx, seed, field_ext, samples, r_prime_samples, tamper, json_path, cache_dir):
    """Certificado del estabilizador de HSpin_16 sobre la half-spin (característica 2)."""
    config = ctx.obj["config"]
    started = utc_now()
    h8 = None
    if tamper:
        try:
            i, j = (int(x) for x in tamper.split(","))
        except ValueError:
            raise click.BadParameter("formato i,j", param_hint="--tamper")
        if not (0 <= i < 8 and 0 <= j < 8):
            raise click.BadParameter("índices entre 0 y 7", param_hint="--tamper")
        h8 = hadamard_matrix()
        h8[i, j] = -h8[i, j]
    certificate = run_certificate(field_ext or config.E8_FIELD_EXT, samples or config.E8_SAMPLES, seed,
                                  r_prime_samples, h8)
    digest = _emit_json(certificate, json_path)
    if json_path != "-":
        for name, ok in certificate["gamma"]["checks"].items():
            click.echo(f"Γ {name}: {'PASS' if ok else 'FAIL'}")
        for part, verdict in certificate["parts"].items():
            click.echo(f"Parte ({part}): {verdict}")
    _service(ctx, cache_dir).record("e8-verify", {"seed": seed, "field": certificate["field"],
                                                  "samples": certificate["samples"],
                                                  "tampered": bool(tamper)},
                                    {"certificate": digest}, started, {"parts": certificate["parts"]})
    sys.exit(EXIT_OK if certificate["passed"] else EXIT_MISSED)


# ============================================================================
# spin-table
# ============================================================================

@cli.command("spin-table")
@click.option("--seed", type=int, required=True)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--set", "target_set", type=click.Choice(["small", "freeness", "odd"]), default="small",
              show_default=True, help="small: 6 ≤ n ≤ 14; freeness: libertad genérica; odd: car. ≠ 2.")
@click.option("--json", "json_path", default=None)
@click.option("--csv", "csv_path", default=None)
@click.option("--cache-dir", default=None)
@click.pass_context
@handle_errors
def spin_table_command(ctx, seed, trials, target_set, json_path, csv_path, cache_dir):
    """Campaña de objetivos con registro PASS/FAIL."""
    config = ctx.obj["config"]
    started = utc_now()
    trials = trials or config.TRIALS
    targets = {"small": SMALL_N_TARGETS, "freeness": FREENESS_TARGETS, "odd": ODD_CHAR_TARGETS}[target_set]
    service = _service(ctx, cache_dir)
    start = time.perf_counter()
    ledger = service.certify(targets, trials, seed, config.FIELD_LADDER)
    for row in ledger:
        target = find_target(row.target)
        verify_witness(service.cache.target_representation(target, parse_field(row.field)), row.report)
    elapsed = time.perf_counter() - start

    frame = ledger_frame(ledger)
    click.echo(frame.to_string(index=False))
    click.echo(campaign_summary(frame).to_string(index=False))
    logger.info(f"✅ Campaña {target_set} en {elapsed:.1f} s")
    if csv_path:
        save_table_csv(frame, csv_path)
    data = {"schema": "spinstab.ledger/1", "seed": seed, "trials": trials,
            "rows": [row.to_dict() for row in ledger]}
    digest = _emit_json(data, json_path)
    summary = ledger_summary(ledger)
    service.record("spin-table", {"set": target_set, "seed": seed, "trials": trials,
                                  "ladder": list(config.FIELD_LADDER), "env": config.ENV,
                                  "rng": config.RNG_ALGORITHM},
                   {"ledger": digest}, started, summary)
    sys.exit(EXIT_OK if summary["failed"] == 0 else EXIT_MISSED)


# ============================================================================
# concordance
# ============================================================================

@cli.command("concordance")
@click.option("--csv", "as_csv", is_flag=True)
@handle_errors
def concordance_command(as_csv):
    """Afirmaciones y el comando que verifica cada una."""
    frame = concordance_frame()
    if as_csv:
        click.echo(frame.to_csv(index=False, lineterminator="\n"), nl=False)
    else:
        click.echo(frame.to_string(index=False))
        click.echo(f"{len(frame)} afirmaciones")
    sys.exit(EXIT_OK)
