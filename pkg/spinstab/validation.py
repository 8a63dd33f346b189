"""
================================================================================
MÓDULO DE VALIDACIÓN DE REPORTES Y ENTRADAS
================================================================================
Este módulo implementa funciones para:
- Validación de esquema de los reportes JSON (estabilizador, certificado E8,
  manifiesto de ejecución, tabla de ed)
- Conversión de tipos al releer un reporte
- Validación de las entradas de la CLI (n, representación, característica)
================================================================================
"""

from typing import Dict, List, Optional

from spinstab.exceptions import InputValidationError, ReportSchemaError
from spinstab.fields import is_prime
from spinstab.spinrep import REP_TAGS
from spinstab.utils import get_logger

logger = get_logger(__name__)


# ============================================================================
# CLAVES REQUERIDAS POR ESQUEMA
# ============================================================================

REQUIRED_KEYS = {
    "spinstab.stab/1": ["schema", "group", "rep", "field", "rng", "trials", "trials_run",
                        "min_dim", "histogram", "witness", "target", "passed"],
    "spinstab.e8/1": ["schema", "field", "seed", "samples", "gamma", "parts", "passed"],
    "spinstab.manifest/1": ["schema", "command", "config", "digests", "version", "started",
                            "finished", "summary"],
    "spinstab.edtable/1": ["schema", "rows"],
    "spinstab.ledger/1": ["schema", "seed", "trials", "rows"],
}

KEY_TYPES = {
    "group": dict,
    "rep": str,
    "field": (dict, str),
    "rng": dict,
    "trials": int,
    "trials_run": int,
    "min_dim": int,
    "histogram": dict,
    "witness": str,
    "seed": int,
    "samples": int,
    "gamma": dict,
    "parts": dict,
    "passed": (bool, type(None)),
    "command": str,
    "config": dict,
    "digests": dict,
    "rows": list,
}


# ============================================================================
# VALIDACIÓN DE ESQUEMA
# ============================================================================

def validate_schema(data: dict, schema: Optional[str] = None) -> bool:
    """
    Valida que un reporte contenga todas las claves de su esquema y que cada
    una tenga el tipo esperado.

    Args:
        data (dict): Reporte ya decodificado
        schema (str): Esquema esperado (default: el declarado en `data`)

    Returns:
        bool: True si el reporte es válido

    Raises:
        ReportSchemaError: esquema desconocido, claves faltantes o tipos inválidos

    Example:
        >>> validate_schema(report.to_dict(), "spinstab.stab/1")
        True
    """
    if not isinstance(data, dict):
        raise ReportSchemaError("El reporte no es un objeto JSON",
                                invalid_types={"<raiz>": type(data).__name__})
    declared = data.get("schema")
    schema = schema or declared
    if schema not in REQUIRED_KEYS:
        raise ReportSchemaError(f"Esquema desconocido: {schema}", missing_keys=["schema"])
    if declared != schema:
        raise ReportSchemaError(f"Se esperaba el esquema {schema}, se encontró {declared}",
                                invalid_types={"schema": str(declared)})

    missing = [key for key in REQUIRED_KEYS[schema] if key not in data]
    if missing:
        raise ReportSchemaError("El reporte no contiene todas las claves requeridas",
                                missing_keys=missing)

    invalid: Dict[str, str] = {}
    for key in REQUIRED_KEYS[schema]:
        expected = KEY_TYPES.get(key)
        if expected is None:
            continue
        value = data[key]
        # bool es subclase de int
        if expected is int and isinstance(value, bool):
            invalid[key] = "bool"
        elif not isinstance(value, expected):
            invalid[key] = type(value).__name__
    if invalid:
        raise ReportSchemaError("Tipos inválidos en el reporte", invalid_types=invalid)

    logger.debug(f"🔍 Esquema {schema} válido ({len(REQUIRED_KEYS[schema])} claves)")
    return True


def convert_histogram(histogram: dict) -> Dict[int, int]:
    """Las claves JSON son cadenas; el histograma se usa con enteros."""
    try:
        return {int(k): int(v) for k, v in histogram.items()}
    except (TypeError, ValueError) as e:
        raise ReportSchemaError("Histograma con claves no enteras",
                                invalid_types={"histogram": str(e)}) from e


# ============================================================================
# ENTRADAS DE LA CLI
# ============================================================================

def validate_rep_tag(rep: str) -> str:
    rep = rep.strip().lower()
    aliases = {"half-spin": "halfspin", "vector+half-spin": "vector+halfspin", "vw": "vector+halfspin"}
    rep = aliases.get(rep, rep)
    if rep not in REP_TAGS:
        raise InputValidationError("Representación desconocida", field="rep", value=rep,
                                   expected_format=" | ".join(REP_TAGS))
    return rep


def validate_group_args(n: int, rep: str) -> None:
    """Para n impar solo hay modelo de la representación spin."""
    if n < 6:
        raise InputValidationError("Se requiere n ≥ 6", field="n", value=n)
    if n % 2 and rep != "spin":
        raise InputValidationError("Para n impar solo existe la representación spin", field="rep",
                                   value=rep)


def validate_characteristic(char: int) -> int:
    if not is_prime(char):
        raise InputValidationError("La característica debe ser un primo", field="char", value=char)
    return char


def parse_int_list(text: str, name: str = "values") -> List[int]:
    """'1,1,0,-1' → [1, 1, 0, -1]; acepta espacios."""
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as e:
        raise InputValidationError("Lista de enteros ilegible", field=name, value=text,
                                   expected_format="a,b,c") from e
