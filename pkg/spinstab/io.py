"""
================================================================================
MÓDULO DE ENTRADA/SALIDA (I/O)
================================================================================
Lectura y escritura de los artefactos del proyecto con manejo de errores
try-except-finally:

- Reportes JSON canónicos (claves ordenadas, indentación 2, salto de línea
  final) para que dos ejecuciones iguales produzcan bytes idénticos.
- Tablas CSV a partir de DataFrames de pandas.
- Formato binario de representaciones en caché:

      b"SPNR" | uint32 LE longitud del encabezado | encabezado JSON UTF-8
      | filas int64 LE | columnas int64 LE | valores int64 LE

  con las tripletas COO de todas las acciones concatenadas; el encabezado
  guarda el número de entradas de cada acción.
================================================================================
"""

import json
import struct
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from spinstab.exceptions import ReportReadError, ReportSaveError, ReportSchemaError
from spinstab.spinrep import Representation, SparseAction
from spinstab.stab import StabilizerReport
from spinstab.utils import get_logger, sha256_bytes
from spinstab.validation import validate_schema

logger = get_logger(__name__)

PathLike = Union[str, Path]

REP_MAGIC = b"SPNR"
REP_FORMAT_VERSION = 1


# ============================================================================
# JSON
# ============================================================================

def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, separators=(",", ": "), ensure_ascii=False) + "\n"


def _ensure_parent(filepath: Path) -> None:
    directory = filepath.parent
    if str(directory) and not directory.exists():
        logger.info(f"📁 Creando directorio: {directory}")
        directory.mkdir(parents=True, exist_ok=True)


def save_json(data, filepath: PathLike) -> str:
    """
    Guarda `data` como JSON canónico.

    Returns:
        str: sha256 del contenido escrito

    Raises:
        ReportSaveError: si no se puede escribir o serializar
    """
    filepath = Path(filepath)
    try:
        text = canonical_json(data)
        _ensure_parent(filepath)
        logger.info(f"💾 Guardando reporte: {filepath}")
        filepath.write_text(text, encoding="utf-8")
        return sha256_bytes(text.encode("utf-8"))

    except TypeError as e:
        raise ReportSaveError("El reporte contiene valores no serializables", filepath=str(filepath),
                              original_error=e)

    except PermissionError as e:
        raise ReportSaveError("No hay permisos para escribir en la ruta especificada",
                              filepath=str(filepath), original_error=e)

    except OSError as e:
        raise ReportSaveError(f"Error del sistema operativo al guardar: {e.strerror}",
                              filepath=str(filepath), original_error=e)

    finally:
        logger.debug("📋 Operación de guardado finalizada")


def read_json(filepath: PathLike):
    """
    Lee un JSON del disco.

    Raises:
        ReportReadError: archivo inexistente, ilegible o JSON corrupto
    """
    filepath = Path(filepath)
    try:
        if not filepath.exists():
            raise ReportReadError(f"El archivo no existe: {filepath}", filepath=str(filepath))
        if not filepath.is_file():
            raise ReportReadError(f"La ruta no corresponde a un archivo: {filepath}",
                                  filepath=str(filepath))
        logger.info(f"📂 Leyendo archivo: {filepath}")
        return json.loads(filepath.read_text(encoding="utf-8"))

    except ReportReadError:
        raise

    except json.JSONDecodeError as e:
        raise ReportReadError("JSON corrupto", filepath=str(filepath), original_error=e)

    except UnicodeDecodeError as e:
        raise ReportReadError("El archivo no está en UTF-8", filepath=str(filepath), original_error=e)

    except PermissionError as e:
        raise ReportReadError("No hay permisos para leer el archivo", filepath=str(filepath),
                              original_error=e)

    except OSError as e:
        raise ReportReadError(f"Error inesperado al leer el archivo: {type(e).__name__}",
                              filepath=str(filepath), original_error=e)

    finally:
        logger.debug("📋 Operación de lectura finalizada")


def save_stab_report(report: StabilizerReport, filepath: PathLike, include_runtime: bool = False) -> str:
    return save_json(report.to_dict(include_runtime=include_runtime), filepath)


def read_stab_report(filepath: PathLike) -> StabilizerReport:
    """Lee y valida un reporte `spinstab.stab/1`."""
    data = read_json(filepath)
    validate_schema(data, "spinstab.stab/1")
    try:
        return StabilizerReport.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise ReportSchemaError("Reporte de estabilizador malformado",
                                invalid_types={"<reporte>": str(e)}) from e


def read_certificate(filepath: PathLike) -> dict:
    data = read_json(filepath)
    validate_schema(data, "spinstab.e8/1")
    return data


# ============================================================================
# CSV
# ============================================================================

def save_table_csv(df: pd.DataFrame, filepath: PathLike) -> bool:
    """Guarda una tabla de resultados sin índice."""
    filepath = Path(filepath)
    try:
        if not isinstance(df, pd.DataFrame):
            raise ReportSaveError(f"Se esperaba un DataFrame, se recibió: {type(df).__name__}",
                                  filepath=str(filepath))
        _ensure_parent(filepath)
        logger.info(f"💾 Guardando tabla: {filepath}")
        df.to_csv(filepath, index=False, lineterminator="\n")
        return True

    except ReportSaveError:
        raise

    except PermissionError as e:
        raise ReportSaveError("No hay permisos para escribir en la ruta especificada",
                              filepath=str(filepath), original_error=e)

    except OSError as e:
        raise ReportSaveError(f"Error del sistema operativo al guardar: {e.strerror}",
                              filepath=str(filepath), original_error=e)

    finally:
        logger.debug("📋 Operación de guardado finalizada")


# ============================================================================
# FORMATO BINARIO DE REPRESENTACIONES
# ============================================================================

def encode_representation(rep: Representation) -> bytes:
    header = dict(rep.header())
    header["version"] = REP_FORMAT_VERSION
    header["weights"] = rep.weights.tolist()
    header["nnz"] = [a.nnz for a in rep.actions]
    header_bytes = canonical_json(header).encode("utf-8")
    rows = np.concatenate([a.rows for a in rep.actions]).astype("<i8")
    cols = np.concatenate([a.cols for a in rep.actions]).astype("<i8")
    values = np.concatenate([a.values for a in rep.actions]).astype("<i8")
    return b"".join([REP_MAGIC, struct.pack("<I", len(header_bytes)), header_bytes,
                     rows.tobytes(), cols.tobytes(), values.tobytes()])


def decode_representation(data: bytes, algebra) -> Representation:
    """
    Reconstruye una representación sobre `algebra` (debe coincidir en
    dimensión y cuerpo con la guardada).

    Raises:
        ReportReadError: formato, versión o álgebra incompatibles
    """
    if data[:4] != REP_MAGIC:
        raise ReportReadError("Cabecera binaria desconocida (se esperaba SPNR)")
    try:
        (length,) = struct.unpack("<I", data[4:8])
        header = json.loads(data[8:8 + length].decode("utf-8"))
        body = np.frombuffer(data[8 + length:], dtype="<i8").astype(np.int64)
    except (struct.error, ValueError) as e:
        raise ReportReadError("Representación binaria truncada o corrupta", original_error=e)

    if header.get("version") != REP_FORMAT_VERSION:
        raise ReportReadError(f"Versión de formato no soportada: {header.get('version')}")
    if header["algebra_dim"] != algebra.dim or header["field"] != algebra.field.describe():
        raise ReportReadError("La representación guardada corresponde a otra álgebra")

    counts = header["nnz"]
    total = sum(counts)
    if body.size != 3 * total:
        raise ReportReadError("Número de entradas COO inconsistente con el encabezado")
    rows, cols, values = body[:total], body[total:2 * total], body[2 * total:]
    offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    dim = header["dim"]
    actions = [
        SparseAction(dim, rows[a:b].copy(), cols[a:b].copy(), values[a:b].copy())
        for a, b in zip(offsets[:-1], offsets[1:])
    ]
    return Representation(algebra, dim, actions, np.array(header["weights"], dtype=np.int64),
                          header["kind"], header["meta"])


def save_representation(rep: Representation, filepath: PathLike) -> str:
    """Escribe el formato binario y devuelve su sha256."""
    filepath = Path(filepath)
    try:
        payload = encode_representation(rep)
        _ensure_parent(filepath)
        logger.info(f"💾 Guardando representación {rep.kind} ({rep.dim}): {filepath}")
        filepath.write_bytes(payload)
        return sha256_bytes(payload)

    except PermissionError as e:
        raise ReportSaveError("No hay permisos para escribir en la caché", filepath=str(filepath),
                              original_error=e)

    except OSError as e:
        raise ReportSaveError(f"Error del sistema operativo al guardar: {e.strerror}",
                              filepath=str(filepath), original_error=e)

    finally:
        logger.debug("📋 Operación de guardado finalizada")


def load_representation(filepath: PathLike, algebra) -> Representation:
    filepath = Path(filepath)
    try:
        if not filepath.is_file():
            raise ReportReadError(f"El archivo no existe: {filepath}", filepath=str(filepath))
        logger.info(f"📂 Cargando representación: {filepath}")
        return decode_representation(filepath.read_bytes(), algebra)

    except ReportReadError as e:
        e.details.setdefault("filepath", str(filepath))
        raise

    except PermissionError as e:
        raise ReportReadError("No hay permisos para leer el archivo", filepath=str(filepath),
                              original_error=e)

    except OSError as e:
        raise ReportReadError(f"Error inesperado al leer el archivo: {type(e).__name__}",
                              filepath=str(filepath), original_error=e)

    finally:
        logger.debug("📋 Operación de lectura finalizada")
