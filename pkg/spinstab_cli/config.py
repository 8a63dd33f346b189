"""
Configuraciones de la CLI de spinstab.

Precedencia: opciones de la línea de comandos > archivo de configuración
(`--config`) > clase seleccionada por SPINSTAB_ENV.
"""

import os
from pathlib import Path
from typing import Dict

from spinstab.exceptions import InputValidationError, ReportReadError


class Config:
    """Configuración base."""
    TRIALS = 64
    FIELD_LADDER = (1, 2, 4)
    CACHE_DIR = os.environ.get("SPINSTAB_CACHE_DIR") or ".spinstab_cache"
    RNG_ALGORITHM = "PCG64"
    REPORT_TIMINGS = False
    LOG_LEVEL = "INFO"
    E8_FIELD_EXT = 5
    E8_SAMPLES = 20
    DEFAULT_ODD_CHAR = 7
    ENV = "default"


class DevelopmentConfig(Config):
    """Configuración para desarrollo."""
    LOG_LEVEL = "DEBUG"
    REPORT_TIMINGS = True
    ENV = "development"


class CIConfig(Config):
    """Configuración para integración continua: sin tiempos, logs mínimos."""
    LOG_LEVEL = "WARNING"
    REPORT_TIMINGS = False
    ENV = "ci"


# Mapeo de configuraciones
config_by_name = {
    "development": DevelopmentConfig,
    "ci": CIConfig,
    "default": Config,
}


def get_config(name: str = None):
    name = name or os.environ.get("SPINSTAB_ENV", "default")
    if name not in config_by_name:
        raise InputValidationError("Entorno de configuración desconocido", field="SPINSTAB_ENV",
                                   value=name, expected_format=" | ".join(config_by_name))
    return config_by_name[name]


def option_key(text: str) -> str:
    """Clave normalizada de una opción: `--Field-Ext` y `field_ext` coinciden."""
    return text.strip().lstrip("-").replace("-", "_").lower()


def load_config_file(path) -> Dict[str, str]:
    """
    Lee un archivo `clave = valor` (comentarios con #). Las claves son los
    nombres largos de las opciones, con - o _ indistintamente.

    Raises:
        ReportReadError: archivo inexistente o línea sin '='
    """
    path = Path(path)
    if not path.is_file():
        raise ReportReadError(f"El archivo de configuración no existe: {path}", filepath=str(path))
    values: Dict[str, str] = {}
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ReportReadError(f"Línea {number} sin '='", filepath=str(path))
        key, value = line.split("=", 1)
        values[option_key(key)] = value.strip()
    return values
