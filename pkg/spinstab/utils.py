"""
Utilidades transversales: logger del proyecto, cronómetro y hashing.
"""

import hashlib
import logging
import os
import time
from contextlib import contextmanager

_LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def get_logger(name: str = "spinstab", log_level: int = None) -> logging.Logger:
    """
    Devuelve un logger con un único StreamHandler.

    El nivel se toma, en orden, de `log_level`, de la variable de entorno
    SPINSTAB_LOG_LEVEL o de WARNING.
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
    if log_level is None:
        env_level = os.environ.get("SPINSTAB_LOG_LEVEL", "WARNING").upper()
        log_level = getattr(logging, env_level, logging.WARNING)
    logger.setLevel(log_level)
    return logger


def set_log_level(log_level) -> None:
    """Aplica un nivel a todos los loggers ya creados del paquete."""
    if isinstance(log_level, str):
        log_level = getattr(logging, log_level.upper(), logging.INFO)
    for name in list(logging.root.manager.loggerDict):
        if name == "spinstab" or name.startswith("spinstab.") or name.startswith("spinstab_cli"):
            logging.getLogger(name).setLevel(log_level)


@contextmanager
def timed(logger: logging.Logger, label: str):
    """Registra inicio y fin de un bloque con los milisegundos transcurridos."""
    start = time.perf_counter()
    logger.info(f"🔄 {label}...")
    try:
        yield
    finally:
        elapsed = (time.perf_counter() - start) * 1000.0
        logger.info(f"✅ {label} ({elapsed:.1f} ms)")


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()
