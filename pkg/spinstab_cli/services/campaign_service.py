"""
================================================================================
SERVICIO DE CAMPAÑAS DE VERIFICACIÓN
================================================================================
Orquesta las campañas de la CLI sobre la caché de representaciones y deja
constancia de cada ejecución:

- `CampaignService.certify`: recorre una lista de objetivos escalando por la
  escalera de cuerpos GF(2) → GF(4) → GF(16).
- `RunHistory`: cada campaña añade un RunManifest (comando, configuración,
  resúmenes sha256 de los artefactos, versión, tiempos y resumen PASS/FAIL)
  a `<cache_dir>/history.json`.

Los tiempos de reloj solo viven en el manifiesto; los reportes no los llevan
salvo que se activen explícitamente.
================================================================================
"""

from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from spinstab import __version__
from spinstab.exceptions import ReportReadError
from spinstab.io import read_json, save_json
from spinstab.stab import DEFAULT_LADDER, LedgerRow, Target, certify_target
from spinstab.utils import get_logger
from spinstab_cli.services.rep_cache import RepresentationCache

logger = get_logger(__name__)

HISTORY_NAME = "history.json"
MANIFEST_SCHEMA = "spinstab.manifest/1"


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def build_manifest(command: str, config: dict, digests: Dict[str, str], started: str,
                   finished: str, summary: dict) -> dict:
    """RunManifest como diccionario JSON."""
    return {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "config": dict(config),
        "digests": dict(digests),
        "version": __version__,
        "started": started,
        "finished": finished,
        "summary": dict(summary),
    }


class RunHistory:
    """Historial de ejecuciones en `<cache_dir>/history.json`."""

    def __init__(self, cache_dir):
        self.path = Path(cache_dir) / HISTORY_NAME

    def entries(self) -> List[dict]:
        if not self.path.is_file():
            return []
        try:
            data = read_json(self.path)
        except ReportReadError as e:
            logger.warning(f"⚠️ Historial ilegible, se ignora: {e.message}")
            return []
        return data if isinstance(data, list) else []

    def append(self, manifest: dict) -> None:
        entries = self.entries()
        entries.append(manifest)
        save_json(entries, self.path)
        logger.info(f"📋 Ejecución registrada en {self.path} ({len(entries)} entradas)")

    def last(self) -> Optional[dict]:
        entries = self.entries()
        return entries[-1] if entries else None


class CampaignService:
    """Campañas de certificación sobre una caché compartida."""

    def __init__(self, cache: RepresentationCache):
        self.cache = cache
        self.history = RunHistory(cache.cache_dir)

    def certify(self, targets: Sequence[Target], trials: int, seed: int,
                ladder: Sequence[int] = DEFAULT_LADDER) -> List[LedgerRow]:
        ledger = []
        for target in targets:
            logger.info(f"🔄 Objetivo {target.name}: dim esperada {target.expected_dim}")
            row = certify_target(target, trials, seed, ladder, self.cache.target_representation)
            status = "✅" if row.passed else "❌"
            logger.info(f"{status} {target.name}: mínimo {row.found} sobre {row.field}")
            ledger.append(row)
        return ledger

    def record(self, command: str, config: dict, digests: Dict[str, str], started: str,
               summary: dict) -> dict:
        manifest = build_manifest(command, config, digests, started, utc_now(), summary)
        self.history.append(manifest)
        return manifest


def ledger_summary(ledger: Sequence[LedgerRow]) -> dict:
    passed = sum(1 for row in ledger if row.passed)
    return {"passed": passed, "failed": len(ledger) - passed,
            "targets": {row.target: bool(row.passed) for row in ledger}}
