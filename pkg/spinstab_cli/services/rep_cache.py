"""
================================================================================
SERVICIO DE CACHÉ DE REPRESENTACIONES
================================================================================
Construir la half-spin de D_10 (190 acciones de 512×512) es el único paso de
varios segundos; este servicio guarda cada representación construida en el
formato binario SPNR dentro de `cache_dir` y la recarga en ejecuciones
posteriores.

- Clave: (tipo, rango, retículo, cuerpo), resumida con sha256.
- `manifest.json` asocia cada clave con su archivo y el sha256 del archivo;
  un archivo cuyo sha256 no coincide se descarta y se reconstruye.
- Las álgebras de Chevalley se mantienen en memoria por proceso.

PATRÓN: Singleton (una sola instancia por directorio de caché)
================================================================================
"""

from pathlib import Path
from typing import Dict, Optional, Tuple

from spinstab.chevalley import SIMPLY_CONNECTED, ChevalleyAlgebra, build_algebra
from spinstab.exceptions import ReportReadError, RepresentationBuildError
from spinstab.fields import FieldSpec
from spinstab.io import canonical_json, load_representation, read_json, save_json, save_representation
from spinstab.roots import build_root_system
from spinstab.spinrep import (
    Representation,
    b_type_subalgebra,
    check_representation,
    check_restrictedness,
    direct_sum,
    halfspin_rep,
    vector_rep,
)
from spinstab.stab import Target
from spinstab.utils import get_logger, sha256_bytes, sha256_file

logger = get_logger(__name__)

MANIFEST_NAME = "manifest.json"
VERIFY_SAMPLE_PAIRS = 64


class RepresentationCache:
    """
    Caché en disco de representaciones de D_r.

    Example:
        >>> cache = get_rep_cache(".spinstab_cache")
        >>> rep = cache.group_representation(18, "halfspin", get_field(2))
    """

    def __init__(self, cache_dir, verify: bool = False):
        self.cache_dir = Path(cache_dir)
        self.verify = verify
        self._algebras: Dict[Tuple, ChevalleyAlgebra] = {}
        self._memory: Dict[str, Representation] = {}
        self.hits = 0
        self.misses = 0
        self.manifest = self._load_manifest()

    # ------------------------------------------------------------------
    # Manifiesto
    # ------------------------------------------------------------------

    @property
    def manifest_path(self) -> Path:
        return self.cache_dir / MANIFEST_NAME

    def _load_manifest(self) -> dict:
        if not self.manifest_path.is_file():
            return {}
        try:
            data = read_json(self.manifest_path)
        except ReportReadError as e:
            logger.warning(f"⚠️ Manifiesto de caché ilegible, se reinicia: {e.message}")
            return {}
        return data if isinstance(data, dict) else {}

    def _save_manifest(self) -> None:
        save_json(self.manifest, self.manifest_path)

    @staticmethod
    def key(kind: str, rank: int, lattice: str, field: FieldSpec) -> dict:
        return {"kind": kind, "rank": rank, "lattice": lattice, "field": field.describe()}

    @staticmethod
    def digest(key: dict) -> str:
        return sha256_bytes(canonical_json(key).encode("utf-8"))

    # ------------------------------------------------------------------
    # Álgebras y representaciones
    # ------------------------------------------------------------------

    def algebra(self, rank: int, lattice: str, field: FieldSpec) -> ChevalleyAlgebra:
        key = (rank, lattice, field.p, field.e)
        if key not in self._algebras:
            self._algebras[key] = build_algebra(build_root_system("D", rank), lattice, field)
        return self._algebras[key]

    def representation(self, kind: str, rank: int, lattice: str, field: FieldSpec) -> Representation:
        """Half-spin ("halfspin") o vectorial ("vector") de D_rank, desde la caché si existe."""
        key = self.key(kind, rank, lattice, field)
        digest = self.digest(key)
        if digest in self._memory:
            return self._memory[digest]

        alg = self.algebra(rank, lattice, field)
        rep = self._load(digest, alg)
        if rep is None:
            self.misses += 1
            rep = self._build(kind, rank, alg)
            self._store(digest, key, rep)
        else:
            self.hits += 1
        if self.verify:
            self._verify(rep)
        self._memory[digest] = rep
        return rep

    def _build(self, kind: str, rank: int, alg: ChevalleyAlgebra) -> Representation:
        if kind == "halfspin":
            return halfspin_rep(rank, 0, algebra=alg)
        if kind == "vector":
            return vector_rep(rank, algebra=alg)
        raise RepresentationBuildError("Tipo de representación no cacheable", rep_kind=kind, rank=rank)

    def _load(self, digest: str, alg: ChevalleyAlgebra) -> Optional[Representation]:
        entry = self.manifest.get(digest)
        if entry is None:
            return None
        path = self.cache_dir / entry["file"]
        if not path.is_file() or sha256_file(path) != entry["sha256"]:
            logger.warning(f"⚠️ Entrada de caché inválida, se reconstruye: {path}")
            return None
        try:
            return load_representation(path, alg)
        except ReportReadError as e:
            logger.warning(f"⚠️ No se pudo recargar {path}: {e.message}")
            return None

    def _store(self, digest: str, key: dict, rep: Representation) -> None:
        filename = f"{digest[:16]}.spnr"
        file_digest = save_representation(rep, self.cache_dir / filename)
        self.manifest[digest] = {"key": key, "file": filename, "sha256": file_digest}
        self._save_manifest()

    def _verify(self, rep: Representation) -> None:
        alg = rep.algebra
        pairs = [(i, (i * 7 + 3) % alg.dim) for i in range(min(VERIFY_SAMPLE_PAIRS, alg.dim))]
        failures = check_representation(rep, [(i, j) for i, j in pairs if i != j])
        if rep.field.p == 2:
            failures += [(j, j) for j in check_restrictedness(rep)]
        if failures:
            raise RepresentationBuildError("La representación recargada no verifica la identidad",
                                           rep_kind=rep.kind, rank=len(failures))

    # ------------------------------------------------------------------
    # Representaciones por grupo
    # ------------------------------------------------------------------

    def group_representation(self, n: int, rep_tag: str, field: FieldSpec,
                             half_spin_lattice: bool = False) -> Representation:
        """Equivalente cacheado de `build_group_representation`."""
        lattice = "half-spin" if half_spin_lattice else SIMPLY_CONNECTED
        if n % 2:
            if rep_tag != "spin" or half_spin_lattice:
                raise RepresentationBuildError("Para n impar solo existe la representación spin",
                                               rep_kind=rep_tag, rank=n)
            return b_type_subalgebra(self.representation("halfspin", (n + 1) // 2, lattice, field)).representation
        r = n // 2
        if rep_tag in ("spin", "halfspin"):
            return self.representation("halfspin", r, lattice, field)
        if rep_tag == "vector":
            return self.representation("vector", r, lattice, field)
        return direct_sum(self.representation("vector", r, lattice, field),
                          self.representation("halfspin", r, lattice, field))

    def target_representation(self, target: Target, field: FieldSpec) -> Representation:
        """Fábrica compatible con `certify_target`."""
        return self.group_representation(target.n, target.rep, field, target.half_spin_lattice)

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "entries": len(self.manifest)}


# ============================================================================
# PATRÓN SINGLETON - INSTANCIA GLOBAL ÚNICA
# ============================================================================

_cache_instance: Optional[RepresentationCache] = None


def get_rep_cache(cache_dir, verify: bool = False) -> RepresentationCache:
    """
    Instancia única de la caché; se recrea si cambia el directorio.
    """
    global _cache_instance

    if _cache_instance is None or _cache_instance.cache_dir != Path(cache_dir):
        _cache_instance = RepresentationCache(cache_dir, verify)
    _cache_instance.verify = verify
    return _cache_instance


def reset_rep_cache() -> None:
    global _cache_instance
    _cache_instance = None
