"""
================================================================================
MÓDULO DE ESTABILIZADORES INFINITESIMALES
================================================================================
Matriz de acción x ↦ ρ(x)v, dimensión del estabilizador g_v, búsquedas
aleatorias con semilla que certifican cotas genéricas por semicontinuidad y
contraste contra la tabla de objetivos.

GENERADOR ALEATORIO:
    numpy Generator(PCG64(SeedSequence(seed, spawn_key=(trial,)))): cada
    ensayo tiene su propio flujo, así que el informe no depende del orden
    de ejecución.
================================================================================
"""

import base64
import time
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from spinstab.exactlin import FieldMatrix, rank
from spinstab.exceptions import InputValidationError, WitnessMismatchError
from spinstab.elements import ExponentVector, weight_exponents
from spinstab.fields import FieldSpec, get_field
from spinstab.roots import RootVec
from spinstab.spinrep import Representation, build_group_representation
from spinstab.utils import get_logger

logger = get_logger(__name__)

RNG_ALGORITHM = "PCG64"
RNG_STREAM = "SeedSequence(seed, spawn_key=(trial,))"
REPORT_SCHEMA = "spinstab.stab/1"
DEFAULT_LADDER = (1, 2, 4)


# ============================================================================
# OPERACIONES BÁSICAS
# ============================================================================

def action_matrix(rep: Representation, v) -> FieldMatrix:
    """Matriz dim(V) × dim(g) con columna j = ρ(b_j)·v."""
    return rep.action_on_vector(v)


def stab_dim(rep: Representation, v) -> int:
    """dim g_v = dim g − rank(x ↦ ρ(x)v)."""
    return rep.algebra.dim - rank(action_matrix(rep, v))


def fixed_space_dim(rep: Representation, x) -> int:
    """dim V^x = dim ker ρ(x)."""
    return rep.dim - rank(rep.act(x))


def group_fixed_dim(g: FieldMatrix) -> int:
    """
    dim V^g = dim ker(g − 1).

    Raises:
        InputValidationError: g no cuadrada o singular
    """
    if g.nrows != g.ncols:
        raise InputValidationError("Elemento de grupo no cuadrado", field="g", value=g.shape)
    if rank(g) != g.nrows:
        raise InputValidationError("Elemento de grupo singular", field="g", value=g.shape)
    return g.nrows - rank(g - FieldMatrix.identity(g.field, g.nrows))


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def conjugate_vector(rep: Representation, v, alpha: RootVec) -> np.ndarray:
    """(I + ρ(e_α))·v en característica 2."""
    if rep.field.p != 2:
        raise InputValidationError("La conjugación unipotente requiere característica 2",
                                   field="char", value=rep.field.p)
    alg = rep.algebra
    return rep.field.vadd(v, rep.apply(alg.e(alpha), v))


def torus_conjugate(rep: Representation, v, c: ExponentVector, xi: int) -> np.ndarray:
    """Aplica diag(ξ^{Σ d_i c_i}) a v (ξ de orden que divide 2m)."""
    f = rep.field
    if f.pow(xi, 2 * c.modulus) != 1:
        raise InputValidationError("ξ no tiene orden divisor de 2m", field="xi", value=xi)
    exps = weight_exponents(rep.weights, c)
    scale = np.array([f.pow(xi, int(e)) for e in exps], dtype=np.int64)
    return f.vmul(np.asarray(v, dtype=np.int64), scale)


# ============================================================================
# TESTIGOS
# ============================================================================

def encode_witness(v: np.ndarray, field: FieldSpec) -> str:
    """Base-64 de packbits sobre GF(2); de un byte por coordenada en otro caso."""
    v = np.asarray(v, dtype=np.int64)
    if field.is_binary:
        raw = np.packbits(v.astype(np.uint8)).tobytes()
    else:
        raw = v.astype(np.uint8).tobytes()
    return base64.b64encode(raw).decode("ascii")


def decode_witness(text: str, field: FieldSpec, dim: int) -> np.ndarray:
    try:
        raw = np.frombuffer(base64.b64decode(text.encode("ascii"), validate=True), dtype=np.uint8)
    except (ValueError, TypeError) as e:
        raise InputValidationError("Testigo no es base-64 válido", field="witness") from e
    if field.is_binary:
        v = np.unpackbits(raw)[:dim]
    else:
        v = raw
    if v.size != dim or np.any(v >= field.q):
        raise InputValidationError("Testigo con longitud o valores inválidos", field="witness",
                                   value=int(v.size), expected_format=str(dim))
    return v.astype(np.int64)


# ============================================================================
# INFORMES
# ============================================================================

@dataclass
class StabilizerReport:
    """Resultado de una búsqueda aleatoria de estabilizador genérico."""
    group: dict
    rep: str
    field: dict
    seed: int
    trials: int
    trials_run: int
    min_dim: int
    histogram: Dict[int, int]
    witness: str
    target: Optional[int] = None
    runtime_ms: Optional[float] = None

    @property
    def passed(self) -> Optional[bool]:
        if self.target is None:
            return None
        return self.min_dim == self.target

    def to_dict(self, include_runtime: bool = False) -> dict:
        data = {
            "schema": REPORT_SCHEMA,
            "group": self.group,
            "rep": self.rep,
            "field": self.field,
            "rng": {"algorithm": RNG_ALGORITHM, "seed": self.seed, "stream": RNG_STREAM},
            "trials": self.trials,
            "trials_run": self.trials_run,
            "min_dim": self.min_dim,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "witness": self.witness,
            "target": self.target,
            "passed": self.passed,
        }
        if include_runtime and self.runtime_ms is not None:
            data["runtime_ms"] = round(self.runtime_ms, 3)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "StabilizerReport":
        return cls(
            group=data["group"],
            rep=data["rep"],
            field=data["field"],
            seed=int(data["rng"]["seed"]),
            trials=int(data["trials"]),
            trials_run=int(data["trials_run"]),
            min_dim=int(data["min_dim"]),
            histogram={int(k): int(v) for k, v in data["histogram"].items()},
            witness=data["witness"],
            target=data.get("target"),
            runtime_ms=data.get("runtime_ms"),
        )


def search_generic_stab(rep: Representation, trials: int, seed: int, target: Optional[int] = None,
                        group: Optional[dict] = None) -> StabilizerReport:
    """
    Muestrea vectores uniformes del módulo y conserva el de menor dim g_v.
    Con `target`, termina en cuanto se alcanza.

    Raises:
        InputValidationError: trials < 1
    """
    if trials < 1:
        raise InputValidationError("Se requiere al menos un ensayo", field="trials", value=trials)
    start = time.perf_counter()
    histogram: Counter = Counter()
    best_dim, best_vec = None, None
    run = 0
    for trial in range(trials):
        v = rep.field.random(trial_rng(seed, trial), rep.dim)
        d = stab_dim(rep, v)
        histogram[d] += 1
        run += 1
        if best_dim is None or d < best_dim:
            best_dim, best_vec = d, v
        if target is not None and best_dim <= target:
            break
    elapsed = (time.perf_counter() - start) * 1000
    report = StabilizerReport(
        group=group or dict(rep.meta),
        rep=rep.kind,
        field=rep.field.describe(),
        seed=seed,
        trials=trials,
        trials_run=run,
        min_dim=best_dim,
        histogram=dict(histogram),
        witness=encode_witness(best_vec, rep.field),
        target=target,
        runtime_ms=elapsed,
    )
    verify_witness(rep, report)
    logger.info(f"🎲 {rep} | semilla {seed}: mínimo {best_dim} en {run} ensayos ({elapsed:.0f} ms)")
    return report


def verify_witness(rep: Representation, report: StabilizerReport) -> int:
    """
    Recalcula dim g_v del testigo guardado.

    Raises:
        WitnessMismatchError: la dimensión no coincide con min_dim
    """
    v = decode_witness(report.witness, rep.field, rep.dim)
    found = stab_dim(rep, v)
    if found != report.min_dim:
        raise WitnessMismatchError("El testigo no reproduce la dimensión del informe",
                                   expected=report.min_dim, found=found)
    return found


# ============================================================================
# OBJETIVOS
# ============================================================================

@dataclass(frozen=True)
class Target:
    """(n, isogenia, representación, característica) -> dim esperada del estabilizador."""
    name: str
    n: int
    isogeny: str
    rep: str
    characteristic: int
    expected_dim: int
    group: str
    claim: str

    @property
    def half_spin_lattice(self) -> bool:
        return self.isogeny == "hspin"

    def descriptor(self) -> dict:
        return {"n": self.n, "isogeny": self.isogeny, "rep": self.rep}


_SMALL_N = [
    (6, 11, "SL3·Ga^3"),
    (7, 14, "G2"),
    (8, 21, "Spin7"),
    (9, 21, "Spin7"),
    (10, 29, "Spin7·Ga^8"),
    (11, 24, "SL5 ⋊ Z/2"),
    (12, 35, "SL6 ⋊ Z/2"),
    (13, 16, "(SL3 × SL3) ⋊ Z/2"),
    (14, 28, "(G2 × G2) ⋊ Z/2"),
]

SMALL_N_TARGETS = tuple(
    Target(f"spin{n}", n, "spin", "spin", 2, dim, group, "estabilizador genérico, n pequeño")
    for n, dim, group in _SMALL_N
)

FREENESS_TARGETS = (
    Target("spin15", 15, "spin", "spin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
    Target("spin17", 17, "spin", "spin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
    Target("spin19", 19, "spin", "spin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
    Target("spin18", 18, "spin", "halfspin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
    Target("spin16-vw", 16, "spin", "vector+halfspin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
    Target("spin20-vw", 20, "spin", "vector+halfspin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
    Target("hspin20", 20, "hspin", "halfspin", 2, 0, "1", "Lie(G_v) = 0 en característica 2"),
)

ODD_CHAR_TARGETS = (
    Target("hspin16-p7", 16, "hspin", "halfspin", 7, 0, "(Z/2)^8", "estabilizador finito"),
    Target("spin14-p7", 14, "spin", "spin", 7, 28, "G2 × G2", "dimensión de G2 × G2"),
)

ALL_TARGETS = SMALL_N_TARGETS + FREENESS_TARGETS + ODD_CHAR_TARGETS


def find_target(name: str) -> Target:
    for target in ALL_TARGETS:
        if target.name == name:
            return target
    raise InputValidationError("Objetivo desconocido", field="target", value=name,
                               expected_format=", ".join(t.name for t in ALL_TARGETS))


def match_target(n: int, rep: str, characteristic: int, isogeny: str = "spin") -> Optional[Target]:
    for target in ALL_TARGETS:
        if (target.n, target.rep, target.characteristic, target.isogeny) == (n, rep, characteristic, isogeny):
            return target
    if rep == "halfspin":
        return match_target(n, "spin", characteristic, isogeny) if n % 2 == 0 else None
    return None


def representation_for_target(target: Target, field: FieldSpec) -> Representation:
    return build_group_representation(target.n, target.rep, field, target.half_spin_lattice)


def ladder_fields(characteristic: int, ladder: Sequence[int] = DEFAULT_LADDER) -> List[FieldSpec]:
    """GF(2) → GF(4) → GF(16) en característica 2; solo GF(p) en otro caso."""
    if characteristic == 2:
        return [get_field(2, e) for e in ladder]
    return [get_field(characteristic)]


@dataclass
class LedgerRow:
    target: str
    n: int
    rep: str
    characteristic: int
    expected: int
    found: int
    field: str
    passed: bool
    report: StabilizerReport = dc_field(repr=False)

    def to_dict(self) -> dict:
        return {"target": self.target, "n": self.n, "rep": self.rep, "char": self.characteristic,
                "expected": self.expected, "found": self.found, "field": self.field,
                "passed": self.passed}


def certify_target(target: Target, trials: int, seed: int, ladder: Sequence[int] = DEFAULT_LADDER,
                   rep_factory: Optional[Callable[[Target, FieldSpec], Representation]] = None
                   ) -> LedgerRow:
    """Escala por la escalera de cuerpos hasta alcanzar el objetivo."""
    factory = rep_factory or representation_for_target
    row = None
    for field in ladder_fields(target.characteristic, ladder):
        rep = factory(target, field)
        report = search_generic_stab(rep, trials, seed, target=target.expected_dim,
                                     group=target.descriptor())
        row = LedgerRow(target.name, target.n, target.rep, target.characteristic, target.expected_dim,
                        report.min_dim, field.name, report.passed, report)
        if row.passed:
            break
        logger.warning(f"⚠️ {target.name}: mínimo {report.min_dim} sobre {field.name}, se escala")
    return row


def verify_targets(targets: Sequence[Target], trials: int, seed: int,
                   ladder: Sequence[int] = DEFAULT_LADDER,
                   rep_factory: Optional[Callable[[Target, FieldSpec], Representation]] = None
                   ) -> List[LedgerRow]:
    """Registro PASS/FAIL por objetivo."""
    ledger = [certify_target(t, trials, seed, ladder, rep_factory) for t in targets]
    passed = sum(row.passed for row in ledger)
    logger.info(f"📋 Objetivos superados: {passed}/{len(ledger)}")
    return ledger
