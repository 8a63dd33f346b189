"""
================================================================================
MÓDULO DE REPRESENTACIONES SPIN
================================================================================
Representaciones de so_{2r} en característica arbitraria:

- half-spin: álgebra exterior de un r-espacio isótropo maximal (operadores de
  creación a_i† y aniquilación a_i), partes par/impar.
- vectorial: modelo matricial con forma S antidiagonal.
- restricción de E8 a D8 actuando sobre los vectores raíz de Φ₁.
- suma directa y realización de tipo B (Spin_{2r−1} dentro de Spin_{2r}).

Cada representación guarda una acción dispersa (COO sobre Z, reducida módulo
p al usarse) por elemento de la base del álgebra. Los operadores raíz se
calibran en signo a lo largo de los pares extraespeciales para que
ρ([x, y]) = [ρ(x), ρ(y)] sobre cualquier cuerpo.
================================================================================
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from spinstab.chevalley import (
    SIMPLY_CONNECTED, ChevalleyAlgebra, Subalgebra, build_algebra, extraspecial_pairs,
)
from spinstab.exactlin import FieldMatrix, kernel_basis, matmul
from spinstab.exceptions import InputValidationError, RepresentationBuildError
from spinstab.fields import FieldSpec
from spinstab.roots import build_root_system
from spinstab.utils import get_logger, timed

logger = get_logger(__name__)

HALFSPIN = "halfspin"
VECTOR = "vector"
E8_RESTRICTION = "e8-restriction"
DIRECT_SUM = "direct-sum"
B_TYPE = "b-type"


# ============================================================================
# ACCIONES DISPERSAS
# ============================================================================

@dataclass(frozen=True)
class SparseAction:
    """Matriz entera dispersa dim × dim en formato COO."""
    dim: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[Tuple[int, int, int]]) -> "SparseAction":
        entries = list(entries)
        if not entries:
            empty = np.zeros(0, dtype=np.int64)
            return cls(dim, empty, empty.copy(), empty.copy())
        rows, cols, values = (np.array(x, dtype=np.int64) for x in zip(*entries))
        return cls(dim, rows, cols, values)

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "SparseAction":
        values = np.asarray(values, dtype=np.int64)
        nz = np.flatnonzero(values)
        return cls(len(values), nz, nz.copy(), values[nz])

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    def scaled(self, c: int) -> "SparseAction":
        return SparseAction(self.dim, self.rows, self.cols, self.values * c)

    def apply_int(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        np.add.at(out, self.rows, self.values * np.asarray(vec, dtype=np.int64)[self.cols])
        return out

    def dense(self, field: FieldSpec) -> np.ndarray:
        flat = field.scatter_add(self.dim * self.dim, self.rows * self.dim + self.cols,
                                 field.reduce(self.values))
        return flat.reshape(self.dim, self.dim)

    @staticmethod
    def combine(actions: Sequence["SparseAction"], coefs: Sequence[int], p: int) -> "SparseAction":
        """Σ coefs_k·actions_k con coeficientes del subcuerpo primo, reducida mod p."""
        dim = actions[0].dim
        keys, vals = [], []
        for action, c in zip(actions, coefs):
            if c % p:
                keys.append(action.rows * dim + action.cols)
                vals.append(action.values * int(c))
        if not keys:
            return SparseAction.from_entries(dim, [])
        keys = np.concatenate(keys)
        vals = np.concatenate(vals)
        unique, inverse = np.unique(keys, return_inverse=True)
        summed = np.zeros(unique.size, dtype=np.int64)
        np.add.at(summed, inverse, vals)
        summed %= p
        nz = summed != 0
        return SparseAction(dim, unique[nz] // dim, unique[nz] % dim, summed[nz])


# ============================================================================
# REPRESENTACIÓN
# ============================================================================

class Representation:
    """
    Representación de un álgebra (ChevalleyAlgebra o Subalgebra) sobre su
    cuerpo. `weights` son los pesos (coordenadas duplicadas) de la base del
    módulo, que es diagonal para el toro de la familia D.
    """

    def __init__(self, algebra, dim: int, actions: Sequence[SparseAction], weights: np.ndarray,
                 kind: str, meta: Optional[dict] = None):
        if len(actions) != algebra.dim:
            raise RepresentationBuildError("Número de acciones distinto de dim del álgebra",
                                           rep_kind=kind, rank=len(actions))
        self.algebra = algebra
        self.field = algebra.field
        self.dim = dim
        self.actions = tuple(actions)
        self.weights = np.asarray(weights, dtype=np.int64)
        self.kind = kind
        self.meta = dict(meta or {})
        self._dense: Dict[int, np.ndarray] = {}

        f = self.field
        self._basis_index = np.concatenate(
            [np.full(a.nnz, j, dtype=np.int64) for j, a in enumerate(self.actions)])
        self._rows = np.concatenate([a.rows for a in self.actions])
        self._cols = np.concatenate([a.cols for a in self.actions])
        self._values = f.reduce(np.concatenate([a.values for a in self.actions]))

    def __repr__(self) -> str:
        return f"Representation({self.kind}, dim={self.dim}, {self.field.name})"

    def action_array(self, j: int) -> np.ndarray:
        if j not in self._dense:
            self._dense[j] = self.actions[j].dense(self.field)
        return self._dense[j]

    def action(self, j: int) -> FieldMatrix:
        return FieldMatrix.from_array(self.field, self.action_array(j))

    def act(self, x) -> FieldMatrix:
        """ρ(x) denso para un elemento del álgebra."""
        x = np.asarray(x, dtype=np.int64)
        f = self.field
        values = f.vmul(self._values, x[self._basis_index])
        flat = f.scatter_add(self.dim * self.dim, self._rows * self.dim + self._cols, values)
        return FieldMatrix.from_array(f, flat.reshape(self.dim, self.dim))

    def apply(self, x, v) -> np.ndarray:
        """ρ(x)·v sin formar la matriz."""
        x = np.asarray(x, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        f = self.field
        values = f.vmul(self._values, f.vmul(x[self._basis_index], v[self._cols]))
        return f.scatter_add(self.dim, self._rows, values)

    def action_on_vector(self, v) -> FieldMatrix:
        """Matriz dim(V) × dim(g) cuya columna j es ρ(b_j)·v."""
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.dim,):
            raise InputValidationError("Vector del módulo con longitud incorrecta", field="v",
                                       value=v.shape, expected_format=f"({self.dim},)")
        f = self.field
        adim = self.algebra.dim
        values = f.vmul(self._values, v[self._cols])
        flat = f.scatter_add(self.dim * adim, self._rows * adim + self._basis_index, values)
        return FieldMatrix.from_array(f, flat.reshape(self.dim, adim))

    def weight_multiset(self) -> Counter:
        return Counter(tuple(w) for w in self.weights.tolist())

    def nnz(self) -> int:
        return int(self._values.size)

    def restrict(self, sub: Subalgebra, kind: Optional[str] = None) -> "Representation":
        """Restricción a una subálgebra cuya base tiene coeficientes en el subcuerpo primo."""
        basis = sub.basis.to_array()
        p = self.field.p
        if self.field.e > 1 and np.any(basis > 1):
            raise RepresentationBuildError("La base de la subálgebra no es del subcuerpo primo",
                                           rep_kind=kind or self.kind)
        actions = [SparseAction.combine(self.actions, row, p) for row in basis]
        meta = dict(self.meta, parent_kind=self.kind)
        return Representation(sub, self.dim, actions, self.weights, kind or self.kind, meta)

    def header(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "algebra_dim": self.algebra.dim,
            "field": self.field.describe(),
            "meta": self.meta,
        }


# ============================================================================
# CALIBRACIÓN DE SIGNOS
# ============================================================================

def _probe_sign(left: SparseAction, right: SparseAction, target: SparseAction, what: str) -> int:
    """s con [left, right] = s·target, leído en una columna donde target ≠ 0."""
    if target.nnz == 0:
        raise RepresentationBuildError("Operador raíz nulo", rep_kind=what)
    col = int(target.cols[0])
    unit = np.zeros(target.dim, dtype=np.int64)
    unit[col] = 1
    comm = left.apply_int(right.apply_int(unit)) - right.apply_int(left.apply_int(unit))
    expected = target.apply_int(unit)
    for s in (1, -1):
        if np.array_equal(comm, s * expected):
            return s
    raise RepresentationBuildError("El conmutador no es ± el operador raíz", rep_kind=what)


def _calibrate(alg: ChevalleyAlgebra, raw: Dict[int, SparseAction], weights: np.ndarray,
               kind: str) -> Dict[int, SparseAction]:
    """
    Reescala los operadores raíz en bruto: ρ(e_{α_i}) = X_{α_i}; ρ(e_{−α_i})
    con [ρ(e_α), ρ(e_{−α})] = ρ(h_α); el resto por los pares extraespeciales.
    """
    rs = alg.rs
    idx = rs.index
    table = alg.constants.lookup()
    out: Dict[int, SparseAction] = {}

    for alpha in rs.simple:
        a, na = idx[alpha], idx[-alpha]
        out[a] = raw[a]
        pairings = weights @ np.array(alpha.coords, dtype=np.int64) // 4
        k = int(np.flatnonzero(pairings)[0])
        unit = np.zeros(raw[a].dim, dtype=np.int64)
        unit[k] = 1
        comm = raw[a].apply_int(raw[na].apply_int(unit)) - raw[na].apply_int(raw[a].apply_int(unit))
        if comm[k] not in (1, -1) or abs(int(pairings[k])) != 1:
            raise RepresentationBuildError("Calibración de raíz simple fallida", rep_kind=kind)
        out[na] = raw[na].scaled(int(pairings[k]) * int(comm[k]))

    for gamma_idx, (i, beta_idx) in sorted(extraspecial_pairs(rs).items(),
                                          key=lambda item: rs.height(rs.roots[item[0]])):
        ai = idx[rs.simple[i]]
        gamma = rs.roots[gamma_idx]
        beta = rs.roots[beta_idx]
        for sign in (1, -1):
            g, a, b = idx[gamma.scale(sign)], idx[rs.simple[i].scale(sign)], idx[beta.scale(sign)]
            s = _probe_sign(out[a], out[b], raw[g], kind)
            # ρ(e_γ) = N_{a,b}·[ρ(e_a), ρ(e_b)] = N_{a,b}·s·X_γ
            out[g] = raw[g].scaled(table[(a, b)] * s)
    return out


def _torus_actions(alg: ChevalleyAlgebra, weights: np.ndarray, kind: str) -> List[SparseAction]:
    pair4 = weights @ alg.y_basis.T
    if np.any(pair4 % 4):
        raise RepresentationBuildError(
            "Pesos no enteros sobre el retículo de cocaracteres (retículo incompatible)",
            rep_kind=kind, rank=alg.rank)
    pairings = pair4 // 4
    return [SparseAction.diagonal(pairings[:, k]) for k in range(alg.rank)]


def _assemble(alg: ChevalleyAlgebra, raw: Dict[int, SparseAction], weights: np.ndarray, kind: str,
              meta: dict) -> Representation:
    torus = _torus_actions(alg, weights, kind)
    calibrated = _calibrate(alg, raw, weights, kind)
    actions = [calibrated[i] for i in range(alg.n_roots)] + torus
    return Representation(alg, len(weights), actions, weights, kind, meta)


def _require_d_algebra(alg: ChevalleyAlgebra, kind: str) -> None:
    if alg.rs.root_type != "D":
        raise RepresentationBuildError("Se requiere un álgebra de tipo D", rep_kind=kind,
                                       rank=alg.rank)


def _resolve_algebra(r: int, lattice: str, field: Optional[FieldSpec],
                     algebra: Optional[ChevalleyAlgebra], kind: str) -> ChevalleyAlgebra:
    if algebra is not None:
        _require_d_algebra(algebra, kind)
        if algebra.rank != r:
            raise RepresentationBuildError("Rango del álgebra distinto del pedido", rep_kind=kind, rank=r)
        return algebra
    if field is None:
        raise InputValidationError("Se requiere un cuerpo o un álgebra", field="field")
    return build_algebra(build_root_system("D", r), lattice, field)


# ============================================================================
# MODELO HALF-SPIN
# ============================================================================

def _popcount_below(mask: int, i: int) -> int:
    return bin(mask & ((1 << i) - 1)).count("1")


def _fermion(mask: int, creations: Sequence[int], annihilations: Sequence[int]) -> Optional[Tuple[int, int]]:
    """Aplica Π a_c† · Π a_a a |S⟩; devuelve (signo, S') o None."""
    sign = 1
    for a in annihilations:
        if not mask >> a & 1:
            return None
        if _popcount_below(mask, a) % 2:
            sign = -sign
        mask &= ~(1 << a)
    for c in reversed(creations):
        if mask >> c & 1:
            return None
        if _popcount_below(mask, c) % 2:
            sign = -sign
        mask |= 1 << c
    return sign, mask


def halfspin_basis(r: int, parity: int) -> List[int]:
    """Subconjuntos S ⊆ {0..r−1} (máscaras) con (#signos −) ≡ parity mod 2."""
    return [m for m in range(1 << r) if (r - bin(m).count("1")) % 2 == parity]


def halfspin_weights(r: int, parity: int) -> np.ndarray:
    masks = halfspin_basis(r, parity)
    return np.array([[1 if m >> i & 1 else -1 for i in range(r)] for m in masks], dtype=np.int64)


def halfspin_rep(r: int, parity: int = 0, lattice: str = SIMPLY_CONNECTED,
                 field: Optional[FieldSpec] = None,
                 algebra: Optional[ChevalleyAlgebra] = None) -> Representation:
    """
    Representación half-spin de dimensión 2^{r−1}.

    Raises:
        RepresentationBuildError: r < 3, paridad inválida, o retículo en el
            que el núcleo central no actúa trivialmente
    """
    if r < 3:
        raise RepresentationBuildError("half-spin requiere r ≥ 3", rep_kind=HALFSPIN, rank=r)
    if parity not in (0, 1):
        raise RepresentationBuildError("Paridad debe ser 0 o 1", rep_kind=HALFSPIN, rank=r)
    alg = _resolve_algebra(r, lattice, field, algebra, HALFSPIN)
    masks = halfspin_basis(r, parity)
    position = {m: k for k, m in enumerate(masks)}
    weights = halfspin_weights(r, parity)
    dim = len(masks)

    with timed(logger, f"Modelo half-spin D{r} (dim {dim}) sobre {alg.field.name}"):
        raw: Dict[int, SparseAction] = {}
        for k, gamma in enumerate(alg.rs.roots):
            creations = [i for i, d in enumerate(gamma.coords) if d > 0]
            annihilations = [i for i, d in enumerate(gamma.coords) if d < 0]
            entries = []
            for col, mask in enumerate(masks):
                hit = _fermion(mask, creations, annihilations)
                if hit is not None:
                    entries.append((position[hit[1]], col, hit[0]))
            raw[k] = SparseAction.from_entries(dim, entries)
        meta = {"rank": r, "parity": parity, "lattice": alg.lattice.tag}
        return _assemble(alg, raw, weights, HALFSPIN, meta)


# ============================================================================
# MODELO VECTORIAL
# ============================================================================

def vector_weights(r: int) -> np.ndarray:
    """Base [ε_1..ε_r, −ε_r..−ε_1] en coordenadas duplicadas."""
    w = np.zeros((2 * r, r), dtype=np.int64)
    for i in range(r):
        w[i, i] = 2
        w[2 * r - 1 - i, i] = -2
    return w


def _vector_pair(gamma_coords: Sequence[int], r: int) -> Tuple[int, int]:
    nz = [(i, d) for i, d in enumerate(gamma_coords) if d]
    (i, si), (j, sj) = nz

    def prime(a: int) -> int:
        return 2 * r - 1 - a

    if si > 0 and sj > 0:
        return i, prime(j)
    if si < 0 and sj < 0:
        return prime(j), i
    if si > 0:
        return i, j
    return j, i


def vector_rep(r: int, lattice: str = SIMPLY_CONNECTED, field: Optional[FieldSpec] = None,
               algebra: Optional[ChevalleyAlgebra] = None) -> Representation:
    """Representación vectorial (dim 2r): X = E_{a,b} − E_{b',a'}."""
    alg = _resolve_algebra(r, lattice, field, algebra, VECTOR)
    dim = 2 * r
    raw = {}
    for k, gamma in enumerate(alg.rs.roots):
        a, b = _vector_pair(gamma.coords, r)
        raw[k] = SparseAction.from_entries(dim, [(a, b, 1), (dim - 1 - b, dim - 1 - a, -1)])
    meta = {"rank": r, "lattice": alg.lattice.tag}
    return _assemble(alg, raw, vector_weights(r), VECTOR, meta)


def quadratic_value(v: Sequence[int], r: int, field: FieldSpec) -> int:
    """Q(v) = Σ_{a<r} v_a·v_{a'} para la forma hiperbólica estándar."""
    total = 0
    for a in range(r):
        total = field.add(total, field.mul(int(v[a]), int(v[2 * r - 1 - a])))
    return total


# ============================================================================
# SUMAS DIRECTAS Y RESTRICCIONES
# ============================================================================

def direct_sum(a: Representation, b: Representation) -> Representation:
    """Acciones diagonales por bloques sobre V_a ⊕ V_b."""
    if a.algebra is not b.algebra:
        raise InputValidationError("Suma directa de representaciones de álgebras distintas",
                                   field="algebra")
    actions = []
    for x, y in zip(a.actions, b.actions):
        actions.append(SparseAction(
            a.dim + b.dim,
            np.concatenate([x.rows, y.rows + a.dim]),
            np.concatenate([x.cols, y.cols + a.dim]),
            np.concatenate([x.values, y.values]),
        ))
    weights = np.vstack([a.weights, b.weights])
    meta = {"summands": [a.kind, b.kind], **{k: v for k, v in a.meta.items() if k in ("rank", "lattice")}}
    return Representation(a.algebra, a.dim + b.dim, actions, weights, DIRECT_SUM, meta)


def e8_d8_indices(alg: ChevalleyAlgebra) -> Tuple[List[int], List[int]]:
    """(base de la subálgebra D8: toro + Φ₀, índices de Φ₁) dentro de E8."""
    even, odd = [], []
    for k, beta in enumerate(alg.rs.roots):
        (even if beta.coords[0] % 2 == 0 else odd).append(k)
    return even + list(range(alg.n_roots, alg.dim)), odd


def e8_restriction_halfspin(field: FieldSpec, algebra: Optional[ChevalleyAlgebra] = None
                            ) -> Representation:
    """
    La subálgebra D8 de E8 (toro + raíces enteras) actuando por ad sobre el
    espacio de dimensión 128 generado por los e_β con β semientera.
    """
    if algebra is None:
        algebra = build_algebra(build_root_system("E", 8), "adjoint", field)
    sub_idx, odd = e8_d8_indices(algebra)
    sub = Subalgebra.from_indices(algebra, sub_idx, name="D8")
    position = {g: k for k, g in enumerate(odd)}
    left, right = algebra.table_left, algebra.table_right
    target, coef = algebra.table_target, algebra.table_coef
    actions = []
    for g in sub_idx:
        mask = left == g
        entries = [(position[int(t)], position[int(s)], int(c))
                   for s, t, c in zip(right[mask], target[mask], coef[mask]) if int(s) in position]
        actions.append(SparseAction.from_entries(len(odd), entries))
    weights = algebra.rs.coords_array()[odd]
    meta = {"rank": 8, "parity": 0, "lattice": "e8"}
    logger.info(f"✅ Restricción E8 → D8 sobre {len(odd)} vectores raíz")
    return Representation(sub, len(odd), actions, weights, E8_RESTRICTION, meta)


@dataclass(frozen=True, eq=False)
class BTypeRealization:
    """Subálgebra anuladora de y y la representación half-spin restringida."""
    y: np.ndarray
    subalgebra: Subalgebra
    representation: Representation
    expected_dim: int

    @property
    def dim(self) -> int:
        return self.subalgebra.dim


def anisotropic_vector(r: int, field: FieldSpec) -> np.ndarray:
    """y = v(ε_r) + c·v(−ε_r), c = 1 en p = 2 y −½ en p impar."""
    y = np.zeros(2 * r, dtype=np.int64)
    y[r - 1] = 1
    y[r] = 1 if field.p == 2 else field.neg(field.inv(2))
    return y


def b_type_subalgebra(rep: Representation, y: Optional[Sequence[int]] = None) -> BTypeRealization:
    """
    Anulador de un vector anisótropo y del módulo vectorial dentro de so_{2r},
    con la representación `rep` restringida a él.

    Raises:
        RepresentationBuildError: y isótropo (Q(y) = 0)
    """
    alg = rep.algebra
    if not isinstance(alg, ChevalleyAlgebra):
        raise RepresentationBuildError("Se requiere la representación de un álgebra completa",
                                       rep_kind=B_TYPE)
    _require_d_algebra(alg, B_TYPE)
    r = alg.rank
    y = anisotropic_vector(r, alg.field) if y is None else np.asarray(y, dtype=np.int64)
    if quadratic_value(y, r, alg.field) == 0:
        raise RepresentationBuildError("El vector y es isótropo", rep_kind=B_TYPE, rank=r)
    vec = vector_rep(r, algebra=alg)
    basis = kernel_basis(vec.action_on_vector(y))
    sub = Subalgebra(alg, basis, name=f"B{r - 1}")
    expected = 2 * (r - 1) ** 2 + (r - 1)
    if sub.dim != expected:
        logger.info(f"⚠️ Anulador de y en D{r}: dimensión {sub.dim} (so_{2 * r - 1}: {expected})")
    restricted = rep.restrict(sub, kind=B_TYPE)
    restricted.meta.update({"y": y.tolist(), "annihilator_dim": sub.dim})
    return BTypeRealization(y, sub, restricted, expected)


# ============================================================================
# GRUPOS Y REPRESENTACIONES
# ============================================================================

REP_TAGS = ("spin", "halfspin", "vector", "vector+halfspin")


def build_group_representation(n: int, rep_tag: str, field: FieldSpec, half_spin_lattice: bool = False,
                               algebra: Optional[ChevalleyAlgebra] = None) -> Representation:
    """
    Representación de Spin_n (o HSpin_n) por etiqueta:
    - spin / halfspin con n par -> half-spin de D_{n/2} (paridad 0)
    - spin con n impar -> realización de tipo B dentro de D_{(n+1)/2}
    - vector+halfspin -> suma directa (n par)
    """
    if rep_tag not in REP_TAGS:
        raise InputValidationError("Representación desconocida", field="rep", value=rep_tag,
                                   expected_format="|".join(REP_TAGS))
    if n < 6:
        raise InputValidationError("Se requiere n ≥ 6", field="n", value=n)
    lattice = "half-spin" if half_spin_lattice else SIMPLY_CONNECTED
    if n % 2:
        if rep_tag != "spin" or half_spin_lattice:
            raise InputValidationError("Para n impar solo existe la representación spin de Spin_n",
                                       field="rep", value=rep_tag)
        r = (n + 1) // 2
        alg = algebra or build_algebra(build_root_system("D", r), lattice, field)
        return b_type_subalgebra(halfspin_rep(r, 0, algebra=alg)).representation
    r = n // 2
    alg = algebra or build_algebra(build_root_system("D", r), lattice, field)
    if rep_tag in ("spin", "halfspin"):
        return halfspin_rep(r, 0, algebra=alg)
    if rep_tag == "vector":
        return vector_rep(r, algebra=alg)
    return direct_sum(vector_rep(r, algebra=alg), halfspin_rep(r, 0, algebra=alg))


# ============================================================================
# VERIFICACIONES
# ============================================================================

def _basis_unit(algebra, j: int) -> np.ndarray:
    v = np.zeros(algebra.dim, dtype=np.int64)
    v[j] = 1
    return v


def check_representation(rep: Representation, pairs: Optional[Iterable[Tuple[int, int]]] = None
                         ) -> List[Tuple[int, int]]:
    """
    Pares (i, j) de la base donde ρ([b_i, b_j]) ≠ ρ(b_i)ρ(b_j) − ρ(b_j)ρ(b_i).
    Sin `pairs` se recorren todos.
    """
    alg = rep.algebra
    if pairs is None:
        pairs = [(i, j) for i in range(alg.dim) for j in range(i + 1, alg.dim)]
    failures = []
    for i, j in pairs:
        a, b = rep.action(i), rep.action(j)
        lhs = rep.act(alg.bracket(_basis_unit(alg, i), _basis_unit(alg, j)))
        if lhs != matmul(a, b) - matmul(b, a):
            failures.append((i, j))
    if failures:
        logger.warning(f"⚠️ {len(failures)} pares violan ρ([x,y]) = [ρ(x),ρ(y)] en {rep}")
    return failures


def check_restrictedness(rep: Representation, indices: Optional[Iterable[int]] = None) -> List[int]:
    """Índices j donde ρ(b_j^{[p]}) ≠ ρ(b_j)^p."""
    alg = rep.algebra
    p = rep.field.p
    indices = range(alg.dim) if indices is None else indices
    failures = []
    for j in indices:
        power = alg.p_power(_basis_unit(alg, j))
        if rep.act(power) != rep.action(j).power(p):
            failures.append(j)
    return failures
