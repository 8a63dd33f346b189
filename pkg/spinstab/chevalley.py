"""
================================================================================
MÓDULO DE ÁLGEBRAS DE CHEVALLEY
================================================================================
Constantes de estructura enteras, retículos de caracteres y álgebras de Lie
sobre cuerpos finitos con su aplicación [p] y, en característica 2, la forma
simpléctica sobre el toro.

BASE DEL ÁLGEBRA:
    índices 0..|Φ|−1   -> e_α en el orden del RootSystem
    índices |Φ|..|Φ|+r−1 -> t_1..t_r, base del retículo de cocaracteres
                           Y = dual(X) reducida módulo p

CONVENCIÓN DE SIGNOS:
    N_{α,β} = s(α)·s(β)·s(α+β)·ε(α,β), con ε(α,β) = (−1)^{aᵀ E b} (a, b los
    coeficientes simples; E triangular superior con E_ii = 1 y E_ij = 1 si
    i < j son adyacentes) y s = +1 en raíces positivas, −1 en negativas.
    Con ella [e_α, e_{−α}] = h_α para toda raíz α.

Los corchetes se evalúan de forma vectorizada a partir de una lista de
entradas (izquierda, derecha, destino, coeficiente) de la tabla entera.
================================================================================
"""

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from spinstab.exactlin import (
    FieldMatrix, IntMatrix, inverse, kernel_basis, lattice_basis, rank, rref, smith_normal_form,
    snf_inverse, solve,
)
from spinstab.exceptions import InputValidationError, RootDataError
from spinstab.fields import FieldSpec
from spinstab.roots import RootSystem, RootVec
from spinstab.utils import get_logger, timed

logger = get_logger(__name__)

SIMPLY_CONNECTED = "simply-connected"
ADJOINT = "adjoint"
HALF_SPIN = "half-spin"
SPECIAL_ORTHOGONAL = "special-orthogonal"
LATTICE_TAGS = (SIMPLY_CONNECTED, ADJOINT, HALF_SPIN, SPECIAL_ORTHOGONAL)


# ============================================================================
# CONSTANTES DE ESTRUCTURA
# ============================================================================

def _cocycle_matrix(rs: RootSystem) -> np.ndarray:
    r = rs.rank
    e = np.eye(r, dtype=np.int64)
    for i in range(r):
        for j in range(i + 1, r):
            if rs.cartan[i, j] == -1:
                e[i, j] = 1
    return e


def cocycle_sign(rs: RootSystem, alpha: RootVec, beta: RootVec) -> int:
    e = _cocycle_matrix(rs)
    a = np.array(rs.coefficients[alpha], dtype=np.int64)
    b = np.array(rs.coefficients[beta], dtype=np.int64)
    return -1 if int(a @ e @ b) % 2 else 1


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """
    Tabla de N_{α,β} ≠ 0 como arrays paralelos de índices de raíces:
    [e_left, e_right] = coef · e_target.
    """
    rs: RootSystem
    left: np.ndarray
    right: np.ndarray
    target: np.ndarray
    coef: np.ndarray

    def lookup(self) -> Dict[Tuple[int, int], int]:
        return {(int(a), int(b)): int(c) for a, b, c in zip(self.left, self.right, self.coef)}

    def value(self, alpha: RootVec, beta: RootVec) -> int:
        """N_{α,β}; 0 si α+β no es raíz."""
        gamma = alpha + beta
        if not self.rs.is_root(gamma):
            return 0
        idx = self.rs.index
        mask = (self.left == idx[alpha]) & (self.right == idx[beta])
        return int(self.coef[mask][0])

    def triples(self) -> List[Tuple[List[int], List[int], int]]:
        roots = self.rs.roots
        return [(list(roots[a].coords), list(roots[b].coords), int(c))
                for a, b, c in zip(self.left, self.right, self.coef)]


def chevalley_constants(rs: RootSystem) -> StructureConstants:
    """
    Constantes N_{α,β} ∈ {±1} para todo par con α+β ∈ Φ.

    Antisimetría: ε(α,β)ε(β,α) = (−1)^{(α|β)} = −1 cuando α+β es raíz.
    """
    idx = rs.index
    e = _cocycle_matrix(rs)
    coeffs = np.array([rs.coefficients[r] for r in rs.roots], dtype=np.int64)
    eps_exponent = (coeffs @ e @ coeffs.T) % 2
    sign = np.where(np.arange(len(rs.roots)) < rs.n_positive, 1, -1)

    left, right, target, coef = [], [], [], []
    for i, alpha in enumerate(rs.roots):
        for j, beta in enumerate(rs.roots):
            k = idx.get(alpha + beta)
            if k is None:
                continue
            eps = -1 if eps_exponent[i, j] else 1
            left.append(i)
            right.append(j)
            target.append(k)
            coef.append(int(sign[i] * sign[j] * sign[k] * eps))
    return StructureConstants(
        rs,
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(target, dtype=np.int64),
        np.array(coef, dtype=np.int64),
    )


def extraspecial_pairs(rs: RootSystem) -> Dict[int, Tuple[int, int]]:
    """
    Para cada raíz positiva no simple γ: (i, β) con γ = α_i + β, α_i la
    primera raíz simple (en orden de índice) tal que γ − α_i es raíz
    positiva. Claves e índices son posiciones en rs.roots.
    """
    idx = rs.index
    pairs = {}
    for gamma in rs.positive:
        if rs.simple_index(gamma) >= 0:
            continue
        for i, alpha in enumerate(rs.simple):
            beta = gamma - alpha
            if beta in idx and rs.is_positive(beta):
                pairs[idx[gamma]] = (i, idx[beta])
                break
    return pairs


# ============================================================================
# RETÍCULOS DE CARACTERES
# ============================================================================

@dataclass(frozen=True, eq=False)
class CharacterLattice:
    """
    Retículo X con ZΦ ⊆ X ⊆ P y su dual Y (cocaracteres), ambos en
    coordenadas duplicadas; ⟨x_i, y_j⟩ = Σ x_i·y_j / 4 = δ_ij.
    """
    tag: str
    basis: IntMatrix
    dual_basis: IntMatrix
    index_over_roots: int
    index_in_weights: int

    def to_dict(self) -> dict:
        return {"tag": self.tag, "basis": self.basis.to_list(), "dual_basis": self.dual_basis.to_list(),
                "index_over_roots": self.index_over_roots, "index_in_weights": self.index_in_weights}


def _weight_lattice_generators(rs: RootSystem) -> List[List[int]]:
    if rs.root_type == "E":
        return [list(a.coords) for a in rs.simple]
    r = rs.rank
    gens = []
    for i in range(r):
        d = [0] * r
        d[i] = 2
        gens.append(d)
    gens.append([1] * r)
    return gens


def character_lattice(rs: RootSystem, tag: str) -> CharacterLattice:
    """
    Construye X para la etiqueta de isogenia y calcula Y = dual(X) por SNF.

    Raises:
        RootDataError: etiqueta desconocida, half-spin fuera de tipo D con
            rango par, o dual no entero
    """
    if tag not in LATTICE_TAGS:
        raise RootDataError("Etiqueta de retículo desconocida", root_type=rs.name, lattice=tag)
    root_gens = [list(a.coords) for a in rs.simple]
    r = rs.rank
    if rs.root_type == "E":
        if tag in (HALF_SPIN, SPECIAL_ORTHOGONAL):
            raise RootDataError("Retículo solo definido para tipo D", root_type=rs.name, lattice=tag)
        gens = root_gens
    elif tag == SIMPLY_CONNECTED:
        gens = _weight_lattice_generators(rs)
    elif tag == ADJOINT:
        gens = root_gens
    elif tag == HALF_SPIN:
        if r % 2:
            raise RootDataError("El retículo half-spin requiere rango par", root_type=rs.name,
                                rank=r, lattice=tag)
        gens = root_gens + [[1] * r]
    else:
        unit = [0] * r
        unit[0] = 2
        gens = root_gens + [unit]

    basis = lattice_basis(gens)
    adj, den = snf_inverse(basis)
    dual_rows = []
    for row in adj.transpose().rows:
        scaled = [4 * a for a in row]
        if any(a % den for a in scaled):
            raise RootDataError("El dual del retículo no es entero en coordenadas duplicadas",
                                root_type=rs.name, lattice=tag)
        dual_rows.append([a // den for a in scaled])
    dual = IntMatrix(dual_rows)

    root_det = lattice_basis(root_gens).abs_det()
    weight_det = lattice_basis(_weight_lattice_generators(rs)).abs_det()
    x_det = basis.abs_det()
    return CharacterLattice(tag, basis, dual, root_det // x_det, x_det // weight_det)


def center_order(rs: RootSystem) -> int:
    """|P/ZΦ| calculado por SNF."""
    snf = smith_normal_form(lattice_basis([list(a.coords) for a in rs.simple]))
    weights = smith_normal_form(lattice_basis(_weight_lattice_generators(rs)))
    num = 1
    for d in snf.divisors:
        num *= d
    den = 1
    for d in weights.divisors:
        den *= d
    return num // den


# ============================================================================
# ELEMENTOS Y ÁLGEBRA
# ============================================================================

@dataclass(frozen=True, eq=False)
class LieElement:
    """Elemento de un álgebra concreta: coeficientes en su base."""
    algebra: object
    coeffs: np.ndarray

    def __add__(self, other: "LieElement") -> "LieElement":
        _check_same_algebra(self, other)
        return LieElement(self.algebra, self.algebra.field.vadd(self.coeffs, other.coeffs))

    def scale(self, c: int) -> "LieElement":
        return LieElement(self.algebra, self.algebra.field.vmul(self.coeffs, c))


def _check_same_algebra(a: LieElement, b: LieElement) -> None:
    if a.algebra is not b.algebra:
        raise InputValidationError("Operandos de álgebras distintas", field="algebra")


class ChevalleyAlgebra:
    """
    Álgebra de Lie g = Lie(G) sobre un cuerpo finito, para G determinado por
    (sistema de raíces, retículo de caracteres).
    """

    def __init__(self, rs: RootSystem, lattice: CharacterLattice, field: FieldSpec,
                 constants: Optional[StructureConstants] = None):
        self.rs = rs
        self.lattice = lattice
        self.field = field
        self.n_roots = len(rs.roots)
        self.rank = rs.rank
        self.dim = self.n_roots + self.rank
        self.constants = constants or chevalley_constants(rs)

        roots = rs.coords_array()
        x_basis = np.array(lattice.basis.rows, dtype=np.int64)
        y_basis = np.array(lattice.dual_basis.rows, dtype=np.int64)
        # ⟨β, t_k⟩ y h_α en coordenadas del toro
        pair4 = roots @ y_basis.T
        coroot4 = roots @ x_basis.T
        if np.any(pair4 % 4) or np.any(coroot4 % 4):
            raise RootDataError("Emparejamientos no enteros con el retículo", root_type=rs.name,
                                lattice=lattice.tag)
        self.root_pairings = pair4 // 4
        self.coroot_coords = coroot4 // 4
        self.y_basis = y_basis
        self.x_basis = x_basis

        self._build_table()
        self._generator_system = None
        self._ppower_solver = None

    # ------------------------------------------------------------------
    # Tabla de corchetes
    # ------------------------------------------------------------------

    def _build_table(self) -> None:
        n, r = self.n_roots, self.rank
        sc = self.constants
        left, right, target, coef = [sc.left], [sc.right], [sc.target], [sc.coef]

        neg = np.array([self.rs.index[-a] for a in self.rs.roots], dtype=np.int64)
        for k in range(r):
            c = self.coroot_coords[:, k]
            nz = np.flatnonzero(c)
            left.append(nz)
            right.append(neg[nz])
            target.append(np.full(nz.size, n + k, dtype=np.int64))
            coef.append(c[nz])

            p = self.root_pairings[:, k]
            nz = np.flatnonzero(p)
            left.append(np.full(nz.size, n + k, dtype=np.int64))
            right.append(nz)
            target.append(nz)
            coef.append(p[nz])
            left.append(nz)
            right.append(np.full(nz.size, n + k, dtype=np.int64))
            target.append(nz)
            coef.append(-p[nz])

        self.table_left = np.concatenate(left)
        self.table_right = np.concatenate(right)
        self.table_target = np.concatenate(target)
        self.table_coef = np.concatenate(coef)

        fcoef = self.field.reduce(self.table_coef)
        keep = fcoef != 0
        self._left = self.table_left[keep]
        self._right = self.table_right[keep]
        self._target = self.table_target[keep]
        self._fcoef = fcoef[keep]
        upper = self._left < self._right
        self._upper = (self._left[upper], self._right[upper], self._target[upper], self._fcoef[upper])

    # ------------------------------------------------------------------
    # Elementos
    # ------------------------------------------------------------------

    @property
    def name(self) -> str:
        return f"Lie({self.rs.name}, {self.lattice.tag}) / {self.field.name}"

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero()
        v[i] = 1
        return v

    def root_index(self, alpha: RootVec) -> int:
        return self.rs.index[alpha]

    def e(self, alpha: RootVec) -> np.ndarray:
        return self.basis_vector(self.rs.index[alpha])

    def t(self, k: int) -> np.ndarray:
        return self.basis_vector(self.n_roots + k)

    def h(self, alpha: RootVec) -> np.ndarray:
        """h_α = [e_α, e_{−α}] en la base del toro."""
        v = self.zero()
        v[self.n_roots:] = self.field.reduce(self.coroot_coords[self.rs.index[alpha]])
        return v

    def element(self, coeffs) -> LieElement:
        coeffs = self._coerce(coeffs)
        return LieElement(self, coeffs)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.field.random(rng, self.dim)

    def torus_part(self, x) -> np.ndarray:
        return self._coerce(x)[self.n_roots:]

    def _coerce(self, x) -> np.ndarray:
        if isinstance(x, LieElement):
            if x.algebra is not self:
                raise InputValidationError("Elemento de otra álgebra", field="algebra")
            x = x.coeffs
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (self.dim,):
            raise InputValidationError("Elemento con longitud incorrecta", field="element",
                                       value=x.shape, expected_format=f"({self.dim},)")
        return x

    # ------------------------------------------------------------------
    # Operaciones
    # ------------------------------------------------------------------

    def bracket(self, a, b) -> np.ndarray:
        a, b = self._coerce(a), self._coerce(b)
        f = self.field
        values = f.vmul(self._fcoef, f.vmul(a[self._left], b[self._right]))
        return f.scatter_add(self.dim, self._target, values)

    def ad(self, x) -> np.ndarray:
        """Matriz densa de ad(x): columna j = [x, b_j]."""
        x = self._coerce(x)
        f = self.field
        values = f.vmul(self._fcoef, x[self._left])
        flat = f.scatter_add(self.dim * self.dim, self._target * self.dim + self._right, values)
        return flat.reshape(self.dim, self.dim)

    def ad_matrix(self, x) -> FieldMatrix:
        return FieldMatrix.from_array(self.field, self.ad(x))

    def integer_bracket(self, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
        """Corchete sobre Z con la tabla entera completa."""
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        out = np.zeros(self.dim, dtype=object)
        values = self.table_coef.astype(object) * a[self.table_left] * b[self.table_right]
        np.add.at(out, self.table_target, values)
        return out

    def p_power(self, x) -> np.ndarray:
        """
        Aplicación [p]. En p = 2 por la fórmula de Jacobson sobre la base:
        x^{[2]} = Σ c_i² b_i^{[2]} + Σ_{i<j} c_i c_j [b_i, b_j], con
        e_α^{[2]} = 0 y t_k^{[2]} = t_k. En p impar se resuelve
        ad(z) = ad(x)^p sobre los generadores (requiere centro nulo).
        """
        x = self._coerce(x)
        f = self.field
        if f.p == 2:
            out = self.zero()
            out[self.n_roots:] = f.vmul(x[self.n_roots:], x[self.n_roots:])
            left, right, target, fcoef = self._upper
            values = f.vmul(fcoef, f.vmul(x[left], x[right]))
            return f.vadd(out, f.scatter_add(self.dim, target, values))
        return self._p_power_by_solving(x)

    def _generators(self) -> List[int]:
        simple = [self.rs.index[a] for a in self.rs.simple]
        negative = [self.rs.index[-a] for a in self.rs.simple]
        return simple + negative + list(range(self.n_roots, self.dim))

    def generator_system(self) -> FieldMatrix:
        """
        Matriz A con A·z = ([z, g])_g para los generadores g (±simples y toro).
        Su núcleo es el centro del álgebra.
        """
        if self._generator_system is None:
            blocks = []
            for g in self._generators():
                unit = self.basis_vector(g)
                # columna j: [b_j, g] = −[g, b_j]
                blocks.append(self.field.vneg(self.ad(unit)))
            self._generator_system = FieldMatrix.from_array(self.field, np.vstack(blocks))
        return self._generator_system

    def _p_power_by_solving(self, x: np.ndarray) -> np.ndarray:
        f = self.field
        if self._ppower_solver is None:
            system = self.generator_system()
            rows = rref(system.transpose())[1]
            if len(rows) != self.dim:
                raise RootDataError("Centro no nulo: la aplicación [p] no se determina por ad",
                                    root_type=self.rs.name, lattice=self.lattice.tag)
            square = FieldMatrix.from_array(f, system.to_array()[rows])
            self._ppower_solver = (rows, inverse(square).to_array())
        rows, inv = self._ppower_solver
        rhs = []
        for g in self._generators():
            v = self.basis_vector(g)
            for _ in range(f.p):
                v = self.bracket(x, v)
            rhs.append(v)
        rhs = np.concatenate(rhs)
        z = FieldMatrix.from_array(f, inv).mul_vec(rhs[rows])
        if not np.array_equal(self.generator_system().mul_vec(z), rhs):
            raise RootDataError("ad(x)^p no es una derivación interior", root_type=self.rs.name)
        return z

    def torus_gram(self) -> np.ndarray:
        """Gram (y_i|y_j) de la base del toro; debe ser entera."""
        gram4 = self.y_basis @ self.y_basis.T
        if np.any(gram4 % 4):
            raise RootDataError("El retículo de cocaracteres no es entero", root_type=self.rs.name,
                                lattice=self.lattice.tag)
        return gram4 // 4

    def symplectic_form(self, t1, t2) -> int:
        """
        ⟨t1, t2⟩ = t1ᵀ·Gram·t2 módulo 2 sobre elementos del toro (vector de
        longitud r o elemento completo del álgebra).
        """
        if self.field.p != 2:
            raise InputValidationError("La forma simpléctica solo existe en característica 2",
                                       field="char", value=self.field.p)
        t1 = self._torus_coords(t1)
        t2 = self._torus_coords(t2)
        gram = self.field.reduce(self.torus_gram())
        f = self.field
        total = 0
        for i in range(self.rank):
            for j in range(self.rank):
                if gram[i, j]:
                    total = f.add(total, f.mul(int(t1[i]), int(t2[j])))
        return total

    def symplectic_gram(self) -> FieldMatrix:
        return FieldMatrix.from_array(self.field, self.field.reduce(self.torus_gram()))

    def _torus_coords(self, t) -> np.ndarray:
        t = np.asarray(t.coeffs if isinstance(t, LieElement) else t, dtype=np.int64)
        if t.shape == (self.dim,):
            if np.any(t[:self.n_roots]):
                raise InputValidationError("Se esperaba un elemento del toro", field="element")
            return t[self.n_roots:]
        if t.shape != (self.rank,):
            raise InputValidationError("Elemento del toro con longitud incorrecta", field="element",
                                       value=t.shape)
        return t

    def to_dict(self) -> dict:
        """Esquema JSON: raíces duplicadas y constantes como tripletas (α, β, N)."""
        return {
            "schema": "spinstab.algebra/1",
            "root_system": self.rs.to_dict(),
            "lattice": self.lattice.to_dict(),
            "field": self.field.describe(),
            "dimension": self.dim,
            "constants": self.constants.triples(),
        }


def build_algebra(rs: RootSystem, lattice, field: FieldSpec) -> ChevalleyAlgebra:
    """
    Construye g = (base de Chevalley ⊗ F_p^e) con toro Y ⊗ F.

    Args:
        lattice: CharacterLattice o etiqueta ('simply-connected', 'adjoint',
            'half-spin', 'special-orthogonal')
    """
    if isinstance(lattice, str):
        lattice = character_lattice(rs, lattice)
    with timed(logger, f"Construcción de Lie({rs.name}, {lattice.tag}) sobre {field.name}"):
        return ChevalleyAlgebra(rs, lattice, field)


def bracket(a: LieElement, b: LieElement) -> LieElement:
    _check_same_algebra(a, b)
    return LieElement(a.algebra, a.algebra.bracket(a.coeffs, b.coeffs))


def p_power(x: LieElement) -> LieElement:
    return LieElement(x.algebra, x.algebra.p_power(x.coeffs))


def symplectic_form(t1: LieElement, t2: LieElement) -> int:
    _check_same_algebra(t1, t2)
    return t1.algebra.symplectic_form(t1.coeffs, t2.coeffs)


def center(alg: ChevalleyAlgebra) -> FieldMatrix:
    """Base (filas) del centro: núcleo del sistema adjunto sobre generadores."""
    return kernel_basis(alg.generator_system())


# ============================================================================
# SUBÁLGEBRAS
# ============================================================================

class Subalgebra:
    """
    Subálgebra dada por una base (filas, en coordenadas del álgebra madre).
    Los elementos se expresan en coordenadas de esa base.
    """

    def __init__(self, parent: ChevalleyAlgebra, basis: FieldMatrix, name: str = "sub"):
        if basis.ncols != parent.dim:
            raise InputValidationError("Base de subálgebra con longitud incorrecta", field="basis")
        self.parent = parent
        self.basis = basis
        self.field = parent.field
        self.dim = basis.nrows
        self.name = name
        self._basis_array = basis.to_array()
        self._transpose = basis.transpose()

    @classmethod
    def from_indices(cls, parent: ChevalleyAlgebra, indices: Sequence[int], name: str = "sub"):
        rows = np.zeros((len(indices), parent.dim), dtype=np.int64)
        rows[np.arange(len(indices)), list(indices)] = 1
        return cls(parent, FieldMatrix.from_array(parent.field, rows), name)

    def to_parent(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        f = self.field
        out = self.parent.zero()
        for j in np.flatnonzero(coeffs):
            out = f.vadd(out, f.vmul(self._basis_array[j], int(coeffs[j])))
        return out

    def coordinates(self, x) -> Optional[np.ndarray]:
        return solve(self._transpose, np.asarray(x, dtype=np.int64))

    def contains(self, x) -> bool:
        return self.coordinates(x) is not None

    def bracket(self, a, b) -> np.ndarray:
        value = self.parent.bracket(self.to_parent(a), self.to_parent(b))
        coords = self.coordinates(value)
        if coords is None:
            raise InputValidationError("La subálgebra no es cerrada bajo el corchete", field=self.name)
        return coords

    def p_power(self, a) -> np.ndarray:
        value = self.parent.p_power(self.to_parent(a))
        coords = self.coordinates(value)
        if coords is None:
            raise InputValidationError("La subálgebra no es restringida", field=self.name)
        return coords

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.field.random(rng, self.dim)

    def centralizer(self, elements: Sequence[np.ndarray]) -> FieldMatrix:
        """Base (coordenadas de la madre) de {z ∈ sub : [z, u] = 0 ∀u}."""
        blocks = []
        for u in elements:
            columns = [self.parent.bracket(self._basis_array[j], u) for j in range(self.dim)]
            blocks.append(np.array(columns, dtype=np.int64).T)
        system = FieldMatrix.from_array(self.field, np.vstack(blocks))
        coords = kernel_basis(system)
        if coords.nrows == 0:
            return FieldMatrix.zeros(self.field, 0, self.parent.dim)
        return coords @ self.basis


def span_dim(vectors: Sequence[np.ndarray], field: FieldSpec) -> int:
    if not len(vectors):
        return 0
    return rank(FieldMatrix.from_array(field, np.vstack(vectors)))
