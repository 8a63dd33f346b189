"""
================================================================================
MÓDULO DE ELEMENTOS NILPOTENTES, SEMISIMPLES Y UNIPOTENTES
================================================================================
- Particiones y representantes nilpotentes de so_n (p impar) construidos en el
  modelo matricial y transferidos a coordenadas de Chevalley.
- Tipo de Jordan de una matriz nilpotente por diferencias de rangos.
- Elementos del toro dados por exponentes (t_i = ζ^{c_i}), trialidad en
  so_8, dimensiones de espacios fijos y autoespacios máximos.
- Productos de involuciones de raíz larga Π(I + ρ(e_α)) en característica 2.
================================================================================
"""

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from spinstab.chevalley import SIMPLY_CONNECTED, ChevalleyAlgebra, build_algebra
from spinstab.exactlin import FieldMatrix, inverse, matmul, rank, solve
from spinstab.exceptions import InputValidationError, RepresentationBuildError
from spinstab.fields import FieldSpec
from spinstab.roots import RootVec, build_root_system
from spinstab.spinrep import Representation, anisotropic_vector, vector_rep
from spinstab.utils import get_logger

logger = get_logger(__name__)

_PART_PATTERN = re.compile(r"^(\d+)(?:\s*[x\^]\s*(\d+))?$")


# ============================================================================
# PARTICIONES
# ============================================================================

@dataclass(frozen=True)
class Partition:
    """Partición débilmente decreciente de enteros positivos."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise InputValidationError("Las partes deben ser positivas", field="partition",
                                       value=str(self.parts))
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "Partition":
        """
        Interpreta '2,2,2,2,1x8' o '2^4,1'. Con n, completa con partes 1
        hasta sumar n.
        """
        parts: List[int] = []
        for token in (t.strip() for t in text.split(",")):
            if not token:
                continue
            match = _PART_PATTERN.match(token)
            if not match:
                raise InputValidationError("Parte de partición inválida", field="partition",
                                           value=token, expected_format="k o kxm (ej. 2,2,1x8)")
            size, count = int(match.group(1)), int(match.group(2) or 1)
            parts.extend([size] * count)
        partition = cls(tuple(parts))
        return partition.padded(n) if n is not None else partition

    @property
    def total(self) -> int:
        return sum(self.parts)

    def multiplicities(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.parts).items(), reverse=True))

    def padded(self, n: int) -> "Partition":
        if self.total > n:
            raise InputValidationError("La partición suma más que n", field="partition",
                                       value=str(self), expected_format=f"suma ≤ {n}")
        return Partition(self.parts + (1,) * (n - self.total))

    def is_orthogonal(self) -> bool:
        """Partes pares con multiplicidad par."""
        return all(k % 2 or m % 2 == 0 for k, m in self.multiplicities().items())

    def validate_orthogonal(self, n: int) -> None:
        if self.total != n:
            raise InputValidationError("La partición no suma n", field="partition", value=str(self),
                                       expected_format=f"suma = {n}")
        if not self.is_orthogonal():
            raise InputValidationError("Partes pares con multiplicidad impar", field="partition",
                                       value=str(self))

    def __str__(self) -> str:
        chunks = []
        for k, m in self.multiplicities().items():
            chunks.append(str(k) if m == 1 else f"{k}^{m}")
        return "(" + ",".join(chunks) + ")"


# ============================================================================
# TIPO DE JORDAN
# ============================================================================

def jordan_type(m: FieldMatrix) -> Partition:
    """
    Partición de Jordan de una matriz nilpotente a partir de rank(m^k).

    Raises:
        InputValidationError: m no es cuadrada o no es nilpotente
    """
    if m.nrows != m.ncols:
        raise InputValidationError("Matriz no cuadrada", field="shape", value=m.shape)
    d = m.nrows
    ranks = [d]
    power = m
    while ranks[-1] > 0:
        current = rank(power)
        if current == ranks[-1]:
            raise InputValidationError("La matriz no es nilpotente", field="matrix", value=m.shape)
        ranks.append(current)
        power = matmul(power, m)
    ranks.append(0)
    parts = []
    for k in range(1, len(ranks) - 1):
        at_least_k = ranks[k - 1] - ranks[k]
        at_least_next = ranks[k] - ranks[k + 1]
        parts.extend([k] * (at_least_k - at_least_next))
    return Partition(tuple(parts))


def kernel_dims_of_powers(m: FieldMatrix) -> List[int]:
    """dim ker(m^k) para k = 1..d (usado como oráculo independiente)."""
    out = []
    power = m
    for _ in range(m.nrows):
        out.append(m.nrows - rank(power))
        power = matmul(power, m)
    return out


# ============================================================================
# NILPOTENTES DE so_n (p IMPAR)
# ============================================================================

@dataclass(frozen=True, eq=False)
class NilpotentRepresentative:
    """Representante de Chevalley de una clase nilpotente de so_n."""
    n: int
    partition: Partition
    algebra: ChevalleyAlgebra
    element: np.ndarray
    matrix: FieldMatrix


def _chain_model(partition: Partition, field: FieldSpec):
    """
    Cadenas de Jordan con forma bilineal: devuelve la lista de cadenas
    (listas de índices), los pares hiperbólicos (x, z) como combinaciones
    {índice: coeficiente} y el vector medio sobrante (n impar).
    """
    half = field.inv(2)
    chains: List[List[int]] = []
    pairs: List[Tuple[Dict[int, int], Dict[int, int]]] = []
    middles: List[Tuple[int, int]] = []
    counter = 0

    def new_chain(k: int) -> List[int]:
        nonlocal counter
        chain = list(range(counter, counter + k))
        counter += k
        chains.append(chain)
        return chain

    for k, mult in partition.multiplicities().items():
        if k % 2 == 0:
            for _ in range(mult // 2):
                w, w2 = new_chain(k), new_chain(k)
                # B(w_i, w'_j) = (−1)^i δ_{i+j,k−1}
                for i in range(k):
                    c = 1 if i % 2 == 0 else field.neg(1)
                    pairs.append(({w[i]: 1}, {w2[k - 1 - i]: c}))
            continue
        for _ in range(mult):
            w = new_chain(k)
            half_len = (k - 1) // 2
            # signo del bloque para que los vectores medios alternen ±1
            sign = 1 if len(middles) % 2 == 0 else -1
            base = sign * (-1) ** half_len
            for i in range(half_len):
                c = field.from_int(base * (-1) ** i)
                pairs.append(({w[i]: 1}, {w[k - 1 - i]: c}))
            middles.append((w[half_len], sign))

    positives = [v for v, s in middles if s == 1]
    negatives = [v for v, s in middles if s == -1]
    for a, b in zip(positives, negatives):
        pairs.append(({a: 1, b: 1}, {a: half, b: field.neg(half)}))
    leftover = positives[len(negatives):]
    return chains, pairs, leftover, counter


def nilpotent_from_partition(n: int, partition: Partition, field: FieldSpec,
                             algebra: Optional[ChevalleyAlgebra] = None) -> NilpotentRepresentative:
    """
    Nilpotente de so_n con tipo de Jordan λ, en el álgebra D_r con
    r = ⌈n/2⌉; para n impar vive en el anulador del vector anisótropo de la
    realización de tipo B.

    Raises:
        InputValidationError: p = 2, partición inválida
        RepresentationBuildError: la transferencia a Chevalley falla
    """
    if field.p == 2:
        raise InputValidationError("Representantes por partición solo en característica impar",
                                   field="char", value=2)
    partition.validate_orthogonal(n)
    r = (n + 1) // 2
    alg = algebra or build_algebra(build_root_system("D", r), SIMPLY_CONNECTED, field)
    dim = 2 * r

    chains, pairs, leftover, total = _chain_model(partition, field)
    # P: columna = coordenadas estándar de cada vector de cadena
    images = np.zeros((dim, dim), dtype=np.int64)
    half = field.inv(2)
    # vector estándar -> combinación de vectores de cadena (inversa de P)
    for slot, (x, z) in enumerate(pairs):
        for idx, c in x.items():
            images[slot, idx] = field.add(int(images[slot, idx]), c)
        for idx, c in z.items():
            images[dim - 1 - slot, idx] = field.add(int(images[dim - 1 - slot, idx]), c)
    if n % 2:
        # v_{r−1} = (u + y)/2, v_r = u − y con u el medio sobrante
        (u,) = leftover
        y_slot = total
        images[r - 1, u] = half
        images[r - 1, y_slot] = half
        images[r, u] = 1
        images[r, y_slot] = field.neg(1)
    # images[s, :] expresa v_s en la base de cadenas; su traspuesta es P⁻¹
    q_matrix = FieldMatrix.from_array(field, images.T)
    nil = np.zeros((dim, dim), dtype=np.int64)
    for chain in chains:
        for a, b in zip(chain, chain[1:]):
            nil[b, a] = 1
    n_chain = FieldMatrix.from_array(field, nil)
    a_matrix = matmul(matmul(inverse(q_matrix), n_chain), q_matrix)

    vec = vector_rep(r, algebra=alg)
    system = np.stack([vec.action_array(j).ravel() for j in range(alg.dim)], axis=1)
    x = solve(FieldMatrix.from_array(field, system), a_matrix.to_array().ravel())
    if x is None:
        raise RepresentationBuildError("La matriz no pertenece a la imagen de so_{2r}",
                                       rep_kind="nilpotent", rank=r)
    target = partition if n % 2 == 0 else Partition(partition.parts + (1,))
    found = jordan_type(vec.act(x))
    if found != target:
        raise RepresentationBuildError(f"Tipo de Jordan tras transferencia {found} ≠ {target}",
                                       rep_kind="nilpotent", rank=r)
    if n % 2 and np.any(vec.apply(x, anisotropic_vector(r, field))):
        raise RepresentationBuildError("El nilpotente no anula al vector anisótropo",
                                       rep_kind="nilpotent", rank=r)
    logger.debug(f"✅ Nilpotente {partition} en so_{n} transferido a D{r}")
    return NilpotentRepresentative(n, partition, alg, x, a_matrix)


# ============================================================================
# ELEMENTOS DEL TORO
# ============================================================================

@dataclass(frozen=True)
class ExponentVector:
    """t_i = ζ^{c_i} con ζ raíz primitiva m-ésima; coordenadas reducidas mod m."""
    coords: Tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InputValidationError("El módulo debe ser ≥ 1", field="modulus", value=self.modulus)
        object.__setattr__(self, "coords", tuple(int(c) % self.modulus for c in self.coords))

    @classmethod
    def parse(cls, text: str, modulus: int) -> "ExponentVector":
        try:
            coords = tuple(int(t) for t in text.split(",") if t.strip())
        except ValueError as e:
            raise InputValidationError("Exponentes inválidos", field="torus", value=text,
                                       expected_format="c1,c2,...") from e
        return cls(coords, modulus)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def shifted(self, k: int) -> "ExponentVector":
        return ExponentVector(tuple(c + k for c in self.coords), self.modulus)

    def halved(self) -> "ExponentVector":
        """Reescribe respecto de η² cuando el módulo y los exponentes son pares."""
        if self.modulus % 2 or any(c % 2 for c in self.coords):
            return self
        return ExponentVector(tuple(c // 2 for c in self.coords), self.modulus // 2)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.coords))}) mod {self.modulus}"


_TRIALITY_FIRST = np.array([[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [1, -1, -1, -1]], dtype=np.int64)
_TRIALITY_SECOND = np.array([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [-1, 1, 1, -1]], dtype=np.int64)


@dataclass(frozen=True)
class TrialityImage:
    """
    Imágenes σ(g), σ²(g) en exponentes respecto de η (η² = ζ, módulo 2m);
    `*_alt` es la alternativa ε = −1 (suma m a todas las coordenadas).
    """
    first: ExponentVector
    first_alt: ExponentVector
    second: ExponentVector
    second_alt: ExponentVector


def triality_torus_image(c: ExponentVector) -> TrialityImage:
    """Imágenes por trialidad de un elemento del toro de SO_8."""
    if c.rank != 4:
        raise InputValidationError("La trialidad requiere rango 4", field="torus", value=c.rank)
    m = c.modulus
    vec = np.array(c.coords, dtype=np.int64)
    first = ExponentVector(tuple(_TRIALITY_FIRST @ vec), 2 * m)
    second = ExponentVector(tuple(_TRIALITY_SECOND @ vec), 2 * m)
    return TrialityImage(first, first.shifted(m), second, second.shifted(m))


def triality_cube(c: ExponentVector) -> List[ExponentVector]:
    """
    Resultados posibles (módulo 8m) de aplicar σ tres veces, recorriendo las
    elecciones de ε en cada paso.
    """
    frontier = [c]
    for _ in range(3):
        nxt = []
        for v in frontier:
            image = triality_torus_image(v)
            nxt.extend([image.first, image.first_alt])
        frontier = nxt
    return sorted(set(frontier), key=lambda v: v.coords)


def weight_exponents(weights: np.ndarray, c: ExponentVector) -> np.ndarray:
    """Σ d_i c_i mod 2m: exponente de η sobre cada peso (coordenadas duplicadas)."""
    weights = np.asarray(weights, dtype=np.int64)
    if weights.shape[1] != c.rank:
        raise InputValidationError("Rango del vector de exponentes incompatible", field="torus",
                                   value=c.rank, expected_format=str(weights.shape[1]))
    return (weights @ np.array(c.coords, dtype=np.int64)) % (2 * c.modulus)


def torus_fixed_dim(weights: np.ndarray, c: ExponentVector) -> int:
    return int(np.count_nonzero(weight_exponents(weights, c) == 0))


def torus_max_eigenspace(weights: np.ndarray, c: ExponentVector) -> int:
    exps = weight_exponents(weights, c)
    return int(np.bincount(exps, minlength=2 * c.modulus).max())


def is_noncentral(c: ExponentVector, roots: Iterable[RootVec]) -> bool:
    """Algún emparejamiento con una raíz (c_i ± c_j) no es ≡ 0 mod m."""
    vec = np.array(c.coords, dtype=np.int64)
    for alpha in roots:
        if (np.array(alpha.coords, dtype=np.int64) @ vec // 2) % c.modulus:
            return True
    return False


def enumerate_exponent_vectors(rank_: int, m: int) -> Iterator[ExponentVector]:
    for coords in itertools.product(range(m), repeat=rank_):
        yield ExponentVector(coords, m)


def sample_exponent_vectors(rank_: int, m: int, count: int, rng: np.random.Generator
                            ) -> List[ExponentVector]:
    draws = rng.integers(0, m, size=(count, rank_))
    return [ExponentVector(tuple(row), m) for row in draws.tolist()]


def semisimple_bound_violations(weights: np.ndarray, roots: Sequence[RootVec],
                                vectors: Iterable[ExponentVector]) -> List[ExponentVector]:
    """Elementos no centrales con 8·(autoespacio máximo) > 5·dim V."""
    dim = len(weights)
    bad = []
    for c in vectors:
        if is_noncentral(c, roots) and 8 * torus_max_eigenspace(weights, c) > 5 * dim:
            bad.append(c)
    return bad


def torus_matrix(weights: np.ndarray, c: ExponentVector, xi: int, field: FieldSpec) -> FieldMatrix:
    """Matriz diagonal diag(ξ^{Σ d_i c_i}) con ξ de orden 2m en el cuerpo."""
    if field.pow(xi, 2 * c.modulus) != 1:
        raise InputValidationError("ξ no tiene orden divisor de 2m", field="xi", value=xi)
    exps = weight_exponents(weights, c)
    return FieldMatrix.from_array(field, np.diag([field.pow(xi, int(e)) for e in exps]))


# ============================================================================
# UNIPOTENTES EN CARACTERÍSTICA 2
# ============================================================================

def unipotent_from_roots(rep: Representation, roots: Sequence[RootVec]) -> FieldMatrix:
    """
    Π (I + ρ(e_α)) para raíces ortogonales dos a dos en característica 2.

    Raises:
        InputValidationError: p ≠ 2, raíces no ortogonales, o el producto no
            es una involución
    """
    alg = rep.algebra
    if rep.field.p != 2:
        raise InputValidationError("Involuciones de raíz solo en característica 2", field="char",
                                   value=rep.field.p)
    for a, b in itertools.combinations(roots, 2):
        if a.dot4(b) != 0:
            raise InputValidationError("Raíces no ortogonales", field="roots", value=f"{a}, {b}")
    identity = FieldMatrix.identity(rep.field, rep.dim)
    g = identity
    for alpha in roots:
        g = matmul(g, identity + rep.action(alg.rs.index[alpha]))
    if matmul(g, g) != identity:
        raise InputValidationError("El producto no es una involución", field="roots")
    return g
