"""
================================================================================
MÓDULO DE SISTEMAS DE RAÍCES
================================================================================
Sistemas de raíces D_r (r ≥ 3) y E8 en coordenadas de Bourbaki, con las
coordenadas duplicadas para que las semienteras sean enteras.

Convenciones:
- Un RootVec guarda d = 2·(coordenadas reales). (α|β) = Σ d_i d'_i / 4.
- D_r: α_i = ε_i − ε_{i+1} (i < r), α_r = ε_{r−1} + ε_r.
- E8: α_1 = ½(ε_1 + ε_8 − ε_2 − … − ε_7), α_2 = ε_1 + ε_2,
  α_k = ε_{k−1} − ε_{k−2} para k = 3..8.
- Orden de las raíces: positivas por (altura, coordenadas duplicadas) y a
  continuación sus opuestas en el mismo orden.

El grupo de Weyl de tipo D se recorre como permutaciones con signo:
w = (perm, signs) actúa por y[perm[i]] = signs[i]·x[i].
================================================================================
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from spinstab.exceptions import RootDataError
from spinstab.utils import get_logger

logger = get_logger(__name__)

WEYL_ENUMERATION_MAX_RANK = 8


@dataclass(frozen=True, order=True)
class RootVec:
    """Raíz o peso en coordenadas duplicadas (enteras)."""
    coords: Tuple[int, ...]

    @classmethod
    def from_halves(cls, values: Sequence) -> "RootVec":
        """Construye desde coordenadas reales (enteras o múltiplos de ½)."""
        doubled = []
        for x in values:
            twice = Fraction(x) * 2
            if twice.denominator != 1:
                raise RootDataError("Coordenada no semientera", root_type=str(values))
            doubled.append(int(twice))
        return cls(tuple(doubled))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "RootVec") -> "RootVec":
        return RootVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVec") -> "RootVec":
        return RootVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVec":
        return RootVec(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "RootVec":
        return RootVec(tuple(k * a for a in self.coords))

    def dot4(self, other: "RootVec") -> int:
        """Cuatro veces el producto escalar real."""
        return sum(a * b for a, b in zip(self.coords, other.coords))

    def inner(self, other: "RootVec"):
        """Producto escalar (α|β); entero cuando es entero, Fraction si no."""
        value = Fraction(self.dot4(other), 4)
        return int(value) if value.denominator == 1 else value

    @property
    def norm2(self) -> int:
        """Norma duplicada Σ d_i² (vale 8 para toda raíz)."""
        return self.dot4(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def halves(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(a, 2) for a in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(Fraction(a, 2)) for a in self.coords) + ")"


def reflect(alpha: RootVec, v: RootVec) -> RootVec:
    """Reflexión s_α(v) = v − (v|α^∨)α (sistemas simplemente enlazados)."""
    k = Fraction(2 * v.dot4(alpha), alpha.dot4(alpha))
    if k.denominator != 1:
        raise RootDataError("Emparejamiento no entero en la reflexión", root_type=str(alpha))
    return v - alpha.scale(int(k))


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    Sistema de raíces completo con su base simple, matriz de Cartan y
    coeficientes simples de cada raíz.
    """
    root_type: str
    rank: int
    roots: Tuple[RootVec, ...]
    simple: Tuple[RootVec, ...]
    cartan: np.ndarray
    coefficients: Dict[RootVec, Tuple[int, ...]]
    index: Dict[RootVec, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {r: i for i, r in enumerate(self.roots)})

    @property
    def name(self) -> str:
        return "E8" if self.root_type == "E" else f"D{self.rank}"

    @property
    def n_positive(self) -> int:
        return len(self.roots) // 2

    @property
    def positive(self) -> Tuple[RootVec, ...]:
        return self.roots[:self.n_positive]

    def is_root(self, v: RootVec) -> bool:
        return v in self.coefficients

    def is_positive(self, v: RootVec) -> bool:
        return self.index[v] < self.n_positive

    def height(self, v: RootVec) -> int:
        return sum(self.coefficients[v])

    def simple_index(self, v: RootVec) -> int:
        """Índice i si v = α_i, −1 en otro caso."""
        try:
            return self.simple.index(v)
        except ValueError:
            return -1

    def coords_array(self) -> np.ndarray:
        return np.array([r.coords for r in self.roots], dtype=np.int64)

    def to_dict(self) -> dict:
        return {
            "type": self.name,
            "rank": self.rank,
            "simple_roots": [list(r.coords) for r in self.simple],
            "roots": [list(r.coords) for r in self.roots],
            "coordinates": "doubled",
        }


def _simple_roots(root_type: str, rank: int) -> List[RootVec]:
    if root_type == "D":
        simple = []
        for i in range(rank - 1):
            d = [0] * rank
            d[i], d[i + 1] = 2, -2
            simple.append(RootVec(tuple(d)))
        d = [0] * rank
        d[rank - 2], d[rank - 1] = 2, 2
        simple.append(RootVec(tuple(d)))
        return simple
    simple = [RootVec((1, -1, -1, -1, -1, -1, -1, 1)), RootVec((2, 2, 0, 0, 0, 0, 0, 0))]
    for k in range(3, 9):
        d = [0] * 8
        d[k - 3], d[k - 2] = -2, 2
        simple.append(RootVec(tuple(d)))
    return simple


def build_root_system(root_type: str, rank: int) -> RootSystem:
    """
    Enumera el sistema de raíces de tipo D_r (r ≥ 3) o E8.

    Las raíces positivas se generan sumando raíces simples (lo que registra
    sus coeficientes simples); en un sistema simplemente enlazado, un vector
    del retículo de raíces con norma 2 es una raíz.

    Raises:
        RootDataError: tipo o rango no soportado
    """
    root_type = root_type.upper()
    if root_type in ("E8",):
        root_type, rank = "E", rank or 8
    if root_type == "D" and rank < 3:
        raise RootDataError("Tipo D requiere rango ≥ 3", root_type="D", rank=rank)
    if root_type == "E" and rank != 8:
        raise RootDataError("Solo se soporta E8 entre los tipos excepcionales", root_type="E", rank=rank)
    if root_type not in ("D", "E"):
        raise RootDataError("Tipo de raíces no soportado", root_type=root_type, rank=rank)

    simple = _simple_roots(root_type, rank)
    coefficients: Dict[RootVec, Tuple[int, ...]] = {}
    frontier = []
    for i, alpha in enumerate(simple):
        c = [0] * rank
        c[i] = 1
        coefficients[alpha] = tuple(c)
        frontier.append(alpha)
    while frontier:
        nxt = []
        for beta in frontier:
            for i, alpha in enumerate(simple):
                gamma = beta + alpha
                if gamma.norm2 == 8 and gamma not in coefficients:
                    c = list(coefficients[beta])
                    c[i] += 1
                    coefficients[gamma] = tuple(c)
                    nxt.append(gamma)
        frontier = nxt

    positive = sorted(coefficients, key=lambda r: (sum(coefficients[r]), r.coords))
    for r in positive:
        coefficients[-r] = tuple(-c for c in coefficients[r])
    roots = tuple(positive) + tuple(-r for r in positive)

    cartan = np.array([[2 * a.dot4(b) // b.dot4(b) for b in simple] for a in simple], dtype=np.int64)
    rs = RootSystem(root_type, rank, roots, tuple(simple), cartan, coefficients)

    expected = 240 if root_type == "E" else 2 * rank * (rank - 1)
    if len(roots) != expected:
        raise RootDataError("Conteo de raíces inesperado", root_type=rs.name, rank=len(roots))
    logger.debug(f"🌿 Sistema {rs.name}: {len(roots)} raíces")
    return rs


# ============================================================================
# GRUPO DE WEYL DE TIPO D (PERMUTACIONES CON SIGNO)
# ============================================================================

@dataclass(frozen=True, order=True)
class SignedPermutation:
    """w(x)[perm[i]] = signs[i]·x[i]; número par de signos −1."""
    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    def apply(self, v: RootVec) -> RootVec:
        out = [0] * len(self.perm)
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            out[p] = s * v.coords[i]
        return RootVec(tuple(out))

    def apply_array(self, coords: np.ndarray) -> np.ndarray:
        """Aplica w a un array (..., r) de coordenadas."""
        coords = np.asarray(coords)
        out = np.empty_like(coords)
        out[..., list(self.perm)] = coords * np.array(self.signs, dtype=coords.dtype)
        return out

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """(self ∘ other)(x) = self(other(x))."""
        r = len(self.perm)
        perm = [0] * r
        signs = [0] * r
        for i in range(r):
            j = other.perm[i]
            perm[i] = self.perm[j]
            signs[i] = other.signs[i] * self.signs[j]
        return SignedPermutation(tuple(perm), tuple(signs))

    def inverse(self) -> "SignedPermutation":
        r = len(self.perm)
        perm = [0] * r
        signs = [0] * r
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    @classmethod
    def identity(cls, rank: int) -> "SignedPermutation":
        return cls(tuple(range(rank)), (1,) * rank)


def weyl_group_order(rs: RootSystem) -> int:
    r = rs.rank
    return 2 ** (r - 1) * math.factorial(r)


def longest_element(rank: int) -> SignedPermutation:
    """w_0 de D_r: −Id si r es par; −Id salvo la última coordenada si r es impar."""
    signs = [-1] * rank
    if rank % 2:
        signs[-1] = 1
    return SignedPermutation(tuple(range(rank)), tuple(signs))


def even_sign_patterns(rank: int) -> List[Tuple[int, ...]]:
    patterns = []
    for bits in itertools.product((1, -1), repeat=rank):
        if bits.count(-1) % 2 == 0:
            patterns.append(bits)
    return patterns


def weyl_group_elements(rs: RootSystem) -> Iterator[SignedPermutation]:
    """
    Recorre los 2^{r−1}·r! elementos del grupo de Weyl de tipo D (para E8,
    el subgrupo W(D8) que actúa sobre las coordenadas ε).

    Raises:
        RootDataError: r > 8 (protección de enumeración)
    """
    r = rs.rank
    if r > WEYL_ENUMERATION_MAX_RANK:
        raise RootDataError("Enumeración de Weyl limitada a rango ≤ 8", root_type=rs.name, rank=r)
    patterns = even_sign_patterns(r)
    for perm in itertools.permutations(range(r)):
        for signs in patterns:
            yield SignedPermutation(perm, signs)
