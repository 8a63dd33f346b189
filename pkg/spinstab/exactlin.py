"""
================================================================================
MÓDULO DE ÁLGEBRA LINEAL EXACTA
================================================================================
Rango, núcleo, resolución de sistemas e inversa sobre cuerpos finitos, y forma
normal de Smith sobre los enteros.

ALMACENAMIENTO:
- GF(2): cada fila es una secuencia contigua de palabras uint64, un bit por
  entrada (columna c -> palabra c // 64, bit c % 64). La eliminación usa XOR
  de filas completas vectorizado con numpy.
- Otros cuerpos: array denso int64 con representantes canónicos.
- Enteros: listas de int de Python (precisión arbitraria).

El pivote es siempre la primera entrada no nula en orden de columnas, de modo
que todos los resultados son deterministas y reproducibles bit a bit.
================================================================================
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from spinstab.exceptions import FieldArithmeticError, InputValidationError
from spinstab.fields import FieldSpec
from spinstab.utils import get_logger

logger = get_logger(__name__)

WORD_BITS = 64
_FLOAT_EXACT = 2 ** 52


# ============================================================================
# EMPAQUETADO DE BITS
# ============================================================================

def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Empaqueta una matriz 0/1 (n, m) en palabras uint64 little-endian."""
    bits = np.asarray(bits, dtype=np.uint8)
    nrows, ncols = bits.shape
    nwords = max(1, -(-ncols // WORD_BITS))
    padded = np.zeros((nrows, nwords * WORD_BITS), dtype=np.uint8)
    padded[:, :ncols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").reshape(nrows, nwords).astype(np.uint64)


def unpack_bits(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    nrows = words.shape[0]
    raw = words.view(np.uint8).reshape(nrows, -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :ncols].astype(np.int64)


# ============================================================================
# MATRICES SOBRE CUERPOS FINITOS
# ============================================================================

class FieldMatrix:
    """
    Matriz densa sobre un FieldSpec. Inmutable tras la construcción.

    Sobre GF(2) guarda filas empaquetadas (`words`); en otro caso un array
    int64. `to_array()` siempre devuelve la forma densa.
    """

    __slots__ = ("field", "nrows", "ncols", "_data")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, data: np.ndarray):
        expected = (nrows, max(1, -(-ncols // WORD_BITS))) if field.is_binary else (nrows, ncols)
        if data.shape != expected:
            raise InputValidationError(
                "Forma de almacenamiento inconsistente",
                field="FieldMatrix", value=str(data.shape), expected_format=str(expected)
            )
        data.setflags(write=False)
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self._data = data

    # ------------------------------------------------------------------
    # Constructores
    # ------------------------------------------------------------------

    @classmethod
    def from_array(cls, field: FieldSpec, array) -> "FieldMatrix":
        a = np.asarray(array, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise InputValidationError("Se esperaba una matriz 2D", field="array", value=a.ndim)
        if field.e == 1:
            a = np.mod(a, field.p)
        elif a.size and (a.min() < 0 or a.max() >= field.q):
            raise FieldArithmeticError(
                "Entradas fuera del rango canónico", operation="from_array", field=field.name
            )
        nrows, ncols = a.shape
        if field.is_binary:
            return cls(field, nrows, ncols, pack_bits(a))
        return cls(field, nrows, ncols, np.array(a, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "FieldMatrix":
        return cls.from_array(field, np.zeros((nrows, ncols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "FieldMatrix":
        return cls.from_array(field, np.eye(n, dtype=np.int64))

    # ------------------------------------------------------------------
    # Acceso
    # ------------------------------------------------------------------

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def packed(self) -> bool:
        return self.field.is_binary

    @property
    def words(self) -> np.ndarray:
        if not self.packed:
            raise InputValidationError("Solo las matrices sobre GF(2) están empaquetadas", field="words")
        return self._data

    def to_array(self) -> np.ndarray:
        if self.packed:
            return unpack_bits(self._data, self.ncols)
        return self._data.copy()

    def row(self, i: int) -> np.ndarray:
        if self.packed:
            return unpack_bits(self._data[i:i + 1], self.ncols)[0]
        return self._data[i].copy()

    def is_zero(self) -> bool:
        return not np.any(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.field is other.field and self.shape == other.shape
                and np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.field.q, self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix({self.field.name}, {self.nrows}x{self.ncols})"

    # ------------------------------------------------------------------
    # Aritmética
    # ------------------------------------------------------------------

    def _check_same(self, other: "FieldMatrix") -> None:
        if other.field is not self.field:
            raise InputValidationError("Matrices sobre cuerpos distintos", field="field",
                                       value=f"{self.field.name} vs {other.field.name}")

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise InputValidationError("Formas distintas en suma", field="shape",
                                       value=f"{self.shape} vs {other.shape}")
        if self.packed:
            return FieldMatrix(self.field, self.nrows, self.ncols, self._data ^ other._data)
        return FieldMatrix(self.field, self.nrows, self.ncols, self.field.vadd(self._data, other._data))

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if self.packed:
            return self + other
        return FieldMatrix.from_array(self.field, self.field.vsub(self._data, other.to_array()))

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        return matmul(self, other)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix.from_array(self.field, self.field.vmul(self.to_array(), c))

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix.from_array(self.field, self.to_array().T)

    def mul_vec(self, v) -> np.ndarray:
        """Producto matriz-vector columna."""
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.ncols,):
            raise InputValidationError("Longitud de vector incompatible", field="v",
                                       value=v.shape, expected_format=f"({self.ncols},)")
        product = matmul(self, FieldMatrix.from_array(self.field, v.reshape(-1, 1)))
        return product.to_array()[:, 0]

    def power(self, k: int) -> "FieldMatrix":
        if self.nrows != self.ncols:
            raise InputValidationError("Potencia de matriz no cuadrada", field="shape", value=self.shape)
        result = FieldMatrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = matmul(result, base)
            base = matmul(base, base)
            k >>= 1
        return result

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        return FieldMatrix.from_array(self.field, np.vstack([self.to_array(), other.to_array()]))

    def hstack(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        return FieldMatrix.from_array(self.field, np.hstack([self.to_array(), other.to_array()]))


def matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """Producto exacto de matrices sobre el mismo cuerpo."""
    a._check_same(b)
    if a.ncols != b.nrows:
        raise InputValidationError("Dimensiones incompatibles en producto", field="shape",
                                   value=f"{a.shape} @ {b.shape}")
    field = a.field
    left, right = a.to_array(), b.to_array()
    if field.e == 1:
        bound = (field.p - 1) ** 2 * max(1, a.ncols)
        if bound < _FLOAT_EXACT:
            product = np.rint(left.astype(np.float64) @ right.astype(np.float64)).astype(np.int64)
        else:
            product = left @ right
        return FieldMatrix.from_array(field, product % field.p)
    acc = np.zeros((a.nrows, b.ncols), dtype=np.int64)
    for k in range(a.ncols):
        acc ^= field.vmul(left[:, k:k + 1], right[k:k + 1, :])
    return FieldMatrix.from_array(field, acc)


# ============================================================================
# ELIMINACIÓN
# ============================================================================

def _rref_packed(words: np.ndarray, ncols: int) -> Tuple[np.ndarray, List[int]]:
    w = np.array(words, dtype=np.uint64)
    nrows = w.shape[0]
    pivots: List[int] = []
    r = 0
    one = np.uint64(1)
    for c in range(ncols):
        if r == nrows:
            break
        wi, bit = divmod(c, WORD_BITS)
        shift = np.uint64(bit)
        hits = np.flatnonzero((w[r:, wi] >> shift) & one)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            w[[r, p]] = w[[p, r]]
        column = (w[:, wi] >> shift) & one
        column[r] = 0
        targets = np.flatnonzero(column)
        if targets.size:
            w[targets] ^= w[r]
        pivots.append(c)
        r += 1
    return w, pivots


def _rref_dense(a: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, List[int]]:
    a = np.array(a, dtype=np.int64)
    nrows, ncols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        pivot = int(a[r, c])
        if pivot != 1:
            a[r] = field.vmul(a[r], field.inv(pivot))
        factors = a[:, c].copy()
        factors[r] = 0
        targets = np.flatnonzero(factors)
        if targets.size:
            a[targets] = field.vsub(a[targets], field.vmul(factors[targets, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: FieldMatrix) -> Tuple[FieldMatrix, List[int]]:
    """Forma escalonada reducida por filas y lista de columnas pivote."""
    if m.packed:
        words, pivots = _rref_packed(m.words, m.ncols)
        return FieldMatrix(m.field, m.nrows, m.ncols, words), pivots
    data, pivots = _rref_dense(m.to_array(), m.field)
    return FieldMatrix(m.field, m.nrows, m.ncols, data), pivots


def rank(m: FieldMatrix) -> int:
    """Rango sobre el cuerpo de la matriz."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return len(rref(m)[1])


def kernel_basis(m: FieldMatrix) -> FieldMatrix:
    """
    Base del núcleo derecho: filas x con m·xᵀ = 0. Número de filas =
    columnas − rango. Cada fila tiene un 1 en su columna libre.
    """
    reduced, pivots = rref(m)
    field = m.field
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    basis = np.zeros((len(free), m.ncols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            dense = reduced.to_array()[:len(pivots)]
            basis[:, pivots] = field.vneg(dense[:, free].T)
    return FieldMatrix.from_array(field, basis)


def solve(m: FieldMatrix, rhs) -> Optional[np.ndarray]:
    """
    Una solución de m·x = rhs, o None si el sistema es inconsistente.
    """
    rhs = np.asarray(rhs, dtype=np.int64)
    if rhs.shape != (m.nrows,):
        raise InputValidationError("Longitud del lado derecho incompatible", field="rhs",
                                   value=rhs.shape, expected_format=f"({m.nrows},)")
    augmented = m.hstack(FieldMatrix.from_array(m.field, rhs.reshape(-1, 1)))
    reduced, pivots = rref(augmented)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = np.zeros(m.ncols, dtype=np.int64)
    if pivots:
        x[pivots] = reduced.to_array()[:len(pivots), m.ncols]
    if not np.array_equal(m.mul_vec(x), FieldMatrix.from_array(m.field, rhs).to_array()[0]):
        raise FieldArithmeticError("La solución no verifica el sistema", operation="solve", field=m.field.name)
    return x


def inverse(m: FieldMatrix) -> FieldMatrix:
    """Inversa de una matriz cuadrada; levanta InputValidationError si es singular."""
    if m.nrows != m.ncols:
        raise InputValidationError("Inversa de matriz no cuadrada", field="shape", value=m.shape)
    n = m.nrows
    reduced, pivots = rref(m.hstack(FieldMatrix.identity(m.field, n)))
    if pivots[:n] != list(range(n)):
        raise InputValidationError("La matriz es singular", field="matrix", value=m.shape)
    return FieldMatrix.from_array(m.field, reduced.to_array()[:, n:])


def rows_to_ints(m: FieldMatrix) -> List[int]:
    """Filas de una matriz sobre GF(2) como enteros de Python (bit c = columna c)."""
    bits = m.to_array()
    weights = [1 << c for c in range(m.ncols)]
    return [sum(w for w, b in zip(weights, row) if b) for row in bits.tolist()]


def naive_rank_gf2(rows: Iterable[int], ncols: int) -> int:
    """
    Rango sobre GF(2) por eliminación sin empaquetar: cada fila es un entero
    y se reduce contra los pivotes ya encontrados por su bit más alto.
    """
    pivots = {}
    mask = (1 << ncols) - 1
    for row in rows:
        v = row & mask
        while v:
            top = v.bit_length() - 1
            if top in pivots:
                v ^= pivots[top]
            else:
                pivots[top] = v
                break
    return len(pivots)


# ============================================================================
# MATRICES ENTERAS Y FORMA NORMAL DE SMITH
# ============================================================================

class IntMatrix:
    """Matriz de enteros de precisión arbitraria (tuplas inmutables)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[int]], ncols: Optional[int] = None):
        self.rows = tuple(tuple(int(x) for x in row) for row in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(row) != self.ncols for row in self.rows):
            raise InputValidationError("Filas de longitud distinta", field="IntMatrix")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_array(cls, array) -> "IntMatrix":
        return cls(np.asarray(array).tolist())

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def to_list(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(col) for col in zip(*self.rows)], ncols=self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise InputValidationError("Dimensiones incompatibles en producto entero", field="shape",
                                       value=f"{self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        cols = list(zip(*other.rows))
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows],
                         ncols=other.ncols)

    def abs_det(self) -> int:
        if self.nrows != self.ncols:
            raise InputValidationError("Determinante de matriz no cuadrada", field="shape")
        result = 1
        for d in smith_normal_form(self).divisors:
            result *= d
        return result


@dataclass(frozen=True)
class SnfResult:
    """Divisores elementales y transformaciones unimodulares: U·A·V = D."""
    divisors: Tuple[int, ...]
    U: IntMatrix
    V: IntMatrix
    diagonal: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.divisors if d > 1)


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """
    Forma normal de Smith con aritmética entera exacta.

    El pivote es la entrada no nula de menor valor absoluto; las filas y
    columnas se reducen por división entera hasta anular la cruz del pivote
    y luego se fuerza la divisibilidad d_t | d_{t+1}.
    """
    nr, nc = m.nrows, m.ncols
    a = [list(r) for r in m.rows]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])

        while True:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    changed = changed or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    changed = changed or a[t][j] != 0
            if changed:
                bi, bj = t, t
                for i in range(t + 1, nr):
                    if a[i][t] and abs(a[i][t]) < abs(a[bi][bj]):
                        bi, bj = i, t
                for j in range(t + 1, nc):
                    if a[t][j] and abs(a[t][j]) < abs(a[bi][bj]):
                        bi, bj = t, j
                if bi != t:
                    swap_rows(t, bi)
                elif bj != t:
                    swap_cols(t, bj)
                continue
            offender = None
            for i in range(t + 1, nr):
                if any(a[i][j] % a[t][t] for j in range(t + 1, nc)):
                    offender = i
                    break
            if offender is None:
                break
            add_row(t, offender, 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    result = SnfResult(
        divisors=tuple(a[i][i] for i in range(min(nr, nc))),
        U=IntMatrix(u, ncols=nr),
        V=IntMatrix(v, ncols=nc),
        diagonal=IntMatrix(a, ncols=nc),
    )
    if result.U @ m @ result.V != result.diagonal:
        raise FieldArithmeticError("U·A·V no reproduce la forma diagonal", operation="smith_normal_form")
    return result


def snf_inverse(m: IntMatrix) -> Tuple[IntMatrix, int]:
    """
    Inversa racional de una matriz entera cuadrada vía SNF:
    A⁻¹ = V·D⁻¹·U = adj / den, con adj entera y den = último divisor.
    """
    if m.nrows != m.ncols:
        raise InputValidationError("Inversa de matriz no cuadrada", field="shape")
    snf = smith_normal_form(m)
    if any(d == 0 for d in snf.divisors):
        raise InputValidationError("Matriz entera singular", field="matrix")
    den = snf.divisors[-1]
    n = m.nrows
    scaled = IntMatrix([[den // snf.divisors[i] if i == j else 0 for j in range(n)] for i in range(n)])
    adj = snf.V @ scaled @ snf.U
    return adj, den


def lattice_basis(generators: Iterable[Sequence[int]]) -> IntMatrix:
    """
    Base (forma escalonada de Hermite por filas) del retículo generado por
    los vectores enteros dados.
    """
    rows = [list(int(x) for x in g) for g in generators]
    ncols = len(rows[0]) if rows else 0
    rows = [r for r in rows if any(r)]
    basis: List[List[int]] = []
    col = 0
    while rows and col < ncols:
        active = [r for r in rows if r[col]]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            pivot = active[0]
            for r in active[1:]:
                q = r[col] // pivot[col]
                for k in range(ncols):
                    r[k] -= q * pivot[k]
            active = [pivot] + [r for r in active[1:] if r[col]]
        pivot = active[0]
        rows = [r for r in rows if r is not pivot and any(r)]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        col += 1
    return IntMatrix(basis, ncols=ncols)
