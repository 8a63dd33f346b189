"""
================================================================================
MÓDULO DE CUERPOS FINITOS
================================================================================
Aritmética exacta sobre GF(p) (p primo, 2 ≤ p ≤ 251) y GF(2^e) (e ≤ 8).

Representación de los elementos: enteros canónicos 0..q-1.
- GF(p): residuos módulo p; tabla de inversos precalculada.
- GF(2^e): base polinomial (bit i = coeficiente de x^i), suma = XOR,
  producto mediante tablas log/antilog respecto de un generador del grupo
  multiplicativo (el menor que se encuentre por búsqueda).

Todas las operaciones existen en versión escalar (add, mul, inv, sqrt...) y
vectorizada sobre arrays de numpy (vadd, vmul, vinv...). Las instancias se
obtienen con `get_field`, que las cachea: dos llamadas con los mismos
argumentos devuelven el mismo objeto.
================================================================================
"""

from functools import lru_cache
from typing import Optional

import numpy as np

from spinstab.exceptions import FieldArithmeticError
from spinstab.utils import get_logger

logger = get_logger(__name__)

# Polinomios irreducibles por defecto sobre GF(2), codificados en bits
DEFAULT_MODULI = {
    2: 0b111,          # x^2 + x + 1
    3: 0b1011,         # x^3 + x + 1
    4: 0b10011,        # x^4 + x + 1
    5: 0b100101,       # x^5 + x^2 + 1
    6: 0b1000011,      # x^6 + x + 1
    7: 0b10000011,     # x^7 + x + 1
    8: 0x11D,          # x^8 + x^4 + x^3 + x^2 + 1
}

MAX_PRIME = 251
MAX_EXTENSION = 8


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_degree(a: int) -> int:
    return a.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    """Resto de a entre b como polinomios sobre GF(2)."""
    db = _poly_degree(b)
    while a and _poly_degree(a) >= db:
        a ^= b << (_poly_degree(a) - db)
    return a


def is_irreducible_gf2(poly: int) -> bool:
    """
    Prueba exhaustiva de irreducibilidad: división por todos los polinomios
    de grado 1..deg/2. Factible para grado ≤ 8.
    """
    degree = _poly_degree(poly)
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _poly_degree(divisor) < 1:
            continue
        if _poly_mod(poly, divisor) == 0:
            return False
    return True


def _poly_mulmod(a: int, b: int, modulus: int) -> int:
    degree = _poly_degree(modulus)
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a >> degree & 1:
            a ^= modulus
    return result


class FieldSpec:
    """
    Cuerpo finito GF(p^e) con tablas precalculadas.

    Attributes:
        p (int): característica
        e (int): grado de extensión
        q (int): número de elementos p^e
        modulus (int|None): polinomio irreducible (solo e > 1), codificado en bits
    """

    def __init__(self, p: int, e: int = 1, modulus: Optional[int] = None):
        if not is_prime(p) or p > MAX_PRIME:
            raise FieldArithmeticError(
                "La característica debe ser un primo entre 2 y 251",
                operation="construccion", value=p
            )
        if e < 1:
            raise FieldArithmeticError(
                "El grado de extensión debe ser ≥ 1", operation="construccion", value=e
            )
        if e > 1 and p != 2:
            raise FieldArithmeticError(
                "Solo se soportan extensiones de GF(2)",
                operation="construccion", value=f"p={p}, e={e}"
            )
        if e > MAX_EXTENSION:
            raise FieldArithmeticError(
                "Grado de extensión máximo: 8", operation="construccion", value=e
            )

        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = None

        if e == 1:
            self._inv_table = np.zeros(p, dtype=np.int64)
            for a in range(1, p):
                self._inv_table[a] = pow(a, p - 2, p)
            if p == 2:
                self._sqrt_table = np.array([0, 1], dtype=np.int64)
            else:
                self._sqrt_table = None
        else:
            modulus = DEFAULT_MODULI[e] if modulus is None else modulus
            if _poly_degree(modulus) != e or not is_irreducible_gf2(modulus):
                raise FieldArithmeticError(
                    "El polinomio del cuerpo no es irreducible de grado e",
                    operation="construccion", value=bin(modulus), field=f"GF(2^{e})"
                )
            self.modulus = modulus
            self._build_log_tables()

    # ------------------------------------------------------------------
    # Construcción de tablas
    # ------------------------------------------------------------------

    def _build_log_tables(self) -> None:
        q, modulus = self.q, self.modulus
        generator = None
        for candidate in range(2, q):
            value, order = candidate, 1
            while value != 1:
                value = _poly_mulmod(value, candidate, modulus)
                order += 1
            if order == q - 1:
                generator = candidate
                break
        if generator is None:
            raise FieldArithmeticError(
                "No se encontró generador multiplicativo", operation="construccion", field=self.name
            )

        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        value = 1
        for k in range(q - 1):
            exp[k] = value
            log[value] = k
            value = _poly_mulmod(value, generator, modulus)
        exp[q - 1:] = exp[:q - 1]

        self.generator = generator
        self._exp = exp
        self._log = log
        self._inv_table = np.zeros(q, dtype=np.int64)
        self._inv_table[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        sqrt = np.zeros(q, dtype=np.int64)
        for a in range(q):
            sqrt[self.mul(a, a)] = a
        self._sqrt_table = sqrt
        logger.debug(f"🔧 Tablas de {self.name} construidas (generador {generator})")

    # ------------------------------------------------------------------
    # Propiedades
    # ------------------------------------------------------------------

    @property
    def name(self) -> str:
        return f"GF({self.q})"

    @property
    def is_binary(self) -> bool:
        return self.p == 2 and self.e == 1

    def describe(self) -> dict:
        return {"p": self.p, "e": self.e, "q": self.q,
                "modulus": None if self.modulus is None else int(self.modulus)}

    def __repr__(self) -> str:
        return f"FieldSpec({self.name})"

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # ------------------------------------------------------------------
    # Operaciones escalares
    # ------------------------------------------------------------------

    def from_int(self, n: int) -> int:
        """Imagen de un entero en el subcuerpo primo."""
        return int(n) % self.p

    def add(self, a: int, b: int) -> int:
        if self.e > 1:
            return a ^ b
        return (a + b) % self.p

    def neg(self, a: int) -> int:
        if self.e > 1:
            return a
        return (-a) % self.p

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e > 1:
            if a == 0 or b == 0:
                return 0
            return int(self._exp[self._log[a] + self._log[b]])
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldArithmeticError("Inverso de cero", operation="inv", value=0, field=self.name)
        return int(self._inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if self.e == 1:
            return pow(int(a), k, self.p)
        if a == 0:
            return 0 if k > 0 else 1
        return int(self._exp[(int(self._log[a]) * k) % (self.q - 1)])

    def sqrt(self, a: int) -> int:
        if self._sqrt_table is None:
            raise FieldArithmeticError(
                "Raíz cuadrada solo disponible en característica 2",
                operation="sqrt", value=a, field=self.name
            )
        return int(self._sqrt_table[a])

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    # ------------------------------------------------------------------
    # Operaciones vectorizadas
    # ------------------------------------------------------------------

    def reduce(self, values) -> np.ndarray:
        """Reduce enteros arbitrarios al subcuerpo primo (vectorizado)."""
        return np.mod(np.asarray(values, dtype=np.int64), self.p)

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e > 1:
            return np.bitwise_xor(a, b)
        return (a + b) % self.p

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.e > 1:
            return a.copy()
        return (-a) % self.p

    def vsub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e > 1:
            return np.bitwise_xor(a, b)
        return (a - b) % self.p

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e > 1:
            a, b = np.broadcast_arrays(a, b)
            out = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        return (a * b) % self.p

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldArithmeticError("Inverso de cero", operation="vinv", value=0, field=self.name)
        return self._inv_table[a]

    def vpow(self, a, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            result = np.ones_like(a)
            base = a % self.p
            while k:
                if k & 1:
                    result = (result * base) % self.p
                base = (base * base) % self.p
                k >>= 1
            return result
        out = self._exp[(self._log[a] * k) % (self.q - 1)]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vsqrt(self, a) -> np.ndarray:
        if self._sqrt_table is None:
            raise FieldArithmeticError(
                "Raíz cuadrada solo disponible en característica 2",
                operation="vsqrt", field=self.name
            )
        return self._sqrt_table[np.asarray(a, dtype=np.int64)]

    def scatter_add(self, size: int, index, values) -> np.ndarray:
        """
        Acumula `values` en las posiciones `index` de un vector nulo de tamaño
        `size` (suma del cuerpo; admite índices repetidos).
        """
        out = np.zeros(size, dtype=np.int64)
        index = np.asarray(index, dtype=np.int64)
        values = np.asarray(values, dtype=np.int64)
        if self.e > 1:
            np.bitwise_xor.at(out, index, values)
            return out
        np.add.at(out, index, values)
        return out % self.p

    def random(self, rng: np.random.Generator, size, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.q, size=size, dtype=np.int64)


@lru_cache(maxsize=None)
def get_field(p: int, e: int = 1, modulus: Optional[int] = None) -> FieldSpec:
    """Devuelve (y cachea) la instancia de GF(p^e)."""
    return FieldSpec(p, e, modulus)


def parse_field(text: str) -> FieldSpec:
    """
    Interpreta 'GF(16)', 'GF(2^4)', '7' o '2^5' como FieldSpec.
    """
    raw = text.strip().upper().replace(" ", "")
    if raw.startswith("GF(") and raw.endswith(")"):
        raw = raw[3:-1]
    try:
        if "^" in raw:
            base, exponent = raw.split("^", 1)
            return get_field(int(base), int(exponent))
        q = int(raw)
    except ValueError as e:
        raise FieldArithmeticError("Especificación de cuerpo ilegible", operation="parse", value=text) from e
    for e in range(1, MAX_EXTENSION + 1):
        if q == 2 ** e:
            return get_field(2, e)
    return get_field(q, 1)
