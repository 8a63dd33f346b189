"""
================================================================================
MÓDULO DE DIMENSIÓN ESENCIAL
================================================================================
Fórmulas cerradas para ed(Spin_n) (n > 14) y ed(HSpin_n) (n ≥ 20, n ≡ 0 mod 4),
dimensiones de grupo y de representaciones (half-)spin, la desigualdad de
dimensiones que garantiza acción genéricamente libre para n ≥ 21 y la tabla
de valores conocidos para 5 ≤ n ≤ 14.

Enteros de Python (precisión arbitraria) en todo el módulo.
================================================================================
"""

from dataclasses import dataclass
from typing import Dict, List, Optional

from spinstab.exceptions import InputValidationError

MAX_N = 10 ** 6
FORMULA_MIN_N = 15

# valores conocidos fuera del dominio de la fórmula cerrada
SMALL_RANK_ED = {5: 0, 6: 0, 7: 4, 8: 5, 9: 5, 10: 4, 11: 5, 12: 6, 13: 6, 14: 7}


@dataclass(frozen=True)
class EdResult:
    n: int
    group: str
    value: int
    branch: str
    power_of_two: Optional[int] = None
    in_formula_domain: bool = True
    source: str = "formula"

    def to_dict(self) -> dict:
        return {"n": self.n, "group": self.group, "value": self.value, "branch": self.branch,
                "power_of_two": self.power_of_two, "in_domain": self.in_formula_domain,
                "source": self.source}


@dataclass(frozen=True)
class InequalityCheck:
    """¾·dim V + (dim G − r) < dim V, comparado como 3V + 4(G − r) < 4V."""
    n: int
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputValidationError("n debe ser entero", field="n", value=n)
    if n <= 4:
        raise InputValidationError("Se requiere n ≥ 5", field="n", value=n, expected_format="n ≥ 5")
    if n > MAX_N:
        raise InputValidationError("n excede el límite de cordura", field="n", value=n,
                                   expected_format=f"n ≤ {MAX_N}")


def dim_group(n: int) -> int:
    """dim Spin_n = n(n−1)/2."""
    return n * (n - 1) // 2


def dim_halfspin(n: int) -> int:
    """2^{r−1} si n = 2r; 2^r si n = 2r + 1."""
    r = n // 2
    return 2 ** (r - 1) if n % 2 == 0 else 2 ** r


def largest_power_of_two(n: int) -> int:
    return n & -n


def ed_spin(n: int) -> EdResult:
    """
    ed(Spin_n):
        n impar      -> 2^{(n−1)/2} − n(n−1)/2
        n ≡ 2 mod 4  -> 2^{(n−2)/2} − n(n−1)/2
        n ≡ 0 mod 4  -> 2^{(n−2)/2} − n(n−1)/2 + 2^m, 2^m ∥ n
    Para 5 ≤ n ≤ 14 devuelve el valor tabulado marcado fuera del dominio.
    """
    _check_n(n)
    if n < FORMULA_MIN_N:
        return EdResult(n, "Spin", SMALL_RANK_ED[n], "table", None, False, "external")
    if n % 2:
        return EdResult(n, "Spin", 2 ** ((n - 1) // 2) - dim_group(n), "odd")
    base = 2 ** ((n - 2) // 2) - dim_group(n)
    if n % 4 == 2:
        return EdResult(n, "Spin", base, "2 mod 4")
    power = largest_power_of_two(n)
    return EdResult(n, "Spin", base + power, "0 mod 4", power)


def ed_hspin(n: int) -> EdResult:
    """ed(HSpin_n) = 2^{(n−2)/2} − n(n−1)/2 para n ≥ 20, n ≡ 0 mod 4."""
    _check_n(n)
    if n < 20 or n % 4:
        raise InputValidationError("HSpin_n requiere n ≥ 20 y n ≡ 0 mod 4", field="n", value=n)
    return EdResult(n, "HSpin", 2 ** ((n - 2) // 2) - dim_group(n), "0 mod 4")


def rep_for_freeness(n: int) -> str:
    """Representación con acción genéricamente libre para n > 14."""
    if n % 2:
        return "spin"
    return "halfspin" if n % 4 == 2 else "vector+halfspin"


def generic_freeness_inequality(n: int) -> InequalityCheck:
    _check_n(n)
    v = dim_halfspin(n)
    g = dim_group(n)
    r = n // 2
    return InequalityCheck(n, 3 * v + 4 * (g - r), 4 * v)


def ed_table(start: int, stop: int, group: str = "Spin") -> List[EdResult]:
    """Valores para start ≤ n ≤ stop (HSpin omite los n fuera de su dominio)."""
    if start > stop:
        raise InputValidationError("Rango vacío", field="range", value=f"{start}..{stop}")
    if group == "HSpin":
        return [ed_hspin(n) for n in range(start, stop + 1) if n >= 20 and n % 4 == 0]
    return [ed_spin(n) for n in range(start, stop + 1)]


def small_rank_table() -> Dict[int, int]:
    return dict(SMALL_RANK_ED)


def parse_range(text: str) -> range:
    """'15..20', '15-20' o '17'."""
    raw = text.strip()
    for sep in ("..", "-", ":"):
        if sep in raw:
            a, b = raw.split(sep, 1)
            break
    else:
        a = b = raw
    try:
        start, stop = int(a), int(b)
    except ValueError as e:
        raise InputValidationError("Rango inválido", field="range", value=text,
                                   expected_format="a..b") from e
    return range(start, stop + 1)
