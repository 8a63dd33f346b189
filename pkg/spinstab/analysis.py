"""
================================================================================
MÓDULO DE TABLAS DE RESULTADOS CON PANDAS
================================================================================
Convierte los resultados de las campañas (histogramas de dim g_v, libro de
objetivos, tabla de ed, concordancia afirmación → comando) en DataFrames,
que la CLI imprime con `to_string(index=False)` o exporta a CSV.
================================================================================
"""

from typing import Iterable, List, Optional, Sequence

import pandas as pd

from spinstab.edim import EdResult
from spinstab.exceptions import InputValidationError
from spinstab.stab import LedgerRow, StabilizerReport
from spinstab.utils import get_logger

logger = get_logger(__name__)


# afirmación, enunciado y comando que la verifica
CONCORDANCE = [
    ("ed-spin-15-20", "ed(Spin_n) para n = 15..20 vale 23, 24, 120, 103, 341, 326", "eddim 15..20"),
    ("ed-hspin-formula", "ed(HSpin_n) = 2^{(n-2)/2} - n(n-1)/2 para n ≥ 20, n ≡ 0 mod 4",
     "eddim 20..32 --group HSpin"),
    ("ed-small-rank", "Valores conocidos de ed(Spin_n) para 5 ≤ n ≤ 14", "eddim 5..14"),
    ("free-spin15", "Spin_15 actúa genéricamente libre sobre la spin (car. 2)", "stab --group spin15 --seed 0"),
    ("free-spin17", "Spin_17 actúa genéricamente libre sobre la spin (car. 2)", "stab --group spin17 --seed 0"),
    ("free-spin19", "Spin_19 actúa genéricamente libre sobre la spin (car. 2)", "stab --group spin19 --seed 0"),
    ("free-spin18", "Spin_18 actúa genéricamente libre sobre la half-spin (car. 2)", "stab --group spin18 --seed 0"),
    ("free-spin16-vw", "Spin_16 actúa genéricamente libre sobre vector ⊕ half-spin (car. 2)",
     "stab --group spin16-vw --seed 0"),
    ("free-spin20-vw", "Spin_20 actúa genéricamente libre sobre vector ⊕ half-spin (car. 2)",
     "stab --group spin20-vw --seed 0"),
    ("free-hspin20", "HSpin_20 actúa genéricamente libre sobre la half-spin (car. 2)",
     "stab --group hspin20 --seed 0"),
    ("freeness-inequality", "3/4·dim V + dim G - r < dim V para n ≥ 21", "eddim 21..40 --inequality"),
    ("small-n-table", "Estabilizadores genéricos para 6 ≤ n ≤ 14 (dimensiones 11..28)", "spin-table --seed 0"),
    ("spin14-stab-28", "El estabilizador genérico de Spin_14 tiene dimensión 28", "stab --n 14 --rep spin --char 2 --seed 0"),
    ("spin13-stab-16", "dim (spin_13)_v ≤ 16 en característica 2", "stab --group spin13 --seed 0"),
    ("hspin16-odd-char", "HSpin_16 sobre la half-spin: estabilizador finito en car. ≠ 2",
     "stab --group hspin16-p7 --seed 0"),
    ("spin14-odd-char", "Spin_14 sobre la spin: estabilizador de dimensión 28 en car. ≠ 2",
     "stab --group spin14-p7 --seed 0"),
    ("fixed-space-bound", "dim V^x ≤ 3/4·dim V para x no central", "fixed-space --survey --n 10 --seed 0"),
    ("semisimple-bound", "dim V^t ≤ 5/8·dim V para t semisimple no central de orden 2, 3",
     "fixed-space --survey --n 14 --order 3 --seed 0"),
    ("jordan-so9", "(2^4,1) en so_9 actúa con tipo de Jordan (3,2^4,1^5) en la spin",
     "fixed-space --n 9 --partition 2,2,2,2,1 --jordan"),
    ("jordan-so9-b", "(2^2,1^5) en so_9 actúa con tipo de Jordan (2^4,1^8) en la spin",
     "fixed-space --n 9 --partition 2,2,1x5 --jordan"),
    ("fixed-space-so18", "(2^4,1^10) en so_18 fija un subespacio de dimensión 160 en la half-spin",
     "fixed-space --n 18 --partition 2,2,2,2,1x10"),
    ("torus-eigenspace-d5", "El mayor autoespacio de t = (1,1,1,1,0) en la half-spin de Spin_10 es 6",
     "fixed-space --n 10 --torus 1,1,1,1,0 --max"),
    ("e8-gamma-matrix", "Las filas de la matriz de Hadamard H_8 dan ocho raíces ortogonales con la matriz de emparejamientos esperada",
     "e8-verify --seed 0"),
    ("e8-stabilizer", "El estabilizador de x ∈ r° en HSpin_16 es (Z/2)^4 × (μ_2)^4", "e8-verify --seed 0"),
    ("e8-toral", "g_x = t_0 es una subálgebra toral de dimensión 4", "e8-verify --seed 0"),
]


# ============================================================================
# TABLAS
# ============================================================================

def histogram_frame(report: StabilizerReport) -> pd.DataFrame:
    """
    Histograma de dim g_v de un reporte.

    Example:
        >>> histogram_frame(report)
           dim_stab  ensayos  porcentaje
        0        28       12       18.75
    """
    counts = pd.Series(report.histogram, dtype="int64").sort_index()
    frame = pd.DataFrame({"dim_stab": counts.index.astype("int64"), "ensayos": counts.values})
    total = frame["ensayos"].sum()
    frame["porcentaje"] = (100.0 * frame["ensayos"] / total).round(2) if total else 0.0
    return frame


def ledger_frame(rows: Iterable[LedgerRow]) -> pd.DataFrame:
    columns = ["target", "n", "rep", "char", "expected", "found", "field", "passed"]
    return pd.DataFrame([row.to_dict() for row in rows], columns=columns)


def ed_table_frame(results: Sequence[EdResult]) -> pd.DataFrame:
    if not len(results):
        return pd.DataFrame(columns=["n", "group", "value", "branch", "power_of_two", "in_domain", "source"])
    frame = pd.DataFrame([r.to_dict() for r in results])
    frame["power_of_two"] = frame["power_of_two"].astype("Int64")
    return frame[["n", "group", "value", "branch", "power_of_two", "in_domain", "source"]]


def concordance_frame(rows: Optional[List[tuple]] = None) -> pd.DataFrame:
    rows = CONCORDANCE if rows is None else rows
    frame = pd.DataFrame(rows, columns=["claim", "statement", "command"])
    if frame["claim"].duplicated().any():
        raise InputValidationError("Identificadores de afirmación repetidos", field="claim",
                                   value=frame.loc[frame["claim"].duplicated(), "claim"].tolist())
    return frame


def campaign_summary(ledger: pd.DataFrame) -> pd.DataFrame:
    """
    PASS/FAIL por característica y el cuerpo que certificó cada fila.

    Example:
        >>> campaign_summary(ledger_frame(rows))
           char  passed  failed  fields
        0     2       9       0  GF(2),GF(4)
    """
    logger.info("📊 Resumiendo campaña...")
    if ledger.empty:
        return pd.DataFrame(columns=["char", "passed", "failed", "fields"])
    summary = ledger.groupby("char").agg(
        passed=("passed", lambda s: int(s.astype(bool).sum())),
        failed=("passed", lambda s: int((~s.astype(bool)).sum())),
        fields=("field", lambda s: ",".join(sorted(set(str(x) for x in s)))),
    ).reset_index()
    logger.info(f"✅ Resumen completado: {len(summary)} características")
    return summary
