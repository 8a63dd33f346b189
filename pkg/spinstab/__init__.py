"""
================================================================================
PAQUETE SPINSTAB - Estabilizadores genéricos de Spin_n y dimensión esencial
================================================================================
Cómputo exacto sobre cuerpos finitos de estabilizadores infinitesimales de
grupos spin y half-spin sobre sus representaciones (half-)spin, la tabla de
dimensión esencial ed(Spin_n) y el certificado E8 del estabilizador de HSpin_16
en característica 2.

ESTRUCTURA DEL PAQUETE:
- exceptions.py: Excepciones personalizadas del proyecto
- utils.py: Logger, cronómetro y hashing
- fields.py: Cuerpos finitos GF(p) y GF(2^e)
- exactlin.py: Álgebra lineal exacta y forma normal de Smith
- roots.py: Sistemas de raíces D_r y E8, grupo de Weyl de tipo D
- chevalley.py: Álgebras de Chevalley, retículos de caracteres y aplicación [p]
- spinrep.py: Representaciones half-spin, vectorial, suma directa, tipo B
- elements.py: Nilpotentes por partición, tipos de Jordan, toros y trialidad
- stab.py: Búsqueda de estabilizadores genéricos y objetivos a certificar
- edim.py: Fórmulas de dimensión esencial
- e8_certificate.py: Certificado E8 / HSpin_16
- io.py: Reportes JSON, CSV y caché binaria de representaciones
- validation.py: Validación de esquemas y de entradas
- analysis.py: Tablas de resultados con Pandas
================================================================================
"""

from spinstab.exceptions import (
    SpinStabError,
    FieldArithmeticError,
    RootDataError,
    RepresentationBuildError,
    InputValidationError,
    ReportReadError,
    ReportSaveError,
    ReportSchemaError,
    WitnessMismatchError,
    format_error_message,
)

from spinstab.fields import FieldSpec, get_field, parse_field

from spinstab.exactlin import (
    FieldMatrix,
    IntMatrix,
    SnfResult,
    rank,
    kernel_basis,
    solve,
    smith_normal_form,
)

from spinstab.roots import RootVec, RootSystem, build_root_system

from spinstab.chevalley import (
    ChevalleyAlgebra,
    CharacterLattice,
    Subalgebra,
    build_algebra,
    bracket,
    p_power,
    symplectic_form,
    center,
)

from spinstab.spinrep import (
    Representation,
    halfspin_rep,
    vector_rep,
    direct_sum,
    b_type_subalgebra,
    e8_restriction_halfspin,
    build_group_representation,
)

from spinstab.elements import (
    Partition,
    ExponentVector,
    nilpotent_from_partition,
    jordan_type,
    triality_torus_image,
    torus_fixed_dim,
    torus_max_eigenspace,
    unipotent_from_roots,
)

from spinstab.stab import (
    StabilizerReport,
    Target,
    ALL_TARGETS,
    stab_dim,
    fixed_space_dim,
    search_generic_stab,
    verify_witness,
    verify_targets,
)

from spinstab.edim import ed_spin, ed_hspin, ed_table, dim_halfspin

__version__ = "1.0.0"

__all__ = [
    # Excepciones
    "SpinStabError",
    "FieldArithmeticError",
    "RootDataError",
    "RepresentationBuildError",
    "InputValidationError",
    "ReportReadError",
    "ReportSaveError",
    "ReportSchemaError",
    "WitnessMismatchError",
    "format_error_message",

    # Cuerpos y álgebra lineal
    "FieldSpec",
    "get_field",
    "parse_field",
    "FieldMatrix",
    "IntMatrix",
    "SnfResult",
    "rank",
    "kernel_basis",
    "solve",
    "smith_normal_form",

    # Raíces y álgebras
    "RootVec",
    "RootSystem",
    "build_root_system",
    "ChevalleyAlgebra",
    "CharacterLattice",
    "Subalgebra",
    "build_algebra",
    "bracket",
    "p_power",
    "symplectic_form",
    "center",

    # Representaciones y elementos
    "Representation",
    "halfspin_rep",
    "vector_rep",
    "direct_sum",
    "b_type_subalgebra",
    "e8_restriction_halfspin",
    "build_group_representation",
    "Partition",
    "ExponentVector",
    "nilpotent_from_partition",
    "jordan_type",
    "triality_torus_image",
    "torus_fixed_dim",
    "torus_max_eigenspace",
    "unipotent_from_roots",

    # Estabilizadores
    "StabilizerReport",
    "Target",
    "ALL_TARGETS",
    "stab_dim",
    "fixed_space_dim",
    "search_generic_stab",
    "verify_witness",
    "verify_targets",

    # Dimensión esencial
    "ed_spin",
    "ed_hspin",
    "ed_table",
    "dim_halfspin",
]
