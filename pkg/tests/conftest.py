"""
Fixtures compartidas de la batería de pruebas.

Las álgebras y representaciones grandes se construyen una sola vez por
sesión; las pruebas que las usan a fondo llevan la marca `slow`.
"""

import os
import sys

import pytest

# Agregar el directorio raíz al path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from spinstab.chevalley import SIMPLY_CONNECTED, build_algebra  # noqa: E402
from spinstab.fields import get_field  # noqa: E402
from spinstab.roots import build_root_system  # noqa: E402
from spinstab.spinrep import halfspin_rep, vector_rep  # noqa: E402


@pytest.fixture(scope="session")
def gf2():
    return get_field(2)


@pytest.fixture(scope="session")
def gf4():
    return get_field(2, 2)


@pytest.fixture(scope="session")
def gf16():
    return get_field(2, 4)


@pytest.fixture(scope="session")
def gf7():
    return get_field(7)


@pytest.fixture(scope="session")
def d4_gf2(gf2):
    return build_algebra(build_root_system("D", 4), SIMPLY_CONNECTED, gf2)


@pytest.fixture(scope="session")
def d5_gf2(gf2):
    return build_algebra(build_root_system("D", 5), SIMPLY_CONNECTED, gf2)


@pytest.fixture(scope="session")
def d5_gf7(gf7):
    return build_algebra(build_root_system("D", 5), SIMPLY_CONNECTED, gf7)


@pytest.fixture(scope="session")
def halfspin_d5_gf2(d5_gf2):
    return halfspin_rep(5, 0, algebra=d5_gf2)


@pytest.fixture(scope="session")
def halfspin_d5_gf7(d5_gf7):
    return halfspin_rep(5, 0, algebra=d5_gf7)


@pytest.fixture(scope="session")
def vector_d5_gf7(d5_gf7):
    return vector_rep(5, algebra=d5_gf7)


@pytest.fixture(scope="session")
def e8_gf32():
    """Entorno E8 sobre GF(32) (álgebra, Γ, t0, D8)."""
    from spinstab.e8_certificate import e8_setting
    return e8_setting(5)
