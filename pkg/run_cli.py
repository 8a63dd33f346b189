"""
Punto de entrada de la CLI de spinstab.
Ejecutar con: python run_cli.py <subcomando> [opciones]
"""

import os
import sys

# Agregar directorio del proyecto al path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from spinstab_cli.commands import cli


if __name__ == "__main__":
    cli(obj={})
