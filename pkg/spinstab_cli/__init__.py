# Archivo de inicialización del paquete spinstab_cli
from spinstab_cli.commands import cli

__all__ = ["cli"]
