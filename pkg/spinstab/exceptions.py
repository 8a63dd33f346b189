"""
================================================================================
MÓDULO DE EXCEPCIONES DE SPINSTAB
================================================================================
Jerarquía de errores del proyecto. Todas heredan de SpinStabError y guardan
un diccionario `details` con el contexto del fallo, de modo que la CLI pueda
mostrarlo con `format_error_message` sin conocer cada subclase.

Regla general: la ausencia de resultado NO es un error (por ejemplo `solve`
devuelve None, y no alcanzar un objetivo de estabilizador es un resultado
del reporte). Solo las precondiciones violadas levantan excepciones.
================================================================================
"""


class SpinStabError(Exception):
    """
    Excepción base del proyecto.

    Attributes:
        message (str): Mensaje descriptivo del error
        details (dict): Información adicional sobre el error (opcional)
    """

    def __init__(self, message: str, details: dict = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            return f"{self.message} | Detalles: {self.details}"
        return self.message


class FieldArithmeticError(SpinStabError):
    """
    Error de aritmética en un cuerpo finito.

    Se utiliza cuando:
    - Se invierte el cero
    - Se pide una raíz cuadrada en característica impar
    - La especificación del cuerpo no es válida (p no primo, polinomio reducible)

    Example:
        >>> raise FieldArithmeticError("Inverso de cero", operation="inv", value=0, field="GF(16)")
    """

    def __init__(self, message: str, operation: str = None, value=None, field: str = None):
        details = {}
        if operation:
            details["operacion"] = operation
        if value is not None:
            details["valor"] = value
        if field:
            details["cuerpo"] = field
        super().__init__(message, details)


class RootDataError(SpinStabError):
    """
    Error en datos de raíces, retículos de caracteres o grupo de Weyl.

    Example:
        >>> raise RootDataError("Rango no soportado", root_type="D", rank=2)
    """

    def __init__(self, message: str, root_type: str = None, rank: int = None,
                 lattice: str = None):
        details = {}
        if root_type:
            details["tipo"] = root_type
        if rank is not None:
            details["rango"] = rank
        if lattice:
            details["reticulo"] = lattice
        super().__init__(message, details)


class RepresentationBuildError(SpinStabError):
    """
    Error al construir una representación (combinación retículo/módulo inválida,
    vector isótropo, calibración de signos fallida).
    """

    def __init__(self, message: str, rep_kind: str = None, rank: int = None,
                 original_error: Exception = None):
        details = {}
        if rep_kind:
            details["representacion"] = rep_kind
        if rank is not None:
            details["rango"] = rank
        if original_error:
            details["error_original"] = str(original_error)
        super().__init__(message, details)


class InputValidationError(SpinStabError):
    """
    Error de validación de entradas del usuario o de precondiciones.

    Se utiliza cuando:
    - Una partición o un vector de exponentes es inválido
    - n está fuera del dominio de una fórmula
    - Los operandos pertenecen a álgebras distintas
    - Una matriz no es nilpotente o no es invertible

    Example:
        >>> raise InputValidationError("Partición inválida", field="partition", value="3,2")
    """

    def __init__(self, message: str, field: str = None, value=None,
                 expected_format: str = None):
        details = {}
        if field:
            details["campo"] = field
        if value is not None:
            details["valor"] = value
        if expected_format:
            details["formato_esperado"] = expected_format
        super().__init__(message, details)


class ReportReadError(SpinStabError):
    """Error al leer un reporte, manifiesto o representación en caché."""

    def __init__(self, message: str, filepath: str = None, original_error: Exception = None):
        details = {}
        if filepath:
            details["filepath"] = str(filepath)
        if original_error:
            details["original_error"] = str(original_error)
        super().__init__(message, details)


class ReportSaveError(SpinStabError):
    """Error al escribir un reporte, manifiesto o representación en caché."""

    def __init__(self, message: str, filepath: str = None, original_error: Exception = None):
        details = {}
        if filepath:
            details["filepath"] = str(filepath)
        if original_error:
            details["original_error"] = str(original_error)
        super().__init__(message, details)


class ReportSchemaError(SpinStabError):
    """
    El JSON leído no cumple el esquema esperado.

    Example:
        >>> raise ReportSchemaError("Faltan claves", missing_keys=["witness"])
    """

    def __init__(self, message: str, missing_keys: list = None, invalid_types: dict = None):
        details = {}
        if missing_keys:
            details["claves_faltantes"] = missing_keys
        if invalid_types:
            details["tipos_invalidos"] = invalid_types
        super().__init__(message, details)


class WitnessMismatchError(SpinStabError):
    """Un testigo almacenado no reproduce la dimensión reportada al recargarlo."""

    def __init__(self, message: str, expected: int = None, found: int = None):
        details = {}
        if expected is not None:
            details["esperado"] = expected
        if found is not None:
            details["encontrado"] = found
        super().__init__(message, details)


# ============================================================================
# FUNCIONES DE UTILIDAD PARA MANEJO DE EXCEPCIONES
# ============================================================================

def format_error_message(error: SpinStabError) -> str:
    """
    Formatea un mensaje de error para mostrar al usuario.

    Args:
        error: Excepción del proyecto

    Returns:
        str: Mensaje formateado para consola
    """
    error_type = type(error).__name__
    separator = "=" * 60

    message = f"""
{separator}
❌ ERROR: {error_type}
{separator}
📝 Mensaje: {error.message}
"""

    if error.details:
        message += "📋 Detalles:\n"
        for key, value in error.details.items():
            message += f"   • {key}: {value}\n"

    message += separator
    return message
