"""
Manejador de Errores
===================

Este módulo proporciona las excepciones del conjunto de herramientas y las
herramientas para tratarlas de forma consistente en toda la aplicación.

Funcionalidades principales:
- Jerarquía de excepciones con su código de salida asociado
- Decorador para convertir excepciones en documentos de error
- Logging centralizado de errores (siempre por stderr)
- Clase centralizada para gestión de errores y códigos de salida

Códigos de salida de la línea de comandos:
- 0: ejecución correcta
- 1: error en la entrada (documento, palabra o parámetro inválido)
- 2: fallo de certificado (la verificación encontró violaciones)
- 3: agotamiento de un tope de exploración
"""

import logging
from functools import wraps
from typing import Optional

from config.settings import AppSettings

# Configuración global de logging para toda la aplicación
# stderr por defecto: stdout queda reservado para el JSON de salida
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)


class ToolkitError(Exception):
    """Error base de la aplicación."""

    status = "error"


class InputError(ToolkitError, ValueError):
    """Entrada inválida: documento, palabra, parámetro o esquema."""

    status = "input_error"


class UnknownGeneratorError(InputError):
    """Una letra hace referencia a un generador no declarado."""


class SignatureMismatchError(InputError):
    """Dos palabras o semillas pertenecen a firmas distintas."""


class MatchError(InputError):
    """Un emparejamiento no es válido para la palabra dada."""


class MocDomainError(InputError):
    """Evaluación de un módulo de continuidad fuera de [0, r_max]."""


class SchemaError(InputError):
    """El documento no respeta el esquema del comando."""


class CapExceededError(ToolkitError, RuntimeError):
    """
    Se agotó un tope de exploración.

    Attributes:
        stage (str): Etapa que estaba explorando
        cap (int | float): Tope configurado (segundos si es de tiempo)
        reached (int | float): Tamaño (o tiempo) alcanzado al detenerse
    """

    status = "cap_exceeded"

    def __init__(self, stage: str, cap: float, reached: float, detail: str = ""):
        self.stage = stage
        self.cap = cap
        self.reached = reached
        self.detail = detail
        message = f"Tope agotado en {stage}: {reached} > {cap}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class CertificateError(ToolkitError, RuntimeError):
    """Una construcción no superó su propia verificación."""

    status = "certificate_failure"


def handle_errors(func):
    """
    Decorador para manejo consistente de errores en las vistas.

    Captura las excepciones de la función decorada, las registra en los logs y
    devuelve un documento de error en lugar de propagarlas. Los errores de
    forma del documento (claves ausentes, tipos incorrectos) se tratan como
    errores de entrada.

    Args:
        func: Método render de una vista (recibe self como primer argumento)

    Returns:
        function: Función decorada con manejo de errores
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        command = getattr(args[0], 'command', func.__name__) if args else func.__name__
        try:
            return func(*args, **kwargs)
        except ToolkitError as e:
            # Registrar error en logs con información detallada
            logging.error(f"Error en {func.__name__}: {str(e)}")
            return ErrorHandler.error_document(command, e)
        except (KeyError, TypeError, ValueError) as e:
            logging.error(f"Error de entrada en {func.__name__}: {str(e)}")
            return ErrorHandler.error_document(command, InputError(f"Documento inválido: {e}"))
    return wrapper


class ErrorHandler:
    """
    Clase para manejo centralizado de errores y códigos de salida.

    Proporciona métodos estáticos para registrar errores, construir documentos
    de error y traducir el estado de un documento a código de salida.
    """

    EXIT_CODES = {
        "ok": 0,
        "input_error": 1,
        "error": 1,
        "certificate_failure": 2,
        "cap_exceeded": 3,
    }

    @staticmethod
    def log_error(message: str, error: Optional[Exception] = None):
        """
        Registrar error en el sistema de logging.

        Args:
            message (str): Mensaje descriptivo del error
            error (Exception): Excepción opcional para incluir detalles
        """
        if error:
            logging.error(f"{message}: {str(error)}")
        else:
            logging.error(message)

    @staticmethod
    def error_document(command: str, error: ToolkitError) -> dict:
        """
        Construir el documento de salida de una ejecución fallida.

        Args:
            command (str): Comando que se estaba ejecutando
            error (ToolkitError): Excepción capturada

        Returns:
            dict: Documento con estado, tipo y mensaje del error
        """
        detail = {"kind": type(error).__name__, "message": str(error)}
        if isinstance(error, CapExceededError):
            detail.update({"stage": error.stage, "cap": error.cap, "reached": error.reached})
        return {
            "schema_version": AppSettings.SCHEMA_VERSION,
            "command": command,
            "status": error.status,
            "error": detail,
        }

    @staticmethod
    def exit_code_for(status: str) -> int:
        """
        Traducir el estado de un documento a código de salida.

        Args:
            status (str): Campo status del documento

        Returns:
            int: Código de salida del proceso
        """
        return ErrorHandler.EXIT_CODES.get(status, 1)
