# Importaciones del sistema operativo y manejo de variables de entorno
import logging
import os
from typing import Optional

from dotenv import load_dotenv  # Para cargar variables de entorno desde archivo .env

from config.settings import AppSettings
from groups.caps import Caps

# Cargar variables de entorno desde el archivo .env
# Ninguna es obligatoria: sin .env se usan los valores de AppSettings
load_dotenv()


class RuntimeConfig:
    """
    Configuración efectiva de una ejecución.

    Combina tres fuentes, de menor a mayor prioridad: los valores por defecto de
    AppSettings, las variables de entorno (opcionalmente desde un archivo .env)
    y los flags de la línea de comandos aplicados con with_overrides().

    Variables reconocidas:
    - APROX_CAP_BALL: tope de elementos por bola o búsqueda
    - APROX_CAP_MATCH: longitud máxima de palabra para emparejamientos
    - APROX_TIME_BUDGET: segundos de cálculo por petición (sin definir: sin límite)
    - APROX_LOG_LEVEL: nivel de logging (DEBUG, INFO, WARNING...)
    - APROX_CHART_DIR: carpeta por defecto para los gráficos HTML
    """

    def __init__(self):
        """
        Inicializa la configuración leyendo las variables de entorno.

        Raises:
            ValueError: Si alguna variable tiene un valor no válido
        """
        # Tope de elementos explorados en bolas y búsquedas de Dijkstra
        self.cap_ball = self._read_positive_int('APROX_CAP_BALL', AppSettings.DEFAULT_BALL_CAP)

        # Tope de longitud de palabra para la enumeración de emparejamientos
        self.cap_match = self._read_positive_int('APROX_CAP_MATCH', AppSettings.DEFAULT_MATCH_CAP)

        # Presupuesto de tiempo por petición, en segundos
        self.time_budget = self._read_positive_float('APROX_TIME_BUDGET', AppSettings.DEFAULT_TIME_BUDGET)

        # Nivel de logging de la ejecución
        self.log_level = os.getenv('APROX_LOG_LEVEL', 'INFO').upper()

        # Carpeta donde se escriben los gráficos si no se da ruta absoluta
        self.chart_dir = os.getenv('APROX_CHART_DIR')

        self._validate()

    def _read_positive_int(self, name: str, default: int) -> int:
        """
        Lee una variable de entorno entera y positiva.

        Args:
            name (str): Nombre de la variable
            default (int): Valor si la variable no está definida

        Returns:
            int: Valor leído, o el valor por defecto
        """
        raw = os.getenv(name)
        if raw is None or raw.strip() == "":
            return default
        try:
            return int(raw)
        except ValueError:
            # Se marca como inválido y lo reporta _validate()
            logging.warning(f"Valor no numérico en {name}: {raw!r}")
            return -1

    def _read_positive_float(self, name: str, default: Optional[float]) -> Optional[float]:
        """Lee una variable de entorno numérica; -1 marca un valor no numérico."""
        raw = os.getenv(name)
        if raw is None or raw.strip() == "":
            return default
        try:
            return float(raw)
        except ValueError:
            logging.warning(f"Valor no numérico en {name}: {raw!r}")
            return -1.0

    def _validate(self):
        invalid = []
        if self.cap_ball <= 0:
            invalid.append('APROX_CAP_BALL')
        if self.cap_match <= 0:
            invalid.append('APROX_CAP_MATCH')
        if self.time_budget is not None and not self.time_budget > 0:
            invalid.append('APROX_TIME_BUDGET')
        if self.log_level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            invalid.append('APROX_LOG_LEVEL')
        if invalid:
            raise ValueError(f"Variables de entorno inválidas: {', '.join(invalid)}")

    def with_overrides(self, cap_ball: Optional[int] = None, cap_match: Optional[int] = None,
                       log_level: Optional[str] = None, time_budget: Optional[float] = None) -> "RuntimeConfig":
        """
        Devuelve una copia con los valores dados por la línea de comandos.

        Args:
            cap_ball (int): Tope de bola (--cap-ball)
            cap_match (int): Tope de emparejamientos (--cap-match)
            log_level (str): Nivel de logging (--trace fuerza DEBUG)
            time_budget (float): Segundos por petición (--time-budget)

        Returns:
            RuntimeConfig: Nueva configuración validada
        """
        config = object.__new__(RuntimeConfig)
        config.__dict__.update(self.__dict__)
        if cap_ball is not None:
            config.cap_ball = cap_ball
        if cap_match is not None:
            config.cap_match = cap_match
        if log_level is not None:
            config.log_level = log_level.upper()
        if time_budget is not None:
            config.time_budget = time_budget
        config._validate()
        return config

    @property
    def caps(self) -> Caps:
        """Topes que reciben las operaciones de la librería."""
        return Caps(ball=self.cap_ball, match=self.cap_match, time_budget=self.time_budget)
