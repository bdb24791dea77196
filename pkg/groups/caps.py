import time
from dataclasses import dataclass, replace
from typing import Optional

from config.settings import AppSettings
from utils.error_handler import CapExceededError


@dataclass(frozen=True)
class Caps:
    """Topes de exploración que recibe cada operación de la librería."""

    # Elementos descubiertos en una búsqueda o bola
    ball: int = AppSettings.DEFAULT_BALL_CAP

    # Longitud máxima de palabra cruda para emparejamientos
    match: int = AppSettings.DEFAULT_MATCH_CAP

    # Segundos de cálculo por petición (None: sin límite)
    time_budget: Optional[float] = AppSettings.DEFAULT_TIME_BUDGET

    # Instante límite en time.monotonic(); lo fija start_clock()
    deadline: Optional[float] = None

    def start_clock(self) -> "Caps":
        """Copia con el reloj de la petición en marcha."""
        if self.time_budget is None:
            return self
        return replace(self, deadline=time.monotonic() + self.time_budget)

    def check_time(self, stage: str):
        """
        Raises:
            CapExceededError: Si ya pasó el instante límite
        """
        if self.deadline is None:
            return
        now = time.monotonic()
        if now > self.deadline:
            elapsed = round(self.time_budget + now - self.deadline, 3)
            raise CapExceededError(stage, self.time_budget, elapsed, "presupuesto de tiempo en segundos")
