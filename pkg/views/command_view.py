"""
Vista Base de Comandos
======================

Este módulo contiene la clase CommandView, de la que heredan las vistas de
cada familia de comandos. Reúne los servicios comunes (codificación,
tablas y gráficos) y el sobre estándar de los documentos de salida.

Características principales:
- Sobre {schema_version, command, status} en toda salida
- Lectura de la semilla desde el documento o desde --seed-doc
- Tablas de pandas y figura de plotly opcionales tras cada ejecución
"""

from typing import Any, Dict, Optional

import pandas as pd

from config.runtime import RuntimeConfig
from config.settings import AppSettings
from data.document_codec import DocumentCodec, SeedDocument
from data.table_processor import TableProcessor
from utils.chart_utils import ChartUtils
from utils.error_handler import SchemaError


class CommandView:
    """
    Base de las vistas de la línea de comandos.

    Attributes:
        command (str): Nombre del comando en ejecución
        document (dict): Documento de entrada
        config (RuntimeConfig): Configuración efectiva (topes y presupuesto de tiempo)
        seed_document (dict): Norma parcial dada con --seed-doc, si la hay
        trace (bool): Incluir trazas detalladas en la salida
        tables (dict): Tablas generadas por la última ejecución
        figure: Figura generada por la última ejecución (o None)
    """

    COMMANDS: tuple = ()

    def __init__(self, command: str, document: Dict[str, Any], config: RuntimeConfig,
                 seed_document: Optional[Dict[str, Any]] = None, trace: bool = False):
        self.command = command
        self.document = document
        self.config = config
        self.seed_document = seed_document
        self.trace = trace
        self.codec = DocumentCodec()
        self.table_processor = TableProcessor()
        self.chart_utils = ChartUtils()
        self.tables: Dict[str, pd.DataFrame] = {}
        self.figure = None
        # el reloj de la petición corre desde aquí
        self._caps = config.caps.start_clock()

    @property
    def caps(self):
        return self._caps

    def envelope(self, payload: Dict[str, Any], ok: bool = True) -> Dict[str, Any]:
        """Documento de salida con el sobre estándar."""
        return {
            "schema_version": AppSettings.SCHEMA_VERSION,
            "command": self.command,
            "status": "ok" if ok else "certificate_failure",
            **payload,
        }

    def read_seed(self, doc: Dict[str, Any]) -> SeedDocument:
        """
        Semilla del documento o, si falta, la dada con --seed-doc.

        Raises:
            SchemaError: Si no hay semilla en ninguna de las dos fuentes
        """
        if "seed" in doc:
            return self.codec.partial_norm(doc["seed"])
        if self.seed_document is not None:
            return self.codec.partial_norm(self.seed_document)
        raise SchemaError("Falta la semilla: campo seed o flag --seed-doc")

    def table_text(self) -> str:
        return self.table_processor.render(self.tables)
