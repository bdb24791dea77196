"""
Servicio de Documentos
======================

Este módulo proporciona la clase DocumentService que maneja la lectura de los
documentos de entrada y la escritura estable de los documentos de salida.

Funcionalidades principales:
- Lectura de JSON desde un archivo o desde la entrada estándar (`-`)
- Escritura byte a byte estable: claves ordenadas, indentación fija y salto
  de línea final
- Respuestas con la estructura estándar {"success", "data" | "error"}
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from config.settings import AppSettings


class DocumentService:
    """
    Servicio de entrada y salida de documentos JSON.

    Nunca lanza excepciones de E/S: los fallos se devuelven como respuesta
    con success = False para que la vista decida el código de salida.
    """

    def read(self, path: Optional[str]) -> Dict[str, Any]:
        """
        Leer un documento JSON.

        Args:
            path (str): Ruta del archivo, o `-` / None para la entrada estándar

        Returns:
            dict: {"success": True, "data": documento} o
                  {"success": False, "error": mensaje}
        """
        source = "stdin" if path in (None, "-") else path
        try:
            if source == "stdin":
                text = sys.stdin.read()
            else:
                text = Path(path).read_text(encoding="utf-8")
            logging.debug(f"Documento leído de {source}: {len(text)} caracteres")
            return {"success": True, "data": json.loads(text)}
        except OSError as e:
            logging.error(f"No se pudo leer {source}: {e}")
            return {"success": False, "error": f"No se pudo leer {source}: {e}"}
        except json.JSONDecodeError as e:
            logging.error(f"JSON inválido en {source}: {e}")
            return {"success": False, "error": f"JSON inválido en {source}: {e.msg} (línea {e.lineno})"}

    @staticmethod
    def dumps(document: Dict[str, Any]) -> str:
        """Texto canónico del documento: claves ordenadas, indentación fija y salto final."""
        return json.dumps(document, sort_keys=True, indent=AppSettings.JSON_INDENT, ensure_ascii=False) + "\n"

    def write(self, document: Dict[str, Any], path: Optional[str]) -> Dict[str, Any]:
        """
        Escribir el documento en un archivo o en la salida estándar (`-`).

        Returns:
            dict: {"success": True, "data": destino} o {"success": False, "error": mensaje}
        """
        text = self.dumps(document)
        target = "stdout" if path in (None, "-") else path
        try:
            if target == "stdout":
                sys.stdout.write(text)
                sys.stdout.flush()
            else:
                Path(path).write_text(text, encoding="utf-8")
            logging.debug(f"Documento escrito en {target}")
            return {"success": True, "data": target}
        except OSError as e:
            logging.error(f"No se pudo escribir {target}: {e}")
            return {"success": False, "error": f"No se pudo escribir {target}: {e}"}
