"""
Punto de entrada de la línea de comandos.

Un comando por invocación: lee el documento JSON de entrada, lo despacha a
la vista de su familia y escribe el documento de salida. El código de salida
es 0 si todo es correcto, 1 ante un error de entrada, 2 ante un fallo de
certificado y 3 si se agota un tope de exploración.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config.runtime import RuntimeConfig
from data.document_service import DocumentService
from utils.error_handler import ErrorHandler, InputError
from views.approximation_view import ApproximationView
from views.free_product_view import FreeProductView
from views.norm_view import NormView
from views.ultraproduct_view import UltraproductView

VIEWS = {command: view for view in (NormView, FreeProductView, ApproximationView, UltraproductView)
         for command in view.COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aproximaciones",
        description="Normas en grupos, módulos de continuidad y aproximaciones por grupos finitos normados",
    )
    parser.add_argument("command", choices=sorted(VIEWS), help="Comando a ejecutar")
    parser.add_argument("--input", default="-", help="Documento JSON de entrada (ruta o - para stdin)")
    parser.add_argument("--output", default="-", help="Documento JSON de salida (ruta o - para stdout)")
    parser.add_argument("--cap-ball", type=int, help="Tope de elementos por bola o búsqueda")
    parser.add_argument("--cap-match", type=int, help="Longitud máxima de palabra para emparejamientos")
    parser.add_argument("--time-budget", type=float, help="Segundos de cálculo por petición")
    parser.add_argument("--seed-doc", help="Norma parcial en un documento aparte")
    parser.add_argument("--trace", action="store_true", help="Logging DEBUG y trazas completas en la salida")
    parser.add_argument("--table", action="store_true", help="Imprimir tablas legibles por stderr")
    parser.add_argument("--chart", help="Escribir el gráfico del resultado como HTML")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """
    Ejecutar un comando y devolver su código de salida.

    Args:
        argv (list): Argumentos sin el nombre del programa (None usa sys.argv)

    Returns:
        int: Código de salida del proceso
    """
    args = build_parser().parse_args(argv)
    service = DocumentService()
    try:
        config = RuntimeConfig().with_overrides(args.cap_ball, args.cap_match, "DEBUG" if args.trace else None,
                                                args.time_budget)
    except ValueError as e:
        document = ErrorHandler.error_document(args.command, InputError(str(e)))
        service.write(document, args.output)
        return ErrorHandler.exit_code_for(document["status"])
    logging.getLogger().setLevel(config.log_level)

    document = _execute(args, config, service)
    written = service.write(document, args.output)
    if not written["success"]:
        ErrorHandler.log_error(f"No se pudo escribir la salida de {args.command}", InputError(written["error"]))
        return ErrorHandler.exit_code_for("input_error")
    return ErrorHandler.exit_code_for(document["status"])


def _execute(args, config: RuntimeConfig, service: DocumentService) -> dict:
    loaded = service.read(args.input)
    if not loaded["success"]:
        return ErrorHandler.error_document(args.command, InputError(loaded["error"]))
    seed_document = None
    if args.seed_doc:
        seed = service.read(args.seed_doc)
        if not seed["success"]:
            return ErrorHandler.error_document(args.command, InputError(seed["error"]))
        seed_document = seed["data"]

    view = VIEWS[args.command](args.command, loaded["data"], config, seed_document, args.trace)
    document = view.render()
    if document["status"] in ("ok", "certificate_failure"):
        if args.table:
            text = view.table_text()
            if text:
                print(text, file=sys.stderr)
        if args.chart and view.figure is not None:
            path = Path(args.chart)
            if not path.is_absolute() and config.chart_dir:
                path = Path(config.chart_dir) / path
            view.figure.write_html(str(path), include_plotlyjs="cdn")
            logging.info(f"Gráfico escrito en {path}")
    return document


def main():
    """Función principal de la aplicación."""
    sys.exit(run())


if __name__ == "__main__":
    main()
