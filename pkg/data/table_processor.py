"""
Módulo de Procesamiento de Tablas
=================================

Este módulo contiene la clase TableProcessor que proporciona métodos estáticos
para transformar los documentos de salida en tablas de pandas legibles.

Funcionalidades principales:
- Bolas de norma y tablas de λ̃ con longitud de palabra
- Quiebres de un MOC (radio, valor, pendiente)
- Violaciones de certificados y transcripciones de MOC
- Distorsión por etapa de los diagnósticos de ultraproductos
- Distribución de valores de norma (base de los histogramas)

Las tablas son solo presentación: se imprimen por stderr con --table y nunca
se vuelven a leer.
"""

from fractions import Fraction
from typing import Any, Dict, List

import pandas as pd


class TableProcessor:
    """
    Procesador de documentos de salida hacia DataFrames.

    Todos los métodos reciben fragmentos del documento ya serializado (valores
    "p/q") y añaden una columna decimal aproximada para lectura humana.
    """

    @staticmethod
    def _approx(value: Any) -> float:
        """Aproximación decimal de un "p/q" (solo para mostrar)."""
        if value is None:
            return float("nan")
        return float(Fraction(value))

    @staticmethod
    def ball_table(entries: List[Dict[str, Any]], key: str = "element") -> pd.DataFrame:
        """
        Tabla de una bola de norma.

        Args:
            entries (list): Elementos {element, value}

        Returns:
            pd.DataFrame: Columnas Elemento, Valor, Aprox., ordenadas por valor
        """
        if not entries:
            return pd.DataFrame()
        df = pd.DataFrame([{"Elemento": str(e[key]), "Valor": e["value"]} for e in entries])
        df["Aprox."] = df["Valor"].map(TableProcessor._approx)
        return df.sort_values(["Aprox.", "Elemento"], kind="stable").reset_index(drop=True)

    @staticmethod
    def value_distribution(entries: List[Dict[str, Any]]) -> pd.DataFrame:
        """Número de elementos por valor de norma."""
        df = TableProcessor.ball_table(entries)
        if df.empty:
            return df
        return (df.groupby(["Valor", "Aprox."], sort=False)
                  .size()
                  .reset_index(name="Elementos")
                  .sort_values("Aprox.")
                  .reset_index(drop=True))

    @staticmethod
    def moc_table(moc: Dict[str, Any]) -> pd.DataFrame:
        """Quiebres de un documento moc."""
        points = moc.get("breakpoints", [])
        if not points:
            return pd.DataFrame()
        slopes = moc.get("slopes", ["0"] * len(points))
        df = pd.DataFrame({
            "Desde r": [r for r, _ in points],
            "Γ(r)": [v for _, v in points],
            "Pendiente": slopes,
        })
        df["Aprox."] = df["Γ(r)"].map(TableProcessor._approx)
        return df

    @staticmethod
    def tilde_table(entries: List[Dict[str, Any]]) -> pd.DataFrame:
        """Tabla de λ̃ con la longitud de cada palabra."""
        df = TableProcessor.ball_table(entries, key="word")
        if df.empty:
            return df
        df["Longitud"] = df["Elemento"].map(lambda w: 0 if w == "1" else len(w.split()))
        return df

    @staticmethod
    def violations_table(violations: List[Dict[str, Any]]) -> pd.DataFrame:
        """Violaciones de un certificado (vacía si es válido)."""
        if not violations:
            return pd.DataFrame(columns=["Condición", "g", "h", "Defecto"])
        return pd.DataFrame([{
            "Condición": v.get("condition"),
            "g": v.get("g"),
            "h": v.get("h", ""),
            "Defecto": v.get("defect"),
        } for v in violations])

    @staticmethod
    def transcript_table(entries: List[Dict[str, Any]]) -> pd.DataFrame:
        """Transcripción de verificación de MOC por generador."""
        if not entries:
            return pd.DataFrame()
        df = pd.DataFrame([{
            "Generador": e.get("generator", e.get("element")),
            "MOC": e.get("moc", ""),
            "Comprobados": e.get("checked", len(e.get("radii", []))),
            "Válido": e["ok"],
        } for e in entries])
        return df

    @staticmethod
    def distortion_table(stages: List[Dict[str, Any]]) -> pd.DataFrame:
        """Distorsión por etapa de un perfil de continuidad."""
        if not stages:
            return pd.DataFrame()
        df = pd.DataFrame([{
            "Etapa": s["stage"],
            "δ": s["delta"],
            "Distorsión": s["value"],
            "Lado": s["side"],
            "Testigo": str(s["witness"]),
        } for s in stages])
        df["Aprox."] = df["Distorsión"].map(TableProcessor._approx)
        return df

    @staticmethod
    def render(tables: Dict[str, pd.DataFrame]) -> str:
        """Texto de todas las tablas no vacías, con su título."""
        blocks = []
        for title, df in tables.items():
            if df is None or df.empty:
                continue
            blocks.append(f"== {title} ==\n{df.to_string(index=False)}")
        return "\n\n".join(blocks)
