"""
Utilidades de Gráficos
=====================

Este módulo contiene la clase ChartUtils que proporciona métodos estáticos
para crear visualizaciones interactivas utilizando Plotly Express y Plotly Graph Objects.

Funcionalidades principales:
- Gráfico de un MOC lineal a trozos contra la diagonal y una cota opcional
- Histograma de valores de norma de una bola
- Distorsión por etapa con el intervalo del filtro cofinito
- Configuración consistente de colores y altura

Los gráficos se escriben como HTML autónomo con el flag --chart.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional

import plotly.express as px
import plotly.graph_objects as go

from config.settings import AppSettings
from data.table_processor import TableProcessor


class ChartUtils:
    """
    Utilidades para creación de gráficos interactivos.

    Los métodos reciben fragmentos de documentos de salida ("p/q") y devuelven
    una figura de Plotly, o None si no hay datos.
    """

    @staticmethod
    def _palette() -> List[str]:
        return getattr(px.colors.qualitative, AppSettings.DEFAULT_COLOR_SCHEME)

    @staticmethod
    def _moc_trace_points(moc: Dict[str, Any]):
        """Puntos de cada tramo; None separa los saltos de la función continua por la derecha."""
        r_max = Fraction(moc["r_max"])
        points = [(Fraction(r), Fraction(v)) for r, v in moc["breakpoints"]]
        slopes = [Fraction(s) for s in moc.get("slopes", ["0"] * len(points))]
        ends = [r for r, _ in points[1:]] + [r_max]
        xs, ys = [], []
        for (start, value), slope, end in zip(points, slopes, ends):
            xs.extend([float(start), float(end), None])
            ys.extend([float(value), float(value + slope * (end - start)), None])
        return xs, ys

    @staticmethod
    def create_moc_chart(moc: Dict[str, Any], bound: Optional[Dict[str, Any]] = None,
                         title: str = "Módulo de continuidad"):
        """
        Crear gráfico de un MOC contra la diagonal Γ(r) = r.

        Args:
            moc (dict): Documento moc
            bound (dict): Documento moc opcional con la cota a comparar (2Γ + ε·id, por ejemplo)
            title (str): Título del gráfico

        Returns:
            plotly.graph_objects.Figure: Gráfico de líneas o None si no hay quiebres
        """
        if not moc or not moc.get("breakpoints"):
            return None
        palette = ChartUtils._palette()
        fig = go.Figure()
        xs, ys = ChartUtils._moc_trace_points(moc)
        fig.add_trace(go.Scatter(x=xs, y=ys, name="Γ", mode="lines", line=dict(color=palette[0], width=3)))
        r_max = float(Fraction(moc["r_max"]))
        fig.add_trace(go.Scatter(x=[0, r_max], y=[0, r_max], name="r", mode="lines",
                                 line=dict(color="gray", dash="dot")))
        if bound and bound.get("breakpoints"):
            bx, by = ChartUtils._moc_trace_points(bound)
            fig.add_trace(go.Scatter(x=bx, y=by, name="Cota", mode="lines",
                                     line=dict(color=palette[1], dash="dash")))
        fig.update_layout(
            title=title,
            xaxis_title="r",
            yaxis_title="Γ(r)",
            height=AppSettings.CHART_HEIGHT,
            hovermode="x unified",
        )
        return fig

    @staticmethod
    def create_norm_histogram(entries: List[Dict[str, Any]], title: str = "Valores de norma"):
        """
        Crear gráfico de barras con el número de elementos por valor de norma.

        Args:
            entries (list): Elementos {element, value} de una bola o tabla

        Returns:
            plotly.graph_objects.Figure: Gráfico de barras o None si no hay datos
        """
        df = TableProcessor.value_distribution(entries)
        if df.empty:
            return None
        fig = px.bar(
            df,
            x="Valor",
            y="Elementos",
            title=title,
            color_discrete_sequence=ChartUtils._palette(),
            labels={"Valor": "λ", "Elementos": "Elementos"},
        )
        fig.update_traces(hovertemplate="<b>λ = %{x}</b><br>Elementos: %{y}<extra></extra>")
        fig.update_layout(height=AppSettings.CHART_HEIGHT, xaxis_type="category")
        return fig

    @staticmethod
    def create_distortion_chart(stages: List[Dict[str, Any]], interval: Optional[Dict[str, Any]] = None,
                                title: str = "Distorsión por conjugación"):
        """
        Crear gráfico de la distorsión en cada etapa del prefijo.

        Args:
            stages (list): Distorsiones {stage, value, …} por etapa
            interval (dict): Intervalo {liminf, limsup, tail_start} opcional

        Returns:
            plotly.graph_objects.Figure: Gráfico de líneas o None si no hay etapas
        """
        df = TableProcessor.distortion_table(stages)
        if df.empty:
            return None
        fig = go.Figure()
        fig.add_trace(go.Scatter(
            x=df["Etapa"],
            y=df["Aprox."],
            name="Distorsión",
            mode="lines+markers",
            line=dict(color=ChartUtils._palette()[0]),
            customdata=df["Distorsión"],
            hovertemplate="Etapa %{x}<br>Distorsión: %{customdata}<extra></extra>",
        ))
        if interval:
            fig.add_hrect(
                y0=float(Fraction(interval["liminf"])),
                y1=float(Fraction(interval["limsup"])),
                annotation_text=f"cola desde la etapa {interval['tail_start']}",
                fillcolor="orange",
                opacity=0.2,
                line_width=0,
            )
        fig.update_layout(
            title=title,
            xaxis_title="Etapa n",
            yaxis_title="Distorsión",
            height=AppSettings.CHART_HEIGHT,
        )
        return fig
