"""
Utilidades de Racionales
=======================

Este módulo contiene la clase RationalUtils con métodos estáticos para la
aritmética racional exacta que usa todo el núcleo (nunca punto flotante).

Funcionalidades principales:
- Lectura de racionales desde texto "p/q", enteros o cadenas decimales exactas
- Formato canónico "p/q" (o "p" si el denominador es 1)
- Cociente techo exacto para la cota ⌈M/m⌉
- Brecha mínima entre valores distintos de una colección
"""

import math
from fractions import Fraction
from typing import Iterable, Optional, Union

from utils.error_handler import InputError

RationalLike = Union[Fraction, int, str]


class RationalUtils:
    """
    Utilidades para el manejo de racionales exactos.

    Todas las cantidades del núcleo (valores de norma, radios, ε) son
    fractions.Fraction; este módulo centraliza su lectura y escritura para que
    el formato de los documentos sea estable.
    """

    @staticmethod
    def parse(value: RationalLike) -> Fraction:
        """
        Convertir un valor de un documento en racional exacto.

        Acepta "p/q", "p", "-p/q", enteros y cadenas decimales ("0.25"); rechaza
        floats para no introducir redondeos silenciosos.

        Args:
            value: Valor a convertir

        Returns:
            Fraction: Racional exacto

        Raises:
            InputError: Si el valor no es un racional válido
        """
        if isinstance(value, bool) or isinstance(value, float):
            raise InputError(f"Se esperaba un racional exacto, no {value!r}")
        if isinstance(value, (Fraction, int)):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise InputError(f"Racional inválido {value!r}: {e}") from e
        raise InputError(f"Tipo no soportado para un racional: {type(value).__name__}")

    @staticmethod
    def format(value: Fraction) -> str:
        """Formato canónico del documento: "p/q", o "p" si q = 1."""
        return str(Fraction(value))

    @staticmethod
    def ceil_ratio(numerator: Fraction, denominator: Fraction) -> int:
        """
        Cociente techo exacto ⌈numerator/denominator⌉.

        Args:
            numerator (Fraction): Numerador (por ejemplo M)
            denominator (Fraction): Denominador positivo (por ejemplo m)

        Returns:
            int: Techo del cociente
        """
        if denominator <= 0:
            raise InputError("El denominador de ⌈M/m⌉ debe ser positivo")
        return math.ceil(Fraction(numerator) / Fraction(denominator))

    @staticmethod
    def min_gap(values: Iterable[Fraction]) -> Optional[Fraction]:
        """
        Menor diferencia entre dos valores distintos de la colección.

        Returns:
            Fraction: Brecha mínima, o None si hay menos de dos valores distintos
        """
        ordered = sorted(set(values))
        if len(ordered) < 2:
            return None
        return min(b - a for a, b in zip(ordered, ordered[1:]))
