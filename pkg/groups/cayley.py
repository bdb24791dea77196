"""
Motor de caminos más ligeros sobre grafos de Cayley.

Dijkstra con frontera en heapq y contador de desempate, como en las
implementaciones clásicas de networkx, adaptado a grafos implícitos: los
vértices son elementos de un grupo y las aristas g → g·a son la multiplicación
a derecha por los elementos a de una semilla, con peso igual a su valor.

La búsqueda es persistente: las consultas sucesivas continúan la misma
exploración, de modo que una bola ya calculada no se recalcula.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from heapq import heappop, heappush
from itertools import count
from typing import Any, Dict, Hashable, List, Optional, Protocol, Sequence, Tuple

from groups.caps import Caps
from utils.error_handler import CapExceededError


class GroupContext(Protocol):
    """Operaciones mínimas de un grupo para recorrer su grafo de Cayley."""

    identity: Any

    def multiply(self, x, y): ...

    def invert(self, x): ...

    def sort_key(self, x): ...


class LightestPathSearch:
    """
    Dijkstra desde la identidad con liquidación por (valor, orden canónico).

    Attributes:
        dist (dict): Valores definitivos de los elementos liquidados
        order (list): Elementos liquidados, en orden de liquidación
    """

    def __init__(self, context: GroupContext, edges: Sequence[Tuple[Hashable, Fraction]],
                 caps: Caps = Caps(), stage: str = "dijkstra", cutoff: Optional[Fraction] = None):
        """
        Args:
            context: Contexto del grupo
            edges: Pares (elemento de la semilla, valor); se ignoran la identidad
                   y los valores no positivos
            caps: Topes de exploración (ball = elementos descubiertos)
            stage: Nombre de la etapa para los errores de tope
            cutoff: Si se da, no se descubren elementos de valor mayor
        """
        self.context = context
        self.caps = caps
        self.stage = stage
        self.cutoff = cutoff
        identity = context.identity
        self.edges = sorted(((a, Fraction(v)) for a, v in edges if a != identity and v > 0),
                            key=lambda edge: context.sort_key(edge[0]))
        self.dist: Dict[Hashable, Fraction] = {}
        self.order: List[Hashable] = []
        self._parent: Dict[Hashable, Tuple[Hashable, Hashable]] = {}
        self._best: Dict[Hashable, Fraction] = {identity: Fraction(0)}
        self._counter = count()
        self._fringe: list = []
        heappush(self._fringe, (Fraction(0), context.sort_key(identity), next(self._counter), identity))

    def peek(self) -> Optional[Fraction]:
        """Valor del siguiente elemento por liquidar, o None si no queda frontera."""
        fringe = self._fringe
        while fringe and fringe[0][3] in self.dist:
            heappop(fringe)
        return fringe[0][0] if fringe else None

    def settle_next(self) -> Optional[Hashable]:
        """Liquida el siguiente elemento y relaja sus aristas."""
        if self.peek() is None:
            return None
        self.caps.check_time(self.stage)
        value, _, _, element = heappop(self._fringe)
        self.dist[element] = value
        self.order.append(element)
        multiply, sort_key = self.context.multiply, self.context.sort_key
        for seed, weight in self.edges:
            candidate = value + weight
            if self.cutoff is not None and candidate > self.cutoff:
                continue
            target = multiply(element, seed)
            if target in self.dist:
                continue
            best = self._best.get(target)
            if best is None or candidate < best:
                self._best[target] = candidate
                self._parent[target] = (element, seed)
                heappush(self._fringe, (candidate, sort_key(target), next(self._counter), target))
        if len(self._best) > self.caps.ball:
            raise CapExceededError(self.stage, self.caps.ball, len(self._best))
        return element

    def value(self, x: Hashable, budget: Optional[Fraction] = None) -> Optional[Fraction]:
        """
        Valor mínimo de x, continuando la búsqueda hasta liquidarlo.

        Args:
            x: Elemento buscado
            budget: Si se da, se abandona al superar este valor

        Returns:
            Fraction: Valor exacto, o None si supera el presupuesto o es inalcanzable
        """
        while x not in self.dist:
            top = self.peek()
            if top is None or (budget is not None and top > budget):
                return None
            self.settle_next()
        value = self.dist[x]
        if budget is not None and value > budget:
            return None
        return value

    def settle_radius(self, radius: Fraction) -> Dict[Hashable, Fraction]:
        """Liquida todo elemento de valor ≤ radius y devuelve esa bola."""
        while True:
            top = self.peek()
            if top is None or top > radius:
                break
            self.settle_next()
        logging.debug(f"{self.stage}: bola de radio {radius} con {len(self.order)} elementos liquidados")
        return {g: self.dist[g] for g in self.order if self.dist[g] <= radius}

    def witness(self, x: Hashable) -> List[Hashable]:
        """Factorización óptima de un elemento liquidado, de izquierda a derecha."""
        factors = []
        while x in self._parent:
            x, seed = self._parent[x]
            factors.append(seed)
        factors.reverse()
        return factors
