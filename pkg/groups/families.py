"""
Familias de grupos evaluables.

Contextos de grupo concretos sobre los que operan normas, módulos de
continuidad y aproximaciones:

- PermutationGroup: permutaciones de {0, …, d-1} almacenadas como arreglos de
  numpy (composición por indexación, hash sobre los bytes del arreglo).
- FiniteTableGroup: grupo finito dado por su tabla de multiplicación.
- IntLattice: ℤ^k con norma ℓ¹ ponderada.

NormedGroup junta un contexto con una norma evaluable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from utils.error_handler import InputError


class Permutation:
    """
    Permutación de {0, …, d-1} en notación de imágenes.

    El producto p * q es la composición p ∘ q (primero q), de modo que la
    acción a izquierda w ↦ g·w define un homomorfismo.
    """

    __slots__ = ("images", "_key")

    def __init__(self, images):
        array = np.asarray(images)
        dtype = np.uint16 if array.shape[0] <= 1 << 16 else np.int32
        # un solo búfer: la clave de hash y la vista de solo lectura lo comparten
        self._key = np.ascontiguousarray(array, dtype=dtype).tobytes()
        self.images = np.frombuffer(self._key, dtype=dtype)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(np.arange(degree, dtype=np.int32))

    @property
    def degree(self) -> int:
        return int(self.images.shape[0])

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def __call__(self, point: int) -> int:
        return int(self.images[point])

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(self.images[other.images])

    def inverse(self) -> Permutation:
        inverse = np.empty_like(self.images)
        inverse[self.images] = np.arange(self.degree, dtype=np.int32)
        return Permutation(inverse)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Permutation({self.images.tolist()})"


class PermutationGroup:
    """Contexto de grupo para permutaciones de un grado fijo."""

    def __init__(self, degree: int):
        if degree < 1:
            raise InputError("El grado de un grupo de permutaciones debe ser positivo")
        self.degree = degree
        self.identity = Permutation.identity(degree)

    def multiply(self, x: Permutation, y: Permutation) -> Permutation:
        return x * y

    def invert(self, x: Permutation) -> Permutation:
        return x.inverse()

    def sort_key(self, x: Permutation) -> bytes:
        return x._key


class FiniteTableGroup:
    """
    Grupo finito dado por tabla de multiplicación.

    Los elementos son índices 0..n-1; labels da un nombre textual a cada uno.
    table[a, b] es el índice de a·b.
    """

    def __init__(self, labels: Sequence[str], table, identity: int = 0):
        self.labels = list(labels)
        self.table = np.asarray(table, dtype=np.int64)
        order = len(self.labels)
        if self.table.shape != (order, order):
            raise InputError(f"La tabla debe ser {order}x{order}, es {self.table.shape}")
        if len(set(self.labels)) != order:
            raise InputError("Las etiquetas de los elementos deben ser distintas")
        self.identity = identity
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._inverse = self._compute_inverses()

    @classmethod
    def from_permutations(cls, elements: Sequence[Tuple[int, ...]],
                          labels: Optional[Sequence[str]] = None) -> FiniteTableGroup:
        """
        Tabla de un grupo de permutaciones dado por la lista completa de elementos.

        El producto es la composición (a·b)(v) = a(b(v)).
        """
        elements = [tuple(e) for e in elements]
        position = {e: i for i, e in enumerate(elements)}
        table = np.empty((len(elements), len(elements)), dtype=np.int64)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                product = tuple(a[v] for v in b)
                if product not in position:
                    raise InputError("Los elementos no son cerrados bajo composición")
                table[i, j] = position[product]
        identity = position.get(tuple(range(len(elements[0]))))
        if identity is None:
            raise InputError("La lista de permutaciones no contiene la identidad")
        labels = labels or ["".join(str(v) for v in e) for e in elements]
        return cls(labels, table, identity)

    @classmethod
    def symmetric_group(cls, n: int) -> FiniteTableGroup:
        """S_n con elementos en orden lexicográfico de imágenes (etiqueta "012"...)."""
        return cls.from_permutations(sorted(permutations(range(n))))

    @property
    def order(self) -> int:
        return len(self.labels)

    def elements(self) -> List[int]:
        return list(range(self.order))

    def _compute_inverses(self) -> List[int]:
        inverses = []
        for a in range(self.order):
            candidates = np.nonzero(self.table[a] == self.identity)[0]
            if len(candidates) != 1:
                raise InputError(f"El elemento {self.labels[a]} no tiene inverso único")
            inverses.append(int(candidates[0]))
        return inverses

    def multiply(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def invert(self, x: int) -> int:
        return self._inverse[x]

    def sort_key(self, x: int) -> int:
        return x

    def index_of(self, label: str) -> int:
        if label not in self._index:
            raise InputError(f"Elemento desconocido: {label!r}")
        return self._index[label]

    def label_of(self, x: int) -> str:
        return self.labels[x]

    def verify_group_axioms(self) -> List[str]:
        """Violaciones de identidad, inversos y asociatividad (vacía si es grupo)."""
        problems = []
        n, table, e = self.order, self.table, self.identity
        if not (np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))):
            problems.append("la identidad declarada no es neutra")
        # (ab)c = a(bc) para todos los triples, vectorizado por filas
        for a in range(n):
            left = table[table[a]]          # left[b, c] = (ab)c
            right = table[a][table]         # right[b, c] = a(bc)
            if not np.array_equal(left, right):
                problems.append(f"asociatividad falla con a={self.labels[a]}")
                break
        return problems


class IntLattice:
    """ℤ^k; los elementos son tuplas de enteros y el producto es la suma."""

    def __init__(self, rank: int):
        if rank < 1:
            raise InputError("El rango de ℤ^k debe ser positivo")
        self.rank = rank
        self.identity = (0,) * rank

    def multiply(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def invert(self, x):
        return tuple(-a for a in x)

    def sort_key(self, x):
        return (sum(abs(a) for a in x), x)


@dataclass
class NormedGroup:
    """
    Grupo con una norma evaluable.

    Attributes:
        context: Contexto del grupo
        norm: Función elemento → racional no negativo
        elements: Lista completa si el grupo es finito y enumerable
        kind: Familia del grupo ("finite_table", "int_lattice", "free_fg_norm", "permutation")
    """

    context: Any
    norm: Callable[[Hashable], Fraction]
    elements: Optional[List[Hashable]] = None
    kind: str = "generic"
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def is_finite(self) -> bool:
        return self.elements is not None


def table_normed_group(group: FiniteTableGroup, values: Dict[int, Fraction]) -> NormedGroup:
    """Grupo finito con norma (o seminorma) dada por tabla completa."""
    missing = [group.label_of(x) for x in group.elements() if x not in values]
    if missing:
        raise InputError(f"Faltan valores de norma para: {missing}")
    table = {x: Fraction(values[x]) for x in group.elements()}
    return NormedGroup(group, table.__getitem__, group.elements(), "finite_table", {"values": table})


def discrete_norm(group: FiniteTableGroup) -> NormedGroup:
    """Norma discreta: 0 en la identidad, 1 en el resto."""
    return table_normed_group(group, {x: Fraction(0 if x == group.identity else 1) for x in group.elements()})


def lattice_normed_group(rank: int, weights: Optional[Sequence[Fraction]] = None) -> NormedGroup:
    """ℤ^k con la norma Σ w_i |x_i| (pesos positivos, 1 por defecto)."""
    lattice = IntLattice(rank)
    weights = [Fraction(w) for w in (weights or [1] * rank)]
    if len(weights) != rank or any(w <= 0 for w in weights):
        raise InputError("Se necesitan k pesos positivos para ℤ^k")

    def norm(x):
        return sum((w * abs(a) for w, a in zip(weights, x)), Fraction(0))

    return NormedGroup(lattice, norm, None, "int_lattice", {"weights": weights})


def subgroup_table(group: FiniteTableGroup, elements: Sequence[int]) -> Tuple[FiniteTableGroup, Dict[int, int]]:
    """
    Subgrupo dado por sus elementos, como grupo de tabla propio.

    Returns:
        tuple: (subgrupo con las etiquetas del grupo ambiente, índice ambiente → índice nuevo)

    Raises:
        InputError: Si los elementos no son cerrados bajo el producto
    """
    members = sorted(set(elements))
    position = {x: i for i, x in enumerate(members)}
    table = np.empty((len(members), len(members)), dtype=np.int64)
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            product = group.multiply(a, b)
            if product not in position:
                raise InputError("Los elementos no forman un subgrupo")
            table[i, j] = position[product]
    if group.identity not in position:
        raise InputError("El subgrupo no contiene la identidad")
    return FiniteTableGroup([group.label_of(x) for x in members], table, position[group.identity]), position
