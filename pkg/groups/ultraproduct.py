"""
Diagnósticos de Ultraproductos en Etapa Finita
==============================================

Los ultrafiltros no principales no son objetos computables: todo diagnóstico
de este módulo trabaja sobre un prefijo finito de la sucesión de grupos y
reporta intervalos del filtro cofinito en lugar de ultralímites.

Funcionalidades principales:
- Distorsión por conjugación en la bola {λ_n ≤ δ} de cada etapa
- Testigo del colapso de F_2 con la norma reescalada |·|/n
- δ exacto para permutaciones de soporte finito de S∞ y su testigo inverso
- Intervalo [liminf, limsup] de la cola de un prefijo
- Perfil de continuidad: distorsión en cada etapa y su intervalo
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

from groups.caps import Caps
from groups.families import NormedGroup
from groups.words import FreeProduct, FreeProductSignature, GeneratorSymbol, Word, conjugate, enumerate_ball
from utils.error_handler import InputError

FILTER_NOTE = "intervalo del filtro cofinito sobre un prefijo finito; no decide el ultralímite"


class FinitelySupportedPermutation:
    """
    Permutación de ℕ = {1, 2, …} que mueve solo un conjunto finito de puntos.

    La norma es λ(p) = max{1/k : p(k) ≠ k}, es decir 1/(menor punto movido).
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[int, int]):
        moved = {int(k): int(v) for k, v in mapping.items() if int(k) != int(v)}
        if any(k < 1 or v < 1 for k, v in moved.items()):
            raise InputError("Los puntos de una permutación de ℕ empiezan en 1")
        if sorted(moved) != sorted(moved.values()):
            raise InputError("La asignación no es una permutación de su soporte")
        self.mapping = moved

    @classmethod
    def identity(cls) -> FinitelySupportedPermutation:
        return cls({})

    @classmethod
    def transposition(cls, i: int, j: int) -> FinitelySupportedPermutation:
        return cls({i: j, j: i})

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]]) -> FinitelySupportedPermutation:
        mapping: Dict[int, int] = {}
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                if a in mapping:
                    raise InputError(f"El punto {a} aparece en dos ciclos")
                mapping[a] = b
        return cls(mapping)

    @property
    def support(self) -> List[int]:
        return sorted(self.mapping)

    @property
    def bound(self) -> int:
        """Mayor punto movido (0 para la identidad)."""
        return max(self.mapping, default=0)

    def __call__(self, point: int) -> int:
        return self.mapping.get(point, point)

    def __mul__(self, other: FinitelySupportedPermutation) -> FinitelySupportedPermutation:
        """(p·q)(k) = p(q(k))."""
        points = set(self.mapping) | set(other.mapping)
        return FinitelySupportedPermutation({k: self(other(k)) for k in points})

    def inverse(self) -> FinitelySupportedPermutation:
        return FinitelySupportedPermutation({v: k for k, v in self.mapping.items()})

    def norm(self) -> Fraction:
        return Fraction(1, min(self.mapping)) if self.mapping else Fraction(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinitelySupportedPermutation) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.mapping.items())))

    def __repr__(self) -> str:
        return f"FinitelySupportedPermutation({dict(sorted(self.mapping.items()))})"


class FinitarySymmetricGroup:
    """Contexto de grupo para permutaciones de soporte finito."""

    identity = FinitelySupportedPermutation.identity()

    def multiply(self, x, y):
        return x * y

    def invert(self, x):
        return x.inverse()

    def sort_key(self, x):
        return (x.bound, tuple(sorted(x.mapping.items())))


@dataclass
class GroupSequenceSpec:
    """
    Sucesión (G_n, λ_n) observada en las etapas 1..prefix.

    Attributes:
        kind: "scaled_free" (F_rank con |·|/n), "explicit" (lista de grupos
              finitos normados) o "finitely_supported_permutations" (S∞, la
              misma norma en cada etapa)
        prefix: Longitud P del prefijo observado
        rank: Rango del grupo libre en "scaled_free"
        groups: Grupos de cada etapa en "explicit"
    """

    kind: str
    prefix: int
    rank: int = 2
    groups: List[NormedGroup] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("scaled_free", "explicit", "finitely_supported_permutations"):
            raise InputError(f"Tipo de sucesión desconocido: {self.kind!r}")
        if self.prefix < 1:
            raise InputError("El prefijo debe tener al menos una etapa")
        if self.kind == "explicit" and len(self.groups) < self.prefix:
            raise InputError(f"Se necesitan {self.prefix} grupos, hay {len(self.groups)}")
        if self.kind == "explicit" and any(not g.is_finite for g in self.groups):
            raise InputError("Los grupos de una sucesión explícita deben ser finitos")

    def check_stage(self, n: int) -> None:
        if not 1 <= n <= self.prefix:
            raise InputError(f"La etapa {n} está fuera del prefijo 1..{self.prefix}")

    def context(self, n: int) -> Any:
        if self.kind == "scaled_free":
            return FreeProduct(FreeProductSignature.free_group(self.rank))
        if self.kind == "explicit":
            return self.groups[n - 1].context
        return FinitarySymmetricGroup()

    def norm(self, n: int, x: Hashable) -> Fraction:
        self.check_stage(n)
        if self.kind == "scaled_free":
            return Fraction(len(x), n)
        if self.kind == "explicit":
            return Fraction(self.groups[n - 1].norm(x))
        return x.norm()


@dataclass
class Distortion:
    """Máximo de λ_n(g⁻¹hg) y λ_n(ghg⁻¹) sobre {λ_n(h) ≤ δ}, con su testigo."""

    stage: int
    delta: Fraction
    value: Fraction
    witness: Hashable
    side: str
    ball_size: Optional[int] = None


def _sinf_distortion(g: FinitelySupportedPermutation, delta: Fraction, n: int) -> Distortion:
    # {λ(h) ≤ δ} son las permutaciones que fijan 1..k₀-1, con k₀ = ⌈1/δ⌉
    if delta <= 0:
        return Distortion(n, delta, Fraction(0), FinitarySymmetricGroup.identity, "none")
    start = math.ceil(1 / delta)
    limit = max(start, g.bound) + 1
    best: Optional[Tuple[Fraction, FinitelySupportedPermutation, str]] = None
    for side, mapping in (("inner", g.inverse()), ("outer", g)):
        # g⁻¹hg mueve g⁻¹(sop h); más allá de limit g no mueve nada
        point = min(range(start, limit + 1), key=lambda l: (mapping(l), l))
        partner = next(l for l in range(start, limit + 2) if l != point)
        value = Fraction(1, min(mapping(point), mapping(partner)))
        if best is None or value > best[0]:
            best = (value, FinitelySupportedPermutation.transposition(point, partner), side)
    return Distortion(n, delta, best[0], best[1], best[2])


def conjugation_distortion(spec: GroupSequenceSpec, g: Hashable, delta: Fraction, n: int,
                           caps: Caps = Caps()) -> Distortion:
    """
    Distorsión por conjugación de g en la etapa n a escala δ.

    En S∞ la bola {λ ≤ δ} es infinita, pero el máximo tiene forma cerrada:
    1/min{g^{∓1}(l) : l ≥ ⌈1/δ⌉}, alcanzado por una transposición.

    Raises:
        CapExceededError: Si la bola de la etapa supera el tope
    """
    spec.check_stage(n)
    delta = Fraction(delta)
    if delta < 0:
        raise InputError("δ debe ser no negativo")
    if spec.kind == "finitely_supported_permutations":
        return _sinf_distortion(g, delta, n)
    context = spec.context(n)
    if spec.kind == "scaled_free":
        ball = enumerate_ball(context.signature, int(delta * n), caps)
    else:
        ball = [h for h in spec.groups[n - 1].elements if spec.norm(n, h) <= delta]
    inverse = context.invert(g)
    best_value, best_h, best_side = Fraction(-1), context.identity, "none"
    for h in ball:
        for side, (left, right) in (("inner", (inverse, g)), ("outer", (g, inverse))):
            value = spec.norm(n, context.multiply(context.multiply(left, h), right))
            if value > best_value:
                best_value, best_h, best_side = value, h, side
    return Distortion(n, delta, best_value, best_h, best_side, len(ball))


@dataclass
class CollapseWitness:
    generator: Word
    conjugate: Word
    value: Fraction
    stage: int


def scaled_f2_collapse_witness(g: Word, n: int, rank: int = 2) -> CollapseWitness:
    """
    Generador x ∉ {w_1, w_1⁻¹} con λ_n(g⁻¹xg) = (2|g|+1)/n.

    g⁻¹·x·g no tiene cancelaciones, lo que se certifica comparando la longitud
    reducida con 2|g|+1.

    Raises:
        InputError: Si g es la identidad, n < 1 o el grupo no es F_2
    """
    if g.is_identity:
        raise InputError("El testigo de colapso requiere g ≠ 1")
    if n < 1:
        raise InputError("La etapa n debe ser positiva")
    if rank != 2:
        raise InputError(f"El testigo de colapso solo está definido en F_2, no en F_{rank}")
    FreeProductSignature.free_group(2).check(g)
    first = g.letters[0]
    index = 1 if first.index != 1 else 2
    x = Word((GeneratorSymbol(0, index),))
    word = conjugate(g.inverse(), x)
    if len(word) != 2 * len(g) + 1:
        raise InputError(f"Hubo cancelación en g⁻¹xg para g = {g}")
    return CollapseWitness(x, word, Fraction(len(word), n), n)


@dataclass
class SinfDelta:
    """Resultado de sinf_delta: δ = 1/m, comprobación directa y testigo inverso."""

    m: int
    delta: Fraction
    checked: int
    counterexamples: List[FinitelySupportedPermutation]
    witness: FinitelySupportedPermutation
    witness_value: Fraction
    witness_conjugate_value: Fraction


def sinf_delta(p: FinitelySupportedPermutation, n: int) -> SinfDelta:
    """
    δ = 1/m con m = max{p(l) : l ≤ n}.

    Comprueba λ(p⁻¹sp) < 1/n para toda transposición s = (i j) con
    m < i < j ≤ max(m, sop p) + 2. El testigo inverso es s = (m', m+1) con
    m' = p(n): s(m') > m, así que λ(s) = 1/m' ≥ δ, y p⁻¹sp mueve n, así que
    λ(p⁻¹sp) ≥ 1/n.
    """
    if n < 1:
        raise InputError("n debe ser al menos 1")
    m = max(p(l) for l in range(1, n + 1))
    delta = Fraction(1, m)
    inverse = p.inverse()
    bound = max(m, p.bound) + 2
    checked, counterexamples = 0, []
    for i in range(m + 1, bound + 1):
        for j in range(i + 1, bound + 1):
            s = FinitelySupportedPermutation.transposition(i, j)
            checked += 1
            if (inverse * s * p).norm() >= Fraction(1, n):
                counterexamples.append(s)
    witness = FinitelySupportedPermutation.transposition(p(n), m + 1)
    witness_conjugate = (inverse * witness * p).norm()
    if counterexamples:
        logging.warning(f"sinf_delta: {len(counterexamples)} contraejemplos para δ = {delta}")
    return SinfDelta(m, delta, checked, counterexamples, witness, witness.norm(), witness_conjugate)


@dataclass
class FilterLimitInterval:
    """[liminf, limsup] de la cola del prefijo que empieza en tail_start (desde 1)."""

    liminf: Fraction
    limsup: Fraction
    tail_start: int
    note: str = FILTER_NOTE


def filter_limit(values: Sequence[Fraction], tail_start: Optional[int] = None) -> FilterLimitInterval:
    """
    Intervalo del filtro cofinito sobre la cola del prefijo.

    La cola por defecto es el sufijo más corto que contiene todos los valores
    que aparecen al menos dos veces; si ninguno se repite, el último valor.
    """
    values = [Fraction(v) for v in values]
    if not values:
        raise InputError("El prefijo no puede ser vacío")
    if tail_start is None:
        seen: Dict[Fraction, int] = {}
        for v in values:
            seen[v] = seen.get(v, 0) + 1
        recurring = {v for v, times in seen.items() if times >= 2}
        start = len(values) - 1
        missing = set(recurring)
        while missing and start >= 0:
            missing.discard(values[start])
            if missing:
                start -= 1
        tail_start = start + 1
    if not 1 <= tail_start <= len(values):
        raise InputError(f"La cola debe empezar en 1..{len(values)}")
    tail = values[tail_start - 1:]
    return FilterLimitInterval(min(tail), max(tail), tail_start)


@dataclass
class ContinuityProfile:
    delta: Fraction
    stages: List[Distortion]
    interval: FilterLimitInterval


SequenceLike = Union[Sequence[Hashable], Callable[[int], Hashable]]


def continuity_profile(spec: GroupSequenceSpec, g: SequenceLike, delta: Fraction,
                       caps: Caps = Caps()) -> ContinuityProfile:
    """Distorsión de (g_n) a escala δ en cada etapa del prefijo y su intervalo."""
    element = g if callable(g) else (lambda n: g[n - 1])
    if not callable(g) and len(g) < spec.prefix:
        raise InputError(f"Se necesitan {spec.prefix} elementos de la sucesión, hay {len(g)}")
    stages = [conjugation_distortion(spec, element(n), delta, n, caps) for n in range(1, spec.prefix + 1)]
    interval = filter_limit([d.value for d in stages])
    logging.info(f"Perfil de continuidad a δ = {delta}: [{interval.liminf}, {interval.limsup}] "
                 f"desde la etapa {interval.tail_start}")
    return ContinuityProfile(Fraction(delta), stages, interval)
