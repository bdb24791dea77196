"""
Normas Generadas
================

Pre-normas parciales, las normas finitamente generadas que inducen, bolas de
norma, verificación de normas parciales, seminormas obtenidas por pullback y
cocientes por el núcleo de una seminorma.

Funcionalidades principales:
- λ(x) = min{λ'(x_1)+…+λ'(x_n) : x = x_1·…·x_n, x_i ∈ A}, calculada con
  Dijkstra sobre el grafo de Cayley ponderado, con factorización testigo
- Bolas {g : λ(g) ≤ r} completas y exactas (certificado de propiedad)
- Verificación de la desigualdad de norma parcial con contraejemplo
- Seminormas pullback λ'(w) = λ(w evaluada en el grupo objetivo)
- Cociente de un grupo finito por N = {λ = 0} con la norma inducida
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from groups.caps import Caps
from groups.cayley import LightestPathSearch
from groups.families import FiniteTableGroup, NormedGroup, table_normed_group
from groups.words import FreeProduct, FreeProductSignature, Word
from utils.error_handler import CapExceededError, InputError
from utils.rational_utils import RationalUtils


class PartialPreNorm:
    """
    Semilla finita y simétrica λ' con valores racionales positivos.

    El portador A = dominio contiene la identidad (con valor 0), es cerrado
    bajo inversos con el mismo valor y, si se declaran, contiene a los
    generadores.
    """

    def __init__(self, context: Any, entries: Mapping[Hashable, Fraction],
                 generators: Optional[Iterable[Hashable]] = None):
        self.context = context
        values = {x: Fraction(v) for x, v in entries.items()}
        identity = context.identity
        if values.setdefault(identity, Fraction(0)) != 0:
            raise InputError("La identidad debe tener valor 0 en la semilla")
        for x, v in values.items():
            if x != identity and v <= 0:
                raise InputError(f"Valor no positivo en la semilla: {x} ↦ {v}")
            inverse = context.invert(x)
            if values.get(inverse) != v:
                raise InputError(f"La semilla no es simétrica en {x}: falta {inverse} con valor {v}")
        for g in generators or ():
            if g not in values:
                raise InputError(f"La semilla no contiene al generador {g}")
        self.entries: Dict[Hashable, Fraction] = dict(sorted(values.items(), key=lambda item: context.sort_key(item[0])))

    @classmethod
    def on_words(cls, signature: FreeProductSignature, entries: Mapping[Word, Fraction]) -> PartialPreNorm:
        """Semilla sobre palabras; completa inversos y exige los generadores."""
        context = FreeProduct(signature)
        completed = {}
        for word, value in entries.items():
            signature.check(word)
            for element in (word, word.inverse()):
                if element in completed and completed[element] != value:
                    raise InputError(f"Valores incompatibles para {element} y su inverso")
                completed[element] = Fraction(value)
        generators = [Word((g,)) for g in signature.generators()]
        return cls(context, completed, generators)

    @property
    def carrier(self) -> List[Hashable]:
        return list(self.entries)

    def value(self, x: Hashable) -> Fraction:
        return self.entries[x]

    def items(self) -> List[Tuple[Hashable, Fraction]]:
        return list(self.entries.items())

    @property
    def max_value(self) -> Fraction:
        """M = max{λ'(x) : x ∈ A}."""
        return max(self.entries.values())

    @property
    def min_value(self) -> Fraction:
        """m = min{λ'(x) : x ∈ A ∖ {1}}."""
        nonzero = [v for v in self.entries.values() if v > 0]
        if not nonzero:
            raise InputError("La semilla no tiene elementos no triviales")
        return min(nonzero)

    def vacuity_bound(self) -> int:
        """⌈M/m⌉: más factores hacen vacía la desigualdad de norma parcial."""
        return RationalUtils.ceil_ratio(self.max_value, self.min_value)


@dataclass
class NormBall:
    """
    Tabla certificada {g : λ(g) ≤ r} → λ(g).

    Attributes:
        radius (Fraction): Radio r
        table (dict): Elemento → valor, en orden de liquidación
        context: Contexto del grupo
    """

    radius: Fraction
    table: Dict[Hashable, Fraction]
    context: Any = field(repr=False, default=None)

    def __contains__(self, x) -> bool:
        return x in self.table

    def __len__(self) -> int:
        return len(self.table)

    def value(self, x: Hashable) -> Fraction:
        return self.table[x]

    def elements(self) -> List[Hashable]:
        return list(self.table)

    def values(self) -> List[Fraction]:
        """Valores tabulados distintos, en orden creciente."""
        return sorted(set(self.table.values()))

    def symmetry_violations(self) -> List[Hashable]:
        invert = self.context.invert
        return [x for x, v in self.table.items() if self.table.get(invert(x)) != v]

    def triangle_violations(self) -> List[Tuple[Hashable, Hashable]]:
        """Pares (x, y) con xy tabulado y λ(xy) > λ(x) + λ(y)."""
        multiply = self.context.multiply
        problems = []
        for x, vx in self.table.items():
            for y, vy in self.table.items():
                xy = multiply(x, y)
                if xy in self.table and self.table[xy] > vx + vy:
                    problems.append((x, y))
        return problems


class GeneratedNorm:
    """
    Norma finitamente generada por una semilla, evaluada de forma perezosa.

    Todas las consultas comparten una misma búsqueda de Dijkstra, de modo que
    la bola explorada crece solo lo necesario.
    """

    def __init__(self, seed: PartialPreNorm, caps: Caps = Caps(), stage: str = "generated_norm"):
        self.seed = seed
        self.context = seed.context
        self.search = LightestPathSearch(seed.context, seed.items(), caps, stage)

    def __call__(self, x: Hashable) -> Fraction:
        value = self.search.value(x)
        if value is None:
            raise InputError(f"{x} no está en el subgrupo generado por la semilla")
        return value

    def value_within(self, x: Hashable, budget: Fraction) -> Optional[Fraction]:
        """λ(x) si es ≤ budget; None en otro caso."""
        return self.search.value(x, budget)

    def witness(self, x: Hashable) -> List[Hashable]:
        self(x)
        return self.search.witness(x)

    def ball(self, radius: Fraction) -> NormBall:
        radius = Fraction(radius)
        if radius < 0:
            raise InputError("El radio de la bola debe ser no negativo")
        return NormBall(radius, self.search.settle_radius(radius), self.context)


def generated_norm(seed: PartialPreNorm, x: Hashable, caps: Caps = Caps()) -> Tuple[Fraction, List[Hashable]]:
    """
    Valor de la norma generada en x y una factorización óptima.

    Returns:
        tuple: (λ(x), [x_1, …, x_k]) con x = x_1·…·x_k y Σ λ'(x_i) = λ(x)
    """
    norm = GeneratedNorm(seed, caps)
    return norm(x), norm.witness(x)


def norm_ball(seed: PartialPreNorm, radius: Fraction, caps: Caps = Caps()) -> NormBall:
    """Bola completa {g : λ(g) ≤ r} de la norma generada por la semilla."""
    return GeneratedNorm(seed, caps, "norm_ball").ball(radius)


@dataclass
class PartialNormCheck:
    """Resultado de check_partial_norm; counterexample es None si pasa."""

    ok: bool
    max_factors: int
    counterexample: Optional[Dict[str, Any]] = None


def check_partial_norm(seed: PartialPreNorm, caps: Caps = Caps()) -> PartialNormCheck:
    """
    Verificar λ'(x_1·…·x_k) ≤ Σ λ'(x_i) para toda factorización dentro de A.

    Basta mirar sumas < M = max λ', y como cada factor vale al menos m, eso
    limita las factorizaciones a ⌈M/m⌉ factores. La búsqueda de Dijkstra con
    corte M recorre exactamente esas factorizaciones; hay violación si el
    mínimo sobre factorizaciones de algún x ∈ A queda por debajo de λ'(x).
    """
    bound = seed.vacuity_bound()
    search = LightestPathSearch(seed.context, seed.items(), caps, "check_partial_norm", cutoff=seed.max_value)
    for x, value in seed.items():
        best = search.value(x, budget=value)
        if best is not None and best < value:
            factors = search.witness(x)
            logging.info(f"Semilla no es norma parcial: {x} vale {value} pero se factoriza con costo {best}")
            return PartialNormCheck(False, bound, {
                "element": x,
                "seed_value": value,
                "factors": factors,
                "factor_sum": best,
            })
    return PartialNormCheck(True, bound)


class PullbackSeminorm:
    """
    Seminorma λ'(w) = λ(w_H) sobre el grupo libre con un generador por
    elemento de la lista gens: la letra g0.j se evalúa como gens[j-1].
    """

    def __init__(self, target: NormedGroup, gens: Sequence[Hashable], caps: Caps = Caps()):
        if not gens:
            raise InputError("El pullback necesita al menos un generador")
        self.target = target
        self.gens = list(gens)
        self.caps = caps
        self.signature = FreeProductSignature.free_group(len(self.gens))
        self._inverses = [target.context.invert(g) for g in self.gens]

    def evaluate(self, word: Word) -> Hashable:
        """Imagen de la palabra en el grupo objetivo."""
        if len(word) > self.caps.ball:
            raise CapExceededError("pullback_seminorm", self.caps.ball, len(word), "longitud de palabra")
        context = self.target.context
        element = context.identity
        for letter in word.letters:
            if letter.factor != 0 or letter.index > len(self.gens):
                raise InputError(f"La letra {letter} no corresponde a ningún generador del pullback")
            g = self.gens[letter.index - 1] if letter.sign > 0 else self._inverses[letter.index - 1]
            element = context.multiply(element, g)
        return element

    def __call__(self, word: Word) -> Fraction:
        return Fraction(self.target.norm(self.evaluate(word)))


def pullback_seminorm(target: NormedGroup, gens: Sequence[Hashable], caps: Caps = Caps()) -> PullbackSeminorm:
    return PullbackSeminorm(target, gens, caps)


def verify_norm_axioms(group: NormedGroup, seminorm: bool = False) -> List[str]:
    """
    Comprobar exhaustivamente los axiomas de (semi)norma en un grupo finito.

    Returns:
        list: Descripción de cada violación (vacía si se cumplen)
    """
    if not group.is_finite:
        raise InputError("Los axiomas solo se verifican exhaustivamente en grupos finitos")
    context, norm = group.context, group.norm
    problems = []
    if norm(context.identity) != 0:
        problems.append("λ(1) ≠ 0")
    values = {x: norm(x) for x in group.elements}
    for x, v in values.items():
        if v < 0:
            problems.append(f"λ({x}) < 0")
        if not seminorm and v == 0 and x != context.identity:
            problems.append(f"λ({x}) = 0 fuera de la identidad")
        if values[context.invert(x)] != v:
            problems.append(f"λ({x}) ≠ λ({x}⁻¹)")
        for y, w in values.items():
            if values[context.multiply(x, y)] > v + w:
                problems.append(f"λ({x}·{y}) > λ({x}) + λ({y})")
    return problems


def is_conjugacy_invariant(group: NormedGroup) -> bool:
    """λ(g⁻¹hg) = λ(h) para todo g, h del grupo finito."""
    context, norm = group.context, group.norm
    for g in group.elements:
        g_inv = context.invert(g)
        for h in group.elements:
            if norm(context.multiply(context.multiply(g_inv, h), g)) != norm(h):
                return False
    return True


def seminorm_kernel_quotient(group: NormedGroup) -> NormedGroup:
    """
    Cociente de un grupo finito por N = {λ = 0} con la norma inducida.

    Verifica que N es subgrupo normal y que λ es constante en cada coclase
    gN; la coclase se etiqueta con su representante de menor índice.

    Raises:
        InputError: Si N no es normal o λ no es constante en las coclases
                    (la entrada no era una seminorma)
    """
    context = group.context
    if not isinstance(context, FiniteTableGroup):
        raise InputError("El cociente requiere un grupo finito en forma de tabla")
    norm = group.norm
    kernel = [x for x in context.elements() if norm(x) == 0]
    kernel_set = set(kernel)
    if context.identity not in kernel_set:
        raise InputError("λ(1) ≠ 0: no es una seminorma")
    for n in kernel:
        if context.invert(n) not in kernel_set:
            raise InputError("N = {λ = 0} no es cerrado bajo inversos")
        if any(context.multiply(n, m) not in kernel_set for m in kernel):
            raise InputError("N = {λ = 0} no es cerrado bajo productos")
        for g in context.elements():
            conjugate = context.multiply(context.multiply(g, n), context.invert(g))
            if conjugate not in kernel_set:
                raise InputError(f"N no es normal: {context.label_of(g)} conjuga "
                                 f"{context.label_of(n)} fuera de N")
    coset_of: Dict[int, int] = {}
    representatives: List[int] = []
    for g in context.elements():
        if g in coset_of:
            continue
        coset_id = len(representatives)
        representatives.append(g)
        for n in kernel:
            member = context.multiply(g, n)
            if norm(member) != norm(g):
                raise InputError(f"λ no es constante en la coclase de {context.label_of(g)}")
            coset_of[member] = coset_id
    size = len(representatives)
    table = [[coset_of[context.multiply(a, b)] for b in representatives] for a in representatives]
    labels = [context.label_of(g) for g in representatives]
    quotient = FiniteTableGroup(labels, table, coset_of[context.identity])
    logging.info(f"Cociente por N (|N| = {len(kernel)}): grupo de orden {size}")
    return table_normed_group(quotient, {i: norm(g) for i, g in enumerate(representatives)})


def generated_normed_group(seed: PartialPreNorm, caps: Caps = Caps()) -> NormedGroup:
    """Grupo libre (o producto libre) con la norma generada por la semilla."""
    norm = GeneratedNorm(seed, caps)
    return NormedGroup(seed.context, norm, None, "free_fg_norm", {"norm": norm, "seed": seed})
