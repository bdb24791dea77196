"""
Cálculo de Emparejamientos
==========================

Un emparejamiento (match) de una palabra sin reducir w es una involución ρ
de sus posiciones que no se cruza y solo une letras mutuamente inversas. El
valor λ_ρ(w) describe cómo se construye w por concatenación y conjugación a
partir de la norma del paso de unión σ:

- palabra vacía: 0
- ρ fija todas las posiciones: σ(w')
- ρ fija un bloque inicial [1..k] con k < n: σ(bloque') + λ_ρ(resto)
- ρ(1) = n: Γ_{x}(λ_ρ(interior)), con x la primera letra
- en otro caso se parte en ρ(1): λ_ρ(w_1…w_ρ(1)) + λ_ρ(resto)

Funcionalidades principales:
- Enumeración exhaustiva de emparejamientos (recursión por intervalos)
- Evaluación de λ_ρ por recursión estructural
- Oráculo λ̃ por programación dinámica sobre todas las palabras hasta longitud L
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from groups.caps import Caps
from groups.moc import Moc
from groups.words import FreeProductSignature, GeneratorSymbol, Word, reduce
from utils.error_handler import CapExceededError, InputError, MatchError

RawWord = Tuple[GeneratorSymbol, ...]
NormEvaluator = Callable[[Word], Fraction]


@dataclass(frozen=True)
class Match:
    """Involución ρ sobre las posiciones 0..n-1: partner[i] = ρ(i)."""

    partner: Tuple[int, ...]

    @classmethod
    def identity(cls, length: int) -> Match:
        return cls(tuple(range(length)))

    @classmethod
    def from_pairs(cls, length: int, pairs: Sequence[Tuple[int, int]]) -> Match:
        """Construir a partir de pares (i, j) con posiciones desde 1."""
        partner = list(range(length))
        for i, j in pairs:
            partner[i - 1], partner[j - 1] = j - 1, i - 1
        return cls(tuple(partner))

    def __len__(self) -> int:
        return len(self.partner)

    def pairs(self) -> List[Tuple[int, int]]:
        """Pares emparejados (i < ρ(i)), con posiciones desde 1."""
        return [(i + 1, j + 1) for i, j in enumerate(self.partner) if i < j]

    def validate(self, raw: RawWord) -> None:
        """
        Raises:
            MatchError: Si ρ no es involución, se cruza o une letras no inversas
        """
        if len(self.partner) != len(raw):
            raise MatchError(f"El emparejamiento tiene {len(self.partner)} posiciones y la palabra {len(raw)}")
        for i, j in enumerate(self.partner):
            if not 0 <= j < len(raw) or self.partner[j] != i:
                raise MatchError(f"ρ no es una involución en la posición {i + 1}")
            if i != j and raw[i] != raw[j].inverse():
                raise MatchError(f"ρ une las posiciones {i + 1} y {j + 1}, cuyas letras no son inversas")
        for i, j in self.pairs():
            for k, l in self.pairs():
                if i < k < j < l:
                    raise MatchError(f"Los pares ({i}, {j}) y ({k}, {l}) se cruzan")


def enumerate_matches(raw: RawWord, caps: Caps = Caps()) -> List[Match]:
    """
    Todos los emparejamientos de la palabra, sin repeticiones.

    La posición inicial de cada intervalo queda fija o se une con una letra
    inversa posterior; interior y resto se emparejan por separado, lo que
    garantiza que no haya cruces.

    Raises:
        CapExceededError: Si la palabra supera el tope de longitud
    """
    raw = tuple(raw)
    if len(raw) > caps.match:
        raise CapExceededError("enumerate_matches", caps.match, len(raw), "longitud de palabra")
    memo: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], ...]]] = {}

    def pairings(lo: int, hi: int) -> List[Tuple[Tuple[int, int], ...]]:
        if lo >= hi:
            return [()]
        if (lo, hi) in memo:
            return memo[(lo, hi)]
        result = list(pairings(lo + 1, hi))
        target = raw[lo].inverse()
        for k in range(lo + 1, hi):
            if raw[k] == target:
                for inner in pairings(lo + 1, k):
                    for rest in pairings(k + 1, hi):
                        result.append(((lo, k),) + inner + rest)
        memo[(lo, hi)] = result
        return result

    matches = []
    for pairs in pairings(0, len(raw)):
        partner = list(range(len(raw)))
        for i, j in pairs:
            partner[i], partner[j] = j, i
        matches.append(Match(tuple(partner)))
    return matches


def conjugation_cost(gamma: Moc, inner: Fraction) -> Optional[Fraction]:
    """Γ(inner), o None si inner cae fuera del dominio (el costo superaría 2·r_max)."""
    if inner > gamma.r_max:
        return None
    return gamma(inner)


def lambda_rho(raw: RawWord, rho: Match, sigma: NormEvaluator,
               gammas: Mapping[GeneratorSymbol, Moc]) -> Fraction:
    """
    Valor λ_ρ(w) por recursión estructural.

    Args:
        raw: Palabra sin reducir
        rho: Emparejamiento válido de raw
        sigma: Norma del paso de unión, evaluada en palabras reducidas
        gammas: Γ_{i,j} por generador positivo

    Raises:
        MatchError: Si ρ no es un emparejamiento de raw
        MocDomainError: Si algún Γ se evalúa fuera de su dominio
    """
    raw = tuple(raw)
    rho.validate(raw)
    partner = rho.partner

    def value(lo: int, hi: int) -> Fraction:
        if lo >= hi:
            return Fraction(0)
        k = lo
        while k < hi and partner[k] == k:
            k += 1
        if k == hi:
            return sigma(reduce(raw[lo:hi]))
        if k > lo:
            return sigma(reduce(raw[lo:k])) + value(k, hi)
        close = partner[lo]
        if close == hi - 1:
            return gammas[raw[lo].positive](value(lo + 1, hi - 1))
        return value(lo, close + 1) + value(close + 1, hi)

    return value(0, len(raw))


class MatchOracle:
    """
    λ̃ acotado: mínimo de λ_ρ(w) sobre toda palabra w con |w| ≤ L y todo ρ.

    El modo por defecto evalúa cada palabra sin reducir por programación
    dinámica sobre intervalos: V(w) es el mínimo entre σ(w'), Γ(V(interior))
    cuando los extremos son inversos y V(prefijo) + V(sufijo) en cada corte.
    El modo exhaustivo enumera los emparejamientos y evalúa λ_ρ uno por uno.

    Attributes:
        table (dict): Palabra reducida → menor valor hallado
    """

    def __init__(self, signature: FreeProductSignature, sigma: NormEvaluator,
                 gammas: Mapping[GeneratorSymbol, Moc], length: int,
                 caps: Caps = Caps(), exhaustive: bool = False):
        if length < 0:
            raise InputError("La longitud del oráculo debe ser no negativa")
        letters = signature.letters()
        total = sum(len(letters) ** k for k in range(length + 1))
        if total > caps.ball:
            raise CapExceededError("step2_tilde_oracle", caps.ball, total, f"L={length}")
        self.signature = signature
        self.length = length
        self.gammas = gammas
        self._sigma_cache: Dict[Word, Fraction] = {}
        self._sigma = sigma
        self.table: Dict[Word, Fraction] = {Word(): Fraction(0)}
        values: Dict[RawWord, Fraction] = {(): Fraction(0)}
        for size in range(1, length + 1):
            for raw in product(letters, repeat=size):
                caps.check_time("step2_tilde_oracle")
                if exhaustive:
                    best = min(lambda_rho(raw, rho, self._reduced_sigma, gammas)
                               for rho in enumerate_matches(raw, caps))
                else:
                    best = self._interval_value(raw, values)
                values[raw] = best
                reduced = reduce(raw)
                if best < self.table.get(reduced, best + 1):
                    self.table[reduced] = best
        logging.info(f"Oráculo de emparejamientos: {len(values)} palabras hasta L={length}, "
                     f"{len(self.table)} elementos")

    def _reduced_sigma(self, word: Word) -> Fraction:
        if word not in self._sigma_cache:
            self._sigma_cache[word] = self._sigma(word)
        return self._sigma_cache[word]

    def _interval_value(self, raw: RawWord, values: Dict[RawWord, Fraction]) -> Fraction:
        best = self._reduced_sigma(reduce(raw))
        if len(raw) >= 2 and raw[0] == raw[-1].inverse():
            cost = conjugation_cost(self.gammas[raw[0].positive], values[raw[1:-1]])
            if cost is not None and cost < best:
                best = cost
        for k in range(1, len(raw)):
            split = values[raw[:k]] + values[raw[k:]]
            if split < best:
                best = split
        return best

    def value(self, x: Word) -> Fraction:
        if len(x) > self.length:
            raise InputError(f"L = {self.length} es menor que |x| = {len(x)}")
        return self.table[x]


def step2_tilde_oracle(x: Word, length: int, signature: FreeProductSignature, sigma: NormEvaluator,
                       gammas: Mapping[GeneratorSymbol, Moc], caps: Caps = Caps()) -> Fraction:
    """Valor del oráculo acotado en x (cota superior de λ̃, no creciente en L)."""
    signature.check(x)
    if length < len(x):
        raise InputError(f"L = {length} es menor que |x| = {len(x)}")
    return MatchOracle(signature, sigma, gammas, length, caps).value(x)
