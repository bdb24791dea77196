"""
Normas en Productos Libres
==========================

Construcción en tres pasos de una norma finitamente generada λ sobre
F_1 ∗ … ∗ F_n que extiende cada norma de factor ν_i y admite 2Γ_i^j como MOC
de cada generador x_{i,j}.

1. Unión: σ' = ∪ λ'_i sobre B' = ∪ A_i; σ es la norma que genera.
2. Clausura: λ̃(x) = mínimo de λ_ρ(w) sobre palabras w con w' = x. Se calcula
   como derivación más ligera: los átomos son los axiomas de B' (costo σ') y
   los conjugados s·y·s⁻¹ de elementos ya liquidados (costo Γ_s(λ̃(y))); cada
   elemento se liquida como producto de átomos en orden de valor.
3. Regeneración: con r_{i,j} el radio desde el que Γ_{i,j} domina
   2λ_i(x_{i,j}) + id, r' = max r_{i,j} y r = max Γ_{i,j}(r'), λ es la norma
   generada por λ̃ sobre B' ∪ {λ̃ ≤ r}.

Funcionalidades principales:
- Preparación por factor en paralelo (norma, MOC mínimos de generadores)
- Verificación de extensión sobre bolas de factor
- Transcripción de verificación de MOC (Γ_{i,j} y 2Γ_i^j)
- Contraste de la clausura con el oráculo de emparejamientos
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from heapq import heappop, heappush
from itertools import count
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from config.settings import AppSettings
from groups.caps import Caps
from groups.matches import MatchOracle, conjugation_cost
from groups.moc import Moc, eventual_domination_radius, minimal_moc, moc_transform, verify_moc
from groups.norms import GeneratedNorm, NormBall, PartialPreNorm, check_partial_norm
from groups.words import FreeProduct, FreeProductSignature, GeneratorSymbol, Word, multiply
from utils.error_handler import CapExceededError, InputError, MocDomainError


def embed_word(word: Word, factor: int) -> Word:
    """Palabra de un grupo libre (factor 0) vista dentro del factor i."""
    return Word(tuple(GeneratorSymbol(factor, s.index, s.sign) for s in word.letters))


def factor_word(word: Word) -> Word:
    """Inversa de embed_word para palabras contenidas en un único factor."""
    return Word(tuple(GeneratorSymbol(0, s.index, s.sign) for s in word.letters))


def _factor_of(word: Word) -> Optional[int]:
    factors = {s.factor for s in word.letters}
    return factors.pop() if len(factors) == 1 else None


def _require_free_seed(seed: PartialPreNorm, index: int) -> FreeProductSignature:
    context = seed.context
    if not isinstance(context, FreeProduct) or context.signature.factor_count != 1:
        raise InputError(f"La semilla del factor {index} debe estar sobre un grupo libre")
    return context.signature


def step1_merge(factors: Sequence[PartialPreNorm], caps: Caps = Caps()) -> PartialPreNorm:
    """
    Paso 1: σ' = ∪ λ'_i sobre el producto libre.

    Raises:
        InputError: Si alguna semilla de factor no es norma parcial
    """
    if not factors:
        raise InputError("Se necesita al menos un factor")
    ranks = []
    entries: Dict[Word, Fraction] = {}
    for index, seed in enumerate(factors):
        ranks.append(_require_free_seed(seed, index).rank)
        verdict = check_partial_norm(seed, caps)
        if not verdict.ok:
            raise InputError(f"La semilla del factor {index} no es norma parcial: "
                             f"{verdict.counterexample['element']} admite una factorización más barata")
        for word, value in seed.items():
            if not word.is_identity:
                entries[embed_word(word, index)] = value
    signature = FreeProductSignature(tuple(ranks))
    return PartialPreNorm.on_words(signature, entries)


class TildeClosure:
    """
    Paso 2: tabla exacta de λ̃ en {x : λ̃(x) ≤ budget}.

    Dijkstra sobre elementos con un conjunto de átomos que crece: al liquidar
    y nacen los átomos x^ε·y·x^{-ε}, que se combinan con todo lo ya liquidado.
    Como Γ_{i,j}(v) ≥ 2v, un átomo de conjugación siempre cuesta más que el
    elemento que lo origina.

    Attributes:
        table (dict): Elemento → λ̃, en orden de liquidación
        atoms (dict): Átomo → costo
    """

    def __init__(self, axioms: PartialPreNorm, gammas: Mapping[GeneratorSymbol, Moc],
                 budget: Fraction, caps: Caps = Caps()):
        self.context = axioms.context
        self.gammas = gammas
        self.budget = Fraction(budget)
        self.caps = caps
        self.table: Dict[Word, Fraction] = {}
        self.atoms: Dict[Word, Fraction] = {}
        self.origin: Dict[Word, Tuple[Any, ...]] = {}
        self._letters = self.context.signature.letters()
        self._best: Dict[Word, Fraction] = {self.context.identity: Fraction(0)}
        self._parent: Dict[Word, Tuple[Word, Word]] = {}
        self._counter = count()
        self._fringe: list = [(Fraction(0), self.context.sort_key(self.context.identity), next(self._counter),
                               self.context.identity)]
        for word, value in axioms.items():
            self._add_atom(word, value, ("axiom",))
        self._run()

    def _push(self, target: Word, value: Fraction, prev: Word, atom: Word) -> None:
        if value > self.budget or target in self.table:
            return
        best = self._best.get(target)
        if best is None or value < best:
            self._best[target] = value
            self._parent[target] = (prev, atom)
            heappush(self._fringe, (value, self.context.sort_key(target), next(self._counter), target))
            if len(self._best) > self.caps.ball:
                raise CapExceededError("step2_tilde", self.caps.ball, len(self._best), f"R={self.budget}")

    def _add_atom(self, atom: Word, cost: Fraction, origin: Tuple[Any, ...]) -> None:
        if atom.is_identity or cost > self.budget:
            return
        if atom in self.atoms and self.atoms[atom] <= cost:
            return
        self.atoms[atom] = cost
        self.origin[atom] = origin
        for y, value in self.table.items():
            if value + cost > self.budget:
                break
            self._push(multiply(y, atom), value + cost, y, atom)

    def _run(self) -> None:
        while self._fringe:
            value, _, _, x = heappop(self._fringe)
            if x in self.table:
                continue
            self.caps.check_time("step2_tilde")
            self.table[x] = value
            for atom, cost in list(self.atoms.items()):
                if value + cost <= self.budget:
                    self._push(multiply(x, atom), value + cost, x, atom)
            if x.is_identity:
                continue
            for letter in self._letters:
                cost = conjugation_cost(self.gammas[letter.positive], value)
                if cost is None:
                    if 2 * value <= self.budget:
                        raise MocDomainError(f"Γ de {letter.positive} no cubre λ̃ = {value}")
                    continue
                conjugate = multiply(multiply(Word((letter,)), x), Word((letter.inverse(),)))
                self._add_atom(conjugate, cost, ("conjugation", letter, x))
        logging.info(f"Clausura λ̃ con presupuesto {self.budget}: {len(self.table)} elementos, "
                     f"{len(self.atoms)} átomos")

    def value(self, x: Word) -> Optional[Fraction]:
        """λ̃(x), o None si supera el presupuesto."""
        return self.table.get(x)

    def derivation(self, x: Word) -> List[Dict[str, Any]]:
        """Átomos de una derivación óptima de x, de izquierda a derecha."""
        if x not in self.table:
            raise InputError(f"{x} no está en la tabla de λ̃")
        steps = []
        while x in self._parent:
            x, atom = self._parent[x]
            origin = self.origin[atom]
            step = {"atom": atom, "cost": self.atoms[atom], "rule": origin[0]}
            if origin[0] == "conjugation":
                step["by"] = origin[1]
                step["inner"] = origin[2]
            steps.append(step)
        steps.reverse()
        return steps


def step2_tilde(axioms: PartialPreNorm, gammas: Mapping[GeneratorSymbol, Moc],
                budget: Fraction, caps: Caps = Caps()) -> TildeClosure:
    """Clausura de derivaciones más ligeras hasta el presupuesto R."""
    if Fraction(budget) < 0:
        raise InputError("El presupuesto R debe ser no negativo")
    return TildeClosure(axioms, gammas, budget, caps)


@dataclass
class FactorData:
    """Norma de un factor y los MOC Γ_i^j de sus generadores (coordenadas del factor)."""

    index: int
    seed: PartialPreNorm
    norm: GeneratedNorm
    weights: Dict[int, Fraction]
    mocs: Dict[int, Moc] = field(default_factory=dict)
    supplied: bool = False


def _prepare_factor(index: int, seed: PartialPreNorm, caps: Caps,
                    supplied: Optional[Mapping[int, Moc]]) -> FactorData:
    signature = _require_free_seed(seed, index)
    norm = GeneratedNorm(seed, caps, f"factor_{index}")
    weights = {g.index: norm(Word((g,))) for g in signature.generators()}
    data = FactorData(index, seed, norm, weights, supplied=supplied is not None)
    for g in signature.generators():
        x = Word((g,))
        radius = 2 * weights[g.index]
        ball = norm.ball(radius)
        if supplied is not None:
            if g.index not in supplied:
                raise InputError(f"Falta el MOC del generador {embed_word(x, index)}")
            verdict = verify_moc(supplied[g.index], x, ball, norm.value_within, seed.context)
            if not verdict.ok:
                raise InputError(f"El MOC dado para {embed_word(x, index)} no es válido: {verdict.witness}")
            data.mocs[g.index] = supplied[g.index]
        else:
            data.mocs[g.index] = minimal_moc(ball, x, norm.value_within, seed.context)
    return data


def _extend_factor_mocs(data: FactorData, radius: Fraction) -> FactorData:
    """Recalcula los MOC mínimos sobre [0, radius]; los MOC dados deben cubrirlo."""
    for j, moc in list(data.mocs.items()):
        if moc.r_max >= radius:
            continue
        if data.supplied:
            raise MocDomainError(f"El MOC dado para g{data.index}.{j} cubre [0, {moc.r_max}], "
                                 f"se necesita [0, {radius}]")
        x = Word((GeneratorSymbol(0, j),))
        data.mocs[j] = minimal_moc(data.norm.ball(radius), x, data.norm.value_within, data.seed.context)
    return data


@dataclass
class FreeProductNorm:
    """
    Resultado de la construcción, con todos sus artefactos intermedios.

    Attributes:
        signature: Firma del producto libre
        factors: Datos de cada factor
        factor_mocs: Γ_i^j por generador del producto
        gammas: Γ_{i,j} = Γ_i^j + id por generador del producto
        sigma_seed: σ' sobre B'
        tilde: Clausura λ̃ del paso 2
        radii: r_{i,j} por generador
        r_prime, r: Radios del paso 3
        budget: Presupuesto efectivo de la clausura
        final_seed: Semilla B = B' ∪ Y con los valores de λ̃
        norm: Norma final λ
    """

    signature: FreeProductSignature
    factors: List[FactorData]
    factor_mocs: Dict[GeneratorSymbol, Moc]
    gammas: Dict[GeneratorSymbol, Moc]
    sigma_seed: PartialPreNorm
    sigma: GeneratedNorm
    tilde: TildeClosure
    radii: Dict[GeneratorSymbol, Fraction]
    r_prime: Fraction
    r: Fraction
    budget: Fraction
    y_set: List[Word]
    final_seed: PartialPreNorm
    norm: GeneratedNorm

    def __call__(self, x: Word) -> Fraction:
        return self.norm(self.signature.check(x))

    def ball(self, radius: Fraction) -> NormBall:
        return self.norm.ball(radius)


def step3_regenerate(factors: List[FactorData], sigma_seed: PartialPreNorm, budget: Fraction,
                     caps: Caps = Caps()) -> FreeProductNorm:
    """
    Paso 3: radios r', r, conjunto Y y norma final generada por λ̃ en B' ∪ Y.

    La clausura se ejecuta con presupuesto max(R, r, max σ'), de modo que
    la tabla cubre Y y todos los axiomas.
    """
    signature = sigma_seed.context.signature
    factor_mocs: Dict[GeneratorSymbol, Moc] = {}
    gammas: Dict[GeneratorSymbol, Moc] = {}
    radii: Dict[GeneratorSymbol, Fraction] = {}
    for data in factors:
        for j, moc in data.mocs.items():
            g = GeneratorSymbol(data.index, j)
            factor_mocs[g] = moc
            gammas[g] = moc_transform(moc, "add_identity")
            radius = eventual_domination_radius(gammas[g], 2 * data.weights[j])
            if radius is None:
                raise MocDomainError(f"Γ de {g} no domina 2λ(x) + id dentro de [0, {moc.r_max}]")
            radii[g] = radius
    r_prime = max(radii.values())
    r = max(gamma.right_limit(r_prime) for gamma in gammas.values())
    effective = max(Fraction(budget), r, sigma_seed.max_value)
    if any(gamma.r_max < r for gamma in gammas.values()):
        raise MocDomainError(f"Los MOC no cubren el radio r = {r}")
    logging.info(f"Paso 3: r' = {r_prime}, r = {r}, presupuesto de clausura {effective}")
    tilde = step2_tilde(sigma_seed, gammas, effective, caps)
    y_set = [y for y, value in tilde.table.items() if value <= r]
    seed_values = {y: tilde.table[y] for y in y_set}
    for b in sigma_seed.carrier:
        if b not in tilde.table:
            raise InputError(f"La tabla de λ̃ no alcanza el axioma {b}")
        seed_values[b] = tilde.table[b]
    final_seed = PartialPreNorm(sigma_seed.context, seed_values,
                                [Word((g,)) for g in signature.generators()])
    return FreeProductNorm(
        signature=signature,
        factors=factors,
        factor_mocs=factor_mocs,
        gammas=gammas,
        sigma_seed=sigma_seed,
        sigma=GeneratedNorm(sigma_seed, caps, "sigma"),
        tilde=tilde,
        radii=radii,
        r_prime=r_prime,
        r=r,
        budget=effective,
        y_set=y_set,
        final_seed=final_seed,
        norm=GeneratedNorm(final_seed, caps, "free_product_norm"),
    )


def free_product_norm(factor_seeds: Sequence[PartialPreNorm], budget: Fraction, caps: Caps = Caps(),
                      supplied_mocs: Optional[Sequence[Optional[Mapping[int, Moc]]]] = None) -> FreeProductNorm:
    """
    Construcción completa de la norma del producto libre.

    Args:
        factor_seeds: Normas parciales λ'_i, cada una sobre su grupo libre
        budget: Presupuesto R para la tabla de λ̃
        caps: Topes de exploración
        supplied_mocs: Γ_i^j dados por factor (índice de generador → Moc);
                       None usa los MOC mínimos

    Returns:
        FreeProductNorm: Norma final y artefactos de cada paso
    """
    sigma_seed = step1_merge(factor_seeds, caps)
    supplied_mocs = list(supplied_mocs or [None] * len(factor_seeds))
    workers = min(AppSettings.MAX_CONCURRENT_WORKERS, len(factor_seeds))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(_prepare_factor, i, seed, caps, supplied_mocs[i])
                   for i, seed in enumerate(factor_seeds)]
        factors = [future.result() for future in futures]

    # r solo depende de Γ en [0, 2λ(x)]; después se amplían los dominios
    provisional = _radii_bound(factors)
    domain = max(Fraction(budget), provisional, sigma_seed.max_value)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        factors = list(executor.map(lambda data: _extend_factor_mocs(data, domain), factors))
    logging.info(f"Factores preparados: {len(factors)}, dominio de MOC {domain}")
    return step3_regenerate(factors, sigma_seed, budget, caps)


def _radii_bound(factors: Sequence[FactorData]) -> Fraction:
    """r = max Γ_{i,j}(r') calculado con los MOC sobre [0, 2λ(x)]."""
    gammas, radii = [], []
    for data in factors:
        for j, moc in data.mocs.items():
            gamma = moc_transform(moc, "add_identity")
            gammas.append(gamma)
            radii.append(eventual_domination_radius(gamma, 2 * data.weights[j]))
    if any(radius is None for radius in radii):
        raise MocDomainError("Algún Γ_{i,j} no domina 2λ(x) + id en su dominio")
    r_prime = max(radii)
    return max(gamma.right_limit(r_prime) for gamma in gammas)


def verify_extension(result: FreeProductNorm, radius: Fraction) -> List[Dict[str, Any]]:
    """
    Comparar λ con ν_i en las bolas de factor de radio dado.

    Mira los elementos de la ν_i-bola y los elementos de un solo factor de la
    λ-bola; devuelve cada discrepancia (vacía si λ extiende a cada ν_i).
    """
    radius = Fraction(radius)
    mismatches = []
    for data in result.factors:
        for g, value in data.norm.ball(radius).table.items():
            extended = result.norm(embed_word(g, data.index))
            if extended != value:
                mismatches.append({"factor": data.index, "element": embed_word(g, data.index),
                                   "factor_value": value, "product_value": extended})
    for x, value in result.ball(radius).table.items():
        factor = _factor_of(x)
        if factor is None:
            continue
        own = result.factors[factor].norm.value_within(factor_word(x), radius)
        if own != value:
            mismatches.append({"factor": factor, "element": x, "factor_value": own, "product_value": value})
    if mismatches:
        logging.warning(f"La norma no extiende a los factores: {len(mismatches)} discrepancias")
    return mismatches


def moc_transcript(result: FreeProductNorm) -> List[Dict[str, Any]]:
    """
    Verificar Γ_{i,j} y 2Γ_i^j como MOC de cada x_{i,j} sobre la λ-bola de radio r.
    """
    ball = result.ball(result.r)
    context = result.sigma_seed.context
    entries = []
    for g in result.signature.generators():
        x = Word((g,))
        candidates = (("gamma_ij", result.gammas[g].restrict(result.r)),
                      ("double_gamma", result.factor_mocs[g].scale_shift(2, 0).restrict(result.r)))
        for kind, candidate in candidates:
            verdict = verify_moc(candidate, x, ball, result.norm.value_within, context)
            entries.append({"generator": g, "moc": kind, "ok": verdict.ok,
                            "checked": verdict.checked, "witness": verdict.witness})
    logging.info(f"Transcripción de MOC: {sum(e['ok'] for e in entries)}/{len(entries)} verificados "
                 f"sobre {len(ball)} elementos")
    return entries


def oracle_discrepancies(result: FreeProductNorm, length: int, caps: Caps = Caps()) -> List[Dict[str, Any]]:
    """Elementos liquidados con |x| ≤ L donde la clausura y el oráculo difieren."""
    oracle = MatchOracle(result.signature, result.sigma, result.gammas, length, caps)
    differences = []
    for x, value in result.tilde.table.items():
        if len(x) > length:
            continue
        expected = oracle.table.get(x)
        if expected != value:
            differences.append({"element": x, "closure": value, "oracle": expected})
    if differences:
        logging.warning(f"La clausura difiere del oráculo en {len(differences)} elementos")
    return differences
