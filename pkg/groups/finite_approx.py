"""
Aproximación Finita de Grupos Libres Normados
=============================================

Dado un grupo libre (o producto libre) con una norma finitamente generada λ,
construye un grupo finito H de permutaciones con una norma σ y un
monomorfismo parcial φ: A ↪ H que es isometría y conserva los MOC pedidos.

H actúa sobre la bola de palabras B_N: cada generador s envía v a s·v cuando
|s·v| ≤ N, y los vértices sin imagen se completan en orden canónico con los
vértices sin preimagen. Así Φ(w)(1) = w para toda |w| ≤ N, lo que hace a Φ
inyectivo en B_N.

Funcionalidades principales:
- Acción sobre la bola B_N y homomorfismo Φ: F → Sym(B_N)
- Elección de N = K·⌈M/m⌉ sobre el conjunto ampliado por las peticiones de MOC
- σ en H por Dijkstra desde la semilla σ'(φ(x)) = λ(x)
- Informe de isometría, inyectividad, multiplicatividad y MOC
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from groups.caps import Caps
from groups.families import Permutation, PermutationGroup
from groups.moc import Moc, eventual_domination_radius, minimal_moc, verify_moc
from groups.norms import GeneratedNorm, PartialPreNorm
from groups.words import FreeProductSignature, GeneratorSymbol, Word, enumerate_ball, multiply
from utils.error_handler import InputError
from utils.rational_utils import RationalUtils


class BallAction:
    """
    Acción por permutaciones de F sobre los vértices de B_N.

    Attributes:
        vertices (list): Palabras de longitud ≤ N en orden canónico
        generators (dict): Generador positivo → permutación de los índices
    """

    def __init__(self, signature: FreeProductSignature, length: int, caps: Caps = Caps()):
        if length < 1:
            raise InputError("N debe ser al menos 1")
        self.signature = signature
        self.length = length
        self.vertices = enumerate_ball(signature, length, caps)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.group = PermutationGroup(len(self.vertices))
        self.generators: Dict[GeneratorSymbol, Permutation] = {
            g: self._letter_permutation(g) for g in signature.generators()
        }
        self._inverses = {g: p.inverse() for g, p in self.generators.items()}
        logging.info(f"Acción sobre B_{length}: {len(self.vertices)} vértices, "
                     f"{len(self.generators)} generadores")

    def _letter_permutation(self, letter: GeneratorSymbol) -> Permutation:
        size = len(self.vertices)
        images = np.full(size, -1, dtype=np.int32)
        hit = np.zeros(size, dtype=bool)
        prefix = Word((letter,))
        for i, v in enumerate(self.vertices):
            j = self.index.get(multiply(prefix, v))
            if j is not None:
                images[i] = j
                hit[j] = True
        # los vértices sin imagen se completan con los que no tienen preimagen
        images[np.flatnonzero(images < 0)] = np.flatnonzero(~hit)
        return Permutation(images)

    def letter(self, symbol: GeneratorSymbol) -> Permutation:
        positive = symbol.positive
        return self.generators[positive] if symbol.sign > 0 else self._inverses[positive]

    def evaluate(self, word: Word) -> Permutation:
        """Φ(w) = Φ(w_1)·…·Φ(w_k)."""
        result = self.group.identity
        for symbol in self.signature.check(word).letters:
            result = result * self.letter(symbol)
        return result

    def vertex_image(self, word: Word, vertex: Word = Word()) -> Word:
        return self.vertices[self.evaluate(word)(self.index[vertex])]


def ball_action_hom(signature: FreeProductSignature, length: int, caps: Caps = Caps()) -> BallAction:
    return BallAction(signature, length, caps)


@dataclass
class PartialMonomorphism:
    """Restricción de Φ a un conjunto finito de palabras."""

    domain: List[Word]
    images: Dict[Word, Permutation]

    def __call__(self, word: Word) -> Permutation:
        if word not in self.images:
            raise InputError(f"{word} no está en el dominio de φ")
        return self.images[word]

    def is_injective(self) -> bool:
        return len(set(self.images.values())) == len(self.images)

    def multiplicative_violations(self) -> Tuple[int, List[Tuple[Word, Word]]]:
        """Ternas x, y, xy del dominio: (comprobadas, fallos de φ(xy) = φ(x)φ(y))."""
        checked, failures = 0, []
        for x in self.domain:
            for y in self.domain:
                xy = multiply(x, y)
                if xy in self.images:
                    checked += 1
                    if self.images[xy] != self.images[x] * self.images[y]:
                        failures.append((x, y))
        return checked, failures

    def inverse_violations(self) -> List[Word]:
        return [x for x in self.domain
                if x.inverse() in self.images and self.images[x.inverse()] != self.images[x].inverse()]


@dataclass
class FiniteApproximation:
    """
    Resultado de finite_approx.

    Attributes:
        action: Acción sobre B_N que define H
        phi: Monomorfismo parcial sobre el dominio pedido
        seed: σ' sobre φ[A_eff]
        sigma: Norma generada en H
        parameters: M, m, K, ⌈M/m⌉, N y radios por petición de MOC
        isometry: Comparación σ(φ(x)) contra λ(x)
        moc_report: Verificación de cada Γ_x para φ(x)
    """

    action: BallAction
    phi: PartialMonomorphism
    seed: PartialPreNorm
    sigma: GeneratedNorm
    parameters: Dict[str, Any]
    isometry: List[Dict[str, Any]] = field(default_factory=list)
    moc_report: List[Dict[str, Any]] = field(default_factory=list)
    multiplicative: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (all(entry["ok"] for entry in self.isometry)
                and all(entry["ok"] for entry in self.moc_report)
                and not self.multiplicative.get("failures")
                and self.multiplicative.get("injective", True))


def default_moc_requests(norm: GeneratedNorm) -> List[Tuple[Word, Moc]]:
    """MOC mínimos de los generadores sobre [0, 2λ(x)]."""
    context = norm.context
    requests = []
    for g in context.signature.generators():
        x = Word((g,))
        ball = norm.ball(2 * norm(x))
        requests.append((x, minimal_moc(ball, x, norm.value_within, context)))
    return requests


def finite_approx(norm: GeneratedNorm, requested: Sequence[Word],
                  moc_requests: Optional[Sequence[Tuple[Word, Moc]]] = None,
                  caps: Caps = Caps()) -> FiniteApproximation:
    """
    Grupo finito normado H con una isometría parcial φ desde el dominio pedido.

    Args:
        norm: Norma finitamente generada λ sobre palabras
        requested: Dominio pedido A_req (debe contener a los generadores)
        moc_requests: Pares (x, Γ_x) cuyo MOC debe conservarse
        caps: Topes de exploración (vértices de B_N y bolas en H)

    Raises:
        InputError: Si A_req no contiene a los generadores
        CapExceededError: Si B_N o la exploración de σ superan los topes
    """
    context = norm.context
    signature = context.signature
    requested = list(dict.fromkeys(signature.check(x) for x in requested))
    missing = [str(g) for g in signature.generators() if Word((g,)) not in requested]
    if missing:
        raise InputError(f"El dominio pedido no contiene a los generadores: {missing}")
    moc_requests = list(moc_requests or [])

    # dominio ampliado: A_req, la semilla y las λ-bolas de radio Γ_x(r'_x)
    extended: Dict[Word, Fraction] = {}
    for x in requested + norm.seed.carrier:
        extended[x] = norm(x)
    radii = []
    for x, gamma in moc_requests:
        weight = norm(x)
        r_prime = eventual_domination_radius(gamma, 2 * weight)
        dominated = r_prime is not None
        if not dominated:
            # sin dominación solo se certifica el dominio [0, r_max]
            r_prime = gamma.r_max
        radius = gamma.right_limit(r_prime)
        radii.append({"element": x, "r_prime": r_prime, "radius": radius, "dominated": dominated})
        extended.update(norm.ball(radius).table)
    for x in list(extended):
        extended.setdefault(x.inverse(), extended[x])

    top = max(extended.values())
    bottom = min(v for v in extended.values() if v > 0)
    longest = max(len(x) for x in extended)
    factors = RationalUtils.ceil_ratio(top, bottom)
    length = max(1, longest * factors)
    logging.info(f"finite_approx: |A| = {len(extended)}, M = {top}, m = {bottom}, K = {longest}, N = {length}")

    action = ball_action_hom(signature, length, caps)
    images = {x: action.evaluate(x) for x in sorted(extended, key=Word.sort_key)}
    seed = PartialPreNorm(action.group, {images[x]: v for x, v in extended.items()})
    sigma = GeneratedNorm(seed, caps, "finite_approx")
    phi = PartialMonomorphism(requested, {x: images[x] for x in requested})

    result = FiniteApproximation(action, phi, seed, sigma, {
        "M": top, "m": bottom, "K": longest, "factors": factors, "N": length,
        "vertices": len(action.vertices), "moc_radii": radii,
    })
    for x in requested:
        expected = extended[x]
        value = sigma.value_within(images[x], expected)
        result.isometry.append({"element": x, "lambda": expected, "sigma": value, "ok": value == expected})
    checked, failures = phi.multiplicative_violations()
    result.multiplicative = {"checked": checked, "failures": failures,
                             "inverse_failures": phi.inverse_violations(), "injective": phi.is_injective()}
    for x, gamma in moc_requests:
        # Γ_x - id puede caer por debajo de 2λ(x) tras r': se recorre todo [0, r_max]
        ball = sigma.ball(gamma.r_max)
        verdict = verify_moc(gamma, images[x], ball, sigma.value_within, action.group)
        result.moc_report.append({"element": x, "radius": ball.radius, "checked": verdict.checked,
                                  "ok": verdict.ok, "witness": verdict.witness})
    if not result.ok:
        logging.warning("finite_approx: el informe contiene fallos de certificado")
    return result
