"""
Aproximación por Grupos Finitos Normados
========================================

Cadena completa: dado un grupo normado evaluable, un subconjunto finito F y
ε > 0, produce un grupo finito normado H y una ε-homomorfía certificada
φ: F → H cuyo MOC satisface Γ^H_{φ(f)} ≤ 2Γ_f + ε·id en los radios tabulados.

Etapas:
1. Palabras w_f sobre generadores que cubren F y seminorma pullback ρ.
2. Menor etapa n ≥ 3 donde caben las palabras de relación w_{gh}⁻¹·w_g·w_h
   y 1/|C_n| < ε/2, con C_n la bola de palabras de longitud ≤ n.
3. Racionalización de ρ en C_n: σ' con 0 ≤ σ' - ρ ≤ 1/|C_n|.
4. Grupo finito: por la acción sobre una bola de palabras (ruta ball_action)
   o, si el objetivo es finito y ρ tiene núcleo en C_n, como imagen de E_n
   con la norma empujada desde σ' (ruta finite_quotient).
5. Certificado de ε-homomorfía y comparación de MOC.

La extracción por ultraproductos se sustituye por una única etapa finita
suficiente; la traza lo declara.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from config.settings import AppSettings
from groups.caps import Caps
from groups.families import FiniteTableGroup, NormedGroup, subgroup_table, table_normed_group
from groups.finite_approx import finite_approx
from groups.moc import Moc, minimal_moc, moc_transform
from groups.norms import GeneratedNorm, NormBall, PartialPreNorm, PullbackSeminorm, check_partial_norm
from groups.words import FreeProductSignature, GeneratorSymbol, Word, ball_size, enumerate_ball, multiply, reduce
from utils.error_handler import CapExceededError, CertificateError, InputError
from utils.rational_utils import RationalUtils

ULTRAPRODUCT_NOTE = ("la extracción por ultraproductos se reemplaza por la composición directa "
                     "en una única etapa finita suficiente")


@dataclass
class EpsHomCertificate:
    """
    Certificado de ε-homomorfía.

    Attributes:
        phi: f → elemento de H
        epsilon: ε
        violations: Condiciones incumplidas (vacía si es válido)
        relation_defect: max ρ(φ(gh)⁻¹·φ(g)·φ(h))
        norm_defect: max |ρ(φ(g)) - λ(g)|
        moc_report: Comparación Γ^H_{φ(f)} contra 2Γ_f + ε·id por f
    """

    phi: Dict[Hashable, Hashable]
    epsilon: Fraction
    violations: List[Dict[str, Any]] = field(default_factory=list)
    relation_defect: Fraction = Fraction(0)
    norm_defect: Fraction = Fraction(0)
    checked: int = 0
    moc_report: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and all(entry["ok"] for entry in self.moc_report)


def eps_hom_check(phi: Mapping[Hashable, Hashable], source: NormedGroup, subset: Sequence[Hashable],
                  target: NormedGroup, epsilon: Fraction) -> EpsHomCertificate:
    """
    Comprobar las dos condiciones de ε-homomorfía con desigualdades estrictas.

    1. ρ(φ(gh)⁻¹·φ(g)·φ(h)) < ε para g, h ∈ F con gh ∈ F
    2. |ρ(φ(g)) - λ(g)| < ε para g ∈ F

    Los fallos se informan en el certificado, no se lanzan.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InputError("ε debe ser positivo")
    missing = [g for g in subset if g not in phi]
    if missing:
        raise InputError(f"φ no está definida en: {missing}")
    members = set(subset)
    src, dst = source.context, target.context
    certificate = EpsHomCertificate(dict(phi), epsilon)
    for g in subset:
        for h in subset:
            gh = src.multiply(g, h)
            if gh not in members:
                continue
            certificate.checked += 1
            defect_element = dst.multiply(dst.multiply(dst.invert(phi[gh]), phi[g]), phi[h])
            defect = Fraction(target.norm(defect_element))
            certificate.relation_defect = max(certificate.relation_defect, defect)
            if defect >= epsilon:
                certificate.violations.append({"condition": "relation", "g": g, "h": h, "defect": defect})
    for g in subset:
        certificate.checked += 1
        defect = abs(Fraction(target.norm(phi[g])) - Fraction(source.norm(g)))
        certificate.norm_defect = max(certificate.norm_defect, defect)
        if defect >= epsilon:
            certificate.violations.append({"condition": "norm", "g": g, "defect": defect})
    logging.info(f"ε-homomorfía (ε = {epsilon}): {certificate.checked} condiciones, "
                 f"{len(certificate.violations)} fallos")
    return certificate


@dataclass
class RationalizedSeed:
    """
    Norma parcial racional σ' sobre C con σ' ≥ ρ y σ' - ρ ≤ 1/|C|.

    Attributes:
        words: C, en orden canónico
        values: σ' por palabra
        rho: ρ por palabra
        c_min: min(1/|C|, menor salto entre valores distintos de ρ)
        classes: Valores distintos de ρ (palabras no triviales), decrecientes
        increments: δ por clase
    """

    words: List[Word]
    values: Dict[Word, Fraction]
    rho: Dict[Word, Fraction]
    c_min: Fraction
    classes: List[Fraction]
    increments: List[Fraction]

    @property
    def gap_bound(self) -> Fraction:
        return Fraction(1, len(self.words))

    def seed(self, signature: FreeProductSignature) -> PartialPreNorm:
        return PartialPreNorm.on_words(signature, self.values)


def rationalize(words: Sequence[Word], rho: Mapping[Word, Fraction]) -> RationalizedSeed:
    """
    Subir ρ a una norma parcial racional con incrementos por clase.

    Los valores distintos de ρ en palabras no triviales forman las clases
    v_1 > … > v_K; la clase k recibe δ_k = C_min·k/(2K+2), de modo que los
    incrementos crecen al decrecer el valor, son todos menores que C_min y los
    empates reciben el mismo δ. La identidad queda en 0.

    Raises:
        InputError: Si ρ no es simétrica, C no es simétrico o falta la identidad
    """
    words = sorted(dict.fromkeys(words), key=Word.sort_key)
    members = set(words)
    values = {w: Fraction(rho[w]) for w in words}
    if Word() not in members or values[Word()] != 0:
        raise InputError("C debe contener la identidad con ρ = 0")
    for w in words:
        if w.inverse() not in members:
            raise InputError(f"C no es simétrico: falta {w.inverse()}")
        if values[w.inverse()] != values[w]:
            raise InputError(f"ρ no es simétrica en {w}")
        if values[w] < 0:
            raise InputError(f"ρ negativa en {w}")
    classes = sorted({values[w] for w in words if not w.is_identity}, reverse=True)
    gaps = RationalUtils.min_gap(set(values.values()))
    c_min = Fraction(1, len(words)) if gaps is None else min(Fraction(1, len(words)), gaps)
    size = len(classes)
    increments = [c_min * k / (2 * size + 2) for k in range(1, size + 1)]
    position = {v: k for k, v in enumerate(classes)}
    sigma = {w: (Fraction(0) if w.is_identity else values[w] + increments[position[values[w]]]) for w in words}
    logging.debug(f"Racionalización: |C| = {len(words)}, K = {size}, C_min = {c_min}")
    return RationalizedSeed(words, sigma, values, c_min, classes, increments)


@dataclass
class Approximation:
    """Resultado de approximate: H, φ, certificado y traza de procedencia."""

    route: str
    group: NormedGroup
    phi: Dict[Hashable, Hashable]
    certificate: EpsHomCertificate
    trace: List[Dict[str, Any]]
    words: Dict[Hashable, Word] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)


class _Presentation:
    """Palabras w_f para los elementos de F y evaluación de palabras en el objetivo."""

    def __init__(self, target: NormedGroup, subset: Sequence[Hashable], caps: Caps):
        self.target = target
        context = target.context
        self.identity = context.identity
        if target.kind == "free_fg_norm":
            self.signature = context.signature
            self.words = {f: context.signature.check(f) for f in subset}
            self.pullback = None
            return
        if target.kind == "int_lattice":
            gens = [tuple(1 if i == k else 0 for i in range(context.rank)) for k in range(context.rank)]
        elif target.kind == "finite_table":
            gens = []
            for f in subset:
                if f != self.identity and f not in gens and context.invert(f) not in gens:
                    gens.append(f)
        else:
            raise InputError(f"Tipo de objetivo no soportado: {target.kind!r}")
        self.gens = gens
        self.words = {}
        if gens:
            self.pullback = PullbackSeminorm(target, gens, caps)
            self.signature = self.pullback.signature
        else:
            self.pullback = None
            self.signature = None
        for f in subset:
            self.words[f] = self._word_for(f)

    def _word_for(self, f: Hashable) -> Word:
        if f == self.identity:
            return Word()
        if self.target.kind == "int_lattice":
            letters = []
            for k, exponent in enumerate(f):
                letter = GeneratorSymbol(0, k + 1, 1 if exponent > 0 else -1)
                letters.extend([letter] * abs(exponent))
            return reduce(letters)
        index = self.gens.index(f) + 1 if f in self.gens else self.gens.index(self.target.context.invert(f)) + 1
        return Word((GeneratorSymbol(0, index, 1 if f in self.gens else -1),))

    def evaluate(self, word: Word) -> Hashable:
        return word if self.pullback is None else self.pullback.evaluate(word)

    def rho(self, word: Word) -> Fraction:
        return Fraction(self.target.norm(self.evaluate(word)))


def _relation_words(presentation: _Presentation, subset: Sequence[Hashable]) -> List[Tuple[Hashable, Hashable, Word]]:
    """(g, h, w_{gh}⁻¹·w_g·w_h) para g, h ∈ F con gh ∈ F."""
    context = presentation.target.context
    members = set(subset)
    relations = []
    for g in subset:
        for h in subset:
            gh = context.multiply(g, h)
            if gh in members:
                words = presentation.words
                relations.append((g, h, multiply(multiply(words[gh].inverse(), words[g]), words[h])))
    return relations


def choose_stage(signature: FreeProductSignature, relations: Sequence[Word], epsilon: Fraction) -> int:
    """Menor n ≥ 3 con las palabras de relación en C_n y 1/|C_n| < ε/2."""
    needed = max([AppSettings.MIN_PIPELINE_STAGE] + [len(w) for w in relations])
    n = needed
    while Fraction(1, ball_size(signature, n)) >= epsilon / 2:
        n += 1
        if n > AppSettings.MAX_PIPELINE_STAGE:
            raise CapExceededError("approximate", AppSettings.MAX_PIPELINE_STAGE, n, "etapa n")
    return n


def target_ball(target: NormedGroup, radius: Fraction, caps: Caps) -> Tuple[NormBall, Any]:
    """Bola del objetivo y su oráculo de norma (elemento, presupuesto) → valor."""
    context = target.context
    if target.kind == "free_fg_norm":
        norm: GeneratedNorm = target.metadata["norm"]
        return norm.ball(radius), norm.value_within
    if target.kind == "int_lattice":
        weights = target.metadata["weights"]
        seed = {}
        for k, w in enumerate(weights):
            unit = tuple(1 if i == k else 0 for i in range(context.rank))
            seed[unit] = w
            seed[context.invert(unit)] = w
        norm = GeneratedNorm(PartialPreNorm(context, seed), caps, "target_ball")
        return norm.ball(radius), norm.value_within
    table = {x: Fraction(target.norm(x)) for x in target.elements if target.norm(x) <= radius}
    return NormBall(Fraction(radius), table, context), lambda x, budget: Fraction(target.norm(x))


def _moc_comparison(f: Hashable, image: Hashable, own: Moc, finite: Moc, radii: Sequence[Fraction],
                    epsilon: Fraction) -> Dict[str, Any]:
    bound = moc_transform(own, "scale_shift", epsilon=epsilon)
    limit = min(bound.r_max, finite.r_max)
    tabulated = sorted({r for r in list(radii) + bound.breakpoints() + finite.breakpoints() if r <= limit})
    exceeded = finite.exceedances(bound, tabulated)
    return {"element": f, "image": image, "radii": tabulated, "exceeded": exceeded, "ok": not exceeded,
            "finite_moc": finite, "bound": bound}


def approximate(target: NormedGroup, subset: Sequence[Hashable], epsilon: Fraction,
                caps: Caps = Caps(), route: Optional[str] = None) -> Approximation:
    """
    ε-homomorfía certificada desde F hacia un grupo finito normado.

    Args:
        target: Grupo normado evaluable ("finite_table", "int_lattice", "free_fg_norm")
        subset: F, subconjunto finito del objetivo
        epsilon: ε > 0
        caps: Topes de exploración
        route: Fuerza "ball_action" o "finite_quotient"; None elige según el núcleo

    Raises:
        CapExceededError: Si la etapa o las bolas superan los topes
        InputError: Entradas inválidas
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InputError("ε debe ser positivo")
    subset = list(dict.fromkeys(subset))
    if not subset:
        raise InputError("F no puede ser vacío")
    trace: List[Dict[str, Any]] = [{"stage": "note", "detail": ULTRAPRODUCT_NOTE}]
    presentation = _Presentation(target, subset, caps)
    trace.append({"stage": "pullback", "generators": len(presentation.gens) if presentation.pullback else None,
                  "words": {f: w for f, w in presentation.words.items()}})

    if presentation.signature is None:
        return _trivial_approximation(target, subset, epsilon, trace)

    relations = _relation_words(presentation, subset)
    n = choose_stage(presentation.signature, [w for _, _, w in relations], epsilon)
    ball = enumerate_ball(presentation.signature, n, caps)
    rho = {w: presentation.rho(w) for w in ball}
    seed = rationalize(ball, rho)
    trace.append({"stage": "stage", "n": n, "ball_size": len(ball), "gap_bound": seed.gap_bound})
    trace.append({"stage": "rationalize", "classes": seed.classes, "increments": seed.increments,
                  "c_min": seed.c_min})

    images = {presentation.evaluate(w) for w in ball}
    kernel = len(images) < len(ball)
    if route is None:
        route = "finite_quotient" if kernel and target.kind == "finite_table" else "ball_action"
    if route == "finite_quotient" and target.kind != "finite_table":
        raise InputError("La ruta finite_quotient requiere un objetivo finito en forma de tabla")
    if route not in ("ball_action", "finite_quotient"):
        raise InputError(f"Ruta desconocida: {route!r}")
    trace.append({"stage": "route", "route": route, "kernel_on_ball": kernel})
    logging.info(f"approximate: n = {n}, |C_n| = {len(ball)}, ruta {route}")

    if route == "finite_quotient":
        result = _finite_quotient(target, subset, epsilon, presentation, seed, caps, trace)
    else:
        result = _ball_action(target, subset, epsilon, presentation, seed, relations, caps, trace)
    result.words = dict(presentation.words)
    return result


def _trivial_approximation(target: NormedGroup, subset, epsilon, trace) -> Approximation:
    trivial = FiniteTableGroup(["1"], [[0]], 0)
    group = table_normed_group(trivial, {0: Fraction(0)})
    phi = {f: 0 for f in subset}
    certificate = eps_hom_check(phi, target, subset, group, epsilon)
    trace.append({"stage": "route", "route": "trivial"})
    return Approximation("trivial", group, phi, certificate, trace)


def _finite_quotient(target: NormedGroup, subset, epsilon, presentation: _Presentation,
                     seed: RationalizedSeed, caps: Caps, trace) -> Approximation:
    """H = imagen de E_n en el objetivo, con la norma generada por σ' empujada."""
    context: FiniteTableGroup = target.context
    pushed: Dict[int, Fraction] = {}
    for w, value in seed.values.items():
        g = presentation.evaluate(w)
        if g != context.identity and value < pushed.get(g, value + 1):
            pushed[g] = value
    norm = GeneratedNorm(PartialPreNorm(context, pushed), caps, "finite_quotient")
    reach = max(pushed.values()) * context.order
    members = norm.ball(reach).table
    subgroup, position = subgroup_table(context, list(members))
    values = {position[g]: v for g, v in members.items()}
    group = table_normed_group(subgroup, values)
    phi = {f: position[f] for f in subset}
    trace.append({"stage": "finite_quotient", "order": subgroup.order, "seed_size": len(pushed)})

    certificate = eps_hom_check(phi, target, subset, group, epsilon)
    domain = max(max(values.values()), max(Fraction(target.norm(x)) for x in target.elements))
    own_ball, own_oracle = target_ball(target, domain, caps)
    finite_ball = NormBall(domain, dict(values), subgroup)
    for f in subset:
        own = minimal_moc(own_ball, f, own_oracle, context)
        finite = minimal_moc(finite_ball, phi[f], lambda x, budget: values[x], subgroup)
        certificate.moc_report.append(_moc_comparison(f, phi[f], own, finite, finite_ball.values(), epsilon))
    _log_certificate(certificate)
    return Approximation("finite_quotient", group, phi, certificate, trace,
                         details={"subgroup": subgroup, "values": values})


def _ball_action(target: NormedGroup, subset, epsilon, presentation: _Presentation,
                 seed: RationalizedSeed, relations, caps: Caps, trace) -> Approximation:
    """Aproximación finita de (E_n, σ_n) por la acción sobre una bola de palabras."""
    signature = presentation.signature
    partial = seed.seed(signature)
    verdict = check_partial_norm(partial, caps)
    trace.append({"stage": "partial_norm", "ok": verdict.ok, "max_factors": verdict.max_factors})
    if not verdict.ok:
        raise CertificateError(f"σ' no es norma parcial en C_n: {verdict.counterexample}")
    sigma_n = GeneratedNorm(partial, caps, "sigma_n")
    requested = list(dict.fromkeys(
        [Word((g,)) for g in signature.generators()]
        + [w for w in presentation.words.values()]
        + [w for _, _, w in relations]))
    requested += [w.inverse() for w in requested if w.inverse() not in requested]
    moc_requests = []
    for f in subset:
        w = presentation.words[f]
        if not w.is_identity:
            local = sigma_n.ball(2 * sigma_n(w))
            moc_requests.append((w, minimal_moc(local, w, sigma_n.value_within, sigma_n.context)))
    approximation = finite_approx(sigma_n, requested, moc_requests, caps)
    trace.append({"stage": "finite_approx", **{k: v for k, v in approximation.parameters.items()
                                                if k != "moc_radii"}, "ok": approximation.ok})
    relation_values = [{"g": g, "h": h, "word": w, "sigma": sigma_n(w)} for g, h, w in relations]
    trace.append({"stage": "relation_defects", "defects": relation_values, "bound": seed.gap_bound})

    sigma = approximation.sigma
    group = NormedGroup(approximation.action.group, sigma, None, "permutation",
                        {"action": approximation.action, "norm": sigma})
    phi = {f: approximation.action.evaluate(presentation.words[f]) for f in subset}
    certificate = eps_hom_check(phi, target, subset, group, epsilon)
    domain = max([Fraction(AppSettings.DEFAULT_MOC_RADIUS)] + [Fraction(target.norm(f)) for f in subset])
    own_ball, own_oracle = target_ball(target, domain, caps)
    finite_ball = sigma.ball(domain)
    for f in subset:
        own = minimal_moc(own_ball, f, own_oracle, target.context)
        finite = minimal_moc(finite_ball, phi[f], sigma.value_within, sigma.context)
        certificate.moc_report.append(_moc_comparison(f, phi[f], own, finite, finite_ball.values(), epsilon))
    _log_certificate(certificate)
    return Approximation("ball_action", group, phi, certificate, trace,
                         details={"finite_approx": approximation})


def _log_certificate(certificate: EpsHomCertificate) -> None:
    if certificate.ok:
        logging.info(f"Certificado válido: defecto de relación {certificate.relation_defect}, "
                     f"defecto de norma {certificate.norm_defect}")
    else:
        logging.warning(f"Certificado inválido: {len(certificate.violations)} violaciones")
