"""
Módulos de Continuidad
=====================

Un módulo de continuidad (MOC) de x es una función Γ con Γ(0) = 0, no
decreciente, Γ(r) ≥ r, tal que λ(x^ε·g·x^{-ε}) ≤ Γ(λ(g)) para ε = ±1.

Los MOC se guardan sobre un dominio acotado [0, r_max] como funciones
lineales a trozos, continuas por la derecha: cada tramo (r_k, v_k, s_k) vale
v_k + s_k·(r - r_k) en [r_k, r_{k+1}). Γ(0) = 0 siempre; el primer tramo da el
límite por la derecha en 0. Con esta forma son exactas las operaciones
Γ + id, 2Γ, 2Γ + ε·id y el máximo puntual, y las funciones escalón de los MOC
mínimos son el caso de pendientes nulas unido con la diagonal.

Funcionalidades principales:
- MOC mínimo de un elemento a partir de una bola de norma
- Verificación de un MOC candidato con testigo
- Transformaciones exactas (doble, + id, máximo, 2Γ + ε·id)
- Radio mínimo desde el que Γ domina c + id
- Comparación puntual exacta entre MOC
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from groups.norms import NormBall
from utils.error_handler import CapExceededError, InputError, MocDomainError

NormOracle = Callable[[Hashable, Optional[Fraction]], Optional[Fraction]]


@dataclass(frozen=True)
class Segment:
    """Tramo lineal: vale value + slope·(r - start) desde start."""

    start: Fraction
    value: Fraction
    slope: Fraction


@dataclass(frozen=True)
class Moc:
    """
    MOC lineal a trozos sobre [0, r_max], en forma canónica.

    Construir siempre con Moc.build (valida y normaliza los tramos).
    """

    r_max: Fraction
    segments: Tuple[Segment, ...]

    @classmethod
    def build(cls, r_max: Fraction, segments: Sequence[Tuple[Fraction, Fraction, Fraction]]) -> Moc:
        """
        Validar y normalizar tramos (start, value, slope).

        Raises:
            InputError: Si los tramos no definen un MOC (decrece, queda por
                        debajo de la diagonal o no empieza en 0)
        """
        r_max = Fraction(r_max)
        if r_max < 0:
            raise InputError("r_max debe ser no negativo")
        parts = [Segment(Fraction(a), Fraction(v), Fraction(s)) for a, v, s in segments]
        if not parts or parts[0].start != 0:
            raise InputError("El primer tramo de un MOC debe empezar en 0")
        for left, right in zip(parts, parts[1:]):
            if right.start <= left.start:
                raise InputError("Los tramos deben tener inicios estrictamente crecientes")
        parts = [p for p in parts if p.start <= r_max]
        ends = [p.start for p in parts[1:]] + [r_max]
        for part, end in zip(parts, ends):
            if part.slope < 0 or part.value < 0:
                raise InputError(f"Tramo decreciente o negativo en r = {part.start}")
            if part.value < part.start or part.value + part.slope * (end - part.start) < end:
                raise InputError(f"El MOC queda por debajo de la diagonal en [{part.start}, {end}]")
        for left, right in zip(parts, parts[1:]):
            if right.value < left.value + left.slope * (right.start - left.start):
                raise InputError(f"El MOC decrece en r = {right.start}")
        return cls(r_max, tuple(_normalize(parts)))

    @classmethod
    def identity(cls, r_max: Fraction) -> Moc:
        """Γ(r) = r."""
        return cls.build(r_max, [(0, 0, 1)])

    @classmethod
    def affine(cls, r_max: Fraction, offset: Fraction, slope: Fraction = Fraction(1)) -> Moc:
        """Γ(0) = 0 y Γ(r) = offset + slope·r para r > 0 (por ejemplo 2λ(x) + id)."""
        return cls.build(r_max, [(0, offset, slope)])

    @classmethod
    def from_steps(cls, r_max: Fraction, steps: Sequence[Tuple[Fraction, Fraction]]) -> Moc:
        """
        Función escalón unida con la diagonal: Γ(r) = max(r, max{v_k : r_k ≤ r}).

        Los escalones se acumulan con máximo corrido, de modo que el resultado
        es no decreciente aunque la lista no lo sea.
        """
        r_max = Fraction(r_max)
        running = Fraction(0)
        collapsed: Dict[Fraction, Fraction] = {Fraction(0): Fraction(0)}
        for r, v in sorted((Fraction(r), Fraction(v)) for r, v in steps):
            if r < 0:
                raise InputError("Los escalones deben estar en [0, r_max]")
            if r > r_max:
                continue
            running = max(running, v)
            collapsed[r] = running
        step = cls(r_max, tuple(Segment(r, v, Fraction(0)) for r, v in sorted(collapsed.items())))
        return pointwise_max(step, cls.identity(r_max), check=False)

    def __call__(self, r: Fraction) -> Fraction:
        r = Fraction(r)
        if r < 0 or r > self.r_max:
            raise MocDomainError(f"Γ evaluado en {r}, fuera de [0, {self.r_max}]")
        if r == 0:
            return Fraction(0)
        part = self._segment_at(r)
        return part.value + part.slope * (r - part.start)

    def right_limit(self, r: Fraction) -> Fraction:
        """Γ(r⁺); coincide con Γ(r) salvo en 0, donde da el valor del primer tramo."""
        r = Fraction(r)
        if r < 0 or r > self.r_max:
            raise MocDomainError(f"Γ evaluado en {r}, fuera de [0, {self.r_max}]")
        part = self._segment_at(r)
        return part.value + part.slope * (r - part.start)

    def _segment_at(self, r: Fraction) -> Segment:
        chosen = self.segments[0]
        for part in self.segments:
            if part.start <= r:
                chosen = part
            else:
                break
        return chosen

    def breakpoints(self) -> List[Fraction]:
        return [part.start for part in self.segments]

    def restrict(self, r_max: Fraction) -> Moc:
        """El mismo MOC sobre un dominio menor [0, r_max]."""
        r_max = Fraction(r_max)
        if r_max > self.r_max:
            raise MocDomainError(f"No se puede extender el dominio de {self.r_max} a {r_max}")
        return Moc(r_max, tuple(p for p in self.segments if p.start <= r_max))

    def scale_shift(self, scale: Fraction, shift: Fraction) -> Moc:
        """scale·Γ + shift·id."""
        scale, shift = Fraction(scale), Fraction(shift)
        if scale < 1 or shift < 0:
            raise InputError("scale_shift requiere scale ≥ 1 y shift ≥ 0")
        return Moc(self.r_max, tuple(_normalize([
            Segment(p.start, scale * p.value + shift * p.start, scale * p.slope + shift) for p in self.segments
        ])))

    def exceedances(self, other: Moc, radii: Sequence[Fraction]) -> List[Fraction]:
        """Radios r (dentro de ambos dominios) con self(r) > other(r)."""
        limit = min(self.r_max, other.r_max)
        return [r for r in radii if 0 <= r <= limit and self(r) > other(r)]

    def is_identity(self) -> bool:
        return self == Moc.identity(self.r_max)


def _normalize(parts: Sequence[Segment]) -> List[Segment]:
    """Funde tramos consecutivos que continúan la misma recta."""
    merged: List[Segment] = []
    for part in parts:
        if merged:
            last = merged[-1]
            if last.slope == part.slope and last.value + last.slope * (part.start - last.start) == part.value:
                continue
        merged.append(part)
    return merged


def pointwise_max(first: Moc, second: Moc, check: bool = True) -> Moc:
    """
    Máximo puntual exacto de dos MOC con el mismo dominio.

    En cada intervalo común ambos son rectas; si se cruzan en su interior
    se parte el intervalo en el punto de cruce (racional).
    """
    if first.r_max != second.r_max:
        raise MocDomainError(f"Dominios distintos: {first.r_max} y {second.r_max}")
    r_max = first.r_max
    starts = sorted(set(first.breakpoints()) | set(second.breakpoints()))
    ends = starts[1:] + [r_max]
    result: List[Segment] = []
    for start, end in zip(starts, ends):
        a, b = first._segment_at(start), second._segment_at(start)
        pa, pb = a.value + a.slope * (start - a.start), b.value + b.slope * (start - b.start)
        pieces = [(start, pa, a.slope, pb, b.slope)]
        if a.slope != b.slope:
            crossing = start + (pb - pa) / (a.slope - b.slope)
            if start < crossing < end:
                qa, qb = pa + a.slope * (crossing - start), pb + b.slope * (crossing - start)
                pieces.append((crossing, qa, a.slope, qb, b.slope))
        for piece_start, va, sa, vb, sb in pieces:
            if va > vb or (va == vb and sa >= sb):
                result.append(Segment(piece_start, va, sa))
            else:
                result.append(Segment(piece_start, vb, sb))
    moc = Moc(r_max, tuple(_normalize(result)))
    return Moc.build(r_max, [(p.start, p.value, p.slope) for p in moc.segments]) if check else moc


def moc_transform(moc: Moc, mode: str, other: Optional[Moc] = None,
                  epsilon: Optional[Fraction] = None) -> Moc:
    """
    Transformaciones exactas de un MOC.

    Modos:
    - double: 2Γ
    - add_identity: Γ + id
    - pointwise_max: max(Γ, other)
    - scale_shift: 2Γ + ε·id

    Raises:
        MocDomainError: Si los dominios no coinciden (pointwise_max)
        InputError: Modo desconocido o parámetros ausentes
    """
    if mode == "double":
        return moc.scale_shift(2, 0)
    if mode == "add_identity":
        return moc.scale_shift(1, 1)
    if mode == "pointwise_max":
        if other is None:
            raise InputError("pointwise_max necesita un segundo MOC")
        return pointwise_max(moc, other)
    if mode == "scale_shift":
        if epsilon is None or epsilon < 0:
            raise InputError("scale_shift necesita ε ≥ 0")
        return moc.scale_shift(2, epsilon)
    raise InputError(f"Modo de transformación desconocido: {mode!r}")


def eventual_domination_radius(moc: Moc, c: Fraction) -> Optional[Fraction]:
    """
    Mínimo r ∈ [0, r_max] con Γ(r) ≥ c + r, o None si no existe.

    En cada tramo g(r) = Γ(r) - r - c es afín, así que el primer punto donde
    g ≥ 0 se obtiene en forma cerrada. En el primer tramo, abierto en 0, se
    devuelve el ínfimo; en ese caso el valor útil es Γ.right_limit(r), no Γ(r).

    El radio es el primero en que se alcanza la cota, no uno a partir del
    cual se mantiene: Γ(r) - r puede volver a caer por debajo de c.
    """
    c = Fraction(c)
    if c < 0:
        raise InputError("c debe ser no negativo")
    if c == 0:
        return Fraction(0)
    parts = moc.segments
    ends = [p.start for p in parts[1:]] + [moc.r_max]
    for index, (part, end) in enumerate(zip(parts, ends)):
        gap = part.value - part.start - c
        last = index == len(parts) - 1
        if gap >= 0:
            return part.start
        if part.slope > 1:
            candidate = part.start + (-gap) / (part.slope - 1)
            if candidate < end or (last and candidate <= end):
                return candidate
    return None


def minimal_moc(ball: NormBall, x: Hashable, norm_of: NormOracle, context: Any) -> Moc:
    """
    MOC mínimo de x sobre [0, r]: Γ(r) = max(r, sup{λ(x^ε g x^{-ε}) : λ(g) ≤ r}).

    Args:
        ball: Bola completa de radio r_max
        x: Conjugador
        norm_of: Oráculo de norma (elemento, presupuesto) → valor o None
        context: Contexto del grupo

    Raises:
        CapExceededError: Si la norma de algún conjugado no es calculable
    """
    weight = norm_of(x, None)
    if weight is None:
        raise CapExceededError("minimal_moc", 0, 0, f"norma de {x} no calculable")
    inverse = context.invert(x)
    best_at: Dict[Fraction, Fraction] = {}
    for g, value in ball.table.items():
        for left, right in ((x, inverse), (inverse, x)):
            conjugate = context.multiply(context.multiply(left, g), right)
            conj_value = norm_of(conjugate, 2 * weight + value)
            if conj_value is None:
                raise CapExceededError("minimal_moc", 0, 0, f"norma del conjugado de {g} no calculable")
            if conj_value > best_at.get(value, Fraction(-1)):
                best_at[value] = conj_value
    moc = Moc.from_steps(ball.radius, sorted(best_at.items()))
    logging.debug(f"MOC mínimo de {x}: tramos {len(moc.segments)}")
    return moc


@dataclass
class MocCheck:
    """Resultado de verify_moc; witness describe la primera violación."""

    ok: bool
    checked: int
    witness: Optional[Dict[str, Any]] = None


def verify_moc(candidate: Moc, x: Hashable, ball: NormBall, norm_of: NormOracle, context: Any) -> MocCheck:
    """
    Comprobar λ(x^ε·g·x^{-ε}) ≤ Γ(λ(g)) para todo g de la bola y ε = ±1.

    Raises:
        MocDomainError: Si el dominio del candidato no cubre el radio de la bola
    """
    if candidate.r_max < ball.radius:
        raise MocDomainError(f"El candidato cubre [0, {candidate.r_max}] pero la bola tiene radio {ball.radius}")
    weight = norm_of(x, None)
    inverse = context.invert(x)
    checked = 0
    for g, value in ball.table.items():
        bound = candidate(value)
        for sign, (left, right) in ((1, (x, inverse)), (-1, (inverse, x))):
            conjugate = context.multiply(context.multiply(left, g), right)
            conj_value = norm_of(conjugate, 2 * weight + value)
            checked += 1
            if conj_value is None or conj_value > bound:
                return MocCheck(False, checked, {
                    "element": g, "sign": sign, "conjugate": conjugate,
                    "conjugate_value": conj_value, "bound": bound,
                })
    return MocCheck(True, checked)


def moc_le(first: Moc, second: Moc, radii: Optional[Sequence[Fraction]] = None) -> bool:
    """
    first ≤ second en los radios dados (por defecto, todos los puntos de quiebre
    de ambos dentro del dominio común y su extremo).

    Entre dos quiebres consecutivos ambos son afines, así que comparar en los
    quiebres, en sus límites por la izquierda y en el extremo decide el orden
    en todo el dominio común.
    """
    limit = min(first.r_max, second.r_max)
    if radii is not None:
        return not first.exceedances(second, radii)
    points = sorted({r for r in first.breakpoints() + second.breakpoints() if r <= limit} | {limit})
    if first.exceedances(second, points):
        return False
    for left, right in zip(points, points[1:]):
        # límites laterales en left y right del tramo abierto (left, right)
        a, b = first._segment_at(left), second._segment_at(left)
        for r in (left, right):
            if a.value + a.slope * (r - a.start) > b.value + b.slope * (r - b.start):
                return False
    return True
