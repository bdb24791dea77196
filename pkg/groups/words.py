"""
Palabras Reducidas
==================

Alfabetos, palabras reducidas, grupos libres y productos libres: el sustrato
sobre el que calculan todos los demás módulos.

Un producto libre F_0 ∗ … ∗ F_{n-1} de grupos libres es libre sobre la unión de
sus generadores, así que todo elemento es una palabra reducida sobre las letras
x_{i,j}^{±1} (factor i, índice j). La forma canónica es la secuencia reducida y
la igualdad de elementos es igualdad de secuencias.

Funcionalidades principales:
- Reducción libre, producto, inverso y conjugación
- Enumeración de bolas por longitud, con tope de tamaño
- Orden canónico (shortlex) usado para desempates deterministas
- Sintaxis textual `g<i>.<j>` / `g<i>.<j>^-1` con alias opcionales
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from groups.caps import Caps
from utils.error_handler import CapExceededError, InputError, SignatureMismatchError, UnknownGeneratorError


@dataclass(frozen=True, slots=True)
class GeneratorSymbol:
    """Letra x_{factor,index}^{sign}."""

    factor: int
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.factor < 0 or self.index < 1 or self.sign not in (1, -1):
            raise InputError(f"Letra inválida: factor={self.factor}, índice={self.index}, signo={self.sign}")

    def inverse(self) -> GeneratorSymbol:
        return GeneratorSymbol(self.factor, self.index, -self.sign)

    @property
    def key(self) -> Tuple[int, int, int]:
        # a < a^-1 < b < b^-1
        return (self.factor, self.index, 0 if self.sign > 0 else 1)

    @property
    def positive(self) -> GeneratorSymbol:
        return self if self.sign > 0 else self.inverse()

    def __str__(self) -> str:
        base = f"g{self.factor}.{self.index}"
        return base if self.sign > 0 else f"{base}^-1"


@dataclass(frozen=True, slots=True)
class Word:
    """
    Palabra reducida; la tupla vacía es la identidad.

    No se valida la reducción al construir: las palabras se obtienen siempre a
    través de reduce(), multiply() o de la enumeración de bolas.
    """

    letters: Tuple[GeneratorSymbol, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[GeneratorSymbol]:
        return iter(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def sort_key(self) -> Tuple[int, Tuple[Tuple[int, int, int], ...]]:
        """Orden shortlex: primero la longitud, luego las letras."""
        return (len(self.letters), tuple(letter.key for letter in self.letters))

    def inverse(self) -> Word:
        return Word(tuple(letter.inverse() for letter in reversed(self.letters)))

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(str(letter) for letter in self.letters)


IDENTITY = Word()


@dataclass(frozen=True)
class FreeProductSignature:
    """
    Firma de un producto libre: número de generadores de cada factor.

    Attributes:
        generators_per_factor (tuple): n_i para cada factor i (todos ≥ 1)
    """

    generators_per_factor: Tuple[int, ...]

    def __post_init__(self):
        if len(self.generators_per_factor) < 1:
            raise InputError("La firma necesita al menos un factor")
        if any(count < 1 for count in self.generators_per_factor):
            raise InputError(f"Cada factor necesita al menos un generador: {self.generators_per_factor}")

    @classmethod
    def free_group(cls, rank: int) -> FreeProductSignature:
        """Grupo libre de rango dado, visto como producto de un solo factor."""
        return cls((rank,))

    @property
    def factor_count(self) -> int:
        return len(self.generators_per_factor)

    @property
    def rank(self) -> int:
        return sum(self.generators_per_factor)

    def contains(self, symbol: GeneratorSymbol) -> bool:
        return (symbol.factor < self.factor_count
                and symbol.index <= self.generators_per_factor[symbol.factor])

    def generators(self) -> List[GeneratorSymbol]:
        """Generadores positivos en orden canónico."""
        return [GeneratorSymbol(i, j)
                for i, count in enumerate(self.generators_per_factor)
                for j in range(1, count + 1)]

    def letters(self) -> List[GeneratorSymbol]:
        """Todas las letras (ambos signos) en orden canónico."""
        result = []
        for generator in self.generators():
            result.append(generator)
            result.append(generator.inverse())
        return result

    def check(self, word: Word) -> Word:
        """
        Verificar que la palabra usa solo generadores declarados.

        Raises:
            SignatureMismatchError: Si alguna letra no pertenece a la firma
        """
        for letter in word.letters:
            if not self.contains(letter):
                raise SignatureMismatchError(f"La letra {letter} no pertenece a la firma {self.generators_per_factor}")
        return word


def reduce(raw: Iterable[GeneratorSymbol], signature: Optional[FreeProductSignature] = None) -> Word:
    """
    Reducción libre: elimina sucesivamente los pares adyacentes s s⁻¹.

    Args:
        raw: Secuencia de letras, no necesariamente reducida
        signature: Si se da, se valida cada letra contra ella

    Returns:
        Word: Única palabra reducida equivalente

    Raises:
        UnknownGeneratorError: Si una letra no está declarada en la firma
    """
    stack: List[GeneratorSymbol] = []
    for letter in raw:
        if signature is not None and not signature.contains(letter):
            raise UnknownGeneratorError(f"Generador no declarado: {letter}")
        if stack and stack[-1].factor == letter.factor and stack[-1].index == letter.index \
                and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    return Word(tuple(stack))


def multiply(x: Word, y: Word, signature: Optional[FreeProductSignature] = None) -> Word:
    """
    Producto de dos palabras reducidas: concatenación seguida de reducción.

    Solo puede cancelarse la unión entre el final de x y el principio de y.
    """
    if signature is not None:
        signature.check(x)
        signature.check(y)
    left, right = x.letters, y.letters
    k = 0
    limit = min(len(left), len(right))
    while k < limit and left[len(left) - 1 - k] == right[k].inverse():
        k += 1
    return Word(left[:len(left) - k] + right[k:])


def invert(x: Word) -> Word:
    return x.inverse()


def conjugate(x: Word, g: Word) -> Word:
    """x · g · x⁻¹."""
    return multiply(multiply(x, g), x.inverse())


def project_to_factor(word: Word, factor: int) -> Word:
    """
    Proyección del producto libre sobre un factor.

    Sustituye por 1 cada letra de otro factor y reduce; es un homomorfismo.
    """
    return reduce(letter for letter in word.letters if letter.factor == factor)


def ball_size(signature: FreeProductSignature, length: int) -> int:
    """Número de palabras reducidas de longitud ≤ length (fórmula cerrada)."""
    letters = 2 * signature.rank
    total, layer = 1, letters
    for _ in range(length):
        total += layer
        layer *= letters - 1
    return total


def enumerate_ball(signature: FreeProductSignature, length: int, caps: Caps = Caps()) -> List[Word]:
    """
    Todas las palabras reducidas de longitud ≤ length, en orden canónico.

    Args:
        signature: Firma del producto libre
        length: Cota de longitud L ≥ 0
        caps: Topes de exploración

    Returns:
        list: Palabras de la bola, en orden shortlex

    Raises:
        CapExceededError: Si el tamaño de la bola supera el tope
    """
    if length < 0:
        raise InputError("La cota de longitud debe ser no negativa")
    expected = ball_size(signature, length)
    if expected > caps.ball:
        raise CapExceededError("enumerate_ball", caps.ball, expected, f"L={length}")
    letters = signature.letters()
    ball = [IDENTITY]
    layer = [IDENTITY]
    for _ in range(length):
        next_layer = []
        for word in layer:
            last = word.letters[-1].inverse() if word.letters else None
            for letter in letters:
                if letter != last:
                    next_layer.append(Word(word.letters + (letter,)))
        ball.extend(next_layer)
        layer = next_layer
    logging.debug(f"Bola de longitud {length}: {len(ball)} palabras")
    return ball


def parse_word(text: str, signature: FreeProductSignature,
               aliases: Optional[Mapping[str, str]] = None) -> Word:
    """
    Leer una palabra de su sintaxis textual.

    Tokens separados por espacios: `g<i>.<j>` o `g<i>.<j>^-1`, o un alias
    (también con `^-1`). La cadena vacía o `1` es la identidad. El resultado
    se reduce.

    Raises:
        InputError: Si algún token no es válido
        UnknownGeneratorError: Si algún generador no está en la firma
    """
    return reduce(parse_letters(text, aliases), signature)


def parse_letters(text: str, aliases: Optional[Mapping[str, str]] = None) -> List[GeneratorSymbol]:
    """Tokens de una palabra sin reducir (para emparejamientos sobre palabras crudas)."""
    aliases = aliases or {}
    letters = []
    for token in text.split():
        if token == "1":
            continue
        inverse = token.endswith("^-1")
        name = token[:-3] if inverse else token
        name = aliases.get(name, name)
        letter = _parse_generator(name)
        letters.append(letter.inverse() if inverse else letter)
    return letters


def _parse_generator(name: str) -> GeneratorSymbol:
    inverse = name.endswith("^-1")
    if inverse:
        name = name[:-3]
    if not name.startswith("g") or "." not in name:
        raise InputError(f"Token de generador inválido: {name!r}")
    factor_text, index_text = name[1:].split(".", 1)
    try:
        symbol = GeneratorSymbol(int(factor_text), int(index_text))
    except ValueError as e:
        raise InputError(f"Token de generador inválido: {name!r}") from e
    return symbol.inverse() if inverse else symbol


def format_word(word: Word, aliases: Optional[Mapping[str, str]] = None) -> str:
    """Sintaxis textual de una palabra, usando alias si se dan (nombre → g<i>.<j>)."""
    if word.is_identity:
        return "1"
    reverse: Dict[str, str] = {target: name for name, target in (aliases or {}).items()}
    tokens = []
    for letter in word.letters:
        base = str(letter.positive)
        base = reverse.get(base, base)
        tokens.append(base if letter.sign > 0 else f"{base}^-1")
    return " ".join(tokens)


class FreeProduct:
    """
    Contexto de grupo para palabras de un producto libre.

    Expone la interfaz que usa el motor de Dijkstra (identity, multiply,
    invert, sort_key) sin validación en el camino caliente.
    """

    def __init__(self, signature: FreeProductSignature):
        self.signature = signature
        self.identity = IDENTITY

    def multiply(self, x: Word, y: Word) -> Word:
        return multiply(x, y)

    def invert(self, x: Word) -> Word:
        return x.inverse()

    def sort_key(self, x: Word):
        return x.sort_key()

    def conjugate(self, x: Word, g: Word) -> Word:
        return conjugate(x, g)
