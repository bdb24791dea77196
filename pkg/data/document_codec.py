"""
Codificación de Documentos
==========================

Este módulo contiene la clase DocumentCodec con métodos estáticos para leer
y escribir los documentos JSON de la línea de comandos.

Funcionalidades principales:
- Racionales exactos como cadenas "p/q"
- Palabras en sintaxis `g<i>.<j>` con alias opcionales
- Normas parciales, MOC, bolas de norma y grupos finitos
- Grupos objetivo (finite_table, symmetric, int_lattice, free_fg_norm)
- Sucesiones de grupos para los diagnósticos de ultraproductos
- Validación de esquema: versión y campos desconocidos
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from config.settings import AppSettings
from groups.caps import Caps
from groups.families import (FiniteTableGroup, NormedGroup, Permutation, lattice_normed_group,
                             table_normed_group)
from groups.moc import Moc
from groups.norms import NormBall, PartialPreNorm, generated_normed_group, verify_norm_axioms
from groups.ultraproduct import FinitelySupportedPermutation, GroupSequenceSpec
from groups.words import (FreeProductSignature, GeneratorSymbol, Word, format_word, parse_letters,
                          parse_word)
from utils.error_handler import InputError, SchemaError
from utils.rational_utils import RationalUtils

ALIAS_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass
class SeedDocument:
    """Norma parcial leída junto con su firma y sus alias."""

    seed: PartialPreNorm
    signature: FreeProductSignature
    aliases: Dict[str, str] = field(default_factory=dict)

    def word(self, text: str) -> Word:
        return parse_word(text, self.signature, self.aliases)

    def text(self, word: Word) -> str:
        return format_word(word, self.aliases)


@dataclass
class TargetDocument:
    """Grupo normado leído junto con la lectura y escritura de sus elementos."""

    group: NormedGroup
    decode: Callable[[Any], Hashable]
    encode: Callable[[Hashable], Any]
    aliases: Dict[str, str] = field(default_factory=dict)


class DocumentCodec:
    """
    Lectura y escritura de los documentos del conjunto de herramientas.

    Los documentos de entrada se validan contra la lista de campos de cada
    comando; los de salida llevan siempre schema_version.
    """

    @staticmethod
    def require_fields(doc: Any, allowed: Iterable[str], required: Iterable[str] = (),
                       where: str = "documento") -> Dict[str, Any]:
        """
        Validar los campos de un objeto del documento.

        Raises:
            SchemaError: Si no es un objeto, falta un campo obligatorio, sobra
                         alguno o la versión de esquema no coincide
        """
        if not isinstance(doc, dict):
            raise SchemaError(f"Se esperaba un objeto en {where}")
        allowed = set(allowed) | {"schema_version"}
        unknown = sorted(set(doc) - allowed)
        if unknown:
            raise SchemaError(f"Campos desconocidos en {where}: {unknown}")
        missing = [name for name in required if name not in doc]
        if missing:
            raise SchemaError(f"Faltan campos en {where}: {missing}")
        version = doc.get("schema_version", AppSettings.SCHEMA_VERSION)
        if version != AppSettings.SCHEMA_VERSION:
            raise SchemaError(f"Versión de esquema {version!r} no soportada "
                              f"(se espera {AppSettings.SCHEMA_VERSION})")
        return doc

    # ==========================================
    # RACIONALES Y PALABRAS
    # ==========================================

    @staticmethod
    def rational(value: Any) -> Fraction:
        return RationalUtils.parse(value)

    @staticmethod
    def format_rational(value: Optional[Fraction]) -> Optional[str]:
        return None if value is None else RationalUtils.format(value)

    @staticmethod
    def signature(raw: Any) -> FreeProductSignature:
        """Firma como lista de rangos por factor, o un entero para un grupo libre."""
        if isinstance(raw, int) and not isinstance(raw, bool):
            return FreeProductSignature.free_group(raw)
        if isinstance(raw, list) and all(isinstance(n, int) and not isinstance(n, bool) for n in raw):
            return FreeProductSignature(tuple(raw))
        raise SchemaError(f"Firma inválida: {raw!r}")

    @staticmethod
    def default_aliases(signature: FreeProductSignature) -> Dict[str, str]:
        """a, b, c… para los generadores de un grupo libre de rango ≤ 26."""
        if signature.factor_count != 1 or signature.rank > len(ALIAS_LETTERS):
            return {}
        return {ALIAS_LETTERS[k]: f"g0.{k + 1}" for k in range(signature.rank)}

    @staticmethod
    def aliases(raw: Optional[Mapping[str, str]], signature: FreeProductSignature) -> Dict[str, str]:
        if raw is None:
            return DocumentCodec.default_aliases(signature)
        if not isinstance(raw, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in raw.items()):
            raise SchemaError("Los alias deben ser un objeto nombre → g<i>.<j>")
        for name, target in raw.items():
            if name.startswith("g") and "." in name:
                raise SchemaError(f"El alias {name!r} choca con la sintaxis g<i>.<j>")
            parse_word(target, signature)
        return dict(raw)

    @staticmethod
    def letter_text(letter: GeneratorSymbol, aliases: Optional[Mapping[str, str]] = None) -> str:
        return format_word(Word((letter,)), aliases)

    @staticmethod
    def raw_letters(text: str, signature: FreeProductSignature,
                    aliases: Optional[Mapping[str, str]] = None) -> List[GeneratorSymbol]:
        """Letras de una palabra sin reducir, validadas contra la firma."""
        letters = parse_letters(text, aliases)
        signature.check(Word(tuple(letters)))
        return letters

    # ==========================================
    # NORMAS PARCIALES Y BOLAS
    # ==========================================

    @staticmethod
    def partial_norm(doc: Any) -> SeedDocument:
        """
        Documento partial_norm: {signature, aliases?, entries: [{word, value}]}.

        Los inversos se completan con el mismo valor.
        """
        DocumentCodec.require_fields(doc, ("signature", "aliases", "entries"), ("signature", "entries"),
                                     "partial_norm")
        signature = DocumentCodec.signature(doc["signature"])
        aliases = DocumentCodec.aliases(doc.get("aliases"), signature)
        if not isinstance(doc["entries"], list):
            raise SchemaError("entries debe ser una lista")
        entries: Dict[Word, Fraction] = {}
        for entry in doc["entries"]:
            DocumentCodec.require_fields(entry, ("word", "value"), ("word", "value"), "entrada de partial_norm")
            word = parse_word(entry["word"], signature, aliases)
            value = DocumentCodec.rational(entry["value"])
            if word in entries and entries[word] != value:
                raise InputError(f"Valores distintos para {entry['word']!r}")
            entries[word] = value
        return SeedDocument(PartialPreNorm.on_words(signature, entries), signature, aliases)

    @staticmethod
    def encode_partial_norm(seed: PartialPreNorm, aliases: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
        """Una entrada por par {x, x⁻¹} (el representante menor) y sin la identidad."""
        entries = []
        for word, value in seed.items():
            if word.is_identity or word.inverse().sort_key() < word.sort_key():
                continue
            entries.append({"word": format_word(word, aliases), "value": RationalUtils.format(value)})
        doc = {"signature": list(seed.context.signature.generators_per_factor), "entries": entries}
        if aliases:
            doc["aliases"] = dict(aliases)
        return doc

    @staticmethod
    def encode_norm_ball(ball: NormBall, encode: Callable[[Hashable], Any]) -> Dict[str, Any]:
        return {
            "radius": RationalUtils.format(ball.radius),
            "size": len(ball),
            "elements": [{"element": encode(x), "value": RationalUtils.format(v)} for x, v in ball.table.items()],
        }

    # ==========================================
    # MÓDULOS DE CONTINUIDAD
    # ==========================================

    @staticmethod
    def moc(doc: Any) -> Moc:
        """
        Documento moc: {r_max, breakpoints: [[r, v]…], slopes?: [s…]}.

        Sin slopes, los quiebres son escalones unidos con la diagonal; con
        slopes, cada quiebre abre un tramo v + s·(r - r_k).
        """
        DocumentCodec.require_fields(doc, ("r_max", "breakpoints", "slopes"), ("r_max", "breakpoints"), "moc")
        r_max = DocumentCodec.rational(doc["r_max"])
        points = doc["breakpoints"]
        if not isinstance(points, list) or any(not isinstance(p, list) or len(p) != 2 for p in points):
            raise SchemaError("breakpoints debe ser una lista de pares [r, v]")
        points = [(DocumentCodec.rational(r), DocumentCodec.rational(v)) for r, v in points]
        if "slopes" not in doc:
            return Moc.from_steps(r_max, points)
        slopes = doc["slopes"]
        if not isinstance(slopes, list) or len(slopes) != len(points):
            raise SchemaError("slopes debe tener un valor por quiebre")
        return Moc.build(r_max, [(r, v, DocumentCodec.rational(s)) for (r, v), s in zip(points, slopes)])

    @staticmethod
    def encode_moc(moc: Moc) -> Dict[str, Any]:
        return {
            "r_max": RationalUtils.format(moc.r_max),
            "breakpoints": [[RationalUtils.format(p.start), RationalUtils.format(p.value)] for p in moc.segments],
            "slopes": [RationalUtils.format(p.slope) for p in moc.segments],
        }

    # ==========================================
    # GRUPOS OBJETIVO
    # ==========================================

    @staticmethod
    def target(doc: Any, caps: Caps = Caps()) -> TargetDocument:
        """
        Grupo normado evaluable.

        Tipos:
        - finite_table: {labels, table (etiquetas), identity, norm, seminorm?}
        - symmetric: {n, norm, seminorm?} con etiquetas "012"…
        - int_lattice: {rank, weights?}
        - free_fg_norm: {seed: partial_norm}

        norm es "discrete" o un objeto etiqueta → "p/q".

        Raises:
            SchemaError: Tipo o campos desconocidos
            InputError: Si la tabla no es un grupo o la norma no cumple los axiomas
        """
        if not isinstance(doc, dict) or "kind" not in doc:
            raise SchemaError("El grupo objetivo necesita el campo kind")
        kind = doc["kind"]
        if kind == "finite_table":
            DocumentCodec.require_fields(doc, ("kind", "labels", "table", "identity", "norm", "seminorm"),
                                         ("labels", "table", "identity", "norm"), "finite_table")
            labels = [str(label) for label in doc["labels"]]
            index = {label: i for i, label in enumerate(labels)}
            try:
                table = [[index[str(cell)] for cell in row] for row in doc["table"]]
                identity = index[str(doc["identity"])]
            except KeyError as e:
                raise InputError(f"Etiqueta desconocida en la tabla: {e}") from e
            group = FiniteTableGroup(labels, table, identity)
            return DocumentCodec._finite_target(group, doc)
        if kind == "symmetric":
            DocumentCodec.require_fields(doc, ("kind", "n", "norm", "seminorm"), ("n", "norm"), "symmetric")
            n = doc["n"]
            if not isinstance(n, int) or not 1 <= n <= 6:
                raise InputError("symmetric admite 1 ≤ n ≤ 6")
            return DocumentCodec._finite_target(FiniteTableGroup.symmetric_group(n), doc)
        if kind == "int_lattice":
            DocumentCodec.require_fields(doc, ("kind", "rank", "weights"), ("rank",), "int_lattice")
            weights = doc.get("weights")
            weights = None if weights is None else [DocumentCodec.rational(w) for w in weights]
            group = lattice_normed_group(doc["rank"], weights)
            rank = doc["rank"]
            return TargetDocument(group, lambda raw: DocumentCodec._lattice_element(raw, rank),
                                  lambda x: x[0] if rank == 1 else list(x))
        if kind == "free_fg_norm":
            DocumentCodec.require_fields(doc, ("kind", "seed"), ("seed",), "free_fg_norm")
            seed_doc = DocumentCodec.partial_norm(doc["seed"])
            group = generated_normed_group(seed_doc.seed, caps)
            return TargetDocument(group, seed_doc.word, seed_doc.text, seed_doc.aliases)
        raise SchemaError(f"Tipo de grupo desconocido: {kind!r}")

    @staticmethod
    def _finite_target(group: FiniteTableGroup, doc: Dict[str, Any]) -> TargetDocument:
        problems = group.verify_group_axioms()
        if problems:
            raise InputError(f"La tabla no define un grupo: {problems[0]}")
        norm = doc["norm"]
        if norm == "discrete":
            values = {x: Fraction(0 if x == group.identity else 1) for x in group.elements()}
        elif isinstance(norm, dict):
            values = {group.index_of(str(label)): DocumentCodec.rational(v) for label, v in norm.items()}
        else:
            raise SchemaError("norm debe ser \"discrete\" o un objeto etiqueta → valor")
        normed = table_normed_group(group, values)
        problems = verify_norm_axioms(normed, seminorm=bool(doc.get("seminorm", False)))
        if problems:
            raise InputError(f"La tabla de norma no cumple los axiomas: {problems[0]}")
        return TargetDocument(normed, lambda raw: group.index_of(str(raw)), group.label_of)

    @staticmethod
    def _lattice_element(raw: Any, rank: int) -> tuple:
        if isinstance(raw, int) and not isinstance(raw, bool) and rank == 1:
            return (raw,)
        if isinstance(raw, list) and len(raw) == rank and all(isinstance(a, int) for a in raw):
            return tuple(raw)
        raise InputError(f"Elemento inválido de ℤ^{rank}: {raw!r}")

    # ==========================================
    # GRUPOS FINITOS CONSTRUIDOS
    # ==========================================

    @staticmethod
    def encode_permutation_group(vertices: Sequence[Word], generators: Mapping[GeneratorSymbol, Permutation],
                                 seed: PartialPreNorm, aliases: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
        """
        Documento finite_group de permutaciones: imágenes de cada generador
        sobre la lista indexada de vértices y la tabla de la semilla σ' que
        genera la norma.
        """
        elements = seed.carrier
        return {
            "kind": "permutation",
            "degree": len(vertices),
            "vertices": [format_word(v, aliases) for v in vertices],
            "generators": {DocumentCodec.letter_text(g, aliases): p.images.tolist()
                           for g, p in generators.items()},
            "elements": [p.images.tolist() for p in elements],
            "norm": [RationalUtils.format(seed.value(p)) for p in elements],
        }

    @staticmethod
    def encode_table_group(group: NormedGroup) -> Dict[str, Any]:
        context: FiniteTableGroup = group.context
        return {
            "kind": "finite_table",
            "labels": list(context.labels),
            "table": [[context.label_of(int(c)) for c in row] for row in context.table],
            "identity": context.label_of(context.identity),
            "norm": {context.label_of(x): RationalUtils.format(group.norm(x)) for x in context.elements()},
        }

    @staticmethod
    def encode_partial_mono(domain: Sequence[Word], images: Mapping[Word, Permutation],
                            elements: Sequence[Permutation],
                            aliases: Optional[Mapping[str, str]] = None) -> List[Dict[str, Any]]:
        """Documento partial_mono: [{word, element_index}] sobre la lista de elementos."""
        index = {p: i for i, p in enumerate(elements)}
        return [{"word": format_word(w, aliases), "element_index": index[images[w]]} for w in domain]

    # ==========================================
    # SUCESIONES DE GRUPOS
    # ==========================================

    @staticmethod
    def sequence_spec(doc: Any, caps: Caps = Caps()) -> GroupSequenceSpec:
        """
        Documento sequence_spec: {kind, prefix, rank?, groups?}.

        groups es una lista de grupos objetivo finitos (tipo explicit).
        """
        DocumentCodec.require_fields(doc, ("kind", "prefix", "rank", "groups"), ("kind", "prefix"), "sequence_spec")
        groups = [DocumentCodec.target(g, caps).group for g in doc.get("groups", [])]
        return GroupSequenceSpec(doc["kind"], doc["prefix"], doc.get("rank", 2), groups)

    @staticmethod
    def finitary_permutation(raw: Any) -> FinitelySupportedPermutation:
        """Permutación de soporte finito dada por ciclos [[1, 2], …] sobre ℕ = {1, 2, …}."""
        if not isinstance(raw, list) or any(not isinstance(c, list) or not c for c in raw):
            raise SchemaError("Una permutación de ℕ se da como lista de ciclos")
        return FinitelySupportedPermutation.from_cycles(raw)

    @staticmethod
    def encode_finitary_permutation(p: FinitelySupportedPermutation) -> List[List[int]]:
        cycles, seen = [], set()
        for start in p.support:
            if start in seen:
                continue
            cycle, point = [], start
            while point not in seen:
                seen.add(point)
                cycle.append(point)
                point = p(point)
            cycles.append(cycle)
        return cycles

    # ==========================================
    # SERIALIZACIÓN GENÉRICA
    # ==========================================

    @staticmethod
    def to_json(value: Any, aliases: Optional[Mapping[str, str]] = None) -> Any:
        """
        Convertir valores de la librería en tipos JSON.

        Fraction → "p/q", Word → sintaxis textual, Permutation → imágenes,
        permutaciones de ℕ → ciclos, Moc → documento moc. Las claves de los
        diccionarios se convierten con las mismas reglas.
        """
        convert = lambda item: DocumentCodec.to_json(item, aliases)
        if value is None or isinstance(value, (bool, str)):
            return value
        if isinstance(value, Fraction):
            return RationalUtils.format(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, Word):
            return format_word(value, aliases)
        if isinstance(value, GeneratorSymbol):
            return DocumentCodec.letter_text(value, aliases)
        if isinstance(value, Permutation):
            return value.images.tolist()
        if isinstance(value, FinitelySupportedPermutation):
            return DocumentCodec.encode_finitary_permutation(value)
        if isinstance(value, Moc):
            return DocumentCodec.encode_moc(value)
        if isinstance(value, dict):
            return {str(convert(k)): convert(v) for k, v in value.items()}
        if isinstance(value, (list, tuple, set, frozenset)):
            items = [convert(item) for item in value]
            return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
        raise InputError(f"Valor no serializable: {type(value).__name__}")
