"""
Vista de Diagnósticos de Ultraproductos
=======================================

Este módulo contiene la clase UltraproductView que atiende el comando
ultra-diagnose. Todo informe trabaja sobre un prefijo finito de la sucesión
y lleva la nota del filtro cofinito.

Modos:
- distortion: distorsión por conjugación en una etapa
- profile: distorsión en cada etapa del prefijo (g constante o elements por etapa) y su intervalo
- collapse: testigo del colapso de F_2 con la norma |·|/n
- sinf_delta: δ = 1/m para una permutación de soporte finito y su testigo
- filter_limit: intervalo [liminf, limsup] de la cola de una sucesión
"""

import logging
from typing import Any, Callable, Dict, Hashable

from groups.ultraproduct import (FILTER_NOTE, Distortion, FilterLimitInterval, GroupSequenceSpec,
                                 conjugation_distortion, continuity_profile, filter_limit,
                                 scaled_f2_collapse_witness, sinf_delta)
from groups.words import FreeProductSignature, format_word, parse_word
from utils.error_handler import InputError, SchemaError, handle_errors
from views.command_view import CommandView

MODES = ("distortion", "profile", "collapse", "sinf_delta", "filter_limit")


class UltraproductView(CommandView):
    """Vista del comando ultra-diagnose (documento diagnostic_report)."""

    COMMANDS = ("ultra-diagnose",)

    @handle_errors
    def render(self) -> Dict[str, Any]:
        """
        Ejecutar el diagnóstico pedido y devolver el informe.

        Returns:
            dict: Informe con la nota del filtro cofinito y todos los testigos
        """
        doc = self.codec.require_fields(self.document, ("mode", "sequence", "g", "elements", "delta", "n", "p",
                                                        "values", "tail_start"), ("mode",), "ultra-diagnose")
        mode = doc["mode"]
        if mode not in MODES:
            raise SchemaError(f"Modo desconocido: {mode!r}; se admite {list(MODES)}")
        logging.info(f"ultra-diagnose: modo {mode}")
        if mode == "collapse":
            report = self._collapse(doc)
        elif mode == "sinf_delta":
            report = self._sinf_delta(doc)
        elif mode == "filter_limit":
            values = [self.codec.rational(v) for v in doc.get("values", [])]
            report = {"interval": self._interval(filter_limit(values, doc.get("tail_start")))}
        else:
            spec = self.codec.sequence_spec(self._require(doc, "sequence"), self.caps)
            if mode == "distortion":
                report = self._distortion(spec, doc)
            else:
                report = self._profile(spec, doc)
        return self.envelope({"mode": mode, "note": FILTER_NOTE, "report": report})

    @staticmethod
    def _require(doc: Dict[str, Any], name: str) -> Any:
        if name not in doc:
            raise SchemaError(f"El modo {doc['mode']} necesita el campo {name}")
        return doc[name]

    def _element_codec(self, spec: GroupSequenceSpec, n: int):
        """(decode, encode) de los elementos de la etapa n."""
        if spec.kind == "scaled_free":
            signature = FreeProductSignature.free_group(spec.rank)
            aliases = self.codec.default_aliases(signature)
            return (lambda raw: parse_word(raw, signature, aliases)), (lambda w: format_word(w, aliases))
        if spec.kind == "explicit":
            context = spec.groups[n - 1].context
            return (lambda raw: context.index_of(str(raw))), context.label_of
        return self.codec.finitary_permutation, self.codec.encode_finitary_permutation

    def _encode_distortion(self, distortion: Distortion, encode: Callable[[Hashable], Any]) -> Dict[str, Any]:
        return {
            "stage": distortion.stage,
            "delta": self.codec.format_rational(distortion.delta),
            "value": self.codec.format_rational(distortion.value),
            "witness": encode(distortion.witness),
            "side": distortion.side,
            "ball_size": distortion.ball_size,
        }

    def _interval(self, interval: FilterLimitInterval) -> Dict[str, Any]:
        return {
            "liminf": self.codec.format_rational(interval.liminf),
            "limsup": self.codec.format_rational(interval.limsup),
            "tail_start": interval.tail_start,
        }

    def _distortion(self, spec: GroupSequenceSpec, doc: Dict[str, Any]) -> Dict[str, Any]:
        n = self._require(doc, "n")
        spec.check_stage(n)
        decode, encode = self._element_codec(spec, n)
        g = decode(self._require(doc, "g"))
        distortion = conjugation_distortion(spec, g, self.codec.rational(self._require(doc, "delta")), n, self.caps)
        return {"element": encode(g), "distortion": self._encode_distortion(distortion, encode)}

    def _profile(self, spec: GroupSequenceSpec, doc: Dict[str, Any]) -> Dict[str, Any]:
        delta = self.codec.rational(self._require(doc, "delta"))
        # elements da g_n por etapa; g sola es la sucesión constante
        raws = doc["elements"] if "elements" in doc else [self._require(doc, "g")] * spec.prefix
        elements = [self._element_codec(spec, n)[0](raw) for n, raw in enumerate(raws[:spec.prefix], start=1)]
        profile = continuity_profile(spec, elements, delta, self.caps)
        stages = [self._encode_distortion(d, self._element_codec(spec, d.stage)[1]) for d in profile.stages]
        interval = self._interval(profile.interval)
        self.tables["Distorsión"] = self.table_processor.distortion_table(stages)
        self.figure = self.chart_utils.create_distortion_chart(stages, interval)
        return {"delta": self.codec.format_rational(delta), "stages": stages, "interval": interval}

    def _collapse(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        rank = 2
        if "sequence" in doc:
            spec = self.codec.sequence_spec(doc["sequence"], self.caps)
            if spec.kind != "scaled_free":
                raise InputError(f"El modo collapse necesita una sucesión scaled_free, no {spec.kind}")
            rank = spec.rank
        signature = FreeProductSignature.free_group(rank)
        aliases = self.codec.default_aliases(signature)
        g = parse_word(self._require(doc, "g"), signature, aliases)
        n = self._require(doc, "n")
        witness = scaled_f2_collapse_witness(g, n, rank)
        return {
            "element": format_word(g, aliases),
            "stage": witness.stage,
            "generator": format_word(witness.generator, aliases),
            "conjugate": format_word(witness.conjugate, aliases),
            "value": self.codec.format_rational(witness.value),
            "element_norm": self.codec.format_rational(len(g) / self.codec.rational(n)),
        }

    def _sinf_delta(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        p = self.codec.finitary_permutation(self._require(doc, "p"))
        result = sinf_delta(p, self._require(doc, "n"))
        encode = self.codec.encode_finitary_permutation
        return {
            "p": encode(p),
            "m": result.m,
            "delta": self.codec.format_rational(result.delta),
            "checked": result.checked,
            "counterexamples": [encode(s) for s in result.counterexamples],
            "witness": encode(result.witness),
            "witness_norm": self.codec.format_rational(result.witness_value),
            "witness_conjugate_norm": self.codec.format_rational(result.witness_conjugate_value),
        }
