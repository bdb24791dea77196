"""
Vista de Normas
===============

Este módulo contiene la clase NormView que atiende los comandos sobre normas
finitamente generadas y módulos de continuidad.

Características principales:
- norm-eval: valor de la norma generada y factorización óptima
- norm-ball: bola completa {λ ≤ r} con verificación opcional de axiomas
- moc: MOC mínimo, verificación de candidatos, transformaciones y radio de
  dominación, sobre una semilla o un grupo objetivo
"""

import logging
from typing import Any, Dict

from config.settings import AppSettings
from groups.approximation import target_ball
from groups.moc import eventual_domination_radius, minimal_moc, moc_transform, verify_moc
from groups.norms import GeneratedNorm, check_partial_norm, generated_normed_group, is_conjugacy_invariant
from utils.error_handler import SchemaError, handle_errors
from views.command_view import CommandView


class NormView(CommandView):
    """
    Vista de los comandos norm-eval, norm-ball y moc.

    Cada comando valida sus campos, ejecuta la operación de la librería y
    arma el documento de salida; las tablas y el gráfico quedan en
    self.tables y self.figure.
    """

    COMMANDS = ("norm-eval", "norm-ball", "moc")

    @handle_errors
    def render(self) -> Dict[str, Any]:
        """
        Ejecutar el comando y devolver el documento de salida.

        Returns:
            dict: Documento con status "ok", "certificate_failure" o de error
        """
        if self.command == "norm-eval":
            return self._norm_eval(self.document)
        if self.command == "norm-ball":
            return self._norm_ball(self.document)
        return self._moc(self.document)

    def _norm_eval(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("seed", "word", "words", "check"), where="norm-eval")
        seed_doc = self.read_seed(doc)
        if "word" not in doc and "words" not in doc:
            raise SchemaError("norm-eval necesita word o words")
        norm = GeneratedNorm(seed_doc.seed, self.caps, "norm_eval")

        def evaluate(text: str) -> Dict[str, Any]:
            word = seed_doc.word(text)
            value = norm(word)
            return {
                "word": seed_doc.text(word),
                "value": self.codec.format_rational(value),
                "factors": [seed_doc.text(f) for f in norm.witness(word)],
            }

        payload: Dict[str, Any] = {}
        if "word" in doc:
            single = evaluate(doc["word"])
            payload.update(value=single["value"], factors=single["factors"])
        if "words" in doc:
            payload["values"] = [evaluate(text) for text in doc["words"]]
            self.tables["Valores"] = self.table_processor.ball_table(payload["values"], key="word")
        ok = True
        if doc.get("check"):
            verdict = check_partial_norm(seed_doc.seed, self.caps)
            ok = verdict.ok
            payload["partial_norm_check"] = {
                "ok": verdict.ok,
                "max_factors": verdict.max_factors,
                "counterexample": self.codec.to_json(verdict.counterexample, seed_doc.aliases),
            }
        logging.info(f"norm-eval: {len(payload.get('values', [])) + ('word' in doc)} palabras evaluadas")
        return self.envelope(payload, ok)

    def _norm_ball(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("seed", "radius", "verify"), ("radius",), "norm-ball")
        seed_doc = self.read_seed(doc)
        ball = GeneratedNorm(seed_doc.seed, self.caps, "norm_ball").ball(self.codec.rational(doc["radius"]))
        payload = {"ball": self.codec.encode_norm_ball(ball, seed_doc.text)}
        ok = True
        if doc.get("verify"):
            symmetry = ball.symmetry_violations()
            triangle = ball.triangle_violations()
            ok = not symmetry and not triangle
            payload["verification"] = {
                "symmetry_violations": [seed_doc.text(x) for x in symmetry],
                "triangle_violations": [[seed_doc.text(x), seed_doc.text(y)] for x, y in triangle],
            }
        self.tables["Bola"] = self.table_processor.ball_table(payload["ball"]["elements"])
        self.figure = self.chart_utils.create_norm_histogram(payload["ball"]["elements"],
                                                            f"Bola de radio {payload['ball']['radius']}")
        return self.envelope(payload, ok)

    def _moc(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("seed", "target", "element", "radius", "candidate", "transform",
                                        "domination"), ("element",), "moc")
        if "target" in doc:
            target = self.codec.target(doc["target"], self.caps)
            group, decode, encode = target.group, target.decode, target.encode
        else:
            seed_doc = self.read_seed(doc)
            group = generated_normed_group(seed_doc.seed, self.caps)
            decode, encode = seed_doc.word, seed_doc.text
        x = decode(doc["element"])
        radius = self.codec.rational(doc.get("radius", AppSettings.DEFAULT_MOC_RADIUS))
        ball, oracle = target_ball(group, radius, self.caps)
        moc = minimal_moc(ball, x, oracle, group.context)
        payload: Dict[str, Any] = {
            "element": encode(x),
            "radius": self.codec.format_rational(radius),
            "ball_size": len(ball),
            "moc": self.codec.encode_moc(moc),
        }
        if group.is_finite:
            payload["conjugacy_invariant"] = is_conjugacy_invariant(group)
        ok = True
        if "candidate" in doc:
            verdict = verify_moc(self.codec.moc(doc["candidate"]), x, ball, oracle, group.context)
            ok = verdict.ok
            witness = None
            if verdict.witness is not None:
                witness = dict(verdict.witness)
                witness["element"] = encode(witness["element"])
                witness["conjugate"] = encode(witness["conjugate"])
                witness = self.codec.to_json(witness)
            payload["verification"] = {"ok": verdict.ok, "checked": verdict.checked, "witness": witness}
        bound = None
        if "transform" in doc:
            options = self.codec.require_fields(doc["transform"], ("mode", "epsilon", "other"), ("mode",), "transform")
            other = self.codec.moc(options["other"]) if "other" in options else None
            epsilon = self.codec.rational(options["epsilon"]) if "epsilon" in options else None
            bound = self.codec.encode_moc(moc_transform(moc, options["mode"], other, epsilon))
            payload["transform"] = {"mode": options["mode"], "moc": bound}
        if "domination" in doc:
            c = self.codec.rational(doc["domination"])
            payload["domination"] = {"c": self.codec.format_rational(c),
                                     "radius": self.codec.format_rational(eventual_domination_radius(moc, c))}
        self.tables["MOC"] = self.table_processor.moc_table(payload["moc"])
        self.figure = self.chart_utils.create_moc_chart(payload["moc"], bound, f"MOC mínimo de {payload['element']}")
        return self.envelope(payload, ok)
