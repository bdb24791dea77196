"""
Vista de Aproximaciones Finitas
===============================

Este módulo contiene la clase ApproximationView que atiende los comandos que
construyen o verifican aproximaciones por grupos finitos normados.

Características principales:
- finite-approx: grupo de permutaciones H, monomorfismo parcial e informes
  de isometría, multiplicatividad y conservación de MOC
- approximate: cadena completa con certificado de ε-homomorfía y traza
- eps-check: verificación de una aplicación dada entre grupos normados
"""

import logging
from typing import Any, Dict, Hashable, List

from groups.approximation import Approximation, EpsHomCertificate, approximate, eps_hom_check
from groups.finite_approx import default_moc_requests, finite_approx
from groups.norms import GeneratedNorm
from utils.error_handler import InputError, SchemaError, handle_errors
from views.command_view import CommandView


class ApproximationView(CommandView):
    """
    Vista de los comandos finite-approx, approximate y eps-check.

    Los fallos de certificado no se lanzan: se informan en el documento con
    status "certificate_failure".
    """

    COMMANDS = ("finite-approx", "approximate", "eps-check")

    @handle_errors
    def render(self) -> Dict[str, Any]:
        """
        Ejecutar el comando y devolver el documento de salida.

        Returns:
            dict: Documento con status "ok", "certificate_failure" o de error
        """
        if self.command == "finite-approx":
            return self._finite_approx(self.document)
        if self.command == "approximate":
            return self._approximate(self.document)
        return self._eps_check(self.document)

    def _finite_approx(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("seed", "requested", "requested_radius", "moc_requests"),
                                  where="finite-approx")
        seed_doc = self.read_seed(doc)
        norm = GeneratedNorm(seed_doc.seed, self.caps, "finite_approx_source")
        if "requested" in doc:
            requested = [seed_doc.word(text) for text in doc["requested"]]
        elif "requested_radius" in doc:
            requested = norm.ball(self.codec.rational(doc["requested_radius"])).elements()
        else:
            raise SchemaError("finite-approx necesita requested o requested_radius")
        mocs = doc.get("moc_requests", "minimal")
        if mocs == "minimal":
            moc_requests = default_moc_requests(norm)
        elif isinstance(mocs, list):
            moc_requests = []
            for entry in mocs:
                self.codec.require_fields(entry, ("word", "moc"), ("word", "moc"), "moc_requests")
                moc_requests.append((seed_doc.word(entry["word"]), self.codec.moc(entry["moc"])))
        else:
            raise SchemaError("moc_requests debe ser \"minimal\" o una lista [{word, moc}]")

        result = finite_approx(norm, requested, moc_requests, self.caps)
        action, aliases = result.action, seed_doc.aliases
        text = lambda value: self.codec.to_json(value, aliases)
        payload = {
            "finite_group": self.codec.encode_permutation_group(action.vertices, action.generators,
                                                                result.seed, aliases),
            "partial_mono": self.codec.encode_partial_mono(result.phi.domain, result.phi.images,
                                                           result.seed.carrier, aliases),
            "parameters": text(result.parameters),
            "isometry": text(result.isometry),
            "moc_report": text(result.moc_report),
            "multiplicative": {
                "checked": result.multiplicative["checked"],
                "failures": text(result.multiplicative["failures"]),
                "inverse_failures": text(result.multiplicative["inverse_failures"]),
                "injective": result.multiplicative["injective"],
            },
        }
        self.tables["Isometría"] = self.table_processor.ball_table(
            [{"element": e["element"], "value": e["sigma"]} for e in payload["isometry"]])
        self.tables["MOC"] = self.table_processor.transcript_table(payload["moc_report"])
        return self.envelope(payload, result.ok)

    def _approximate(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("target", "subset", "epsilon", "route"), ("target", "subset", "epsilon"),
                                  "approximate")
        target = self.codec.target(doc["target"], self.caps)
        subset = [target.decode(raw) for raw in doc["subset"]]
        epsilon = self.codec.rational(doc["epsilon"])
        result = approximate(target.group, subset, epsilon, self.caps, doc.get("route"))
        group_doc, image_of = self._encode_approximation(result)
        text = self.codec.to_json
        phi = [{"element": target.encode(f), "image": image_of(result.phi[f])} for f in subset]
        certificate = self._encode_certificate(result.certificate, target.encode, image_of)
        payload = {
            "route": result.route,
            "finite_group": group_doc,
            "phi": phi,
            "words": [{"element": target.encode(f), "word": text(w)} for f, w in result.words.items()],
            "certificate": certificate,
            "trace": self._encode_trace(result.trace, target.encode),
        }
        self.tables["Violaciones"] = self.table_processor.violations_table(certificate["violations"])
        self.tables["MOC"] = self.table_processor.transcript_table(certificate["moc_report"])
        if certificate["moc_report"]:
            first = certificate["moc_report"][0]
            self.figure = self.chart_utils.create_moc_chart(first["finite_moc"], first["bound"],
                                                            f"Γ de φ({first['element']}) contra 2Γ + ε·id")
        if not result.certificate.ok:
            logging.warning("approximate: el certificado no es válido")
        return self.envelope(payload, result.certificate.ok)

    def _encode_approximation(self, result: Approximation):
        """Documento finite_group de H y la función que nombra sus elementos."""
        if result.route == "ball_action":
            approximation = result.details["finite_approx"]
            elements = approximation.seed.carrier
            index = {p: i for i, p in enumerate(elements)}
            group_doc = self.codec.encode_permutation_group(approximation.action.vertices,
                                                            approximation.action.generators,
                                                            approximation.seed)
            return group_doc, lambda p: index[p] if p in index else p.images.tolist()
        context = result.group.context
        return self.codec.encode_table_group(result.group), context.label_of

    def _encode_certificate(self, certificate: EpsHomCertificate, encode, image_of) -> Dict[str, Any]:
        text = self.codec.to_json
        violations = []
        for v in certificate.violations:
            entry = {"condition": v["condition"], "g": encode(v["g"]), "defect": text(v["defect"])}
            if "h" in v:
                entry["h"] = encode(v["h"])
            violations.append(entry)
        moc_report = [{
            "element": encode(entry["element"]),
            "image": image_of(entry["image"]),
            "ok": entry["ok"],
            "radii": text(entry["radii"]),
            "exceeded": text(entry["exceeded"]),
            "finite_moc": text(entry["finite_moc"]),
            "bound": text(entry["bound"]),
        } for entry in certificate.moc_report]
        return {
            "ok": certificate.ok,
            "epsilon": text(certificate.epsilon),
            "checked": certificate.checked,
            "violations": violations,
            "relation_defect": text(certificate.relation_defect),
            "norm_defect": text(certificate.norm_defect),
            "moc_report": moc_report,
        }

    def _encode_trace(self, trace: List[Dict[str, Any]], encode) -> List[Dict[str, Any]]:
        text = self.codec.to_json
        encoded = []
        for step in trace:
            step = dict(step)
            if step["stage"] == "pullback":
                step["words"] = [{"element": encode(f), "word": text(w)} for f, w in step["words"].items()]
            if step["stage"] == "relation_defects":
                step["defects"] = [{**d, "g": encode(d["g"]), "h": encode(d["h"])} for d in step["defects"]]
            if not self.trace and step["stage"] in ("pullback", "relation_defects"):
                step = {k: v for k, v in step.items() if k not in ("words", "defects")}
            encoded.append(text(step))
        return encoded

    def _eps_check(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("source", "target", "subset", "phi", "epsilon"),
                                  ("source", "target", "subset", "phi", "epsilon"), "eps-check")
        source = self.codec.target(doc["source"], self.caps)
        target = self.codec.target(doc["target"], self.caps)
        subset = [source.decode(raw) for raw in doc["subset"]]
        phi: Dict[Hashable, Hashable] = {}
        for entry in doc["phi"]:
            self.codec.require_fields(entry, ("element", "image"), ("element", "image"), "phi")
            phi[source.decode(entry["element"])] = target.decode(entry["image"])
        if not all(f in phi for f in subset):
            raise InputError("phi debe estar definida en todo el subconjunto")
        certificate = eps_hom_check(phi, source.group, subset, target.group, self.codec.rational(doc["epsilon"]))
        encoded = self._encode_certificate(certificate, source.encode, target.encode)
        self.tables["Violaciones"] = self.table_processor.violations_table(encoded["violations"])
        return self.envelope({"certificate": encoded}, certificate.ok)
