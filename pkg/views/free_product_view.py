"""
Vista de Productos Libres
=========================

Este módulo contiene la clase FreeProductView que atiende la construcción de
normas en productos libres y el oráculo de emparejamientos.

Características principales:
- free-product: σ', tabla de λ̃, r', r, Y, semilla final y transcripción de MOC
- Verificación de extensión sobre las bolas de cada factor
- Contraste opcional de la clausura con el oráculo de emparejamientos
- match-oracle: valor acotado de λ̃ y λ_ρ sobre palabras sin reducir
"""

import logging
from typing import Any, Dict, List, Optional

from config.settings import AppSettings
from groups.free_product import free_product_norm, moc_transcript, oracle_discrepancies, verify_extension
from groups.matches import Match, MatchOracle, enumerate_matches, lambda_rho
from groups.moc import Moc
from groups.norms import GeneratedNorm
from groups.words import reduce
from utils.error_handler import InputError, SchemaError, handle_errors
from views.command_view import CommandView


class FreeProductView(CommandView):
    """
    Vista de los comandos free-product y match-oracle.

    Las palabras del producto se escriben como g<i>.<j>; las semillas de
    cada factor usan su propia sintaxis (con alias si los declaran).
    """

    COMMANDS = ("free-product", "match-oracle")

    @handle_errors
    def render(self) -> Dict[str, Any]:
        """
        Ejecutar el comando y devolver el documento de salida.

        Returns:
            dict: Documento con status "ok", "certificate_failure" o de error
        """
        if self.command == "free-product":
            return self._free_product(self.document)
        return self._match_oracle(self.document)

    def _factor_mocs(self, raw: Optional[List[Any]], factor_docs) -> Optional[List[Optional[Dict[int, Moc]]]]:
        """MOC dados por factor: lista alineada con factors, cada uno {generador: moc} o null."""
        if raw is None:
            return None
        if not isinstance(raw, list) or len(raw) != len(factor_docs):
            raise SchemaError("mocs debe tener una entrada por factor")
        supplied: List[Optional[Dict[int, Moc]]] = []
        for entry, seed_doc in zip(raw, factor_docs):
            if entry is None:
                supplied.append(None)
                continue
            mocs = {}
            for text, moc_doc in entry.items():
                word = seed_doc.word(text)
                if len(word) != 1 or word.letters[0].sign < 0:
                    raise InputError(f"{text!r} no es un generador del factor")
                mocs[word.letters[0].index] = self.codec.moc(moc_doc)
            supplied.append(mocs)
        return supplied

    def _free_product(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("factors", "budget", "mocs", "oracle_length", "extension_radius"),
                                  ("factors", "budget"), "free-product")
        if not isinstance(doc["factors"], list) or not doc["factors"]:
            raise SchemaError("factors debe ser una lista no vacía de partial_norm")
        factor_docs = [self.codec.partial_norm(f) for f in doc["factors"]]
        budget = self.codec.rational(doc["budget"])
        result = free_product_norm([f.seed for f in factor_docs], budget, self.caps,
                                   self._factor_mocs(doc.get("mocs"), factor_docs))
        text = self.codec.to_json
        transcript = moc_transcript(result)
        extension_radius = self.codec.rational(doc.get("extension_radius", AppSettings.DEFAULT_MOC_RADIUS))
        mismatches = verify_extension(result, extension_radius)
        tilde = [{"word": text(x), "value": text(v)} for x, v in result.tilde.table.items()]
        payload: Dict[str, Any] = {
            "signature": list(result.signature.generators_per_factor),
            "sigma_seed": self.codec.encode_partial_norm(result.sigma_seed),
            "tilde": tilde,
            "budget": text(result.budget),
            "radii": text(result.radii),
            "r_prime": text(result.r_prime),
            "r": text(result.r),
            "y_set": text(result.y_set),
            "final_seed": self.codec.encode_partial_norm(result.final_seed),
            "moc_transcript": text(transcript),
            "extension": {"radius": text(extension_radius), "mismatches": text(mismatches)},
        }
        ok = all(entry["ok"] for entry in transcript) and not mismatches
        if "oracle_length" in doc:
            discrepancies = oracle_discrepancies(result, doc["oracle_length"], self.caps)
            payload["oracle"] = {"length": doc["oracle_length"], "discrepancies": text(discrepancies)}
            ok = ok and not discrepancies
        if self.trace:
            payload["factor_mocs"] = text(result.factor_mocs)
            payload["gammas"] = text(result.gammas)
            payload["derivations"] = {text(y): text(result.tilde.derivation(y)) for y in result.y_set}
        logging.info(f"free-product: |λ̃| = {len(tilde)}, |Y| = {len(result.y_set)}, válido = {ok}")
        self.tables["λ̃"] = self.table_processor.tilde_table(tilde)
        self.tables["Transcripción de MOC"] = self.table_processor.transcript_table(payload["moc_transcript"])
        self.figure = self.chart_utils.create_norm_histogram(
            [{"element": e["word"], "value": e["value"]} for e in tilde], "Valores de λ̃")
        return self.envelope(payload, ok)

    def _match_oracle(self, doc: Dict[str, Any]) -> Dict[str, Any]:
        self.codec.require_fields(doc, ("seed", "gammas", "word", "length", "raw", "match", "exhaustive"),
                                  ("gammas",), "match-oracle")
        seed_doc = self.read_seed(doc)
        signature = seed_doc.signature
        gammas = {}
        for text, moc_doc in doc["gammas"].items():
            word = seed_doc.word(text)
            if len(word) != 1 or word.letters[0].sign < 0:
                raise InputError(f"{text!r} no es un generador")
            gammas[word.letters[0]] = self.codec.moc(moc_doc)
        missing = [str(g) for g in signature.generators() if g not in gammas]
        if missing:
            raise InputError(f"Faltan los Γ de: {missing}")
        sigma = GeneratedNorm(seed_doc.seed, self.caps, "match_oracle")
        payload: Dict[str, Any] = {}
        if "word" in doc:
            x = seed_doc.word(doc["word"])
            length = doc.get("length", max(len(x), AppSettings.DEFAULT_ORACLE_LENGTH))
            oracle = MatchOracle(signature, sigma, gammas, length, self.caps, bool(doc.get("exhaustive")))
            payload.update(word=seed_doc.text(x), length=length,
                           value=self.codec.format_rational(oracle.value(x)),
                           upper_bound=self.codec.format_rational(sigma(x)))
        if "raw" in doc:
            raw = tuple(self.codec.raw_letters(doc["raw"], signature, seed_doc.aliases))
            report: Dict[str, Any] = {"raw": doc["raw"], "reduced": seed_doc.text(reduce(raw))}
            if "match" in doc:
                rho = Match.from_pairs(len(raw), [tuple(pair) for pair in doc["match"]])
                report["match"] = [list(p) for p in rho.pairs()]
                report["lambda_rho"] = self.codec.format_rational(lambda_rho(raw, rho, sigma, gammas))
            else:
                matches = enumerate_matches(raw, self.caps)
                values = [(lambda_rho(raw, rho, sigma, gammas), rho) for rho in matches]
                best, best_rho = min(values, key=lambda item: (item[0], item[1].partner))
                report.update(matches=len(matches), lambda_rho=self.codec.format_rational(best),
                              match=[list(p) for p in best_rho.pairs()])
            payload["raw_word"] = report
        if not payload:
            raise SchemaError("match-oracle necesita word o raw")
        return self.envelope(payload)
