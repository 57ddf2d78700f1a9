"""Rank certificates: construction, JSON form and exact replay."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field as dc_field

from ..algebra import linalg, poly
from ..algebra.fields import field_from_tag
from ..curves.model import HyperCurve


class ReplayError(ValueError):
    pass


@dataclass(frozen=True)
class NotFoundUpTo:
    """No witness of size <= r_max among the searched points (a field-scoped bound)."""

    r_max: int
    scope: str

    def to_dict(self):
        return {"not_found_up_to": self.r_max, "scope": self.scope}


@dataclass
class RankCert:
    target: list  # rows spanning the target (one row for a point)
    rank: int
    witness: list  # CrvPoint or (a, b) parameters
    field: object  # field the witness points live over
    embedding: object
    kind: str = "exact"  # "exact" (minimal over the searched scope) or "upper"
    seed: int | None = None
    attempts: int | None = None
    scope: str = ""
    evidence: list = dc_field(default_factory=list)

    def images(self):
        emb = _scope_embedding(self.embedding, self.field)
        return [emb.eval_point(w) for w in self.witness]

    def check(self):
        """Exact membership and deletion minimality."""
        F = self.field
        imgs = self.images()
        span = linalg.subspace_span(imgs, F, self.embedding.n)
        if not all(linalg.subspace_contains(span, list(r)) for r in self.target):
            return False
        if len(self.witness) != self.rank:
            return False
        for i in range(len(imgs)):
            rest = imgs[:i] + imgs[i + 1:]
            if not rest:
                continue
            sub = linalg.subspace_span(rest, F, self.embedding.n)
            if all(linalg.subspace_contains(sub, list(r)) for r in self.target):
                return False
        return True

    def to_dict(self, emb_manifest=None):
        F = self.field
        d = {
            "target": [[F.fmt(c) for c in r] for r in self.target],
            "rank": self.rank,
            "kind": self.kind,
            "witness": [_fmt_witness(w, F) for w in self.witness],
            "evidence": [[F.fmt(c) for c in row] for row in self.evidence],
            "field": F.tag,
            "scope": self.scope,
            "seed": self.seed,
            "attempts": self.attempts,
            "embedding": emb_manifest or self.embedding.manifest(),
        }
        d["replay_hash"] = replay_hash(d)
        return d


@dataclass(frozen=True)
class StratumCert:
    s: int
    scheme: object  # Divisor (curve) or tuple of (param, mult)
    target: tuple
    scope: str


def _scope_embedding(emb, F):
    if F == emb.field:
        return emb
    if F.kind == "Fp2" and emb.field.kind == "Fp":
        return emb.base_change()
    raise ReplayError("certificate field does not match the embedding")


def make_cert(emb, target_rows, witness, field, kind="exact", scope="", seed=None, attempts=None):
    """Build a certificate with span evidence (coefficients of each target row)."""
    F = field
    e = _scope_embedding(emb, F)
    imgs = [e.eval_point(w) for w in witness]
    evidence = []
    cols = linalg.transpose([list(v) for v in imgs])
    for r in target_rows:
        sol = linalg.solve(cols, list(r), F)
        if sol is None:
            raise ValueError("target is not in the span of the witness")
        evidence.append(sol)
    return RankCert(
        target=[tuple(r) for r in target_rows], rank=len(witness), witness=list(witness), field=F,
        embedding=emb, kind=kind, seed=seed, attempts=attempts, scope=scope, evidence=evidence,
    )


def minimize(emb, target_rows, witness, field):
    """Greedy deletion until every point is needed."""
    e = _scope_embedding(emb, field)
    w = list(witness)
    i = 0
    while i < len(w):
        rest = w[:i] + w[i + 1:]
        if rest:
            span = linalg.subspace_span([e.eval_point(x) for x in rest], field, emb.n)
            if all(linalg.subspace_contains(span, list(r)) for r in target_rows):
                w = rest
                continue
        i += 1
    return w


def _fmt_witness(w, F):
    if isinstance(w, tuple):
        return f"({F.fmt(w[0])}:{F.fmt(w[1])})"
    return w.fmt(F)


def canonical_json(d):
    return json.dumps(d, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def replay_hash(d):
    body = {k: v for k, v in d.items() if k != "replay_hash"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()


# -- replay --------------------------------------------------------------------


def embedding_from_manifest(man):
    from ..embedding import RationalNormalCurve, embed

    F = field_from_tag(man["field"])
    if "rational_normal_curve" in man:
        return RationalNormalCurve(int(man["rational_normal_curve"]), F)
    C = HyperCurve(poly.parse(man["f"], F), F)
    e = embed(C, C.parse_divisor(man["divisor"]))
    if [h.fmt(F) for h in e.basis] != list(man["basis"]):
        raise ReplayError("basis in manifest does not match the recomputed basis")
    return e


def _parse_witness(text, emb, F):
    m = re.fullmatch(r"\(([^:]+):([^)]+)\)", text)
    if m:
        return (F.parse(m.group(1)), F.parse(m.group(2)))
    from ..embedding import RationalNormalCurve

    if isinstance(emb, RationalNormalCurve):
        raise ReplayError(f"bad parameter {text!r}")
    C = _scope_embedding(emb, F).curve
    return C.parse_point(text)


def replay(d):
    """Return ``(ok, message)`` for a certificate dictionary."""
    if d.get("replay_hash") != replay_hash(d):
        return False, "replay_hash mismatch"
    try:
        emb = embedding_from_manifest(d["embedding"])
        F = field_from_tag(d["field"])
        target = [[F.parse(c) for c in r] for r in d["target"]]
        witness = [_parse_witness(w, emb, F) for w in d["witness"]]
    except (ValueError, KeyError) as exc:
        return False, f"malformed certificate: {exc}"
    cert = RankCert(target=target, rank=int(d["rank"]), witness=witness, field=F, embedding=emb, kind=d.get("kind", "exact"))
    if not cert.check():
        return False, "span membership or minimality fails"
    return True, "ok"
