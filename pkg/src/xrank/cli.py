"""Command line: ``xrank <command> [options]``.

Exit codes: 0 pass, 1 fail, 2 usage error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from dataclasses import dataclass, fields, replace

from .algebra import linalg, poly
from .algebra.fields import FieldError, field_from_tag
from .curves.model import CurveError, HyperCurve
from .rank.certs import NotFoundUpTo, RankCert, canonical_json, replay, replay_hash

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_VERDICT_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    field: str = "Fp:101"
    f: str = "x^5-5*x^3+4*x"
    divisor: str = ""
    point: str = ""
    form: str = ""
    O: str = "auto"
    rmax: int = 3
    seed: int = 0
    samples: int = 0
    n: int = 0
    s: int = 0
    trials: int = 0
    out: str = "reports"

    @property
    def p(self):
        return field_from_tag(self.field).characteristic

    def fmt(self):
        return "".join(f"{fd.name}={getattr(self, fd.name)}\n" for fd in fields(self))


_INT_KEYS = {fd.name for fd in fields(RunConfig) if fd.type == "int"}
_KEYS = {fd.name for fd in fields(RunConfig)} | {"p"}


def _validate(cfg):
    try:
        F = field_from_tag(cfg.field)
    except FieldError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.f:
        G = F.base if F.kind == "Fp2" else F
        try:
            HyperCurve(poly.parse(cfg.f, G), G)
        except (CurveError, ValueError) as exc:
            raise ConfigError(f"bad curve f = {cfg.f!r}: {exc}") from None
    return cfg


def parse_config(text, source="<config>"):
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    vals = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ConfigError(f"{source}:{lineno}:{col}: expected key=value")
        key, val = line.split("=", 1)
        k = key.strip()
        col = len(key) - len(key.lstrip()) + 1
        if k not in _KEYS:
            raise ConfigError(f"{source}:{lineno}:{col}: unknown key {k!r}")
        v = val.strip()
        if k in _INT_KEYS or k == "p":
            try:
                v = int(v)
            except ValueError:
                vcol = len(key) + 2 + len(val) - len(val.lstrip())
                raise ConfigError(f"{source}:{lineno}:{vcol}: {k} must be an integer") from None
        vals[k] = v
    p = vals.pop("p", None)
    if p is not None:
        if "field" in vals and vals["field"] not in (f"Fp:{p}", f"Fp2:{p}"):
            raise ConfigError(f"{source}: p = {p} conflicts with field = {vals['field']}")
        vals.setdefault("field", f"Fp:{p}")
    try:
        return _validate(RunConfig(**vals))
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), source=path)


# -- output ----------------------------------------------------------------------


def _atomic_write(path, data):
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_report(report, directory):
    """Write ``<id>-<seed>-<hash>.json`` and append a row to ``summary.csv``."""
    os.makedirs(directory, exist_ok=True)
    d = report.to_dict()
    h = d["replay_hash"]
    name = f"{d['id']}-{d['seed'] if d['seed'] is not None else 'na'}-{h}.json"
    path = os.path.join(directory, name)
    _atomic_write(path, canonical_json(d) + "\n")
    summary = os.path.join(directory, "summary.csv")
    new = not os.path.exists(summary)
    with open(summary, "a", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if new:
            w.writerow(["id", "seed", "verdict", "replay_hash", "file", "runtime_ms"])
        w.writerow([d["id"], d["seed"], d["verdict"], h, name, d["runtime_ms"] if d["runtime_ms"] is not None else ""])
    return path


def replay_file(path):
    """Replay a certificate or every certificate inside a report."""
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    if "witnesses" in d and "verdict" in d:
        if d.get("replay_hash") != replay_hash(d):
            return False, "report replay_hash mismatch"
        for i, w in enumerate(d["witnesses"]):
            ok, msg = replay(w)
            if not ok:
                return False, f"witness {i}: {msg}"
        return True, f"ok ({len(d['witnesses'])} certificates)"
    return replay(d)


# -- commands --------------------------------------------------------------------


def _curve_embedding(cfg):
    from .embedding import embed

    if not cfg.divisor:
        raise ConfigError("--divisor is required")
    F = field_from_tag(cfg.field)
    C = HyperCurve(poly.parse(cfg.f, F), F)
    return embed(C, C.parse_divisor(cfg.divisor))


def _parse_target(emb, text):
    """A projective point ``(a:b:...)`` or a curve point ``(x,y)`` / ``inf0``."""
    F = emb.field
    t = text.strip()
    if ":" in t and t.startswith("("):
        v = [F.parse(c) for c in t[1:-1].split(":")]
        if len(v) != emb.n + 1 or not any(not F.is_zero(c) for c in v):
            raise ConfigError(f"point must have {emb.n + 1} coordinates, not all zero")
        return linalg.normalize(v, F)
    return emb.eval_point(emb.curve.parse_point(t))


def _print(obj):
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


def cmd_embed(cfg, args):
    e = _curve_embedding(cfg)
    man = e.manifest()
    man["rational_points"] = len(e.rational_images())
    _print(man)
    return EXIT_PASS


def cmd_rank(cfg, args):
    from .rank.search import conjugate_pair_rank2, exhaustive_rank

    e = _curve_embedding(cfg)
    if not cfg.point:
        raise ConfigError("--point is required")
    P = _parse_target(e, cfg.point)
    r = exhaustive_rank(e, P, cfg.rmax)
    if isinstance(r, RankCert):
        _print(r.to_dict())
        return EXIT_PASS
    out = r.to_dict()
    if cfg.rmax >= 2:
        c = conjugate_pair_rank2(e, P)
        if c is not None:
            out["fp2_certificate"] = c.to_dict()
            _print(out)
            return EXIT_PASS
    _print(out)
    return EXIT_INCONCLUSIVE


def cmd_stratum(cfg, args):
    from .rank.search import stratum

    e = _curve_embedding(cfg)
    P = _parse_target(e, cfg.point)
    r = stratum(e, P, cfg.rmax)
    if isinstance(r, NotFoundUpTo):
        _print(r.to_dict())
        return EXIT_INCONCLUSIVE
    F = e.field
    _print({"border_rank": r.s, "scheme": r.scheme.fmt(F), "target": [F.fmt(c) for c in r.target], "scope": r.scope})
    return EXIT_PASS


def cmd_tangent(cfg, args):
    from .rank.witnesses import HypothesisError, tangent_decomposition, tangent_points_from_A

    e = _curve_embedding(cfg)
    F = e.field
    if not cfg.O or cfg.O == "auto":
        raise ConfigError("--O (the tangency point) is required")
    Q = e.curve.parse_point(cfg.O)
    try:
        if cfg.point:
            r = tangent_decomposition(e, Q, _parse_target(e, cfg.point), seed=cfg.seed)
            if isinstance(r, NotFoundUpTo):
                _print(r.to_dict() | {"histogram": r.histogram})
                return EXIT_INCONCLUSIVE
            _print(r.to_dict())
            return EXIT_PASS
        rows = tangent_points_from_A(e, Q, samples=cfg.samples or 50, seed=cfg.seed)
    except HypothesisError as exc:
        raise ConfigError(str(exc)) from None
    _print([{"A": A.fmt(F), "point": [F.fmt(c) for c in P], "attempt": k} for A, P, k in rows])
    return EXIT_PASS if rows else EXIT_INCONCLUSIVE


def cmd_sylvester(cfg, args):
    from .rank.sylvester import BinaryForm, sylvester_rank

    if not cfg.form:
        raise ConfigError("--form is required")
    F = field_from_tag(cfg.field)
    res = sylvester_rank(BinaryForm.parse(cfg.form, F), seed=cfg.seed)
    out = res.summary()
    if res.cert is not None:
        out["certificate"] = res.cert.to_dict()
    _print(out)
    return EXIT_PASS


_VERIFY_DEFAULTS = {
    "p2_0": {"p": 101}, "grado6": {"p": 101, "samples": 500}, "p3": {"p": 101}, "torsion": {"p": 101},
    "z1_a4": {"p": 61, "n": 5}, "a2": {"p": 61, "n": 8, "samples": 5}, "a3": {"p": 61, "n": 8, "s": 2, "trials": 20},
}


def _verify_kwargs(vid, cfg, args):
    from .verify import DEFAULT_F

    kw = dict(_VERIFY_DEFAULTS[vid])
    if args.p_given:
        kw["p"] = cfg.p
    kw.update({"f": cfg.f or DEFAULT_F, "seed": cfg.seed, "O": cfg.O if vid in ("p2_0", "p3") else None})
    if vid in ("z1_a4",) and cfg.O != "auto":
        kw["Q"] = cfg.O
    if cfg.divisor:
        kw["d"] = cfg.divisor
    for k in ("samples", "n", "s", "trials"):
        if getattr(cfg, k):
            kw[k] = getattr(cfg, k)
    if args.timing:
        kw["timing"] = True
    return kw


def cmd_verify(cfg, args):
    from .verify import VERIFIERS, run_verifier

    ids = VERIFIERS if args.id == "all" else (args.id,)
    if args.id != "all" and args.id not in VERIFIERS:
        raise ConfigError(f"unknown verifier {args.id!r}; choose from {', '.join(VERIFIERS)} or all")
    worst = EXIT_PASS
    for vid in ids:
        try:
            rep = run_verifier(vid, **_verify_kwargs(vid, cfg, args))
        except (ValueError, CurveError) as exc:
            raise ConfigError(f"{vid}: {exc}") from None
        path = emit_report(rep, cfg.out)
        line = {"id": rep.id, "verdict": rep.verdict, "file": path, "counts": _headline(rep)}
        if rep.failed:
            line["failed"] = rep.failed
        sys.stdout.write(json.dumps(line, sort_keys=True) + "\n")
        code = _VERDICT_EXIT[rep.verdict]
        worst = max(worst, code, key=lambda c: {EXIT_PASS: 0, EXIT_INCONCLUSIVE: 1, EXIT_FAIL: 2}[c])
    return worst


def _headline(rep):
    keep = ("rank3_points", "rank2_points", "exceptional_points", "trisecant_triples", "quadric_space_dim",
            "subspace_rank", "certificates", "J2_scan", "J3_scan", "histogram")
    return {k: rep.counts[k] for k in keep if k in rep.counts}


def cmd_replay(cfg, args):
    try:
        ok, msg = replay_file(args.file)
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"replay: {exc}\n")
        return EXIT_FAIL
    sys.stdout.write(("ok: " if ok else "FAILED: ") + msg + "\n")
    return EXIT_PASS if ok else EXIT_FAIL


# -- argument parsing --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _common(sp):
    sp.add_argument("--config", help="key=value file; flags override its keys")
    sp.add_argument("--field")
    sp.add_argument("--f", dest="f")
    sp.add_argument("--p", type=int)
    sp.add_argument("--divisor")
    sp.add_argument("--point")
    sp.add_argument("--O", dest="O")
    sp.add_argument("--rmax", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--out")
    sp.add_argument("--show-config", action="store_true", help="echo the resolved configuration to stderr")


def build_parser():
    ap = _Parser(prog="xrank", description="X-ranks on rational normal curves and genus-2 curves.")
    sub = ap.add_subparsers(dest="cmd", parser_class=_Parser)
    for name, helptext in (("embed", "embed a curve by a divisor"), ("rank", "exhaustive X-rank of a point"),
                           ("stratum", "border-rank stratum of a point"), ("tangent", "tangent-line witnesses")):
        _common(sub.add_parser(name, help=helptext))
    sp = sub.add_parser("sylvester", help="Waring rank of a binary form")
    _common(sp)
    sp.add_argument("--form")
    sp = sub.add_parser("verify", help="run a verifier (or all)")
    sp.add_argument("id")
    sp.add_argument("--timing", action="store_true", help="record runtime_ms (breaks byte-identical output)")
    _common(sp)
    sp = sub.add_parser("replay", help="replay a certificate or report file")
    sp.add_argument("file")
    return ap


def resolve_config(args):
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    over = {}
    for k in ("field", "f", "divisor", "point", "O", "rmax", "seed", "samples", "n", "s", "trials", "out", "form"):
        v = getattr(args, k, None)
        if v is not None:
            over[k] = v
    p = getattr(args, "p", None)
    if p is not None:
        if "field" in over and over["field"] not in (f"Fp:{p}", f"Fp2:{p}"):
            raise ConfigError(f"--p {p} conflicts with --field {over['field']}")
        over.setdefault("field", f"Fp:{p}")
    args.p_given = p is not None or "field" in over or bool(getattr(args, "config", None))
    return _validate(replace(cfg, **over))


COMMANDS = {"embed": cmd_embed, "rank": cmd_rank, "stratum": cmd_stratum, "tangent": cmd_tangent,
            "sylvester": cmd_sylvester, "verify": cmd_verify, "replay": cmd_replay}


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if not args.cmd:
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.cmd == "replay":
            return cmd_replay(None, args)
        if args.cmd == "sylvester" and args.field is None and args.p is None and not args.config:
            args.field = "Q"
        cfg = resolve_config(args)
        if args.show_config:
            sys.stderr.write(cfg.fmt())
        return COMMANDS[args.cmd](cfg, args)
    except (ConfigError, FieldError, CurveError, poly.PolyParseError) as exc:
        sys.stderr.write(f"xrank: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"xrank: error: {exc}\n")
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
