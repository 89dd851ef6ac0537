"""Command-line front end.

Every verb reads JSON documents, runs one library operation and prints a JSON
report on stdout (a one-line summary goes to stderr unless --json-only).
Exit codes: 0 success, 1 verified mathematical failure, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import fixtures as fx
from .errors import FFGSError, NotFlat, SchemaError
from .hopf import (cartier_dual, factor_morphism, is_closed_immersion, is_schematically_dominant,
                   kernel_ideal, quotient_algebra)
from .models import GenericSubgroup, flat_closure_subgroup, prolong_overgroup, quotient_model
from .rings import BaseRing
from .serialize import (Loader, algebra_to_json, dumps, entry_to_json, morphism_to_json,
                        scalar_to_json, triple_to_json, write)
from .torsors import DEFAULT_STEP_BUDGET, contract, extend_torsor, generic_fiber_triple, reductions

VERBS = ("check", "factor", "kernel", "quotient", "dual", "close", "prolong", "extend", "contract",
         "reduce", "fixtures")


class Failure(Exception):
    """A verified negative answer: reported with exit code 1."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result or {}


def _mat(M, base=None):
    return [[entry_to_json(base, x) for x in r] for r in M.rows]


def _rows(rows):
    return [[scalar_to_json(x) for x in r] for r in rows]


def _checks(rep):
    return rep.to_dict()


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------

class Context:
    def __init__(self, args):
        self.args = args
        self.loader = Loader()
        self.base = None
        if getattr(args, "base", None):
            doc = self.loader.read(args.base)
            try:
                self.base = BaseRing.from_dict(doc)
            except (KeyError, ValueError, TypeError) as exc:
                raise SchemaError(f"bad base document: {exc}", "/ring") from None
        self.out = Path(args.out) if getattr(args, "out", None) else None
        self.written = []

    def load(self, path, kind):
        obj = self.loader.parse(path, kind)
        if self.base is not None:
            obj = self._rebase(obj, kind)
        return obj

    def _rebase(self, obj, kind):
        target = self.base
        here = obj.base.scalar if kind == "triple" else obj.base
        if target == here:
            return obj
        if target != here.fraction_field():
            raise SchemaError(f"cannot change base from {here} to {target}", "/ring")
        if kind == "hopf":
            return obj.base_change(target)
        if kind == "morphism":
            return obj.base_change(target)
        if kind == "triple":
            return generic_fiber_triple(obj)
        raise SchemaError(f"--base does not apply to {kind} documents", "/ring")

    def emit(self, name, doc):
        if self.out is None:
            return
        path = self.out / name
        write(path, doc)
        self.written.append(name)


def _budget(args):
    return args.step_budget if args.step_budget is not None else DEFAULT_STEP_BUDGET


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_check(ctx, args):
    kind = {"hopf": "hopf", "morphism": "morphism", "triple": "triple",
            "triple-morphism": "triple_morphism"}[args.kind]
    obj = ctx.load(args.file, kind)
    rep = obj.verify()
    result = {"kind": args.kind, "rank": _rank(obj), "verification": _checks(rep)}
    if kind == "triple":
        result["torsor_determinant"] = entry_to_json(obj.base, obj.torsor_determinant())
    if not rep.ok:
        raise Failure("verification failed: " + ", ".join(c.name for c in rep.failures()), result)
    return result, f"{args.kind} {args.file}: all axioms hold"


def _rank(obj):
    return getattr(obj, "rank", None) if not hasattr(obj, "matrix") else list(obj.matrix.shape)


def _morphism_input(ctx, path):
    f = ctx.load(path, "morphism")
    rep = f.verify()
    if not rep.ok:
        raise Failure("input is not a Hopf morphism", {"verification": _checks(rep)})
    return f


def cmd_factor(ctx, args):
    f = _morphism_input(ctx, args.morphism)
    s, i, middle = factor_morphism(f)
    exact = (i.matrix @ s.matrix) == f.matrix
    result = {
        "middle_rank": middle.rank,
        "dominant": _rows(s.matrix.rows),
        "immersion": _rows(i.matrix.rows),
        "composite_exact": exact,
        "dominant_is_dominant": is_schematically_dominant(s),
        "immersion_is_closed": is_closed_immersion(i),
        "middle_verification": _checks(middle.verify()),
    }
    ctx.emit("source.json", algebra_to_json(f.source))
    ctx.emit("middle.json", algebra_to_json(middle))
    ctx.emit("target.json", algebra_to_json(f.target))
    ctx.emit("dominant.json", morphism_to_json(s, "source.json", "middle.json"))
    ctx.emit("immersion.json", morphism_to_json(i, "middle.json", "target.json"))
    ok = exact and result["dominant_is_dominant"] and result["immersion_is_closed"]
    if not ok:
        raise Failure("factorization checks failed", result)
    return result, f"factor: middle rank {middle.rank}"


def cmd_kernel(ctx, args):
    f = _morphism_input(ctx, args.morphism)
    I = kernel_ideal(f)
    result = {"ideal": _rows(I.basis.rows)}
    try:
        sub = quotient_algebra(f.source, I, name="kernel")
    except NotFlat as exc:
        result["flat"] = False
        result["elementary_divisors"] = [scalar_to_json(d) for d in exc.divisors]
        raise Failure("kernel is not flat", result) from None
    result.update({"flat": True, "rank": sub.rank, "inclusion": _rows(sub.inclusion.matrix.rows)})
    ctx.emit("source.json", algebra_to_json(f.source))
    ctx.emit("kernel.json", algebra_to_json(sub.algebra))
    ctx.emit("inclusion.json", morphism_to_json(sub.inclusion, "kernel.json", "source.json"))
    return result, f"kernel: flat of rank {sub.rank}"


def cmd_quotient(ctx, args):
    u = _morphism_input(ctx, args.morphism)
    G = ctx.load(args.ambient, "hopf")
    _ambient_check(G, u.source)
    res = quotient_model(G, u)
    result = {
        "model_rank": res.model.rank,
        "projection": _rows(res.projection.matrix.rows),
        "witness": _rows(res.witness.rows),
        "closure_ideal": _rows(res.closure.ideal.basis.rows),
        "model_verification": _checks(res.model.verify()),
    }
    ctx.emit("source.json", algebra_to_json(G))
    ctx.emit("model.json", algebra_to_json(res.model))
    ctx.emit("projection.json", morphism_to_json(res.projection, "source.json", "model.json"))
    return result, f"quotient: model of rank {res.model.rank}"


def cmd_dual(ctx, args):
    A = ctx.load(args.algebra, "hopf")
    D = cartier_dual(A)
    doc = algebra_to_json(D)
    result = {"rank": D.rank, "algebra": doc, "verification": _checks(D.verify())}
    ctx.emit("dual.json", doc)
    return result, f"dual: rank {D.rank}"


def _ambient_check(G, target):
    K = G.base.fraction_field()
    if G.base_change(K) != target:
        raise SchemaError("morphism does not live on the generic fiber of the ambient group", "")


def cmd_close(ctx, args):
    f = _morphism_input(ctx, args.immersion)
    G = ctx.load(args.ambient, "hopf")
    _ambient_check(G, f.target)
    res = flat_closure_subgroup(GenericSubgroup.from_immersion(G, f))
    result = {
        "rank": res.model.rank,
        "ideal": _rows(res.ideal.basis.rows),
        "immersion": _rows(res.immersion.matrix.rows),
        "witness": _rows(res.witness.rows),
        "model_verification": _checks(res.model.verify()),
    }
    ctx.emit("ambient.json", algebra_to_json(G))
    ctx.emit("closure.json", algebra_to_json(res.model))
    ctx.emit("immersion.json", morphism_to_json(res.immersion, "closure.json", "ambient.json"))
    return result, f"close: flat closure of rank {res.model.rank}"


def cmd_prolong(ctx, args):
    u = _morphism_input(ctx, args.immersion)
    G = ctx.load(args.ambient, "hopf")
    _ambient_check(G, u.source)
    if not args.model or not args.iso:
        raise SchemaError("prolong needs --model and --iso; no model is constructed automatically", "")
    L = ctx.load(args.model, "hopf")
    iso = ctx.load(args.iso, "morphism")
    res = prolong_overgroup(G, u, L, iso.matrix)
    result = {
        "model_rank": res.model.rank,
        "morphism": _rows(res.morphism.matrix.rows),
        "witness": _rows(res.witness.rows),
        "cartesian": res.cartesian,
        "model_verification": _checks(res.model.verify()),
        "morphism_verification": _checks(res.morphism.verify()),
    }
    ctx.emit("source.json", algebra_to_json(G))
    ctx.emit("model.json", algebra_to_json(res.model))
    ctx.emit("morphism.json", morphism_to_json(res.morphism, "source.json", "model.json"))
    if not res.cartesian:
        raise Failure("prolongation square is not cartesian", result)
    return result, f"prolong: model of rank {res.model.rank}, cartesian"


def cmd_extend(ctx, args):
    yK = ctx.load(args.torsor, "triple")
    P = ctx.load(args.ambient, "triple")
    gamma = _morphism_input(ctx, args.gamma)
    phi = ctx.load(args.witness, "triple_morphism") if args.witness else None
    res = extend_torsor(yK, P, gamma, phi, args.degree_bound, _budget(args))
    w = res.torsor_witness
    result = {
        "group_rank": res.group.rank,
        "kernel_ideal": _rows(res.kernel_ideal.basis.rows),
        "closure_ideal": _rows(res.closure_ideal.basis.rows),
        "projection": _rows(res.projection.matrix.rows),
        "group_witness": _rows(res.group_witness.rows),
        "torsor_witness": _mat(w.alpha, w.source.base),
        "triple_verification": _checks(res.triple.verify()),
        "witness_verification": _checks(w.verify()),
    }
    ctx.emit("group.json", algebra_to_json(res.group))
    ctx.emit("triple.json", triple_to_json(res.triple, "group.json"))
    return result, f"extend: torsor of rank {res.triple.rank} under a group of rank {res.group.rank}"


def cmd_contract(ctx, args):
    t = ctx.load(args.triple, "triple")
    f = _morphism_input(ctx, args.morphism)
    cp = contract(t, f, args.degree_bound, _budget(args))
    out = cp.triple
    rep = out.verify()
    result = {
        "rank": out.rank,
        "invariant_basis": [[entry_to_json(t.base, x) for x in r] for r in cp.basis.rows],
        "triple": triple_to_json(out, "group.json"),
        "verification": _checks(rep),
    }
    ctx.emit("group.json", algebra_to_json(out.group))
    ctx.emit("triple.json", triple_to_json(out, "group.json"))
    if not rep.ok:
        raise Failure("contracted product fails verification", result)
    return result, f"contract: rank {out.rank} torsor"


def cmd_reduce(ctx, args):
    t = ctx.load(args.triple, "triple")
    i = _morphism_input(ctx, args.subgroup)
    reds = reductions(t, i, _budget(args), args.degree_bound)
    items = []
    for k, r in enumerate(reds):
        items.append({
            "character": [entry_to_json(t.base, x) for x in r.character],
            "projection": _mat(r.morphism.alpha, t.base),
            "triple": triple_to_json(r.triple, "group.json"),
        })
        ctx.emit(f"reduction_{k}.json", triple_to_json(r.triple, "group.json"))
    if reds:
        ctx.emit("group.json", algebra_to_json(i.source))
    result = {"reduces": bool(reds), "count": len(reds), "reductions": items}
    return result, f"reduce: {len(reds)} reduction(s)"


def fixtures_export(directory) -> list:
    """Write the whole catalog and a manifest; returns the manifest entries."""
    out = Path(directory)
    entries = []
    for d in fx.catalog():
        obj = d.make()
        fname = f"{d.name}.json"
        if d.kind == "hopf":
            write(out / fname, algebra_to_json(obj))
        elif d.kind == "morphism":
            write(out / "parts" / f"{d.name}.source.json", algebra_to_json(obj.source))
            write(out / "parts" / f"{d.name}.target.json", algebra_to_json(obj.target))
            write(out / fname, morphism_to_json(obj, f"parts/{d.name}.source.json",
                                                f"parts/{d.name}.target.json"))
        else:
            write(out / "parts" / f"{d.name}.group.json", algebra_to_json(obj.group))
            write(out / fname, triple_to_json(obj, f"parts/{d.name}.group.json"))
        entries.append({"name": d.name, "kind": d.kind, "file": fname, "parameters": d.parameters,
                        "expected_rank": d.expected_rank, "expected": d.expected})
    write(out / "manifest.json", {"count": len(entries), "fixtures": entries})
    return entries


def cmd_fixtures(ctx, args):
    if args.action == "list":
        names = [{"name": d.name, "kind": d.kind, "expected_rank": d.expected_rank} for d in fx.catalog()]
        return {"count": len(names), "fixtures": names}, f"fixtures: {len(names)} entries"
    target = args.directory or (str(ctx.out) if ctx.out else None)
    if not target:
        raise SchemaError("fixtures export needs a directory", "")
    entries = fixtures_export(target)
    return {"count": len(entries), "files": [e["file"] for e in entries] + ["manifest.json"]}, \
        f"fixtures: wrote {len(entries)} entries to {target}"


COMMANDS = {
    "check": cmd_check, "factor": cmd_factor, "kernel": cmd_kernel, "quotient": cmd_quotient,
    "dual": cmd_dual, "close": cmd_close, "prolong": cmd_prolong, "extend": cmd_extend,
    "contract": cmd_contract, "reduce": cmd_reduce, "fixtures": cmd_fixtures,
}


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(f"usage: {message}", "")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--base", help="base ring document; inputs are base-changed to it")
    common.add_argument("--out", help="directory for written documents")
    common.add_argument("--degree-bound", type=int, default=None)
    common.add_argument("--step-budget", type=int, default=None)
    common.add_argument("--json-only", action="store_true", help="no summary on stderr")
    common.add_argument("--timing", action="store_true", help="add a timing field to the report")
    p = _Parser(prog="ffgs", description="Finite flat group schemes over Dedekind bases.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    c = sub.add_parser("check", parents=[common])
    c.add_argument("kind", choices=["hopf", "morphism", "triple", "triple-morphism"])
    c.add_argument("file")
    for verb in ("factor", "kernel"):
        sub.add_parser(verb, parents=[common]).add_argument("morphism")
    c = sub.add_parser("quotient", parents=[common])
    c.add_argument("morphism")
    c.add_argument("--ambient", required=True)
    sub.add_parser("dual", parents=[common]).add_argument("algebra")
    c = sub.add_parser("close", parents=[common])
    c.add_argument("immersion")
    c.add_argument("--ambient", required=True)
    c = sub.add_parser("prolong", parents=[common])
    c.add_argument("immersion")
    c.add_argument("--ambient", required=True)
    c.add_argument("--model")
    c.add_argument("--iso")
    c = sub.add_parser("extend", parents=[common])
    c.add_argument("--torsor", required=True)
    c.add_argument("--ambient", required=True)
    c.add_argument("--gamma", required=True)
    c.add_argument("--witness")
    c = sub.add_parser("contract", parents=[common])
    c.add_argument("triple")
    c.add_argument("morphism")
    c = sub.add_parser("reduce", parents=[common])
    c.add_argument("triple")
    c.add_argument("subgroup")
    c = sub.add_parser("fixtures", parents=[common])
    c.add_argument("action", choices=["export", "list"])
    c.add_argument("directory", nargs="?")
    return p


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = None
    report = {}
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        report["verb"] = args.verb
        ctx = Context(args)
        result, summary = COMMANDS[args.verb](ctx, args)
        report.update(status="ok", result=result)
        if ctx.written:
            report["written"] = sorted(ctx.written)
        code = 0
    except Failure as exc:
        report.update(status="failed", result=exc.result, error={"type": "Failure", "message": str(exc)})
        summary, code = f"failed: {exc}", 1
    except SchemaError as exc:
        report.update(status="error", error={"type": "SchemaError", "message": str(exc),
                                             "pointer": exc.pointer})
        summary, code = f"input error: {exc}", 2
    except FFGSError as exc:
        report.update(status="failed", error={"type": type(exc).__name__, "message": str(exc)})
        summary, code = f"failed: {type(exc).__name__}: {exc}", 1
    if args is not None and args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    stdout.write(dumps(report))
    if args is None or not args.json_only:
        stderr.write(summary + "\n")
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
