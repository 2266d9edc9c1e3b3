"""Command-line front end: ``cobalg <command> FILE... [flags]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
input errors.  Reports are ``CHECK <name> <pass|fail> <detail>`` lines, or
one JSON object with ``--json``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import AlgebraError, ParseError
from .report import Report
from .textio import Builder, Document, Emitter, parse

COMMANDS = (
    "check-complex", "check-ainf", "check-module", "check-morphism", "snake", "cone-decomp",
    "ts-compose", "assemble", "compose-compat", "k0", "index", "yoneda-probe",
)


class InputError(Exception):
    """Input that is well-formed text but unusable for the command."""


@dataclass
class Outcome:
    reports: list = field(default_factory=list)
    emitted: str = ""
    errors: list = field(default_factory=list)

    @property
    def code(self) -> int:
        if self.errors:
            return 2
        return 0 if all(r.passed for r in self.reports) else 1


def default_cap() -> int:
    env = os.environ.get("AINF_ARITY_CAP")
    if env is not None:
        try:
            v = int(env)
        except ValueError:
            v = 0
        if v >= 1:
            return v
    return 4


# ---------------------------------------------------------------------------
# per-section checks


def _pmap(fn, items):
    """Run checks concurrently; results come back in input order."""
    items = list(items)
    if len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(8, len(items))) as ex:
        return list(ex.map(fn, items))


def _need(doc: Document, kind: str) -> list:
    secs = doc.of_kind(kind)
    if not secs:
        raise InputError(f"no {kind} section in input")
    return secs


def cmd_check_complex(doc, b, args, out):
    from .chain import homology_rank
    from .errors import NotChainComplex

    secs = [s for s in doc.sections.values() if s.kind in ("complex", "snake")]
    if not secs:
        raise InputError("no complex section in input")

    def one(sec):
        rep = Report(f"complex:{sec.name}")
        try:
            c = b.complex(sec.name)
        except NotChainComplex as exc:
            rep.fail(str(exc))
            return rep
        rep.checked = 1
        rep.notes.append(f"dim={c.dim} homology={homology_rank(c)}")
        return rep

    out.reports += _pmap(one, secs)


def cmd_check_ainf(doc, b, args, out):
    from .category import check_a_infinity, check_functor

    secs = _need(doc, "category") if not doc.of_kind("map") else doc.of_kind("category")

    def one(sec):
        rep = check_a_infinity(b(sec.name))
        rep.name = f"ainf:{sec.name}"
        return rep

    out.reports += _pmap(one, secs)

    def fun(sec):
        F = b(sec.name)
        rep = check_functor(F, b(sec.params["source"]), b(sec.params["target"]))
        rep.name = f"functor:{sec.name}"
        return rep

    out.reports += _pmap(fun, doc.of_kind("map"))


def cmd_check_module(doc, b, args, out):
    from .modules import check_module

    def one(sec):
        rep = check_module(b(sec.name))
        rep.name = f"module:{sec.name}"
        return rep

    out.reports += _pmap(one, _need(doc, "module"))


def cmd_check_morphism(doc, b, args, out):
    from .modules import check_module_morphism

    mods = doc.of_kind("morphism")
    maps = doc.of_kind("chainmap")
    if not mods and not maps:
        raise InputError("no morphism or chainmap section in input")

    def one(sec):
        rep = check_module_morphism(b(sec.name))
        rep.name = f"morphism:{sec.name}"
        return rep

    def chain(sec):
        rep = Report(f"chainmap:{sec.name}")
        if not b(sec.name).is_chain_map():
            rep.fail("f d != d f")
        rep.checked = 1
        return rep

    out.reports += _pmap(one, mods) + _pmap(chain, maps)


def cmd_snake(doc, b, args, out):
    from .chain import homology_rank
    from .cobordism import snake_inclusion, snake_projection

    em = Emitter()

    def one(sec):
        s = b(sec.name)
        rep = Report(f"snake:{sec.name}")
        if homology_rank(s.total) != homology_rank(s.base):
            rep.fail("homology rank differs from the base")
        e = snake_inclusion(s)
        if not e.is_chain_map():
            rep.fail("inclusion is not a chain map")
        for j in range(1, s.l + 1, 2):
            c = snake_projection(s, j)
            if not c.is_chain_map():
                rep.fail(f"c_{j} is not a chain map")
            if not (c @ e).f == s.base.identity().f:
                rep.fail(f"c_{j} e != id")
            rep.checked += 1
        return rep

    secs = _need(doc, "snake")
    out.reports += _pmap(one, secs)
    for sec in secs:
        em.complex(b(sec.name).total, f"{sec.name}.total")
    out.emitted = em.text()


def cmd_cone_decomp(doc, b, args, out):
    from .cones import check_cone_decomposition

    def one(sec):
        rep = check_cone_decomposition(b(sec.name))
        rep.name = f"cone-decomposition:{sec.name}"
        rep.notes.append("linearization=(" + ",".join(sec.params["pieces"]) + ")")
        return rep

    out.reports += _pmap(one, _need(doc, "conedecomp"))


def _pick_pair(doc, b, args):
    secs = _need(doc, "tsmorphism")
    if args.outer or args.inner:
        if not (args.outer and args.inner):
            raise InputError("--outer and --inner go together")
        for n in (args.outer, args.inner):
            if n not in doc.sections or doc.sections[n].kind != "tsmorphism":
                raise InputError(f"no tsmorphism named {n!r}")
        return args.outer, args.inner
    if len(secs) != 2:
        raise InputError("need exactly two tsmorphism sections (or --outer/--inner)")
    a, c = secs
    if tuple(b(c.name).target) == tuple(b(a.name).source):
        return a.name, c.name
    return c.name, a.name


def cmd_ts_compose(doc, b, args, out):
    from .cones import check_cone_decomposition, compose_ts
    from .errors import TupleMismatch

    outer, inner = _pick_pair(doc, b, args)
    try:
        comp = compose_ts(b(outer), b(inner))
    except TupleMismatch as exc:
        raise InputError(str(exc)) from None
    for n, trip in enumerate(comp.summands):
        rep = check_cone_decomposition(trip.eta)
        rep.name = f"composed:{n}"
        out.reports.append(rep)
    em = Emitter()
    em.tsmorphism(comp, args.name or f"{outer}.{inner}")
    out.emitted = em.text()


def cmd_assemble(doc, b, args, out):
    from .cobordism import assemble_functor_value, build_iterated_cones, check_datum
    from .cones import check_cone_decomposition

    em = Emitter()
    for sec in _need(doc, "cobordism"):
        V = b(sec.name)
        rep = check_datum(V)
        rep.name = f"datum:{sec.name}"
        out.reports.append(rep)
        if not rep.passed or V.positive is None:
            continue
        cones = build_iterated_cones(V, check=False)
        for N in V.tests:
            Phi = assemble_functor_value(V, N, cones)
            r = Report(f"assemble:{sec.name}:{N}")
            for trip in Phi.summands:
                r.merge(check_cone_decomposition(trip.eta))
            out.reports.append(r)
            em.tsmorphism(Phi, f"{sec.name}.{N}")
    out.emitted = em.text()


def cmd_compose_compat(doc, b, args, out):
    from .cobordism import check_composition_compatibility

    if not (args.datum and args.inner and args.end):
        raise InputError("compose-compat needs --datum, --inner and --end")
    for n in (args.datum, args.inner) + ((args.glued,) if args.glued else ()):
        if n not in doc.sections or doc.sections[n].kind != "cobordism":
            raise InputError(f"no cobordism named {n!r}")
    V, Vp = b(args.datum), b(args.inner)
    Vpp = b(args.glued) if args.glued else None
    if not 1 <= args.end <= len(V.ends):
        raise InputError("--end out of range")
    try:
        rep = check_composition_compatibility(V, Vp, args.end, Vpp)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.reports.append(rep)


def cmd_k0(doc, b, args, out):
    from .ktheory import quotient_rank, theta_well_defined, verify_null_cobordism

    pres = doc.of_kind("presentation")
    k0s = doc.of_kind("k0")
    nulls = [s for s in doc.of_kind("cobordism") if s.params["positive"] == "-"]
    if not (pres or k0s or nulls):
        raise InputError("no presentation, k0 or null cobordism section in input")
    for sec in pres + k0s:
        rep = Report(f"{sec.kind}:{sec.name}")
        rep.checked = 1
        rep.notes.append(f"rank={quotient_rank(b(sec.name))}")
        out.reports.append(rep)
    for p in pres:
        for k in k0s:
            rep = theta_well_defined(b(p.name), b(k.name))
            rep.name = f"theta:{p.name}:{k.name}"
            out.reports.append(rep)
    for sec in nulls:
        k0 = b(k0s[0].name) if len(k0s) == 1 else None
        rep = verify_null_cobordism(b(sec.name), k0)
        rep.name = f"null-cobordism:{sec.name}"
        out.reports.append(rep)


def _index_report(p, name):
    from .cones import classify_nonconstant, fredholm_index, predicted_index

    rep = Report(f"index:{name}")
    ind = fredholm_index(p)
    cases = classify_nonconstant(p)
    pred = predicted_index(cases)
    if (pred is None and ind >= 0) or (pred is not None and pred != ind):
        rep.fail(f"index {ind} disagrees with cases {cases}")
    rep.checked = 1
    rep.notes.append(f"index={ind} cases={','.join(cases) or 'none'}")
    return rep


def cmd_index(doc, b, args, out):
    from .cones import MorseIndexProfile

    secs = doc.of_kind("profile") if doc is not None else []
    for sec in secs:
        out.reports.append(_index_report(b(sec.name), sec.name))
    if args.random:
        r = random.Random(args.seed)
        for n in range(args.random):
            k = r.randint(1, 8)
            p = MorseIndexProfile(tuple(r.randint(0, 1) for _ in range(k)), r.randint(0, 1))
            out.reports.append(_index_report(p, f"random{n}"))
    if not out.reports:
        raise InputError("no profile section in input (or use --random N)")


def cmd_yoneda_probe(doc, b, args, out):
    from .category import homology_category
    from .f2 import vec_to_array
    from .modules import yoneda_unit_probe

    cats = _need(doc, "category")
    name = args.category or (cats[0].name if len(cats) == 1 else None)
    if name is None or name not in doc.sections or doc.sections[name].kind != "category":
        raise InputError("choose a category with --category")
    A = b(name)
    hc = homology_category(A)
    pairs = [(x, y) for x in A.objects for y in A.objects]
    if args.source:
        pairs = [p for p in pairs if p[0] == args.source]
    if args.target:
        pairs = [p for p in pairs if p[1] == args.target]
    for L, Lp in pairs:
        rep = Report(f"yoneda:{L}:{Lp}")
        unit = hc.units.get(L)
        if unit is None:
            rep.fail(f"no homology unit at {L}")
            out.reports.append(rep)
            continue
        hom = A.hom_complex(L, L).homology
        e = vec_to_array(hom.representative(unit), A.dim(L, L))
        hlp = A.hom_complex(L, Lp).homology
        for c in range(hlp.rank):
            a = vec_to_array(hlp.representative(1 << c), A.dim(L, Lp))
            got, want = yoneda_unit_probe(A, L, Lp, e, a)
            if got != want:
                rep.fail(f"class {c}: image {got} != {want}")
            rep.checked += 1
        out.reports.append(rep)


HANDLERS = {
    "check-complex": cmd_check_complex,
    "check-ainf": cmd_check_ainf,
    "check-module": cmd_check_module,
    "check-morphism": cmd_check_morphism,
    "snake": cmd_snake,
    "cone-decomp": cmd_cone_decomp,
    "ts-compose": cmd_ts_compose,
    "assemble": cmd_assemble,
    "compose-compat": cmd_compose_compat,
    "k0": cmd_k0,
    "index": cmd_index,
    "yoneda-probe": cmd_yoneda_probe,
}


# ---------------------------------------------------------------------------
# entry points


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cobalg", description="Checkers for A∞ and cone-decomposition data over F2.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("files", nargs="*")
    p.add_argument("--arity-cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--output", "-o", default=None, help="write emitted sections here")
    p.add_argument("--outer")
    p.add_argument("--inner")
    p.add_argument("--name")
    p.add_argument("--datum")
    p.add_argument("--glued")
    p.add_argument("--end", type=int)
    p.add_argument("--category")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--random", type=int, default=0)
    return p


def run_text(command: str, text: str, args) -> Outcome:
    """Run one command on one document's text."""
    out = Outcome()
    cap = args.arity_cap if args.arity_cap is not None else default_cap()
    try:
        doc = parse(text)
        b = Builder(doc, max(cap, 1))
        HANDLERS[command](doc, b, args, out)
    except ParseError as exc:
        out.errors.append(f"{exc.line}:{exc.column}: {exc.message}")
    except (InputError, AlgebraError, ValueError) as exc:
        out.errors.append(f"0:0: {exc}")
    return out


def run(argv=None) -> tuple[int, str, str]:
    """(exit code, stdout, stderr) without touching the real streams."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), "", "usage error\n"
    if args.arity_cap is not None and args.arity_cap < 1:
        return 2, "", "--arity-cap must be at least 1\n"
    files = args.files or (["-"] if args.command != "index" or not args.random else [])
    texts = []
    for f in files:
        try:
            if f == "-":
                texts.append((f, sys.stdin.read()))
            else:
                with open(f, "rb") as fh:
                    raw = fh.read()
                try:
                    texts.append((f, raw.decode("utf-8")))
                except UnicodeDecodeError:
                    texts.append((f, None))
        except OSError as exc:
            return 2, "", f"{f}: {exc.strerror}\n"
    outcomes = []
    for f, text in texts:
        if text is None:
            o = Outcome()
            o.errors.append("1:1: not UTF-8")
        else:
            o = run_text(args.command, text, args)
        outcomes.append((f, o))
    if not texts:  # index --random without files
        o = Outcome()
        try:
            cmd_index(None, None, args, o)
        except InputError as exc:
            o.errors.append(f"0:0: {exc}")
        outcomes.append(("-", o))
    code = max(o.code for _, o in outcomes)
    err = "".join(f"ERROR {f}:{e}\n" for f, o in outcomes for e in o.errors)
    emitted = "".join(o.emitted for _, o in outcomes)
    if args.output and emitted:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(emitted)
        emitted = ""
    if args.quiet:
        return code, "", err
    if args.json:
        doc = {
            "command": args.command,
            "exit": code,
            "files": [
                {"file": f, "status": "error" if o.errors else ("pass" if o.code == 0 else "fail"),
                 "errors": o.errors, "reports": [r.as_dict() for r in o.reports]}
                for f, o in outcomes
            ],
        }
        if emitted:
            doc["emitted"] = emitted
        return code, json.dumps(doc, sort_keys=True, indent=1) + "\n", err
    lines = []
    for _, o in outcomes:
        for r in o.reports:
            lines.append(r.line() + "".join(f" {n}" for n in r.notes))
    return code, emitted + "".join(ln + "\n" for ln in lines), err


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
