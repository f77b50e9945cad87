"""Command-line driver.

Exit status: 0 when every check passes or is skipped, 1 when any check
fails, 2 for usage, parse and size-cap errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .bhk import element_semantics, interpret
from .cetcs import audit, check_ex_pretopos, check_weakly_lextensive, check_wellpointed, default_objects
from .depprod import (
    build_dependent_product,
    iso_to_oracle,
    oracle_dependent_product,
    verify_universal_property,
)
from .errors import (
    CapExceeded,
    ExactCompError,
    FormulaSyntaxError,
    FormulaTypeError,
    InstanceError,
    NotAnEquivalence,
    OracleMismatch,
)
from .excompletion import ExObj, canonical_quotient, gamma
from .formula import parse_context, parse_formula
from .fullness import (
    build_full_family,
    check_forall_adjunction,
    check_fullness,
    check_image_sufficiency,
)
from .bhk import Presubobject
from .instance import InstanceDocument, parse_instance
from .weaklim import Strategy, check_eqrel_sweep, check_welemlogic, find_pseudo_eqrel_witnesses

SCHEMA = "exactcomp.report/1"
DEFAULT_INSTANCE = "two_sections.json"


class Report:
    def __init__(self, command: str, args):
        self.command = command
        self.meta = {"strategy": str(args.strategy), "seed": args.seed, "max_size": args.max_size}
        self.checks: list[dict] = []
        self.lines: list[str] = []

    def add(self, name: str, ok: bool | None, /, **details) -> None:
        status = "skipped" if ok is None else ("pass" if ok else "fail")
        details.pop("ok", None)
        self.checks.append({"name": name, "status": status, **details})

    def say(self, line: str) -> None:
        self.lines.append(line)

    @property
    def ok(self) -> bool:
        return all(c["status"] != "fail" for c in self.checks)

    def as_dict(self) -> dict:
        return {"schema": SCHEMA, "version": __version__, "command": self.command, **self.meta,
                "checks": self.checks, "ok": self.ok}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2, sort_keys=True)
        out = [f"{self.command} (strategy {self.meta['strategy']}, seed {self.meta['seed']})"]
        out += self.lines
        for c in self.checks:
            extra = {k: v for k, v in c.items() if k not in ("name", "status")}
            tail = f"  {json.dumps(extra, sort_keys=True)}" if extra else ""
            out.append(f"{c['name']}: {c['status']}{tail}")
        out.append("ok" if self.ok else "FAILED")
        return "\n".join(out)


def load_instance(path: str | None) -> InstanceDocument:
    if path is None:
        text = resources.files("exactcomp.data").joinpath(DEFAULT_INSTANCE).read_text("utf-8")
    else:
        p = Path(path)
        if not p.exists():
            bundled = resources.files("exactcomp.data").joinpath(path)
            if not bundled.is_file():
                raise InstanceError(f"no such instance file: {path}")
            text = bundled.read_text("utf-8")
        else:
            text = p.read_text("utf-8")
    return parse_instance(text)


def equivalence_objects(doc: InstanceDocument, strategy: Strategy) -> dict[str, ExObj]:
    """Relations of the document that are equivalences, as objects."""
    out = {}
    for name, (on, span) in doc.relations.items():
        if len(on) == 2 and on[0] == on[1]:
            try:
                out[name] = ExObj.from_span(span, strategy)
            except NotAnEquivalence:
                pass
    return out


# -- commands ---------------------------------------------------------------------

def cmd_check_base(doc, args, rep: Report) -> None:
    w = check_welemlogic(args.max_size, args.strategy)
    rep.add("elementality", w.ok, **w.summary())
    e = check_eqrel_sweep(args.max_size, args.strategy)
    rep.add("equivalence witnesses", e.ok, **e.summary())
    lx = check_weakly_lextensive(args.strategy, args.max_size)
    rep.add("weakly lextensive", lx.ok, **lx.summary())
    for name, (on, span) in doc.relations.items():
        if len(on) == 2 and on[0] == on[1]:
            found = find_pseudo_eqrel_witnesses(span, args.strategy)
            rep.say(f"relation {name}: {'equivalence' if found else 'not an equivalence'}")


def cmd_complete(doc, args, rep: Report) -> None:
    objs = {f"gamma({k})": gamma(v, args.strategy) for k, v in doc.sets.items()}
    objs.update(equivalence_objects(doc, args.strategy))
    for name, A in objs.items():
        Q, _ = canonical_quotient(A)
        A.eqrel.check()
        rep.say(f"{name}: {len(A.carrier)} elements, {len(Q)} classes {list(Q.labels)}")
    p = check_ex_pretopos(args.max_size, args.strategy)
    rep.add("pretopos laws", p.ok, **p.summary())
    wp = check_wellpointed(args.max_size, args.strategy)
    rep.add("well-pointed", wp.ok, **wp.summary())


def cmd_bhk(doc, args, rep: Report) -> None:
    maps = {k: m for k, (_, _, m) in doc.maps.items()}
    rels = {k: span for k, (_, span) in doc.relations.items()}
    phi = parse_formula(args.formula, doc.sets, maps, rels)
    context = parse_context(args.context or "", doc.sets)
    p = interpret(phi, context, args.strategy)
    direct = element_semantics(phi, context)
    labels = [p.target.labels[i] for i in sorted(p.elements())]
    rep.say(f"formula: {phi}")
    rep.say(f"satisfied by: {labels}")
    rep.add("interpretation matches evaluation", p.elements() == direct,
            evidence_apex=len(p.apex), elements=labels)


def _plain(doc, name: str):
    if name not in doc.maps:
        raise InstanceError(f"unknown map {name!r}")
    return doc.maps[name][2]


def cmd_fullness(doc, args, rep: Report) -> None:
    f, g = _plain(doc, args.f), _plain(doc, args.g)
    fam = build_full_family(f, g, args.strategy)
    fr = check_fullness(fam)
    rep.say(f"codes: {len(fam.F)}, rows: {len(fam.P)}")
    rep.add("fullness", fr.ok, **fr.summary())
    rep.add("image sufficiency", check_image_sufficiency(fam, seed=args.seed))
    adj = check_forall_adjunction(f, Presubobject(g.cod, g), args.max_size, args.strategy)
    rep.add("forall adjunction", adj.ok, checked=adj.checked, violations=len(adj.violations))


def cmd_depprod(doc, args, rep: Report) -> None:
    f, g = doc.ex_pair(args.f, args.g, args.strategy)
    res = build_dependent_product(f, g, args.strategy)
    counts = res.classes_per_index()
    u = verify_universal_property(res)
    rep.add("universal property", u.ok, **u.summary())
    fr = check_fullness(res.family)
    rep.add("fullness of the family", fr.ok, **fr.summary())
    rep.add("beta monic", res.beta_is_mono())
    if args.oracle:
        oracle = oracle_dependent_product(f, g)
        try:
            iso_to_oracle(res, oracle)
            iso = True
        except OracleMismatch as exc:
            iso = False
            rep.say(f"oracle mismatch: {exc}")
        rep.say(f"iso: {'yes' if iso else 'no'}, classes per index: {counts}")
        rep.add("oracle iso", iso, classes_per_index=counts, oracle=oracle.counts())
    else:
        rep.say(f"classes per index: {counts}")


def cmd_cetcs(doc, args, rep: Report) -> None:
    objs = default_objects(args.max_size, args.strategy)
    objs += [gamma(v, args.strategy) for v in doc.sets.values() if len(v) <= args.max_size]
    objs += [o for o in equivalence_objects(doc, args.strategy).values()
             if len(o.carrier) <= args.max_size]
    pairs = []
    for name, p in doc.pairs.items():
        pairs.append(doc.ex_pair(p["f"], p["g"], args.strategy))
    a = audit(objs, args.strategy, args.seed, depprod_pairs=pairs or None)
    for ax, v in a.as_dict()["axioms"].items():
        rep.add(ax, None if v["status"] == "skipped" else v["status"] == "pass",
                **{k: val for k, val in v.items() if k != "status"})
    if a.skipped_instances:
        rep.say(f"instances over the size cap: {len(a.skipped_instances)}")
    lx = check_weakly_lextensive(args.strategy, args.max_size)
    rep.add("weakly lextensive", lx.ok, **lx.summary())
    wp = check_wellpointed(args.max_size, args.strategy)
    rep.add("well-pointed", wp.ok, **wp.summary())


COMMANDS = {
    "check-base": cmd_check_base,
    "complete": cmd_complete,
    "bhk": cmd_bhk,
    "fullness": cmd_fullness,
    "depprod": cmd_depprod,
    "cetcs": cmd_cetcs,
}


def _strategy(text: str) -> Strategy:
    try:
        return Strategy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _global_options(p: argparse.ArgumentParser, defaults: bool) -> None:
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--strategy", type=_strategy, default=d(Strategy.parse("minimal")),
                   help="weak-limit strategy: minimal or padded:<k>")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--max-size", type=int, default=d(3), dest="max_size")
    p.add_argument("--report", choices=("json", "text"), default=d("text"))
    p.add_argument("--instance", default=d(None),
                   help="instance JSON file (default: the bundled two-section example)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exactcomp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _global_options(parser, True)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        _global_options(sp, False)
        if name == "bhk":
            sp.add_argument("--formula", required=True)
            sp.add_argument("--context", default="")
        if name in ("fullness", "depprod"):
            sp.add_argument("--f", required=True)
            sp.add_argument("--g", required=True)
        if name == "depprod":
            sp.add_argument("--oracle", action="store_true")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = load_instance(args.instance)
        rep = Report(args.command, args)
        COMMANDS[args.command](doc, args, rep)
    except (InstanceError, FormulaSyntaxError, FormulaTypeError, CapExceeded) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ExactCompError as exc:
        print(f"error: {exc}", file=err)
        return 2
    print(rep.render(args.report), file=out)
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
