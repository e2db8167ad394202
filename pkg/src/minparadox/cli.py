"""Command-line front end.

Exit codes: 0 success or affirmative verdict, 1 negative verdict, 2 usage or
input error.  ``MINPARADOX_FORMAT`` sets the default ``--format``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence, TextIO

from . import catalog, search
from .formula import FormulaSyntaxError, atoms, parse, to_text, to_unicode
from .kripke import (
    Model,
    Structure,
    StructureError,
    UnknownAtom,
    forces,
    load_model_file,
    model_to_dict,
    schema_countermodel,
    to_dot,
)
from .ledger import check_ledger
from .prover import BudgetExceeded, DEFAULT_BUDGET, derives

FORMATS = ("text", "csv", "json")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _default_format() -> str:
    fmt = os.environ.get("MINPARADOX_FORMAT", "text")
    return fmt if fmt in FORMATS else "text"


def _mark(v: bool, fmt: str) -> str:
    if fmt == "csv":
        return "1" if v else "0"
    if fmt == "json":
        return "true" if v else "false"
    return "✓" if v else "✗"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# argument helpers


def _resolve_model(ref: str) -> tuple[str, Structure, dict | None]:
    """``key:W3'`` or a bare catalog key, else a JSON model file path."""
    key = ref[4:] if ref.startswith("key:") else ref
    try:
        m = catalog.model(key)
        return m.key, m.structure, None
    except KeyError:
        if ref.startswith("key:"):
            raise UsageError(f"unknown catalog model {key!r}") from None
    if not os.path.exists(ref):
        raise UsageError(f"no catalog model or file named {ref!r}")
    s, val = load_model_file(ref)
    return os.path.basename(ref), s, val


def _resolve_models(choice: str) -> list[tuple[str, Structure]]:
    if choice == "catalog":
        return [(k, catalog.model(k).structure) for k in catalog.FIG4_ROWS]
    if choice == "catalog-all":
        return [(m.key, m.structure) for m in catalog.models()]
    if choice.startswith("enumerate:"):
        try:
            n = int(choice.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad world count in {choice!r}") from None
        try:
            return [(f"S{i}", s) for i, s in enumerate(search.enumerate_structures(n))]
        except ValueError as e:
            raise UsageError(str(e)) from None
    return [_resolve_model(r)[:2] for r in choice.split(",")]


def _resolve_principles(choice: str) -> list[catalog.Principle]:
    if choice == "fig1":
        keys = catalog.FIG1_PRINCIPLES
    elif choice == "all":
        return catalog.principles()
    else:
        keys = [k.strip() for k in choice.split(",") if k.strip()]
    try:
        return [catalog.principle(k) for k in keys]
    except KeyError as e:
        raise UsageError(e.args[0]) from None


def _keys(choice: str | None) -> list[str]:
    if not choice:
        return []
    out = [k.strip() for k in choice.split(",") if k.strip()]
    for k in out:
        try:
            catalog.principle(k)
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    return out


def _structure_dict(s: Structure) -> dict:
    return model_to_dict(s)


# ---------------------------------------------------------------------------
# verbs


def cmd_eval(a, out: TextIO) -> int:
    name, s, val = _resolve_model(a.model)
    f = parse(a.formula)
    valuation = dict(val or {})
    for item in a.set or []:
        atom, _, ws = item.partition("=")
        valuation[atom.strip()] = [w for w in ws.split(",") if w]
    for x in atoms(f):
        valuation.setdefault(x, [])
    model = Model(s, valuation)
    worlds = [a.world] if a.world is not None else list(s.worlds)
    for w in worlds:
        if w not in s.worlds:
            raise UsageError(f"world {w!r} not in model {name}")
    verdicts = {w: forces(model, w, f) for w in worlds}
    result = all(verdicts.values())
    if a.format == "json":
        out.write(_dump({"formula": to_text(f), "model": name, "forced": verdicts, "result": result}))
    elif a.format == "csv":
        out.write("world,forced\n")
        for w, v in verdicts.items():
            out.write(f"{w},{_mark(v, 'csv')}\n")
    elif a.world is not None:
        out.write(("true" if result else "false") + "\n")
    else:
        for w, v in verdicts.items():
            out.write(f"{w}: {'true' if v else 'false'}\n")
        out.write(f"valid: {'true' if result else 'false'}\n")
    return 0 if result else 1


def cmd_classify(a, out: TextIO) -> int:
    name, s, _ = _resolve_model(a.model)
    ps = _resolve_principles(a.principles)
    rows = []
    for p in ps:
        cm = schema_countermodel(s, p.schema)
        rows.append((p, cm))
    if a.format == "json":
        data = {
            "model": name,
            "verdicts": {
                p.key: {
                    "valid": cm is None,
                    "countermodel": None if cm is None else {v: sorted(ws) for v, ws in cm.items()},
                }
                for p, cm in rows
            },
        }
        out.write(_dump(data))
    elif a.format == "csv":
        out.write("principle,valid\n")
        for p, cm in rows:
            out.write(f"{p.key},{_mark(cm is None, 'csv')}\n")
    else:
        for p, cm in rows:
            line = f"{p.key:<10} {_mark(cm is None, 'text')}"
            if cm is not None:
                line += "  " + " ".join(f"{v}={{{','.join(sorted(ws))}}}" for v, ws in cm.items())
            out.write(line + "\n")
    return 0


def cmd_table(a, out: TextIO) -> int:
    models = _resolve_models(a.models)
    ps = _resolve_principles(a.principles)
    t = search.classify(models, ps, jobs=a.jobs)
    if a.format == "csv":
        out.write(t.to_csv())
    elif a.format == "json":
        out.write(t.to_json())
    else:
        out.write(t.to_text())
    return 0


def cmd_separate(a, out: TextIO) -> int:
    try:
        q = search.SeparationQuery(frozenset(_keys(a.hold)), frozenset(_keys(a.fail)), a.max_worlds)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if a.max_worlds > search.MAX_ENUM_WORLDS:
        raise UsageError(f"--max-worlds is capped at {search.MAX_ENUM_WORLDS}")
    s = search.find_separation(q)
    if a.dot and s is not None:
        out.write(to_dot(s, "witness"))
    elif a.format == "json":
        out.write(_dump({
            "hold": sorted(q.must_hold),
            "fail": sorted(q.must_fail),
            "max_worlds": q.max_worlds,
            "witness": None if s is None else _structure_dict(s),
        }))
    elif s is None:
        out.write(f"none within {q.max_worlds} worlds\n")
    else:
        out.write(repr(s) + "\n")
    return 0 if s is not None else 1


def cmd_prove(a, out: TextIO) -> int:
    assumptions = [parse(t) for t in a.assume or []]
    goal = parse(a.goal)
    ok = derives(assumptions, goal, mode=a.mode, budget=a.budget)
    if a.format == "json":
        out.write(_dump({
            "assumptions": [to_text(x) for x in assumptions],
            "derivable": ok,
            "goal": to_text(goal),
            "mode": a.mode,
        }))
    else:
        out.write(("derivable" if ok else "not derivable") + "\n")
    return 0 if ok else 1


def cmd_ledger(a, out: TextIO) -> int:
    rep = check_ledger()
    if a.format == "json":
        out.write(_dump([
            {
                "name": r.entry.name,
                "anchor": r.entry.anchor,
                "expected": r.entry.expected,
                "derived": r.derived,
                "ok": r.ok,
                "detail": r.detail,
            }
            for r in rep.results
        ]))
    elif a.format == "csv":
        out.write("name,anchor,expected,derived,ok\n")
        for r in rep.results:
            out.write(
                f"\"{r.entry.name}\",\"{r.entry.anchor}\",{_mark(r.entry.expected, 'csv')},"
                f"{_mark(r.derived, 'csv')},{_mark(r.ok, 'csv')}\n"
            )
    else:
        for line in rep.lines():
            out.write(line + "\n")
    return 0 if rep.ok else 1


def cmd_audit(a, out: TextIO) -> int:
    pairs = search.audit_figure1(a.max_worlds)
    if a.format == "json":
        out.write(_dump([{"from": p.a, "to": p.b, "kind": p.kind, "detail": p.detail, "ok": p.ok} for p in pairs]))
    elif a.format == "csv":
        out.write("from,to,kind,ok\n")
        for p in pairs:
            out.write(f"{p.a},{p.b},{p.kind},{_mark(p.ok, 'csv')}\n")
    else:
        for p in pairs:
            out.write(f"{'PASS' if p.ok else 'FAIL'}  {p.a} ⇒ {p.b}: {p.kind} ({p.detail})\n")
        bad = sum(not p.ok for p in pairs)
        out.write(f"{len(pairs) - bad}/{len(pairs)} pairs settled\n")
    return 0 if all(p.ok for p in pairs) else 1


def cmd_experiments(a, out: TextIO) -> int:
    checks = search.run_experiments()
    if a.format == "json":
        out.write(_dump([{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]))
    elif a.format == "csv":
        out.write("name,ok\n")
        for c in checks:
            out.write(f"\"{c.name}\",{_mark(c.ok, 'csv')}\n")
    else:
        for c in checks:
            out.write(f"{'PASS' if c.ok else 'FAIL'}  {c.name}" + (f"  [{c.detail}]" if c.detail else "") + "\n")
    return 0 if all(c.ok for c in checks) else 1


def cmd_characterize(a, out: TextIO) -> int:
    if not 1 <= a.max_worlds <= search.MAX_ENUM_WORLDS:
        raise UsageError(f"--max-worlds must be between 1 and {search.MAX_ENUM_WORLDS}")
    rep = search.characterize(a.max_worlds)
    if a.format == "json":
        out.write(_dump({
            "max_worlds": rep.max_worlds,
            "structures": rep.structures,
            "mismatches": rep.mismatches,
            "wlem_converse_failures": [_structure_dict(s) for s in rep.wlem_converse_failures],
            "w4_pattern_found": rep.w4_pattern_found,
            "ok": rep.ok,
        }))
    else:
        for line in rep.lines():
            out.write(line + "\n")
    return 0 if rep.ok else 1


def cmd_catalog(a, out: TextIO) -> int:
    if a.dot:
        _, s, _ = _resolve_model(a.dot)
        out.write(to_dot(s, a.dot))
        return 0
    show_p = a.what in ("all", "principles")
    show_m = a.what in ("all", "models")
    if a.format == "json":
        data = {}
        if show_p:
            data["principles"] = [
                {
                    "key": p.key,
                    "name": p.name,
                    "schema": to_text(p.body),
                    "variables": list(p.schema.variables),
                    "provable_in_minimal": p.provable_in_minimal,
                    "aliases": list(p.aliases),
                }
                for p in catalog.principles()
            ]
        if show_m:
            data["models"] = [{"key": m.key, **_structure_dict(m.structure)} for m in catalog.models()]
        out.write(_dump(data))
        return 0
    if show_p:
        for p in catalog.principles():
            flag = " (provable)" if p.provable_in_minimal else ""
            out.write(f"{p.key:<10} {to_unicode(p.body)}{flag}\n")
    if show_m:
        for m in catalog.models():
            out.write(f"{m.key:<7} {m.structure!r}\n")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="minparadox", description="Paradoxes of material implication over minimal logic.")
    sub = p.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def verb(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--format", choices=FORMATS, default=_default_format())
        return sp

    sp = verb("eval", cmd_eval, "evaluate a formula in a model")
    sp.add_argument("--model", required=True, help="model file path or catalog key (key:W2)")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--world", help="single world (default: all worlds)")
    sp.add_argument("--set", action="append", metavar="ATOM=W1,W2", help="atom extent override")

    sp = verb("classify", cmd_classify, "validity of principles on one model, with countermodels")
    sp.add_argument("--model", required=True)
    sp.add_argument("--principles", default="fig1")

    sp = verb("table", cmd_table, "verdict matrix over many models")
    sp.add_argument("--models", default="catalog", help="catalog | catalog-all | enumerate:N | key,key,...")
    sp.add_argument("--principles", default="fig1", help="fig1 | all | comma-separated keys")
    sp.add_argument("--jobs", type=int, default=1)

    sp = verb("separate", cmd_separate, "find a structure validating some principles and refuting others")
    sp.add_argument("--hold", default="")
    sp.add_argument("--fail", default="")
    sp.add_argument("--max-worlds", type=int, default=4)
    sp.add_argument("--dot", action="store_true", help="print the witness as DOT")

    sp = verb("prove", cmd_prove, "decide derivability")
    sp.add_argument("--assume", action="append", metavar="FORMULA")
    sp.add_argument("--goal", required=True)
    sp.add_argument("--mode", choices=("minimal", "intuitionistic"), default="minimal")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    verb("ledger", cmd_ledger, "check every recorded entailment")

    sp = verb("audit-fig1", cmd_audit, "audit all ordered pairs of the eight main principles")
    sp.add_argument("--max-worlds", type=int, default=4)

    verb("experiments", cmd_experiments, "semantic checks for 7imp, KP, Scott and SmL")

    sp = verb("characterize", cmd_characterize, "compare verdicts with structural characterizations")
    sp.add_argument("--max-worlds", type=int, default=4)

    sp = verb("catalog", cmd_catalog, "list principles and models")
    sp.add_argument("what", nargs="?", choices=("all", "principles", "models"), default="all")
    sp.add_argument("--dot", metavar="MODEL", help="emit the Hasse diagram of a model as DOT")
    return p


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        return args.fn(args, out)
    except UsageError as e:
        err.write(str(e).rstrip("\n") + "\n")
        return 2
    except FormulaSyntaxError as e:
        err.write(f"syntax error: {e}\n")
        return 2
    except (StructureError, UnknownAtom, BudgetExceeded, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        err.write(f"error: {msg}\n")
        return 2


def main() -> None:
    sys.exit(run())
