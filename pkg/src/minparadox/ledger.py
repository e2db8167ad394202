"""The checked list of entailments between principles.

Each entry fixes the finitely many instances of the premise principle(s)
used to derive the generic instance of the conclusion (metavariables
replaced by ``p, q, r, s`` in order).  ``expected=False`` entries are
sanity separations; they name a catalog model that validates the premise
schemas but refutes the conclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import PROVABLE_KEYS, model, principle
from .formula import Formula, Schema, parse, to_text
from .kripke import schema_valid_full
from .prover import BudgetExceeded, Prover

__all__ = ["LedgerEntry", "LedgerResult", "LedgerReport", "ledger", "check_ledger"]


@dataclass(frozen=True)
class LedgerEntry:
    name: str
    anchor: str
    assumptions: tuple[Formula, ...]
    goal: Formula
    expected: bool = True
    premises: tuple[str, ...] = ()
    conclusion: str | None = None
    countermodel: str | None = None


@dataclass(frozen=True)
class LedgerResult:
    entry: LedgerEntry
    derived: bool | None
    ok: bool
    detail: str = ""


@dataclass
class LedgerReport:
    results: list[LedgerResult] = field(default_factory=list)

    @property
    def failures(self) -> list[LedgerResult]:
        return [r for r in self.results if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            e = r.entry
            status = "PASS" if r.ok else "FAIL"
            verdict = {True: "derivable", False: "not derivable", None: "budget exceeded"}[r.derived]
            line = f"{status}  {e.name:<22} [{e.anchor}] {verdict}"
            if r.detail:
                line += f"  ({r.detail})"
            out.append(line)
        return out


def _inst(key: str, *args: str) -> Formula:
    return principle(key).schema.instantiate(*args)


def _entry(name, anchor, premises, conclusion, *, expected=True, countermodel=None):
    """``premises`` is a list of ``(principle key, instance args)``."""
    return LedgerEntry(
        name=name,
        anchor=anchor,
        assumptions=tuple(_inst(k, *args) for k, args in premises),
        goal=principle(conclusion).schema.generic(),
        expected=expected,
        premises=tuple(dict.fromkeys(k for k, _ in premises)),
        conclusion=conclusion,
        countermodel=countermodel,
    )


def _build() -> list[LedgerEntry]:
    out = []

    def add(name, anchor, premises, conclusion, **kw):
        out.append(_entry(name, anchor, premises, conclusion, **kw))

    a = "DNE group"
    add("DNE⊢P12", a, [("DNE", ("p",))], "P12")
    add("P12⊢DNE", a, [("P12", ("p",))], "DNE")
    add("DNE⊢P16", a, [("DNE", ("p",))], "P16")
    add("P16⊢DNE", a, [("P16", ("p",))], "DNE")
    add("DNE⊢P9", a, [("DNE", ("q",)), ("DNE", ("p & ~q",))], "P9")
    add("P9⊢DNE", a, [("P9", ("p", "bot"))], "DNE")
    add("DNE⊢DM1'", a, [("DNE", ("p | q",))], "DM1'")
    add("DM1'⊢DNE", a, [("DM1'", ("p", "p"))], "DNE")
    add("DNE⊢DM2'", a, [("DNE", ("p",)), ("DNE", ("q",))], "DM2'")
    add("DM2'⊢DNE", a, [("DM2'", ("p", "p"))], "DNE")

    b = "LEM group"
    add("LEM⊢P3", b, [("LEM", ("q",))], "P3")
    add("P3⊢LEM", b, [("P3", ("top", "p"))], "LEM")
    add("LEM⊢P4", b, [("LEM", ("q",))], "P4")
    add("P4⊢LEM", b, [("P4", ("top", "p"))], "LEM")
    add("LEM⊢P6", b, [("LEM", ("p",))], "P6")
    add("P6⊢LEM", b, [("P6", ("p | ~p",))], "LEM")

    c = "EFQ chain"
    add("EFQ⊢P2", c, [("EFQ", ("q",))], "P2")
    add("P2⊢P5", c, [("P2", ("p", "q"))], "P5")
    add("P5⊢EFQ", c, [("P5", ("top", "p"))], "EFQ")

    d = "WLEM group"
    add("WLEM⊢P14", d, [("WLEM", ("q",))], "P14")
    add("P14⊢WLEM", d, [("P14", ("p", "~p"))], "WLEM")
    add("WLEM⊢DM1", d, [("WLEM", ("p",))], "DM1")
    add("DM1⊢WLEM", d, [("DM1", ("~p", "p"))], "WLEM")

    a = "PP group"
    add("P1⊢PP", a, [("P1", ("top", "p", "q"))], "PP")
    add("PP⊢P13", a, [("PP", ("p | (p -> q)", "q"))], "P13")
    add("P13⊢P1", a, [("P13", ("q", "r"))], "P1")

    b = "DGP group"
    add("DGP⊢P7", b, [("DGP", ("p", "q"))], "P7")
    add("P7⊢DGP", b, [("P7", ("p", "q", "p & q"))], "DGP")
    add("DGP⊢P8", b, [("DGP", ("p", "s"))], "P8")
    add("P8⊢DGP", b, [("P8", ("p", "q", "p", "q"))], "DGP")
    add("DGP⊢P15", b, [("DGP", ("q", "r"))], "P15")
    add("P15⊢DGP", b, [("P15", ("p | q", "p", "q"))], "DGP")

    f = "hierarchy arrow"
    add("DNE⊢PP", f, [("DNE", ("p",)), ("DNE", ("q",)), ("DNE", ("p & ~q",))], "PP")
    add("PP⊢LEM", f, [("PP", ("p | ~p", "bot"))], "LEM")
    add("PP⊢DGP", f, [("PP", ("(p -> q) | (q -> p)", "p"))], "DGP")
    add("DGP⊢WLEM", f, [("DGP", ("p", "~p"))], "WLEM")
    add("DNE⊢EFQ", f, [("DNE", ("p",))], "EFQ")
    add("LEM⊢WLEM", f, [("LEM", ("~p",))], "WLEM")

    s = "implicational hierarchy arrow"
    add("PP⊢WT", s, [("PP", ("bot", "q"))], "WT")
    add("DGP⊢DGPimp", s, [("DGP", ("p", "q"))], "DGPimp")
    add("EFQ⊢WT", s, [("EFQ", ("q",))], "WT")
    add("WT⊢DGPimp", s, [("WT", ("q", "p"))], "DGPimp")

    s = "implicational group: "
    add("DNE⊢P9imp_a", s + "DNE", [("DNE", ("p",)), ("DNE", ("q",))], "P9imp_a")
    add("P9imp_a⊢DNE", s + "DNE", [("P9imp_a", ("p", "bot"))], "DNE")
    add("DNE⊢P12imp", s + "DNE", [("DNE", ("p",))], "P12imp")
    add("P12imp⊢DNE", s + "DNE", [("P12imp", ("p",))], "DNE")
    add("DNE⊢DM2'imp_a", s + "DNE", [("DNE", ("p",))], "DM2'imp_a")
    add("DM2'imp_a⊢DNE", s + "DNE", [("DM2'imp_a", ("p", "p"))], "DNE")
    add("DNE⊢DM2'imp_b", s + "DNE", [("DNE", ("q",))], "DM2'imp_b")
    add("DM2'imp_b⊢DNE", s + "DNE", [("DM2'imp_b", ("p", "p"))], "DNE")
    add("DNE⊢P18", s + "DNE", [("DNE", ("q",))], "P18")
    add("P18⊢DNE", s + "DNE", [("P18", ("p", "p"))], "DNE")
    add("EFQ⊢P2imp", s + "EFQ", [("EFQ", ("q",))], "P2imp")
    add("P2imp⊢EFQ", s + "EFQ", [("P2imp", ("top", "p"))], "EFQ")
    add("WT⊢P1imp", s + "WT", [("WT", ("q", "r"))], "P1imp")
    add("P1imp⊢WT", s + "WT", [("P1imp", ("~p", "p", "q"))], "WT")
    add("WT⊢P15imp", s + "WT", [("WT", ("p", "q"))], "P15imp")
    add("P15imp⊢WT", s + "WT", [("P15imp", ("p", "q", "q"))], "WT")
    add("WT⊢P17", s + "WT", [("WT", ("p", "q"))], "P17")
    add("P17⊢WT", s + "WT", [("P17", ("p", "q"))], "WT")

    s = "implicational 7/8 vs DGPimp"
    add("WT⊢P7imp", s, [("WT", ("p", "r"))], "P7imp")
    add("DGPimp⊢P8imp", s, [("DGPimp", ("r", "q"))], "P8imp")
    add("P8imp⊢DGPimp", s, [("P8imp", ("p", "q", "p", "q"))], "DGPimp")
    add("P7imp⊢DGPimp", s, [("P7imp", ("p", "q", "p & q"))], "DGPimp")

    for key in PROVABLE_KEYS:
        add(f"⊢{key}", "provable in minimal logic", [], key)

    add("LEM,EFQ⊢DNE", "intuitionistic case", [("LEM", ("p",)), ("EFQ", ("p",))], "DNE")
    add("LEM⊢SmL", "SmL", [("LEM", ("q",))], "SmL")
    add("SmL⊢WLEM", "SmL", [("SmL", ("~p | ~~p", "~p"))], "WLEM")

    # naive translation a | b := ~a -> b applied to or-introduction a -> a | b
    naive = Schema(parse("phi -> ~phi -> psi"))
    out.append(
        LedgerEntry(
            name="naive∨⊢EFQ",
            anchor="naive disjunction translation",
            assumptions=(naive.instantiate("bot", "p"),),
            goal=principle("EFQ").schema.generic(),
            conclusion="EFQ",
        )
    )

    sep = "separation"
    no = dict(expected=False)
    add("EFQ⊬LEM", sep, [("EFQ", ("p",)), ("EFQ", ("p | ~p",))], "LEM", countermodel="W3", **no)
    add("LEM⊬DNE", sep, [("LEM", ("p",)), ("LEM", ("~p",))], "DNE", countermodel="W1_bot", **no)
    add("LEM⊬EFQ", sep, [("LEM", ("p",))], "EFQ", countermodel="W1_bot", **no)
    add("PP⊬EFQ", sep, [("PP", ("p", "q")), ("PP", ("bot", "p"))], "EFQ", countermodel="W1_bot", **no)
    add("WT⊬EFQ", sep, [("WT", ("p", "q")), ("WT", ("bot", "p"))], "EFQ", countermodel="W2_bot", **no)
    add("DGP⊬LEM", sep, [("DGP", ("p", "~p")), ("DGP", ("~p", "p"))], "LEM", countermodel="W2", **no)
    add("DGPimp⊬WT", sep, [("DGPimp", ("p", "q")), ("DGPimp", ("q", "p"))], "WT", countermodel="W2'", **no)
    add("EFQ⊬WLEM", sep, [("EFQ", ("p",)), ("EFQ", ("~p",))], "WLEM", countermodel="W3", **no)
    add("WLEM⊬DGP", sep, [("WLEM", ("p",)), ("WLEM", ("q",))], "DGP", countermodel="W4", **no)
    add("SmL⊬LEM", sep, [("SmL", ("p", "q")), ("SmL", ("p", "bot"))], "LEM", countermodel="W2", **no)
    add("DGP⊬SmL", sep, [("DGP", ("p", "q")), ("DGP", ("q", "p"))], "SmL", countermodel="W5", **no)
    return out


_LEDGER = _build()


def ledger() -> list[LedgerEntry]:
    return list(_LEDGER)


def check_entry(entry: LedgerEntry, prover: Prover | None = None) -> LedgerResult:
    prover = prover or Prover("minimal")
    try:
        derived = prover.derives(entry.assumptions, entry.goal)
    except BudgetExceeded as e:
        return LedgerResult(entry, None, False, str(e))
    if derived != entry.expected:
        assumptions = ", ".join(to_text(a) for a in entry.assumptions)
        return LedgerResult(
            entry, derived, False, f"sequent: {assumptions} |- {to_text(entry.goal)}"
        )
    if entry.countermodel is not None:
        s = model(entry.countermodel).structure
        bad = [k for k in entry.premises if not schema_valid_full(s, principle(k).schema)]
        if bad:
            return LedgerResult(entry, derived, False, f"{entry.countermodel} fails premise {bad[0]}")
        if schema_valid_full(s, entry.goal):
            return LedgerResult(entry, derived, False, f"{entry.countermodel} validates the goal")
        return LedgerResult(entry, derived, True, f"countermodel {entry.countermodel}")
    return LedgerResult(entry, derived, True)


def check_ledger(entries: list[LedgerEntry] | None = None) -> LedgerReport:
    """Decide every entry with one shared minimal-logic prover, in entry order."""
    prover = Prover("minimal")
    report = LedgerReport()
    for e in entries if entries is not None else _LEDGER:
        report.results.append(check_entry(e, prover))
    return report
