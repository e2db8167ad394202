"""Named principles and named structures.

Metavariables are written ``phi``, ``psi``, ``theta``, ``beta`` in schema text
and rendered as Greek letters by :func:`minparadox.formula.to_unicode`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Conj, Formula, Schema, iff, parse, translate_implicational
from .kripke import Structure, lobotomy

__all__ = [
    "Principle",
    "NamedModel",
    "principles",
    "principle",
    "models",
    "model",
    "FIG4_COLUMNS",
    "FIG4_ROWS",
    "FIG1_PRINCIPLES",
    "FIG1_EDGES",
    "PROVABLE_KEYS",
]


@dataclass(frozen=True)
class Principle:
    key: str
    name: str
    schema: Schema
    implicational_forms: tuple[Schema, ...] = ()
    provable_in_minimal: bool = False
    aliases: tuple[str, ...] = ()
    note: str = ""

    @property
    def body(self) -> Formula:
        return self.schema.body


@dataclass(frozen=True)
class NamedModel:
    key: str
    display: str
    structure: Structure
    notes: str = ""
    aliases: tuple[str, ...] = field(default=())


def _schema(text: str, variables: tuple[str, ...] = ()) -> Schema:
    return Schema(parse(text), variables)


def _iff(left: str, right: str) -> Schema:
    return Schema(iff(parse(left), parse(right)))


# (key, display name, schema, aliases, note)
_BASE = [
    ("DNE", "double negation elimination", _schema("~~phi -> phi"), (), ""),
    ("LEM", "law of excluded middle", _schema("phi | ~phi"), (), ""),
    ("EFQ", "ex falso quodlibet", _schema("bot -> phi"), (), ""),
    ("WLEM", "weak law of excluded middle", _schema("~phi | ~~phi"), (), ""),
    ("P1", "linearity, strong form", _schema("(phi -> psi) | (psi -> theta)"), ("1",), ""),
    ("P2", "ex contradictione quodlibet", _schema("phi & ~phi -> psi"), ("2",), ""),
    ("P3", "principle 3", _schema("phi -> psi | ~psi"), ("3",), ""),
    ("P4", "principle 4", _schema("(phi -> psi) | ~psi"), ("4",), ""),
    ("P5", "principle 5", _schema("~phi -> phi -> psi"), ("5",), ""),
    ("P6", "consequentia mirabilis", _schema("(~phi -> phi) -> phi"), ("6",), ""),
    (
        "P7",
        "principle 7",
        _schema("(phi & psi -> theta) -> (phi -> theta) | (psi -> theta)"),
        ("7",),
        "",
    ),
    (
        "P8",
        "principle 8",
        _schema("(phi -> theta) & (psi -> beta) -> (phi -> beta) | (psi -> theta)",
                ("phi", "psi", "theta", "beta")),
        ("8",),
        "",
    ),
    ("P9", "the counterexample principle", _schema("~(phi -> psi) -> phi & ~psi"), ("9",), ""),
    ("PP", "Peirce's principle", _schema("((phi -> psi) -> phi) -> phi"), ("P10", "10"), ""),
    ("DGP", "Dirk Gently's principle", _schema("(phi -> psi) | (psi -> phi)"), ("P11", "11"), ""),
    ("P12", "principle 12", _schema("~~phi | phi -> phi"), ("12",), ""),
    (
        "P13",
        "Tarski's formula",
        _schema("psi | (psi -> theta)"),
        ("13",),
        "equivalent to PP and P1, not to DNE",
    ),
    ("P14", "weak Dirk Gently's principle", _schema("(~phi -> ~psi) | (~psi -> ~phi)"), ("14",), ""),
    ("P15", "principle 15", _schema("(phi -> psi | theta) -> (phi -> psi) | (phi -> theta)"), ("15",), ""),
    ("P16", "a form of Aristotle's law", _schema("~(phi -> ~phi) -> phi"), ("16",), ""),
    ("DM1", "De Morgan 1", _iff("~(phi & psi)", "~phi | ~psi"), (), ""),
    ("DM2", "De Morgan 2", _iff("~(phi | psi)", "~phi & ~psi"), (), ""),
    ("DM1'", "De Morgan 1'", _iff("~(~phi & ~psi)", "phi | psi"), ("DM1p",), ""),
    ("DM2'", "De Morgan 2'", _iff("~(~phi | ~psi)", "phi & psi"), ("DM2p",), ""),
]

# primed form of a base principle: (key, source key, part index or None, display)
_TRANSLATED = [
    ("WT", "P13", None, "weak Tarski's formula", ("P13imp",)),
    ("DGPimp", "DGP", None, "implicative Dirk Gently's principle", ("DGPi", "P11imp")),
    ("LEMimp", "LEM", None, "LEM, implicational form", ()),
    ("WLEMimp", "WLEM", None, "WLEM, implicational form", ()),
    ("P1imp", "P1", None, "principle 1, implicational form", ()),
    ("P2imp", "P2", None, "principle 2, implicational form", ()),
    ("P3imp", "P3", None, "principle 3, implicational form", ()),
    ("P4imp", "P4", None, "principle 4, implicational form", ()),
    ("P7imp", "P7", None, "principle 7, implicational form", ()),
    ("P8imp", "P8", None, "principle 8, implicational form", ()),
    ("P9imp_a", "P9", 0, "principle 9, implicational form (a)", ()),
    ("P9imp_b", "P9", 1, "principle 9, implicational form (b)", ()),
    ("P12imp", "P12", None, "principle 12, implicational form", ()),
    ("P14imp", "P14", None, "principle 14, implicational form", ()),
    ("P15imp", "P15", None, "principle 15, implicational form", ()),
    ("DM1imp", "DM1", None, "DM1, implicational form (both directions)", ()),
    ("DM2imp", "DM2", None, "DM2, implicational form (all three parts)", ()),
    ("DM1'imp", "DM1'", None, "DM1', implicational form", ("DM1pimp",)),
    ("DM2'imp_a", "DM2'", 0, "DM2', implicational form (a)", ("DM2pimp_a",)),
    ("DM2'imp_b", "DM2'", 1, "DM2', implicational form (b)", ("DM2pimp_b",)),
    ("DM2'imp_c", "DM2'", 2, "DM2', implicational form (c)", ("DM2pimp_c",)),
]

_EXTRA = [
    ("P17", "pulling double negation out of an implication", _schema("(phi -> ~~psi) -> ~~(phi -> psi)"), ("17",)),
    ("P18", "pulling double negation into an implication", _schema("~~(phi -> psi) -> ~~phi -> psi"), ("18",)),
    ("P17conv", "converse of principle 17", _schema("~~(phi -> psi) -> phi -> ~~psi"), ()),
    ("P18conv", "converse of principle 18", _schema("(~~phi -> psi) -> ~~(phi -> psi)"), ()),
    ("CMneg", "negative consequentia mirabilis", _schema("(phi -> ~phi) -> ~phi"), ()),
    ("EFQF", "ex falso quodlibet falsum", _schema("bot -> ~phi"), ()),
    ("KP", "Kreisel-Putnam", _schema("(~phi -> psi | theta) -> (~phi -> psi) | (~phi -> theta)"), ()),
    ("Scott", "Scott's formula", _schema("((~~phi -> phi) -> phi | ~phi) -> ~~phi | ~phi"), ()),
    ("SmL", "Smetanich's axiom", _schema("(~psi -> phi) -> ((phi -> psi) -> phi) -> phi", ("phi", "psi")), ()),
]

PROVABLE_KEYS = (
    "DM2",
    "LEMimp",
    "WLEMimp",
    "P3imp",
    "P4imp",
    "P9imp_b",
    "P14imp",
    "DM1imp",
    "DM2imp",
    "DM1'imp",
    "DM2'imp_c",
    "P17conv",
    "P18conv",
    "CMneg",
    "EFQF",
)

FIG4_COLUMNS = ("DNE", "EFQ", "LEM", "DGP", "PP", "WLEM", "WT", "DGPimp")
FIG1_PRINCIPLES = FIG4_COLUMNS
FIG1_EDGES = (
    ("DNE", "PP"),
    ("DNE", "EFQ"),
    ("PP", "LEM"),
    ("PP", "DGP"),
    ("PP", "WT"),
    ("LEM", "WLEM"),
    ("DGP", "WLEM"),
    ("DGP", "DGPimp"),
    ("EFQ", "WT"),
    ("WT", "DGPimp"),
)


def _forms(schema: Schema) -> tuple[Schema, ...]:
    tr = translate_implicational(schema.body)
    return tuple(Schema(f, schema.variables) for f in tr.result)


def _part_schema(parts: tuple[Schema, ...], variables) -> Schema:
    body = parts[0].body
    for p in parts[1:]:
        body = Conj(body, p.body)
    return Schema(body, variables)


def _build_principles() -> list[Principle]:
    out: list[Principle] = []
    by_key: dict[str, Principle] = {}
    provable = set(PROVABLE_KEYS)
    for key, name, schema, aliases, note in _BASE:
        p = Principle(key, name, schema, _forms(schema), key in provable, aliases, note)
        out.append(p)
        by_key[key] = p
    for key, src, part, name, aliases in _TRANSLATED:
        base = by_key[src]
        forms = base.implicational_forms
        if part is not None:
            forms = (forms[part],)
        schema = _part_schema(forms, base.schema.variables)
        out.append(Principle(key, name, schema, forms, key in provable, aliases))
    for key, name, schema, aliases in _EXTRA:
        out.append(Principle(key, name, schema, _forms(schema), key in provable, aliases))
    return out


_PRINCIPLES = _build_principles()
_PRINCIPLE_INDEX = {}
for _p in _PRINCIPLES:
    for _k in (_p.key, *_p.aliases):
        if _k in _PRINCIPLE_INDEX:
            raise AssertionError(f"duplicate principle key {_k}")
        _PRINCIPLE_INDEX[_k] = _p


def principles() -> list[Principle]:
    return list(_PRINCIPLES)


def principle(key: str) -> Principle:
    try:
        return _PRINCIPLE_INDEX[key]
    except KeyError:
        raise KeyError(f"unknown principle {key!r}") from None


def _build_models() -> list[NamedModel]:
    w1 = Structure(["0"], [[True]])
    w2 = Structure.chain(2)
    v = Structure.from_pairs(["0", "1", "2"], [("0", "1"), ("0", "2")])
    w4 = Structure.from_pairs(
        ["0", "1", "2", "12"], [("0", "1"), ("0", "2"), ("1", "12"), ("2", "12")]
    )
    return [
        NamedModel("W1", "W₁", w1, "one normal world"),
        NamedModel("W1_bot", "W₁⊥", lobotomy(w1), "one abnormal world", ("W1⊥",)),
        NamedModel("W2", "W₂", w2, "two-element chain 1 < 2"),
        NamedModel("W2_bot", "W₂⊥", lobotomy(w2), "", ("W2⊥",)),
        NamedModel("W2'", "W₂′", Structure.chain(2, abnormal=["2"]), "chain, top abnormal", ("W2p",)),
        NamedModel("W3", "W₃", v, "v shape: 0 below 1 and 2"),
        NamedModel("W3_bot", "W₃⊥", lobotomy(v), "", ("W3⊥",)),
        NamedModel(
            "W3'",
            "W₃′",
            Structure(v.worlds, v.leq, ["1", "2"]),
            "v shape, both tops abnormal",
            ("W3p",),
        ),
        NamedModel("W4", "W₄", w4, "diamond: subsets of {1,2} under inclusion"),
        NamedModel("W4_bot", "W₄⊥", lobotomy(w4), "", ("W4⊥",)),
        NamedModel("W5", "W₅", Structure.chain(3), "three-element chain, empty cone"),
    ]


_MODELS = _build_models()
_MODEL_INDEX = {k: m for m in _MODELS for k in (m.key, *m.aliases)}

FIG4_ROWS = tuple(m.key for m in _MODELS if m.key != "W5")


def models() -> list[NamedModel]:
    return list(_MODELS)


def model(key: str) -> NamedModel:
    try:
        return _MODEL_INDEX[key]
    except KeyError:
        raise KeyError(f"unknown model {key!r}") from None
