"""Propositional formulas, schemas, parsing/printing and the implicational translation.

Core formulas are built from :class:`Atom`, :class:`Bottom`, :class:`Conj`,
:class:`Disj` and :class:`Impl`.  :class:`Neg` and :class:`Top` exist only at
the surface; :func:`desugar` removes them (``~a`` becomes ``a -> bot`` and
``top`` becomes ``t -> t`` for the reserved atom :data:`TOP_ATOM`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

__all__ = [
    "Atom",
    "Bottom",
    "Conj",
    "Disj",
    "Impl",
    "Neg",
    "Top",
    "Formula",
    "BOT",
    "TOP_ATOM",
    "TOP",
    "Schema",
    "FormulaSyntaxError",
    "UnsupportedShape",
    "ImplicationalTranslation",
    "neg",
    "iff",
    "desugar",
    "is_core",
    "atoms",
    "size",
    "parse",
    "to_text",
    "to_unicode",
    "substitute",
    "translate_implicational",
]


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be nonempty")


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Conj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Disj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Impl:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Neg:
    child: "Formula"


@dataclass(frozen=True)
class Top:
    pass


Formula = Union[Atom, Bottom, Conj, Disj, Impl, Neg, Top]

BOT = Bottom()
# Not matched by the identifier class, so it can never clash with a user atom.
TOP_ATOM = Atom("⊤₀")
TOP = Impl(TOP_ATOM, TOP_ATOM)


class FormulaSyntaxError(ValueError):
    """Raised by :func:`parse`; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class UnsupportedShape(ValueError):
    """A conjunction sits where the implicational translation is undefined."""


def neg(f: Formula) -> Formula:
    return Impl(f, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    """Biconditional, encoded as the conjunction of both directions."""
    return Conj(Impl(a, b), Impl(b, a))


def desugar(f: Formula) -> Formula:
    if isinstance(f, (Atom, Bottom)):
        return f
    if isinstance(f, Neg):
        return Impl(desugar(f.child), BOT)
    if isinstance(f, Top):
        return TOP
    return type(f)(desugar(f.left), desugar(f.right))


def is_core(f: Formula) -> bool:
    if isinstance(f, (Neg, Top)):
        return False
    if isinstance(f, (Atom, Bottom)):
        return True
    return is_core(f.left) and is_core(f.right)


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Neg):
            stack.append(g.child)
        elif isinstance(g, (Conj, Disj, Impl)):
            stack.append(g.right)
            stack.append(g.left)


def atoms(f: Formula) -> list[str]:
    """Atom names in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}
    for g in _walk(f):
        if isinstance(g, Atom):
            seen.setdefault(g.name)
    return list(seen)


def size(f: Formula) -> int:
    return sum(1 for _ in _walk(f))


# ---------------------------------------------------------------------------
# parsing

_KEYWORDS = {"bot", "top"}
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<arrow>->)
  | (?P<bot>_\|_)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[~&|()])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unknown token {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        elif kind == "ident" and m.group() in _KEYWORDS:
            tokens.append(_Token(m.group(), m.group(), line, col))
        elif kind == "bot":
            tokens.append(_Token("bot", m.group(), line, col))
        elif kind == "op":
            tokens.append(_Token(m.group(), m.group(), line, col))
        else:
            tokens.append(_Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    # precedence: ~ > & > | > ->; & and | are left-assoc, -> is right-assoc

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise FormulaSyntaxError(f"expected {want}, got {got}", tok.line, tok.column)
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "arrow":
            self.take()
            return Impl(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "|":
            self.take()
            f = Disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "&":
            self.take()
            f = Conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.take()
            return Neg(self.unary())
        if tok.kind == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok.kind == "ident":
            self.take()
            return Atom(tok.text)
        if tok.kind == "bot":
            self.take()
            return BOT
        if tok.kind == "top":
            self.take()
            return Top()
        got = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise FormulaSyntaxError(f"unexpected {got}", tok.line, tok.column)


def parse(text: str, *, sugar: bool = False) -> Formula:
    """Parse ASCII formula syntax.

    The result is desugared unless ``sugar=True``.

    >>> parse("p -> q -> r")
    Impl(left=Atom(name='p'), right=Impl(left=Atom(name='q'), right=Atom(name='r')))
    """
    p = _Parser(text)
    f = p.formula()
    p.take("eof")
    return f if sugar else desugar(f)


# ---------------------------------------------------------------------------
# printing

_PREC = {Impl: 1, Disj: 2, Conj: 3}

_UNICODE_NAMES = {"phi": "φ", "psi": "ψ", "theta": "ϑ", "beta": "β", "alpha": "α"}


def _render(f: Formula, sym: Mapping[str, str], name) -> tuple[str, int]:
    """Return (text, precedence)."""
    if isinstance(f, Atom):
        return name(f.name), 9
    if isinstance(f, Bottom):
        return sym["bot"], 9
    if isinstance(f, Top) or f == TOP:
        return sym["top"], 9
    if isinstance(f, Neg) or (isinstance(f, Impl) and isinstance(f.right, Bottom)):
        child = f.child if isinstance(f, Neg) else f.left
        text, prec = _render(child, sym, name)
        if prec < 4:
            text = f"({text})"
        return sym["neg"] + text, 4
    prec = _PREC[type(f)]
    lt, lp = _render(f.left, sym, name)
    rt, rp = _render(f.right, sym, name)
    if isinstance(f, Impl):
        if lp <= prec:
            lt = f"({lt})"
        if rp < prec:
            rt = f"({rt})"
        op = sym["imp"]
    else:
        if lp < prec:
            lt = f"({lt})"
        if rp <= prec:
            rt = f"({rt})"
        op = sym["and"] if isinstance(f, Conj) else sym["or"]
    return f"{lt} {op} {rt}", prec


_ASCII = {"bot": "bot", "top": "top", "neg": "~", "imp": "->", "and": "&", "or": "|"}
_UNICODE = {"bot": "⊥", "top": "⊤", "neg": "¬", "imp": "⟹", "and": "∧", "or": "∨"}


def to_text(f: Formula) -> str:
    """ASCII rendering that :func:`parse` reads back to ``desugar(f)``."""
    return _render(f, _ASCII, lambda n: n)[0]


def to_unicode(f: Formula) -> str:
    return _render(f, _UNICODE, lambda n: _UNICODE_NAMES.get(n, n))[0]


# ---------------------------------------------------------------------------
# schemas


@dataclass(frozen=True)
class Schema:
    """A formula whose atoms are metavariables.

    ``variables`` fixes the order in which metavariables are listed; every
    atom of ``body`` must appear there exactly once.
    """

    body: Formula
    variables: tuple[str, ...] = field(default=())

    def __post_init__(self):
        variables = tuple(self.variables) or tuple(
            a for a in atoms(self.body) if a != TOP_ATOM.name
        )
        object.__setattr__(self, "variables", variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate schema variables: {variables}")
        missing = set(atoms(self.body)) - set(variables) - {TOP_ATOM.name}
        if missing:
            raise ValueError(f"undeclared metavariables: {sorted(missing)}")

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] = ()) -> "Schema":
        return cls(parse(text), tuple(variables))

    def instantiate(self, *args: Formula | str, **kwargs: Formula | str) -> Formula:
        """Positional arguments follow ``variables``; strings are parsed."""
        if len(args) > len(self.variables):
            raise ValueError("too many arguments for schema")
        assignment = dict(zip(self.variables, args))
        assignment.update(kwargs)
        return substitute(
            self,
            {k: parse(v) if isinstance(v, str) else v for k, v in assignment.items()},
        )

    def generic(self, names: Sequence[str] = ("p", "q", "r", "s", "t", "u")) -> Formula:
        """Instance with the metavariables replaced by distinct atoms, in order."""
        return self.instantiate(*(Atom(n) for n in names[: len(self.variables)]))

    def __str__(self):
        return to_unicode(self.body)


def _subst(f: Formula, assignment: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Atom):
        return assignment.get(f.name, f)
    if isinstance(f, (Bottom, Top)):
        return f
    if isinstance(f, Neg):
        return Neg(_subst(f.child, assignment))
    return type(f)(_subst(f.left, assignment), _subst(f.right, assignment))


def substitute(schema: Schema, assignment: Mapping[str, Formula]) -> Formula:
    """Simultaneously replace every metavariable of ``schema``."""
    missing = [v for v in schema.variables if v not in assignment]
    if missing:
        raise KeyError(f"no assignment for schema variable(s): {', '.join(missing)}")
    extra = set(assignment) - set(schema.variables)
    if extra:
        raise KeyError(f"not a schema variable: {', '.join(sorted(extra))}")
    return _subst(schema.body, assignment)


# ---------------------------------------------------------------------------
# implicational fragment


@dataclass(frozen=True)
class ImplicationalTranslation:
    source: Formula
    result: tuple[Formula, ...]

    def __post_init__(self):
        for g in self.result:
            if any(isinstance(h, (Conj, Disj, Neg, Top)) for h in _walk(g)):
                raise AssertionError(f"translation left a non-implicational node: {g}")


def _translate(f: Formula, swap_disj: bool) -> list[Formula]:
    # A list stands for the conjunction of its members.
    if isinstance(f, (Atom, Bottom)):
        return [f]
    if isinstance(f, Conj):
        return _translate(f.left, swap_disj) + _translate(f.right, swap_disj)
    if isinstance(f, Disj):
        left = _translate(f.left, swap_disj)
        right = _translate(f.right, swap_disj)
        if len(left) != 1 or len(right) != 1:
            raise UnsupportedShape(f"conjunction under a disjunction: {to_text(f)}")
        a, b = (right[0], left[0]) if swap_disj else (left[0], right[0])
        return [Impl(neg(a), neg(neg(b)))]
    if isinstance(f, Impl):
        premises = _translate(f.left, swap_disj)
        out = []
        for c in _translate(f.right, swap_disj):
            for p in reversed(premises):
                c = Impl(p, c)
            out.append(c)
        return out
    raise TypeError(f"translate_implicational expects a core formula, got {f!r}")


def translate_implicational(f: Formula, *, swap_disj: bool = False) -> ImplicationalTranslation:
    """Translate into the fragment built from atoms, ``bot`` and ``->``.

    ``a | b`` becomes ``~a -> ~~b`` (``~b -> ~~a`` with ``swap_disj``),
    a conjunctive antecedent is curried, and a conjunctive consequent (or a
    top-level conjunction) splits the result into separate formulas.
    A conjunction directly under a disjunction raises :class:`UnsupportedShape`.
    """
    f = desugar(f)
    return ImplicationalTranslation(f, tuple(_translate(f, swap_disj)))
