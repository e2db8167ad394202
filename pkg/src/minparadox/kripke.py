"""Finite structures with abnormal worlds, forcing, and full-model schema validity.

A structure is a finite poset ``(W, <=)`` together with an upward closed set
``Q`` of abnormal worlds, at which ``bot`` is forced.  Schema validity over
the full model quantifies the schema's variables over all upsets of the
structure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .formula import (
    TOP_ATOM,
    Atom,
    Bottom,
    Conj,
    Disj,
    Formula,
    Impl,
    Neg,
    Schema,
    Top,
    TOP,
    substitute,
)

__all__ = [
    "Structure",
    "Model",
    "StructureError",
    "UnknownAtom",
    "upsets",
    "forces",
    "model_valid",
    "extent",
    "compile_formula",
    "schema_countermodel",
    "schema_valid_full",
    "lobotomy",
    "tree_chains",
    "tree_transform",
    "is_v_free",
    "is_antichain",
    "normal_restriction",
    "load_model_file",
    "model_to_dict",
    "to_dot",
]


class StructureError(ValueError):
    """Invalid order, cone, or valuation."""


class UnknownAtom(KeyError):
    """An atom has no extent in the valuation."""


def _transitive_closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(m.shape[0]):
        m |= m[:, k, None] & m[None, k, :]
    return m


class Structure:
    """Finite poset of worlds with an upward closed cone of abnormal worlds.

    ``leq[i, j]`` is true iff ``worlds[i] <= worlds[j]``.  The matrix must be
    a partial order; use :meth:`from_pairs` to start from generating pairs.
    """

    def __init__(self, worlds: Sequence[str], leq, abnormal: Iterable[str] = ()):
        worlds = tuple(str(w) for w in worlds)
        if len(set(worlds)) != len(worlds):
            raise StructureError(f"duplicate world names in {worlds}")
        leq = np.array(leq, dtype=bool).reshape(len(worlds), len(worlds))
        n = len(worlds)
        if n and not leq.diagonal().all():
            raise StructureError("order is not reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            i, j = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))[0]
            raise StructureError(
                f"order is not antisymmetric: {worlds[i]} <= {worlds[j]} <= {worlds[i]}"
            )
        if (_transitive_closure(leq) != leq).any():
            raise StructureError("order is not transitive")
        abnormal = frozenset(str(w) for w in abnormal)
        unknown = abnormal - set(worlds)
        if unknown:
            raise StructureError(f"abnormal worlds not in structure: {sorted(unknown)}")
        leq.setflags(write=False)
        self.worlds = worlds
        self.leq = leq
        self.abnormal = abnormal
        self.index = {w: i for i, w in enumerate(worlds)}
        if not self.is_upset(abnormal):
            raise StructureError(f"Q = {sorted(abnormal)} is not upward closed")

    @classmethod
    def from_pairs(cls, worlds: Sequence[str], pairs: Iterable[Sequence[str]], abnormal=()):
        """Build from ``(lo, hi)`` pairs; the reflexive-transitive closure is taken."""
        worlds = [str(w) for w in worlds]
        index = {w: i for i, w in enumerate(worlds)}
        m = np.eye(len(worlds), dtype=bool)
        for lo, hi in pairs:
            try:
                m[index[str(lo)], index[str(hi)]] = True
            except KeyError as e:
                raise StructureError(f"unknown world {e.args[0]!r} in order pair") from None
        return cls(worlds, _transitive_closure(m), abnormal)

    @classmethod
    def chain(cls, n: int, abnormal=(), names: Sequence[str] | None = None):
        names = list(names) if names is not None else [str(i + 1) for i in range(n)]
        return cls(names, np.triu(np.ones((n, n), dtype=bool)), abnormal)

    @classmethod
    def antichain(cls, n: int, abnormal=(), names: Sequence[str] | None = None):
        names = list(names) if names is not None else [str(i + 1) for i in range(n)]
        return cls(names, np.eye(n, dtype=bool), abnormal)

    def __len__(self):
        return len(self.worlds)

    def __repr__(self):
        pairs = [
            f"{self.worlds[i]}<{self.worlds[j]}"
            for i, j in zip(*np.nonzero(self.leq & ~np.eye(len(self), dtype=bool)))
        ]
        return f"Structure(worlds={list(self.worlds)}, order={pairs}, Q={sorted(self.abnormal)})"

    def _key(self):
        return (self.worlds, self.leq.tobytes(), self.abnormal)

    def __eq__(self, other):
        return isinstance(other, Structure) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def le(self, a: str, b: str) -> bool:
        return bool(self.leq[self.index[a], self.index[b]])

    def successors(self, w: str) -> list[str]:
        i = self.index[w]
        return [self.worlds[j] for j in np.flatnonzero(self.leq[i])]

    def is_upset(self, ws: Iterable[str]) -> bool:
        ws = set(ws)
        return all(set(self.successors(w)) <= ws for w in ws)

    # bitmask views, world i <-> bit i

    @cached_property
    def up_masks(self) -> np.ndarray:
        weights = np.uint64(1) << np.arange(len(self), dtype=np.uint64)
        return (self.leq.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)

    def mask(self, ws: Iterable[str]) -> int:
        return sum(1 << self.index[w] for w in ws)

    def unmask(self, m: int) -> frozenset[str]:
        return frozenset(w for i, w in enumerate(self.worlds) if m >> i & 1)

    @cached_property
    def q_mask(self) -> int:
        return self.mask(self.abnormal)

    @cached_property
    def upset_masks(self) -> np.ndarray:
        """All upsets as bitmasks, ascending."""
        up = [int(u) for u in self.up_masks]
        ok = [
            m
            for m in range(1 << len(self))
            if all(up[i] & m == up[i] for i in range(len(self)) if m >> i & 1)
        ]
        return np.array(ok, dtype=np.uint64)

    def covers(self) -> list[tuple[str, str]]:
        """Hasse diagram edges ``(lower, upper)``."""
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        through = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        cov = strict & ~through
        return [(self.worlds[i], self.worlds[j]) for i, j in zip(*np.nonzero(cov))]


def upsets(structure: Structure) -> list[frozenset[str]]:
    """Upward closed subsets, sorted by membership bitmask."""
    return [structure.unmask(int(m)) for m in structure.upset_masks]


@dataclass(frozen=True, eq=False)
class Model:
    structure: Structure
    valuation: Mapping[str, frozenset[str]]

    def __post_init__(self):
        val = {str(a): frozenset(str(w) for w in ws) for a, ws in self.valuation.items()}
        for a, ws in val.items():
            extra = ws - set(self.structure.worlds)
            if extra:
                raise StructureError(f"valuation of {a!r} mentions unknown worlds {sorted(extra)}")
            if not self.structure.is_upset(ws):
                raise StructureError(f"valuation of {a!r} is not upward closed: {sorted(ws)}")
        object.__setattr__(self, "valuation", val)

    def extent_of(self, atom: str) -> frozenset[str]:
        try:
            return self.valuation[atom]
        except KeyError:
            if atom == TOP_ATOM.name:
                # only ever occurs as t -> t; any upset gives the same verdict
                return frozenset()
            raise UnknownAtom(f"atom {atom!r} has no extent in the valuation") from None


def forces(model: Model, world: str, f: Formula) -> bool:
    """``world`` forces ``f``, by the clauses for atoms, connectives and ``bot``."""
    s = model.structure
    if world not in s.index:
        raise KeyError(f"unknown world {world!r}")
    if isinstance(f, Atom):
        return world in model.extent_of(f.name)
    if isinstance(f, Bottom):
        return world in s.abnormal
    if isinstance(f, Conj):
        return forces(model, world, f.left) and forces(model, world, f.right)
    if isinstance(f, Disj):
        return forces(model, world, f.left) or forces(model, world, f.right)
    if isinstance(f, Impl):
        return all(
            not forces(model, y, f.left) or forces(model, y, f.right)
            for y in s.successors(world)
        )
    if isinstance(f, Neg):
        return forces(model, world, Impl(f.child, Bottom()))
    if isinstance(f, Top):
        return forces(model, world, TOP)
    raise TypeError(f"not a formula: {f!r}")


def model_valid(model: Model, f: Formula) -> bool:
    return all(forces(model, w, f) for w in model.structure.worlds)


def extent(model: Model, f: Formula) -> frozenset[str]:
    """Set of worlds forcing ``f``."""
    return frozenset(w for w in model.structure.worlds if forces(model, w, f))


# ---------------------------------------------------------------------------
# full-model validity via the bitmask kernels


def compile_formula(f: Formula, variables: Sequence[str]):
    """Straight-line program ``(ops, lhs, rhs)`` with shared subterms."""
    var_index = {v: i for i, v in enumerate(variables)}
    ops: list[int] = []
    lhs: list[int] = []
    rhs: list[int] = []
    memo: dict[Formula, int] = {}

    def emit(op, a=0, b=0):
        ops.append(op)
        lhs.append(a)
        rhs.append(b)
        return len(ops) - 1

    def go(g: Formula) -> int:
        if g in memo:
            return memo[g]
        if isinstance(g, Atom):
            if g.name not in var_index:
                if g.name == TOP_ATOM.name:
                    # only occurs as t -> t; any upset will do
                    k = emit(_kernels.OP_BOT)
                else:
                    raise UnknownAtom(f"atom {g.name!r} is not a schema variable")
            else:
                k = emit(_kernels.OP_VAR, var_index[g.name])
        elif isinstance(g, Bottom):
            k = emit(_kernels.OP_BOT)
        elif isinstance(g, Neg):
            k = go(Impl(g.child, Bottom()))
        elif isinstance(g, Top):
            k = go(TOP)
        else:
            a, b = go(g.left), go(g.right)
            op = {Conj: _kernels.OP_AND, Disj: _kernels.OP_OR, Impl: _kernels.OP_IMP}[type(g)]
            k = emit(op, a, b)
        memo[g] = k
        return k

    go(f)
    return (
        np.array(ops, dtype=np.int64),
        np.array(lhs, dtype=np.int64),
        np.array(rhs, dtype=np.int64),
    )


def schema_countermodel(
    structure: Structure, schema: Schema | Formula, *, backend: str | None = None
) -> dict[str, frozenset[str]] | None:
    """First assignment of upsets (in bitmask order) refuting the schema, else ``None``.

    A plain formula is treated as a schema over its atoms.
    """
    if not isinstance(schema, Schema):
        schema = Schema(schema)
    if len(structure) == 0:
        return None
    program = compile_formula(schema.body, schema.variables)
    ups = structure.upset_masks
    idx = _kernels.first_failure(
        program, structure.up_masks, structure.q_mask, ups, len(schema.variables), backend
    )
    if idx < 0:
        return None
    m = len(ups)
    digits = np.unravel_index(idx, (m,) * len(schema.variables)) if schema.variables else ()
    return {
        v: structure.unmask(int(ups[d])) for v, d in zip(schema.variables, digits)
    }


def schema_valid_full(
    structure: Structure, schema: Schema | Formula, *, backend: str | None = None
) -> bool:
    """Valid in the full model: every assignment of upsets to the variables validates it."""
    return schema_countermodel(structure, schema, backend=backend) is None


def schema_valid_full_reference(structure: Structure, schema: Schema) -> bool:
    """Same verdict as :func:`schema_valid_full`, via :func:`forces` on each instance.

    Slow; kept as an independent cross-check of the kernels.
    """
    fresh = [f"_U{i}" for i in range(len(schema.variables))]
    body = substitute(schema, {v: Atom(a) for v, a in zip(schema.variables, fresh)})
    for choice in product(upsets(structure), repeat=len(fresh)):
        model = Model(structure, dict(zip(fresh, choice)))
        if not model_valid(model, body):
            return False
    return True


# ---------------------------------------------------------------------------
# constructions and structural predicates


def lobotomy(structure: Structure) -> Structure:
    """Same order, every world abnormal."""
    return Structure(structure.worlds, structure.leq, structure.worlds)


def normal_restriction(structure: Structure) -> Structure:
    """Induced order on the normal worlds, with an empty cone."""
    keep = [i for i, w in enumerate(structure.worlds) if w not in structure.abnormal]
    return Structure(
        [structure.worlds[i] for i in keep], structure.leq[np.ix_(keep, keep)], ()
    )


def is_antichain(structure: Structure) -> bool:
    return bool((structure.leq == np.eye(len(structure), dtype=bool)).all())


def is_v_free(structure: Structure) -> bool:
    """No ``a <= b``, ``a <= c`` with ``b`` and ``c`` incomparable."""
    leq = structure.leq
    comparable = leq | leq.T
    for a in range(len(structure)):
        above = np.flatnonzero(leq[a])
        if not comparable[np.ix_(above, above)].all():
            return False
    return True


def tree_chains(structure: Structure) -> list[tuple[str, ...]]:
    """Maximal chains having some world as their maximum, listed bottom-up.

    These are the saturated chains from a minimal element up to that world.
    Ordered by top world, then lexicographically by indices.
    """
    lower_covers: dict[str, list[str]] = {w: [] for w in structure.worlds}
    for lo, hi in structure.covers():
        lower_covers[hi].append(lo)
    memo: dict[str, list[tuple[str, ...]]] = {}

    def chains(u):
        if u not in memo:
            below = lower_covers[u]
            memo[u] = [(u,)] if not below else [c + (u,) for b in below for c in chains(b)]
        return memo[u]

    out = []
    for u in structure.worlds:
        out.extend(sorted(chains(u), key=lambda c: [structure.index[w] for w in c]))
    return out


def tree_transform(model: Model) -> Model:
    """Model on (world, chain) pairs ordered by chain inclusion.

    World names are the chains joined by ``/`` (bottom-up); the last segment
    is the original world.  Worlds follow :func:`tree_chains` order.
    """
    s = model.structure
    cs = tree_chains(s)
    names = ["/".join(c) for c in cs]
    sets = [frozenset(c) for c in cs]
    leq = np.array([[a <= b for b in sets] for a in sets], dtype=bool)
    abnormal = [n for n, c in zip(names, cs) if c[-1] in s.abnormal]
    tree = Structure(names, leq, abnormal)
    valuation = {
        atom: frozenset(n for n, c in zip(names, cs) if c[-1] in ws)
        for atom, ws in model.valuation.items()
    }
    return Model(tree, valuation)


# ---------------------------------------------------------------------------
# model files


def structure_from_dict(data: Mapping) -> tuple[Structure, dict | None]:
    for key in ("worlds", "leq"):
        if key not in data:
            raise StructureError(f"model file is missing field {key!r}")
    s = Structure.from_pairs(data["worlds"], data["leq"], data.get("Q", ()))
    valuation = data.get("valuation")
    return s, ({a: list(ws) for a, ws in valuation.items()} if valuation is not None else None)


def load_model_file(path: str | Path) -> tuple[Structure, dict | None]:
    """Read a JSON model file: ``worlds``, ``leq`` pairs, ``Q``, optional ``valuation``."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise StructureError(f"{path}: not valid JSON ({e})") from None
    return structure_from_dict(data)


def model_to_dict(structure: Structure, valuation: Mapping | None = None) -> dict:
    out = {
        "worlds": list(structure.worlds),
        "leq": [list(p) for p in structure.covers()],
        "Q": [w for w in structure.worlds if w in structure.abnormal],
    }
    if valuation is not None:
        out["valuation"] = {
            a: [w for w in structure.worlds if w in ws] for a, ws in sorted(valuation.items())
        }
    return out


def to_dot(structure: Structure, name: str = "W") -> str:
    lines = [f'digraph "{name}" {{', "  rankdir=BT;"]
    for w in structure.worlds:
        style = ' style=filled fillcolor="gray80"' if w in structure.abnormal else ""
        lines.append(f'  "{w}" [shape=circle{style}];')
    for lo, hi in structure.covers():
        lines.append(f'  "{lo}" -> "{hi}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
