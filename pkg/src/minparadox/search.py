"""Exhaustive search over small structures: tables, separations, audits.

Posets are generated up to isomorphism by adding one new maximal element at
a time below which any downset of a smaller representative may sit; each
candidate is reduced to a canonical form, the minimum adjacency encoding
over all relabelings that keep the order upper triangular.  Every
representative is then paired with each of its upsets as the cone.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import catalog
from .catalog import FIG1_EDGES, FIG1_PRINCIPLES, Principle
from .formula import Schema
from .kripke import (
    Structure,
    is_antichain,
    is_v_free,
    normal_restriction,
    schema_valid_full,
)

__all__ = [
    "MAX_ENUM_WORLDS",
    "posets",
    "enumerate_structures",
    "count_structures",
    "canonical_code",
    "ClassificationTable",
    "classify",
    "catalog_table",
    "SeparationQuery",
    "find_separation",
    "AuditPair",
    "audit_figure1",
    "Check",
    "run_experiments",
    "characterize",
]

MAX_ENUM_WORLDS = 6


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _weights(n: int) -> np.ndarray:
    # row-major, first cell most significant
    return (np.int64(1) << np.arange(n * n - 1, -1, -1, dtype=np.int64)).astype(np.int64)


def _canonical(leq: np.ndarray, q_mask: int | None = None) -> tuple[tuple[int, int], np.ndarray]:
    """Canonical (code, permutation) of a poset, optionally with a cone bitmask."""
    n = leq.shape[0]
    if n == 0:
        return (0, 0), np.zeros(0, dtype=np.int64)
    P = _perms(n)
    permuted = leq[P[:, :, None], P[:, None, :]]
    natural = ~np.tril(permuted, -1).any(axis=(1, 2))
    codes = permuted.reshape(len(P), -1).astype(np.int64) @ _weights(n)
    if q_mask is None:
        qcodes = np.zeros(len(P), dtype=np.int64)
    else:
        bits = (q_mask >> P) & 1  # bit i of the relabeled cone is bit P[i] of the old one
        qcodes = bits @ (np.int64(1) << np.arange(n, dtype=np.int64))
    codes = np.where(natural, codes, np.iinfo(np.int64).max)
    best = np.lexsort((qcodes, codes))[0]
    return (int(codes[best]), int(qcodes[best])), P[best]


def canonical_code(structure: Structure) -> tuple[int, int, int]:
    """Isomorphism invariant of (order, cone): equal iff the structures are isomorphic."""
    (code, q), _ = _canonical(structure.leq, structure.q_mask)
    return len(structure), code, q


@lru_cache(maxsize=None)
def _poset_reps(n: int) -> tuple[bytes, ...]:
    if n == 0:
        return (b"",)
    seen: dict[int, np.ndarray] = {}
    for raw in _poset_reps(n - 1):
        base = np.frombuffer(raw, dtype=bool).reshape(n - 1, n - 1)
        s = Structure([str(i) for i in range(n - 1)], base)
        full = (1 << (n - 1)) - 1
        downsets = [full ^ int(u) for u in s.upset_masks] if n > 1 else [0]
        for down in downsets:
            m = np.zeros((n, n), dtype=bool)
            m[: n - 1, : n - 1] = base
            m[n - 1, n - 1] = True
            for i in range(n - 1):
                if down >> i & 1:
                    m[i, n - 1] = True
            (code, _), perm = _canonical(m)
            if code not in seen:
                seen[code] = np.ascontiguousarray(m[np.ix_(perm, perm)])
    return tuple(seen[c].tobytes() for c in sorted(seen))


def posets(n: int) -> list[np.ndarray]:
    """One upper-triangular ``leq`` matrix per isomorphism class of posets on ``n`` points."""
    if n < 0 or n > MAX_ENUM_WORLDS:
        raise ValueError(f"poset enumeration supports 0..{MAX_ENUM_WORLDS} points")
    return [np.frombuffer(b, dtype=bool).reshape(n, n).copy() for b in _poset_reps(n)]


def enumerate_structures(max_worlds: int, *, exact: bool = False) -> Iterator[Structure]:
    """Every (poset, cone) pair on 1..max_worlds worlds, posets up to isomorphism.

    Cones are all upsets of the representative (not reduced by automorphisms).
    Order: size, then poset code, then cone bitmask.  ``exact`` restricts to
    ``max_worlds`` worlds.
    """
    if not 1 <= max_worlds <= MAX_ENUM_WORLDS:
        raise ValueError(f"max_worlds must be between 1 and {MAX_ENUM_WORLDS}")
    for n in range(max_worlds if exact else 1, max_worlds + 1):
        names = [str(i) for i in range(n)]
        for leq in posets(n):
            base = Structure(names, leq)
            for q in base.upset_masks:
                yield Structure(names, leq, base.unmask(int(q)))


def count_structures(max_worlds: int, *, exact: bool = False) -> int:
    return sum(1 for _ in enumerate_structures(max_worlds, exact=exact))


# ---------------------------------------------------------------------------
# classification tables


def _as_schema(p: Principle | Schema) -> Schema:
    return p.schema if isinstance(p, Principle) else p


def _row(args) -> list[bool]:
    structure, schemas, backend = args
    return [schema_valid_full(structure, s, backend=backend) for s in schemas]


@dataclass
class ClassificationTable:
    rows: list[str]
    columns: list[str]
    cells: np.ndarray  # bool, rows x columns

    def cell(self, row: str, column: str) -> bool:
        return bool(self.cells[self.rows.index(row), self.columns.index(column)])

    def row(self, name: str) -> tuple[bool, ...]:
        return tuple(bool(x) for x in self.cells[self.rows.index(name)])

    def column(self, name: str) -> tuple[bool, ...]:
        return tuple(bool(x) for x in self.cells[:, self.columns.index(name)])

    def to_csv(self) -> str:
        lines = [",".join(["model", *self.columns])]
        for name, row in zip(self.rows, self.cells):
            lines.append(",".join([name, *("1" if x else "0" for x in row)]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        data = {
            "columns": list(self.columns),
            "rows": [
                {"model": name, "verdicts": {c: bool(x) for c, x in zip(self.columns, row)}}
                for name, row in zip(self.rows, self.cells)
            ],
        }
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        width = max([len(r) for r in self.rows] + [5])
        colw = [max(len(c), 1) for c in self.columns]
        head = " " * width + " | " + " | ".join(c.center(w) for c, w in zip(self.columns, colw))
        lines = [head, "-" * len(head)]
        for name, row in zip(self.rows, self.cells):
            marks = ("✓" if x else "✗" for x in row)
            lines.append(
                name.ljust(width) + " | " + " | ".join(m.center(w) for m, w in zip(marks, colw))
            )
        return "\n".join(lines) + "\n"


def classify(
    structures: Sequence[tuple[str, Structure]],
    principles: Sequence[Principle | tuple[str, Schema]],
    *,
    jobs: int = 1,
    backend: str | None = None,
) -> ClassificationTable:
    """Verdict matrix: cell (m, p) is full-model validity of p on m."""
    names = [n for n, _ in structures]
    cols, schemas = [], []
    for p in principles:
        if isinstance(p, Principle):
            cols.append(p.key)
            schemas.append(p.schema)
        else:
            cols.append(p[0])
            schemas.append(p[1])
    work = [(s, schemas, backend) for _, s in structures]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_row, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        rows = [_row(w) for w in work]
    cells = np.array(rows, dtype=bool).reshape(len(names), len(cols))
    return ClassificationTable(names, cols, cells)


def catalog_table(keys: Iterable[str] = catalog.FIG4_COLUMNS, rows: Iterable[str] = catalog.FIG4_ROWS):
    models = [(k, catalog.model(k).structure) for k in rows]
    return classify(models, [catalog.principle(k) for k in keys])


# ---------------------------------------------------------------------------
# separations


@dataclass(frozen=True)
class SeparationQuery:
    must_hold: frozenset[str]
    must_fail: frozenset[str]
    max_worlds: int = 4

    def __post_init__(self):
        object.__setattr__(self, "must_hold", frozenset(self.must_hold))
        object.__setattr__(self, "must_fail", frozenset(self.must_fail))
        if self.must_hold & self.must_fail:
            raise ValueError(f"principles both required and refuted: {sorted(self.must_hold & self.must_fail)}")
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")


def _satisfies(s: Structure, hold: Sequence[Schema], fail: Sequence[Schema]) -> bool:
    return all(not schema_valid_full(s, f) for f in fail) and all(schema_valid_full(s, h) for h in hold)


def find_separation(query: SeparationQuery) -> Structure | None:
    """First enumerated structure validating ``must_hold`` and refuting ``must_fail``.

    ``None`` means no witness up to ``max_worlds`` worlds, nothing more.
    """
    hold = [catalog.principle(k).schema for k in sorted(query.must_hold)]
    fail = [catalog.principle(k).schema for k in sorted(query.must_fail)]
    for s in enumerate_structures(query.max_worlds):
        if _satisfies(s, hold, fail):
            return s
    return None


def _reachable(edges) -> dict[str, set[str]]:
    reach: dict[str, set[str]] = {p: set() for p in FIG1_PRINCIPLES}
    for a, b in edges:
        reach[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in reach:
            new = set().union(*(reach[b] for b in reach[a])) - reach[a]
            if new:
                reach[a] |= new
                changed = True
    return reach


def _path(a: str, b: str, edges) -> list[tuple[str, str]]:
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for x in frontier:
            for u, v in edges:
                if u == x and v not in prev:
                    prev[v] = x
                    nxt.append(v)
        frontier = nxt
    out = []
    while prev.get(b) is not None:
        out.append((prev[b], b))
        b = prev[b]
    return out[::-1]


@dataclass(frozen=True)
class AuditPair:
    a: str
    b: str
    kind: str  # "proved", "separated", "violation", "gap"
    detail: str

    @property
    def ok(self) -> bool:
        return self.kind in ("proved", "separated")


def audit_figure1(max_worlds: int = 4) -> list[AuditPair]:
    """Every ordered pair of the eight principles is either proved or separated.

    A pair with a path of arrows must have each arrow derived in the ledger
    and no structure (catalog, or enumerated up to ``max_worlds``) validating
    the source while refuting the target.  Any other pair needs a separating
    structure, taken from the catalog first.
    """
    from .ledger import check_ledger, ledger

    results = {r.entry.name: r for r in check_ledger([e for e in ledger() if e.expected]).results}
    keys = list(FIG1_PRINCIPLES)
    named = [(m.key, m.structure) for m in catalog.models()]
    pool = named + [(f"enum#{i}", s) for i, s in enumerate(enumerate_structures(max_worlds))]
    table = classify(pool, [catalog.principle(k) for k in keys])
    reach = _reachable(FIG1_EDGES)
    out = []
    for a in keys:
        for b in keys:
            if a == b:
                continue
            col_a, col_b = table.column(a), table.column(b)
            witnesses = [pool[i] for i in range(len(pool)) if col_a[i] and not col_b[i]]
            if b in reach[a]:
                path = _path(a, b, FIG1_EDGES)
                missing = [f"{u}⊢{v}" for u, v in path if not (results.get(f"{u}⊢{v}") and results[f"{u}⊢{v}"].ok)]
                route = " → ".join([a] + [v for _, v in path])
                if missing:
                    out.append(AuditPair(a, b, "gap", f"arrow(s) not derived: {', '.join(missing)}"))
                elif witnesses:
                    out.append(AuditPair(a, b, "violation", f"{route} proved but {witnesses[0][0]} separates"))
                else:
                    out.append(AuditPair(a, b, "proved", route))
            elif witnesses:
                name, s = witnesses[0]
                out.append(AuditPair(a, b, "separated", name if not name.startswith("enum#") else repr(s)))
            else:
                out.append(AuditPair(a, b, "gap", f"no proof path and no separating structure ≤{max_worlds} worlds"))
    return out


# ---------------------------------------------------------------------------
# experiments and characterization


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _vector(key: str, models) -> tuple[bool, ...]:
    schema = catalog.principle(key).schema
    return tuple(schema_valid_full(m.structure, schema) for m in models)


def _fmt(models, vec) -> str:
    return " ".join(f"{m.key}:{'1' if v else '0'}" for m, v in zip(models, vec))


def run_experiments() -> list[Check]:
    """Semantic claims about P7imp, KP, Scott and SmL over the catalog models."""
    ms = catalog.models()
    dgpi = _vector("DGPimp", ms)
    out = []
    for key in ("P7imp", "KP"):
        v = _vector(key, ms)
        out.append(Check(f"{key} verdicts equal DGPimp's on all catalog models", v == dgpi, _fmt(ms, v)))
    scott = _vector("Scott", ms)
    out.append(Check("Scott valid on all catalog models", all(scott), _fmt(ms, scott)))

    def valid(k, m):
        return schema_valid_full(catalog.model(m).structure, catalog.principle(k).schema)

    out.append(Check("SmL valid on W2", valid("SmL", "W2")))
    out.append(Check("SmL fails on W3'", not valid("SmL", "W3'")))
    out.append(Check("DGP valid on W5", valid("DGP", "W5")))
    out.append(Check("EFQ valid on W5", valid("EFQ", "W5")))
    out.append(Check("SmL fails on W5", not valid("SmL", "W5")))
    return out


@dataclass
class CharacterizationReport:
    max_worlds: int
    structures: int = 0
    mismatches: list[str] = field(default_factory=list)
    wlem_converse_failures: list[Structure] = field(default_factory=list)
    w4_pattern_found: bool = False

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.w4_pattern_found

    def lines(self) -> list[str]:
        out = [
            f"structures checked: {self.structures} (≤{self.max_worlds} worlds)",
            f"structural mismatches: {len(self.mismatches)}",
        ]
        out += [f"  {m}" for m in self.mismatches]
        out.append(
            f"WLEM holds without v-free normal part: {len(self.wlem_converse_failures)} structures"
            f" (W4 pattern among them: {'yes' if self.w4_pattern_found else 'no'})"
        )
        return out


def characterize(max_worlds: int = 4) -> CharacterizationReport:
    """Compare semantic verdicts with the structural characterizations."""
    p = {k: catalog.principle(k).schema for k in ("EFQ", "DGP", "PP", "LEM", "DNE", "WLEM")}
    w4 = canonical_code(catalog.model("W4").structure)
    rep = CharacterizationReport(max_worlds)
    for s in enumerate_structures(max_worlds):
        rep.structures += 1
        v = {k: schema_valid_full(s, sch) for k, sch in p.items()}
        normal = normal_restriction(s)
        predicted = {
            "EFQ": not s.abnormal,
            "DGP": is_v_free(s),
            "PP": is_antichain(s),
            "LEM": is_antichain(normal),
            "DNE": is_antichain(s) and not s.abnormal,
        }
        for k, want in predicted.items():
            if v[k] != want:
                rep.mismatches.append(f"{k}: semantic {v[k]} vs structural {want} on {s!r}")
        if is_v_free(normal) and not v["WLEM"]:
            rep.mismatches.append(f"WLEM: v-free normal part but WLEM fails on {s!r}")
        if v["WLEM"] and not is_v_free(normal):
            rep.wlem_converse_failures.append(s)
            if canonical_code(s) == w4:
                rep.w4_pattern_found = True
    return rep
