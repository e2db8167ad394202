"""Decision procedure for minimal (and intuitionistic) propositional derivability.

Minimal logic is intuitionistic logic in which ``bot`` is an ordinary atom
without an elimination rule.  Both modes run the same terminating
contraction-free sequent search (Dyckhoff's G4ip); in minimal mode ``bot``
is simply never treated as explosive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import Atom, Bottom, Conj, Disj, Formula, Impl, desugar

__all__ = ["BudgetExceeded", "Sequent", "Prover", "derives_minimal", "derives"]

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """The search used more rule applications than allowed."""


@dataclass(frozen=True)
class Sequent:
    assumptions: tuple[Formula, ...]
    goal: Formula

    def __post_init__(self):
        object.__setattr__(self, "assumptions", tuple(desugar(a) for a in self.assumptions))
        object.__setattr__(self, "goal", desugar(self.goal))


def _is_atomic(f: Formula) -> bool:
    return isinstance(f, (Atom, Bottom))


class Prover:
    """One search engine; ``mode`` is ``"minimal"`` or ``"intuitionistic"``.

    Memoizes sequents across calls, so reuse an instance for related queries.
    """

    def __init__(self, mode: str = "minimal", budget: int = DEFAULT_BUDGET):
        if mode not in ("minimal", "intuitionistic"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.budget = budget
        self.steps = 0
        self._memo: dict[tuple[frozenset, Formula], bool] = {}

    def derives(self, assumptions: Iterable[Formula], goal: Formula) -> bool:
        seq = Sequent(tuple(assumptions), goal)
        self.steps = 0
        return self._prove(frozenset(seq.assumptions), seq.goal)

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"more than {self.budget} rule applications")

    def _prove(self, ctx: frozenset, goal: Formula) -> bool:
        key = (ctx, goal)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._tick()
        result = self._search(ctx, goal)
        self._memo[key] = result
        return result

    def _explosive(self, f: Formula) -> bool:
        return self.mode == "intuitionistic" and isinstance(f, Bottom)

    def _search(self, ctx: frozenset, goal: Formula) -> bool:
        if goal in ctx:
            return True
        if any(self._explosive(f) for f in ctx):
            return True

        ordered = sorted(ctx, key=repr)
        # invertible left rules
        for f in ordered:
            rest = ctx - {f}
            if isinstance(f, Conj):
                return self._prove(rest | {f.left, f.right}, goal)
            if isinstance(f, Disj):
                return self._prove(rest | {f.left}, goal) and self._prove(rest | {f.right}, goal)
            if isinstance(f, Impl):
                a = f.left
                if _is_atomic(a) and a in ctx:
                    return self._prove(rest | {f.right}, goal)
                if self._explosive(a):
                    return self._prove(rest, goal)
                if isinstance(a, Conj):
                    return self._prove(rest | {Impl(a.left, Impl(a.right, f.right))}, goal)
                if isinstance(a, Disj):
                    return self._prove(rest | {Impl(a.left, f.right), Impl(a.right, f.right)}, goal)

        # invertible right rules
        if isinstance(goal, Conj):
            return self._prove(ctx, goal.left) and self._prove(ctx, goal.right)
        if isinstance(goal, Impl):
            return self._prove(ctx | {goal.left}, goal.right)

        # choice points, in fixed order: disjunction right, then (C -> D) -> B left
        if isinstance(goal, Disj):
            if self._prove(ctx, goal.left) or self._prove(ctx, goal.right):
                return True
        for f in ordered:
            if not (isinstance(f, Impl) and isinstance(f.left, Impl)):
                continue
            rest = ctx - {f}
            c, d, b = f.left.left, f.left.right, f.right
            if self._prove(rest | {Impl(d, b)}, Impl(c, d)) and self._prove(rest | {b}, goal):
                return True
        return False


def derives(
    assumptions: Iterable[Formula],
    goal: Formula,
    *,
    mode: str = "minimal",
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Whether ``assumptions |- goal``; raises :class:`BudgetExceeded` past ``budget``."""
    return Prover(mode, budget).derives(assumptions, goal)


def derives_minimal(assumptions: Iterable[Formula], goal: Formula, *, budget: int = DEFAULT_BUDGET) -> bool:
    return derives(assumptions, goal, mode="minimal", budget=budget)
