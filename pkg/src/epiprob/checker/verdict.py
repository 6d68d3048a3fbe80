"""Checker outcomes.  Bounded searches never report Fails for "nothing found"."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Holds:
    pass


@dataclass(frozen=True)
class Fails:
    """Refuted; `assignment` names the counterexample when there is one."""
    assignment: dict | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Witness:
    assignment: dict = field(compare=False)

    def _items(self):
        return tuple(self.assignment.items())

    def __eq__(self, other):
        return isinstance(other, Witness) and self._items() == other._items()

    def __hash__(self):
        return hash(self._items())


@dataclass(frozen=True)
class NoWitnessUpTo:
    """The search up to `bound` found nothing; says nothing about larger values.

    `last_negative` is used by the ultimate-positivity scan: the largest
    index below the bound holding a negative term, if any.
    """
    bound: int
    last_negative: int | None = None


def format_assignment(assignment: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in assignment.items())


def exit_code(verdict) -> int:
    if isinstance(verdict, (Holds, Witness)):
        return 0
    if isinstance(verdict, Fails):
        return 1
    return 2


def describe(verdict) -> str:
    if isinstance(verdict, Holds):
        return "holds"
    if isinstance(verdict, Fails):
        return "fails" + (f" {format_assignment(verdict.assignment)}" if verdict.assignment else "")
    if isinstance(verdict, Witness):
        return "witness " + format_assignment(verdict.assignment)
    return f"no-witness-up-to {verdict.bound}"
