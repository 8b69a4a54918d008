"""Standalone four-valued propositional semantics and its rule battery.

The four-valued algebra {1, 0, a, -a} with the ball operator is realized as
the carrier A of B8 under the e1-generated ultrafilter, so a = e1 and the
designated values are {1, a}.  This reuses the one algebra implementation
instead of duplicating truth tables.

Consequence is decided by brute force: every connective here is
value-functional, so enumerating all assignments of the four values to the
occurring variables is exact.  For the same reason the schematic inference
rules of the propositional calculus can be checked on single-variable
instantiations; `rule_soundness_report` does exactly that for the eleven
value-functional schemes and handles ball introduction (a rule about
theoremhood, not values) by checking that every formula in the bundled
theorem list evaluates to exactly 1 under every assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from itertools import product

from . import algebra, syntax
from .algebra import BOT, E1, E23, TOP
from .syntax import Formula

__all__ = [
    "FOUR_VALUES",
    "DESIGNATED4",
    "ModalOperatorError",
    "value4_name",
    "eval4",
    "all_valuations4",
    "Consequence4Result",
    "consequence4",
    "tautology4",
    "RuleCheck",
    "rule_soundness_report",
    "THEOREM_BUNDLE",
]

FOUR_VALUES = algebra.carrier("A")  # (0, a, -a, 1) by encoding
DESIGNATED4 = (E1, TOP)

_VALUE_NAMES = {TOP: "1", BOT: "0", E1: "a", E23: "-a"}


def value4_name(x: int) -> str:
    return _VALUE_NAMES[x]


class ModalOperatorError(ValueError):
    """A modal operator appeared where only the propositional fragment is allowed."""

    def __init__(self, offending: Formula):
        self.offending = offending
        super().__init__(
            f"modal operator in propositional evaluation: {syntax.format_formula(offending)}"
        )


def eval4(f: Formula, assignment: Mapping[str, int]) -> int:
    """Value of a modal-free formula under an assignment into {1, 0, a, -a}."""
    if isinstance(f, syntax.Var):
        try:
            return assignment[f.name]
        except KeyError:
            raise ValueError(f"assignment misses variable {f.name!r}") from None
    if isinstance(f, syntax.Top):
        return TOP
    if isinstance(f, syntax.Bot):
        return BOT
    if isinstance(f, syntax.Not):
        return algebra.complement(eval4(f.sub, assignment))
    if isinstance(f, syntax.And):
        return algebra.meet(eval4(f.left, assignment), eval4(f.right, assignment))
    if isinstance(f, syntax.Or):
        return algebra.join(eval4(f.left, assignment), eval4(f.right, assignment))
    if isinstance(f, syntax.Ball):
        return algebra.ball(eval4(f.sub, assignment))
    if isinstance(f, (syntax.Box, syntax.Diamond, syntax.BoxSame, syntax.BoxDiff)):
        raise ModalOperatorError(f)
    raise TypeError(f"not a formula: {f!r}")


def is_designated4(x: int) -> bool:
    return x in DESIGNATED4


def all_valuations4(var_names: Iterable[str]) -> Iterable[dict[str, int]]:
    """Every assignment of the four values to the given variables, in
    lexicographic order over (sorted variables, ascending value encoding)."""
    names = sorted(set(var_names))
    for values in product(FOUR_VALUES, repeat=len(names)):
        yield dict(zip(names, values))


@dataclass(frozen=True)
class Consequence4Result:
    holds: bool
    witness: dict[str, int] | None = None

    def __bool__(self) -> bool:
        return self.holds

    def witness_text(self) -> str:
        if self.witness is None:
            return ""
        return ", ".join(f"{name}={value4_name(v)}" for name, v in sorted(self.witness.items()))


def consequence4(premises: Iterable[Formula], goal: Formula) -> Consequence4Result:
    """Whether every assignment designating all premises designates the goal.

    On failure the first refuting assignment (in enumeration order) comes
    back as the witness.
    """
    premises = tuple(premises)
    names: set[str] = set()
    for f in premises + (goal,):
        names.update(syntax.variables(f))
    for assignment in all_valuations4(names):
        if all(is_designated4(eval4(p, assignment)) for p in premises):
            if not is_designated4(eval4(goal, assignment)):
                return Consequence4Result(False, assignment)
    return Consequence4Result(True)


def tautology4(f: Formula) -> Consequence4Result:
    return consequence4((), f)


# ---------------------------------------------------------------------------
# The rule battery
# ---------------------------------------------------------------------------

# Formulas provable in the propositional calculus; ball introduction is sound
# exactly when these take the value 1 (not merely a designated value) under
# every assignment, so the battery asserts that stronger fact.
THEOREM_BUNDLE: tuple[str, ...] = (
    "p | ~p",
    "~(p & ~p)",
    "p -> p",
    "@@p",
    "@~@p",
    "@(p | ~p)",
    "@(p & ~p)",
    "@p | ~@p",
    "(p -> q) -> (p -> q)",
    "((p -> q) & p) -> q",
    "(p & q) -> p",
    "p -> (p | q)",
    "(p <-> ~q) -> (q <-> ~p)",
    "T",
    "@T",
    "~F",
)

# Classical consequences used to spot-check the classical-logic rule on the
# extended language (the eleventh value-functional scheme of the battery).
_CLASSICAL_BATTERY: tuple[tuple[tuple[str, ...], str], ...] = (
    ((), "x | ~x"),
    ((), "(x -> y) -> (x -> y)"),
    (("x", "x -> y"), "y"),
    (("x", "y"), "x & y"),
    (("x & y",), "x"),
    (("x",), "x | y"),
    (("~~x",), "x"),
    (("x | y", "~x"), "y"),
)


@dataclass(frozen=True)
class RuleCheck:
    rule: str
    statement: str
    passed: bool
    witness: str = ""


def _scheme(rule: str, premise_texts: tuple[str, ...], goal_text: str) -> RuleCheck:
    premises = tuple(syntax.parse(t) for t in premise_texts)
    goal = syntax.parse(goal_text)
    result = consequence4(premises, goal)
    statement = ", ".join(premise_texts) + " |- " + goal_text if premise_texts else "|- " + goal_text
    return RuleCheck(rule, statement, result.holds, result.witness_text())


def rule_soundness_report() -> list[RuleCheck]:
    """Semantic check of every propositional rule scheme.

    Metavariables are instantiated with the distinct fresh variables x and y;
    value-functionality of all connectives makes this exhaustive over the
    schemes.  BR is an interderivability, so both directions must pass for
    its row.  The final row is the empirical ball-introduction check over
    THEOREM_BUNDLE.
    """
    rows: list[RuleCheck] = []
    rows.append(_scheme("DB", (), "@@x"))

    br_fwd = consequence4((syntax.parse("@x"),), syntax.parse("@~x"))
    br_bwd = consequence4((syntax.parse("@~x"),), syntax.parse("@x"))
    br_witness = br_fwd.witness_text() or br_bwd.witness_text()
    rows.append(RuleCheck("BR", "@x -||- @~x", br_fwd.holds and br_bwd.holds, br_witness))

    bf_and = consequence4((syntax.parse("@x"), syntax.parse("@y")), syntax.parse("@(x & y)"))
    bf_or = consequence4((syntax.parse("@x"), syntax.parse("@y")), syntax.parse("@(x | y)"))
    rows.append(
        RuleCheck(
            "BF",
            "@x, @y |- @(x & y) and @(x | y)",
            bf_and.holds and bf_or.holds,
            bf_and.witness_text() or bf_or.witness_text(),
        )
    )

    rows.append(_scheme("AwB", ("x", "@x"), "@(x | y)"))
    rows.append(_scheme("NwB", ("~x", "@x"), "@(x & y)"))
    rows.append(_scheme("NB", ("~@x", "@y"), "~@(x & y) | ~@(x | y)"))
    rows.append(_scheme("TNB1", ("~@x", "~@y", "x & y"), "~@(x & y)"))
    rows.append(_scheme("TNB2", ("~@x", "~@y", "~(x | y)"), "~@(x & y)"))
    rows.append(_scheme("BC", ("@(x & y)", "x & y"), "@x & @y"))
    rows.append(_scheme("OV", ("@x <-> @y", "x <-> ~y"), "@(x & y)"))

    cl_passed = True
    cl_witness = ""
    for premise_texts, goal_text in _CLASSICAL_BATTERY:
        result = consequence4(tuple(syntax.parse(t) for t in premise_texts), syntax.parse(goal_text))
        if not result.holds:
            cl_passed = False
            cl_witness = f"{goal_text}: {result.witness_text()}"
            break
    rows.append(RuleCheck("CL", "classical battery on the extended language", cl_passed, cl_witness))

    ib_passed = True
    ib_witness = ""
    for text in THEOREM_BUNDLE:
        f = syntax.parse(text)
        for assignment in all_valuations4(syntax.variables(f)):
            if eval4(f, assignment) != TOP:
                ib_passed = False
                values = ", ".join(
                    f"{k}={value4_name(v)}" for k, v in sorted(assignment.items())
                )
                ib_witness = f"{text} is not exactly 1 at {values}"
                break
        if not ib_passed:
            break
    rows.append(
        RuleCheck("IB", "every bundled theorem evaluates to exactly 1", ib_passed, ib_witness)
    )
    return rows
