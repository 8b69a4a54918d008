"""Single-edit corruptions of bundled derivations, shared by the proof tests
and the acceptance battery.  Each entry is (corpus name, transformer,
expected failing step index)."""

import dataclasses

from mlml.proofs import Derivation, DerivationStep, Judgment, judgment
from mlml.syntax import parse


def replace_step(derivation, index, **changes):
    steps = list(derivation.steps)
    steps[index] = dataclasses.replace(steps[index], **changes)
    return Derivation(steps)


def set_conclusion(derivation, index, text):
    steps = list(derivation.steps)
    old = steps[index]
    steps[index] = dataclasses.replace(
        old, judgment=Judgment(old.judgment.premises, parse(text))
    )
    return Derivation(steps)


def corruption_battery():
    return [
        # axiom shape broken
        ("double_ball", lambda d: set_conclusion(d, 0, "@p"), 0),
        # BR conclusion renames the variable
        ("ball_negation", lambda d: set_conclusion(d, 1, "@~q"), 1),
        # BF citing the same input twice cannot produce @(p & q)
        ("ball_factorization_and", lambda d: replace_step(d, 2, cites=(0, 0)), 2),
        # AwB with a dropped citation
        ("affirming_with_ball", lambda d: replace_step(d, 2, cites=(0,)), 2),
        # TNB1 concluding about the wrong connective
        ("two_not_ball_1", lambda d: set_conclusion(d, 3, "~@(p | q)"), 3),
        # cited step's premises stop being a subset of the step's
        ("ball_conjunction",
         lambda d: Derivation([
             d.steps[0], d.steps[1],
             DerivationStep(judgment(frozenset({parse("@(p & q)")}), parse("@p & @q")),
                            "BC", (0, 1)),
         ]), 2),
        # IN citing the plain-phi step where the phi-and-ball step is required
        ("necessitation", lambda d: replace_step(d, 3, cites=(0, 0)), 3),
        # K axiom with the consequent swapped
        ("k_axiom", lambda d: set_conclusion(d, 0, "[](p -> q) -> ([]q -> []p)"), 0),
        # Weaken must keep the conclusion
        ("weakening", lambda d: set_conclusion(d, 1, "@@q"), 1),
        # TautCons to a non-consequence
        ("modus_ponens", lambda d: set_conclusion(d, 2, "~q"), 2),
        # FC conclusion missing the inner ball
        ("false_necessity_certainty", lambda d: set_conclusion(d, 2, "@[]p"), 2),
        # EA conclusion with an inclusive disjunction
        ("existence_axiom",
         lambda d: set_conclusion(d, 1, "<>(@p & ~@@p) | <>(~@p & ~@@p)"), 1),
        # forward citation
        ("ball_negation", lambda d: replace_step(d, 1, cites=(1,)), 1),
        # premise rule with a conclusion not among the premises
        ("ball_negation", lambda d: set_conclusion(d, 0, "@q"), 0),
    ]
