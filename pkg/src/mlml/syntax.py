"""Formula syntax: abstract trees, an ASCII grammar, and a bounded generator.

Concrete grammar (precedence from loosest to tightest):

    formula ::= iff
    iff     ::= imp ('<->' iff)?                    right-associative
    imp     ::= disj ('->' imp)?                    right-associative
    disj    ::= xor ('|' xor)*                      left-associative
    xor     ::= conj ('^' conj)*                    left-associative
    conj    ::= unary ('&' unary)*                  left-associative
    unary   ::= ('~' | '@' | '[]' | '<>' | '[=]' | '[-]') unary | primary
    primary ::= 'T' | 'F' | ident | '(' formula ')'
    ident   ::= /[a-z][a-zA-Z0-9_]*/

The unary operators are negation (~), ball (@), box ([]), diamond (<>),
box restricted to same-lattice successors ([=]) and box restricted to
different-lattice successors ([-]).  'T' and 'F' are the constant top and
bottom formulas.

Implication, biconditional and exclusive disjunction are sugar and normalize
away at construction time: f -> g is stored as ~f | g, f <-> g as the
conjunction of the two implications, and f ^ g as (f & ~g) | (~f & g).
Printed output therefore never contains '->', '<->' or '^', and
parse(format_formula(f)) returns a tree structurally equal to f.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Ball:
    sub: "Formula"


@dataclass(frozen=True)
class Box:
    sub: "Formula"


@dataclass(frozen=True)
class Diamond:
    sub: "Formula"


@dataclass(frozen=True)
class BoxSame:
    sub: "Formula"


@dataclass(frozen=True)
class BoxDiff:
    sub: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


Formula = Union[Var, Not, And, Or, Ball, Box, Diamond, BoxSame, BoxDiff, Top, Bot]

_UNARY_TYPES = (Not, Ball, Box, Diamond, BoxSame, BoxDiff)
_MODAL_TYPES = (Box, Diamond, BoxSame, BoxDiff)


def Imp(left: Formula, right: Formula) -> Formula:
    """Material implication, stored as ~left | right."""
    return Or(Not(left), right)


def Iff(left: Formula, right: Formula) -> Formula:
    """Biconditional, stored as the conjunction of both implications."""
    return And(Imp(left, right), Imp(right, left))


def Xor(left: Formula, right: Formula) -> Formula:
    """Exclusive disjunction, stored as (l & ~r) | (~l & r)."""
    return Or(And(left, Not(right)), And(Not(left), right))


def variables(f: Formula) -> tuple[str, ...]:
    """Sorted tuple of variable names occurring in the formula."""
    seen: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            seen.add(g.name)
        elif isinstance(g, _UNARY_TYPES):
            stack.append(g.sub)
        elif isinstance(g, (And, Or)):
            stack.append(g.left)
            stack.append(g.right)
    return tuple(sorted(seen))


def connective_count(f: Formula) -> int:
    """Number of operator nodes (variables and constants count zero)."""
    if isinstance(f, (Var, Top, Bot)):
        return 0
    if isinstance(f, _UNARY_TYPES):
        return 1 + connective_count(f.sub)
    return 1 + connective_count(f.left) + connective_count(f.right)


def is_modal_free(f: Formula) -> bool:
    if isinstance(f, _MODAL_TYPES):
        return False
    if isinstance(f, _UNARY_TYPES):
        return is_modal_free(f.sub)
    if isinstance(f, (And, Or)):
        return is_modal_free(f.left) and is_modal_free(f.right)
    return True


def ball_substitution(f: Formula) -> Formula:
    """Replace every variable leaf p by @p, leaving the rest of the tree alone."""
    if isinstance(f, Var):
        return Ball(f)
    if isinstance(f, _UNARY_TYPES):
        return type(f)(ball_substitution(f.sub))
    if isinstance(f, (And, Or)):
        return type(f)(ball_substitution(f.left), ball_substitution(f.right))
    return f


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_UNARY_ASCII = {Not: "~", Ball: "@", Box: "[]", Diamond: "<>", BoxSame: "[=]", BoxDiff: "[-]"}
_UNARY_PRETTY = {Not: "¬", Ball: "∘", Box: "□", Diamond: "◇",
                 BoxSame: "■", BoxDiff: "⊟"}

# Precedence used by the printer: atoms bind tightest, then the unary
# operators, then & over |.  Normalized trees contain no other binaries.
_PREC_ATOM = 5
_PREC_UNARY = 4
_PREC_AND = 3
_PREC_OR = 2


def format_formula(f: Formula, pretty: bool = False) -> str:
    """Render with minimal parentheses; the ASCII form re-parses to f."""
    unary_ops = _UNARY_PRETTY if pretty else _UNARY_ASCII
    and_op = " ∧ " if pretty else " & "
    or_op = " ∨ " if pretty else " | "
    top = "⊤" if pretty else "T"
    bot = "⊥" if pretty else "F"

    def render(g: Formula, context: int) -> str:
        if isinstance(g, Var):
            return g.name
        if isinstance(g, Top):
            return top
        if isinstance(g, Bot):
            return bot
        if isinstance(g, _UNARY_TYPES):
            text = unary_ops[type(g)] + render(g.sub, _PREC_UNARY)
            prec = _PREC_UNARY
        elif isinstance(g, And):
            text = render(g.left, _PREC_AND) + and_op + render(g.right, _PREC_AND + 1)
            prec = _PREC_AND
        else:
            text = render(g.left, _PREC_OR) + or_op + render(g.right, _PREC_OR + 1)
            prec = _PREC_OR
        return "(" + text + ")" if prec < context else text

    return render(f, 0)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class ParseError(ValueError):
    """Syntax error carrying the byte offset and the expected token set."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f"{message} at offset {position}"
        if expected:
            detail += " (expected " + ", ".join(expected) + ")"
        super().__init__(detail)


_SIMPLE_TOKENS = ("&", "|", "^", "(", ")")
_FORMULA_START = ("identifier", "T", "F", "(", "~", "@", "[]", "<>", "[=]", "[-]")


def _tokenize(text: str) -> list[tuple[str, int]]:
    """Produce (kind, offset) pairs; identifiers carry their text as kind 'ident:<name>'."""
    tokens: list[tuple[str, int]] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c in _SIMPLE_TOKENS:
            tokens.append((c, i))
            i += 1
        elif c == "~" or c == "@":
            tokens.append((c, i))
            i += 1
        elif text.startswith("<->", i):
            tokens.append(("<->", i))
            i += 3
        elif text.startswith("<>", i):
            tokens.append(("<>", i))
            i += 2
        elif text.startswith("->", i):
            tokens.append(("->", i))
            i += 2
        elif text.startswith("[]", i):
            tokens.append(("[]", i))
            i += 2
        elif text.startswith("[=]", i):
            tokens.append(("[=]", i))
            i += 3
        elif text.startswith("[-]", i):
            tokens.append(("[-]", i))
            i += 3
        elif c == "T" or c == "F":
            tokens.append((c, i))
            i += 1
        elif c.islower() and c.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident:" + text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i, _FORMULA_START)
    tokens.append(("end", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> None:
        tok, offset = self.peek()
        if tok != kind:
            raise ParseError(f"unexpected token {tok!r}", offset, (kind,))
        self.advance()

    def parse_formula(self) -> Formula:
        return self.parse_iff()

    def parse_iff(self) -> Formula:
        left = self.parse_imp()
        if self.peek()[0] == "<->":
            self.advance()
            return Iff(left, self.parse_iff())
        return left

    def parse_imp(self) -> Formula:
        left = self.parse_disj()
        if self.peek()[0] == "->":
            self.advance()
            return Imp(left, self.parse_imp())
        return left

    def parse_disj(self) -> Formula:
        f = self.parse_xor()
        while self.peek()[0] == "|":
            self.advance()
            f = Or(f, self.parse_xor())
        return f

    def parse_xor(self) -> Formula:
        f = self.parse_conj()
        while self.peek()[0] == "^":
            self.advance()
            f = Xor(f, self.parse_conj())
        return f

    def parse_conj(self) -> Formula:
        f = self.parse_unary()
        while self.peek()[0] == "&":
            self.advance()
            f = And(f, self.parse_unary())
        return f

    def parse_unary(self) -> Formula:
        tok, offset = self.peek()
        unary = {"~": Not, "@": Ball, "[]": Box, "<>": Diamond, "[=]": BoxSame, "[-]": BoxDiff}
        if tok in unary:
            self.advance()
            return unary[tok](self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        tok, offset = self.peek()
        if tok == "T":
            self.advance()
            return Top()
        if tok == "F":
            self.advance()
            return Bot()
        if tok.startswith("ident:"):
            self.advance()
            return Var(tok[6:])
        if tok == "(":
            self.advance()
            f = self.parse_formula()
            self.expect(")")
            return f
        raise ParseError(f"unexpected token {tok!r}", offset, _FORMULA_START)


def parse(text: str) -> Formula:
    """Parse the ASCII grammar; raises ParseError with offset on bad input."""
    parser = _Parser(text)
    f = parser.parse_formula()
    tok, offset = parser.peek()
    if tok != "end":
        raise ParseError(f"trailing input {tok!r}", offset, ("end of input",))
    return f


# ---------------------------------------------------------------------------
# Bounded formula generation
# ---------------------------------------------------------------------------


def generate_corpus(var_names: Sequence[str], max_connectives: int) -> list[Formula]:
    """Every formula over the given variables built from ~, &, @ and []
    with at most the given number of connective nodes.

    The result is duplicate-free and totally ordered by (connective count,
    lexicographic ASCII rendering).  Disjunction and diamond are definable
    from this fragment and are omitted to keep the enumeration small.
    """
    if max_connectives < 0:
        raise ValueError("max_connectives must be >= 0")
    by_size: list[list[Formula]] = [[Var(name) for name in var_names]]
    for size in range(1, max_connectives + 1):
        batch: list[Formula] = []
        for g in by_size[size - 1]:
            batch.append(Not(g))
            batch.append(Ball(g))
            batch.append(Box(g))
        for left_size in range(size):
            for lf in by_size[left_size]:
                for rf in by_size[size - 1 - left_size]:
                    batch.append(And(lf, rf))
        batch.sort(key=format_formula)
        by_size.append(batch)
    corpus: list[Formula] = []
    first = sorted(by_size[0], key=format_formula)
    corpus.extend(first)
    for batch in by_size[1:]:
        corpus.extend(batch)
    return corpus


def corpus_size(var_count: int, max_connectives: int) -> int:
    """Closed-form count of generate_corpus output via the grammar recurrence.

    c(0) = v and c(s) = 3*c(s-1) + sum of c(i)*c(s-1-i); used as an
    independent check on the enumerator.
    """
    counts = [var_count]
    for size in range(1, max_connectives + 1):
        total = 3 * counts[size - 1]
        for left_size in range(size):
            total += counts[left_size] * counts[size - 1 - left_size]
        counts.append(total)
    return sum(counts)


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformulas, the formula itself included, children first."""
    if isinstance(f, _UNARY_TYPES):
        yield from subformulas(f.sub)
    elif isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    yield f
