"""Valuation-parallel evaluation over a fixed frame.

Checking frame validity means evaluating a formula under every valuation of
the frame, and the correspondence harness does that for tens of thousands of
frames.  Rather than recurse once per valuation, this module packs the whole
valuation space into big integers: valuation i's value at a world occupies
bits [3*i, 3*i+3) of one Python int per world.  Meet, join and complement are
then single bitwise operations on those integers, and the ball and
down-interpretation operators reduce to a handful of shifts and masks.

Valuations are indexed in lexicographic order over slots (world, variable),
worlds in frame order and variables as supplied, with slot 0 most
significant; each slot's digit indexes the world's carrier in ascending
element order.  Index 0 is therefore the all-zero valuation, and the lowest
failing bit of a validity mask identifies the canonically first countermodel.

The definitional single-model evaluator lives in kripke.py; the test suite
checks the two agree exhaustively on small frames.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable, Sequence

from .algebra import BOT, E1, E2, E3, TOP, Ultrafilter, carrier
from . import syntax
from .syntax import Formula

if TYPE_CHECKING:  # pragma: no cover
    from .kripke import Frame


class ResourceBudgetExceeded(RuntimeError):
    """Raised when a sweep or search would exceed its configured budget."""


DEFAULT_MAX_VALUATIONS = 4 ** 10

# Per lattice label: the bit carrying its single-atom middle element and the
# two bits of its coatom middle element.
_DOWN_SHAPE = {
    "A": (0, 1, 2),
    "B": (1, 0, 2),
    "C": (2, 0, 1),
}

_GENERATOR_BIT = {E1: 0, E2: 1, E3: 2}


def _replicate(block: int, block_groups: int, copies: int) -> int:
    """Concatenate `copies` copies of a block of 3-bit groups (copies is a power of two)."""
    value = block
    span = block_groups
    total = block_groups * copies
    while span < total:
        value |= value << (3 * span)
        span *= 2
    return value


class FrameSweep:
    """All valuations of one frame, evaluated in parallel.

    With binary=True each slot ranges over {0, 1} instead of the world's full
    carrier, which is the classical-fragment comparison mode.
    """

    def __init__(
        self,
        frame: "Frame",
        var_names: Sequence[str],
        binary: bool = False,
        max_valuations: int | None = DEFAULT_MAX_VALUATIONS,
    ):
        self.frame = frame
        self.var_names = tuple(var_names)
        self.worlds = frame.worlds
        self._labels = [frame.lattice_of[w] for w in frame.worlds]
        index = {w: i for i, w in enumerate(frame.worlds)}
        self._succ = [
            [index[v] for v in frame.worlds if (w, v) in frame.relation]
            for w in frame.worlds
        ]
        if binary:
            self._domains = [(BOT, TOP)] * len(frame.worlds)
        else:
            self._domains = [carrier(label) for label in self._labels]
        base = 2 if binary else 4
        self._base = base
        slot_count = len(frame.worlds) * len(self.var_names)
        self.valuation_count = base ** slot_count
        if max_valuations is not None and self.valuation_count > max_valuations:
            raise ResourceBudgetExceeded(
                f"{self.valuation_count} valuations exceed the cap of {max_valuations}"
            )
        self._full = (1 << (3 * self.valuation_count)) - 1
        self._ones = self._full // 7
        self._var_vectors = self._build_var_vectors()
        self._memo: dict[Formula, list[int]] = {}

    # -- construction -----------------------------------------------------

    def _build_var_vectors(self) -> dict[tuple[int, str], int]:
        vectors: dict[tuple[int, str], int] = {}
        slot = 0
        slot_count = len(self.worlds) * len(self.var_names)
        for wi in range(len(self.worlds)):
            for name in self.var_names:
                run = self._base ** (slot_count - 1 - slot)
                run_ones = ((1 << (3 * run)) - 1) // 7
                block = 0
                for digit, value in enumerate(self._domains[wi]):
                    block |= (value * run_ones) << (3 * run * digit)
                copies = self.valuation_count // (run * self._base)
                vectors[(wi, name)] = _replicate(block, run * self._base, copies)
                slot += 1
        return vectors

    # -- packed operators ---------------------------------------------------

    def _ball(self, v: int) -> int:
        ones = self._ones
        w = v ^ self._full
        crisp = (v & (v >> 1) & (v >> 2) & ones) | (w & (w >> 1) & (w >> 2) & ones)
        return crisp * 7

    def _down(self, label: str, v: int) -> int:
        atom_bit, co_lo, co_hi = _DOWN_SHAPE[label]
        ones = self._ones
        kept_atom = v & (ones << atom_bit)
        pair = (v >> co_lo) & (v >> co_hi) & ones
        return kept_atom | (pair << co_lo) | (pair << co_hi)

    # -- evaluation ---------------------------------------------------------

    def values(self, f: Formula) -> list[int]:
        """Packed value of f at each world, over every valuation at once."""
        cached = self._memo.get(f)
        if cached is not None:
            return cached
        full = self._full
        if isinstance(f, syntax.Var):
            if f.name not in self.var_names:
                raise KeyError(f"variable {f.name!r} not covered by this sweep")
            out = [self._var_vectors[(wi, f.name)] for wi in range(len(self.worlds))]
        elif isinstance(f, syntax.Top):
            out = [full] * len(self.worlds)
        elif isinstance(f, syntax.Bot):
            out = [0] * len(self.worlds)
        elif isinstance(f, syntax.Not):
            out = [v ^ full for v in self.values(f.sub)]
        elif isinstance(f, syntax.And):
            out = [a & b for a, b in zip(self.values(f.left), self.values(f.right))]
        elif isinstance(f, syntax.Or):
            out = [a | b for a, b in zip(self.values(f.left), self.values(f.right))]
        elif isinstance(f, syntax.Ball):
            out = [self._ball(v) for v in self.values(f.sub)]
        elif isinstance(f, syntax.Box):
            out = self._box(self.values(f.sub))
        elif isinstance(f, syntax.Diamond):
            boxed = self._box(self.values(syntax.Not(f.sub)))
            out = [v ^ full for v in boxed]
        elif isinstance(f, syntax.BoxSame):
            sub = self.values(f.sub)
            out = []
            for wi, label in enumerate(self._labels):
                acc = full
                for ui in self._succ[wi]:
                    if self._labels[ui] == label:
                        acc &= sub[ui]
                out.append(acc)
        elif isinstance(f, syntax.BoxDiff):
            sub = self.values(f.sub)
            out = []
            for wi, label in enumerate(self._labels):
                acc = full
                for ui in self._succ[wi]:
                    if self._labels[ui] != label:
                        acc &= self._down(label, sub[ui])
                out.append(acc)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[f] = out
        return out

    def _box(self, sub: list[int]) -> list[int]:
        out = []
        for wi, label in enumerate(self._labels):
            acc = self._full
            for ui in self._succ[wi]:
                acc &= self._down(label, sub[ui])
            out.append(acc)
        return out

    # -- satisfaction masks ---------------------------------------------------

    @property
    def ones_mask(self) -> int:
        """Group-aligned all-valuations mask (bit 3*i set for valuation i)."""
        return self._ones

    def designated_mask(self, f: Formula, u: Ultrafilter) -> list[int]:
        """Per world: mask whose bit 3*i is set iff valuation i makes f hold
        at that world."""
        bit = _GENERATOR_BIT[u.generator]
        return [(v >> bit) & self._ones for v in self.values(f)]

    def valid_mask(self, f: Formula, u: Ultrafilter) -> int:
        """Group-aligned mask whose bit 3*i is set iff valuation i makes f
        hold at every world."""
        mask = self._ones
        for world_mask in self.designated_mask(f, u):
            mask &= world_mask
        return mask

    def is_frame_valid(self, f: Formula, u: Ultrafilter) -> bool:
        return self.valid_mask(f, u) == self._ones

    def countermodel_index(
        self, premises: Iterable[Formula], goal: Formula, u: Ultrafilter
    ) -> int | None:
        """Lowest valuation index globally satisfying every premise but not
        the goal, or None."""
        mask = self._ones
        for premise in premises:
            mask &= self.valid_mask(premise, u)
            if mask == 0:
                return None
        bad = mask & (self.valid_mask(goal, u) ^ self._ones)
        if bad == 0:
            return None
        return ((bad & -bad).bit_length() - 1) // 3

    def first_invalid_index(self, f: Formula, u: Ultrafilter) -> int | None:
        return self.countermodel_index((), f, u)

    def decode_valuation(self, index: int) -> dict[tuple[str, str], int]:
        """The valuation at the given index, as a (world, variable) map."""
        if not 0 <= index < self.valuation_count:
            raise IndexError(index)
        assignment: dict[tuple[str, str], int] = {}
        slot_count = len(self.worlds) * len(self.var_names)
        slot = 0
        for wi, world in enumerate(self.worlds):
            for name in self.var_names:
                run = self._base ** (slot_count - 1 - slot)
                digit = (index // run) % self._base
                assignment[(world, name)] = self._domains[wi][digit]
                slot += 1
        return assignment
