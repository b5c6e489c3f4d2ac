"""Unseen and type-confusable mention subsets.

A test mention is *Seen* when its exact token sequence occurred as a training
mention with the same type, *Unseen-Type* when the token sequence occurred
as a training mention but only with other types, and *Unseen-Tokens*
otherwise.  Matching is case sensitive and whole-sequence.  A test mention is
type-confusable (TCM) when its token sequence carries two or more distinct
gold types within the test set; training data plays no part in that.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .conll import Mention
from .util import round_half_up

MentionKey = tuple[str, ...]


class UnseenClass(enum.Enum):
    SEEN = "Seen"
    UNSEEN_TOKENS = "UnseenTokens"
    UNSEEN_TYPE = "UnseenType"


class TCMClass(enum.Enum):
    NOT_TCM = "NotTCM"
    TCM_SEEN = "TCMSeen"
    TCM_UNSEEN = "TCMUnseen"


# Display order used by every report.
SUBSETS = (
    "All",
    "Seen",
    "Unseen-Any",
    "Unseen-Tokens",
    "Unseen-Type",
    "TCM-All",
    "TCM-Seen",
    "TCM-Unseen",
)
COMPOSITION_ROWS = SUBSETS[2:]


@dataclass(frozen=True, slots=True)
class SubsetLabel:
    unseen: UnseenClass
    tcm: TCMClass

    def __post_init__(self):
        if self.tcm is TCMClass.TCM_UNSEEN and self.unseen is not UnseenClass.UNSEEN_TOKENS:
            raise ValueError("TCM-Unseen mentions must be Unseen-Tokens")

    def in_subset(self, name: str) -> bool:
        u, t = self.unseen, self.tcm
        match name:
            case "All":
                return True
            case "Seen":
                return u is UnseenClass.SEEN
            case "Unseen-Any":
                return u is not UnseenClass.SEEN
            case "Unseen-Tokens":
                return u is UnseenClass.UNSEEN_TOKENS
            case "Unseen-Type":
                return u is UnseenClass.UNSEEN_TYPE
            case "TCM-All":
                return t is not TCMClass.NOT_TCM
            case "TCM-Seen":
                return t is TCMClass.TCM_SEEN
            case "TCM-Unseen":
                return t is TCMClass.TCM_UNSEEN
        raise KeyError(name)


@dataclass(frozen=True)
class TrainIndex:
    seen_pairs: frozenset[tuple[MentionKey, str]]
    seen_keys: frozenset[MentionKey]


def build_train_index(train_gold: Iterable[Mention]) -> TrainIndex:
    pairs = frozenset((m.key, m.etype) for m in train_gold)
    return TrainIndex(pairs, frozenset(k for k, _ in pairs))


def classify_unseen(m: Mention, idx: TrainIndex) -> UnseenClass:
    if (m.key, m.etype) in idx.seen_pairs:
        return UnseenClass.SEEN
    if m.key in idx.seen_keys:
        return UnseenClass.UNSEEN_TYPE
    return UnseenClass.UNSEEN_TOKENS


def classify_tcm(test_gold: Sequence[Mention],
                 unseen_classes: Sequence[UnseenClass]) -> list[TCMClass]:
    if len(test_gold) != len(unseen_classes):
        raise ValueError("one unseen class is needed per test mention")
    types = defaultdict(set)
    for m in test_gold:
        types[m.key].add(m.etype)
    out = []
    for m, u in zip(test_gold, unseen_classes):
        if len(types[m.key]) < 2:
            out.append(TCMClass.NOT_TCM)
        elif u is UnseenClass.UNSEEN_TOKENS:
            out.append(TCMClass.TCM_UNSEEN)
        else:
            out.append(TCMClass.TCM_SEEN)
    return out


@dataclass(frozen=True)
class SubsetAssignment:
    """Labels for every test gold mention, in the order the mentions were given."""

    mentions: tuple[Mention, ...]
    labels: tuple[SubsetLabel, ...]

    def __post_init__(self):
        if len(self.mentions) != len(self.labels):
            raise ValueError("assignment must label every mention exactly once")

    def __len__(self) -> int:
        return len(self.mentions)

    def __iter__(self):
        return iter(zip(self.mentions, self.labels))

    def __getitem__(self, m: Mention) -> SubsetLabel:
        return self._lookup[m]

    @cached_property
    def _lookup(self) -> dict[Mention, SubsetLabel]:
        return dict(zip(self.mentions, self.labels))

    def members(self, subset: str, etype: str | None = None) -> list[Mention]:
        return [m for m, lab in self
                if lab.in_subset(subset) and (etype is None or m.etype == etype)]


def assign_subsets(idx: TrainIndex, test_gold: Sequence[Mention]) -> SubsetAssignment:
    test_gold = tuple(test_gold)
    unseen = [classify_unseen(m, idx) for m in test_gold]
    tcm = classify_tcm(test_gold, unseen)
    return SubsetAssignment(test_gold, tuple(SubsetLabel(u, t) for u, t in zip(unseen, tcm)))


def order_types(mentions: Iterable[Mention]) -> list[str]:
    """Entity types by descending mention count, ties broken by name."""
    counts: dict[str, int] = defaultdict(int)
    for m in mentions:
        counts[m.etype] += 1
    return sorted(counts, key=lambda t: (-counts[t], t))


@dataclass(frozen=True)
class CompositionTable:
    types: tuple[str, ...]
    counts: dict[tuple[str, str], int]  # (row, column) -> count
    totals: dict[str, int]  # column -> mention count

    @property
    def columns(self) -> tuple[str, ...]:
        return (*self.types, "ALL")

    def fraction(self, row: str, column: str) -> Fraction | None:
        total = self.totals[column]
        if total == 0:
            return None
        return Fraction(self.counts[row, column], total)

    def percent(self, row: str, column: str) -> Fraction | None:
        f = self.fraction(row, column)
        return None if f is None else 100 * f

    def display(self, row: str, column: str) -> str:
        p = self.percent(row, column)
        return "—" if p is None else str(round_half_up(p, 1))


def composition(assignment: SubsetAssignment) -> CompositionTable:
    types = tuple(order_types(assignment.mentions))
    counts = {}
    totals = {c: 0 for c in (*types, "ALL")}
    for row in COMPOSITION_ROWS:
        for c in (*types, "ALL"):
            counts[row, c] = 0
    for m, label in assignment:
        totals[m.etype] += 1
        totals["ALL"] += 1
        for row in COMPOSITION_ROWS:
            if label.in_subset(row):
                counts[row, m.etype] += 1
                counts[row, "ALL"] += 1
    return CompositionTable(types, counts, totals)
