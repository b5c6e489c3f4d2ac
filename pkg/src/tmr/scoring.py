"""Exact-match scoring: conlleval-style P/R/F1 plus recall on mention subsets."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .conll import Corpus, Mention
from .errors import SegmentationMismatch
from .taxonomy import SUBSETS, SubsetAssignment, order_types

ALL = "ALL"


@dataclass(frozen=True)
class MatchResult:
    gold: tuple[Mention, ...]
    recalled: tuple[bool, ...]
    tp: Counter
    fp: Counter
    fn: Counter

    @property
    def types(self) -> set[str]:
        return set(self.tp) | set(self.fp) | set(self.fn)


def check_alignment(gold: Corpus, pred: Corpus) -> None:
    """Raise :class:`SegmentationMismatch` unless both corpora share tokens and segmentation."""
    if gold.shape() != pred.shape():
        raise SegmentationMismatch(
            f"{pred.source_name} has a different document/sentence/token layout "
            f"than {gold.source_name}", pred.source_name)
    for (d, s, g), (_, _, p) in zip(gold.sentences(), pred.sentences()):
        if g.texts != p.texts:
            i = next(i for i, (a, b) in enumerate(zip(g.texts, p.texts)) if a != b)
            raise SegmentationMismatch(
                f"token mismatch in document {d} sentence {s} token {i}: "
                f"{g.texts[i]!r} vs {p.texts[i]!r}", pred.source_name)


def match_mentions(gold: Sequence[Mention], pred: Sequence[Mention]) -> MatchResult:
    pred_spans = {m.span for m in pred}
    gold_spans = {m.span for m in gold}
    recalled = tuple(m.span in pred_spans for m in gold)
    tp, fp, fn = Counter(), Counter(), Counter()
    for m, hit in zip(gold, recalled):
        (tp if hit else fn)[m.etype] += 1
    for m in pred:
        if m.span not in gold_spans:
            fp[m.etype] += 1
    return MatchResult(tuple(gold), recalled, tp, fp, fn)


@dataclass(frozen=True)
class PRF:
    """Counts for one precision/recall/F1 cell; metrics are exact fractions in [0, 1]."""

    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> Fraction:
        d = self.tp + self.fp
        return Fraction(self.tp, d) if d else Fraction(0)

    @property
    def recall(self) -> Fraction:
        d = self.tp + self.fn
        return Fraction(self.tp, d) if d else Fraction(0)

    @property
    def f1(self) -> Fraction:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else Fraction(0)

    @property
    def support(self) -> int:
        return self.tp + self.fn


def micro_prf(result: MatchResult) -> tuple[PRF, dict[str, PRF]]:
    overall = PRF(sum(result.tp.values()), sum(result.fp.values()), sum(result.fn.values()))
    per_type = {t: PRF(result.tp[t], result.fp[t], result.fn[t]) for t in sorted(result.types)}
    return overall, per_type


@dataclass(frozen=True)
class SubsetRecall:
    hits: int
    size: int

    @property
    def recall(self) -> Fraction | None:
        """None for an empty subset: there is nothing to recall."""
        return Fraction(self.hits, self.size) if self.size else None


def tmr_recall(result: MatchResult,
               assignment: SubsetAssignment) -> dict[str, dict[str, SubsetRecall]]:
    """Recall per subset, for all mentions (``"ALL"``) and for each gold type."""
    if assignment.mentions != result.gold:
        raise ValueError("assignment and match result cover different gold mentions")
    types = order_types(result.gold)
    hits = Counter()
    sizes = Counter()
    for (m, label), ok in zip(assignment, result.recalled):
        for subset in SUBSETS:
            if label.in_subset(subset):
                for col in (ALL, m.etype):
                    sizes[col, subset] += 1
                    hits[col, subset] += ok
    return {col: {s: SubsetRecall(hits[col, s], sizes[col, s]) for s in SUBSETS}
            for col in (ALL, *types)}


@dataclass(frozen=True)
class MetricReport:
    """One run's scores.  Only the recall side exists for taxonomy subsets."""

    gold_fingerprint: str
    types: tuple[str, ...]
    overall: PRF
    per_type: dict[str, PRF]
    subset_recall: dict[str, dict[str, SubsetRecall]]
    source: str = ""

    def subset_sizes(self) -> dict[tuple[str, str], int]:
        return {(col, s): r.size for col, row in self.subset_recall.items() for s, r in row.items()}

    def cells(self) -> dict[tuple[str, str, str], Fraction | None]:
        """Every reportable value as a fraction, keyed by (section, column, metric)."""
        out: dict[tuple[str, str, str], Fraction | None] = {}
        for col, prf in ((ALL, self.overall), *((t, self.per_type[t]) for t in self.types)):
            out["prf", col, "precision"] = prf.precision
            out["prf", col, "recall"] = prf.recall
            out["prf", col, "f1"] = prf.f1
        for col, row in self.subset_recall.items():
            for s, r in row.items():
                out["recall", col, s] = r.recall
        return out


def score(gold: Corpus, pred: Corpus, assignment: SubsetAssignment,
          pred_which: str = "pred") -> MetricReport:
    """Score predicted tags in ``pred`` against gold tags in ``gold``.

    ``gold`` and ``pred`` may be the same combined corpus.  Per-type sections
    cover gold types only; predicted types absent from the gold still count
    as false positives overall.
    """
    if pred is not gold:
        check_alignment(gold, pred)
    gold_mentions = assignment.mentions
    result = match_mentions(gold_mentions, pred.mentions(pred_which))
    overall, per_type = micro_prf(result)
    types = tuple(order_types(gold_mentions))
    return MetricReport(
        gold.fingerprint(), types, overall,
        {t: per_type[t] for t in types},
        tmr_recall(result, assignment),
        pred.source_name,
    )
