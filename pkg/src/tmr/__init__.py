"""Tough Mentions Recall: recall on unseen and type-confusable NER mentions."""

from .aggregate import AggregateReport, RunSet, aggregate_runs
from .conll import (
    ColumnConfig,
    Corpus,
    Mention,
    Sentence,
    TagLabel,
    TagScheme,
    Token,
    decode_tags,
    detect_scheme,
    encode_tags,
    parse_conll,
    read_conll,
    serialize_conll,
)
from .errors import (
    InconsistentRuns,
    InputError,
    MalformedLine,
    NoEntities,
    OverlappingMentions,
    SegmentationMismatch,
    TMRError,
    UnknownTag,
)
from .scoring import MetricReport, match_mentions, micro_prf, score, tmr_recall
from .taxonomy import (
    SUBSETS,
    CompositionTable,
    SubsetAssignment,
    SubsetLabel,
    TCMClass,
    TrainIndex,
    UnseenClass,
    assign_subsets,
    build_train_index,
    classify_tcm,
    classify_unseen,
    composition,
)

__version__ = "0.1.0"
