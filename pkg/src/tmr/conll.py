"""Reading and writing CoNLL column files, and converting between tags and mentions.

Tag sequences are decoded with conlleval's chunk boundary rules, extended to
BIOES the way BIOES-aware conlleval ports do.  Illegal sequences are repaired
rather than rejected: an ``I-X`` after ``O`` (or after a chunk of another
type) opens a new chunk, and a chunk still open at the end of a sentence is
closed at its last token.  Under these rules IOB1 and IOB2 decode
identically; the scheme only matters when encoding.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import (
    MalformedLine,
    NoEntities,
    OverlappingMentions,
    UnknownTag,
)

DOCSTART = "-DOCSTART-"


class TagScheme(enum.Enum):
    IOB1 = "iob1"
    IOB2 = "iob2"
    BIOES = "bioes"

    @property
    def flags(self) -> frozenset[str]:
        if self is TagScheme.BIOES:
            return frozenset("OBIES")
        return frozenset("OBI")

    @classmethod
    def from_name(cls, name: str) -> TagScheme | None:
        """Map a user-facing name to a scheme; ``"auto"`` maps to None.

        ``"bio"`` is accepted as an alias of IOB2.
        """
        name = name.lower()
        if name == "auto":
            return None
        if name == "bio":
            return cls.IOB2
        return cls(name)


@dataclass(frozen=True, slots=True)
class TagLabel:
    flag: str
    etype: str | None = None

    def __post_init__(self):
        if self.flag not in ("O", "B", "I", "E", "S"):
            raise UnknownTag(f"unknown tag flag {self.flag!r}")
        if (self.flag == "O") != (self.etype is None):
            raise UnknownTag(f"flag {self.flag!r} with type {self.etype!r}")
        if self.etype is not None and not self.etype:
            raise UnknownTag(f"empty entity type with flag {self.flag!r}")

    def __str__(self) -> str:
        return "O" if self.etype is None else f"{self.flag}-{self.etype}"

    @staticmethod
    def parse(text: str) -> TagLabel:
        return _parse_tag(text)


@lru_cache(maxsize=4096)
def _parse_tag(text: str) -> TagLabel:
    if text == "O":
        return TagLabel("O")
    flag, sep, etype = text.partition("-")
    if not sep or flag not in ("B", "I", "E", "S") or not etype:
        raise UnknownTag(f"cannot parse tag {text!r}")
    return TagLabel(flag, etype)


OUTSIDE = TagLabel("O")


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    column_extras: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class Sentence:
    tokens: tuple[Token, ...]
    gold_tags: tuple[TagLabel, ...]
    pred_tags: tuple[TagLabel, ...] | None = None

    def __post_init__(self):
        if len(self.gold_tags) != len(self.tokens):
            raise ValueError("gold tag count differs from token count")
        if self.pred_tags is not None and len(self.pred_tags) != len(self.tokens):
            raise ValueError("predicted tag count differs from token count")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)


@dataclass(frozen=True, slots=True, order=True)
class Mention:
    """A typed token span inside one sentence; ``end`` is exclusive."""

    doc: int
    sent: int
    start: int
    end: int
    etype: str
    tokens: tuple[str, ...] = ()

    @property
    def key(self) -> tuple[str, ...]:
        """Case-sensitive token sequence used for seen/unseen and TCM matching."""
        return self.tokens

    @property
    def span(self) -> tuple[int, int, int, int, str]:
        return (self.doc, self.sent, self.start, self.end, self.etype)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[tuple[Sentence, ...], ...]
    scheme: TagScheme
    source_name: str = "<memory>"

    def sentences(self) -> Iterator[tuple[int, int, Sentence]]:
        for d, doc in enumerate(self.documents):
            for s, sentence in enumerate(doc):
                yield d, s, sentence

    @property
    def has_predictions(self) -> bool:
        return any(s.pred_tags is not None for _, _, s in self.sentences())

    def mentions(self, which: str = "gold") -> list[Mention]:
        """Decode every sentence's ``gold`` or ``pred`` tags into mentions."""
        out: list[Mention] = []
        for d, s, sentence in self.sentences():
            tags = sentence.gold_tags if which == "gold" else sentence.pred_tags
            if tags is None:
                raise ValueError(f"{self.source_name} has no predicted tags")
            out.extend(decode_tags(tags, self.scheme, (d, s), sentence.texts))
        return out

    def shape(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(len(s) for s in doc) for doc in self.documents)

    def fingerprint(self) -> str:
        """SHA-256 over tokens, segmentation and gold tags."""
        h = hashlib.sha256()
        for d, s, sentence in self.sentences():
            h.update(f"{d}\t{s}\n".encode())
            for tok, tag in zip(sentence.tokens, sentence.gold_tags):
                h.update(f"{tok.text}\t{tag}\n".encode())
        return h.hexdigest()


@dataclass(frozen=True)
class ColumnConfig:
    token_col: int = 0
    gold_col: int = -1
    pred_col: int | None = None
    scheme: TagScheme | None = None  # None = detect
    docstart_marker: str = DOCSTART
    encoding: str = "utf-8"

    @classmethod
    def combined(cls, **kw) -> ColumnConfig:
        """conlleval layout: ``token ... gold pred``."""
        kw.setdefault("gold_col", -2)
        kw.setdefault("pred_col", -1)
        return cls(**kw)


def _starts_chunk(prev: TagLabel, tag: TagLabel) -> bool:
    if tag.flag in ("B", "S"):
        return True
    if tag.flag in ("I", "E"):
        return prev.flag in ("O", "E", "S") or prev.etype != tag.etype
    return False


def decode_tags(
    tags: Sequence[TagLabel],
    scheme: TagScheme | None = None,
    location: tuple[int, int] = (0, 0),
    tokens: Sequence[str] = (),
) -> list[Mention]:
    """Extract maximal chunks from one sentence's tags.

    Never fails: malformed sequences are repaired as described in the module
    docstring.  ``scheme`` is accepted for symmetry with :func:`encode_tags`;
    the chunk rules do not depend on it.
    """
    if tokens and len(tokens) != len(tags):
        raise ValueError("tags and tokens differ in length")
    doc, sent = location
    mentions = []
    start = None
    prev = OUTSIDE

    def close(end):
        mentions.append(Mention(doc, sent, start, end, tags[start].etype,
                                tuple(tokens[start:end]) if tokens else ()))

    for i, tag in enumerate(tags):
        begins = _starts_chunk(prev, tag)
        if start is not None and (begins or tag.flag == "O"):
            close(i)
            start = None
        if begins:
            start = i
        prev = tag
    if start is not None:
        close(len(tags))
    return mentions


def encode_tags(mentions: Iterable[Mention], length: int,
                scheme: TagScheme) -> list[TagLabel]:
    tags = [OUTSIDE] * length
    prev = None
    for m in sorted(mentions, key=lambda m: (m.start, m.end)):
        if not 0 <= m.start < m.end <= length:
            raise ValueError(f"mention {m.start}:{m.end} outside sentence of length {length}")
        if prev is not None and m.start < prev.end:
            raise OverlappingMentions(
                f"mentions {prev.start}:{prev.end} and {m.start}:{m.end} overlap")
        t = m.etype
        if scheme is TagScheme.BIOES:
            if m.end - m.start == 1:
                tags[m.start] = TagLabel("S", t)
            else:
                tags[m.start] = TagLabel("B", t)
                for i in range(m.start + 1, m.end - 1):
                    tags[i] = TagLabel("I", t)
                tags[m.end - 1] = TagLabel("E", t)
        else:
            first = "B"
            if scheme is TagScheme.IOB1:
                adjacent = prev is not None and prev.end == m.start and prev.etype == t
                first = "B" if adjacent else "I"
            tags[m.start] = TagLabel(first, t)
            for i in range(m.start + 1, m.end):
                tags[i] = TagLabel("I", t)
        prev = m
    return tags


def detect_scheme(tag_sequences: Iterable[Sequence[TagLabel]]) -> TagScheme:
    """Guess the tag scheme from the tags actually used.

    E or S anywhere means BIOES.  Otherwise a B that does not directly follow
    a chunk of the same type can only be IOB2; if every B is of the kind
    IOB1 requires, the data is IOB1.
    """
    seen_entity = False
    iob2 = False
    for tags in tag_sequences:
        prev = OUTSIDE
        for tag in tags:
            if tag.flag in ("E", "S"):
                return TagScheme.BIOES
            if tag.flag != "O":
                seen_entity = True
            if tag.flag == "B" and not (prev.flag in ("B", "I") and prev.etype == tag.etype):
                iob2 = True
            prev = tag
    if not seen_entity:
        raise NoEntities("no entity tags present; pass the scheme explicitly")
    return TagScheme.IOB2 if iob2 else TagScheme.IOB1


def _resolve(idx: int, width: int) -> int:
    return idx if idx >= 0 else width + idx


def parse_conll(data: bytes | str, config: ColumnConfig = ColumnConfig(),
                source_name: str = "<bytes>") -> Corpus:
    """Parse CoNLL column text into a :class:`Corpus`.

    Blank lines separate sentences (runs of them collapse).  A line whose
    token column equals ``config.docstart_marker`` starts a new document and
    is otherwise dropped.  Columns are split on any run of whitespace.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode(config.encoding)
        except UnicodeDecodeError as e:
            line_no = data[:e.start].count(b"\n") + 1
            raise MalformedLine(f"not valid {config.encoding}: {e.reason}",
                                source_name, line_no) from None
    else:
        text = data
    if text.startswith("\ufeff"):
        text = text[1:]

    documents: list[list[Sentence]] = []
    new_doc = True
    rows: list[tuple[Token, str, str | None, int]] = []

    def flush():
        nonlocal new_doc
        if not rows:
            return
        if new_doc:
            documents.append([])
            new_doc = False
        gold, pred = [], []
        for _, g, p, line_no in rows:
            try:
                gold.append(_parse_tag(g))
                if p is not None:
                    pred.append(_parse_tag(p))
            except UnknownTag as e:
                raise UnknownTag(str(e), source_name, line_no) from None
        documents[-1].append(Sentence(
            tuple(r[0] for r in rows), tuple(gold),
            tuple(pred) if config.pred_col is not None else None))
        rows.clear()

    for line_no, line in enumerate(text.split("\n"), 1):
        fields = line.split()
        if not fields:
            flush()
            continue
        width = len(fields)
        tok_i = _resolve(config.token_col, width)
        if 0 <= tok_i < width and fields[tok_i] == config.docstart_marker:
            flush()
            new_doc = True
            continue
        gold_i = _resolve(config.gold_col, width)
        used = [tok_i, gold_i]
        pred_i = None
        if config.pred_col is not None:
            pred_i = _resolve(config.pred_col, width)
            used.append(pred_i)
        if any(not 0 <= i < width for i in used) or len(set(used)) != len(used):
            raise MalformedLine(f"expected more columns, found {width}",
                                source_name, line_no)
        extras = tuple(f for i, f in enumerate(fields) if i not in used)
        rows.append((Token(fields[tok_i], extras), fields[gold_i],
                     fields[pred_i] if pred_i is not None else None, line_no))
    flush()

    docs = tuple(tuple(d) for d in documents)
    scheme = config.scheme
    if scheme is None:
        seqs = [s.gold_tags for doc in docs for s in doc]
        seqs += [s.pred_tags for doc in docs for s in doc if s.pred_tags is not None]
        try:
            scheme = detect_scheme(seqs)
        except NoEntities:
            # decoding is scheme-independent, so any choice is safe here
            scheme = TagScheme.IOB2
    else:
        for d, s, sentence in Corpus(docs, scheme).sentences():
            for tag in sentence.gold_tags + (sentence.pred_tags or ()):
                if tag.flag not in scheme.flags:
                    raise UnknownTag(f"tag {tag} not allowed in {scheme.name}",
                                     source_name)
    return Corpus(docs, scheme, source_name)


def read_conll(path: str | Path, config: ColumnConfig = ColumnConfig()) -> Corpus:
    path = Path(path)
    return parse_conll(path.read_bytes(), config, str(path))


def serialize_conll(corpus: Corpus, docstart_marker: str = DOCSTART) -> str:
    """Write a corpus back out as ``token extras... gold [pred]`` lines.

    Document markers are written only when there is more than one document,
    so a marker-free file round-trips without gaining one.
    """
    out = []
    markers = len(corpus.documents) > 1
    for doc in corpus.documents:
        if markers:
            width = 1 + (len(doc[0].tokens[0].column_extras) if doc else 0)
            pad = ["O"] * (width - 1)
            cols = [docstart_marker, *pad, "O"]
            if corpus.has_predictions:
                cols.append("O")
            out.append(" ".join(cols))
            out.append("")
        for sentence in doc:
            pred = sentence.pred_tags
            for i, tok in enumerate(sentence.tokens):
                cols = [tok.text, *tok.column_extras, str(sentence.gold_tags[i])]
                if pred is not None:
                    cols.append(str(pred[i]))
                out.append(" ".join(cols))
            out.append("")
    return "\n".join(out) + ("\n" if out else "")
