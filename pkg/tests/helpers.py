"""Independent oracles and random generators shared by the test modules."""

from __future__ import annotations

import dataclasses
import random

import conlleval

from tmr.conll import Mention, TagLabel, TagScheme, encode_tags

TYPES = ["PER", "LOC", "ORG", "MISC", "WORK-OF-ART"]
WORDS = ["Boston", "boston", "BOSTON", "John", "Brown", "UK", "uk", "Newcastle",
         "New", "York", "Real", "Madrid", "EU", "Bank", "of", "England"]


# -- taxonomy oracle: literal set definitions, quadratic scans, no indexes ----

def brute_force_labels(train: list[Mention], test: list[Mention]) -> list[tuple[str, str]]:
    labels = []
    for m in test:
        same_pair = any(list(t.tokens) == list(m.tokens) and t.etype == m.etype for t in train)
        same_tokens = any(list(t.tokens) == list(m.tokens) for t in train)
        if same_pair:
            unseen = "Seen"
        elif same_tokens:
            unseen = "UnseenType"
        else:
            unseen = "UnseenTokens"
        confusable = any(list(o.tokens) == list(m.tokens) and o.etype != m.etype for o in test)
        if not confusable:
            tcm = "NotTCM"
        elif unseen == "UnseenTokens":
            tcm = "TCMUnseen"
        else:
            tcm = "TCMSeen"
        labels.append((unseen, tcm))
    return labels


# -- random corpora -----------------------------------------------------------

def random_key(rng: random.Random, pool: list[tuple[str, ...]]) -> tuple[str, ...]:
    if pool and rng.random() < 0.6:
        key = rng.choice(pool)
        if rng.random() < 0.2:  # casing perturbation
            key = tuple(w.lower() if rng.random() < 0.5 else w.upper() for w in key)
        return key
    key = tuple(rng.choice(WORDS) for _ in range(rng.randint(1, 3)))
    pool.append(key)
    return key


def random_mentions(rng: random.Random, n: int, types: list[str],
                    pool: list[tuple[str, ...]], doc: int = 0) -> list[Mention]:
    """n mentions, one per sentence, with keys drawn from a shared pool."""
    out = []
    for i in range(n):
        key = random_key(rng, pool)
        out.append(Mention(doc, i, 0, len(key), rng.choice(types), key))
    return out


def random_taxonomy_case(rng: random.Random, max_mentions: int = 50, max_types: int = 5):
    types = rng.sample(TYPES, rng.randint(1, max_types))
    pool: list[tuple[str, ...]] = []
    train = random_mentions(rng, rng.randint(0, max_mentions), types, pool, doc=0)
    test = random_mentions(rng, rng.randint(0, max_mentions), types, pool, doc=1)
    return train, test


def random_layout(rng: random.Random, length: int, types: list[str],
                  doc: int = 0, sent: int = 0, tokens=None) -> list[Mention]:
    """Random non-overlapping mentions in a sentence of the given length."""
    tokens = tokens or [f"w{i}" for i in range(length)]
    out = []
    i = 0
    while i < length:
        if rng.random() < 0.45:
            end = min(length, i + rng.choice([1, 1, 2, 3, 4]))
            out.append(Mention(doc, sent, i, end, rng.choice(types), tuple(tokens[i:end])))
            i = end
        else:
            i += rng.choice([0, 1, 1, 2]) or 1
    return out


def random_tags(rng: random.Random, length: int, scheme: TagScheme, types: list[str],
                corruption: float = 0.0) -> list[TagLabel]:
    """Valid tags for a random layout, with a fraction replaced by arbitrary tags."""
    tags = encode_tags(random_layout(rng, length, types), length, scheme)
    flags = sorted(scheme.flags - {"O"})
    for i in range(length):
        if rng.random() < corruption:
            if rng.random() < 0.2:
                tags[i] = TagLabel("O")
            else:
                tags[i] = TagLabel(rng.choice(flags), rng.choice(types))
    return tags


def random_combined_file(rng: random.Random, scheme: TagScheme, n_sent: int = 25,
                         corruption: float = 0.15, types=None, docstart: bool = True) -> str:
    """conlleval-style ``token pos gold pred`` text with random repair triggers."""
    types = types or rng.sample(TYPES, rng.randint(1, 4))
    lines = []
    if docstart:
        lines += ["-DOCSTART- -X- O O", ""]
    for s in range(n_sent):
        if docstart and s and rng.random() < 0.1:
            lines += ["-DOCSTART- -X- O O", ""]
        n = rng.randint(1, 20)
        gold = random_tags(rng, n, scheme, types, corruption)
        if rng.random() < 0.15:
            pred = list(gold)
        else:
            pred = random_tags(rng, n, scheme, types, corruption)
            # start from gold often so many chunks are right
            pred = [g if rng.random() < 0.7 else p for g, p in zip(gold, pred)]
        for i in range(n):
            lines.append(f"{rng.choice(WORDS)} NN {gold[i]} {pred[i]}")
        lines.append("")
    return "\n".join(lines) + "\n"


# -- conlleval reference ----------------------------------------------------

def conlleval_counts(text: str) -> dict:
    """Chunk counts and metrics from the third-party ``conlleval`` port.

    Returns ``{"overall": (gold, pred, correct, p, r, f), type: (...)}`` with
    metrics in percent.
    """
    summary = conlleval.evaluate(text.splitlines())
    out = {}

    def unpack(block):
        st, ev = block["stats"], block["evals"]
        return (st["gold"], st["pred"], st["correct"],
                100 * ev["prec"], 100 * ev["rec"], 100 * ev["f1"])

    out["overall"] = unpack(summary["overall"]["chunks"])
    for slot, block in summary["slots"]["chunks"].items():
        out[slot] = unpack(block)
    return out


def random_predictions(rng: random.Random, gold: list[Mention]) -> list[Mention]:
    """Mostly-correct predictions with type and boundary errors mixed in."""
    pred = []
    for g in gold:
        x = rng.random()
        if x < 0.6:
            pred.append(g)
        elif x < 0.75:
            pred.append(dataclasses.replace(g, etype=rng.choice(TYPES)))
        elif x < 0.85:
            pred.append(dataclasses.replace(g, end=g.end + 1))
    return pred
