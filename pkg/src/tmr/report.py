"""Structured report documents and their text/TSV renderings.

Every command first builds a JSON-ready document.  Text and TSV output are
rendered from that document's ``display`` strings, so the three formats
always show the same rounded numbers.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .aggregate import AggregateCell, AggregateReport
from .scoring import ALL, MetricReport
from .taxonomy import COMPOSITION_ROWS, SUBSETS, CompositionTable, SubsetAssignment
from .util import round_half_up

SCHEMA_VERSION = "1.0"
UNDEFINED = "—"

SUBSET_LABELS = {
    "All": "All",
    "Seen": "Seen",
    "Unseen-Any": "U-Any",
    "Unseen-Tokens": "U-Tok.",
    "Unseen-Type": "U-Type",
    "TCM-All": "TCM-All",
    "TCM-Seen": "TCM-Seen",
    "TCM-Unseen": "TCM-Unseen",
}


def _num(d) -> float:
    return float(d)


def score_cell(cell: AggregateCell | None, n_runs: int) -> dict | None:
    if cell is None:
        return None
    value = round_half_up(cell.mean, 2)
    out = {"display": str(value), "value": _num(value), "std": None,
           "raw": float(cell.mean) / 100, "raw_std": None}
    if n_runs > 1:
        std = round_half_up(cell.std, 2)
        out["display"] = f"{value} (±{std})"
        out["std"] = _num(std)
        out["raw_std"] = cell.std / 100
    return out


def composition_document(table: CompositionTable, meta: dict) -> dict:
    rows = {}
    for row in COMPOSITION_ROWS:
        rows[row] = {}
        for col in table.columns:
            frac = table.fraction(row, col)
            rows[row][col] = {
                "count": table.counts[row, col],
                "display": table.display(row, col),
                "percent": None if frac is None else _num(round_half_up(100 * frac, 1)),
                "raw": None if frac is None else float(frac),
            }
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "composition",
        **meta,
        "columns": list(table.columns),
        "rows": rows,
        "totals": {c: table.totals[c] for c in table.columns},
    }


def score_document(agg: AggregateReport, reports: list[MetricReport], meta: dict) -> dict:
    n = agg.n
    columns = [ALL, *agg.types]
    prf = {}
    for col in columns:
        prf[col] = {m: score_cell(agg.cells["prf", col, m], n)
                    for m in ("precision", "recall", "f1")}
        prf[col]["support"] = agg.sizes[col, "All"]
    subset_recall = {
        col: {s: {"recall": score_cell(agg.cells["recall", col, s], n),
                  "size": agg.sizes[col, s]}
              for s in SUBSETS}
        for col in columns
    }
    std = None
    if n > 1:
        std = "population" if agg.population_std else "sample"
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "score",
        **meta,
        "runs": n,
        "std": std,
        "columns": columns,
        "prf": prf,
        "subset_recall": subset_recall,
        "run_counts": [
            {"source": r.source, "tp": r.overall.tp, "fp": r.overall.fp, "fn": r.overall.fn}
            for r in reports
        ],
    }


def classify_document(assignment: SubsetAssignment, meta: dict) -> dict:
    records = []
    for m, label in sorted(assignment, key=lambda ml: (ml[0].doc, ml[0].sent, ml[0].start)):
        records.append({
            "doc": m.doc, "sent": m.sent, "start": m.start, "end": m.end,
            "tokens": list(m.tokens), "type": m.etype,
            "unseen_class": label.unseen.value, "tcm_class": label.tcm.value,
        })
    return {"schema_version": SCHEMA_VERSION, "command": "classify", **meta,
            "mentions": records}


# -- tables ---------------------------------------------------------------

def _tables(doc: dict) -> list[tuple[str, list[str], list[list[str]]]]:
    """(title, header, rows) for each table in a document."""
    cmd = doc["command"]
    if cmd == "composition":
        cols = doc["columns"]
        rows = [[SUBSET_LABELS[r], *(doc["rows"][r][c]["display"] for c in cols)]
                for r in COMPOSITION_ROWS]
        rows.append(["All (Count)", *(str(doc["totals"][c]) for c in cols)])
        return [("Percentage of test mentions in each subset", ["Set", *cols], rows)]
    if cmd == "score":
        cols = doc["columns"]

        def show(cell):
            return UNDEFINED if cell is None else cell["display"]

        runs = doc["runs"]
        note = "1 run" if runs == 1 else f"mean (±{doc['std']} std) over {runs} runs"
        prf_rows = [[c, *(show(doc["prf"][c][m]) for m in ("precision", "recall", "f1")),
                     str(doc["prf"][c]["support"])] for c in cols]
        rec_rows = [[SUBSET_LABELS[s], *(show(doc["subset_recall"][c][s]["recall"]) for c in cols)]
                    for s in SUBSETS]
        size_rows = [[SUBSET_LABELS[s], *(str(doc["subset_recall"][c][s]["size"]) for c in cols)]
                     for s in SUBSETS]
        return [
            (f"Precision/recall/F1, exact match ({note})",
             ["Type", "Precision", "Recall", "F1", "Gold"], prf_rows),
            ("Recall by mention subset", ["Subset", *cols], rec_rows),
            ("Subset sizes", ["Subset", *cols], size_rows),
        ]
    if cmd == "classify":
        rows = [[str(r["doc"]), str(r["sent"]), str(r["start"]), str(r["end"]), r["type"],
                 r["unseen_class"], r["tcm_class"], " ".join(r["tokens"])]
                for r in doc["mentions"]]
        return [("Test mention classification",
                 ["doc", "sent", "start", "end", "type", "unseen", "tcm", "tokens"], rows)]
    raise ValueError(f"unknown command {cmd!r}")


def render_text(doc: dict) -> str:
    out = []
    if doc.get("train_includes_dev"):
        out.append("NOTE: development data was added to the training index (non-standard).")
        out.append("")
    for title, header, rows in _tables(doc):
        widths = [max(len(x) for x in col) for col in zip(header, *rows)]
        out.append(title)
        left = doc["command"] == "classify"

        def fmt_row(r):
            cells = (c.ljust(w) if i == 0 or left else c.rjust(w)
                     for i, (c, w) in enumerate(zip(r, widths)))
            return "  ".join(cells).rstrip()

        out.append(fmt_row(header))
        out.extend(fmt_row(r) for r in rows)
        out.append("")
    return "\n".join(out)


def render_tsv(doc: dict) -> str:
    out = []
    tables = _tables(doc)
    for i, (title, header, rows) in enumerate(tables):
        if len(tables) > 1:
            out.append(f"# {title}")
        out.append("\t".join(header))
        out.extend("\t".join(r) for r in rows)
        if i < len(tables) - 1:
            out.append("")
    return "\n".join(out) + "\n"


def render_json(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


RENDERERS = {"text": render_text, "tsv": render_tsv, "json": render_json}


def single_run(report: MetricReport) -> AggregateReport:
    """View one report as a one-run aggregate so both render the same way."""
    cells = {k: None if v is None else AggregateCell(100 * Fraction(v), 0.0, 1)
             for k, v in report.cells().items()}
    return AggregateReport(report.types, cells, report.subset_sizes(), 1)
