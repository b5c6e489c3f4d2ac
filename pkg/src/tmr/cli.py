"""Command-line interface: ``tmr composition|score|classify``.

Exit status is 0 on success, 2 for unreadable or malformed input (including
prediction files that do not line up with the gold data), and 3 when the
prediction runs cannot be aggregated together.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .aggregate import RunSet, aggregate_runs
from .conll import ColumnConfig, Corpus, TagScheme, read_conll
from .errors import InconsistentRuns, InputError
from .report import (
    RENDERERS,
    classify_document,
    composition_document,
    score_document,
    single_run,
)
from .scoring import score
from .taxonomy import assign_subsets, build_train_index, composition

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNS = 3


@dataclass
class RunConfig:
    command: str
    train_paths: list[str]
    test_gold_path: str | None = None
    pred_paths: list[str] = field(default_factory=list)
    combined_mode: bool = False
    scheme: TagScheme | None = None
    token_col: int = 0
    gold_col: int | None = None
    pred_col: int | None = None
    output_format: str = "text"
    dev_paths: list[str] = field(default_factory=list)
    docstart: str = "-DOCSTART-"
    encoding: str = "utf-8"
    population_std: bool = False

    @property
    def include_dev_in_train(self) -> bool:
        return bool(self.dev_paths)

    def gold_config(self) -> ColumnConfig:
        return ColumnConfig(token_col=self.token_col,
                            gold_col=-1 if self.gold_col is None else self.gold_col,
                            scheme=self.scheme, docstart_marker=self.docstart,
                            encoding=self.encoding)

    def pred_config(self) -> ColumnConfig:
        """Prediction-only files keep their tags in the gold slot of the parsed corpus."""
        return ColumnConfig(token_col=self.token_col,
                            gold_col=-1 if self.pred_col is None else self.pred_col,
                            scheme=self.scheme, docstart_marker=self.docstart,
                            encoding=self.encoding)

    def combined_config(self) -> ColumnConfig:
        return ColumnConfig(token_col=self.token_col,
                            gold_col=-2 if self.gold_col is None else self.gold_col,
                            pred_col=-1 if self.pred_col is None else self.pred_col,
                            scheme=self.scheme, docstart_marker=self.docstart,
                            encoding=self.encoding)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--train", required=True, action="append", metavar="PATH",
                        help="training file (gold tags); repeat to combine several")
    common.add_argument("--test", metavar="PATH", help="test file with gold tags")
    common.add_argument("--include-dev", action="append", default=[], metavar="PATH",
                        help="also count mentions in this development file as seen "
                             "(non-standard)")
    common.add_argument("--scheme", choices=["auto", "iob1", "iob2", "bio", "bioes"],
                        default="auto")
    common.add_argument("--token-col", type=int, default=0, metavar="N")
    common.add_argument("--gold-col", type=int, metavar="N",
                        help="gold tag column (default: last; second-to-last with --combined)")
    common.add_argument("--docstart", default="-DOCSTART-", metavar="MARKER")
    common.add_argument("--encoding", default="utf-8",
                        help="input encoding (CoNLL-2002 Dutch ships as latin-1)")
    common.add_argument("--format", choices=sorted(RENDERERS), default="text")

    ap = argparse.ArgumentParser(prog="tmr", description="Tough Mentions Recall for NER output")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("composition", parents=[common],
                   help="share of test mentions in each unseen/type-confusable subset")
    sub.add_parser("classify", parents=[common],
                   help="list every test mention with its subset labels")
    sc = sub.add_parser("score", parents=[common],
                        help="P/R/F1 and subset recall for one or more prediction files")
    sc.add_argument("--pred", required=True, nargs="+", action="extend", metavar="PATH",
                    help="prediction file(s); several files are treated as runs")
    sc.add_argument("--combined", action="store_true",
                    help="prediction files hold 'token ... gold pred' columns")
    sc.add_argument("--pred-col", type=int, metavar="N",
                    help="predicted tag column (default: last)")
    sc.add_argument("--population-std", action="store_true",
                    help="divide by n instead of n-1 when aggregating runs")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        train_paths=args.train,
        test_gold_path=args.test,
        pred_paths=getattr(args, "pred", None) or [],
        combined_mode=getattr(args, "combined", False),
        scheme=TagScheme.from_name(args.scheme),
        token_col=args.token_col,
        gold_col=args.gold_col,
        pred_col=getattr(args, "pred_col", None),
        output_format=args.format,
        dev_paths=args.include_dev,
        docstart=args.docstart,
        encoding=args.encoding,
        population_std=getattr(args, "population_std", False),
    )


def _train_index(cfg: RunConfig):
    mentions = []
    for path in [*cfg.train_paths, *cfg.dev_paths]:
        mentions.extend(read_conll(path, cfg.gold_config()).mentions())
    return build_train_index(mentions)


def _meta(cfg: RunConfig, test: str | None) -> dict:
    return {
        "train": list(cfg.train_paths),
        "dev_in_train": list(cfg.dev_paths),
        "train_includes_dev": cfg.include_dev_in_train,
        "test": test,
    }


def cmd_composition(cfg: RunConfig) -> dict:
    idx = _train_index(cfg)
    test = read_conll(_require_test(cfg), cfg.gold_config())
    table = composition(assign_subsets(idx, test.mentions()))
    return composition_document(table, _meta(cfg, test.source_name))


def cmd_classify(cfg: RunConfig) -> dict:
    idx = _train_index(cfg)
    test = read_conll(_require_test(cfg), cfg.gold_config())
    return classify_document(assign_subsets(idx, test.mentions()), _meta(cfg, test.source_name))


def cmd_score(cfg: RunConfig) -> dict:
    if not cfg.pred_paths:
        raise InputError("score needs at least one --pred file")
    idx = _train_index(cfg)
    if cfg.combined_mode:
        preds: list[Corpus] = [read_conll(p, cfg.combined_config()) for p in cfg.pred_paths]
        gold = read_conll(cfg.test_gold_path, cfg.gold_config()) if cfg.test_gold_path else preds[0]
        which = "pred"
    else:
        gold = read_conll(_require_test(cfg), cfg.gold_config())
        preds = [read_conll(p, cfg.pred_config()) for p in cfg.pred_paths]
        which = "gold"

    assignment = assign_subsets(idx, gold.mentions())
    reports = []
    for pred in preds:
        if cfg.combined_mode and pred.fingerprint() != gold.fingerprint():
            raise InconsistentRuns(f"{pred.source_name}: gold column differs from {gold.source_name}")
        reports.append(score(gold, pred, assignment, pred_which=which))

    if len(reports) == 1:
        agg = single_run(reports[0])
    else:
        agg = aggregate_runs(RunSet.from_reports(reports), population=cfg.population_std)
    meta = _meta(cfg, gold.source_name)
    meta["predictions"] = list(cfg.pred_paths)
    return score_document(agg, reports, meta)


def _require_test(cfg: RunConfig) -> str:
    if not cfg.test_gold_path:
        raise InputError(f"{cfg.command} needs --test")
    return cfg.test_gold_path


COMMANDS = {"composition": cmd_composition, "classify": cmd_classify, "score": cmd_score}


def run(cfg: RunConfig) -> str:
    doc = COMMANDS[cfg.command](cfg)
    return RENDERERS[cfg.output_format](doc)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        output = run(cfg)
    except InconsistentRuns as e:
        print(f"tmr: inconsistent runs: {e}", file=sys.stderr)
        return EXIT_RUNS
    except InputError as e:
        print(f"tmr: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"tmr: error: {e.filename or ''}: {e.strerror or e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
