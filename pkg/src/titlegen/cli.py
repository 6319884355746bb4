"""Command-line interface: a thin client over the package.

Subcommands: train-tagger, train-scorer, build-bank, generate, bench,
coverage, eval-ratio, serve. Exit codes: 0 success, 1 validation/usage
error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import bundle as bundle_mod
from . import corpus as corpus_mod
from . import grammar as grammar_mod
from . import metrics as metrics_mod
from . import scorer as scorer_mod
from . import tagger as tagger_mod
from .arranger import generate_from_abstract

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract is exit 1
    def error(self, message: str):  # noqa: D102
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _build_parser() -> _Parser:
    parser = _Parser(prog="titlegen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train-tagger", help="build a vocabulary and train the keyword model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="model directory to write vocab.txt and tagger.json")
    p.add_argument("--vocab-size", type=int, default=4000)
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser("train-scorer", help="train the title appropriateness scorer")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="model directory to write scorer.json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.7)

    p = sub.add_parser("build-bank", help="collect grammar patterns into a bank")
    p.add_argument("--out", required=True, help="model directory to write bank.txt")
    p.add_argument("--trees", help="file of bracketed trees, one per line")
    p.add_argument("--corpus", help="corpus whose titles are parsed via --parser-cmd")
    p.add_argument("--parser-cmd", help="external parser command (line protocol)")

    p = sub.add_parser("generate", help="generate title candidates for one abstract")
    p.add_argument("--abstract-file", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--parser-cmd", help="override the configured parser command")

    p = sub.add_parser("bench", help="benchmark against sentence-extraction baselines")
    p.add_argument("--corpus", required=True)
    p.add_argument("--systems", default="ours,lexrank,textrank")
    p.add_argument("--out", required=True, help="CSV report path")
    p.add_argument("--models", help="model directory (needed for the 'ours' system)")

    p = sub.add_parser("coverage", help="fraction of title words present in their abstracts")
    p.add_argument("--corpus", required=True)

    p = sub.add_parser("eval-ratio", help="appropriateness ratio on real vs shuffled titles")
    p.add_argument("--corpus", required=True)
    p.add_argument("--models", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--models", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", help="static directory for the web client")
    p.add_argument("--snapshot", help="JSON file for session snapshots on shutdown")
    p.add_argument("--parser-cmd", help="override the configured parser command")

    return parser


def _parser_override(cmd: str | None) -> grammar_mod.ParserAdapter | None:
    return grammar_mod.CommandParserAdapter(cmd.split()) if cmd else None


def _cmd_train_tagger(args) -> int:
    records = corpus_mod.load_corpus(args.corpus)
    if not records:
        print("corpus is empty", file=sys.stderr)
        return EXIT_VALIDATION
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    vocab = corpus_mod.build_vocab(records, max_size=args.vocab_size)
    pairs = [corpus_mod.make_training_pairs(r, vocab) for r in records]
    model = tagger_mod.train_tagger(pairs, alpha=args.alpha)
    corpus_mod.save_vocab(vocab, out / bundle_mod.VOCAB_FILE)
    tagger_mod.save_tagger(model, out / bundle_mod.TAGGER_FILE)
    print(f"trained keyword model on {len(records)} records -> {out}")
    return EXIT_OK


def _cmd_train_scorer(args) -> int:
    records = corpus_mod.load_corpus(args.corpus)
    if not records:
        print("corpus is empty", file=sys.stderr)
        return EXIT_VALIDATION
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    items = scorer_mod.build_training_set(records, seed=args.seed)
    model = scorer_mod.train_scorer(items, lam=args.lam)
    scorer_mod.save_scorer(model, out / bundle_mod.SCORER_FILE)
    print(
        f"trained scorer on {len(items)} items "
        f"(a={model.calibration_a}, b={model.calibration_b}) -> {out}"
    )
    return EXIT_OK


def _cmd_build_bank(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.trees:
        lines = Path(args.trees).read_text(encoding="utf-8").splitlines()
        trees = [grammar_mod.parse_bracketed(ln) for ln in lines if ln.strip()]
        bank = grammar_mod.build_bank(trees)
        skipped = 0
    elif args.corpus:
        records = corpus_mod.load_corpus(args.corpus)
        adapter = _parser_override(args.parser_cmd) or bundle_mod.default_parser()
        bank, skipped = grammar_mod.collect_patterns([r.title for r in records], adapter)
    else:
        print("build-bank needs --trees or --corpus", file=sys.stderr)
        return EXIT_VALIDATION
    grammar_mod.save_bank(bank, out / bundle_mod.BANK_FILE)
    note = f", {skipped} titles skipped" if skipped else ""
    print(f"bank of {len(bank.patterns)} patterns from {bank.source_count} titles{note} -> {out}")
    return EXIT_OK


def _cmd_generate(args) -> int:
    abstract = Path(args.abstract_file).read_text(encoding="utf-8").strip()
    if not abstract:
        print("abstract file is empty", file=sys.stderr)
        return EXIT_VALIDATION
    loaded = bundle_mod.load_model_dir(args.models, parser=_parser_override(args.parser_cmd))
    result = generate_from_abstract(abstract, loaded.bundle, loaded.config)
    payload = {
        "parts": [p.text for p in result.parts],
        "used_fallback": result.used_fallback,
        "candidates": [
            {"text": c.text, "score": c.score, "grammar_ok": c.grammar_ok}
            for c in result.candidates[: args.top]
        ],
    }
    print(json.dumps(payload, indent=2, ensure_ascii=False))
    return EXIT_OK


def _cmd_bench(args) -> int:
    records = corpus_mod.load_corpus(args.corpus)
    names = [n.strip() for n in args.systems.split(",") if n.strip()]
    systems: list[metrics_mod.TitleSystem] = []
    for name in names:
        if name == "ours":
            if not args.models:
                print("the 'ours' system needs --models", file=sys.stderr)
                return EXIT_VALIDATION
            loaded = bundle_mod.load_model_dir(args.models)

            def ours(record, _loaded=loaded):
                result = generate_from_abstract(record.abstract_text, _loaded.bundle, _loaded.config)
                return result.candidates[0].text

            systems.append(("ours", ours))
        elif name == "lexrank":
            systems.append(("lexrank", lambda r: metrics_mod.lexrank_summary(list(r.abstract_sentences))))
        elif name == "textrank":
            systems.append(("textrank", lambda r: metrics_mod.textrank_summary(list(r.abstract_sentences))))
        else:
            print(f"unknown system {name!r}", file=sys.stderr)
            return EXIT_VALIDATION
    reports = metrics_mod.benchmark(records, systems)
    metrics_mod.write_report_csv(reports, args.out)
    print(metrics_mod.format_report_table(reports))
    print(f"report written to {args.out}")
    return EXIT_OK


def _cmd_coverage(args) -> int:
    records = corpus_mod.load_corpus(args.corpus)
    print(f"{corpus_mod.title_coverage(records):.6f}")
    return EXIT_OK


def _cmd_eval_ratio(args) -> int:
    records = corpus_mod.load_corpus(args.corpus)
    loaded = bundle_mod.load_model_dir(args.models)
    model = loaded.bundle.scorer
    real = [r.title for r in records]
    shuffled = []
    for i, rec in enumerate(records):
        try:
            shuffled.append(corpus_mod.make_eval_negatives(rec, seed=args.seed + i).shuffled_title)
        except ValueError:
            continue
    ratio_real = scorer_mod.appropriateness_ratio(model, real, threshold=args.threshold)
    print(f"real      {ratio_real:.4f}  ({len(real)} titles)")
    if shuffled:
        ratio_shuffled = scorer_mod.appropriateness_ratio(model, shuffled, threshold=args.threshold)
        print(f"shuffled  {ratio_shuffled:.4f}  ({len(shuffled)} titles)")
        print(f"margin    {ratio_real - ratio_shuffled:+.4f}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    loaded = bundle_mod.load_model_dir(args.models, parser=_parser_override(args.parser_cmd))
    app = create_app(
        loaded.bundle,
        loaded.config,
        request_timeout=loaded.request_timeout,
        snapshot_path=args.snapshot,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


_COMMANDS = {
    "train-tagger": _cmd_train_tagger,
    "train-scorer": _cmd_train_scorer,
    "build-bank": _cmd_build_bank,
    "generate": _cmd_generate,
    "bench": _cmd_bench,
    "coverage": _cmd_coverage,
    "eval-ratio": _cmd_eval_ratio,
    "serve": _cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
