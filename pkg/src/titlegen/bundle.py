"""Model-directory layout and loading.

A model directory holds everything the pipeline needs::

    vocab.txt    subword vocabulary (max_piece_len header + one entry/line)
    tagger.json  keyword model counts
    scorer.json  title scorer counts and calibration
    bank.txt     grammar pattern bank (source_count header + patterns)
    config.json  optional: generation constants and the parser adapter

``config.json`` keys (all optional): ``eval_threshold``, ``max_parts``,
``base_keyword_threshold``, ``part_range``, ``request_timeout``, and
``parser`` as ``{"command": [...]}`` or ``{"tree_file": "..."}``. Without a
parser entry the built-in naive chunker is used, which is fine for demos but
no substitute for a real constituency parser.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import devparser
from .arranger import GenerationConfig, ModelBundle
from .corpus import load_vocab
from .grammar import (
    CallableParserAdapter,
    CommandParserAdapter,
    ParserAdapter,
    TreeFileParserAdapter,
    load_bank,
)
from .scorer import load_scorer
from .tagger import ModelBackend, load_tagger

logger = logging.getLogger(__name__)

VOCAB_FILE = "vocab.txt"
TAGGER_FILE = "tagger.json"
SCORER_FILE = "scorer.json"
BANK_FILE = "bank.txt"
CONFIG_FILE = "config.json"


@dataclass
class LoadedModels:
    bundle: ModelBundle
    config: GenerationConfig
    request_timeout: float = 60.0


def default_parser() -> ParserAdapter:
    return CallableParserAdapter(devparser.parse_title)


def _parser_from_spec(spec: dict | None) -> ParserAdapter | None:
    if not spec:
        return None
    if "command" in spec:
        return CommandParserAdapter(spec["command"])
    if "tree_file" in spec:
        return TreeFileParserAdapter(spec["tree_file"])
    raise ValueError(f"unrecognized parser spec {spec!r}")


def load_model_dir(path: str | Path, parser: ParserAdapter | None = None) -> LoadedModels:
    """Load all models from a directory; an explicit ``parser`` overrides the
    one configured in config.json."""
    root = Path(path)
    if not root.is_dir():
        raise FileNotFoundError(f"model directory {root} does not exist")
    raw: dict = {}
    config_path = root / CONFIG_FILE
    if config_path.exists():
        raw = json.loads(config_path.read_text(encoding="utf-8"))

    config = GenerationConfig(
        eval_threshold=float(raw.get("eval_threshold", 0.5)),
        max_parts=int(raw.get("max_parts", 8)),
        base_keyword_threshold=float(raw.get("base_keyword_threshold", -0.5)),
        part_range=tuple(raw.get("part_range", (3, 6))),  # type: ignore[arg-type]
    )
    if parser is None:
        parser = _parser_from_spec(raw.get("parser"))
    if parser is None:
        logger.warning(
            "no parser configured in %s; using the built-in naive chunker", config_path
        )
        parser = default_parser()

    bundle = ModelBundle(
        vocab=load_vocab(root / VOCAB_FILE),
        tagger=ModelBackend(load_tagger(root / TAGGER_FILE)),
        scorer=load_scorer(root / SCORER_FILE),
        bank=load_bank(root / BANK_FILE),
        parser=parser,
    )
    return LoadedModels(
        bundle=bundle, config=config, request_timeout=float(raw.get("request_timeout", 60.0))
    )
