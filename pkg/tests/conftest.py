import pytest

from titlegen import datagen, devparser
from titlegen.arranger import ModelBundle
from titlegen.corpus import build_vocab, make_training_pairs
from titlegen.grammar import CallableParserAdapter, collect_patterns
from titlegen.scorer import build_training_set, train_scorer
from titlegen.tagger import ModelBackend, train_tagger


def build_bundle(n_records=80, seed=42, parser=None) -> ModelBundle:
    """Train a small but fully functional model bundle on synthetic data."""
    records = datagen.make_corpus(n_records, seed=seed, embed_full_title=False)
    vocab = build_vocab(records, max_size=2000)
    tagger_model = train_tagger([make_training_pairs(r, vocab) for r in records])
    scorer_model = train_scorer(build_training_set(records, seed=seed))
    adapter = parser or CallableParserAdapter(devparser.parse_title)
    bank, _ = collect_patterns([r.title for r in records], adapter)
    return ModelBundle(
        vocab=vocab,
        tagger=ModelBackend(tagger_model),
        scorer=scorer_model,
        bank=bank,
        parser=adapter,
    )


@pytest.fixture(scope="session")
def shared_bundle() -> ModelBundle:
    return build_bundle()
