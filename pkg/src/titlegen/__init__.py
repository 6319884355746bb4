"""Extractive paper-title generation toolkit.

Submodules follow the pipeline: ``corpus`` (ingestion and tokenization),
``tagger`` (keyword scoring), ``parts`` (title-part extraction), ``grammar``
(pattern-bank gate), ``scorer`` (title appropriateness), ``arranger``
(permutation search), ``metrics`` (evaluation harness), and ``service``
(HTTP session API). The ``cli`` module exposes all batch commands.
"""

__version__ = "0.1.0"
