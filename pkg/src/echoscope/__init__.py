"""Toolkit for analyzing ideological polarization in news-comment corpora.

Pipeline stages: corpus ingestion -> media clustering -> user leanings ->
co-comment network -> affective response curves -> article classification.
A seeded synthetic-corpus generator provides planted ground truth for
every stage.
"""

from echoscope.corpus import Corpus, load_corpus, corpus_stats
from echoscope.kernels import KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["Corpus", "load_corpus", "corpus_stats", "KERNEL_BACKEND", "__version__"]
