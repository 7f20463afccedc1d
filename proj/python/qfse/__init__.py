"""Query-focused summarization exploration toolkit (C++ core)."""

from ._qfse import (
    ArgumentError,
    FormatError,
    IngestError,
    Session,
    StateError,
    aggregate,
    auc,
    bootstrap_ci,
    count_words,
    evaluate,
    generate_benchmark,
    interpolate,
    length_at_score,
    normalize_log,
    pearson_r,
    porter_stem,
    recall_curve,
    rouge,
    rouge_text,
    simulate,
    split_sentences,
    tokenize,
    umux_lite,
)

__all__ = [
    "ArgumentError",
    "FormatError",
    "IngestError",
    "Session",
    "StateError",
    "aggregate",
    "auc",
    "bootstrap_ci",
    "count_words",
    "evaluate",
    "generate_benchmark",
    "interpolate",
    "length_at_score",
    "normalize_log",
    "pearson_r",
    "porter_stem",
    "recall_curve",
    "rouge",
    "rouge_text",
    "simulate",
    "split_sentences",
    "tokenize",
    "umux_lite",
]
