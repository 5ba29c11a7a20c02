"""Input checks shared by the estimators."""

from __future__ import annotations

from pathlib import Path

from .conllu import Document, parse_document, read_document


class AlignmentError(ValueError):
    """Gold and predicted documents do not share a token skeleton."""


def check_document(X, feats: str = "ud") -> Document:
    """Accept a Document, CoNLL-U text, or a path to a CoNLL-U file.

    ``feats`` is the schema of the FEATS column when ``X`` still has to be parsed.
    """
    if isinstance(X, Document):
        return X
    if isinstance(X, Path):
        return read_document(X, feats)
    if isinstance(X, str):
        if "\t" in X or "\n" in X or X == "":
            return parse_document(X, feats)
        return read_document(X, feats)
    raise TypeError(f"expected a Document, CoNLL-U text or a path, got {type(X).__name__}")


def check_aligned(gold: Document, predicted: Document) -> None:
    g = [(t.id, t.form) for t in gold.words()]
    p = [(t.id, t.form) for t in predicted.words()]
    if len(g) != len(p):
        raise AlignmentError(f"gold has {len(g)} words, prediction has {len(p)}")
    for i, (a, b) in enumerate(zip(g, p)):
        if a != b:
            raise AlignmentError(f"word {i}: gold {a} vs predicted {b}")
