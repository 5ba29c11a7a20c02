"""Lossless CoNLL-U reading and writing.

Every column is kept as the exact source string so that an untouched document
serializes back byte-for-byte. Only FEATS is ever rewritten by conversion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .schema import MalformedFeats as _FeatsError
from .schema import UdMsd, parse_ud_feats

COLUMNS = ("id", "form", "lemma", "upos", "xpos", "feats", "head", "deprel", "deps", "misc")

_WORD_ID = re.compile(r"[1-9][0-9]*")
_RANGE_ID = re.compile(r"([1-9][0-9]*)-([1-9][0-9]*)")
_EMPTY_ID = re.compile(r"(0|[1-9][0-9]*)\.([1-9][0-9]*)")
# A converted FEATS column: ";"-joined atoms, or "_".
_UM_FEATS = re.compile(r"[^;|=\s]+(;[^;|=\s]+)*")
FEATS_SCHEMAS = ("ud", "unimorph")


class ConlluError(ValueError):
    def __init__(self, line: int, cause: str):
        super().__init__(f"line {line}: {cause}")
        self.line = line
        self.cause = cause


class WrongColumnCount(ConlluError):
    pass


class MalformedFeats(ConlluError):
    pass


class MalformedId(ConlluError):
    pass


class MalformedLine(ConlluError):
    pass


@dataclass(frozen=True)
class Token:
    id: str
    form: str
    lemma: str
    upos: str
    xpos: str
    feats: str
    head: str
    deprel: str
    deps: str
    misc: str

    @classmethod
    def from_line(cls, line: str, lineno: int = 0, feats: str = "ud") -> "Token":
        """Parse one token line; ``feats`` names the schema FEATS is checked against."""
        fields = line.split("\t")
        if len(fields) != 10:
            raise WrongColumnCount(lineno, f"expected 10 tab-separated columns, found {len(fields)}")
        tok = cls(*fields)
        if not (_WORD_ID.fullmatch(tok.id) or _RANGE_ID.fullmatch(tok.id) or _EMPTY_ID.fullmatch(tok.id)):
            raise MalformedId(lineno, f"invalid token id {tok.id!r}")
        if tok.is_range:
            start, end = map(int, _RANGE_ID.fullmatch(tok.id).groups())
            if end <= start:
                raise MalformedId(lineno, f"empty multiword range {tok.id!r}")
            if tok.feats != "_":
                raise MalformedFeats(lineno, "multiword range token must have FEATS '_'")
        elif feats == "unimorph":
            if tok.feats != "_" and not _UM_FEATS.fullmatch(tok.feats):
                raise MalformedFeats(lineno, f"FEATS {tok.feats!r} is not a UniMorph description")
        else:
            try:
                parse_ud_feats(tok.feats)
            except _FeatsError as e:
                raise MalformedFeats(lineno, str(e)) from None
        return tok

    def to_line(self) -> str:
        return "\t".join(getattr(self, c) for c in COLUMNS)

    @property
    def is_range(self) -> bool:
        return "-" in self.id

    @property
    def is_empty_node(self) -> bool:
        return "." in self.id

    @property
    def ud(self) -> UdMsd:
        return UdMsd.parse(self.upos, self.feats)

    def with_feats(self, feats: str) -> "Token":
        return replace(self, feats=feats)


@dataclass(frozen=True)
class Sentence:
    comments: tuple[str, ...] = ()
    tokens: tuple[Token, ...] = ()

    @property
    def words(self) -> list[Token]:
        """Syntactic words and empty nodes, without multiword ranges."""
        return [t for t in self.tokens if not t.is_range]

    def to_text(self) -> str:
        return "\n".join([*self.comments, *(t.to_line() for t in self.tokens)])


@dataclass(frozen=True)
class Document:
    sentences: tuple[Sentence, ...] = ()
    final_newline: bool = True
    trailing_blank: bool = True

    def __iter__(self):
        return iter(self.sentences)

    def __len__(self) -> int:
        return len(self.sentences)

    def tokens(self):
        for sent in self.sentences:
            yield from sent.tokens

    def words(self):
        for sent in self.sentences:
            yield from sent.words

    def map_tokens(self, fn) -> "Document":
        """New document with ``fn`` applied to every token; layout is kept."""
        sents = tuple(
            replace(s, tokens=tuple(fn(t) for t in s.tokens)) for s in self.sentences
        )
        return replace(self, sentences=sents)


def _check_ids(tokens: list[Token], linenos: list[int]) -> None:
    expected = 1
    for tok, lineno in zip(tokens, linenos):
        if tok.is_range or tok.is_empty_node:
            continue
        if int(tok.id) != expected:
            raise MalformedId(lineno, f"expected word id {expected}, found {tok.id}")
        expected += 1


def parse_document(text: str, feats: str = "ud") -> Document:
    """Parse CoNLL-U text.

    ``feats="unimorph"`` reads converted files, whose FEATS hold UniMorph
    descriptions instead of UD pairs.
    """
    if feats not in FEATS_SCHEMAS:
        raise ValueError(f"feats must be one of {FEATS_SCHEMAS}, got {feats!r}")
    if not text:
        return Document((), final_newline=False, trailing_blank=False)
    final_newline = text.endswith("\n")
    body = text[:-1] if final_newline else text
    trailing_blank = final_newline and body.endswith("\n")

    sentences: list[Sentence] = []
    comments: list[str] = []
    tokens: list[Token] = []
    linenos: list[int] = []

    def flush():
        if comments or tokens:
            _check_ids(tokens, linenos)
            sentences.append(Sentence(tuple(comments), tuple(tokens)))
        comments.clear()
        tokens.clear()
        linenos.clear()

    for lineno, line in enumerate(body.split("\n"), 1):
        if line == "":
            flush()
        elif line.startswith("#"):
            if tokens:
                raise MalformedLine(lineno, "comment line after token lines")
            comments.append(line)
        else:
            tokens.append(Token.from_line(line, lineno, feats))
            linenos.append(lineno)
    flush()
    return Document(tuple(sentences), final_newline, trailing_blank)


def serialize_document(doc: Document) -> str:
    body = "\n\n".join(s.to_text() for s in doc.sentences)
    if doc.trailing_blank:
        return body + "\n\n"
    if doc.final_newline:
        return body + "\n"
    return body


def read_document(path: str | Path, feats: str = "ud") -> Document:
    with open(path, encoding="utf-8", newline="") as f:
        return parse_document(f.read(), feats)


def write_document(doc: Document, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(serialize_document(doc))
