"""Lexicon + suffix-backoff morphological tagger and attribute-value F1.

The tagger is a deterministic baseline: a known form gets its most frequent
training tag, an unknown form the tag of its longest known suffix, anything
else the corpus majority tag. It works on either annotation schema so the
same corpus can be scored before and after conversion.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .conllu import Document, Token
from .schema import (
    POS,
    DimensionRegistry,
    UmMsd,
    canonical_um,
    default_registry,
    parse_ud_feats,
    render_ud_feats,
)
from .validation import check_aligned, check_document

SCHEMAS = ("ud", "unimorph")


class EmptyCorpus(ValueError):
    pass


def _canonical_feats(feats: str, schema: str) -> str:
    if feats == "_":
        return "_"
    if schema == "ud":
        return render_ud_feats(parse_ud_feats(feats))
    return canonical_um(UmMsd.parse(feats))


def _majority(counts: Counter) -> tuple[str, str]:
    # Highest count wins; ties go to the lexicographically smallest tag.
    return min(counts, key=lambda tag: (-counts[tag], "\t".join(tag)))


class SuffixBackoffTagger(BaseEstimator):
    """Predict ``(UPOS, FEATS)`` per word.

    Parameters
    ----------
    suffix_k : int
        Longest suffix length kept for backoff.
    schema : {"ud", "unimorph"}
        Annotation schema of the FEATS column.
    """

    def __init__(self, suffix_k=4, schema="ud"):
        self.suffix_k = suffix_k
        self.schema = schema

    def fit(self, X, y=None):
        if self.schema not in SCHEMAS:
            raise ValueError(f"schema must be one of {SCHEMAS}, got {self.schema!r}")
        if self.suffix_k < 1:
            raise ValueError("suffix_k must be at least 1")
        doc = check_document(X, self.schema)
        by_form: dict[str, Counter] = defaultdict(Counter)
        by_suffix: list[dict[str, Counter]] = [defaultdict(Counter) for _ in range(self.suffix_k)]
        overall: Counter = Counter()
        for tok in doc.words():
            tag = (tok.upos, _canonical_feats(tok.feats, self.schema))
            by_form[tok.form][tag] += 1
            overall[tag] += 1
            for k in range(1, self.suffix_k + 1):
                if len(tok.form) >= k:
                    by_suffix[k - 1][tok.form[-k:]][tag] += 1
        if not overall:
            raise EmptyCorpus("training corpus has no words")
        self.lexicon_ = {form: _majority(c) for form, c in by_form.items()}
        self.lexicon_counts_ = {form: c[self.lexicon_[form]] for form, c in by_form.items()}
        self.suffix_tables_ = [
            {suffix: _majority(c) for suffix, c in table.items()} for table in by_suffix
        ]
        self.default_ = _majority(overall)
        return self

    def tag_form(self, form: str) -> tuple[str, str]:
        check_is_fitted(self, "lexicon_")
        if form in self.lexicon_:
            return self.lexicon_[form]
        for k in range(min(self.suffix_k, len(form)), 0, -1):
            tag = self.suffix_tables_[k - 1].get(form[-k:])
            if tag is not None:
                return tag
        return self.default_

    def predict(self, X) -> Document:
        doc = check_document(X, self.schema)

        def tag(tok: Token) -> Token:
            if tok.is_range:
                return tok
            upos, feats = self.tag_form(tok.form)
            return replace(tok, upos=upos, feats=feats)

        return doc.map_tokens(tag)

    def score(self, X, y=None) -> float:
        gold = check_document(X, self.schema)
        return evaluate_f1(gold, self.predict(gold), self.schema).macro_f1


# ---------------------------------------------------------------------------
# Evaluation


@dataclass(frozen=True)
class PairScore:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass
class F1Report:
    schema: str
    pairs: dict[tuple[str, str], PairScore] = field(default_factory=dict)

    def _macro(self, with_pos: bool) -> float:
        scores = [s.f1 for (attr, _), s in self.pairs.items()
                  if s.tp + s.fn > 0 and (with_pos or attr != POS)]
        return sum(scores) / len(scores) if scores else 0.0

    @property
    def macro_f1(self) -> float:
        """Unweighted mean F1 over pairs that occur in gold."""
        return self._macro(with_pos=True)

    @property
    def macro_f1_without_pos(self) -> float:
        return self._macro(with_pos=False)

    def rows(self) -> list[list[str]]:
        out = []
        for (attr, val), s in sorted(self.pairs.items()):
            out.append([self.schema, attr, val, str(s.tp), str(s.fp), str(s.fn),
                        f"{s.precision:.4f}", f"{s.recall:.4f}", f"{s.f1:.4f}"])
        return out


def token_pairs(tok: Token, schema: str, registry: DimensionRegistry | None = None) -> set[tuple[str, str]]:
    """Attribute-value pairs of one word; the part of speech is keyed ``POS``.

    UniMorph atoms are keyed by their registry dimension, so language-specific
    atoms land under ``LanguageSpecific``.
    """
    if schema == "ud":
        return {(POS, tok.upos), *parse_ud_feats(tok.feats)}
    registry = registry or default_registry()
    msd = UmMsd.parse(tok.feats)
    pairs = {(registry.dimension_of(a), a) for a in msd.atoms}
    if not any(dim == POS for dim, _ in pairs):
        pairs.add((POS, tok.upos))
    return pairs


def evaluate_f1(gold: Document, predicted: Document, schema: str = "ud",
                registry: DimensionRegistry | None = None) -> F1Report:
    check_aligned(gold, predicted)
    tp: Counter = Counter()
    fp: Counter = Counter()
    fn: Counter = Counter()
    for g, p in zip(gold.words(), predicted.words()):
        gp, pp = token_pairs(g, schema, registry), token_pairs(p, schema, registry)
        for pair in gp & pp:
            tp[pair] += 1
        for pair in pp - gp:
            fp[pair] += 1
        for pair in gp - pp:
            fn[pair] += 1
    keys = set(tp) | set(fp) | set(fn)
    return F1Report(schema, {k: PairScore(tp[k], fp[k], fn[k]) for k in keys})


F1_COLUMNS = ["schema", "attribute", "value", "tp", "fp", "fn", "precision", "recall", "f1"]


def format_f1_text(report: F1Report) -> str:
    lines = [f"schema {report.schema}",
             f"macro F1 (with POS)    {report.macro_f1:.4f}",
             f"macro F1 (without POS) {report.macro_f1_without_pos:.4f}",
             f"{'attribute':<18}{'value':<12}{'P':>8}{'R':>8}{'F1':>8}"]
    for (attr, val), s in sorted(report.pairs.items()):
        if s.tp + s.fn:
            lines.append(f"{attr:<18}{val:<12}{s.precision:>8.4f}{s.recall:>8.4f}{s.f1:>8.4f}")
    return "\n".join(lines) + "\n"
