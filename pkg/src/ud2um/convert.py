"""Token and document conversion from UD features to UniMorph descriptions."""

from __future__ import annotations

import hashlib
import warnings
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .conllu import Document, Token
from .languages import language_code
from .mapping import ExcludedPos, MappingTable, base_convert, load_mapping
from .rules import (
    RuleContext,
    RuleSet,
    Trace,
    apply_rules,
    load_rules,
    rules_path,
)
from .schema import POS, DimensionRegistry, UmMsd, canonical_um, default_registry
from .validation import check_document


class _Skipped:
    """Marker for tokens that receive no UniMorph description."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Skipped"

    def __bool__(self) -> bool:
        return False


Skipped = _Skipped()


@dataclass
class ConversionAudit:
    """Counts gathered while converting one or more documents."""

    dropped: Counter = field(default_factory=Counter)
    findings: Counter = field(default_factory=Counter)
    skipped: int = 0
    converted: int = 0

    def update(self, other: "ConversionAudit") -> None:
        self.dropped.update(other.dropped)
        self.findings.update(other.findings)
        self.skipped += other.skipped
        self.converted += other.converted

    def dropped_rows(self) -> list[tuple[str, str, int]]:
        """``(attribute, value, count)``, most frequent first."""
        return [
            (a, v, n)
            for (a, v), n in sorted(self.dropped.items(), key=lambda kv: (-kv[1], kv[0]))
        ]


def token_context(token: Token, language: str, dropped=()) -> RuleContext:
    return RuleContext(
        language=language,
        upos=token.upos,
        form=token.form,
        lemma=token.lemma,
        ud_pairs=token.ud.pairs,
        dropped=tuple(dropped),
    )


def convert_token(token: Token, language: str, table: MappingTable, rules: RuleSet,
                  registry: DimensionRegistry | None = None,
                  trace: Trace | None = None):
    """UniMorph description for one token, or ``Skipped``.

    Multiword ranges and parts of speech without a UniMorph counterpart are
    skipped. ``trace.consumed`` ends up holding the UD pairs that rules used.
    """
    return _convert(token, language, table, rules, registry, trace)[0]


def _convert(token, language, table, rules, registry, trace):
    if token.is_range:
        return Skipped, []
    ud = token.ud
    try:
        proposal, dropped = base_convert(ud.upos, ud, table)
    except ExcludedPos:
        return Skipped, []
    ctx = token_context(token, language, dropped)
    return apply_rules(proposal, ctx, rules, registry, trace), dropped


def render_feats(msd: UmMsd, strip_pos: bool = False,
                 registry: DimensionRegistry | None = None) -> str:
    if strip_pos:
        registry = registry or default_registry()
        msd = UmMsd(a for a in msd.atoms if registry.dimension_of(a) != POS)
    return canonical_um(msd, registry)


def convert_document(doc: Document, language: str, table: MappingTable, rules: RuleSet,
                     strip_pos: bool = False,
                     registry: DimensionRegistry | None = None):
    """Rewrite FEATS of every word with its UniMorph description.

    Skipped words get ``_``; multiword ranges are left untouched. Returns the
    new document and a :class:`ConversionAudit`.
    """
    audit = ConversionAudit()

    def convert(token: Token) -> Token:
        if token.is_range:
            return token
        trace = Trace()
        msd, dropped = _convert(token, language, table, rules, registry, trace)
        if msd is Skipped:
            audit.skipped += 1
            return token.with_feats("_")
        audit.converted += 1
        for pair in dropped:
            if pair not in trace.consumed:
                audit.dropped[pair] += 1
        for finding in trace.findings:
            audit.findings[(finding.kind, finding.message)] += 1
        return token.with_feats(render_feats(msd, strip_pos, registry))

    return doc.map_tokens(convert), audit


def file_hash(path) -> str:
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


class UniMorphConverter(TransformerMixin, BaseEstimator):
    """Convert CoNLL-U documents from UD features to UniMorph descriptions.

    Parameters
    ----------
    language : str
        Language code, name or UD treebank name; selects the rules file.
    mapping : str or None
        Mapping file; ``None`` uses the shipped table.
    rules : str or None
        A rules file or a directory of ``<lang>.rules`` files; ``None`` uses
        the shipped rules.
    csv_only : bool
        Skip post-editing and keep the plain lookup result.
    strip_pos : bool
        Leave the part of speech out of FEATS.
    """

    def __init__(self, language="es", mapping=None, rules=None, csv_only=False, strip_pos=False):
        self.language = language
        self.mapping = mapping
        self.rules = rules
        self.csv_only = csv_only
        self.strip_pos = strip_pos

    def fit(self, X=None, y=None):
        """Load the mapping table and rules; ``X`` is ignored."""
        self.language_ = language_code(self.language)
        self.registry_ = default_registry()
        self.mapping_ = load_mapping(self.mapping, self.registry_)
        if self.mapping is None:
            data = resources.files("ud2um.data").joinpath("mapping.tsv").read_bytes()
            self.mapping_hash_ = hashlib.sha256(data).hexdigest()
        else:
            self.mapping_hash_ = file_hash(self.mapping)
        self.rules_file_ = None
        if not self.csv_only:
            if self.rules is not None and Path(self.rules).is_file():
                self.rules_file_ = Path(self.rules)
            else:
                self.rules_file_ = rules_path(self.language_, self.rules)
            if self.rules_file_ is None:
                warnings.warn(f"no rules file for language {self.language_!r}; "
                              "using the empty rule set", stacklevel=2)
        if self.rules_file_ is None:
            self.rules_ = RuleSet()
        else:
            self.rules_ = load_rules(self.rules_file_, self.registry_)
        self.audit_ = ConversionAudit()
        return self

    def convert(self, X):
        """Like :meth:`transform` but also returns the audit of this call."""
        check_is_fitted(self, "mapping_")
        doc = check_document(X)
        out, audit = convert_document(doc, self.language_, self.mapping_, self.rules_,
                                      self.strip_pos, self.registry_)
        self.audit_.update(audit)
        return out, audit

    def transform(self, X):
        return self.convert(X)[0]

    def convert_token(self, token: Token):
        check_is_fitted(self, "mapping_")
        return convert_token(token, self.language_, self.mapping_, self.rules_, self.registry_)
