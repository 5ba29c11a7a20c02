"""Token-level recall of converted descriptions against a paradigm table."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .conllu import Document
from .schema import DimensionRegistry, UmMsd, canonical_um, default_registry
from .unimorph import ParadigmTable, pos_family

LOW_OVERLAP_PAIRS = 250


@dataclass
class RecallReport:
    language: str
    overlapping_tokens: int = 0
    matches: int = 0
    overlapping_pairs: int = 0
    overlapping_types: int = 0
    type_matches: int = 0
    near_misses: int = 0
    per_pos: dict[str, list[int]] = field(default_factory=dict)
    table_hash: str | None = None

    @property
    def recall(self) -> float | None:
        """Percentage; ``None`` when nothing overlaps."""
        if not self.overlapping_tokens:
            return None
        return 100.0 * self.matches / self.overlapping_tokens

    @property
    def type_recall(self) -> float | None:
        if not self.overlapping_types:
            return None
        return 100.0 * self.type_matches / self.overlapping_types

    @property
    def low_overlap(self) -> bool:
        return self.overlapping_pairs < LOW_OVERLAP_PAIRS

    def add(self, pos: str, matched: bool) -> None:
        self.overlapping_tokens += 1
        self.matches += matched
        counts = self.per_pos.setdefault(pos, [0, 0])
        counts[0] += 1
        counts[1] += matched


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def _candidates(converted: Document, table: ParadigmTable, registry: DimensionRegistry):
    """Yield ``(lemma, form, msd, pos_family)`` for words the table can judge."""
    families = table.pos_families(registry)
    for tok in converted.words():
        if tok.feats == "_":
            continue
        msd = UmMsd.parse(tok.feats)
        pos = msd.pos(registry)
        if pos is None or pos_family(pos) not in families:
            continue
        yield tok.lemma, tok.form, msd, pos_family(pos)


def evaluate_recall(converted: Document, table: ParadigmTable,
                    registry: DimensionRegistry | None = None) -> RecallReport:
    """Share of overlapping tokens whose description matches any attested one.

    Words with ``_`` FEATS (skipped parts of speech) and parts of speech the
    table never annotates stay out of the denominator. No partial credit.
    """
    registry = registry or default_registry()
    report = RecallReport(table.language, table_hash=table.content_hash)
    pairs = set()
    types: dict[tuple[str, str, UmMsd], bool] = {}
    for lemma, form, msd, pos in _candidates(converted, table, registry):
        attested = table.lookup(lemma, form)
        if not attested:
            report.near_misses += table.near_miss(lemma, form)
            continue
        matched = msd in attested
        report.add(pos, matched)
        pairs.add((lemma, form))
        types[(lemma, form, msd)] = matched
    report.overlapping_pairs = len(pairs)
    report.overlapping_types = len(types)
    report.type_matches = sum(types.values())
    return report


@dataclass(frozen=True)
class DimensionDiff:
    dimension: str
    kind: str  # missing, extra or substituted
    converted: tuple[str, ...]
    attested: tuple[str, ...]

    def __str__(self) -> str:
        if self.kind == "missing":
            return f"missing:{self.dimension}={'+'.join(self.attested)}"
        if self.kind == "extra":
            return f"extra:{self.dimension}={'+'.join(self.converted)}"
        return f"substituted:{self.dimension}={'+'.join(self.converted)}>{'+'.join(self.attested)}"


@dataclass(frozen=True)
class DiscrepancyRecord:
    lemma: str
    form: str
    converted: str
    attested: tuple[str, ...]
    diff: tuple[DimensionDiff, ...]
    count: int

    @property
    def signature(self) -> str:
        """Dimension-level shape of the miss, e.g. ``missing:Gender``."""
        return ";".join(f"{d.kind}:{d.dimension}" for d in self.diff)

    def row(self) -> list[str]:
        return [self.lemma, self.form, self.converted, " | ".join(self.attested),
                "; ".join(map(str, self.diff)), str(self.count)]


def dimension_diff(converted: UmMsd, attested: UmMsd,
                   registry: DimensionRegistry | None = None) -> tuple[DimensionDiff, ...]:
    registry = registry or default_registry()
    conv = converted.by_dimension(registry)
    gold = attested.by_dimension(registry)
    out = []
    for dim in sorted(set(conv) | set(gold)):
        c, g = conv.get(dim, frozenset()), gold.get(dim, frozenset())
        if c == g:
            continue
        kind = "missing" if not c else "extra" if not g else "substituted"
        out.append(DimensionDiff(dim, kind, tuple(sorted(c)), tuple(sorted(g))))
    return tuple(out)


def _closest(msd: UmMsd, attested, registry) -> UmMsd:
    return min(attested, key=lambda a: (len(msd.atoms ^ a.atoms), canonical_um(a, registry)))


def audit_discrepancies(converted: Document, table: ParadigmTable,
                        registry: DimensionRegistry | None = None) -> list[DiscrepancyRecord]:
    """One record per distinct (lemma, form, converted) miss, most frequent first.

    The diff is taken against the closest attested description.
    """
    registry = registry or default_registry()
    misses: Counter = Counter()
    for lemma, form, msd, _ in _candidates(converted, table, registry):
        attested = table.lookup(lemma, form)
        if attested and msd not in attested:
            misses[(lemma, form, msd)] += 1
    records = []
    for (lemma, form, msd), n in misses.items():
        attested = table.lookup(lemma, form)
        target = _closest(msd, attested, registry)
        records.append(DiscrepancyRecord(
            lemma, form, canonical_um(msd, registry),
            tuple(sorted(canonical_um(a, registry) for a in attested)),
            dimension_diff(msd, target, registry), n,
        ))
    records.sort(key=lambda r: (-r.count, r.lemma, r.form, r.converted))
    return records


def summarize_discrepancies(records: list[DiscrepancyRecord]) -> list[tuple[str, int]]:
    """Token counts per diff signature, most frequent first."""
    totals: Counter = Counter()
    for rec in records:
        totals[rec.signature] += rec.count
    return sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))


# ---------------------------------------------------------------------------
# Output

REPORT_COLUMNS = ["language", "overlap", "matches", "recall", "low_overlap",
                  "overlap_pairs", "type_recall", "near_misses", "table_hash"]
AUDIT_COLUMNS = ["lemma", "form", "converted", "attested", "diff", "count"]


def report_rows(report: RecallReport) -> list[list[str]]:
    return [[report.language, str(report.overlapping_tokens), str(report.matches),
             _fmt(report.recall), str(report.low_overlap).lower(),
             str(report.overlapping_pairs), _fmt(report.type_recall),
             str(report.near_misses), report.table_hash or "-"]]


def format_report_text(report: RecallReport, header: dict[str, str] | None = None) -> str:
    lines = [f"# {k}: {v}" for k, v in (header or {}).items()]
    flag = "  (low overlap: fewer than 250 form-lemma pairs)" if report.low_overlap else ""
    lines += [
        f"language           {report.language}",
        f"overlapping tokens {report.overlapping_tokens}",
        f"matches            {report.matches}",
        f"recall             {_fmt(report.recall)}{flag}",
        f"overlapping pairs  {report.overlapping_pairs}",
        f"type-level recall  {_fmt(report.type_recall)}",
        f"near misses (case) {report.near_misses}",
    ]
    if report.per_pos:
        lines.append("per POS:")
        for pos, (n, m) in sorted(report.per_pos.items()):
            lines.append(f"  {pos:<6} {m}/{n}  {_fmt(100.0 * m / n)}")
    return "\n".join(lines) + "\n"
