"""Type-level UniMorph paradigm tables: (lemma, form) -> attested descriptions."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .schema import DimensionRegistry, UmMsd, default_registry, nfc

ANNOTATED_POS = frozenset({"N", "V", "ADJ"})


class MalformedRow(ValueError):
    def __init__(self, line: int, cause: str):
        super().__init__(f"line {line}: {cause}")
        self.line = line


@dataclass(frozen=True)
class TableFinding:
    line: int
    kind: str
    detail: str


def pos_family(atom: str) -> str:
    """``V.PTCP`` -> ``V``; subtypes count as their base part of speech."""
    return atom.split(".")[0]


@dataclass
class ParadigmTable:
    language: str
    entries: dict[tuple[str, str], frozenset[UmMsd]] = field(default_factory=dict)
    content_hash: str | None = None
    findings: list[TableFinding] = field(default_factory=list)

    def __post_init__(self):
        self._folded: dict[tuple[str, str], set[tuple[str, str]]] = {}
        for key in self.entries:
            self._folded.setdefault(_fold(key), set()).add(key)

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.entries.values())

    def __len__(self) -> int:
        return self.size

    def __contains__(self, key: tuple[str, str]) -> bool:
        return (nfc(key[0]), nfc(key[1])) in self.entries

    def lookup(self, lemma: str, form: str) -> frozenset[UmMsd]:
        return self.entries.get((nfc(lemma), nfc(form)), frozenset())

    def near_miss(self, lemma: str, form: str) -> bool:
        """True when the pair is absent but present up to letter case."""
        key = (nfc(lemma), nfc(form))
        return key not in self.entries and bool(self._folded.get(_fold(key)))

    def pos_families(self, registry: DimensionRegistry | None = None) -> frozenset[str]:
        registry = registry or default_registry()
        out = set()
        for msds in self.entries.values():
            for msd in msds:
                pos = msd.pos(registry)
                if pos:
                    out.add(pos_family(pos))
        return frozenset(out)


def _fold(key: tuple[str, str]) -> tuple[str, str]:
    return (key[0].casefold(), key[1].casefold())


def parse_table(lines: Iterable[str], language: str,
                registry: DimensionRegistry | None = None) -> ParadigmTable:
    registry = registry or default_registry()
    grouped: dict[tuple[str, str], set[UmMsd]] = {}
    findings = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise MalformedRow(lineno, f"expected lemma<TAB>form<TAB>tag, found {len(parts)} fields")
        lemma, form, tag = parts
        if not tag.strip():
            findings.append(TableFinding(lineno, "EmptyTag", f"{lemma}\t{form}"))
            continue
        msd = UmMsd.parse(tag)
        if msd.nonconforming:
            findings.append(TableFinding(lineno, "Nonconforming", tag))
        unknown = msd.unknown_atoms(registry)
        if unknown:
            findings.append(TableFinding(lineno, "UnknownAtom", ",".join(unknown)))
        pos = msd.pos(registry)
        if pos is None or pos_family(pos) not in ANNOTATED_POS:
            findings.append(TableFinding(lineno, "UnexpectedPos", tag))
        grouped.setdefault((nfc(lemma), nfc(form)), set()).add(msd)
    entries = {k: frozenset(v) for k, v in grouped.items()}
    return ParadigmTable(language, entries, findings=findings)


def load_table(path: str | Path, language: str,
               registry: DimensionRegistry | None = None) -> ParadigmTable:
    data = Path(path).read_bytes()
    table = parse_table(data.decode("utf-8").split("\n"), language, registry)
    table.content_hash = hashlib.sha256(data).hexdigest()
    return table


def lookup(table: ParadigmTable, lemma: str, form: str) -> frozenset[UmMsd]:
    return table.lookup(lemma, form)
