"""Language-agnostic UD attribute-value to UniMorph value lookup."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .schema import POS, DimensionRegistry, UdMsd, UmMsd, default_registry

EXCLUDE = "EXCLUDE"

# UD features that are documented as staying language-specific. They never
# enter the base proposal; only post-edit rules may consume them.
UD_LANGUAGE_SPECIFIC = frozenset({
    "Position", "Dialect", "NumValue", "NumForm", "NameType", "Variant",
    "AdpType", "ConjType", "PartType", "PunctType", "PunctSide", "VerbType",
    "AdvType", "Hyph", "Style", "Strength", "Subcat", "Clitic", "InfForm",
    "Echo", "Connegative",
})


class MappingError(ValueError):
    pass


class DuplicateKey(MappingError):
    pass


class UnknownTargetAtom(MappingError):
    pass


class ExcludedPos(ValueError):
    """The UD part of speech has no UniMorph counterpart."""


@dataclass(frozen=True)
class MappingTable:
    entries: dict[tuple[str, str], tuple[str, ...]] = field(default_factory=dict)
    pos_entries: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries) + len(self.pos_entries)

    def pos_for(self, upos: str) -> str:
        target = self.pos_entries.get(upos)
        if target is None or target == EXCLUDE:
            raise ExcludedPos(upos)
        return target

    def is_excluded(self, upos: str) -> bool:
        return self.pos_entries.get(upos, EXCLUDE) == EXCLUDE


def parse_mapping(lines: Iterable[str], registry: DimensionRegistry | None = None) -> MappingTable:
    registry = registry or default_registry()
    entries: dict[tuple[str, str], tuple[str, ...]] = {}
    pos_entries: dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise MappingError(f"line {lineno}: expected SOURCE<TAB>TARGET")
        source, target = parts[0].strip(), parts[1].strip()
        if source.startswith("UPOS:"):
            upos = source[len("UPOS:"):]
            if upos in pos_entries:
                raise DuplicateKey(f"line {lineno}: UPOS {upos} mapped twice")
            if target != EXCLUDE:
                if registry.dimension_of(target) != POS:
                    raise UnknownTargetAtom(f"line {lineno}: {target} is not a UniMorph part of speech")
                target = target.upper()
            pos_entries[upos] = target
            continue
        attr, eq, val = source.partition("=")
        if not eq or not attr or not val:
            raise MappingError(f"line {lineno}: source {source!r} is not Attr=Val")
        if (attr, val) in entries:
            raise DuplicateKey(f"line {lineno}: {attr}={val} mapped twice")
        atoms = tuple(a.upper() for a in target.split(";") if a and a != "_")
        for atom in atoms:
            dim = registry.dimension_of(atom)
            if dim == "Unknown":
                raise UnknownTargetAtom(f"line {lineno}: {atom} is not in the dimension registry")
            if dim == POS:
                raise UnknownTargetAtom(f"line {lineno}: feature {source} cannot target part of speech {atom}")
        entries[(attr, val)] = atoms
    return MappingTable(entries, pos_entries)


def load_mapping(path: str | Path | None = None, registry: DimensionRegistry | None = None) -> MappingTable:
    """Load a mapping file; ``None`` loads the shipped default table."""
    if path is None:
        text = resources.files("ud2um.data").joinpath("mapping.tsv").read_text("utf-8")
        return parse_mapping(text.splitlines(), registry)
    with open(path, encoding="utf-8") as f:
        return parse_mapping(f, registry)


def base_convert(upos: str, feats: UdMsd | Iterable[tuple[str, str]], table: MappingTable):
    """Initial UniMorph proposal for one token.

    Returns ``(proposal, dropped)``; ``dropped`` holds every UD pair that
    produced no UniMorph value, sorted.
    """
    pairs = feats.pairs if isinstance(feats, UdMsd) else frozenset(feats)
    atoms = {table.pos_for(upos)}
    dropped = []
    for attr, val in pairs:
        targets = None if attr in UD_LANGUAGE_SPECIFIC else table.entries.get((attr, val))
        if targets:
            atoms.update(targets)
        else:
            dropped.append((attr, val))
    dropped.sort(key=lambda p: (p[0].lower(), p[0], p[1]))
    return UmMsd(atoms), dropped
