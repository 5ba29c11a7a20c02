"""UD and UniMorph morphosyntactic descriptions.

UD feature bundles are sets of ``Attr=Val`` pairs plus a UPOS tag. UniMorph
descriptions are sets of atomic values, each registered in exactly one
dimension; the part of speech is itself one of the values. Both are compared
as sets, never as strings.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

POS = "POS"
LANGUAGE_SPECIFIC = "LanguageSpecific"
UNKNOWN = "Unknown"
TEMPLATIC_DIMENSIONS = frozenset({"Possession", "ArgumentMarking"})
# Dimensions that may hold more than one value in a single description.
MULTI_VALUED = TEMPLATIC_DIMENSIONS | {LANGUAGE_SPECIFIC, UNKNOWN}

# Rendering precedence. Dimensions missing from this list sort just before
# LanguageSpecific, alphabetically.
DIMENSION_ORDER = (
    POS,
    "Finiteness",
    "Mood",
    "Tense",
    "Evidentiality",
    "Case",
    "Person",
    "Gender",
    "Animacy",
    "Number",
    "Possession",
    "ArgumentMarking",
    "Definiteness",
    "Deixis",
    "Comparison",
    "Aspect",
    "Aktionsart",
    "Voice",
    "Valency",
    "Polarity",
    "Politeness",
    "SwitchReference",
    "InformationStructure",
    "Interrogativity",
    LANGUAGE_SPECIFIC,
    UNKNOWN,
)
_PRECEDENCE = {dim: i for i, dim in enumerate(DIMENSION_ORDER)}


class MalformedFeats(ValueError):
    """A UD FEATS field that is neither ``_`` nor ``Attr=Val`` pairs."""


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class UmValue:
    atom: str
    dimension: str


class DimensionRegistry:
    """Read-only assignment of UniMorph atoms to dimensions."""

    def __init__(self, atoms: dict[str, str] | None = None):
        self._atoms: dict[str, str] = {}
        for atom, dim in (atoms or {}).items():
            self._add(atom, dim)

    def _add(self, atom: str, dim: str, line: int | None = None) -> None:
        key = atom.upper()
        if key in self._atoms and self._atoms[key] != dim:
            where = f" (line {line})" if line else ""
            raise RegistryError(
                f"atom {key} registered in both {self._atoms[key]} and {dim}{where}"
            )
        self._atoms[key] = dim

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "DimensionRegistry":
        reg = cls()
        for lineno, raw in enumerate(lines, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise RegistryError(f"line {lineno}: expected DIMENSION<TAB>ATOM")
            reg._add(parts[1], parts[0], lineno)
        return reg

    @classmethod
    def from_file(cls, path: str | Path) -> "DimensionRegistry":
        with open(path, encoding="utf-8") as f:
            return cls.from_lines(f)

    def __contains__(self, atom: str) -> bool:
        return self.dimension_of(atom) != UNKNOWN

    def __len__(self) -> int:
        return len(self._atoms)

    @property
    def dimensions(self) -> frozenset[str]:
        return frozenset(self._atoms.values())

    def dimension_of(self, atom: str) -> str:
        key = atom.upper()
        dim = self._atoms.get(key)
        if dim is not None:
            return dim
        # Stacked values such as IN+ESS belong to the dimension shared by
        # their parts.
        if "+" in key:
            dims = {self._atoms.get(part) for part in key.split("+")}
            if len(dims) == 1 and None not in dims:
                return dims.pop()
        return UNKNOWN

    def value(self, atom: str) -> UmValue:
        return UmValue(atom.upper(), self.dimension_of(atom))

    def atoms_in(self, dimension: str) -> list[str]:
        return sorted(a for a, d in self._atoms.items() if d == dimension)


@lru_cache(maxsize=1)
def default_registry() -> DimensionRegistry:
    text = resources.files("ud2um.data").joinpath("dimensions.tsv").read_text("utf-8")
    return DimensionRegistry.from_lines(text.splitlines())


# ---------------------------------------------------------------------------
# UD side


def parse_ud_feats(feats_field: str) -> frozenset[tuple[str, str]]:
    """Parse a FEATS column into ``(attribute, value)`` pairs.

    Multi-valued features (``PronType=Int,Rel``) stay a single pair whose
    value is the comma-joined string.
    """
    if feats_field == "_":
        return frozenset()
    pairs = []
    seen = set()
    for chunk in feats_field.split("|"):
        attr, eq, val = chunk.partition("=")
        if not eq or not attr or not val:
            raise MalformedFeats(f"feature {chunk!r} is not Attr=Val")
        if attr in seen:
            raise MalformedFeats(f"attribute {attr!r} appears twice")
        seen.add(attr)
        pairs.append((attr, val))
    return frozenset(pairs)


def render_ud_feats(pairs: Iterable[tuple[str, str]]) -> str:
    """Canonical FEATS string: pairs sorted case-insensitively by attribute."""
    pairs = sorted(pairs, key=lambda p: (p[0].lower(), p[0], p[1]))
    if not pairs:
        return "_"
    return "|".join(f"{a}={v}" for a, v in pairs)


@dataclass(frozen=True)
class UdMsd:
    upos: str
    pairs: frozenset[tuple[str, str]]

    @classmethod
    def parse(cls, upos: str, feats_field: str) -> "UdMsd":
        return cls(upos, parse_ud_feats(feats_field))

    def get(self, attr: str) -> str | None:
        for a, v in self.pairs:
            if a == attr:
                return v
        return None

    def __str__(self) -> str:
        return f"{self.upos}\t{render_ud_feats(self.pairs)}"


# ---------------------------------------------------------------------------
# UniMorph side


@dataclass(frozen=True)
class UmMsd:
    """A UniMorph description: an unordered set of uppercase atoms."""

    atoms: frozenset[str]
    nonconforming: bool = False

    def __init__(self, atoms: Iterable[str], nonconforming: bool = False):
        object.__setattr__(self, "atoms", frozenset(a.upper() for a in atoms))
        object.__setattr__(self, "nonconforming", nonconforming)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UmMsd):
            return NotImplemented
        return self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: str) -> bool:
        return atom.upper() in self.atoms

    @classmethod
    def parse(cls, tag: str) -> "UmMsd":
        """Parse a ``;``-separated tag.

        Colon separators occur in some tables; they are accepted but the
        result is marked nonconforming.
        """
        tag = tag.strip()
        if tag in ("", "_"):
            return cls(())
        nonconforming = ":" in tag
        atoms = [a for a in tag.replace(":", ";").split(";") if a]
        return cls(atoms, nonconforming)

    def values(self, registry: DimensionRegistry | None = None) -> set[UmValue]:
        registry = registry or default_registry()
        return {registry.value(a) for a in self.atoms}

    def by_dimension(self, registry: DimensionRegistry | None = None) -> dict[str, frozenset[str]]:
        registry = registry or default_registry()
        grouped: dict[str, set[str]] = {}
        for atom in self.atoms:
            grouped.setdefault(registry.dimension_of(atom), set()).add(atom)
        return {d: frozenset(a) for d, a in grouped.items()}

    def pos(self, registry: DimensionRegistry | None = None) -> str | None:
        found = self.by_dimension(registry).get(POS)
        if not found or len(found) != 1:
            return None
        return next(iter(found))

    def unknown_atoms(self, registry: DimensionRegistry | None = None) -> list[str]:
        return sorted(self.by_dimension(registry).get(UNKNOWN, ()))

    def conflicts(self, registry: DimensionRegistry | None = None) -> dict[str, frozenset[str]]:
        """Single-valued dimensions holding more than one value."""
        return {
            d: atoms
            for d, atoms in self.by_dimension(registry).items()
            if len(atoms) > 1 and d not in MULTI_VALUED
        }

    def __str__(self) -> str:
        return canonical_um(self)


def _sort_key(value: UmValue) -> tuple[float, str, str]:
    rank = _PRECEDENCE.get(value.dimension, _PRECEDENCE[LANGUAGE_SPECIFIC] - 0.5)
    return (rank, value.dimension, value.atom)


def canonical_um(msd: UmMsd, registry: DimensionRegistry | None = None) -> str:
    """Render POS first, then the remaining values by dimension precedence."""
    values = sorted(msd.values(registry), key=_sort_key)
    if not values:
        return "_"
    return ";".join(v.atom for v in values)


def msd_equal(a: UmMsd | str, b: UmMsd | str) -> bool:
    if isinstance(a, str):
        a = UmMsd.parse(a)
    if isinstance(b, str):
        b = UmMsd.parse(b)
    return a.atoms == b.atoms


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)
