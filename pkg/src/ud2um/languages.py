"""Resolve language names, ISO codes and UD treebank names to one key."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources


@dataclass(frozen=True)
class Language:
    code: str
    iso639_3: str
    name: str
    treebank: str


@lru_cache(maxsize=1)
def known_languages() -> dict[str, Language]:
    text = resources.files("ud2um.data").joinpath("languages.tsv").read_text("utf-8")
    out = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        lang = Language(*line.split("\t"))
        out[lang.code] = lang
    return out


def resolve_language(name: str) -> Language | None:
    """Look up by two-letter code, ISO 639-3 code, English name or treebank name.

    Treebank names may carry a suffix (``UD_Spanish-AnCora``); the part before
    the first hyphen is used.
    """
    key = name.strip()
    langs = known_languages()
    if key.lower() in langs:
        return langs[key.lower()]
    base = key.split("-")[0].lower()
    if base.startswith("ud_"):
        base = base[3:]
    for lang in langs.values():
        if key.lower() in (lang.iso639_3, lang.treebank.lower()) or base == lang.name.lower():
            return lang
    return None


def language_code(name: str) -> str:
    """Rules-file key for ``name``; unknown names pass through lowercased."""
    lang = resolve_language(name)
    return lang.code if lang else name.strip().lower()
