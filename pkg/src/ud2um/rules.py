"""Ordered, language-specific post-edit rules.

Rules live in plain text files, one per line::

    <lang|*> <STAGE> IF <cond>[,<cond>...] THEN <action>[,<action>...]

Conditions: ``pos=ATOM``, ``has=ATOM``, ``lacksdim=DIM``, ``ud=Attr=Val``,
``suffix=a|b``, ``pattern=REGEX``, ``lemma=STR``.
Actions: ``add=ATOM``, ``del=ATOM``, ``deldim=DIM``, ``sub=OLD>NEW``,
``template=DIM``.

Stages always run TEMPLATIZE, DELETE, ADD, FIX; inside a stage rules run in
file order, each one seeing the output of the previous.
"""

from __future__ import annotations

import hashlib
import re
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .schema import (
    MULTI_VALUED,
    POS,
    TEMPLATIC_DIMENSIONS,
    DimensionRegistry,
    UmMsd,
    default_registry,
)

STAGES = ("TEMPLATIZE", "DELETE", "ADD", "FIX")
CONDITIONS = ("pos", "has", "lacksdim", "ud", "suffix", "pattern", "lemma")
ACTIONS = ("add", "del", "deldim", "sub", "template")
# What each stage may do. DELETE never adds and ADD never removes.
STAGE_ACTIONS = {
    "TEMPLATIZE": {"template"},
    "DELETE": {"del", "deldim"},
    "ADD": {"add"},
    "FIX": {"add", "del", "deldim", "sub"},
}

_RULE_LINE = re.compile(r"(\S+)\s+(\S+)\s+IF\s+(.+?)\s+THEN\s+(.+)")
_LANG = re.compile(r"\*|[a-z]{2,3}(_[a-z]+)?")

_NUMBER_CODES = {"Sing": "S", "Plur": "P", "Dual": "D"}
_GENDER_CODES = {"Masc": "M", "Fem": "F"}
# UD layer suffix -> composite head + argument code.
TEMPLATE_LAYERS = {
    "Possession": {"psor": "PSS"},
    "ArgumentMarking": {
        "subj": "ARGNO",
        "obj": "ARGAC",
        "abs": "ARGAB",
        "erg": "ARGER",
        "dat": "ARGDA",
        "ben": "ARGBEN",
    },
}


class RuleError(ValueError):
    def __init__(self, line: int, cause: str):
        super().__init__(f"line {line}: {cause}")
        self.line = line
        self.cause = cause


class RuleSyntaxError(RuleError):
    pass


class UnknownAtom(RuleError):
    pass


class UnknownKeyword(RuleError):
    pass


class DimensionConflict(ValueError):
    """A rule tried to put a second value into a single-valued dimension."""


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str
    rule_line: int | None = None


@dataclass(frozen=True)
class RuleContext:
    language: str
    upos: str
    form: str
    lemma: str
    ud_pairs: frozenset[tuple[str, str]] = frozenset()
    dropped: tuple[tuple[str, str], ...] = ()

    def ud_value(self, attr: str) -> str | None:
        for a, v in self.ud_pairs:
            if a == attr:
                return v
        return None


@dataclass
class Trace:
    """Side records of one rule application."""

    consumed: set[tuple[str, str]] = field(default_factory=set)
    findings: list[Finding] = field(default_factory=list)
    fired: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class Condition:
    kind: str
    arg: str
    pattern: re.Pattern | None = None

    def holds(self, atoms: set[str], ctx: RuleContext, registry: DimensionRegistry) -> bool:
        if self.kind == "pos":
            return self.arg in atoms
        if self.kind == "has":
            return self.arg in atoms
        if self.kind == "lacksdim":
            return not any(registry.dimension_of(a) == self.arg for a in atoms)
        if self.kind == "ud":
            attr, _, val = self.arg.partition("=")
            return (attr, val) in ctx.ud_pairs
        if self.kind == "suffix":
            form = ctx.form.lower()
            return any(form.endswith(s) for s in self.arg.lower().split("|"))
        if self.kind == "pattern":
            return self.pattern.search(ctx.form) is not None
        if self.kind == "lemma":
            return ctx.lemma == self.arg
        raise AssertionError(self.kind)

    def __str__(self) -> str:
        return f"{self.kind}={self.arg}"


@dataclass(frozen=True)
class Action:
    kind: str
    arg: str
    new: str | None = None

    def __str__(self) -> str:
        if self.kind == "sub":
            return f"sub={self.arg}>{self.new}"
        return f"{self.kind}={self.arg}"


@dataclass(frozen=True)
class Rule:
    language: str
    stage: str
    conditions: tuple[Condition, ...]
    actions: tuple[Action, ...]
    line: int = 0

    def applies_to(self, language: str) -> bool:
        return self.language == "*" or self.language == language

    def matches(self, atoms: set[str], ctx: RuleContext, registry: DimensionRegistry) -> bool:
        return all(c.holds(atoms, ctx, registry) for c in self.conditions)

    def added_atoms(self) -> set[str]:
        out = {a.arg for a in self.actions if a.kind == "add"}
        out |= {a.new for a in self.actions if a.kind == "sub"}
        return out

    def removed_atoms(self) -> set[str]:
        return {a.arg for a in self.actions if a.kind in ("del", "sub")}

    def __str__(self) -> str:
        conds = ",".join(map(str, self.conditions))
        acts = ",".join(map(str, self.actions))
        return f"{self.language} {self.stage} IF {conds} THEN {acts}"


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...] = ()
    source_hash: str | None = None

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def stage(self, name: str) -> list[Rule]:
        return [r for r in self.rules if r.stage == name]

    def ordered(self) -> list[Rule]:
        """Rules in execution order: by stage, then file order."""
        return [r for s in STAGES for r in self.stage(s)]


# ---------------------------------------------------------------------------
# Parsing


def _check_atom(atom: str, line: int, registry: DimensionRegistry) -> str:
    atom = atom.upper()
    if atom not in registry:
        raise UnknownAtom(line, f"{atom} is not in the dimension registry")
    return atom


def _check_dim(dim: str, line: int, registry: DimensionRegistry) -> str:
    if dim not in registry.dimensions:
        raise UnknownAtom(line, f"unknown dimension {dim}")
    return dim


def _parse_condition(text: str, line: int, registry: DimensionRegistry) -> Condition:
    key, eq, value = text.strip().partition("=")
    if not eq or not value:
        raise RuleSyntaxError(line, f"condition {text!r} is not key=value")
    if key not in CONDITIONS:
        raise UnknownKeyword(line, f"unknown condition {key!r}")
    if key == "pos":
        atom = _check_atom(value, line, registry)
        if registry.dimension_of(atom) != POS:
            raise RuleSyntaxError(line, f"{atom} is not a part of speech")
        return Condition(key, atom)
    if key == "has":
        return Condition(key, _check_atom(value, line, registry))
    if key == "lacksdim":
        return Condition(key, _check_dim(value, line, registry))
    if key == "ud":
        attr, eq2, val = value.partition("=")
        if not eq2 or not attr or not val:
            raise RuleSyntaxError(line, f"ud condition {value!r} is not Attr=Val")
        return Condition(key, value)
    if key == "pattern":
        try:
            return Condition(key, value, re.compile(value))
        except re.error as e:
            raise RuleSyntaxError(line, f"bad pattern {value!r}: {e}") from None
    return Condition(key, value)


def _parse_action(text: str, stage: str, line: int, registry: DimensionRegistry) -> Action:
    key, eq, value = text.strip().partition("=")
    if not eq or not value:
        raise RuleSyntaxError(line, f"action {text!r} is not key=value")
    if key not in ACTIONS:
        raise UnknownKeyword(line, f"unknown action {key!r}")
    if key not in STAGE_ACTIONS[stage]:
        raise RuleSyntaxError(line, f"action {key!r} is not allowed in stage {stage}")
    if key in ("add", "del"):
        atom = _check_atom(value, line, registry)
        if registry.dimension_of(atom) == POS:
            raise RuleSyntaxError(line, f"{key}={atom}: change parts of speech with sub=")
        return Action(key, atom)
    if key == "deldim":
        dim = _check_dim(value, line, registry)
        if dim == POS:
            raise RuleSyntaxError(line, "the part of speech cannot be deleted")
        return Action(key, dim)
    if key == "template":
        dim = _check_dim(value, line, registry)
        if dim not in TEMPLATIC_DIMENSIONS:
            raise RuleSyntaxError(line, f"{dim} is not a templatic dimension")
        return Action(key, dim)
    old, gt, new = value.partition(">")
    if not gt or not old or not new:
        raise RuleSyntaxError(line, f"sub action {value!r} is not OLD>NEW")
    old = _check_atom(old, line, registry)
    new = _check_atom(new, line, registry)
    if (registry.dimension_of(old) == POS) != (registry.dimension_of(new) == POS):
        raise RuleSyntaxError(line, "a part of speech can only be replaced by another")
    return Action("sub", old, new)


def parse_rule(text: str, line: int = 0, registry: DimensionRegistry | None = None) -> Rule:
    registry = registry or default_registry()
    m = _RULE_LINE.fullmatch(text.strip())
    if not m:
        raise RuleSyntaxError(line, "expected '<lang> <STAGE> IF <conds> THEN <actions>'")
    lang, stage, conds, acts = m.groups()
    if not _LANG.fullmatch(lang):
        raise RuleSyntaxError(line, f"bad language code {lang!r}")
    if stage not in STAGES:
        raise UnknownKeyword(line, f"unknown stage {stage!r}")
    conditions = tuple(_parse_condition(c, line, registry) for c in conds.split(","))
    actions = tuple(_parse_action(a, stage, line, registry) for a in acts.split(","))
    rule = Rule(lang, stage, conditions, actions, line)
    if rule.added_atoms() & rule.removed_atoms():
        raise RuleSyntaxError(line, "rule both removes and adds the same atom")
    return rule


def _strip_comment(line: str) -> str:
    if line.lstrip().startswith("#"):
        return ""
    m = re.search(r"\s#", line)
    return line[: m.start()] if m else line


def parse_rules(lines: Iterable[str] | str, registry: DimensionRegistry | None = None) -> RuleSet:
    if isinstance(lines, str):
        lines = lines.splitlines()
    lines = list(lines)
    digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
    rules = []
    for lineno, raw in enumerate(lines, 1):
        text = _strip_comment(raw.rstrip("\r\n")).strip()
        if text:
            rules.append(parse_rule(text, lineno, registry))
    return RuleSet(tuple(rules), digest)


def load_rules(path: str | Path, registry: DimensionRegistry | None = None) -> RuleSet:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    rs = parse_rules(text.splitlines(), registry)
    return RuleSet(rs.rules, hashlib.sha256(text.encode("utf-8")).hexdigest())


def rules_path(language: str, rules_dir: str | Path | None = None) -> Path | None:
    """Rules file for ``language``, or ``None`` when there is none."""
    if rules_dir is None:
        candidate = resources.files("ud2um.data").joinpath("rules", f"{language}.rules")
        return Path(str(candidate)) if candidate.is_file() else None
    candidate = Path(rules_dir) / f"{language}.rules"
    return candidate if candidate.is_file() else None


def load_language_rules(language: str, rules_dir: str | Path | None = None,
                        registry: DimensionRegistry | None = None) -> RuleSet:
    path = rules_path(language, rules_dir)
    if path is None:
        warnings.warn(f"no rules file for language {language!r}; using the empty rule set",
                      stacklevel=2)
        return RuleSet()
    return load_rules(path, registry)


# ---------------------------------------------------------------------------
# Application


def _add(atoms: set[str], atom: str, registry: DimensionRegistry, rule: Rule | None) -> None:
    if atom in atoms:
        return
    dim = registry.dimension_of(atom)
    if dim not in MULTI_VALUED:
        clash = sorted(a for a in atoms if registry.dimension_of(a) == dim)
        if clash:
            where = f" (rule at line {rule.line})" if rule else ""
            raise DimensionConflict(f"adding {atom} to {dim} already holding {', '.join(clash)}{where}")
    atoms.add(atom)


def collect_template(ctx: RuleContext, proposal: UmMsd, dimension: str = "Possession",
                     registry: DimensionRegistry | None = None,
                     trace: Trace | None = None) -> UmMsd:
    """Fuse layered UD person/number pairs into one templatic value.

    ``Number[psor]=Sing`` + ``Person[psor]=1`` becomes ``PSS1S``. A layer
    with only one of person/number is recorded as an incomplete template and
    produces nothing.
    """
    registry = registry or default_registry()
    trace = trace if trace is not None else Trace()
    atoms = set(proposal.atoms)
    for layer, head in TEMPLATE_LAYERS[dimension].items():
        person_key, number_key, gender_key = (f"Person[{layer}]", f"Number[{layer}]", f"Gender[{layer}]")
        person = ctx.ud_value(person_key)
        number = ctx.ud_value(number_key)
        if person is None and number is None:
            continue
        if person is None or number not in _NUMBER_CODES:
            missing = person_key if person is None else number_key
            trace.findings.append(Finding(
                "IncompleteTemplate",
                f"{ctx.form}/{ctx.lemma}: {dimension} template lacks {missing}",
            ))
            continue
        composite = f"{head}{person}{_NUMBER_CODES[number]}"
        gender = ctx.ud_value(gender_key)
        used = {(person_key, person), (number_key, number)}
        if gender in _GENDER_CODES and f"{composite}{_GENDER_CODES[gender]}" in registry:
            composite += _GENDER_CODES[gender]
            used.add((gender_key, gender))
        if registry.dimension_of(composite) != dimension:
            trace.findings.append(Finding(
                "UnknownTemplate", f"{ctx.form}/{ctx.lemma}: {composite} is not a registered {dimension} value"))
            continue
        atoms.add(composite)
        trace.consumed |= used
    return UmMsd(atoms)


def _run_action(action: Action, atoms: set[str], ctx: RuleContext, registry: DimensionRegistry,
                trace: Trace, rule: Rule | None) -> set[str]:
    if action.kind == "add":
        _add(atoms, action.arg, registry, rule)
    elif action.kind == "del":
        atoms.discard(action.arg)
    elif action.kind == "deldim":
        atoms = {a for a in atoms if registry.dimension_of(a) != action.arg}
    elif action.kind == "sub":
        if action.arg in atoms:
            atoms.discard(action.arg)
            _add(atoms, action.new, registry, rule)
    elif action.kind == "template":
        atoms = set(collect_template(ctx, UmMsd(atoms), action.arg, registry, trace).atoms)
    return atoms


def apply_rules(proposal: UmMsd, ctx: RuleContext, rules: RuleSet,
                registry: DimensionRegistry | None = None,
                trace: Trace | None = None) -> UmMsd:
    registry = registry or default_registry()
    trace = trace if trace is not None else Trace()
    atoms = set(proposal.atoms)
    for rule in rules.ordered():
        if not rule.applies_to(ctx.language) or not rule.matches(atoms, ctx, registry):
            continue
        trace.fired.append(rule.line)
        for cond in rule.conditions:
            if cond.kind == "ud":
                attr, _, val = cond.arg.partition("=")
                trace.consumed.add((attr, val))
        for action in rule.actions:
            atoms = _run_action(action, atoms, ctx, registry, trace, rule)
    return UmMsd(atoms)


# ---------------------------------------------------------------------------
# Lint


def lint_rules(rules: RuleSet) -> list[str]:
    """Warnings about rules that look unsafe; an empty list means clean."""
    problems = []
    for rule in rules:
        if rule.added_atoms() - {a.new for a in rule.actions if a.kind == "sub"}:
            if all(c.kind == "pos" for c in rule.conditions):
                problems.append(
                    f"line {rule.line}: adds {','.join(sorted(rule.added_atoms()))} "
                    "conditioned only on language and part of speech"
                )
    ordered = rules.ordered()
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a.stage != b.stage:
                continue
            if not (a.language == "*" or b.language == "*" or a.language == b.language):
                continue
            clash = (a.added_atoms() & b.removed_atoms()) | (a.removed_atoms() & b.added_atoms())
            if clash:
                problems.append(
                    f"lines {a.line} and {b.line}: conflicting actions on {','.join(sorted(clash))}"
                )
    return problems
