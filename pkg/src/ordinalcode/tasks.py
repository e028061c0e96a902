"""Structure tasks: repetition signatures, XYX templates and the Harlow agent."""
from __future__ import annotations

import string
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateTemplate,
    EmptySequence,
    LengthMismatch,
    PreconditionViolation,
    Unsupported,
)

LETTERS = string.ascii_uppercase + string.ascii_lowercase
DOORS = ("A", "B")


@dataclass(frozen=True)
class StructureSignature:
    pattern: str

    def __str__(self) -> str:
        return self.pattern


def _canonical(tokens: Sequence) -> str:
    letters: dict = {}
    out = []
    for tok in tokens:
        if tok not in letters:
            if len(letters) == len(LETTERS):
                raise Unsupported(f"more than {len(LETTERS)} distinct tokens")
            letters[tok] = LETTERS[len(letters)]
        out.append(letters[tok])
    return "".join(out)


def structure_signature(tokens: Iterable) -> StructureSignature:
    """Relabel tokens by first occurrence: ``[to, to, bu]`` -> ``AAB``."""
    tokens = list(tokens)
    if not tokens:
        raise EmptySequence("cannot take the signature of an empty sequence")
    return StructureSignature(_canonical(tokens))


def same_structure(s1: Iterable, s2: Iterable) -> bool:
    return _canonical(list(s1)) == _canonical(list(s2))


@dataclass(frozen=True)
class Template:
    """Slots of variables, e.g. ``Template.parse("XYX")``.

    ``fixed`` pins a variable to a token; ``distinct`` requires different
    variables to bind different tokens.
    """

    slots: tuple
    fixed: Mapping = field(default_factory=dict)
    distinct: bool = False

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if not self.slots:
            raise EmptySequence("template has no slots")
        unknown = set(self.fixed) - set(self.slots)
        if unknown:
            raise ValueError(f"constraints on unknown variables {sorted(unknown)}")

    @classmethod
    def parse(cls, text: str, fixed: Optional[Mapping] = None, distinct: bool = False) -> "Template":
        return cls(tuple(text), dict(fixed or {}), distinct)

    @property
    def degenerate(self) -> bool:
        return len(set(self.slots)) == len(self.slots) and not self.fixed

    def __len__(self) -> int:
        return len(self.slots)

    def __str__(self) -> str:
        return "".join(map(str, self.slots))


@dataclass(frozen=True)
class Violation:
    position: int  # 1-indexed
    reason: str

    def __bool__(self) -> bool:
        return False


def _bind(tpl: Template, tokens: Sequence):
    bindings = dict(tpl.fixed)
    owners = {tok: var for var, tok in bindings.items()}
    for pos, (var, tok) in enumerate(zip(tpl.slots, tokens), start=1):
        if var in bindings:
            if bindings[var] != tok:
                return Violation(pos, f"{var} is bound to {bindings[var]!r}, got {tok!r}")
            continue
        if tpl.distinct and tok in owners and owners[tok] != var:
            return Violation(pos, f"{tok!r} is already bound to {owners[tok]}")
        bindings[var] = tok
        owners.setdefault(tok, var)
    return bindings


def template_match(tpl: Template, tokens: Iterable):
    """Bindings of template variables to tokens, or the first :class:`Violation`."""
    tokens = list(tokens)
    if len(tokens) != len(tpl):
        raise LengthMismatch(f"template {tpl} has {len(tpl)} slots, sequence has {len(tokens)} items")
    if tpl.degenerate:
        warnings.warn(f"template {tpl} matches every sequence", DegenerateTemplate, stacklevel=2)
    return _bind(tpl, tokens)


def complete_template(tpl: Template, prefix: Iterable) -> list:
    """Predict the remaining slots from a prefix (``XY_`` -> X's binding).

    Unbound slots come back as ``None``; an inconsistent prefix returns a
    :class:`Violation`.
    """
    prefix = list(prefix)
    if len(prefix) > len(tpl):
        raise LengthMismatch("prefix is longer than the template")
    bound = _bind(tpl, prefix)
    if isinstance(bound, Violation):
        return bound
    return [bound.get(var) for var in tpl.slots[len(prefix):]]


@dataclass(frozen=True)
class TrialRecord:
    episode: int
    trial: int
    choice: str
    reward: int


@dataclass(frozen=True)
class TaskSetAgent:
    """Picks a door, then commits to XXXXXX (stay) or XYYYYY (switch) after trial 1.

    With ``seed`` set the exploratory door is drawn per episode instead of
    being ``explore``.
    """

    explore: str = "A"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.explore not in DOORS:
            raise ValueError(f"door must be one of {DOORS}")

    def first_door(self, episode: int) -> str:
        if self.seed is None:
            return self.explore
        rng = np.random.default_rng([int(self.seed), int(episode)])
        return DOORS[int(rng.integers(2))]


@dataclass(frozen=True)
class HarlowLog:
    records: tuple
    strategy: str

    @property
    def rewards(self) -> int:
        return sum(r.reward for r in self.records)

    @property
    def choices(self) -> str:
        return "".join(r.choice for r in self.records)


def _other(door: str) -> str:
    return DOORS[1 - DOORS.index(door)]


def harlow_episode(
    agent: TaskSetAgent,
    env: Callable[[int], str],
    trials: int = 6,
    episode: int = 0,
) -> HarlowLog:
    """Run one episode; ``env(trial)`` names the rewarded door for that trial.

    The environment must reward the same door on every trial of an episode.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rewarded = env(1)
    if rewarded not in DOORS:
        raise PreconditionViolation(f"environment rewarded unknown door {rewarded!r}")
    first = agent.first_door(episode)
    hit = first == rewarded
    strategy = "X" * trials if hit else "X" + "Y" * (trials - 1)
    records = []
    for t in range(1, trials + 1):
        current = env(t)
        if current != rewarded:
            raise PreconditionViolation(
                f"reward moved from door {rewarded} to {current} at trial {t}"
            )
        choice = first if (t == 1 or hit) else _other(first)
        records.append(TrialRecord(episode, t, choice, int(choice == current)))
    return HarlowLog(tuple(records), strategy)


def constant_env(door: str) -> Callable[[int], str]:
    return lambda trial: door
