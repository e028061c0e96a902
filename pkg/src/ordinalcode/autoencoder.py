"""Gain-modulated sequence encoder with a recruiting category layer.

The input sequence is reduced to its rank code; a population of ``K``
neurons, each tuned to one random rank code, responds with the rank-order
kernel of :func:`ordinalcode.core.response`; category units recruited on
novelty store the population vector and the rank code; decoding arranges a
bag of new items so that the stored rank code is reproduced exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Optional

import numpy as np

from .core import RankCode, as_rank_code, as_sequence, rank_code, response, scaled_weights
from .errors import (
    DuplicateItem,
    EmptyCodebook,
    LengthMismatch,
    Unsupported,
    UnknownZ,
)

CODEBOOK_VERSION = 1
# distinct rank codes reach cosine 0.99993 at N=6, K=256; only identical codes may merge
DEFAULT_THETA = 1 - 1e-9


@dataclass(frozen=True)
class YPopulation:
    codes: tuple
    seed: Optional[int] = None

    def __post_init__(self):
        codes = tuple(as_rank_code(c) for c in self.codes)
        object.__setattr__(self, "codes", codes)
        if not codes:
            raise ValueError("population needs at least one neuron")
        n = codes[0].n
        if any(c.n != n for c in codes):
            raise LengthMismatch("all neurons must be tuned to codes of one length")
        scale, u = scaled_weights(n)
        den = sum(v * v for v in u)
        dtype = np.int64 if den < 2**62 // n else object
        table = np.array((0,) + u, dtype=dtype)
        tuned = table[np.array([c.ranks for c in codes])]
        object.__setattr__(self, "_tuned", tuned)
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_den", den)

    @classmethod
    def random(cls, k: int, n: int, seed: int) -> "YPopulation":
        """K neurons tuned to uniformly drawn permutations of 1..n."""
        if k < 1:
            raise ValueError("K must be at least 1")
        rng = np.random.default_rng(np.uint64(seed))
        codes = tuple(RankCode(tuple(rng.permutation(n) + 1)) for _ in range(k))
        return cls(codes, seed)

    @property
    def k(self) -> int:
        return len(self.codes)

    @property
    def n(self) -> int:
        return self.codes[0].n

    def responses(self, rank) -> np.ndarray:
        """Exact responses as floats (numerators are exact integers)."""
        rank = as_rank_code(rank)
        if rank.n != self.n:
            raise LengthMismatch(f"sequence length {rank.n} does not match population N={self.n}")
        num = self._tuned @ self._table[np.array(rank.ranks)]
        return np.array([int(x) / self._den for x in num]) if num.dtype == object else num / self._den


def encode(seq, population: YPopulation) -> np.ndarray:
    """Unit-norm population response to the rank code of ``seq``."""
    y = population.responses(rank_code(seq))
    return y / np.linalg.norm(y)


def encode_rank(rank, population: YPopulation) -> np.ndarray:
    y = population.responses(rank)
    return y / np.linalg.norm(y)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    if np.array_equal(a, b):
        return 1.0
    return float(np.clip(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)), -1.0, 1.0))


@dataclass(frozen=True)
class CodebookEntry:
    z_id: int
    y: tuple
    rank: RankCode
    label: Optional[str] = None

    def vector(self) -> np.ndarray:
        return np.asarray(self.y, dtype=float)


@dataclass(frozen=True)
class Codebook:
    n: int
    k: int
    seed: Optional[int] = None
    theta: float = DEFAULT_THETA
    entries: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise ValueError("theta must lie in (0, 1)")
        ids = [e.z_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("z-ids must be unique")

    @classmethod
    def empty(cls, population: YPopulation, theta: float = DEFAULT_THETA) -> "Codebook":
        return cls(population.n, population.k, population.seed, theta)

    def population(self) -> YPopulation:
        if self.seed is None:
            raise ValueError("codebook has no seed to regenerate its population from")
        return YPopulation.random(self.k, self.n, self.seed)

    def entry(self, z_id: int) -> CodebookEntry:
        for e in self.entries:
            if e.z_id == z_id:
                return e
        raise UnknownZ(f"no category unit with id {z_id!r}")

    def __len__(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {
            "version": CODEBOOK_VERSION,
            "seed": self.seed,
            "K": self.k,
            "N": self.n,
            "theta": self.theta,
            "entries": [
                {"z": e.z_id, "y": list(e.y), "rank": list(e.rank.ranks), "label": e.label}
                for e in self.entries
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Codebook":
        if obj.get("version") != CODEBOOK_VERSION:
            raise ValueError(f"unsupported codebook version {obj.get('version')!r}")
        entries = tuple(
            CodebookEntry(int(e["z"]), tuple(float(v) for v in e["y"]), RankCode(e["rank"]), e.get("label"))
            for e in obj["entries"]
        )
        return cls(int(obj["N"]), int(obj["K"]), obj.get("seed"), float(obj["theta"]), entries)


def _check_book(population: YPopulation, book: Codebook) -> None:
    if (population.n, population.k) != (book.n, book.k):
        raise LengthMismatch(
            f"population (N={population.n}, K={population.k}) does not match "
            f"codebook (N={book.n}, K={book.k})"
        )


def _best(y: np.ndarray, book: Codebook) -> tuple:
    best_id, best_sim = None, -math.inf
    for e in sorted(book.entries, key=lambda e: e.z_id):
        sim = cosine(y, e.vector())
        if sim > best_sim:
            best_id, best_sim = e.z_id, sim
    return best_id, best_sim


def learn(seq, population: YPopulation, book: Codebook, label: Optional[str] = None) -> tuple:
    """Return ``(new_book, z_id, novel)``; recruits a unit below similarity theta."""
    _check_book(population, book)
    rank = rank_code(seq)
    y = encode_rank(rank, population)
    if book.entries:
        z, sim = _best(y, book)
        if sim >= book.theta:
            return book, z, False
    z = max((e.z_id for e in book.entries), default=-1) + 1
    entry = CodebookEntry(z, tuple(float(v) for v in y), rank, label)
    return replace(book, entries=book.entries + (entry,)), z, True


def recognize(seq, population: YPopulation, book: Codebook) -> tuple:
    """Best-matching category ``(z_id, similarity)``; ties go to the lowest id."""
    _check_book(population, book)
    if not book.entries:
        raise EmptyCodebook("codebook holds no category units")
    return _best(encode(seq, population), book)


def decode(z_id: int, bag, book: Codebook) -> tuple:
    """Arrange ``bag`` so that its rank code equals the stored one."""
    stored = book.entry(z_id).rank
    items = list(bag)
    if len(items) != stored.n:
        raise LengthMismatch(f"bag holds {len(items)} items, stored code has N={stored.n}")
    if len(set(items)) != len(items):
        raise DuplicateItem("bag items must be distinct")
    ordered = sorted(as_sequence(items).items)
    return tuple(ordered[r - 1] for r in stored.ranks)


def prediction_error(seq, stored) -> float:
    """1 - response between the rank code of ``seq`` and a stored code."""
    return float(1 - response(rank_code(seq), stored))


def infer_rank_code(y: np.ndarray, population: YPopulation, max_n: int = 8) -> RankCode:
    """Recover a rank code from a population vector by exhaustive search.

    Diagnostic only; the codebook stores rank codes directly.
    """
    n = population.n
    if n > max_n:
        raise Unsupported(f"exhaustive inversion limited to N <= {max_n}")
    y = np.asarray(y, dtype=float)
    best, best_sim = None, -math.inf
    for perm in permutations(range(1, n + 1)):
        sim = cosine(y, encode_rank(perm, population))
        if sim > best_sim:
            best, best_sim = perm, sim
    return RankCode(best)
