"""Rank codes, positional weight vectors and the rank-order neuron response.

A rank code keeps only the relative order of the items of a sequence::

    >>> rank_code([18, 13, 8, 14, 5, 19]).ranks
    (5, 3, 2, 4, 1, 6)

Weights are exact :class:`fractions.Fraction` values; floats only appear in
the autoencoder, which converts at its boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Real
from typing import Iterable, Optional, Union

import numpy as np

from .errors import (
    EmptySequence,
    InvalidAlphabet,
    InvalidRankCode,
    LengthMismatch,
    Unsupported,
)

MAX_N = 64

Item = Union[int, float, Fraction, str]

TEMPORAL_STDP = "temporal-stdp"
RANK_ORDER = "rank-order"
TREE_ORDER = "tree-order"
WEIGHT_KINDS = (TEMPORAL_STDP, RANK_ORDER, TREE_ORDER)


def _check_n(n: int) -> None:
    if n < 1:
        raise EmptySequence("sequence must hold at least one item")
    if n > MAX_N:
        raise Unsupported(f"N={n} exceeds the supported maximum of {MAX_N}")


@dataclass(frozen=True)
class Sequence:
    """An ordered, immutable list of numeric values or tokens.

    ``repertoire`` is the size M of the input repertoire for token data; it is
    carried as metadata and never used in computations.
    """

    items: tuple
    id: Optional[str] = None
    repertoire: Optional[int] = None

    def __post_init__(self):
        items = tuple(self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise EmptySequence("sequence must hold at least one item")
        numeric = [isinstance(x, Real) and not isinstance(x, bool) for x in items]
        if not (all(numeric) or all(isinstance(x, str) for x in items)):
            kinds = ", ".join(sorted({type(x).__name__ for x in items}))
            raise InvalidAlphabet(f"items must be all numbers or all strings, got {kinds}")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @property
    def n(self) -> int:
        return len(self.items)


def as_sequence(seq: Union[Sequence, Iterable[Item]]) -> Sequence:
    if isinstance(seq, Sequence):
        return seq
    return Sequence(tuple(seq))


@dataclass(frozen=True)
class RankCode:
    """Rank of each position, a permutation of 1..N."""

    ranks: tuple

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        n = len(ranks)
        if n == 0:
            raise InvalidRankCode("rank code is empty")
        if n > MAX_N:
            raise Unsupported(f"N={n} exceeds the supported maximum of {MAX_N}")
        if sorted(ranks) != list(range(1, n + 1)):
            raise InvalidRankCode(f"{list(ranks)} is not a permutation of 1..{n}")

    def __len__(self) -> int:
        return len(self.ranks)

    def __iter__(self):
        return iter(self.ranks)

    def __getitem__(self, i):
        return self.ranks[i]

    @property
    def n(self) -> int:
        return len(self.ranks)

    def reversed_order(self) -> "RankCode":
        """The code with the order of every pair flipped (rank r -> N+1-r)."""
        n = self.n
        return RankCode(tuple(n + 1 - r for r in self.ranks))


def as_rank_code(rank: Union[RankCode, Iterable[int]]) -> RankCode:
    if isinstance(rank, RankCode):
        return rank
    try:
        return RankCode(tuple(rank))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidRankCode):
            raise
        raise InvalidRankCode(str(exc)) from exc


@dataclass(frozen=True)
class WeightVector:
    weights: tuple
    kind: str = field(default=RANK_ORDER)

    def __post_init__(self):
        weights = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if self.kind not in WEIGHT_KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if not weights:
            raise EmptySequence("weight vector is empty")
        if len(set(weights)) != len(weights):
            raise ValueError("weights must be distinct")
        if self.kind == TREE_ORDER:
            if not all(0 < w < 1 for w in weights):
                raise ValueError("tree weights must lie in (0, 1)")
        else:
            if not all(0 < w <= 1 for w in weights):
                raise ValueError("weights must lie in (0, 1]")
            if weights.count(Fraction(1)) != 1:
                raise ValueError("exactly one weight must equal 1")

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def as_strings(self) -> list:
        return [str(w) for w in self.weights]


def rank_code(seq) -> RankCode:
    """Rank of every item among all items; equal items rank by position."""
    items = as_sequence(seq).items
    _check_n(len(items))
    order = sorted(range(len(items)), key=items.__getitem__)
    ranks = [0] * len(items)
    for r, i in enumerate(order, start=1):
        ranks[i] = r
    return RankCode(tuple(ranks))


def _inverse_weight(n: int, k: int) -> Fraction:
    return Fraction(1, n + 1 - k)


def stdp_weights(n: int) -> WeightVector:
    """Temporal weights 1/N, 1/(N-1), ..., 1: later positions weigh more."""
    _check_n(n)
    return WeightVector(tuple(_inverse_weight(n, t) for t in range(1, n + 1)), TEMPORAL_STDP)


def rank_order_weights(rank) -> WeightVector:
    rank = as_rank_code(rank)
    n = rank.n
    return WeightVector(tuple(_inverse_weight(n, r) for r in rank.ranks), RANK_ORDER)


@lru_cache(maxsize=None)
def scaled_weights(n: int) -> tuple:
    """Integer scaling of the inverse-rank weights.

    Returns ``(scale, u)`` where ``u[k-1] * 1/scale == 1/(n+1-k)`` exactly and
    every ``u`` is an integer. ``scale`` is lcm(1..n).
    """
    _check_n(n)
    scale = math.lcm(*range(1, n + 1))
    return scale, tuple(scale // (n + 1 - k) for k in range(1, n + 1))


def response(input_code, stored) -> Fraction:
    """Normalized match between two rank codes, exactly 1 only when they agree.

    score = sum_i u(in_i) u(st_i) / sum_k u(k)^2 with u(k) = 1/(N+1-k).
    """
    a, b = as_rank_code(input_code), as_rank_code(stored)
    if a.n != b.n:
        raise LengthMismatch(f"rank codes have lengths {a.n} and {b.n}")
    _, u = scaled_weights(a.n)
    num = sum(u[x - 1] * u[y - 1] for x, y in zip(a.ranks, b.ranks))
    den = sum(v * v for v in u)
    return Fraction(num, den)


def response_numerators(inputs: np.ndarray, stored: np.ndarray) -> tuple:
    """Batch form of :func:`response` on arrays of rank codes.

    ``inputs`` is (A, N) and ``stored`` is (B, N), both holding ranks 1..N.
    Returns ``(num, den)`` where ``num[a, b] / den`` is the exact response of
    input ``a`` against stored code ``b``. Integer arithmetic throughout, so
    comparisons between entries are exact.
    """
    inputs = np.atleast_2d(np.asarray(inputs))
    stored = np.atleast_2d(np.asarray(stored))
    n = inputs.shape[1]
    if stored.shape[1] != n:
        raise LengthMismatch(f"rank codes have lengths {n} and {stored.shape[1]}")
    scale, u = scaled_weights(n)
    den = sum(v * v for v in u)
    dtype = np.int64 if den < 2**62 // n else object
    table = np.array((0,) + u, dtype=dtype)
    return table[inputs] @ table[stored].T, den


def all_rank_codes(n: int) -> np.ndarray:
    """Every permutation of 1..n as rows, in lexicographic order."""
    from itertools import permutations

    return np.array(list(permutations(range(1, n + 1))), dtype=np.int64).reshape(-1, n)
