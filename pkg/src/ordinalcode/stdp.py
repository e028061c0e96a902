"""Ordinal STDP: an antisymmetric associative network over rank differences.

A unit connects to every unit of higher stored rank with a positive weight
and to every unit of lower rank with a negative one. Summing the input each
unit receives from a cue set gives a score that grows with stored rank, so
sorting by score reads the stored order back. With the constant kernel this
also holds for any subset of cued units; with the inverse-distance kernel it
holds for the full set only (cue ranks {1, 6, 7} of 7 already misorder).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .core import as_rank_code
from .errors import EmptyCue, UnknownUnit

CONSTANT = "constant"
INVERSE_DISTANCE = "inverse-distance"
KERNELS = (CONSTANT, INVERSE_DISTANCE)

_ALIASES = {"const": CONSTANT, "invdist": INVERSE_DISTANCE}


def kernel_name(kernel: str) -> str:
    name = _ALIASES.get(kernel, kernel)
    if name not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
    return name


@dataclass(frozen=True)
class WeightMatrix:
    W: np.ndarray
    unit_ids: tuple
    kernel: str

    def __post_init__(self):
        W = np.array(self.W, dtype=float)
        W.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "unit_ids", tuple(self.unit_ids))
        object.__setattr__(self, "kernel", kernel_name(self.kernel))
        n = len(self.unit_ids)
        if W.shape != (n, n):
            raise ValueError(f"weight matrix shape {W.shape} does not match {n} units")
        if len(set(self.unit_ids)) != n:
            raise ValueError("unit ids must be unique")
        object.__setattr__(self, "_index", {u: i for i, u in enumerate(self.unit_ids)})

    @property
    def n(self) -> int:
        return len(self.unit_ids)

    def index(self, unit) -> int:
        try:
            return self._index[unit]
        except (KeyError, TypeError):
            raise UnknownUnit(f"unit {unit!r} is not in the network") from None

    def scaled(self, factor: float) -> "WeightMatrix":
        return WeightMatrix(self.W * factor, self.unit_ids, self.kernel)

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel,
            "units": list(self.unit_ids),
            "n": self.n,
            "weights": self.W.ravel().tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WeightMatrix":
        n = int(obj["n"])
        return cls(np.asarray(obj["weights"], dtype=float).reshape(n, n), obj["units"], obj["kernel"])


@dataclass(frozen=True)
class RecallResult:
    order: tuple
    scores: Mapping = field(default_factory=dict)


def store(rank, kernel: str = CONSTANT, unit_ids: Optional[Sequence[Hashable]] = None) -> WeightMatrix:
    """W[i, j] = sign(r_j - r_i) * kappa(|r_j - r_i|)."""
    ranks = np.array(as_rank_code(rank).ranks)
    kernel = kernel_name(kernel)
    if unit_ids is None:
        unit_ids = range(len(ranks))
    diff = ranks[None, :] - ranks[:, None]
    dist = np.abs(diff)
    if kernel == CONSTANT:
        mag = (dist > 0).astype(float)
    else:
        mag = np.divide(1.0, dist, out=np.zeros(dist.shape), where=dist > 0)
    return WeightMatrix(np.sign(diff) * mag, tuple(unit_ids), kernel)


def _scores(net: WeightMatrix, active: Sequence) -> np.ndarray:
    idx = [net.index(u) for u in active]
    return net.W[np.ix_(idx, idx)].sum(axis=0)


def _tied_argsort(scores: np.ndarray, net: WeightMatrix) -> list:
    # scores within rounding distance count as tied and keep cue order, so the
    # result does not depend on how floating point breaks exact ties
    tol = 1e-9 * len(scores) * (float(np.max(np.abs(net.W))) if net.W.size else 0.0)
    order = list(np.argsort(scores, kind="stable"))
    out, group = [], [order[0]]
    for prev, i in zip(order, order[1:]):
        if scores[i] - scores[prev] <= tol:
            group.append(i)
        else:
            out.extend(sorted(group))
            group = [i]
    out.extend(sorted(group))
    return out


def recall(net: WeightMatrix, active: Optional[Iterable] = None) -> RecallResult:
    """Order the cued units by the summed input they get from the cue set.

    Ties keep the order in which units appear in ``active``.
    """
    active = list(net.unit_ids if active is None else active)
    if not active:
        raise EmptyCue("recall needs at least one active unit")
    if len(set(active)) != len(active):
        raise ValueError("active units must be distinct")
    scores = _scores(net, active)
    return RecallResult(
        tuple(active[i] for i in _tied_argsort(scores, net)),
        {u: float(s) for u, s in zip(active, scores)},
    )


def perturb(net: WeightMatrix, epsilon: float, seed: int) -> WeightMatrix:
    """Add uniform noise in [-epsilon, epsilon] to the upper triangle and mirror it."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if epsilon == 0:
        return net
    n = net.n
    rng = np.random.default_rng(np.uint64(seed))
    noise = np.zeros((n, n))
    iu = np.triu_indices(n, k=1)
    noise[iu] = rng.uniform(-epsilon, epsilon, size=len(iu[0]))
    noise = noise - noise.T
    return WeightMatrix(net.W + noise, net.unit_ids, net.kernel)


def noise_margin(net: WeightMatrix, active: Optional[Iterable] = None) -> float:
    """Largest epsilon for which :func:`perturb` cannot change the recalled order.

    Each score sums ``m - 1`` entries, each shifted by at most epsilon, so a
    gap ``g`` between two neighbouring scores survives when
    ``2 (m - 1) epsilon < g``.
    """
    active = list(net.unit_ids if active is None else active)
    if not active:
        raise EmptyCue("recall needs at least one active unit")
    m = len(active)
    if m == 1:
        return float("inf")
    scores = np.sort(_scores(net, active))
    gap = float(np.min(np.diff(scores)))
    return gap / (2 * (m - 1))


def insert_units(net: WeightMatrix, new_ids: Iterable[Hashable]) -> WeightMatrix:
    """Add unconnected units (zero rows and columns)."""
    new_ids = tuple(new_ids)
    n, extra = net.n, len(new_ids)
    W = np.zeros((n + extra, n + extra))
    W[:n, :n] = net.W
    return WeightMatrix(W, net.unit_ids + new_ids, net.kernel)
