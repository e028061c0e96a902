"""Huffman codes whose branch labels are ordinal ranks.

Children of every internal node are ranked #1..#k by decreasing subtree
weight, so ``#1`` always names the most probable branch. A codeword is the
list of ranks met on the way from the root to a symbol.

    >>> codec = build_codec({"a": Fraction(1, 2), "b": Fraction(1, 4), "c": Fraction(1, 4)})
    >>> codec.codeword("c")
    (2, 2)
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    DegenerateFrequencies,
    EmptyAlphabet,
    TruncatedCode,
    UnknownSymbol,
)

Symbol = str


@dataclass(frozen=True)
class SymbolTable:
    entries: tuple

    def __post_init__(self):
        entries = tuple((sym, Fraction(freq)) for sym, freq in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise EmptyAlphabet("symbol table is empty")
        symbols = [sym for sym, _ in entries]
        if not all(isinstance(s, str) for s in symbols):
            raise TypeError("symbol ids must be strings")
        if len(set(symbols)) != len(symbols):
            raise ValueError("symbol ids must be unique")
        if any(f < 0 for _, f in entries):
            raise DegenerateFrequencies("frequencies must be nonnegative")
        if not any(f > 0 for _, f in entries):
            raise DegenerateFrequencies("at least one frequency must be positive")

    @classmethod
    def from_mapping(cls, freqs: Mapping[str, object]) -> "SymbolTable":
        return cls(tuple(freqs.items()))

    @classmethod
    def from_stream(cls, symbols: Iterable[str]) -> "SymbolTable":
        counts: dict = {}
        for s in symbols:
            counts[s] = counts.get(s, 0) + 1
        return cls(tuple(counts.items()))

    @property
    def total(self) -> Fraction:
        return sum((f for _, f in self.entries), Fraction(0))

    def probabilities(self) -> dict:
        total = self.total
        return {sym: f / total for sym, f in self.entries}


@dataclass(frozen=True)
class _Tree:
    weight: Fraction
    # (0, index) for padding-only subtrees, (1, symbol) otherwise; sorts dummies first
    key: tuple
    symbol: object = None
    children: tuple = ()


def _merge_key(t: _Tree) -> tuple:
    return (t.weight, t.key)


def _rank_key(t: _Tree) -> tuple:
    # heavier first; real symbols before padding; then smaller symbol id
    return (-t.weight, -t.key[0], t.key[1])


@dataclass(frozen=True)
class Codec:
    arity: int
    codewords: Mapping[str, tuple]

    def __post_init__(self):
        object.__setattr__(
            self, "codewords", {s: tuple(int(x) for x in c) for s, c in self.codewords.items()}
        )
        trie: dict = {}
        for sym, code in self.codewords.items():
            if not code:
                raise ValueError(f"empty codeword for {sym!r}")
            node = trie
            for label in code[:-1]:
                node = node.setdefault(label, {})
                if not isinstance(node, dict):
                    raise ValueError("codebook is not prefix-free")
            if code[-1] in node:
                raise ValueError("codebook is not prefix-free")
            node[code[-1]] = sym
        object.__setattr__(self, "_trie", trie)

    @property
    def symbols(self) -> list:
        return list(self.codewords)

    def codeword(self, symbol: str) -> tuple:
        try:
            return self.codewords[symbol]
        except KeyError:
            raise UnknownSymbol(f"symbol {symbol!r} is not in the codebook") from None

    def encode(self, symbols: Iterable[str]) -> list:
        out: list = []
        for s in symbols:
            out.extend(self.codeword(s))
        return out

    def decode(self, labels: Iterable[int]) -> list:
        out = []
        node = self._trie
        for label in labels:
            nxt = node.get(label) if isinstance(label, int) else None
            if nxt is None:
                raise TruncatedCode(f"label {label!r} does not continue any codeword")
            if isinstance(nxt, dict):
                node = nxt
            else:
                out.append(nxt)
                node = self._trie
        if node is not self._trie:
            raise TruncatedCode("label stream ends inside a codeword")
        return out

    def expected_length(self, table: SymbolTable) -> Fraction:
        probs = table.probabilities()
        return sum((p * len(self.codewords[s]) for s, p in probs.items()), Fraction(0))

    def kraft_sum(self) -> Fraction:
        return sum((Fraction(1, self.arity ** len(c)) for c in self.codewords.values()), Fraction(0))

    def to_json(self) -> dict:
        return {"arity": self.arity, "codewords": {s: list(c) for s, c in self.codewords.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "Codec":
        return cls(int(obj["arity"]), {str(s): tuple(c) for s, c in obj["codewords"].items()})


def format_labels(labels: Iterable[int]) -> str:
    return "".join(f"#{x}" for x in labels)


def build_codec(table: Union[SymbolTable, Mapping[str, object]], arity: int = 2) -> Codec:
    """k-ary Huffman code with ordinal branch labels.

    Ties in the merge order go to the lighter subtree, then to the one holding
    the smaller symbol id. Zero-weight padding leaves make the last merge full;
    a single symbol is padded too, so it gets the one-label codeword ``#1``.
    """
    if not isinstance(table, SymbolTable):
        table = SymbolTable.from_mapping(table)
    if arity < 2:
        raise ValueError("arity must be at least 2")

    heap = [(_merge_key(t), t) for t in (_Tree(f, (1, s), s) for s, f in table.entries)]
    n = len(heap)
    pad = (arity - 1 - (n - 1) % (arity - 1)) % (arity - 1) if n > 1 else arity - 1
    heap += [(_merge_key(t), t) for t in (_Tree(Fraction(0), (0, i)) for i in range(pad))]
    heapq.heapify(heap)

    while len(heap) > 1:
        group = [heapq.heappop(heap)[1] for _ in range(arity)]
        children = tuple(sorted(group, key=_rank_key))
        real = [c.key for c in children if c.key[0] == 1]
        key = min(real) if real else min(c.key for c in children)
        merged = _Tree(sum((c.weight for c in children), Fraction(0)), key, None, children)
        heapq.heappush(heap, (_merge_key(merged), merged))

    codewords: dict = {}
    stack = [(heap[0][1], ())]
    while stack:
        node, path = stack.pop()
        if node.children:
            for rank, child in enumerate(node.children, start=1):
                stack.append((child, path + (rank,)))
        elif node.key[0] == 1:
            codewords[node.symbol] = path
    ordered = {s: codewords[s] for s, _ in table.entries}
    return Codec(arity, ordered)


def entropy(table: SymbolTable) -> float:
    """Shannon entropy in bits."""
    return -sum(float(p) * math.log2(p) for p in table.probabilities().values() if p > 0)
