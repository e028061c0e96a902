"""Stack-order binary search trees, dyadic tree weights and Dyck words.

Inserting a sequence item by item into a binary search tree gives the
stack-order code: the first item is the root, later items go left when lower
and right when higher. Each node is labelled with the midpoint of its search
interval in (0, 1), so the root weighs 1/2, its children 1/4 and 3/4, and so
on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .core import TREE_ORDER, WeightVector, _check_n, as_rank_code, as_sequence
from .errors import DuplicateItem, InvalidAlphabet

ROOT_WEIGHT = Fraction(1, 2)


@dataclass(frozen=True)
class Node:
    item: object
    depth: int
    weight: Fraction
    left: Optional["Node"] = None
    right: Optional["Node"] = None

    def __iter__(self) -> Iterator["Node"]:
        """In-order traversal."""
        if self.left is not None:
            yield from self.left
        yield self
        if self.right is not None:
            yield from self.right

    def __len__(self) -> int:
        return sum(1 for _ in self)


def _build(items: list, depth: int, weight: Fraction) -> Optional[Node]:
    # BST of an insertion order == root, then BST of the lower items and of
    # the higher items, each kept in their original order.
    if not items:
        return None
    root, rest = items[0], items[1:]
    step = Fraction(1, 2 ** (depth + 2))
    return Node(
        root,
        depth,
        weight,
        _build([x for x in rest if x < root], depth + 1, weight - step),
        _build([x for x in rest if x > root], depth + 1, weight + step),
    )


def stack_order_tree(seq) -> Node:
    """Binary search tree obtained by inserting the items in sequence order."""
    items = list(as_sequence(seq).items)
    _check_n(len(items))
    if len(set(items)) != len(items):
        seen = set()
        dup = next(x for x in items if x in seen or seen.add(x))
        raise DuplicateItem(f"item {dup!r} occurs more than once")
    return _build(items, 0, ROOT_WEIGHT)


def tree_order_weights(seq) -> WeightVector:
    """Dyadic weight of the node holding each item, in sequence order."""
    seq = as_sequence(seq)
    by_item = {node.item: node.weight for node in stack_order_tree(seq)}
    return WeightVector(tuple(by_item[x] for x in seq.items), TREE_ORDER)


def tree_to_dyck(tree: Optional[Node]) -> str:
    """Serialize the shape as ``"(" + left + ")" + right``."""
    if tree is None:
        return ""
    return "(" + tree_to_dyck(tree.left) + ")" + tree_to_dyck(tree.right)


def dyck_to_shape(word: str) -> Optional[tuple]:
    """Inverse of :func:`tree_to_dyck` on shapes.

    A shape is ``None`` (empty) or a pair ``(left, right)`` of shapes.
    """
    if not dyck_validate(word):
        raise ValueError(f"{word!r} is not a Dyck word")

    def parse(i: int) -> tuple:
        if i == len(word) or word[i] == ")":
            return None, i
        left, j = parse(i + 1)
        right, k = parse(j + 1)
        return (left, right), k

    shape, _ = parse(0)
    return shape


def tree_shape(tree: Optional[Node]) -> Optional[tuple]:
    if tree is None:
        return None
    return (tree_shape(tree.left), tree_shape(tree.right))


def dyck_validate(word: str) -> bool:
    depth = 0
    balanced = True
    for ch in word:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                balanced = False
        else:
            raise InvalidAlphabet(f"unexpected character {ch!r} in Dyck word")
    return balanced and depth == 0


def stack_sort(values) -> list:
    """Single pass through one stack; returns the emitted values."""
    out, stack = [], []
    for x in values:
        while stack and stack[-1] < x:
            out.append(stack.pop())
        stack.append(x)
    out.extend(reversed(stack))
    return out


def is_stack_sortable(rank) -> bool:
    ranks = as_rank_code(rank).ranks
    out = stack_sort(ranks)
    return all(a < b for a, b in zip(out, out[1:]))


def tree_to_json(tree: Optional[Node]):
    if tree is None:
        return None
    return {
        "item": tree.item,
        "weight": str(tree.weight),
        "left": tree_to_json(tree.left),
        "right": tree_to_json(tree.right),
    }


def tree_from_json(obj, depth: int = 0) -> Optional[Node]:
    if obj is None:
        return None
    return Node(
        obj["item"],
        depth,
        Fraction(obj["weight"]),
        tree_from_json(obj.get("left"), depth + 1),
        tree_from_json(obj.get("right"), depth + 1),
    )
