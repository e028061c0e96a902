from itertools import permutations

import numpy as np
import pytest

from ordinalcode.errors import EmptyCue, InvalidRankCode, UnknownUnit
from ordinalcode.stdp import (
    WeightMatrix,
    insert_units,
    noise_margin,
    perturb,
    recall,
    store,
)

KERNELS = ["constant", "inverse-distance"]
EXAMPLE_RANK = (5, 3, 2, 4, 1, 6)


def by_rank(rank, units=None):
    units = range(len(rank)) if units is None else units
    return tuple(sorted(units, key=lambda u: rank[u]))


def test_store_constant_example():
    W = store([2, 1, 3], "const").W
    assert W.tolist() == [[0, -1, 1], [1, 0, 1], [-1, -1, 0]]


def test_store_small_cases():
    assert store([1]).W.tolist() == [[0.0]]
    W = store([1, 2], "invdist").W
    assert W[0, 1] == 1 and W[1, 0] == -1


def test_store_inverse_distance_values():
    W = store([1, 4, 2, 3], "inverse-distance").W
    assert W[0, 1] == pytest.approx(1 / 3) and W[1, 2] == pytest.approx(-1 / 2)


def test_store_errors():
    with pytest.raises(InvalidRankCode):
        store([1, 1])
    with pytest.raises(ValueError):
        store([1, 2], "gaussian")


@pytest.mark.parametrize("kernel", KERNELS)
def test_antisymmetry_after_store_and_perturb(kernel):
    rng = np.random.default_rng(0)
    for _ in range(50):
        rank = tuple(rng.permutation(12) + 1)
        for net in (store(rank, kernel), perturb(store(rank, kernel), 0.3, int(rng.integers(2**32)))):
            assert np.array_equal(net.W, -net.W.T)
            assert not np.any(np.diag(net.W))
            # sign rule
            r = np.array(rank)
            clean = store(rank, kernel).W
            assert np.array_equal(clean > 0, r[None, :] > r[:, None])


@pytest.mark.parametrize("kernel", KERNELS)
def test_exact_recall_full_set(kernel):
    for n in range(1, 7):
        for perm in permutations(range(1, n + 1)):
            assert recall(store(perm, kernel)).order == by_rank(perm)


def test_recall_example():
    net = store(EXAMPLE_RANK)
    assert [EXAMPLE_RANK[u] for u in recall(net).order] == [1, 2, 3, 4, 5, 6]
    single = recall(net, [3])
    assert single.order == (3,) and single.scores == {3: 0.0}


@pytest.mark.parametrize("kernel", KERNELS)
def test_recall_after_deleting_ranks_2_and_5(kernel):
    net = store(EXAMPLE_RANK, kernel)
    keep = [u for u in range(6) if EXAMPLE_RANK[u] not in (2, 5)]
    assert recall(net, keep).order == by_rank(EXAMPLE_RANK, keep)


def test_deletion_robustness_constant_kernel():
    for n in range(1, 7):
        for perm in permutations(range(1, n + 1)):
            net = store(perm, "constant")
            for mask in range(1, 2 ** n):
                active = [u for u in range(n) if mask >> u & 1]
                assert recall(net, active).order == by_rank(perm, active)


def test_inverse_distance_summed_readout_misorders_sparse_subsets():
    # kept ranks {1, 6, 7}: rank 6 receives -1 from rank 7 and only +1/5 from rank 1
    perm = (1, 2, 3, 4, 5, 6, 7)
    result = recall(store(perm, "inverse-distance"), [0, 5, 6])
    assert result.scores[0] == pytest.approx(-(1 / 5 + 1 / 6))
    assert result.scores[5] == pytest.approx(1 / 5 - 1)
    assert result.order == (5, 0, 6)


@pytest.mark.parametrize("kernel", KERNELS)
def test_scale_invariance(kernel):
    rng = np.random.default_rng(4)
    for _ in range(100):
        rank = tuple(rng.permutation(9) + 1)
        net = store(rank, kernel)
        active = [u for u in range(9) if rng.random() < 0.7] or [0]
        for c in (0.01, 3.0, 1e6):
            assert recall(net.scaled(c), active).order == recall(net, active).order


def test_perturb_zero_and_determinism():
    net = store(EXAMPLE_RANK)
    assert perturb(net, 0.0, 1) is net
    a, b = perturb(net, 0.2, 99), perturb(net, 0.2, 99)
    assert np.array_equal(a.W, b.W)
    assert not np.array_equal(a.W, perturb(net, 0.2, 100).W)
    assert np.max(np.abs(a.W - net.W)) <= 0.2
    with pytest.raises(ValueError):
        perturb(net, -1, 0)


@pytest.mark.parametrize("kernel", KERNELS)
def test_noise_below_margin_keeps_recall(kernel):
    rng = np.random.default_rng(8)
    for _ in range(300):
        n = int(rng.integers(2, 33))
        rank = tuple(rng.permutation(n) + 1)
        net = store(rank, kernel)
        eps = noise_margin(net)
        assert eps > 0
        for s in range(3):
            assert recall(perturb(net, 0.999 * eps, int(rng.integers(2**63)))).order == by_rank(rank)


def test_noise_margin_constant_value():
    # constant kernel: adjacent scores differ by 2, so epsilon* = 2 / (2 (n - 1))
    assert noise_margin(store(EXAMPLE_RANK)) == pytest.approx(1 / 5)
    assert noise_margin(store([1])) == float("inf")


def test_large_noise_smoke():
    net = perturb(store(EXAMPLE_RANK), 50.0, 3)
    assert sorted(recall(net).order) == list(range(6))


def test_insertion_of_unconnected_units():
    net = insert_units(store(EXAMPLE_RANK), ["x", "y"])
    res = recall(net, [0, "x", 1, 2, "y", 3, 4, 5])
    original = [u for u in res.order if u not in ("x", "y")]
    assert tuple(original) == by_rank(EXAMPLE_RANK)
    assert res.scores["x"] == 0 and res.scores["y"] == 0


def test_recall_errors():
    net = store(EXAMPLE_RANK)
    with pytest.raises(EmptyCue):
        recall(net, [])
    with pytest.raises(UnknownUnit):
        recall(net, [0, 42])


def test_weight_matrix_json_roundtrip():
    net = store(EXAMPLE_RANK, "invdist", unit_ids=list("abcdef"))
    obj = net.to_json()
    assert obj["kernel"] == "inverse-distance" and len(obj["weights"]) == 36
    again = WeightMatrix.from_json(obj)
    assert np.array_equal(again.W, net.W) and again.unit_ids == net.unit_ids
    assert recall(again).order == tuple("abcdef"[u] for u in by_rank(EXAMPLE_RANK))
