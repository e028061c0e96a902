"""Acceptance suites run by ``ordinalcode verify``.

Each suite returns a :class:`RunReport` with one :class:`Criterion` per
checked property. Reports never contain wall-clock values, so identical
configurations give byte-identical report files.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
import numpy as np

from . import autoencoder as ae
from .config import ExperimentConfig, derive_seed
from .core import all_rank_codes, rank_code, rank_order_weights, response_numerators, stdp_weights
from .errors import UnknownSuite
from .huffman import SymbolTable, build_codec, entropy
from .stdp import CONSTANT, INVERSE_DISTANCE, noise_margin, perturb, recall, store
from .tasks import (
    TaskSetAgent,
    Template,
    constant_env,
    harlow_episode,
    structure_signature,
    template_match,
)
from .trees import dyck_validate, is_stack_sortable, stack_order_tree, tree_order_weights, tree_to_dyck

EXAMPLE_SEQ = (18, 13, 8, 14, 5, 19)
CATALAN = (1, 2, 5, 14, 42, 132, 429, 1430)


@dataclass(frozen=True)
class Criterion:
    suite: str
    name: str
    passed: bool
    measured: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.suite}/{self.name}: {self.measured}"


@dataclass
class RunReport:
    suite: str
    config_hash: str
    criteria: list = field(default_factory=list)
    runtime: float = 0.0
    time_limit: float = float("inf")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def check(self, name: str, passed: bool, measured: str) -> None:
        self.criteria.append(Criterion(self.suite, name, bool(passed), measured))

    def rows(self) -> list:
        return [
            {
                "suite": c.suite,
                "criterion": c.name,
                "passed": c.passed,
                "measured": c.measured,
                "config_hash": self.config_hash,
            }
            for c in self.criteria
        ]


def has_231(perm) -> bool:
    """Brute-force search for indices i<j<k with p[k] < p[i] < p[j]."""
    return any(perm[k] < perm[i] < perm[j] for i, j, k in combinations(range(len(perm)), 3))


def _fmt(ws) -> str:
    return "[" + ",".join(str(w) for w in ws) + "]"


def suite_fig3f(cfg: ExperimentConfig, report: RunReport) -> None:
    f = Fraction
    stdp = stdp_weights(len(EXAMPLE_SEQ)).weights
    report.check(
        "stdp_weights",
        stdp == (f(1, 6), f(1, 5), f(1, 4), f(1, 3), f(1, 2), f(1)),
        _fmt(stdp),
    )
    rank = rank_code(EXAMPLE_SEQ)
    report.check("rank_code", rank.ranks == (5, 3, 2, 4, 1, 6), str(list(rank.ranks)))
    row = rank_order_weights(rank).weights
    report.check(
        "rank_order_weights",
        row == (f(1, 2), f(1, 4), f(1, 5), f(1, 3), f(1, 6), f(1)),
        _fmt(row),
    )
    tree = tree_order_weights(EXAMPLE_SEQ).weights
    expected_set = {f(1, 2), f(1, 4), f(1, 8), f(3, 8), f(1, 16), f(3, 4)}
    report.check("tree_weight_set", set(tree) == expected_set and len(tree) == 6, _fmt(sorted(tree)))
    report.check(
        "tree_weight_mapping",
        tree == (f(1, 2), f(1, 4), f(1, 8), f(3, 8), f(1, 16), f(3, 4)),
        _fmt(tree),
    )


def suite_argmax(cfg: ExperimentConfig, report: RunReport) -> None:
    for n in range(1, 8):
        codes = all_rank_codes(n)
        unique = 0
        for start in range(0, len(codes), 1024):
            block = codes[start:start + 1024]
            num, _ = response_numerators(codes, block)  # rows: inputs, cols: stored
            best = num.max(axis=0)
            winners = (num == best).sum(axis=0)
            at_self = num[np.arange(start, start + len(block)), np.arange(len(block))] == best
            unique += int(np.sum((winners == 1) & at_self))
        report.check(f"unique_argmax_N{n}", unique == len(codes), f"{unique}/{len(codes)}")


def suite_catalan(cfg: ExperimentConfig, report: RunReport) -> None:
    for n in range(1, 9):
        words = set()
        valid = True
        for perm in permutations(range(1, n + 1)):
            word = tree_to_dyck(stack_order_tree(perm))
            valid &= dyck_validate(word) and len(word) == 2 * n
            words.add(word)
        report.check(
            f"catalan_N{n}",
            len(words) == CATALAN[n - 1] and valid,
            f"{len(words)} distinct words (expected {CATALAN[n - 1]}), all valid={valid}",
        )
    agree = total = 0
    for n in range(1, 9):
        for perm in permutations(range(1, n + 1)):
            total += 1
            agree += is_stack_sortable(perm) == (not has_231(perm))
    report.check("stack_sortable_vs_231", agree == total, f"{agree}/{total} agree")


def _random_perm(rng, n: int) -> tuple:
    return tuple(int(x) + 1 for x in rng.permutation(n))


def suite_stdp_recall(cfg: ExperimentConfig, report: RunReport) -> None:
    for kernel in (CONSTANT, INVERSE_DISTANCE):
        exact = exact_total = kept = kept_total = 0
        counterexample = None
        for n in range(1, 8):
            units = tuple(range(n))
            subsets = [
                [u for u in units if mask >> u & 1] for mask in range(1, 2 ** n)
            ]
            for perm in permutations(range(1, n + 1)):
                net = store(perm, kernel)
                expected = tuple(sorted(units, key=lambda u: perm[u]))
                exact_total += 1
                exact += recall(net).order == expected
                for active in subsets:
                    kept_total += 1
                    want = tuple(u for u in expected if u in active)
                    got = recall(net, active).order
                    kept += got == want
                    if got != want and counterexample is None:
                        counterexample = sorted(perm[u] for u in active)
        report.check(f"exact_recall_{kernel}", exact == exact_total, f"{exact}/{exact_total}")
        detail = f"{kept}/{kept_total}"
        if counterexample is not None:
            detail += f"; first failing kept ranks {counterexample}"
        report.check(f"deletion_recall_{kernel}", kept == kept_total, detail)

    rng = np.random.default_rng(derive_seed(cfg.seed, "stdp-noise"))
    ok = 0
    trials = 1000
    for t in range(trials):
        n = int(rng.integers(2, 33))
        perm = _random_perm(rng, n)
        kernel = (CONSTANT, INVERSE_DISTANCE)[t % 2]
        net = store(perm, kernel)
        eps = noise_margin(net)
        noisy = perturb(net, 0.999 * eps, int(rng.integers(0, 2**63)))
        antisym = np.allclose(noisy.W, -noisy.W.T) and not np.any(np.diag(noisy.W))
        ok += eps > 0 and antisym and recall(noisy).order == recall(net).order
    report.check("noise_margin", ok == trials, f"{ok}/{trials} patterns recalled below margin")


def distinct_rank_sequences(rng, count: int, n: int) -> list:
    """``count`` sequences of distinct integers with pairwise different rank codes."""
    if n <= 8:
        codes = all_rank_codes(n)
        perms = [tuple(int(r) for r in codes[i]) for i in rng.choice(len(codes), size=count, replace=False)]
    else:
        seen: set = set()
        while len(seen) < count:
            seen.add(_random_perm(rng, n))
        perms = sorted(seen)
    out = []
    for perm in perms:
        values = np.sort(rng.choice(10 * n + 1000, size=n, replace=False))
        out.append(tuple(int(values[r - 1]) for r in perm))
    return out


MONOTONE_MAPS: tuple = (
    ("affine", lambda x: 3 * x + 7),
    ("shift", lambda x: x - 1000),
    ("cube", lambda x: x ** 3),
    ("log", lambda x: float(np.log1p(x))),
    ("scale", lambda x: x / 1000.0),
)


def suite_roundtrip(cfg: ExperimentConfig, report: RunReport) -> None:
    n, k = 6, 256
    pop = ae.YPopulation.random(k, n, derive_seed(cfg.seed, "seq-autoencoder"))
    book = ae.Codebook.empty(pop, cfg.theta)
    rng = np.random.default_rng(derive_seed(cfg.seed, "roundtrip-data"))
    seqs = distinct_rank_sequences(rng, 100, n)
    zs = []
    for s in seqs:
        book, z, _ = ae.learn(s, pop, book)
        zs.append(z)
    report.check("distinct_z", len(set(zs)) == 100 and len(book) == 100, f"{len(set(zs))} Z entries for 100 sequences")

    decoded = sum(ae.decode(z, sorted(s), book) == s for z, s in zip(zs, seqs))
    report.check("decode_exact", decoded == 100, f"{decoded}/100 reproduced")

    same = total = 0
    for z, s in zip(zs, seqs):
        for _, f in MONOTONE_MAPS:
            total += 1
            got, sim = ae.recognize([f(x) for x in s], pop, book)
            same += got == z and sim == 1.0
    report.check("content_invariance", same == total, f"{same}/{total} perturbations map to own Z at 1.0")

    # Structural sensitivity: every rank code except the stored one scores < 1
    target_z, target = zs[0], seqs[0]
    stored = rank_code(target).ranks
    entry = book.entry(target_z).vector()
    below = other = 0
    for code in all_rank_codes(n):
        code = tuple(int(c) for c in code)
        if code == stored:
            continue
        other += 1
        below += ae.cosine(ae.encode_rank(code, pop), entry) < 1.0
    report.check("non_matching_below_1", below == other == 719, f"{below}/{other} non-matching codes < 1.0")


def suite_huffman(cfg: ExperimentConfig, report: RunReport) -> None:
    rng = np.random.default_rng(derive_seed(cfg.seed, "huffman"))
    letters = [chr(ord("a") + i) for i in range(26)]
    ok = 0
    for _ in range(10_000):
        m = int(rng.integers(1, 27))
        alphabet = letters[:m]
        freqs = {s: int(rng.integers(1, 100)) for s in alphabet}
        codec = build_codec(freqs)
        stream = [alphabet[i] for i in rng.integers(0, m, size=int(rng.integers(0, 40)))]
        ok += codec.decode(codec.encode(stream)) == stream
    report.check("roundtrip", ok == 10_000, f"{ok}/10000 streams")

    kraft = bounds = 0
    for _ in range(1000):
        m = int(rng.integers(2, 27))
        table = SymbolTable(tuple((letters[i], int(rng.integers(1, 1000))) for i in range(m)))
        codec = build_codec(table)
        kraft += codec.kraft_sum() == 1
        h = entropy(table)
        length = codec.expected_length(table)
        # lower bound is an equality for dyadic tables; allow float rounding there only
        bounds += (h <= float(length) + 1e-12) and float(length) < h + 1
    report.check("kraft_equality", kraft == 1000, f"{kraft}/1000 tables sum to exactly 1")
    report.check("entropy_bounds", bounds == 1000, f"{bounds}/1000 tables with H <= L < H+1")


def suite_tasks(cfg: ExperimentConfig, report: RunReport) -> None:
    corpus = [
        (["to", "to", "bu"], "AAB"),
        (["ga", "ga", "ri"], "AAB"),
        (["mi", "mi", "tu"], "AAB"),
        (["pe", "si", "pe"], "ABA"),
    ]
    hits = sum(structure_signature(t).pattern == label for t, label in corpus)
    report.check("aab_aba_corpus", hits == len(corpus), f"{hits}/{len(corpus)} words classified")

    xyx = Template.parse("XYX")
    coherent = [["object1", "hide", "object1"], ["object2", "hide", "object2"]]
    impossible = [["object1", "hide", "object2"], ["object2", "hide", "object1"]]
    acc = sum(isinstance(template_match(xyx, s), dict) for s in coherent)
    rej = sum(not isinstance(template_match(xyx, s), dict) for s in impossible)
    report.check("xyx_templates", acc == 2 and rej == 2, f"accepted {acc}/2 coherent, rejected {rej}/2 impossible")

    results = []
    agents = [TaskSetAgent("A"), TaskSetAgent("B"), TaskSetAgent(seed=cfg.seed)]
    for agent in agents:
        for door in ("A", "B"):
            for episode in range(cfg.episodes):
                results.append(harlow_episode(agent, constant_env(door), 6, episode).rewards)
    worst = min(results)
    report.check("harlow_reward", worst >= 5, f"min reward {worst}/6 over {len(results)} episodes")


SUITES: dict = {
    "fig3f": (suite_fig3f, 1.0),
    "argmax": (suite_argmax, 60.0),
    "catalan": (suite_catalan, 120.0),
    "stdp-recall": (suite_stdp_recall, 300.0),
    "roundtrip": (suite_roundtrip, 60.0),
    "huffman": (suite_huffman, 60.0),
    "tasks": (suite_tasks, 1.0),
}


def run_suite(name: str, cfg: ExperimentConfig = None) -> RunReport:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    cfg = cfg or ExperimentConfig()
    fn, limit = SUITES[name]
    report = RunReport(name, cfg.hash(), time_limit=limit)
    start = time.perf_counter()
    fn(cfg, report)
    report.runtime = time.perf_counter() - start
    report.check("time_budget", report.runtime < limit, f"under {limit:g} s")
    return report
