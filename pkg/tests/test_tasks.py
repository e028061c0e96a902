import warnings
from itertools import product

import pytest
from hypothesis import given, strategies as st

from ordinalcode.errors import DegenerateTemplate, EmptySequence, LengthMismatch, PreconditionViolation
from ordinalcode.tasks import (
    TaskSetAgent,
    Template,
    Violation,
    complete_template,
    constant_env,
    harlow_episode,
    same_structure,
    structure_signature,
    template_match,
)

tokens = st.lists(st.sampled_from("abcdefg"), min_size=1, max_size=10)


@pytest.mark.parametrize(
    "seq, pattern",
    [
        (["to", "to", "bu"], "AAB"),
        (["pe", "si", "pe"], "ABA"),
        ([1, 2, 3], "ABC"),
        (["x"], "A"),
        (list(range(30)), "ABCDEFGHIJKLMNOPQRSTUVWXYZabcd"),
    ],
)
def test_signature_examples(seq, pattern):
    assert structure_signature(seq).pattern == pattern


def test_signature_empty():
    with pytest.raises(EmptySequence):
        structure_signature([])


def test_same_structure():
    assert same_structure(["ga", "ga", "ri"], ["mi", "mi", "tu"])
    assert not same_structure(["ga", "ga", "ri"], ["pe", "si", "pe"])


@given(tokens, st.permutations("abcdefg"))
def test_signature_relabel_invariant(seq, image):
    relabel = dict(zip("abcdefg", image))
    assert structure_signature(seq) == structure_signature([relabel[t] for t in seq])


@given(tokens, tokens, tokens)
def test_same_structure_is_equivalence(a, b, c):
    assert same_structure(a, a)
    assert same_structure(a, b) == same_structure(b, a)
    if same_structure(a, b) and same_structure(b, c):
        assert same_structure(a, c)


def test_xyx_examples():
    xyx = Template.parse("XYX")
    assert template_match(xyx, ["object1", "hide", "object1"]) == {"X": "object1", "Y": "hide"}
    v = template_match(xyx, ["object1", "hide", "object2"])
    assert isinstance(v, Violation) and v.position == 3 and not v


def test_template_fixed_binding():
    tpl = Template.parse("XYX", fixed={"Y": "hide"})
    assert isinstance(template_match(tpl, ["a", "hide", "a"]), dict)
    assert template_match(tpl, ["a", "show", "a"]).position == 2


def test_template_distinct_flag():
    assert isinstance(template_match(Template.parse("XYX"), ["a", "a", "a"]), dict)
    v = template_match(Template.parse("XYX", distinct=True), ["a", "a", "a"])
    assert isinstance(v, Violation) and v.position == 2


def test_template_length_mismatch():
    with pytest.raises(LengthMismatch):
        template_match(Template.parse("XYX"), ["a", "b"])


def test_degenerate_template_warns():
    tpl = Template.parse("XYZ")
    assert tpl.degenerate
    with pytest.warns(DegenerateTemplate):
        assert isinstance(template_match(tpl, ["a", "b", "c"]), dict)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        template_match(Template.parse("XYX"), ["a", "b", "a"])


def test_xyx_exhaustive():
    xyx = Template.parse("XYX")
    for size in range(1, 5):
        for seq in product(range(size), repeat=3):
            matched = isinstance(template_match(xyx, seq), dict)
            assert matched == (seq[0] == seq[2])


def test_complete_template():
    xyx = Template.parse("XYX")
    assert complete_template(xyx, ["cup", "hide"]) == ["cup"]
    assert complete_template(xyx, ["cup"]) == [None, "cup"]
    assert complete_template(xyx, []) == [None, None, None]


def test_harlow_examples():
    hit = harlow_episode(TaskSetAgent("A"), constant_env("A"))
    assert (hit.choices, hit.rewards, hit.strategy) == ("AAAAAA", 6, "XXXXXX")
    miss = harlow_episode(TaskSetAgent("A"), constant_env("B"))
    assert (miss.choices, miss.rewards, miss.strategy) == ("ABBBBB", 5, "XYYYYY")
    assert [r.trial for r in miss.records] == [1, 2, 3, 4, 5, 6]


def test_harlow_adversarial_env():
    with pytest.raises(PreconditionViolation):
        harlow_episode(TaskSetAgent("A"), lambda t: "A" if t < 3 else "B")
    with pytest.raises(PreconditionViolation):
        harlow_episode(TaskSetAgent("A"), constant_env("C"))


def test_harlow_seeded_agent():
    agent = TaskSetAgent(seed=7)
    doors = [agent.first_door(e) for e in range(40)]
    assert doors == [TaskSetAgent(seed=7).first_door(e) for e in range(40)]
    assert set(doors) == {"A", "B"}
    for e in range(40):
        for door in "AB":
            assert harlow_episode(agent, constant_env(door), episode=e).rewards >= 5


def test_agent_rejects_unknown_door():
    with pytest.raises(ValueError):
        TaskSetAgent("C")
