"""Marked length spectrum against the independent disk-model oracle."""

import math

import numpy as np
import pytest

from pwhyp import library
from pwhyp.flow import Flow
from pwhyp.straighten import (
    DegenerateClass,
    NotClosed,
    marked_length,
    parse_crossing_word,
)

from diskmodel import BolzaOracle

SYSTOLE = 2 * math.acosh(1 + math.sqrt(2))


@pytest.fixture(scope="module")
def bolza():
    return Flow(library.bolza_regular_metric())


@pytest.fixture(scope="module")
def oracle(bolza):
    return BolzaOracle(bolza.complex)


def random_reduced_word(rng, max_len=6):
    letters = "abcd"
    while True:
        n = int(rng.integers(1, max_len + 1))
        toks = []
        for _ in range(n):
            e = letters[rng.integers(4)]
            s = "+-"[rng.integers(2)]
            if toks and toks[-1][0] == e and toks[-1][1] != s:
                continue
            toks.append(e + s)
        if not toks:
            continue
        if len(toks) > 1 and toks[0][0] == toks[-1][0] and toks[0][1] != toks[-1][1]:
            continue
        return " ".join(toks)


def test_systole(bolza, oracle):
    geo = marked_length(bolza, "a+")
    assert abs(geo.length - SYSTOLE) < 1e-10
    assert abs(geo.length - oracle.length("a+")) < 1e-12
    assert not geo.is_wall
    assert geo.n_visits >= 1
    assert geo.certificate["stationarity_residual"] < 1e-10


def test_all_generators_are_systoles(bolza):
    for e in "abcd":
        for s in "+-":
            geo = marked_length(bolza, f"{e}{s}")
            assert abs(geo.length - SYSTOLE) < 1e-10


def test_oracle_agreement_random_words(bolza, oracle):
    rng = np.random.default_rng(21)
    tested = 0
    while tested < 25:
        word = random_reduced_word(rng)
        try:
            geo = marked_length(bolza, word)
        except DegenerateClass:
            continue
        want = oracle.length(word)
        assert want > 0
        assert abs(geo.length - want) <= 1e-8 * want, word
        tested += 1


def test_homogeneity(bolza):
    rng = np.random.default_rng(22)
    for _ in range(5):
        word = random_reduced_word(rng, max_len=3)
        try:
            one = marked_length(bolza, word)
        except DegenerateClass:
            continue
        two = marked_length(bolza, word + " " + word)
        three = marked_length(bolza, " ".join([word] * 3))
        assert abs(two.length - 2 * one.length) < 1e-9 * max(1, 2 * one.length)
        assert abs(three.length - 3 * one.length) < 1e-9 * max(1, 3 * one.length)


def test_rotation_and_inversion_invariance(bolza):
    word = "a+ b+ c- d+"
    base = marked_length(bolza, word).length
    toks = word.split()
    for k in range(1, len(toks)):
        rot = " ".join(toks[k:] + toks[:k])
        assert abs(marked_length(bolza, rot).length - base) < 1e-9
    inv = " ".join(t[0] + ("-" if t[1] == "+" else "+") for t in reversed(toks))
    assert abs(marked_length(bolza, inv).length - base) < 1e-9


def test_degenerate_class(bolza):
    with pytest.raises(DegenerateClass):
        marked_length(bolza, "a+ a-")
    with pytest.raises(DegenerateClass):
        marked_length(bolza, "a+ b+ b- a-")


def test_malformed_words(bolza):
    with pytest.raises(NotClosed):
        marked_length(bolza, "")
    with pytest.raises(NotClosed):
        marked_length(bolza, "z+")
    with pytest.raises(NotClosed):
        parse_crossing_word(bolza.complex, "a*")


def test_gallery_arrays_are_consistent(bolza):
    geo = marked_length(bolza, "a+ b+")
    g = geo.gallery
    assert len(g.entry_slot) == geo.n_visits
    assert abs(float(np.sum(g.seg_len)) - geo.length) < 1e-10
    tab = bolza.tables
    # consecutive visits share the crossing edge, positions and angles mirror
    for i in range(geo.n_visits):
        j = (i + 1) % geo.n_visits
        assert tab.slot_edge[g.exit_slot[i]] == tab.slot_edge[g.entry_slot[j]]
        assert abs(g.exit_s[i] - g.entry_s[j]) < 1e-9
        assert abs(g.exit_thetaI[i] + g.entry_theta[j]) < 1e-9


def test_mls_invariant_under_metric_in_class(bolza):
    """Different admissible octagons give different lengths for most words
    (sanity that the metric actually enters)."""
    other = Flow(library.bolza_normal_metric(0.86, 0.72))
    word = "a+ b+"
    l_reg = marked_length(bolza, word).length
    l_other = marked_length(other, word).length
    assert abs(l_reg - l_other) > 1e-4


def test_asym_metric_systole_lengths_differ_by_edge():
    flow = Flow(library.bolza_normal_metric(0.86, 0.72))
    la = marked_length(flow, "a+").length
    lc = marked_length(flow, "c+").length
    # the (p q p q) and (p s p s) halves are genuinely different
    assert abs(la - lc) > 1e-6
