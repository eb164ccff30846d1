"""Shared fixtures and the independent brute-force decoding oracle."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

import pytest

from sylcat.hmm import HiddenState, HmmModel, Observation
from sylcat.phonology import CategoryMap, PhoneAlphabet

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# enough distinct symbols for any alphabet a test builds
PHONE_POOL = (
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0123456789{}@$&*+=!?%~^<>"
)


def brute_force_decode(
    model: HmmModel, observations: tuple[Observation, ...]
) -> tuple[int, ...]:
    """Score every boundary vector; max score, ties to the smaller vector.

    Accumulates left to right exactly like a path sum (initial, then per
    gap a transition followed by an emission) so score ties are exact.
    """
    best_score = None
    best_bits = None
    for bits in itertools.product((0, 1), repeat=len(observations)):
        states = [HiddenState(o.left, b) for o, b in zip(observations, bits)]
        score = model.log_initial(states[0])
        score = score + model.log_emission(states[0], observations[0])
        for t in range(1, len(observations)):
            score = score + model.log_transition(states[t - 1], states[t])
            score = score + model.log_emission(states[t], observations[t])
        if (
            best_score is None
            or score > best_score
            or (score == best_score and bits < best_bits)
        ):
            best_score = score
            best_bits = bits
    return best_bits


def random_counts_model(rand: random.Random, k: int) -> HmmModel:
    """A model with arbitrary sparse random count tables over K categories."""
    alphabet = PhoneAlphabet(PHONE_POOL[:k])
    cmap = CategoryMap(alphabet, k, tuple(range(k)))
    states = [HiddenState(c, b) for c in range(k) for b in (0, 1)]
    initial = {
        s: rand.randrange(1, 10) for s in states if rand.random() < 0.6
    }
    transition = {
        (a, b): rand.randrange(1, 10)
        for a in states
        for b in states
        if rand.random() < 0.4
    }
    emission = {
        (s, Observation(s.cat, right)): rand.randrange(1, 10)
        for s in states
        for right in range(k)
        if rand.random() < 0.5
    }
    alpha = rand.choice([0.01, 0.1, 0.5, 1.0])
    return HmmModel(cmap, alpha, initial, transition, emission)


def random_observations(
    rand: random.Random, k: int, gaps: int
) -> tuple[Observation, ...]:
    cats = [rand.randrange(k) for _ in range(gaps + 1)]
    return tuple(Observation(a, b) for a, b in zip(cats, cats[1:]))


@pytest.fixture
def paper_map() -> CategoryMap:
    """The worked-example mapping: b->b; {,E->a; s,n,t->c (a=0, b=1, c=2)."""
    return CategoryMap.from_assignment(
        {"{": 0, "b": 1, "s": 2, "E": 0, "n": 2, "t": 2}, k=3
    )


@pytest.fixture(scope="session")
def mini_corpus_path() -> Path:
    return DATA_DIR / "mini_en.tsv"
