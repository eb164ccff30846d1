"""First-order HMM over category bigrams with boundary-bit hidden states.

Each inter-phone gap t of a word carries one observation, the category
bigram ``(c_t, c_{t+1})``, and one hidden state, ``(c_t, bit_t)`` where
the bit says whether a syllable boundary sits in that gap.  With K
categories the state inventory has exactly 2K states.  Training is
supervised counting; decoding is Viterbi in log space with additive
smoothing, so unseen transitions never zero out a path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    ConfigError,
    EmptyWordError,
    ModelFormatError,
    NoTrainableWordsError,
    ShapeMismatchError,
    WordTooShortError,
)
from .phonology import (
    AnnotatedWord,
    CategoryMap,
    PhoneAlphabet,
    Syllabification,
    categorize,
)

DEFAULT_ALPHA = 0.1
MODEL_FORMAT_VERSION = 1


class Observation(NamedTuple):
    """The category bigram spanning one inter-phone gap."""

    left: int
    right: int


class HiddenState(NamedTuple):
    """The gap's left category plus its boundary bit."""

    cat: int
    bit: int


def encode_observations(categories: Sequence[int]) -> tuple[Observation, ...]:
    """Bigram-enumerate a category sequence; needs at least two phones."""
    if len(categories) < 2:
        raise WordTooShortError("need >= 2 phones to form a bigram")
    return tuple(
        Observation(a, b) for a, b in zip(categories, categories[1:])
    )


def encode_states(
    categories: Sequence[int], boundaries: Sequence[int]
) -> tuple[HiddenState, ...]:
    """Pair each gap's left category with its boundary bit."""
    if len(boundaries) != len(categories) - 1 or not boundaries:
        raise ShapeMismatchError(
            f"{len(boundaries)} bits for {len(categories)} categories"
        )
    return tuple(HiddenState(c, b) for c, b in zip(categories, boundaries))


@dataclass(frozen=True)
class HmmModel:
    """Smoothed count tables plus the category map they were trained with.

    Counts stay integers (probabilities are derived on demand), which makes
    serialization round-trips bit-exact.
    """

    cmap: CategoryMap
    alpha: float
    initial: dict[HiddenState, int]
    transition: dict[tuple[HiddenState, HiddenState], int]
    emission: dict[tuple[HiddenState, Observation], int]

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        for (state, obs), count in self.emission.items():
            if obs.left != state.cat and count:
                raise ModelFormatError(
                    f"emission {obs} inconsistent with state {state}"
                )

    @property
    def k(self) -> int:
        return self.cmap.k

    @property
    def num_states(self) -> int:
        return 2 * self.cmap.k

    @cached_property
    def _initial_total(self) -> int:
        return sum(self.initial.values())

    @cached_property
    def _transition_row_totals(self) -> dict[HiddenState, int]:
        totals: dict[HiddenState, int] = {}
        for (src, _), count in self.transition.items():
            totals[src] = totals.get(src, 0) + count
        return totals

    @cached_property
    def _emission_row_totals(self) -> dict[HiddenState, int]:
        totals: dict[HiddenState, int] = {}
        for (state, _), count in self.emission.items():
            totals[state] = totals.get(state, 0) + count
        return totals

    def log_initial(self, state: HiddenState) -> float:
        denom = self._initial_total + self.num_states * self.alpha
        return math.log((self.initial.get(state, 0) + self.alpha) / denom)

    def log_transition(self, src: HiddenState, dst: HiddenState) -> float:
        row = self._transition_row_totals.get(src, 0)
        denom = row + self.num_states * self.alpha
        return math.log((self.transition.get((src, dst), 0) + self.alpha) / denom)

    def log_emission(self, state: HiddenState, obs: Observation) -> float:
        if obs.left != state.cat:
            return float("-inf")
        row = self._emission_row_totals.get(state, 0)
        denom = row + self.cmap.k * self.alpha
        return math.log((self.emission.get((state, obs), 0) + self.alpha) / denom)


def train(
    words: Iterable[AnnotatedWord],
    cmap: CategoryMap,
    alpha: float = DEFAULT_ALPHA,
) -> HmmModel:
    """Accumulate supervised counts; single-phone words contribute nothing."""
    initial: dict[HiddenState, int] = {}
    transition: dict[tuple[HiddenState, HiddenState], int] = {}
    emission: dict[tuple[HiddenState, Observation], int] = {}
    trainable = 0
    for word in words:
        if len(word.phones) < 2:
            continue
        cats = categorize(word.phones, cmap)
        observations = encode_observations(cats)
        states = encode_states(cats, word.boundaries)
        trainable += 1
        initial[states[0]] = initial.get(states[0], 0) + 1
        for state, obs in zip(states, observations):
            emission[(state, obs)] = emission.get((state, obs), 0) + 1
        for src, dst in zip(states, states[1:]):
            transition[(src, dst)] = transition.get((src, dst), 0) + 1
    if not trainable:
        raise NoTrainableWordsError("no word has two or more phones")
    return HmmModel(cmap, alpha, initial, transition, emission)


def viterbi(model: HmmModel, observations: Sequence[Observation]) -> tuple[int, ...]:
    """Boundary bits of the maximum-score state path.

    At gap t only the states ``(o_t.left, 0)`` and ``(o_t.left, 1)`` are
    admissible.  Scores accumulate left to right (initial, then per gap a
    transition followed by an emission), and exact ties go to the path
    whose bits are lexicographically smallest -- bit 0 wins at the
    earliest step where tied paths differ.
    """
    if not observations:
        raise WordTooShortError("empty observation sequence")
    first = observations[0]
    frontier: list[tuple[float, tuple[int, ...]]] = []
    for bit in (0, 1):
        state = HiddenState(first.left, bit)
        score = model.log_initial(state) + model.log_emission(state, first)
        frontier.append((score, (bit,)))
    prev_left = first.left
    for obs in observations[1:]:
        nxt: list[tuple[float, tuple[int, ...]]] = []
        for bit in (0, 1):
            dst = HiddenState(obs.left, bit)
            best: tuple[float, tuple[int, ...]] | None = None
            for (score, path), prev_bit in zip(frontier, (0, 1)):
                src = HiddenState(prev_left, prev_bit)
                cand_score = (
                    score + model.log_transition(src, dst)
                ) + model.log_emission(dst, obs)
                cand = (cand_score, path + (bit,))
                if (
                    best is None
                    or cand_score > best[0]
                    or (cand_score == best[0] and cand[1] < best[1])
                ):
                    best = cand
            nxt.append(best)
        frontier = nxt
        prev_left = obs.left
    winner = frontier[0]
    for cand in frontier[1:]:
        if cand[0] > winner[0] or (cand[0] == winner[0] and cand[1] < winner[1]):
            winner = cand
    return winner[1]


def syllabify(model: HmmModel, phones: Sequence[str]) -> Syllabification:
    """Decode one word; a single phone is one syllable by definition."""
    if not phones:
        raise EmptyWordError("cannot syllabify an empty phone sequence")
    cats = categorize(phones, model.cmap)
    if len(phones) == 1:
        return Syllabification(tuple(phones), ())
    bits = viterbi(model, encode_observations(cats))
    return Syllabification(tuple(phones), bits)


def _state_text(state: HiddenState) -> str:
    return f"{state.cat}:{state.bit}"


def _parse_state(text: str) -> HiddenState:
    cat, _, bit = text.partition(":")
    if not _ or bit not in ("0", "1"):
        raise ModelFormatError(f"bad state {text!r}")
    return HiddenState(int(cat), int(bit))


def _obs_text(obs: Observation) -> str:
    return f"{obs.left},{obs.right}"


def _parse_obs(text: str) -> Observation:
    left, _, right = text.partition(",")
    if not _:
        raise ModelFormatError(f"bad observation {text!r}")
    return Observation(int(left), int(right))


def model_to_lines(model: HmmModel) -> list[str]:
    lines = [
        f"version\t{MODEL_FORMAT_VERSION}",
        f"k\t{model.cmap.k}",
        f"alpha\t{model.alpha!r}",
        "[map]",
    ]
    lines.extend(
        f"{p}\t{g}" for p, g in zip(model.cmap.alphabet.phones, model.cmap.genes)
    )
    lines.append("[initial]")
    for state in sorted(model.initial):
        lines.append(f"{_state_text(state)}\t{model.initial[state]}")
    lines.append("[transition]")
    for src, dst in sorted(model.transition):
        lines.append(
            f"{_state_text(src)}\t{_state_text(dst)}\t{model.transition[(src, dst)]}"
        )
    lines.append("[emission]")
    for state, obs in sorted(model.emission):
        lines.append(
            f"{_state_text(state)}\t{_obs_text(obs)}\t{model.emission[(state, obs)]}"
        )
    return lines


def model_from_lines(lines: Iterable[str]) -> HmmModel:
    header: dict[str, str] = {}
    phones: list[str] = []
    genes: list[int] = []
    initial: dict[HiddenState, int] = {}
    transition: dict[tuple[HiddenState, HiddenState], int] = {}
    emission: dict[tuple[HiddenState, Observation], int] = {}
    section: str | None = None
    for raw in lines:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            if section not in ("map", "initial", "transition", "emission"):
                raise ModelFormatError(f"unknown section [{section}]")
            continue
        fields = line.split("\t")
        try:
            if section is None:
                header[fields[0]] = fields[1]
            elif section == "map":
                phones.append(fields[0])
                genes.append(int(fields[1]))
            elif section == "initial":
                initial[_parse_state(fields[0])] = int(fields[1])
            elif section == "transition":
                key = (_parse_state(fields[0]), _parse_state(fields[1]))
                transition[key] = int(fields[2])
            else:
                ekey = (_parse_state(fields[0]), _parse_obs(fields[1]))
                emission[ekey] = int(fields[2])
        except (IndexError, ValueError) as exc:
            raise ModelFormatError(f"bad model line {line!r}: {exc}") from exc
    try:
        version = int(header["version"])
        k = int(header["k"])
        alpha = float(header["alpha"])
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"bad or missing header: {exc}") from exc
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {version}")
    cmap = CategoryMap(PhoneAlphabet(phones), k, tuple(genes))
    if any(count < 0 for table in (initial, transition, emission) for count in table.values()):
        raise ModelFormatError("negative count")
    ids = [s.cat for s in initial]
    ids += [s.cat for pair in transition for s in pair]
    ids += [s.cat for s, _ in emission] + [i for _, o in emission for i in o]
    if any(not 0 <= i < k for i in ids):
        raise ModelFormatError(f"category id out of range [0, {k})")
    return HmmModel(cmap, alpha, initial, transition, emission)


def save_model(model: HmmModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(model_to_lines(model)) + "\n")


def load_model(path) -> HmmModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_lines(fh)
