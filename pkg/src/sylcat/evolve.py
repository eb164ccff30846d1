"""Hybrid genetic algorithm over phone-category maps.

Fitness of a chromosome (a CategoryMap) is end-to-end: train the HMM on
the training share with that map, then measure exact-match word accuracy
on a fixed held-out share.  Selection is stochastic universal sampling,
mating is scattered crossover with a complementary second child, the
per-gene mutation rate adapts to the population's fitness spread, and a
periodic refinement pass sweeps the most error-prone phone of the best
member through every category.

Everything stochastic draws from streams derived from the config seed
plus (purpose, generation, index) labels, so results are identical no
matter how many worker processes evaluate fitness.
"""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from random import Random
from typing import Callable, Sequence

from . import rng
from .errors import AlphabetMismatchError, ConfigError, NoErrors, TooFewWordsError
from .hmm import DEFAULT_ALPHA, HmmModel, syllabify, train
from .phonology import AnnotatedWord, CategoryMap, PhoneAlphabet


@dataclass(frozen=True)
class GaConfig:
    """GA hyperparameters; defaults suit a desk-scale corpus."""

    k: int = 12
    population_size: int = 100
    max_generations: int = 500
    elite_count: int = 2
    rate_min: float = 0.01
    rate_max: float = 0.15
    sigma_ref: float = 0.02
    refine_period: int = 10
    alpha: float = DEFAULT_ALPHA
    holdout_fraction: float = 0.2
    seed: int = 0
    target_fitness: float | None = None

    def validate(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.population_size < 4:
            raise ConfigError(
                f"population_size must be >= 4, got {self.population_size}"
            )
        if self.max_generations < 1:
            raise ConfigError(
                f"max_generations must be >= 1, got {self.max_generations}"
            )
        if not 1 <= self.elite_count < self.population_size:
            raise ConfigError(
                f"elite_count must be in [1, population_size), got {self.elite_count}"
            )
        if not 0 <= self.rate_min <= self.rate_max <= 1:
            raise ConfigError(
                f"need 0 <= rate_min <= rate_max <= 1, got "
                f"{self.rate_min}..{self.rate_max}"
            )
        if self.sigma_ref <= 0:
            raise ConfigError(f"sigma_ref must be > 0, got {self.sigma_ref}")
        if self.refine_period < 1:
            raise ConfigError(f"refine_period must be >= 1, got {self.refine_period}")
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be > 0, got {self.alpha}")
        if not 0 < self.holdout_fraction < 1:
            raise ConfigError(
                f"holdout_fraction must be in (0, 1), got {self.holdout_fraction}"
            )
        if self.target_fitness is not None and not 0 <= self.target_fitness <= 1:
            raise ConfigError(
                f"target_fitness must be in [0, 1], got {self.target_fitness}"
            )


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best: float
    mean: float
    stddev: float
    mutation_rate: float


@dataclass(frozen=True)
class RefinementEvent:
    generation: int
    phone: str
    old_category: int
    new_category: int
    fitness_delta: float


@dataclass
class EvolutionHistory:
    """Per-generation fitness trace plus refinement events."""

    records: list[GenerationRecord] = field(default_factory=list)
    refinements: list[RefinementEvent] = field(default_factory=list)

    def to_csv_lines(self) -> list[str]:
        lines = ["generation,best,mean,stddev,mutation_rate"]
        lines.extend(
            f"{r.generation},{r.best!r},{r.mean!r},{r.stddev!r},{r.mutation_rate!r}"
            for r in self.records
        )
        lines.extend(
            f"# refine generation={e.generation} phone={e.phone} "
            f"old={e.old_category} new={e.new_category} delta={e.fitness_delta!r}"
            for e in self.refinements
        )
        return lines

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.to_csv_lines()) + "\n")


def random_population(
    alphabet: PhoneAlphabet, config: GaConfig, seed: int | None = None
) -> list[CategoryMap]:
    """population_size chromosomes with genes drawn uniformly from [0, K)."""
    if not len(alphabet):
        raise ConfigError("alphabet is empty")
    master = config.seed if seed is None else seed
    population = []
    for i in range(config.population_size):
        stream = rng.stream(master, "init", i)
        genes = tuple(stream.randrange(config.k) for _ in range(len(alphabet)))
        population.append(CategoryMap(alphabet, config.k, genes))
    return population


def fitness(
    chromosome: CategoryMap,
    train_words: Sequence[AnnotatedWord],
    holdout_words: Sequence[AnnotatedWord],
    alpha: float = DEFAULT_ALPHA,
) -> float:
    """Held-out exact-match word accuracy of an HMM trained under the map."""
    if not train_words or not holdout_words:
        raise TooFewWordsError("fitness needs non-empty train and holdout sets")
    model = train(train_words, chromosome, alpha)
    correct = sum(
        1
        for w in holdout_words
        if syllabify(model, w.phones).boundaries == w.boundaries
    )
    return correct / len(holdout_words)


def sus_select(
    population: Sequence,
    fitnesses: Sequence[float],
    count: int,
    stream: Random,
) -> list:
    """Stochastic universal sampling: evenly spaced pointers, one offset.

    Each individual is selected between floor and ceil of its expected
    copy count.  When total fitness is zero the same pointer walk runs
    with equal weights (uniform fallback).
    """
    if len(population) != len(fitnesses):
        raise ValueError("population and fitnesses differ in length")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if any(f < 0 for f in fitnesses):
        raise ValueError("fitnesses must be non-negative")
    weights = list(fitnesses)
    if not sum(weights) > 0:
        weights = [1.0] * len(population)
    total = sum(weights)
    step = total / count
    start = stream.random() * step
    picks = []
    cum = 0.0
    i = 0
    last = len(weights) - 1
    for j in range(count):
        pointer = start + j * step
        while i < last and cum + weights[i] <= pointer:
            cum += weights[i]
            i += 1
        picks.append(population[i])
    return picks


def crossover_with_mask(
    parent0: CategoryMap, parent1: CategoryMap, mask: Sequence[int]
) -> tuple[CategoryMap, CategoryMap]:
    """Scattered crossover under an explicit 0/1 mask.

    Child 0 takes parent 0's gene where the mask bit is 0 and parent 1's
    where it is 1; child 1 makes the complementary choice at every locus,
    so the parents' gene multiset is conserved per phone.
    """
    if parent0.alphabet != parent1.alphabet or parent0.k != parent1.k:
        raise AlphabetMismatchError("parents must share alphabet and k")
    if len(mask) != len(parent0.genes):
        raise AlphabetMismatchError("mask length must equal gene count")
    g0 = tuple(b if m else a for a, b, m in zip(parent0.genes, parent1.genes, mask))
    g1 = tuple(a if m else b for a, b, m in zip(parent0.genes, parent1.genes, mask))
    return (
        CategoryMap(parent0.alphabet, parent0.k, g0),
        CategoryMap(parent0.alphabet, parent0.k, g1),
    )


def scattered_crossover(
    parent0: CategoryMap, parent1: CategoryMap, stream: Random
) -> tuple[CategoryMap, CategoryMap]:
    """Scattered crossover with one uniform mask bit drawn per gene."""
    mask = tuple(stream.getrandbits(1) for _ in parent0.genes)
    return crossover_with_mask(parent0, parent1, mask)


def adaptive_mutation_rate(fitnesses: Sequence[float], config: GaConfig) -> float:
    """High rate when the population's fitness spread is tight, low when wide."""
    if len(fitnesses) < 2:
        raise ValueError("need at least two fitness values")
    sigma = statistics.pstdev(fitnesses)
    closeness = 1.0 - min(1.0, sigma / config.sigma_ref)
    return config.rate_min + (config.rate_max - config.rate_min) * closeness


def mutate(chromosome: CategoryMap, rate: float, stream: Random) -> CategoryMap:
    """Per gene, with probability rate, reassign to one of the K-1 other
    categories.

    Draws one uniform per gene in alphabet order, plus one randrange(K-1)
    when the gate fires.  K=1 is a no-op and consumes no randomness.
    """
    if not 0 <= rate <= 1:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    if chromosome.k == 1:
        return chromosome
    genes = list(chromosome.genes)
    changed = False
    for i in range(len(genes)):
        if stream.random() < rate:
            pick = stream.randrange(chromosome.k - 1)
            if pick >= genes[i]:
                pick += 1
            genes[i] = pick
            changed = True
    if not changed:
        return chromosome
    return CategoryMap(chromosome.alphabet, chromosome.k, tuple(genes))


def blame_phone(
    model: HmmModel,
    cmap: CategoryMap,
    holdout_words: Sequence[AnnotatedWord],
) -> str:
    """The phone most often flanking a wrongly decoded gap.

    Both phones around each erroneous gap are charged; ties break toward
    the phone earliest in the alphabet.  Raises NoErrors when decoding is
    perfect.
    """
    if not holdout_words:
        raise TooFewWordsError("holdout is empty")
    counts: dict[str, int] = {}
    for word in holdout_words:
        if len(word.phones) < 2:
            continue
        predicted = syllabify(model, word.phones).boundaries
        for t, (pred, gold) in enumerate(zip(predicted, word.boundaries)):
            if pred != gold:
                for phone in (word.phones[t], word.phones[t + 1]):
                    counts[phone] = counts.get(phone, 0) + 1
    if not counts:
        raise NoErrors("every holdout word decoded correctly")
    alphabet = cmap.alphabet
    return min(counts, key=lambda p: (-counts[p], alphabet.index(p)))


class _Evaluator:
    """Fitness evaluation with canonical-form memoization and optional
    process-pool parallelism.

    Chromosomes whose genes are equal up to category relabeling share one
    cache entry (fitness is relabeling-invariant).  Cache keys include k
    because smoothing denominators depend on it.
    """

    def __init__(
        self,
        train_words: Sequence[AnnotatedWord],
        holdout_words: Sequence[AnnotatedWord],
        alpha: float,
        jobs: int = 1,
        alphabet: PhoneAlphabet | None = None,
    ):
        self.train_words = tuple(train_words)
        self.holdout_words = tuple(holdout_words)
        self.alpha = alpha
        self.jobs = jobs
        self.alphabet = alphabet
        self._cache: dict[tuple[int, tuple[int, ...]], float] = {}
        self._pool: ProcessPoolExecutor | None = None

    def __enter__(self) -> _Evaluator:
        if self.jobs > 1:
            if self.alphabet is None:
                raise ValueError("parallel evaluation needs an explicit alphabet")
            self._pool = ProcessPoolExecutor(
                max_workers=self.jobs,
                initializer=_worker_init,
                initargs=(
                    self.train_words,
                    self.holdout_words,
                    self.alpha,
                    self.alphabet.phones,
                ),
            )
        return self

    def __exit__(self, *exc_info) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __call__(self, chromosome: CategoryMap) -> float:
        key = (chromosome.k, chromosome.canonical_genes())
        if key not in self._cache:
            self._cache[key] = fitness(
                chromosome, self.train_words, self.holdout_words, self.alpha
            )
        return self._cache[key]

    def evaluate_many(self, population: Sequence[CategoryMap]) -> list[float]:
        keys = [(c.k, c.canonical_genes()) for c in population]
        pending: dict[tuple[int, tuple[int, ...]], CategoryMap] = {}
        for key, chrom in zip(keys, population):
            if key not in self._cache and key not in pending:
                pending[key] = chrom
        if pending:
            items = list(pending.items())
            if self._pool is None:
                values = [self(chrom) for _, chrom in items]
            else:
                args = [(c.k, c.genes) for _, c in items]
                values = list(self._pool.map(_worker_fitness, args))
            for (key, _), value in zip(items, values):
                self._cache[key] = value
        return [self._cache[key] for key in keys]


_WORKER_CTX: tuple | None = None


def _worker_init(train_words, holdout_words, alpha, phones) -> None:
    # the exact alphabet order matters: genes are positional
    global _WORKER_CTX
    _WORKER_CTX = (train_words, holdout_words, alpha, PhoneAlphabet(phones))


def _worker_fitness(args: tuple[int, tuple[int, ...]]) -> float:
    k, genes = args
    train_words, holdout_words, alpha, alphabet = _WORKER_CTX
    chromosome = CategoryMap(alphabet, k, genes)
    return fitness(chromosome, train_words, holdout_words, alpha)


def _refine(
    evaluator: _Evaluator, chromosome: CategoryMap, phone: str
) -> tuple[CategoryMap, float, int, int]:
    """Sweep one phone through every category; keep the fittest variant.

    Ties go to the lowest category id.  The original assignment is among
    the candidates, so fitness never decreases.
    """
    old_cat = chromosome.category_of(phone)
    best_cat = 0
    best_fit = -1.0
    for cat in range(chromosome.k):
        candidate = (
            chromosome if cat == old_cat else chromosome.with_gene(phone, cat)
        )
        value = evaluator(candidate)
        if value > best_fit:
            best_cat, best_fit = cat, value
    variant = (
        chromosome if best_cat == old_cat else chromosome.with_gene(phone, best_cat)
    )
    return variant, best_fit, old_cat, best_cat


def refine_best(
    best: CategoryMap,
    phone: str,
    train_words: Sequence[AnnotatedWord],
    holdout_words: Sequence[AnnotatedWord],
    config: GaConfig,
) -> CategoryMap:
    """Public single-shot refinement; see _refine."""
    with _Evaluator(train_words, holdout_words, config.alpha) as evaluator:
        variant, _, _, _ = _refine(evaluator, best, phone)
    return variant


def split_holdout(
    words: Sequence[AnnotatedWord], config: GaConfig
) -> tuple[tuple[AnnotatedWord, ...], tuple[AnnotatedWord, ...]]:
    """The fixed seeded train/holdout split used by every fitness call.

    A seeded shuffle marks holdout_fraction of the words (at least one,
    never all) as holdout.  If the training side would end up with no
    multi-phone word, the first such word (in corpus order) is moved back
    from the holdout.
    """
    words = tuple(words)
    n = len(words)
    if n < 2:
        raise TooFewWordsError(f"cannot split {n} word(s)")
    order = list(range(n))
    rng.stream(config.seed, "holdout").shuffle(order)
    n_hold = min(n - 1, max(1, round(n * config.holdout_fraction)))
    holdout_idx = set(order[:n_hold])
    trainable = {i for i, w in enumerate(words) if len(w.phones) >= 2}
    if trainable and trainable <= holdout_idx:
        holdout_idx.discard(min(trainable))
    train_words = tuple(w for i, w in enumerate(words) if i not in holdout_idx)
    holdout_words = tuple(words[i] for i in sorted(holdout_idx))
    return train_words, holdout_words


def evolve(
    words: Sequence[AnnotatedWord],
    config: GaConfig,
    *,
    alphabet: PhoneAlphabet | None = None,
    jobs: int = 1,
    on_generation: Callable[[GenerationRecord], None] | None = None,
) -> tuple[CategoryMap, EvolutionHistory]:
    """Run the GA; returns the best chromosome and the fitness trace.

    ``alphabet`` defaults to the phones of ``words``; pass a wider one to
    give unseen phones a gene (cross-validation does).  ``jobs`` controls
    parallel fitness evaluation and never changes the result.
    """
    config.validate()
    words = tuple(words)
    if sum(1 for w in words if len(w.phones) >= 2) < 2:
        raise TooFewWordsError("need at least two words of length >= 2")
    if alphabet is None:
        alphabet = PhoneAlphabet(p for w in words for p in w.phones)
    fit_train, holdout = split_holdout(words, config)
    history = EvolutionHistory()
    population = random_population(alphabet, config)
    with _Evaluator(fit_train, holdout, config.alpha, jobs, alphabet) as evaluator:
        fits = evaluator.evaluate_many(population)
        for gen in range(config.max_generations):
            if (gen + 1) % config.refine_period == 0:
                best_i = min(range(len(fits)), key=lambda i: (-fits[i], i))
                model = train(fit_train, population[best_i], config.alpha)
                try:
                    phone = blame_phone(model, population[best_i], holdout)
                except NoErrors:
                    phone = None
                if phone is not None:
                    variant, new_fit, old_cat, new_cat = _refine(
                        evaluator, population[best_i], phone
                    )
                    history.refinements.append(
                        RefinementEvent(
                            gen, phone, old_cat, new_cat, new_fit - fits[best_i]
                        )
                    )
                    population[best_i] = variant
                    fits[best_i] = new_fit
            rate = adaptive_mutation_rate(fits, config)
            best_fit = max(fits)
            history.records.append(
                GenerationRecord(
                    gen,
                    best_fit,
                    statistics.fmean(fits),
                    statistics.pstdev(fits),
                    rate,
                )
            )
            if on_generation is not None:
                on_generation(history.records[-1])
            if config.target_fitness is not None and best_fit >= config.target_fitness:
                break
            if gen == config.max_generations - 1:
                break
            by_fitness = sorted(range(len(fits)), key=lambda i: (-fits[i], i))
            elites = [population[i] for i in by_fitness[: config.elite_count]]
            n_children = config.population_size - config.elite_count
            pairs = (n_children + 1) // 2
            select_stream = rng.stream(config.seed, "select", gen)
            parents = sus_select(population, fits, 2 * pairs, select_stream)
            select_stream.shuffle(parents)
            children: list[CategoryMap] = []
            for p in range(pairs):
                c0, c1 = scattered_crossover(
                    parents[2 * p],
                    parents[2 * p + 1],
                    rng.stream(config.seed, "cross", gen, p),
                )
                children.extend((c0, c1))
            children = children[:n_children]
            population = elites + [
                mutate(child, rate, rng.stream(config.seed, "mutate", gen, i))
                for i, child in enumerate(children)
            ]
            fits = evaluator.evaluate_many(population)
    best_i = min(range(len(fits)), key=lambda i: (-fits[i], i))
    return population[best_i], history
