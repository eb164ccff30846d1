"""Syllabification of phonetic transcriptions with an HMM over phone
categories, plus a genetic algorithm that learns the categories."""

from .corpus import Corpus, FoldSplit, import_celex, kfold_split, load_corpus, read_corpus
from .evaluation import EvalReport, cross_validate, evaluate
from .evolve import EvolutionHistory, GaConfig, evolve, fitness
from .hmm import HmmModel, load_model, save_model, syllabify, train, viterbi
from .phonology import (
    AnnotatedWord,
    CategoryMap,
    PhoneAlphabet,
    Syllabification,
    categorize,
    parse_annotated,
    render,
)

__all__ = [
    "AnnotatedWord",
    "CategoryMap",
    "Corpus",
    "EvalReport",
    "EvolutionHistory",
    "FoldSplit",
    "GaConfig",
    "HmmModel",
    "PhoneAlphabet",
    "Syllabification",
    "categorize",
    "cross_validate",
    "evaluate",
    "evolve",
    "fitness",
    "import_celex",
    "kfold_split",
    "load_corpus",
    "load_model",
    "parse_annotated",
    "read_corpus",
    "render",
    "save_model",
    "syllabify",
    "train",
    "viterbi",
]

__version__ = "0.1.0"
