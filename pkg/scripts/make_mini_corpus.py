"""Generate the bundled mini corpus (data/mini_en.tsv).

Synthetic English-like words in a DISC-style one-character-per-phone
alphabet.  Words are assembled from weighted onset/nucleus/coda
templates, then syllable boundaries are assigned by a deterministic
maximal-onset rule, so the gold segmentation is a consistent function of
the phone string.

Cluster phonotactics are class-pure: which consonant pairs make a legal
onset depends only on the phones' classes (sibilant+stop, stop+liquid,
and so on).  Class behavior is therefore regular while the consonant
inventory keeps a long tail of rare phones, so per-phone statistics stay
sparse.  That is the regime where a learned many-to-one categorization
beats per-phone modeling on held-out words.

Run from the repo root:  python scripts/make_mini_corpus.py
"""

from __future__ import annotations

import random
from pathlib import Path

SEED = 20260809
TARGET_WORDS = 3000

# nuclei: (phone, weight)
VOWELS = [
    ("I", 20), ("E", 16), ("{", 14), ("@", 22), ("i", 12), ("u", 8),
    ("V", 7), ("Q", 6), ("U", 4), ("1", 5), ("2", 4), ("5", 3),
    ("3", 2), ("4", 1), ("6", 1), ("7", 1),
]

# consonant classes; cluster legality is defined on these
SIBILANT = [("s", 14), ("S", 4)]
STOP = [("t", 16), ("d", 10), ("k", 12), ("p", 9), ("b", 8), ("g", 5)]
NASAL = [("m", 10), ("n", 12), ("N", 6)]          # N is coda-only
LIQUID = [("l", 9), ("r", 10)]
GLIDE = [("w", 5), ("j", 3), ("h", 6)]            # onset-only
FRIC = [("f", 7), ("v", 4), ("z", 3), ("T", 2), ("D", 2), ("Z", 1), ("x", 1)]
AFFRICATE = [("J", 2), ("_", 2)]

ONSET_SINGLES = (
    SIBILANT + STOP + [("m", 10), ("n", 12)] + LIQUID + GLIDE + FRIC + AFFRICATE
)
CODA_SINGLES = (
    SIBILANT + STOP + NASAL + LIQUID
    + [("f", 4), ("v", 2), ("z", 4), ("T", 2), ("D", 1), ("Z", 1), ("x", 2)]
    + [("J", 1), ("_", 1)]
)

# legal onset clusters, by class: sibilant+{stop,nasal,liquid} and
# stop+{liquid,glide-w/j}; every member pair of a legal class pair is legal
_ONSET_PAIR_CLASSES = [
    (SIBILANT, STOP, 6),
    (SIBILANT, [("m", 10), ("n", 12)], 2),
    (SIBILANT, LIQUID, 2),
    (STOP, LIQUID, 4),
    (STOP, [("w", 5), ("j", 3)], 1),
]

SYLLABLE_COUNT = [(1, 14), (2, 40), (3, 31), (4, 15)]

SPELLING = {
    "{": "a", "@": "e", "V": "u", "Q": "o", "U": "oo", "i": "ee",
    "1": "ay", "2": "igh", "5": "oa", "3": "er", "4": "oy", "6": "ow",
    "7": "eer", "I": "i", "E": "e", "u": "ou",
    "S": "sh", "Z": "zh", "T": "th", "D": "dh", "N": "ng",
    "J": "ch", "_": "j", "x": "kh",
}


def _pick(rng: random.Random, weighted):
    total = sum(w for _, w in weighted)
    target = rng.random() * total
    acc = 0.0
    for item, w in weighted:
        acc += w
        if target < acc:
            return item
    return weighted[-1][0]


def _pick_cluster(rng: random.Random) -> str:
    pair = _pick(rng, [((l, r), w) for l, r, w in _ONSET_PAIR_CLASSES])
    return _pick(rng, pair[0]) + _pick(rng, pair[1])


def make_onset(rng: random.Random) -> str:
    r = rng.random()
    if r < 0.18:
        return ""
    if r < 0.80:
        return _pick(rng, ONSET_SINGLES)
    return _pick_cluster(rng)


def make_coda(rng: random.Random) -> str:
    if rng.random() >= 0.42:
        return ""
    if rng.random() < 0.78:
        return _pick(rng, CODA_SINGLES)
    # nasal+stop or liquid+stop or sibilant+stop codas
    left = _pick(rng, [(NASAL, 3), (LIQUID, 2), (SIBILANT, 2)])
    return _pick(rng, left) + _pick(rng, STOP)


def make_syllable(rng: random.Random, word_initial: bool) -> str:
    onset = make_onset(rng)
    if not word_initial and not onset and rng.random() < 0.8:
        onset = _pick(rng, ONSET_SINGLES)  # vowel-vowel joins stay rare
    return onset + _pick(rng, VOWELS) + make_coda(rng)


VOWEL_SET = {v for v, _ in VOWELS}
_CLASS_OF = {}
for name, members in (
    ("sib", SIBILANT),
    ("stop", STOP),
    ("nas", [("m", 0), ("n", 0)]),
    ("liq", LIQUID),
    ("gli", [("w", 0), ("j", 0)]),
):
    for phone, _ in members:
        _CLASS_OF[phone] = name
_LEGAL_PAIR_CLASSES = {
    ("sib", "stop"),
    ("sib", "nas"),
    ("sib", "liq"),
    ("stop", "liq"),
    ("stop", "gli"),
}
ONSET_CAPABLE = {p for p, _ in ONSET_SINGLES}


def _legal_onset(cluster: str) -> bool:
    if len(cluster) == 1:
        return cluster in ONSET_CAPABLE
    if len(cluster) == 2:
        pair = (_CLASS_OF.get(cluster[0]), _CLASS_OF.get(cluster[1]))
        return pair in _LEGAL_PAIR_CLASSES
    return False


def syllabify_by_rule(phones: str) -> list[int]:
    """Boundary bits from the maximal-onset rule.

    Consonants between two nuclei join the right syllable's onset as the
    longest legal onset; the rest close the left syllable.
    """
    nuclei = [i for i, p in enumerate(phones) if p in VOWEL_SET]
    bits = [0] * (len(phones) - 1)
    for left, right in zip(nuclei, nuclei[1:]):
        split = right
        for start in range(left + 1, right):
            if _legal_onset(phones[start:right]):
                split = start
                break
        bits[split - 1] = 1
    return bits


def spell(phones: str) -> str:
    return "".join(SPELLING.get(p, p) for p in phones)


def make_corpus(rng: random.Random, count: int) -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    seen: set[str] = set()
    while len(rows) < count:
        n_syll = _pick(rng, SYLLABLE_COUNT)
        phones = "".join(
            make_syllable(rng, word_initial=(i == 0)) for i in range(n_syll)
        )
        if phones in seen:
            continue
        seen.add(phones)
        bits = syllabify_by_rule(phones)
        parts = [phones[0]]
        for phone, bit in zip(phones[1:], bits):
            if bit:
                parts.append("-")
            parts.append(phone)
        rows.append((spell(phones), "".join(parts)))
    return rows


def main() -> None:
    rng = random.Random(SEED)
    rows = make_corpus(rng, TARGET_WORDS)
    out = Path(__file__).resolve().parent.parent / "data" / "mini_en.tsv"
    out.parent.mkdir(exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("# Synthetic syllabified mini corpus; see scripts/make_mini_corpus.py\n")
        fh.write(f"# {len(rows)} entries, generator seed {SEED}\n")
        for orth, transcription in rows:
            fh.write(f"{orth}\t{transcription}\n")
    print(f"wrote {len(rows)} words to {out}")


if __name__ == "__main__":
    main()
