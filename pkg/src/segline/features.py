"""Per-character feature vectors for boundary classification.

Each classifiable character (every character of a super-token except the
last) gets a fixed-length vector: windowed character identities, first/last
characters of the neighbouring super-tokens, 'vocalic letter' flags, fifteen
lexicon lookups over substrings around the character, lengths, position and a
smoothed frequency ratio.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .corpus import Sentence
from .lexicon import MISS, Lexicon

HEBREW_LETTERS = frozenset(chr(c) for c in range(0x05D0, 0x05EB))
HEBREW_VOWEL_LETTERS = frozenset("אהוי")
# ASCII transliteration used in much of the literature; ' stands for aleph
TRANSLIT_LETTERS = frozenset("'bgdhwzxṭyklmnsʿpcqršt")
TRANSLIT_VOWEL_LETTERS = frozenset("'hwy")
PUNCT_ALPHABET = frozenset('"-%\'.?!/')

NUMERIC_CAP = 30

LOOKUP_SLOTS = (
    "lex_whole", "lex_so_far", "lex_remaining", "lex_remain_m1", "lex_remain_m2",
    "lex_from_m4", "lex_from_m3", "lex_from_m2", "lex_from_m1",
    "lex_to_p1", "lex_to_p2", "lex_to_p3", "lex_to_p4",
    "lex_prev", "lex_next",
)
NUMERIC_SLOTS = ("len_prev", "len_cur", "len_next", "char_position", "freq_ratio")
NEIGHBOUR_SLOTS = ("prev_first", "prev_last", "next_first", "next_last")

ABLATION_GROUPS = ("letters", "vowels", "lexicon", "expansion", "lengths", "position", "frequency")


def _offset_name(d: int) -> str:
    return "0" if d == 0 else (f"m{-d}" if d < 0 else f"p{d}")


@dataclass(frozen=True)
class FeatureConfig:
    window: int = 2
    letters: bool = True
    vowels: bool = True
    lexicon: bool = True
    expansion: bool = True
    lengths: bool = True
    position: bool = True
    frequency: bool = True
    alphabet: frozenset[str] = HEBREW_LETTERS
    vowel_letters: frozenset[str] = HEBREW_VOWEL_LETTERS
    punct_alphabet: frozenset[str] = PUNCT_ALPHABET

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        for name in ("alphabet", "vowel_letters", "punct_alphabet"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @classmethod
    def transliterated(cls, **kw) -> "FeatureConfig":
        return cls(alphabet=TRANSLIT_LETTERS, vowel_letters=TRANSLIT_VOWEL_LETTERS, **kw)

    def without(self, *groups: str) -> "FeatureConfig":
        unknown = set(groups) - set(ABLATION_GROUPS)
        if unknown:
            raise ValueError(f"unknown feature groups {sorted(unknown)}")
        return replace(self, **{g: False for g in groups})

    @property
    def offsets(self) -> range:
        return range(-self.window, self.window + 1)

    @property
    def names(self) -> tuple[str, ...]:
        return feature_names(self.window)

    @property
    def categorical(self) -> tuple[bool, ...]:
        return categorical_mask(self.window)

    def to_dict(self) -> dict:
        d = {g: getattr(self, g) for g in ABLATION_GROUPS}
        d["window"] = self.window
        for name in ("alphabet", "vowel_letters", "punct_alphabet"):
            d[name] = "".join(sorted(getattr(self, name)))
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "FeatureConfig":
        kw = dict(d)
        for name in ("alphabet", "vowel_letters", "punct_alphabet"):
            if name in kw and isinstance(kw[name], str):
                kw[name] = frozenset(kw[name])
        return cls(**kw)


def feature_names(window: int = 2) -> tuple[str, ...]:
    offs = range(-window, window + 1)
    chars = tuple(f"char_{_offset_name(d)}" for d in offs)
    vowels = tuple(f"vowel_{_offset_name(d)}" for d in offs)
    return chars + NEIGHBOUR_SLOTS + vowels + LOOKUP_SLOTS + NUMERIC_SLOTS


def categorical_mask(window: int = 2) -> tuple[bool, ...]:
    n_chars = 2 * window + 1
    return ((True,) * (n_chars + len(NEIGHBOUR_SLOTS)) + (False,) * n_chars
            + (True,) * len(LOOKUP_SLOTS) + (False,) * len(NUMERIC_SLOTS))


class FrequencyTable:
    def __init__(self, counts: Mapping[str, int] | None = None):
        self.counts = dict(counts or {})
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("negative frequency")

    def __getitem__(self, form: str) -> int:
        return self.counts.get(form, 0)

    def __len__(self):
        return len(self.counts)

    @classmethod
    def load(cls, path) -> "FrequencyTable":
        counts = {}
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, 1):
                line = line.rstrip("\r\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    form, count = line.split("\t")
                    counts[form] = counts.get(form, 0) + int(count)
                except ValueError:
                    raise ValueError(f"{path}:{line_no}: expected 'form\\tcount'") from None
        return cls(counts)


def normalize_char(c: str, config: FeatureConfig = FeatureConfig()) -> str:
    if c in config.alphabet or c in config.punct_alphabet:
        return c
    return MISS


def lookup_window(lex: Lexicon, supertoken: str, i: int,
                  prev: str | None = None, next: str | None = None) -> tuple[str, ...]:
    """The fifteen lexicon responses for the character at index ``i``.

    Ranges that run off either edge of the super-token yield ``'_'``.
    """
    s = supertoken
    L = len(s)
    if not 0 <= i < L - 1:
        raise IndexError(f"position {i} not classifiable in {s!r}")

    def look(start: int, stop: int) -> str:
        if start < 0 or stop > L:
            return MISS
        return lex.lookup(s[start:stop])

    return (
        lex.lookup(s),
        look(0, i + 1),
        look(i + 1, L),
        look(i, L),
        look(i - 1, L),
        look(i - 4, i + 1),
        look(i - 3, i + 1),
        look(i - 2, i + 1),
        look(i - 1, i + 1),
        look(i, i + 2),
        look(i, i + 3),
        look(i, i + 4),
        look(i, i + 5),
        lex.lookup(prev) if prev else MISS,
        lex.lookup(next) if next else MISS,
    )


def freq_ratio(freqs: FrequencyTable, supertoken: str, i: int) -> float:
    """Add-one smoothed (f(left) * f(right)) / f(whole) for a split after ``i``."""
    if not 0 <= i < len(supertoken) - 1:
        raise IndexError(f"position {i} not classifiable in {supertoken!r}")
    left, right = supertoken[:i + 1], supertoken[i + 1:]
    return (freqs[left] + 1) * (freqs[right] + 1) / (freqs[supertoken] + 1)


def _texts(sentence) -> list[str]:
    if isinstance(sentence, Sentence):
        return sentence.texts
    return list(sentence)


def extract(sentence: Sentence | Sequence[str], t: int, i: int, lex: Lexicon,
            freqs: FrequencyTable | None = None,
            config: FeatureConfig = FeatureConfig()) -> tuple:
    """Feature vector for character ``i`` of super-token ``t``."""
    texts = _texts(sentence)
    s = texts[t]
    L = len(s)
    if not 0 <= i < L - 1:
        raise IndexError(f"position {i} not classifiable in {s!r}")
    prev = texts[t - 1] if t > 0 else ""
    nxt = texts[t + 1] if t + 1 < len(texts) else ""
    offs = config.offsets

    norm = [normalize_char(s[i + d], config) if 0 <= i + d < L else MISS for d in offs]

    if config.letters:
        chars = tuple(norm)
        neigh = (normalize_char(prev[0], config) if prev else MISS,
                 normalize_char(prev[-1], config) if prev else MISS,
                 normalize_char(nxt[0], config) if nxt else MISS,
                 normalize_char(nxt[-1], config) if nxt else MISS)
    else:
        chars = (MISS,) * len(offs)
        neigh = (MISS,) * len(NEIGHBOUR_SLOTS)

    if config.vowels:
        vowels = tuple(c in config.vowel_letters for c in norm)
    else:
        vowels = (False,) * len(offs)

    if config.lexicon:
        lookups = lookup_window(lex, s, i, prev, nxt)
    else:
        lookups = (MISS,) * len(LOOKUP_SLOTS)

    if config.lengths:
        lengths = (min(len(prev), NUMERIC_CAP), min(L, NUMERIC_CAP), min(len(nxt), NUMERIC_CAP))
    else:
        lengths = (0, 0, 0)
    position = min(i, NUMERIC_CAP) if config.position else 0
    ratio = freq_ratio(freqs, s, i) if (config.frequency and freqs is not None) else (
        1.0 if config.frequency else 0.0)
    return chars + neigh + vowels + lookups + lengths + (position, ratio)


def extract_sentence(sentence: Sentence | Sequence[str], lex: Lexicon,
                     freqs: FrequencyTable | None = None,
                     config: FeatureConfig = FeatureConfig()) -> list[tuple[int, int, tuple]]:
    """(supertoken index, char index, vector) for every classifiable position."""
    texts = _texts(sentence)
    out = []
    for t, s in enumerate(texts):
        for i in range(len(s) - 1):
            out.append((t, i, extract(texts, t, i, lex, freqs, config)))
    return out


def as_dict(vector: Sequence, config: FeatureConfig = FeatureConfig()) -> dict:
    return dict(zip(config.names, vector))
