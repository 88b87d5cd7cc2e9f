"""A toy Hebrew-script language with known segmentation, for end-to-end tests.

Words are a stem (NOUN, VERB or ADJ) optionally preceded by the conjunction
ו and/or one of the prepositions ב ל מ, and, for nouns, optionally followed
by a pronominal clitic ה or ו. Some nouns are homographs of a preposition
plus another stem (לבנ, say, against ל|בנ), so a few surface strings are truly
ambiguous. Homograph nouns mostly follow the trigger word זה, which gives a
classifier a contextual cue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .corpus import Corpus, Sentence, SuperToken
from .lexicon import Lexicon

LETTERS = "אבגדהוזחטיכלמנסעפצקרשת"
CONJ = "ו"
PREPOSITIONS = ("ב", "ל", "מ")
SUFFIXES = ("ה", "ו")
FUNCTION_WORDS = {"של": "ADP", "את": "ADP", "על": "ADP", "זה": "PRON", "הוא": "PRON",
                  "לא": "ADV", "כי": "SCONJ"}
TRIGGER = "זה"
PUNCT = "."


@dataclass
class SyntheticLanguage:
    stems: dict[str, str]
    homographs: dict[str, tuple[str, str]]
    p_conj: float = 0.15
    p_prep: dict[str, float] = field(default_factory=lambda: {"ב": 0.12, "ל": 0.12, "מ": 0.06})
    p_suffix: float = 0.15
    p_function: float = 0.2
    zipf: float = 1.05

    def __post_init__(self):
        self._stem_list = sorted(self.stems)
        ranks = np.arange(1, len(self._stem_list) + 1, dtype=float)
        w = ranks ** -self.zipf
        self._weights = w / w.sum()
        self._homograph_list = sorted(self.homographs)

    @property
    def lexicon(self) -> Lexicon:
        entries: dict[str, set[str]] = {}
        for stem, tag in self.stems.items():
            entries.setdefault(stem, set()).add(tag)
            if tag == "NOUN":
                for suf in SUFFIXES:
                    entries.setdefault(stem + suf, set()).add("CPLXN")
        for form, tag in FUNCTION_WORDS.items():
            entries.setdefault(form, set()).add(tag)
        for p in PREPOSITIONS:
            entries.setdefault(p, set()).add("ADP")
        entries.setdefault(CONJ, set()).add("CCONJ")
        for s in SUFFIXES:
            entries.setdefault(s, set()).add("PRON")
        return Lexicon(entries)

    def analyses(self, surface: str) -> set[frozenset[int]]:
        """All boundary sets the grammar allows for ``surface``."""
        out = set()
        if surface in FUNCTION_WORDS or surface == PUNCT:
            out.add(frozenset())
        for conj, prep, suf in product(("", CONJ), ("",) + PREPOSITIONS, ("",) + SUFFIXES):
            pre = conj + prep
            if not surface.startswith(pre) or not surface.endswith(suf):
                continue
            stem = surface[len(pre):len(surface) - len(suf)]
            tag = self.stems.get(stem)
            if tag is None or (suf and tag != "NOUN"):
                continue
            subs = [s for s in (conj, prep, stem, suf) if s]
            out.add(SuperToken.from_subtokens(subs).boundaries)
        return out

    def is_ambiguous(self, surface: str) -> bool:
        return len(self.analyses(surface)) > 1

    def _word(self, rng: np.random.Generator, after_trigger: bool) -> list[str]:
        if rng.random() < self.p_function:
            return [self._pick_function(rng)]
        if after_trigger and self._homograph_list and rng.random() < 0.5:
            return [self._homograph_list[rng.integers(len(self._homograph_list))]]
        stem = self._stem_list[rng.choice(len(self._stem_list), p=self._weights)]
        if stem in self.homographs and not after_trigger and rng.random() < 0.8:
            # homograph readings are rare away from the trigger word
            prep, base = self.homographs[stem]
            return [prep, base]
        subs = []
        if rng.random() < self.p_conj:
            subs.append(CONJ)
        if self.stems[stem] == "NOUN":
            r = rng.random()
            acc = 0.0
            for p, pr in self.p_prep.items():
                acc += pr
                if r < acc:
                    subs.append(p)
                    break
        subs.append(stem)
        if self.stems[stem] == "NOUN" and rng.random() < self.p_suffix:
            subs.append(SUFFIXES[rng.integers(len(SUFFIXES))])
        return subs

    def _pick_function(self, rng) -> str:
        words = sorted(FUNCTION_WORDS)
        return words[rng.integers(len(words))]

    def sample(self, n_supertokens: int, seed: int = 0) -> Corpus:
        """A corpus with exactly ``n_supertokens`` super-tokens."""
        rng = np.random.default_rng(seed)
        sents = []
        remaining = n_supertokens
        while remaining > 0:
            length = min(int(rng.integers(4, 11)), remaining)
            toks = []
            prev = None
            for k in range(length):
                if k == length - 1 and length > 1:
                    toks.append(SuperToken(PUNCT))
                    continue
                subs = self._word(rng, prev == TRIGGER)
                tok = SuperToken.from_subtokens(subs)
                toks.append(tok)
                prev = tok.text
            sents.append(Sentence(tuple(toks)))
            remaining -= length
        return Corpus(tuple(sents))


def make_language(n_stems: int = 400, n_homographs: int = 20, seed: int = 0) -> SyntheticLanguage:
    rng = np.random.default_rng(seed)
    tags = ("NOUN", "VERB", "ADJ")
    stems: dict[str, str] = {}
    reserved = set(FUNCTION_WORDS) | set(PREPOSITIONS) | {CONJ} | set(SUFFIXES)
    while len(stems) < n_stems:
        length = int(rng.integers(3, 7))
        form = "".join(LETTERS[k] for k in rng.integers(len(LETTERS), size=length))
        if form in reserved or form in stems:
            continue
        stems[form] = tags[int(rng.choice(3, p=[0.6, 0.25, 0.15]))]
    homographs = {}
    nouns = sorted(s for s, t in stems.items() if t == "NOUN")
    for k in rng.permutation(len(nouns)):
        if len(homographs) >= n_homographs:
            break
        base = nouns[k]
        prep = PREPOSITIONS[int(rng.integers(len(PREPOSITIONS)))]
        form = prep + base
        if form in stems or form in reserved:
            continue
        stems[form] = "NOUN"
        homographs[form] = (prep, base)
    return SyntheticLanguage(stems, homographs)
