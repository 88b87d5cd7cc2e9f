"""Training and applying a boundary classifier end to end."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import constraints
from .constraints import AffixInventory, collect_affixes
from .corpus import Corpus, Sentence, SuperToken
from .ensemble import EnsembleConfig, TreeEnsemble, train as train_ensemble
from .features import FeatureConfig, FrequencyTable, extract_sentence
from .lexicon import DEFAULT_PREFIX_PARTICLES, Lexicon, expand_lexicon

logger = logging.getLogger(__name__)

_EMPTY_LEXICON = Lexicon()


@dataclass
class Resources:
    """External data the features are computed from."""

    lexicon: Lexicon = field(default_factory=Lexicon)
    names: Sequence[str] = ()
    freqs: FrequencyTable | None = None
    prefix_particles: frozenset[str] = DEFAULT_PREFIX_PARTICLES
    _expanded: Lexicon | None = field(default=None, repr=False, compare=False)

    def lexicon_for(self, config: FeatureConfig) -> Lexicon:
        if not config.lexicon:
            return _EMPTY_LEXICON
        if not config.expansion or not self.names:
            return self.lexicon
        if self._expanded is None:
            self._expanded = expand_lexicon(self.lexicon, self.names, self.prefix_particles)
            logger.info("expanded lexicon: %d -> %d forms", len(self.lexicon), len(self._expanded))
        return self._expanded


def training_data(corpus: Corpus, resources: Resources, config: FeatureConfig):
    lex = resources.lexicon_for(config)
    vectors, labels = [], []
    for sent in corpus:
        for t, i, vec in extract_sentence(sent, lex, resources.freqs, config):
            vectors.append(vec)
            labels.append(i in sent[t].boundaries)
    return vectors, labels


class Segmenter:
    def __init__(self, model: TreeEnsemble, resources: Resources | None = None):
        self.model = model
        self.resources = resources or Resources()
        self.config = FeatureConfig.from_dict(model.feature_config)
        self.lexicon = self.resources.lexicon_for(self.config)

    @classmethod
    def train(cls, corpus: Corpus, resources: Resources | None = None,
              config: FeatureConfig = FeatureConfig(),
              ensemble_config: EnsembleConfig = EnsembleConfig(),
              use_affix_constraints: bool = True, n_jobs: int = 1) -> "Segmenter":
        resources = resources or Resources()
        vectors, labels = training_data(corpus, resources, config)
        if not vectors:
            raise ValueError("training corpus has no super-token longer than one character")
        logger.info("training on %d positions (%d boundaries), %d trees",
                    len(vectors), sum(labels), ensemble_config.n_trees)
        model = train_ensemble(vectors, labels, ensemble_config, config.categorical, n_jobs)
        model.feature_config = config.to_dict()
        model.affixes = collect_affixes(corpus) if use_affix_constraints else None
        return cls(model, resources)

    @property
    def affixes(self) -> AffixInventory | None:
        return self.model.affixes

    def probabilities(self, sentences: Sequence[Sequence[str]]) -> list[list[np.ndarray]]:
        """Boundary probability for every non-final character, per super-token."""
        keys, vectors = [], []
        for s, texts in enumerate(sentences):
            for t, i, vec in extract_sentence(texts, self.lexicon, self.resources.freqs,
                                              self.config):
                keys.append((s, t, i))
                vectors.append(vec)
        probs = self.model.predict_proba_many(vectors)
        out = [[np.zeros(max(len(w) - 1, 0)) for w in texts] for texts in sentences]
        for (s, t, i), p in zip(keys, probs):
            out[s][t][i] = p
        return out

    def segment_sentences(self, sentences: Sequence[Sequence[str]]) -> list[list[frozenset[int]]]:
        result = []
        for texts, probs in zip(sentences, self.probabilities(sentences)):
            row = []
            for text, p in zip(texts, probs):
                raw = {i for i in range(len(p)) if p[i] >= 0.5}
                row.append(constraints.apply(text, raw, dict(enumerate(p.tolist())),
                                             self.model.affixes))
            result.append(row)
        return result

    def segment_corpus(self, corpus: Corpus) -> Corpus:
        texts = [s.texts for s in corpus]
        return corpus.with_boundaries(self.segment_sentences(texts))

    def segment_line(self, line: str) -> str:
        words = line.split()
        if not words:
            return ""
        bounds = self.segment_sentences([words])[0]
        return " ".join("|".join(SuperToken(w, b).subtokens) for w, b in zip(words, bounds))


def sentence_from_line(line: str) -> Sentence:
    return Sentence(tuple(SuperToken(w) for w in line.split()))
