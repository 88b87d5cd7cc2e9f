"""Orthographic word segmentation by character-wise boundary classification."""
from .constraints import AffixInventory, collect_affixes
from .corpus import (Corpus, Sentence, SuperToken, convert_gold_analysis,
                     parse_segmentation_file, serialize_corpus)
from .ensemble import EnsembleConfig, TreeEnsemble, load_model, save_model
from .evaluation import EvalReport, baseline_most_common, baseline_never_split, score
from .features import FeatureConfig, FrequencyTable, extract, lookup_window
from .lexicon import Lexicon, TagMap, expand_lexicon, load_lexicon
from .segmenter import Resources, Segmenter

__version__ = "0.1.0"
