"""Scoring, baselines and feature ablations."""
from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Sequence

from .corpus import Corpus
from .ensemble import EnsembleConfig
from .features import FeatureConfig

logger = logging.getLogger(__name__)


class CorpusMismatchError(ValueError):
    pass


def _pct(num: int, den: int, empty: float) -> float:
    return empty if den == 0 else 100.0 * num / den


@dataclass(frozen=True)
class EvalReport:
    percent_perfect: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    n_supertokens: int
    n_positions: int
    n_perfect: int

    def rounded(self) -> dict:
        return {k: fmt_pct(getattr(self, k))
                for k in ("percent_perfect", "precision", "recall", "f1")}

    def to_dict(self) -> dict:
        return asdict(self)


def fmt_pct(x: float) -> str:
    """Two decimals, half-up (98.185 -> '98.19')."""
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def score(gold: Corpus, pred: Corpus) -> EvalReport:
    """Perfect super-token rate and boundary P/R/F over non-final positions.

    With nothing predicted and nothing to find, precision and recall are 100;
    with nothing predicted but boundaries in gold, precision is 0.
    """
    if len(gold) != len(pred):
        raise CorpusMismatchError(f"{len(gold)} gold vs {len(pred)} predicted sentences")
    tp = fp = fn = n_tok = n_pos = n_perfect = 0
    for k, (gs, ps) in enumerate(zip(gold, pred)):
        if gs.texts != ps.texts:
            raise CorpusMismatchError(f"sentence {k}: super-token texts differ")
        for g, p in zip(gs, ps):
            n_tok += 1
            n_pos += len(g.text) - 1
            tp += len(g.boundaries & p.boundaries)
            fp += len(p.boundaries - g.boundaries)
            fn += len(g.boundaries - p.boundaries)
            n_perfect += g.boundaries == p.boundaries
    if n_tok == 0:
        raise CorpusMismatchError("empty corpus")
    precision = _pct(tp, tp + fp, 100.0 if fn == 0 else 0.0)
    recall = _pct(tp, tp + fn, 100.0)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return EvalReport(100.0 * n_perfect / n_tok, precision, recall, f1,
                      tp, fp, fn, n_tok, n_pos, n_perfect)


def baseline_never_split(corpus: Corpus) -> Corpus:
    return corpus.unsegmented()


def most_common_segmentations(train: Corpus) -> dict[str, frozenset[int]]:
    seen: dict[str, Counter] = defaultdict(Counter)
    for tok in train.supertokens():
        seen[tok.text][tok.boundaries] += 1
    # highest count, then fewer boundaries, then smallest sorted index tuple
    return {text: min(c, key=lambda b: (-c[b], len(b), sorted(b)))
            for text, c in seen.items()}


def baseline_most_common(train: Corpus, test: Corpus) -> Corpus:
    table = most_common_segmentations(train)
    return test.with_boundaries([[table.get(t.text, frozenset()) for t in s] for s in test])


ABLATIONS = {
    "FINAL": (),
    "-expansion": ("expansion",),
    "-vowels": ("vowels",),
    "-letters": ("letters",),
    "-letr-vowl": ("letters", "vowels"),
    "-lexicon": ("lexicon",),
}


def ablation_configs(base: FeatureConfig = FeatureConfig(),
                     names: Sequence[str] | None = None) -> list[tuple[str, FeatureConfig]]:
    names = list(ABLATIONS) if names is None else list(names)
    unknown = [n for n in names if n not in ABLATIONS]
    if unknown:
        raise ValueError(f"unknown ablations {unknown}; choose from {list(ABLATIONS)}")
    return [(n, base.without(*ABLATIONS[n])) for n in names]


def run_ablations(train: Corpus, dev: Corpus | None, test: Corpus,
                  configs: Sequence[tuple[str, FeatureConfig]], resources=None,
                  ensemble_config: EnsembleConfig = EnsembleConfig(),
                  n_jobs: int = 1) -> list[tuple[str, EvalReport]]:
    """Train one model per feature configuration and score it on ``test``.

    Dev scores, when a dev corpus is given, are only logged.
    """
    from .segmenter import Segmenter

    if test.n_supertokens == 0:
        raise ValueError("test corpus is empty")
    if not configs:
        raise ValueError("no ablation configurations")
    rows = []
    for name, cfg in configs:
        seg = Segmenter.train(train, resources, cfg, ensemble_config, n_jobs=n_jobs)
        rows.append((name, score(test, seg.segment_corpus(test))))
        if dev is not None and dev.n_supertokens:
            d = score(dev, seg.segment_corpus(dev))
            logger.info("%s dev: %%perf %s F %s", name, fmt_pct(d.percent_perfect), fmt_pct(d.f1))
    return rows


def format_table(rows: Sequence[tuple[str, EvalReport]], title: str | None = None) -> str:
    width = max([len(n) for n, _ in rows] + [6])
    lines = []
    if title:
        lines.append(title)
    lines.append(f"{'':<{width}}  {'% perf':>7}  {'P':>7}  {'R':>7}  {'F':>7}")
    for name, r in rows:
        f = r.rounded()
        lines.append(f"{name:<{width}}  {f['percent_perfect']:>7}  {f['precision']:>7}  "
                     f"{f['recall']:>7}  {f['f1']:>7}")
    return "\n".join(lines) + "\n"


def format_structured(rows: Sequence[tuple[str, EvalReport]]) -> str:
    """JSON lines, one record per system/config with all counts."""
    return "".join(json.dumps({"name": n, **r.to_dict()}, sort_keys=True) + "\n"
                   for n, r in rows)


def exact_percent_perfect(report: EvalReport) -> Fraction:
    return Fraction(100 * report.n_perfect, report.n_supertokens)
