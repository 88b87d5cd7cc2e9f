import itertools
import json

import pytest
from hypothesis import given, strategies as st

from segline.corpus import Corpus, Sentence, SuperToken
from segline.evaluation import (CorpusMismatchError, EvalReport, ablation_configs,
                                baseline_most_common, baseline_never_split, fmt_pct,
                                format_structured, format_table, run_ablations, score)
from segline.segmenter import Resources
from segline.ensemble import EnsembleConfig
from segline.synthetic import make_language


def one(text, bounds):
    return Corpus((Sentence((SuperToken(text, frozenset(bounds)),)),))


def brute_counts(text, gold, pred):
    """Decide TP/FP/FN position by position."""
    tp = fp = fn = 0
    for i in range(len(text) - 1):
        g, p = i in gold, i in pred
        tp += g and p
        fp += p and not g
        fn += g and not p
    return tp, fp, fn


def zero_based(positions):
    # characters are numbered from 1 in the worked example
    return {p - 1 for p in positions}


def test_hand_example():
    gold, pred = zero_based({1, 3}), zero_based({1, 4})
    r = score(one("abcde", gold), one("abcde", pred))
    assert (r.tp, r.fp, r.fn) == brute_counts("abcde", gold, pred) == (1, 1, 1)
    assert r.precision == r.recall == r.f1 == 50.0
    assert r.percent_perfect == 0.0
    assert r.n_positions == 4


def test_identity_is_perfect():
    c = Corpus((Sentence((SuperToken("abcde", {1, 3}), SuperToken("x"))),))
    r = score(c, c)
    assert (r.percent_perfect, r.precision, r.recall, r.f1) == (100.0, 100.0, 100.0, 100.0)


def test_empty_prediction():
    gold = Corpus((Sentence((SuperToken("ab", {0}), SuperToken("cd"), SuperToken("ef"),
                             SuperToken("gh", {0}))),))
    r = score(gold, baseline_never_split(gold))
    assert r.recall == 0.0
    assert r.percent_perfect == 50.0


def test_mismatch():
    with pytest.raises(CorpusMismatchError):
        score(one("ab", ()), one("ac", ()))
    with pytest.raises(CorpusMismatchError):
        score(one("ab", ()), Corpus())


def test_never_split_all_unsegmented():
    c = Corpus((Sentence((SuperToken("ab"), SuperToken("cde"))),))
    assert score(c, baseline_never_split(c)).percent_perfect == 100.0


def corpus_from(tokens):
    return Corpus((Sentence(tuple(SuperToken(t, frozenset(b)) for t, b in tokens)),))


def test_most_common_mode():
    train = corpus_from([("bbyt", {0})] * 3 + [("bbyt", ())])
    test = corpus_from([("bbyt", ()), ("oov", {0})])
    pred = baseline_most_common(train, test)
    assert [t.boundaries for t in pred.supertokens()] == [{0}, frozenset()]


def test_most_common_tie_prefers_fewer():
    train = corpus_from([("bbyt", {0}), ("bbyt", ()), ("bbyt", {0}), ("bbyt", ())])
    assert next(baseline_most_common(train, train).supertokens()).boundaries == frozenset()


def test_most_common_tie_smallest_indices():
    train = corpus_from([("abcd", {2}), ("abcd", {0})])
    assert next(baseline_most_common(train, train).supertokens()).boundaries == {0}


def test_fmt_half_up():
    assert fmt_pct(98.185) == "98.19"
    assert fmt_pct(50.0) == "50.00"
    assert fmt_pct(2 / 3 * 100) == "66.67"


def test_report_formats():
    r = score(one("abcde", {0, 2}), one("abcde", {0, 3}))
    table = format_table([("RF", r)])
    assert "50.00" in table and "RF" in table
    rec = json.loads(format_structured([("RF", r)]))
    assert rec["name"] == "RF" and rec["tp"] == 1 and rec["fn"] == 1


def test_ablation_configs_names():
    names = [n for n, _ in ablation_configs()]
    assert names == ["FINAL", "-expansion", "-vowels", "-letters", "-letr-vowl", "-lexicon"]
    cfgs = dict(ablation_configs())
    assert not cfgs["-letr-vowl"].letters and not cfgs["-letr-vowl"].vowels
    with pytest.raises(ValueError):
        ablation_configs(names=["-bogus"])


def test_ablations_empty_test_is_error():
    lang = make_language(n_stems=50, n_homographs=2)
    train = lang.sample(100, seed=1)
    with pytest.raises(ValueError):
        run_ablations(train, None, Corpus(), ablation_configs(), Resources(lang.lexicon),
                      EnsembleConfig(n_trees=2))


def test_ablations_small_run():
    lang = make_language(n_stems=60, n_homographs=3)
    train, test = lang.sample(400, seed=1), lang.sample(100, seed=2)
    rows = run_ablations(train, test, test, ablation_configs(), Resources(lang.lexicon),
                         EnsembleConfig(n_trees=5))
    assert [n for n, _ in rows][0] == "FINAL" and len(rows) == 6
    assert all(isinstance(r, EvalReport) for _, r in rows)


@st.composite
def gold_pred(draw):
    texts = draw(st.lists(st.text(alphabet="abc", min_size=1, max_size=6), min_size=1,
                          max_size=8))
    g, p = [], []
    for t in texts:
        pos = list(range(len(t) - 1))
        g.append(SuperToken(t, draw(st.sets(st.sampled_from(pos))) if pos else frozenset()))
        p.append(SuperToken(t, draw(st.sets(st.sampled_from(pos))) if pos else frozenset()))
    return Corpus((Sentence(tuple(g)),)), Corpus((Sentence(tuple(p)),))


@given(gold_pred())
def test_score_properties(gp):
    gold, pred = gp
    r = score(gold, pred)
    tp = fp = fn = 0
    for g, p in zip(gold.supertokens(), pred.supertokens()):
        a, b, c = brute_counts(g.text, g.boundaries, p.boundaries)
        tp, fp, fn = tp + a, fp + b, fn + c
    assert (r.tp, r.fp, r.fn) == (tp, fp, fn)
    for v in (r.percent_perfect, r.precision, r.recall, r.f1):
        assert 0 <= v <= 100
    if r.precision + r.recall > 0:
        assert min(r.precision, r.recall) - 1e-9 <= r.f1 <= max(r.precision, r.recall) + 1e-9
    indicators = [g.boundaries == p.boundaries
                  for g, p in zip(gold.supertokens(), pred.supertokens())]
    assert r.percent_perfect == pytest.approx(100 * sum(indicators) / len(indicators))
    assert score(gold, gold).percent_perfect == 100.0
    mc = score(gold, baseline_most_common(gold, gold)).percent_perfect
    assert mc >= score(gold, baseline_never_split(gold)).percent_perfect


def test_small_exhaustive_f1():
    text = "abcd"
    pos = range(3)
    subsets = [frozenset(c) for k in range(4) for c in itertools.combinations(pos, k)]
    for g in subsets:
        for p in subsets:
            r = score(one(text, g), one(text, p))
            if r.precision + r.recall:
                assert r.f1 == pytest.approx(2 * r.precision * r.recall /
                                             (r.precision + r.recall))
