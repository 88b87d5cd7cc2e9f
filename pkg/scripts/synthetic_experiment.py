"""Train on a generated toy language and compare against the baselines.

    python scripts/synthetic_experiment.py --train 5000 --test 1000 --ablate
"""
import argparse
import logging
import time

from segline.ensemble import EnsembleConfig
from segline.evaluation import (ablation_configs, baseline_most_common, baseline_never_split,
                                format_table, run_ablations, score)
from segline.segmenter import Resources, Segmenter
from segline.synthetic import make_language


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--train", type=int, default=5000, help="training super-tokens")
    ap.add_argument("--test", type=int, default=1000, help="test super-tokens")
    ap.add_argument("--stems", type=int, default=400)
    ap.add_argument("--homographs", type=int, default=20)
    ap.add_argument("--trees", type=int, default=250)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--ablate", action="store_true", help="also run the feature ablations")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    lang = make_language(args.stems, args.homographs, seed=args.seed)
    train = lang.sample(args.train, seed=args.seed + 1)
    test = lang.sample(args.test, seed=args.seed + 2)
    res = Resources(lexicon=lang.lexicon)
    ens = EnsembleConfig(n_trees=args.trees, seed=args.seed)

    t0 = time.perf_counter()
    seg = Segmenter.train(train, res, ensemble_config=ens, n_jobs=args.jobs)
    pred = seg.segment_corpus(test)
    logging.info("trained and segmented in %.1f s", time.perf_counter() - t0)

    rows = [("never-split", score(test, baseline_never_split(test))),
            ("most-common", score(test, baseline_most_common(train, test))),
            ("RF", score(test, pred))]
    print(format_table(rows))

    hits = [g.boundaries == p.boundaries
            for g, p in zip(test.supertokens(), pred.supertokens())
            if not lang.is_ambiguous(g.text)]
    print(f"unambiguous subset: {100 * sum(hits) / len(hits):.2f} % perfect "
          f"({len(hits)} super-tokens)")

    if args.ablate:
        print()
        print(format_table(run_ablations(train, None, test, ablation_configs(), res, ens,
                                         n_jobs=args.jobs)))


if __name__ == "__main__":
    main()
