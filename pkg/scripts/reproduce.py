"""Full evaluation on licensed treebank data laid out as

    DATA/lexicon.tsv  DATA/tagmap.tsv  DATA/freqs.tsv  DATA/names/*.txt
    DATA/spmrl/{train,dev,test}.tsv  DATA/wiki5k.tsv

(segmentation format; convert raw analyses with `segline convert` first).
Prints the main results and the ablation table.

    python scripts/reproduce.py DATA --jobs 4
"""
import argparse
import logging
from pathlib import Path

from segline.corpus import parse_segmentation_file
from segline.ensemble import EnsembleConfig
from segline.evaluation import (ablation_configs, baseline_most_common, baseline_never_split,
                                format_table, run_ablations, score)
from segline.features import FrequencyTable
from segline.lexicon import TagMap, load_lexicon, load_names
from segline.segmenter import Resources, Segmenter


def load(root: Path) -> Resources:
    tagmap = TagMap.load(root / "tagmap.tsv") if (root / "tagmap.tsv").exists() else TagMap()
    freqs = FrequencyTable.load(root / "freqs.tsv") if (root / "freqs.tsv").exists() else None
    names = load_names(sorted((root / "names").glob("*.txt"))) if (root / "names").is_dir() \
        else []
    return Resources(load_lexicon(root / "lexicon.tsv", tagmap), names, freqs)


def main():
    ap = argparse.ArgumentParser(description="Evaluate on treebank data.")
    ap.add_argument("data", type=Path)
    ap.add_argument("--trees", type=int, default=250)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    res = load(args.data)
    ens = EnsembleConfig(n_trees=args.trees, seed=args.seed)
    train = parse_segmentation_file(args.data / "spmrl" / "train.tsv")
    dev = parse_segmentation_file(args.data / "spmrl" / "dev.tsv")
    test = parse_segmentation_file(args.data / "spmrl" / "test.tsv")
    wiki_path = args.data / "wiki5k.tsv"

    seg = Segmenter.train(train, res, ensemble_config=ens, n_jobs=args.jobs)
    for name, gold in [("SPMRL test", test)] + (
            [("Wiki5K", parse_segmentation_file(wiki_path))] if wiki_path.exists() else []):
        print(name)
        print(format_table([("baseline", score(gold, baseline_never_split(gold))),
                            ("most-common", score(gold, baseline_most_common(train, gold))),
                            ("RF", score(gold, seg.segment_corpus(gold)))]))
        print()

    print("ablations (SPMRL test)")
    print(format_table(run_ablations(train, dev, test, ablation_configs(), res, ens,
                                     n_jobs=args.jobs)))


if __name__ == "__main__":
    main()
