"""Command line interface: ``segline <command> [options]``.

Every command accepts ``--config run.yaml``; flags given on the command line
override the file. Recognised config keys::

    train, dev, test, lexicon, tagmap, freqs, model   # paths
    names: [paths]                                    # name-list files
    seed, trees, jobs                                 # ensemble
    features: {letters: true, vowels: true, lexicon: true, expansion: true,
               lengths: true, position: true, frequency: true}
    ablations: [FINAL, -expansion, -vowels, -letters, -letr-vowl, -lexicon]
    affix_constraints: true
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml

from .corpus import (CorpusFormatError, convert_analysis_file, format_corpus,
                     parse_segmentation_file, split_at)
from .ensemble import EnsembleConfig, ModelFormatError, load_model, save_model
from .evaluation import (ablation_configs, baseline_most_common, baseline_never_split,
                         format_structured, format_table, run_ablations, score)
from .features import ABLATION_GROUPS, FeatureConfig, FrequencyTable
from .lexicon import LexiconFormatError, TagMap, expand_lexicon, load_lexicon, load_names
from .segmenter import Resources, Segmenter

logger = logging.getLogger("segline")

PATH_KEYS = ("train", "dev", "test", "lexicon", "tagmap", "freqs", "model")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    train: Path | None = None
    dev: Path | None = None
    test: Path | None = None
    lexicon: Path | None = None
    tagmap: Path | None = None
    freqs: Path | None = None
    model: Path | None = None
    names: list[Path] = field(default_factory=list)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    jobs: int = 1
    ablations: list[str] | None = None
    affix_constraints: bool = True

    def require(self, *keys: str) -> None:
        """Fail early on missing or non-existent input paths."""
        for key in keys:
            value = getattr(self, key)
            if value is None:
                raise ConfigError(f"no {key} path given")
            if not Path(value).is_file():
                raise ConfigError(f"{key} file not found: {value}")

    def check_resources(self) -> None:
        if self.features.lexicon:
            if self.lexicon is None:
                raise ConfigError("lexicon features are enabled but no lexicon path is given "
                                  "(use --lexicon or --no-lexicon)")
            self.require("lexicon")
        for key in ("tagmap", "freqs"):
            if getattr(self, key) is not None:
                self.require(key)
        for p in self.names:
            if not Path(p).is_file():
                raise ConfigError(f"name list not found: {p}")


def resolve_seed(cli_seed, config_seed) -> int:
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return int(config_seed)
    env = os.environ.get("SEGLINE_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"SEGLINE_SEED is not an integer: {env!r}") from None
    return 0


def build_config(args) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: expected a mapping")
        unknown = set(data) - set(PATH_KEYS) - {"names", "seed", "trees", "jobs", "features",
                                                 "ablations", "affix_constraints"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    cfg = RunConfig()
    for key in PATH_KEYS:
        value = getattr(args, key, None) or data.get(key)
        if value is not None:
            setattr(cfg, key, Path(value))
    names = getattr(args, "names", None) or data.get("names") or []
    cfg.names = [Path(p) for p in ([names] if isinstance(names, str) else names)]

    feats = dict(data.get("features") or {})
    bad = set(feats) - set(ABLATION_GROUPS) - {"window"}
    if bad:
        raise ConfigError(f"unknown feature switches: {sorted(bad)}")
    for group in ("lexicon", "expansion", "letters", "vowels"):
        if getattr(args, f"no_{group}", False):
            feats[group] = False
    cfg.features = FeatureConfig(**feats)

    trees = getattr(args, "trees", None) or data.get("trees") or EnsembleConfig.n_trees
    seed = resolve_seed(getattr(args, "seed", None), data.get("seed"))
    cfg.ensemble = EnsembleConfig(n_trees=int(trees), seed=seed)
    cfg.jobs = int(getattr(args, "jobs", None) or data.get("jobs") or 1)
    cfg.ablations = data.get("ablations")
    if getattr(args, "ablations", None):
        cfg.ablations = args.ablations
    cfg.affix_constraints = bool(data.get("affix_constraints", True))
    if getattr(args, "no_affix_constraints", False):
        cfg.affix_constraints = False
    return cfg


def load_resources(cfg: RunConfig) -> Resources:
    tagmap = TagMap.load(cfg.tagmap) if cfg.tagmap else TagMap()
    lexicon = load_lexicon(cfg.lexicon, tagmap) if cfg.lexicon else None
    freqs = FrequencyTable.load(cfg.freqs) if cfg.freqs else None
    names = load_names(cfg.names) if cfg.names else []
    res = Resources(freqs=freqs, names=names)
    if lexicon is not None:
        res.lexicon = lexicon
    return res


def _write_report(rows, fmt: str, out) -> None:
    out.write(format_structured(rows) if fmt == "structured" else format_table(rows))


def cmd_train(args) -> int:
    cfg = build_config(args)
    cfg.require("train")
    if cfg.model is None:
        raise ConfigError("no model path given (--model)")
    if cfg.dev is not None:
        cfg.require("dev")
    cfg.check_resources()

    train = parse_segmentation_file(cfg.train)
    dev = parse_segmentation_file(cfg.dev) if cfg.dev else None
    resources = load_resources(cfg)
    seg = Segmenter.train(train, resources, cfg.features, cfg.ensemble,
                          use_affix_constraints=cfg.affix_constraints, n_jobs=cfg.jobs)
    save_model(seg.model, cfg.model)
    logger.info("wrote %s", cfg.model)
    if dev is not None:
        rows = [("dev", score(dev, seg.segment_corpus(dev)))]
        _write_report(rows, args.format, sys.stdout)
    return 0


def _segmenter_from(cfg: RunConfig) -> Segmenter:
    cfg.require("model")
    model = load_model(cfg.model)
    cfg.features = FeatureConfig.from_dict(model.feature_config)
    cfg.check_resources()
    return Segmenter(model, load_resources(cfg))


def cmd_segment(args) -> int:
    cfg = build_config(args)
    seg = _segmenter_from(cfg)
    src = open(args.input, encoding="utf-8") if args.input not in (None, "-") else sys.stdin
    with src:
        lines = [line.rstrip("\r\n") for line in src]
    sentences = [line.split() for line in lines]
    nonempty = [s for s in sentences if s]
    bounds = iter(seg.segment_sentences(nonempty)) if nonempty else iter(())
    out = []
    for words in sentences:
        if not words:
            out.append("")
            continue
        row = next(bounds)
        out.append(" ".join("|".join(split_at(w, b)) for w, b in zip(words, row)))
    text = "".join(line + "\n" for line in out)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_convert(args) -> int:
    result = convert_analysis_file(args.input)
    text = format_corpus(result.corpus)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    logger.info("converted %d super-tokens, %d unalignable",
                result.n_converted, len(result.unalignable))
    if result.unalignable:
        print(f"unalignable super-tokens: {len(result.unalignable)}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    cfg = build_config(args)
    gold_path = Path(args.gold) if args.gold else cfg.test
    if gold_path is None:
        raise ConfigError("no gold corpus given (--gold)")
    if not gold_path.is_file():
        raise ConfigError(f"gold file not found: {gold_path}")
    if args.pred is None and cfg.model is None:
        raise ConfigError("give either --pred or --model")
    gold = parse_segmentation_file(gold_path)
    rows = []
    if args.pred is not None:
        rows.append(("pred", score(gold, parse_segmentation_file(args.pred))))
    else:
        seg = _segmenter_from(cfg)
        rows.append(("RF", score(gold, seg.segment_corpus(gold))))
    if args.baselines:
        rows.insert(0, ("baseline", score(gold, baseline_never_split(gold))))
        if cfg.train is not None:
            cfg.require("train")
            train = parse_segmentation_file(cfg.train)
            rows.insert(1, ("most-common", score(gold, baseline_most_common(train, gold))))
    _write_report(rows, args.format, sys.stdout)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(format_structured(rows))
    return 0


def cmd_expand_lexicon(args) -> int:
    tagmap = TagMap.load(args.tagmap) if args.tagmap else TagMap()
    lex = load_lexicon(args.lexicon, tagmap)
    names = load_names(args.names)
    kwargs = {}
    if args.particles:
        kwargs["prefix_particles"] = args.particles.split(",")
    expanded = expand_lexicon(lex, names, **kwargs)
    expanded.write(args.output)
    logger.info("lexicon %d -> %d forms", len(lex), len(expanded))
    return 0


def cmd_ablate(args) -> int:
    cfg = build_config(args)
    cfg.require("train", "test")
    if cfg.dev is not None:
        cfg.require("dev")
    base = replace(cfg.features, lexicon=True)
    configs = ablation_configs(base, cfg.ablations)
    if any(c.lexicon for _, c in configs):
        cfg.features = base
        cfg.check_resources()
    train = parse_segmentation_file(cfg.train)
    test = parse_segmentation_file(cfg.test)
    dev = parse_segmentation_file(cfg.dev) if cfg.dev else None
    rows = run_ablations(train, dev, test, configs, load_resources(cfg), cfg.ensemble,
                         n_jobs=cfg.jobs)
    _write_report(rows, args.format, sys.stdout)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(format_structured(rows))
    return 0


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--model", help="model file")
    p.add_argument("--lexicon", help="lexicon TSV (form, tag)")
    p.add_argument("--tagmap", help="tag map TSV (source, target[, CPLX])")
    p.add_argument("--freqs", help="frequency TSV (form, count)")
    p.add_argument("--names", nargs="+", help="name-list files for lexicon expansion")
    p.add_argument("--format", choices=("text", "structured"), default="text")


def _training(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, help="random seed (fallback: $SEGLINE_SEED, then 0)")
    p.add_argument("--trees", type=int, help="number of trees (default 250)")
    p.add_argument("--jobs", type=int, help="worker processes for tree training")
    for group in ("lexicon", "expansion", "letters", "vowels"):
        p.add_argument(f"--no-{group}", action="store_true", help=f"disable {group} features")
    p.add_argument("--no-affix-constraints", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="segline", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model")
    _common(p)
    _training(p)
    p.add_argument("--train", help="training corpus")
    p.add_argument("--dev", help="dev corpus, scored after training")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("segment", help="segment pre-tokenized text, one sentence per line")
    _common(p)
    p.add_argument("input", nargs="?", help="input file (default stdin)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("convert", help="convert analysed data to a segmentation file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("evaluate", help="score predictions or a model against gold")
    _common(p)
    p.add_argument("--gold")
    p.add_argument("--pred")
    p.add_argument("--train", help="training corpus for the most-common baseline")
    p.add_argument("--baselines", action="store_true", help="also score the baselines")
    p.add_argument("--report", help="write JSON-lines report here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("expand-lexicon", help="add filtered proper names to a lexicon")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--tagmap")
    p.add_argument("--particles", help="comma separated prefix particles")
    p.add_argument("names", nargs="+", help="name-list files")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_expand_lexicon)

    p = sub.add_parser("ablate", help="feature ablation table")
    _common(p)
    _training(p)
    p.add_argument("--train")
    p.add_argument("--dev")
    p.add_argument("--test")
    p.add_argument("--ablations", type=lambda v: [x for x in v.split(",") if x],
                   help="comma separated subset of FINAL,-expansion,-vowels,-letters,"
                        "-letr-vowl,-lexicon (write --ablations=FINAL,-lexicon)")
    p.add_argument("--report", help="write JSON-lines report here")
    p.set_defaults(func=cmd_ablate)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConfigError, CorpusFormatError, LexiconFormatError, ModelFormatError,
            ValueError, OSError) as e:
        print(f"segline {args.command}: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
