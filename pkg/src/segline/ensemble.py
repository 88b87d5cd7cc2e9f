"""Extremely randomized trees for binary boundary classification.

Categorical slots are mapped to integer codes (1..K in lexicographic order of
the category string, 0 for anything unseen in training) so that every slot
can be split with a plain ``value <= threshold`` test.

Trees follow Geurts et al. (2006): no bootstrap, and at each node one
uniform random cut point per non-constant feature, keeping the cut with the
largest Gini decrease. Tree ``k`` draws from its own generator seeded with
``seed + k``, so serial and parallel training give identical forests.

Model file layout (``SEGLINE-MODEL v1``)::

    b"SEGLINE-MODEL v1\\n" + zlib(json)

where the JSON object holds ``config``, ``feature_config``, ``encoder``
(per slot: sorted category list or null for numeric slots), ``affixes``
(prefix/suffix lists or null) and ``trees``. Each tree stores the arrays
``feature`` (int32, -1 at leaves), ``threshold`` (float64), ``left``,
``right`` (int32) and ``counts`` (int64, shape (n_nodes, 2): no-boundary,
boundary) as base64 of their little-endian bytes. Keys are sorted and the
encoding is compact, so equal models give equal files.
"""
from __future__ import annotations

import base64
import json
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .constraints import AffixInventory

MAGIC = b"SEGLINE-MODEL"
FORMAT_VERSION = 1
HEADER = MAGIC + b" v%d\n" % FORMAT_VERSION


class ModelFormatError(ValueError):
    """Model file is truncated, corrupt, or not a model file."""


class ModelVersionError(ModelFormatError):
    pass


class CategoryEncoder:
    """Per-slot lexicographic integer codes for categorical features."""

    def __init__(self, categorical: Sequence[bool], tables: Sequence[Sequence[str] | None]):
        self.categorical = tuple(bool(c) for c in categorical)
        self.categories = [None if t is None else tuple(t) for t in tables]
        self.codes = [None if t is None else {c: k for k, c in enumerate(t, 1)}
                      for t in self.categories]

    @classmethod
    def fit(cls, vectors: Sequence[Sequence], categorical: Sequence[bool]) -> "CategoryEncoder":
        if not vectors:
            raise ValueError("cannot fit an encoder on no data")
        seen = [set() if c else None for c in categorical]
        for v in vectors:
            for j, s in enumerate(seen):
                if s is not None:
                    s.add(v[j])
        return cls(categorical, [None if s is None else sorted(s) for s in seen])

    @property
    def n_features(self) -> int:
        return len(self.categorical)

    def encode(self, slot: int, value) -> float:
        table = self.codes[slot]
        if table is None:
            return float(value)
        return float(table.get(value, 0))

    def decode(self, slot: int, code: int):
        cats = self.categories[slot]
        if cats is None:
            return code
        return cats[code - 1] if code > 0 else None

    def transform(self, vectors: Sequence[Sequence]) -> np.ndarray:
        X = np.empty((len(vectors), self.n_features), dtype=np.float64)
        for j, table in enumerate(self.codes):
            if table is None:
                X[:, j] = [float(v[j]) for v in vectors]
            else:
                X[:, j] = [table.get(v[j], 0) for v in vectors]
        return X

    def to_json(self):
        return {"categorical": list(self.categorical),
                "categories": [None if c is None else list(c) for c in self.categories]}

    @classmethod
    def from_json(cls, d) -> "CategoryEncoder":
        return cls(d["categorical"], d["categories"])

    def __eq__(self, other):
        return (isinstance(other, CategoryEncoder) and self.categorical == other.categorical
                and self.categories == other.categories)


def fit_encoder(vectors, categorical=None) -> CategoryEncoder:
    if categorical is None:
        from .features import categorical_mask
        categorical = categorical_mask()
    return CategoryEncoder.fit(vectors, categorical)


def gini(n0: float, n1: float) -> float:
    n = n0 + n1
    if n == 0:
        return 0.0
    p0, p1 = n0 / n, n1 / n
    return 1.0 - p0 * p0 - p1 * p1


def gini_gain(labels_left: Sequence[bool], labels_right: Sequence[bool]) -> float:
    """Parent Gini impurity minus the size-weighted impurity of both children."""
    nl, nr = len(labels_left), len(labels_right)
    if nl == 0 or nr == 0:
        raise ValueError("both sides of a split must be non-empty")
    l1 = sum(1 for v in labels_left if v)
    r1 = sum(1 for v in labels_right if v)
    n = nl + nr
    parent = gini(n - l1 - r1, l1 + r1)
    return parent - nl / n * gini(nl - l1, l1) - nr / n * gini(nr - r1, r1)


@dataclass
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for k in range(self.n_nodes):
            if self.feature[k] >= 0:
                depth[self.left[k]] = depth[self.right[k]] = depth[k] + 1
        return int(depth.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row of ``X``."""
        node = np.zeros(len(X), dtype=np.int64)
        active = np.arange(len(X))
        while active.size:
            f = self.feature[node[active]]
            inner = f >= 0
            active, f = active[inner], f[inner]
            if not active.size:
                break
            cur = node[active]
            go_left = X[active, f] <= self.threshold[cur]
            node[active] = np.where(go_left, self.left[cur], self.right[cur])
        return node

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        c = self.counts[self.apply(X)]
        return c[:, 1] / c.sum(axis=1)

    def to_json(self):
        def enc(a, dtype):
            return base64.b64encode(np.ascontiguousarray(a, dtype=dtype).tobytes()).decode("ascii")
        return {"feature": enc(self.feature, "<i4"), "threshold": enc(self.threshold, "<f8"),
                "left": enc(self.left, "<i4"), "right": enc(self.right, "<i4"),
                "counts": enc(self.counts, "<i8")}

    @classmethod
    def from_json(cls, d) -> "Tree":
        def dec(key, dtype):
            return np.frombuffer(base64.b64decode(d[key]), dtype=dtype).copy()
        feature = dec("feature", "<i4").astype(np.int64)
        counts = dec("counts", "<i8").reshape(-1, 2)
        tree = cls(feature, dec("threshold", "<f8"), dec("left", "<i4").astype(np.int64),
                   dec("right", "<i4").astype(np.int64), counts)
        n = len(feature)
        if not (len(tree.threshold) == len(tree.left) == len(tree.right) == len(counts) == n):
            raise ModelFormatError("inconsistent tree arrays")
        return tree


def build_tree(X: np.ndarray, y: np.ndarray, rng: np.random.Generator,
               min_samples_split: int = 2) -> Tree:
    """Grow one extremely randomized tree on all rows of ``X``."""
    y = y.astype(np.int64)
    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(n0, n1):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append((n0, n1))
        return len(feature) - 1

    root_idx = np.arange(len(y))
    n1 = int(y.sum())
    stack = [(new_node(len(y) - n1, n1), root_idx)]
    while stack:
        node, idx = stack.pop()
        n = len(idx)
        n0, n1 = counts[node]
        if n1 == 0 or n0 == 0 or n < min_samples_split:
            continue
        Xn = X[idx]
        lo = Xn.min(axis=0)
        hi = Xn.max(axis=0)
        cand = np.flatnonzero(hi > lo)
        if not cand.size:
            continue
        cut = rng.uniform(lo[cand], hi[cand])
        # uniform() may round up to the upper bound, which would empty the right side
        over = cut >= hi[cand]
        cut[over] = lo[cand][over]

        yn = y[idx]
        mask = Xn[:, cand] <= cut
        nl = mask.sum(axis=0)
        nl1 = yn @ mask
        nr = n - nl
        nr1 = n1 - nl1
        pl1 = nl1 / nl
        pr1 = nr1 / nr
        gl = 2.0 * pl1 * (1.0 - pl1)
        gr = 2.0 * pr1 * (1.0 - pr1)
        # parent impurity is constant at this node, so maximise the negated child term
        score = -(nl * gl + nr * gr)
        best = int(np.argmax(score))

        go_left = mask[:, best]
        li, ri = idx[go_left], idx[~go_left]
        l1 = int(nl1[best])
        r1 = n1 - l1
        feature[node] = int(cand[best])
        threshold[node] = float(cut[best])
        lnode = new_node(len(li) - l1, l1)
        rnode = new_node(len(ri) - r1, r1)
        left[node], right[node] = lnode, rnode
        stack.append((rnode, ri))
        stack.append((lnode, li))

    return Tree(np.asarray(feature, dtype=np.int64), np.asarray(threshold, dtype=np.float64),
                np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64),
                np.asarray(counts, dtype=np.int64).reshape(-1, 2))


def _build_trees(X, y, seeds, min_samples_split):
    return [build_tree(X, y, np.random.default_rng(s), min_samples_split) for s in seeds]


@dataclass(frozen=True)
class EnsembleConfig:
    n_trees: int = 250
    min_samples_split: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class TreeEnsemble:
    trees: list[Tree]
    encoder: CategoryEncoder
    config: EnsembleConfig = field(default_factory=EnsembleConfig)
    feature_config: dict = field(default_factory=dict)
    affixes: AffixInventory | None = None

    def predict_proba_matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.predict_proba(X)
        return total / len(self.trees)

    def predict_proba_many(self, vectors: Sequence[Sequence]) -> np.ndarray:
        if not len(vectors):
            return np.zeros(0)
        return self.predict_proba_matrix(self.encoder.transform(vectors))

    def predict_proba(self, vector: Sequence) -> float:
        return float(self.predict_proba_many([vector])[0])

    def predict(self, vectors: Sequence[Sequence]) -> np.ndarray:
        return self.predict_proba_many(vectors) >= 0.5


def train_matrix(X: np.ndarray, y: Sequence[bool], config: EnsembleConfig = EnsembleConfig(),
                 n_jobs: int = 1) -> list[Tree]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=bool)
    if len(X) == 0 or len(X) != len(y):
        raise ValueError("need equally many vectors and labels, at least one")
    seeds = [config.seed + k for k in range(config.n_trees)]
    if n_jobs == 1:
        return _build_trees(X, y, seeds, config.min_samples_split)
    chunks = [seeds[k::n_jobs] for k in range(n_jobs)]
    with ProcessPoolExecutor(n_jobs) as pool:
        parts = list(pool.map(_build_trees, [X] * n_jobs, [y] * n_jobs, chunks,
                              [config.min_samples_split] * n_jobs))
    by_seed = {}
    for chunk, trees in zip(chunks, parts):
        by_seed.update(zip(chunk, trees))
    return [by_seed[s] for s in seeds]


def train(vectors: Sequence[Sequence], labels: Sequence[bool],
          config: EnsembleConfig = EnsembleConfig(), categorical: Sequence[bool] | None = None,
          n_jobs: int = 1) -> TreeEnsemble:
    """Fit the category encoder and grow ``config.n_trees`` trees."""
    if not len(vectors) or len(vectors) != len(labels):
        raise ValueError("need equally many vectors and labels, at least one")
    if categorical is None:
        categorical = [isinstance(v, str) for v in vectors[0]]
    encoder = CategoryEncoder.fit(vectors, categorical)
    trees = train_matrix(encoder.transform(vectors), labels, config, n_jobs)
    return TreeEnsemble(trees, encoder, config)


def predict_proba(model: TreeEnsemble, vector: Sequence) -> float:
    return model.predict_proba(vector)


def dumps_model(model: TreeEnsemble) -> bytes:
    payload = {
        "config": asdict(model.config),
        "feature_config": model.feature_config,
        "encoder": model.encoder.to_json(),
        "affixes": None if model.affixes is None else model.affixes.to_json(),
        "trees": [t.to_json() for t in model.trees],
    }
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return HEADER + zlib.compress(body.encode("utf-8"), 6)


def loads_model(data: bytes) -> TreeEnsemble:
    head, sep, body = data.partition(b"\n")
    if not sep or not head.startswith(MAGIC + b" v"):
        raise ModelFormatError("not a segmentation model file")
    if head + b"\n" != HEADER:
        raise ModelVersionError(
            f"unsupported model version {head.decode('ascii', 'replace')!r}; "
            f"expected {HEADER.decode().strip()!r}")
    try:
        payload = json.loads(zlib.decompress(body).decode("utf-8"))
        trees = [Tree.from_json(t) for t in payload["trees"]]
        model = TreeEnsemble(
            trees=trees,
            encoder=CategoryEncoder.from_json(payload["encoder"]),
            config=EnsembleConfig(**payload["config"]),
            feature_config=payload["feature_config"],
            affixes=None if payload["affixes"] is None
            else AffixInventory.from_json(payload["affixes"]),
        )
    except ModelFormatError:
        raise
    except (zlib.error, UnicodeDecodeError, ValueError, KeyError, TypeError) as e:
        raise ModelFormatError(f"corrupt model file: {e}") from e
    if len(model.trees) != model.config.n_trees:
        raise ModelFormatError("tree count does not match config")
    return model


def save_model(model: TreeEnsemble, path) -> None:
    Path(path).write_bytes(dumps_model(model))


def load_model(path) -> TreeEnsemble:
    return loads_model(Path(path).read_bytes())
