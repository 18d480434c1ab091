"""Link prediction with WL subtree histograms and logistic regression.

Each candidate pair gets the colour histogram of its labeled h-hop enclosing
subgraph, over rounds ``0..depth`` of 1-WL.  A sparse logistic model trained
by mini-batch SGD scores the pairs, and AUC measures the ranking.  This is a
kernel stand-in for a trained GNN: it is meant to show the ordering between
labelings, not absolute numbers.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import random
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.stats import rankdata

from .graph import Graph, enclosing_subgraph, watts_strogatz_graph
from .labeling import SubsetPolicy, drnl, select_head, subset_zero_one, zero_one
from .wl import ColorInterner

log = logging.getLogger(__name__)

SPLIT = (0.85, 0.05, 0.10)
VARIANTS = ("no", "zo", "drnl", "zo_s", "zo_os")
# display names used in the benchmark table
VARIANT_TITLES = {"no": "NO", "zo": "ZO", "drnl": "SEAL", "zo_s": "ZO-S", "zo_os": "ZO-OS"}
SYNTHETIC = {"n": 300, "k": 6, "p": 0.1, "seed": 0}
READOUTS = ("target", "subgraph")
# hop count of the shipped benchmark; at one hop the unlabeled model already sees the overlap
BENCHMARK_H = 2


class PredictorError(ValueError):
    pass


class TrainingDiverged(RuntimeError):
    """SGD loss grew past ten times its starting value."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Hyperparams:
    rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 50
    batch_size: int = 32


# -- data ----------------------------------------------------------------------------

def _key(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass
class LinkDataset:
    """Positive edges and sampled non-edges split into train/valid/test.

    ``observed`` is the graph with every valid and test positive removed; all
    features are computed on it.
    """

    graph: Graph
    pairs: dict           # split -> list of (u, v)
    labels: dict          # split -> list of 0/1
    seed: int
    ratios: tuple = SPLIT
    observed: Graph = field(init=False, repr=False)

    def __post_init__(self):
        hidden = {p for split in ("valid", "test")
                  for p, y in zip(self.pairs[split], self.labels[split]) if y}
        self.observed = Graph.from_edges(
            self.graph.n, [e for e in self.graph.undirected_edges() if _key(*e) not in hidden])

    @classmethod
    def split(cls, g: Graph, seed: int = 0, ratios: Sequence[float] = SPLIT) -> "LinkDataset":
        if g.directed:
            raise PredictorError("link datasets are built from undirected graphs")
        if len(ratios) != 3 or not math.isclose(sum(ratios), 1.0) or min(ratios) < 0:
            raise PredictorError(f"split ratios must be three non-negative numbers summing to 1, "
                                 f"got {tuple(ratios)}")
        rng = random.Random(seed)
        pos = sorted(_key(*e) for e in g.undirected_edges())
        if len(pos) < 3:
            raise PredictorError("need at least three edges to split")
        rng.shuffle(pos)
        n_valid = max(1, round(ratios[1] * len(pos)))
        n_test = max(1, round(ratios[2] * len(pos)))
        n_train = len(pos) - n_valid - n_test
        if n_train < 1:
            raise PredictorError("training split is empty")
        cuts = {"train": pos[:n_train], "valid": pos[n_train:n_train + n_valid],
                "test": pos[n_train + n_valid:]}
        neg = _sample_non_edges(g, len(pos), rng)
        pairs, labels, start = {}, {}, 0
        for split in ("train", "valid", "test"):
            k = len(cuts[split])
            pairs[split] = cuts[split] + neg[start:start + k]
            labels[split] = [1] * k + [0] * k
            start += k
        return cls(g, pairs, labels, seed, tuple(ratios))

    def without_pair(self, split: str, pair) -> "LinkDataset":
        """Dataset with one pair dropped from ``split`` (and from the graph when it is an edge)."""
        pair = _key(*pair)
        keep = [(p, y) for p, y in zip(self.pairs[split], self.labels[split]) if p != pair]
        if len(keep) == len(self.pairs[split]):
            raise PredictorError(f"{pair} is not in the {split} split")
        g = Graph.from_edges(self.graph.n, [e for e in self.graph.undirected_edges()
                                            if _key(*e) != pair])
        pairs, labels = dict(self.pairs), dict(self.labels)
        pairs[split] = [p for p, _ in keep]
        labels[split] = [y for _, y in keep]
        return LinkDataset(g, pairs, labels, self.seed, self.ratios)


def _sample_non_edges(g: Graph, count: int, rng: random.Random) -> list:
    n = g.n
    total = n * (n - 1) // 2 - g.num_edges
    if total < count:
        raise PredictorError(f"graph has only {total} non-edges, {count} negatives requested")
    out, seen = [], set()
    while len(out) < count:
        u, v = rng.sample(range(1, n + 1), 2)
        key = _key(u, v)
        if key in seen or g.has_edge(u, v):
            continue
        seen.add(key)
        out.append(key)
    return out


# -- features ------------------------------------------------------------------------

def _labelings(variant: str, sub: Graph, pair: tuple) -> list:
    """Label vectors to refine; histograms of several labelings are summed."""
    if variant == "no":
        return [None]
    if variant == "zo":
        return [zero_one(set(pair), sub)]
    if variant == "drnl":
        return [drnl(set(pair), sub)]
    if variant == "zo_s":
        return [subset_zero_one({u}, sub) for u in pair]
    if variant == "zo_os":
        return [subset_zero_one({select_head(set(pair), sub, SubsetPolicy.random())}, sub)]
    raise PredictorError(f"unknown labeling {variant!r}; choose from {', '.join(VARIANTS)}")


def extract_features(g: Graph, pair, labeling: str = "zo", h: int = 1, depth: int = 3,
                     interner: ColorInterner | None = None, readout: str = "target",
                     hide_link: bool = True) -> Counter:
    """Colour histogram of the labeled enclosing subgraph of ``pair``.

    ``readout="target"`` counts the colours of the two pair nodes over rounds
    ``0..depth``; ``"subgraph"`` counts every node.  The link between the two
    nodes, if present, is hidden first unless ``hide_link`` is off.  Colours
    unseen by a frozen ``interner`` are dropped.
    """
    if readout not in READOUTS:
        raise PredictorError(f"unknown readout {readout!r}; choose from {', '.join(READOUTS)}")
    u, v = pair
    if u == v:
        raise PredictorError("a link needs two distinct nodes")
    for x in (u, v):
        if not 1 <= x <= g.n:
            raise PredictorError(f"node {x} is not in the graph")
    if hide_link and (g.has_edge(u, v) or g.has_edge(v, u)):
        g = g.without_edges([(u, v)])
    sub, _, index = enclosing_subgraph(g, {u, v}, h)
    local = (index[u], index[v])
    interner = interner if interner is not None else ColorInterner()
    hist = Counter()
    for lab in _labelings(labeling, sub, local):
        for row in interner.refine(sub, lab, rounds=depth):
            hist.update(row if readout == "subgraph" else (row[x - 1] for x in local))
    hist.pop(-1, None)
    return hist


def _matrix(hists: list, dim: int) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for r, hist in enumerate(hists):
        for c, cnt in hist.items():
            rows.append(r)
            cols.append(c)
            vals.append(math.log1p(cnt))
    return sparse.csr_matrix((vals, (rows, cols)), shape=(len(hists), dim))


@dataclass
class FeatureSet:
    interner: ColorInterner
    X: dict              # split -> csr matrix
    y: dict              # split -> np.ndarray


def featurize(ds: LinkDataset, labeling: str = "zo", h: int = 1, depth: int = 3,
              readout: str = "target") -> FeatureSet:
    """Features for every split; the vocabulary comes from the training pairs only."""
    interner = ColorInterner()
    hists = {"train": [extract_features(ds.observed, p, labeling, h, depth, interner, readout)
                       for p in ds.pairs["train"]]}
    interner.frozen = True
    for split in ("valid", "test"):
        hists[split] = [extract_features(ds.observed, p, labeling, h, depth, interner, readout)
                        for p in ds.pairs[split]]
    dim = len(interner)
    return FeatureSet(interner, {s: _matrix(hists[s], dim) for s in hists},
                      {s: np.asarray(ds.labels[s], dtype=float) for s in hists})


# -- model ---------------------------------------------------------------------------

def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def logistic_loss(w: np.ndarray, b: float, X, y: np.ndarray, l2: float) -> float:
    z = X @ w + b
    # log(1 + e^z) - y z, computed stably
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * (w @ w))


def logistic_grad(w: np.ndarray, b: float, X, y: np.ndarray, l2: float) -> tuple:
    r = _sigmoid(X @ w + b) - y
    gw = np.asarray(X.T @ r).ravel() / len(y) + l2 * w
    return gw, float(r.mean())


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float = 0.0
    hyper: Hyperparams = Hyperparams()
    history: list = field(default_factory=list)   # per epoch: train loss, valid auc

    def decision(self, X) -> np.ndarray:
        return np.asarray(X @ self.weights).ravel() + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return _sigmoid(self.decision(X))

    def loss(self, X, y) -> float:
        return logistic_loss(self.weights, self.bias, X, y, self.hyper.l2)


def train(X, y, hyper: Hyperparams = Hyperparams(), seed: int = 0,
          valid: tuple | None = None) -> LogisticModel:
    """Mini-batch SGD on the L2-penalised mean logistic loss.

    ``valid = (X, y)`` adds the validation AUC to each epoch's history.
    """
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    if n == 0:
        raise PredictorError("training split is empty")
    model = LogisticModel(np.zeros(X.shape[1]), 0.0, hyper)
    rng = np.random.default_rng(seed)
    start = model.loss(X, y)
    for epoch in range(hyper.epochs):
        order = rng.permutation(n)
        for lo in range(0, n, hyper.batch_size):
            idx = order[lo:lo + hyper.batch_size]
            gw, gb = logistic_grad(model.weights, model.bias, X[idx], y[idx], hyper.l2)
            model.weights -= hyper.rate * gw
            model.bias -= hyper.rate * gb
        current = model.loss(X, y)
        if not math.isfinite(current) or current > 10 * start:
            raise TrainingDiverged(
                f"loss rose from {start:.4g} to {current:.4g} at epoch {epoch + 1}",
                {"epoch": epoch + 1, "initial_loss": start, "loss": current,
                 "max_abs_weight": float(np.max(np.abs(model.weights), initial=0.0)),
                 "rate": hyper.rate})
        entry = {"epoch": epoch + 1, "loss": current}
        if valid is not None:
            try:
                entry["valid_auc"] = auc_score(valid[1], model.decision(valid[0]))
            except PredictorError:
                entry["valid_auc"] = None
        model.history.append(entry)
    return model


def auc_score(labels, scores) -> float:
    """Mann-Whitney AUC; tied scores count one half."""
    labels = np.asarray(labels)
    scores = np.asarray(scores, dtype=float)
    if labels.shape != scores.shape:
        raise PredictorError("labels and scores differ in length")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0 or n_pos + n_neg != len(labels):
        raise PredictorError(f"AUC needs 0/1 labels with both classes, got {n_pos} positives "
                             f"and {n_neg} negatives")
    ranks = rankdata(scores)
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


def evaluate_auc(model: LogisticModel, features: FeatureSet, split: str = "test") -> float:
    return auc_score(features.y[split], model.decision(features.X[split]))


def gradient_check(seed: int = 0, n: int = 20, d: int = 6, eps: float = 1e-6,
                   l2: float = 1e-2) -> float:
    """Largest relative gap between the analytic gradient and central differences."""
    rng = np.random.default_rng(seed)
    X = sparse.csr_matrix(rng.poisson(1.0, size=(n, d)).astype(float))
    y = rng.integers(0, 2, size=n).astype(float)
    w, b = rng.normal(size=d), float(rng.normal())
    gw, gb = logistic_grad(w, b, X, y, l2)
    analytic = np.append(gw, gb)
    numeric = np.empty(d + 1)
    for k in range(d + 1):
        step = np.zeros(d + 1)
        step[k] = eps
        up = logistic_loss(w + step[:d], b + step[d], X, y, l2)
        down = logistic_loss(w - step[:d], b - step[d], X, y, l2)
        numeric[k] = (up - down) / (2 * eps)
    scale = np.maximum(np.abs(analytic), np.abs(numeric)).clip(min=1e-8)
    return float(np.max(np.abs(analytic - numeric) / scale))


# -- fitted predictor ------------------------------------------------------------------

@dataclass
class LinkPredictor:
    model: LogisticModel
    interner: ColorInterner
    graph: Graph
    labeling: str
    h: int
    depth: int
    readout: str = "target"

    def score(self, pairs) -> list:
        hists = [extract_features(self.graph, p, self.labeling, self.h, self.depth, self.interner,
                                  self.readout) for p in pairs]
        return self.model.predict_proba(_matrix(hists, len(self.interner))).tolist()


def fit(g: Graph, labeling: str = "zo", h: int = 1, depth: int = 3,
        hyper: Hyperparams = Hyperparams(), seed: int = 0, readout: str = "target") -> LinkPredictor:
    """Train on every edge of ``g`` against as many sampled non-edges."""
    rng = random.Random(seed)
    pos = sorted(_key(*e) for e in g.undirected_edges())
    if not pos:
        raise PredictorError("graph has no edges to learn from")
    pairs = pos + _sample_non_edges(g, len(pos), rng)
    y = np.array([1.0] * len(pos) + [0.0] * len(pos))
    interner = ColorInterner()
    hists = [extract_features(g, p, labeling, h, depth, interner, readout) for p in pairs]
    interner.frozen = True
    model = train(_matrix(hists, len(interner)), y, hyper, seed)
    return LinkPredictor(model, interner, g, labeling, h, depth, readout)


# -- benchmark -------------------------------------------------------------------------

def synthetic_graph(n: int = SYNTHETIC["n"], k: int = SYNTHETIC["k"], p: float = SYNTHETIC["p"],
                    seed: int = SYNTHETIC["seed"]) -> Graph:
    """The shipped small-world benchmark graph."""
    return watts_strogatz_graph(n, k, p, random.Random(seed))


def run_cell(g: Graph, labeling: str, seed: int, h: int = BENCHMARK_H, depth: int = 3,
             hyper: Hyperparams = Hyperparams(), readout: str = "target") -> dict:
    ds = LinkDataset.split(g, seed)
    feats = featurize(ds, labeling, h, depth, readout)
    model = train(feats.X["train"], feats.y["train"], hyper, seed,
                  valid=(feats.X["valid"], feats.y["valid"]))
    return {"labeling": labeling, "seed": seed, "test_auc": evaluate_auc(model, feats, "test"),
            "valid_auc": model.history[-1].get("valid_auc") if model.history else None,
            "vocabulary": len(feats.interner), "final_loss": model.history[-1]["loss"]
            if model.history else model.loss(feats.X["train"], feats.y["train"])}


def _run_cell_args(args):
    return run_cell(*args)


def worker_count(cells: int) -> int:
    cap = os.environ.get("LABELKIT_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(cells, limit))


@dataclass
class BenchmarkReport:
    rows: list          # one per requested labeling, in request order
    manifest: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        seeds = self.manifest["seeds"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["labeling", "name", "mean_auc", "std_auc"] + [f"seed_{s}" for s in seeds])
        for row in self.rows:
            w.writerow([row["labeling"], VARIANT_TITLES[row["labeling"]], f"{row['mean']:.6f}",
                        f"{row['std']:.6f}"] + [f"{a:.6f}" for a in row["aucs"]])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"manifest": self.manifest, "rows": self.rows}, indent=2, sort_keys=True)

    def mean(self, labeling: str) -> float:
        for row in self.rows:
            if row["labeling"] == labeling:
                return row["mean"]
        raise KeyError(labeling)


def benchmark(g: Graph | None = None, labelings: Sequence[str] = VARIANTS, h: int = BENCHMARK_H,
              depth: int = 3, seeds: Sequence[int] = (0, 1, 2, 3, 4),
              hyper: Hyperparams = Hyperparams(), workers: int | None = None,
              source: str | None = None, readout: str = "target") -> BenchmarkReport:
    """Test AUC for every labeling and seed, summarised as mean and standard deviation."""
    for lab in labelings:
        if lab not in VARIANTS:
            raise PredictorError(f"unknown labeling {lab!r}; choose from {', '.join(VARIANTS)}")
    if g is None:
        g, source = synthetic_graph(), source or "synthetic:" + json.dumps(SYNTHETIC, sort_keys=True)
    unique = list(dict.fromkeys(labelings))
    if readout not in READOUTS:
        raise PredictorError(f"unknown readout {readout!r}; choose from {', '.join(READOUTS)}")
    cells = [(g, lab, s, h, depth, hyper, readout) for lab in unique for s in seeds]
    workers = workers or worker_count(len(cells))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell_args, cells))
    else:
        results = [_run_cell_args(c) for c in cells]
    by_lab = {lab: [r for r in results if r["labeling"] == lab] for lab in unique}
    rows = []
    for lab in labelings:
        aucs = [r["test_auc"] for r in by_lab[lab]]
        rows.append({"labeling": lab, "aucs": aucs, "mean": statistics.fmean(aucs),
                     "std": statistics.pstdev(aucs) if len(aucs) > 1 else 0.0,
                     "vocabulary": [r["vocabulary"] for r in by_lab[lab]]})
    manifest = {"graph": source or "input", "n": g.n, "edges": g.num_edges, "h": h,
                "depth": depth, "readout": readout, "seeds": list(seeds), "labelings": list(labelings),
                "split": list(SPLIT), "negatives": "uniform non-edges, 1:1",
                "hyperparams": asdict(hyper)}
    return BenchmarkReport(rows, manifest)
