"""Predicting an article's media group from comment-response statistics.

Features: the (sympathies, antipathies, replies) triples of the top 100
comments by total responses, concatenated into a 300-dim vector. Models:
a from-scratch MLP (300 -> 64 -> 32 -> 1 sigmoid), logistic regression,
k-NN, and a majority baseline, compared over 5 rotating 60/20/20 folds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from echoscope.errors import EchoscopeError, TrainingDivergedError

FORMAT_TAG = "echoscope-model-v1"


@dataclass(frozen=True)
class FeatureVector:
    article_id: str
    label: int          # 1 = group A (+1), 0 = group B (-1)
    values: np.ndarray  # 300 floats: 100 x (sympathies, antipathies, replies)


@dataclass(frozen=True)
class FoldPlan:
    folds: list  # list of dicts with 'train' / 'validation' / 'test' id lists


@dataclass
class Hyper:
    learning_rate: float = 0.05
    batch_size: int = 64
    max_epochs: int = 200
    patience: int = 20
    l2: float = 1e-4
    hidden1: int = 64
    hidden2: int = 32
    k_neighbors: int = 15
    seed: int = 0


def select_articles(corpus, grouping, min_comments: int = 200):
    """Articles on group media with strictly more than min_comments comments,
    sorted by article_id."""
    group_media = grouping.group_a | grouping.group_b
    out = []
    for aid, idxs in corpus.comments_by_article.items():
        if len(idxs) > min_comments and corpus.articles[aid].medium_id in group_media:
            out.append(aid)
    return sorted(out)


def article_features(article_id, corpus, grouping, k: int = 100) -> FeatureVector:
    """Top-k comments by total responses, ties by earlier created_at then
    comment_id; short articles are zero-padded."""
    medium_id = corpus.articles[article_id].medium_id
    sign = grouping.leaning.get(medium_id)
    if sign is None:
        raise EchoscopeError(f"article {article_id!r} is not on a group medium")
    comments = [corpus.comments[ci] for ci in corpus.comments_by_article.get(article_id, ())]
    comments.sort(key=lambda c: (-(c.sympathies + c.antipathies + c.replies), c.created_at, c.comment_id))
    values = np.zeros(3 * k)
    for rank, c in enumerate(comments[:k]):
        values[3 * rank : 3 * rank + 3] = (c.sympathies, c.antipathies, c.replies)
    return FeatureVector(article_id=article_id, label=1 if sign > 0 else 0, values=values)


def build_dataset(corpus, grouping, article_ids, k: int = 100):
    feats = [article_features(aid, corpus, grouping, k) for aid in article_ids]
    X = np.stack([f.values for f in feats])
    y = np.array([f.label for f in feats], dtype=float)
    return X, y


def make_folds(article_ids, seed) -> FoldPlan:
    """Rotating disjoint 5-fold plan: test = fold f, validation = fold f+1,
    train = the remaining three folds (60/20/20)."""
    ids = list(article_ids)
    if len(ids) < 10:
        raise EchoscopeError("need at least 10 articles for fold construction")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    shuffled = [ids[i] for i in order]
    parts = [list(p) for p in np.array_split(np.array(shuffled, dtype=object), 5)]
    folds = []
    for f in range(5):
        test = parts[f]
        val = parts[(f + 1) % 5]
        train = [aid for g in range(5) if g not in (f, (f + 1) % 5) for aid in parts[g]]
        folds.append({"train": train, "validation": [str(a) for a in val], "test": [str(a) for a in test]})
        folds[-1]["train"] = [str(a) for a in folds[-1]["train"]]
    return FoldPlan(folds=folds)


class Normalizer:
    """log(1 + v) then per-dimension standardization, fitted on train only."""

    def __init__(self):
        self.mean = None
        self.std = None

    def fit(self, X):
        logged = np.log1p(X)
        self.mean = logged.mean(axis=0)
        self.std = np.maximum(logged.std(axis=0), 1e-8)
        return self

    def transform(self, X):
        return (np.log1p(X) - self.mean) / self.std


@dataclass
class TrainedModel:
    kind: str
    parameters: dict = field(default_factory=dict)
    normalization: Normalizer | None = None

    def predict_proba(self, X):
        Z = self.normalization.transform(X) if self.normalization is not None else X
        if self.kind == "mlp":
            return _mlp_forward(self.parameters, Z)[0]
        if self.kind == "logistic":
            return _sigmoid(Z @ self.parameters["w"] + self.parameters["b"])
        if self.kind == "knn":
            return _knn_proba(self.parameters, Z)
        if self.kind == "majority":
            return np.full(len(X), float(self.parameters["label"]))
        raise EchoscopeError(f"unknown model kind {self.kind!r}")

    def predict(self, X):
        if self.kind == "knn":
            # exact majority vote with ties to label 0
            return (self.predict_proba(X) > 0.5).astype(int)
        return (self.predict_proba(X) >= 0.5).astype(int)


def _sigmoid(z):
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _mlp_forward(params, X):
    h1 = np.maximum(X @ params["W1"] + params["b1"], 0.0)
    h2 = np.maximum(h1 @ params["W2"] + params["b2"], 0.0)
    p = _sigmoid(h2 @ params["W3"] + params["b3"])
    return p.ravel(), (h1, h2)


def _bce(p, y):
    eps = 1e-12
    return float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))


def mlp_init(n_in, hidden1, hidden2, rng):
    """He-scaled initialization for the two ReLU layers."""
    return {
        "W1": rng.normal(0.0, np.sqrt(2.0 / n_in), (n_in, hidden1)),
        "b1": np.zeros(hidden1),
        "W2": rng.normal(0.0, np.sqrt(2.0 / hidden1), (hidden1, hidden2)),
        "b2": np.zeros(hidden2),
        "W3": rng.normal(0.0, np.sqrt(2.0 / hidden2), (hidden2, 1)),
        "b3": np.zeros(1),
    }


def mlp_loss_and_grads(params, X, y):
    """Binary cross-entropy and analytic gradients for all six parameters."""
    n = len(X)
    p, (h1, h2) = _mlp_forward(params, X)
    loss = _bce(p, y)
    delta3 = ((p - y) / n).reshape(-1, 1)
    gW3 = h2.T @ delta3
    gb3 = delta3.sum(axis=0)
    delta2 = (delta3 @ params["W3"].T) * (h2 > 0)
    gW2 = h1.T @ delta2
    gb2 = delta2.sum(axis=0)
    delta1 = (delta2 @ params["W2"].T) * (h1 > 0)
    gW1 = X.T @ delta1
    gb1 = delta1.sum(axis=0)
    return loss, {"W1": gW1, "b1": gb1, "W2": gW2, "b2": gb2, "W3": gW3, "b3": gb3}


def logistic_loss_and_grads(params, X, y, l2=0.0):
    n = len(X)
    p = _sigmoid(X @ params["w"] + params["b"])
    eps = 1e-12
    loss = -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    loss += 0.5 * l2 * float(params["w"] @ params["w"])
    gw = X.T @ (p - y) / n + l2 * params["w"]
    gb = np.mean(p - y)
    return float(loss), {"w": gw, "b": np.array([gb])}


def _accuracy(pred, y):
    return float(np.mean(pred == y))


def train_mlp(train, validation, hyper: Hyper | None = None) -> TrainedModel:
    """Mini-batch gradient descent with early stopping on best validation
    accuracy. Raises TrainingDivergedError if the loss goes non-finite."""
    hyper = hyper or Hyper()
    X_raw, y = train
    Xv_raw, yv = validation
    if len(X_raw) == 0 or len(Xv_raw) == 0:
        raise EchoscopeError("empty training or validation split")
    norm = Normalizer().fit(X_raw)
    X = norm.transform(X_raw)
    Xv = norm.transform(Xv_raw)

    rng = np.random.default_rng(hyper.seed)
    params = mlp_init(X.shape[1], hyper.hidden1, hyper.hidden2, rng)
    best = {k: v.copy() for k, v in params.items()}
    best_acc = -1.0
    stale = 0
    step = 0
    for _epoch in range(hyper.max_epochs):
        order = rng.permutation(len(X))
        for start in range(0, len(X), hyper.batch_size):
            batch = order[start : start + hyper.batch_size]
            loss, grads = mlp_loss_and_grads(params, X[batch], y[batch])
            if not np.isfinite(loss):
                raise TrainingDivergedError(step)
            for key in params:
                params[key] -= hyper.learning_rate * grads[key]
            step += 1
        val_acc = _accuracy((_mlp_forward(params, Xv)[0] >= 0.5).astype(int), yv)
        if val_acc > best_acc:
            best_acc = val_acc
            best = {k: v.copy() for k, v in params.items()}
            stale = 0
        else:
            stale += 1
            if stale >= hyper.patience:
                break
    return TrainedModel(kind="mlp", parameters=best, normalization=norm)


def train_logistic(train, hyper: Hyper | None = None) -> TrainedModel:
    hyper = hyper or Hyper()
    X_raw, y = train
    norm = Normalizer().fit(X_raw)
    X = norm.transform(X_raw)
    rng = np.random.default_rng(hyper.seed)
    params = {"w": np.zeros(X.shape[1]), "b": np.array([0.0])}
    step = 0
    for _epoch in range(hyper.max_epochs):
        order = rng.permutation(len(X))
        for start in range(0, len(X), hyper.batch_size):
            batch = order[start : start + hyper.batch_size]
            loss, grads = logistic_loss_and_grads(
                {"w": params["w"], "b": float(params["b"][0])}, X[batch], y[batch], hyper.l2
            )
            if not np.isfinite(loss):
                raise TrainingDivergedError(step)
            params["w"] -= hyper.learning_rate * grads["w"]
            params["b"] -= hyper.learning_rate * grads["b"]
            step += 1
    return TrainedModel(
        kind="logistic",
        parameters={"w": params["w"], "b": float(params["b"][0])},
        normalization=norm,
    )


def _knn_proba(params, Z):
    """Mean label among the k nearest training points; ties in the vote
    give probability exactly 0.5, which predict() maps to label 0."""
    Xt = params["X"]
    yt = params["y"]
    k = params["k"]
    d2 = np.sum(Z**2, axis=1, keepdims=True) - 2.0 * Z @ Xt.T + np.sum(Xt**2, axis=1)
    # stable sort: distance ties resolve to the lower training index
    nearest = np.argsort(d2, axis=1, kind="stable")[:, : min(k, len(yt))]
    return yt[nearest].mean(axis=1)


def train_knn(train, k_neighbors: int = 15, hyper: Hyper | None = None) -> TrainedModel:
    X_raw, y = train
    norm = Normalizer().fit(X_raw)
    return TrainedModel(
        kind="knn",
        parameters={"X": norm.transform(X_raw), "y": np.asarray(y, dtype=float), "k": k_neighbors},
        normalization=norm,
    )


def majority_baseline(train) -> TrainedModel:
    _X, y = train
    ones = int(np.sum(y == 1))
    zeros = len(y) - ones
    return TrainedModel(kind="majority", parameters={"label": 1 if ones > zeros else 0})


def evaluate(model: TrainedModel, test):
    """Accuracy at threshold 0.5 plus per-class confusion counts."""
    X, y = test
    if len(X) == 0:
        raise EchoscopeError("empty test set")
    pred = model.predict(X)
    y = np.asarray(y, dtype=int)
    return {
        "accuracy": _accuracy(pred, y),
        "tp": int(np.sum((pred == 1) & (y == 1))),
        "tn": int(np.sum((pred == 0) & (y == 0))),
        "fp": int(np.sum((pred == 1) & (y == 0))),
        "fn": int(np.sum((pred == 0) & (y == 1))),
    }


def run_classification(corpus, grouping, seed=0, min_comments=200, hyper: Hyper | None = None):
    """Full 5-fold comparison of MLP / logistic / k-NN / majority.

    Returns (per-fold results, mean accuracy per model, fold plan).
    """
    hyper = hyper or Hyper(seed=seed)
    articles = select_articles(corpus, grouping, min_comments=min_comments)
    X_all, y_all = build_dataset(corpus, grouping, articles)
    pos = {aid: i for i, aid in enumerate(articles)}
    plan = make_folds(articles, seed)

    per_fold = []
    for fi, fold in enumerate(plan.folds):
        splits = {}
        for part in ("train", "validation", "test"):
            idx = [pos[a] for a in fold[part]]
            splits[part] = (X_all[idx], y_all[idx])
        models = {
            "mlp": train_mlp(splits["train"], splits["validation"], hyper),
            "logistic": train_logistic(splits["train"], hyper),
            "knn": train_knn(splits["train"], hyper.k_neighbors),
            "majority": majority_baseline(splits["train"]),
        }
        per_fold.append(
            {"fold": fi, **{name: evaluate(m, splits["test"]) for name, m in models.items()}}
        )
    means = {
        name: float(np.mean([f[name]["accuracy"] for f in per_fold]))
        for name in ("mlp", "logistic", "knn", "majority")
    }
    return per_fold, means, plan


def save_model(model: TrainedModel, path):
    """Versioned binary container (npz) with an embedded format tag."""
    payload = {"format": np.array(FORMAT_TAG), "kind": np.array(model.kind)}
    for key, val in model.parameters.items():
        payload[f"param_{key}"] = np.asarray(val)
    if model.normalization is not None:
        payload["norm_mean"] = model.normalization.mean
        payload["norm_std"] = model.normalization.std
    np.savez(path, **payload)


def load_model(path) -> TrainedModel:
    data = np.load(path, allow_pickle=False)
    if str(data["format"]) != FORMAT_TAG:
        raise EchoscopeError(f"unrecognized model container format {data['format']!r}")
    kind = str(data["kind"])
    params = {}
    for key in data.files:
        if key.startswith("param_"):
            val = data[key]
            params[key[len("param_") :]] = val if val.ndim else val.item()
    norm = None
    if "norm_mean" in data.files:
        norm = Normalizer()
        norm.mean = data["norm_mean"]
        norm.std = data["norm_std"]
    return TrainedModel(kind=kind, parameters=params, normalization=norm)
