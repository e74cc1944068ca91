"""Prediction ensembles over original functions and their mutated variants.

Three strategy families are implemented on top of a prediction set grouped
by parent function, model, and transform:

* majority voting over binary labels, with a fixed tie rule (0 or 1);
* probability averaging, labeling 1 only on a mean strictly above 0.5;
* weighted combination: per-model original-prediction terms plus one term
  per operator, where an operator's term is the plain sum of its variants'
  encoded predictions (signed labels in {-1,+1}, or probabilities centered
  by -0.5). The combined score is thresholded at zero.

Weights are fitted by a seeded multi-restart coordinate search whose restart
set includes, for every model, the one-hot vector selecting that model
alone, so fitted validation accuracy can never fall below the best single
model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

ORIG = "orig"

TIES0 = "ties0"
TIES1 = "ties1"

LABELS = "labels"
PROBABILITY = "probability"

SCOPE_DATA = "data"
SCOPE_MODEL = "model"
SCOPE_DATA_AND_MODEL = "data+model"

STRATEGY_MAJORITY_TIES0 = "majority-ties0"
STRATEGY_MAJORITY_TIES1 = "majority-ties1"
STRATEGY_AVERAGE = "average"
STRATEGY_WEIGHTED_LABELS = "weighted-labels"
STRATEGY_WEIGHTED_PROBABILITY = "weighted-probability"

STRATEGIES = (
    STRATEGY_MAJORITY_TIES0,
    STRATEGY_MAJORITY_TIES1,
    STRATEGY_AVERAGE,
    STRATEGY_WEIGHTED_LABELS,
    STRATEGY_WEIGHTED_PROBABILITY,
)


class EmptyInput(ValueError):
    """An aggregator got an empty collection."""


class OutOfRange(ValueError):
    """A probability left [0, 1] or a label left {0, 1}."""


class DimensionMismatch(ValueError):
    """Weight vector shape does not match models + operators."""


class NoValidationData(ValueError):
    """Weight fitting got an empty or truthless validation set."""


class MissingPredictions(ValueError):
    """Parents lack the original prediction required by the scope."""

    def __init__(self, parents: list, message: str):
        super().__init__(f"{message}: {parents}")
        self.parents = parents


# ---------------------------------------------------------------------------
# Core data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    parent_idx: int
    variant_id: str
    transform_id: str  # "orig" or an operator id
    model_id: str
    label: int
    p1: float

    def __post_init__(self):
        if self.label not in (0, 1):
            raise OutOfRange(f"label {self.label} not in {{0,1}}")
        if not (0.0 <= self.p1 <= 1.0):
            raise OutOfRange(f"p1 {self.p1} outside [0,1]")

    @classmethod
    def from_json(cls, obj: dict) -> "Prediction":
        return cls(
            parent_idx=int(obj["parent_idx"]),
            variant_id=str(obj["variant_id"]),
            transform_id=str(obj["transform_id"]),
            model_id=str(obj["model_id"]),
            label=int(obj["label"]),
            p1=float(obj["p1"]),
        )

    def to_json(self) -> dict:
        return {
            "parent_idx": self.parent_idx,
            "variant_id": self.variant_id,
            "transform_id": self.transform_id,
            "model_id": self.model_id,
            "label": self.label,
            "p1": self.p1,
        }


class PredictionSet:
    """Predictions grouped by parent, then (model, transform)."""

    def __init__(self, predictions: list[Prediction] | None = None):
        self.by_parent: dict[int, dict[tuple[str, str], list[Prediction]]] = {}
        self.model_ids: list[str] = []
        self.transform_ids: list[str] = []
        for p in predictions or []:
            self.add(p)

    def add(self, p: Prediction) -> None:
        groups = self.by_parent.setdefault(p.parent_idx, {})
        key = (p.model_id, p.transform_id)
        bucket = groups.setdefault(key, [])
        if p.transform_id == ORIG and bucket:
            raise ValueError(
                f"duplicate orig prediction for parent {p.parent_idx}, model {p.model_id}"
            )
        bucket.append(p)
        if p.model_id not in self.model_ids:
            self.model_ids.append(p.model_id)
        if p.transform_id != ORIG and p.transform_id not in self.transform_ids:
            self.transform_ids.append(p.transform_id)

    @classmethod
    def from_rows(cls, rows: list[dict]) -> "PredictionSet":
        return cls([Prediction.from_json(r) for r in rows])

    def parents(self) -> list[int]:
        return sorted(self.by_parent)

    def orig(self, parent: int, model_id: str) -> Prediction | None:
        bucket = self.by_parent.get(parent, {}).get((model_id, ORIG))
        return bucket[0] if bucket else None

    def variants(self, parent: int, model_id: str, transform_id: str | None = None) -> list[Prediction]:
        groups = self.by_parent.get(parent, {})
        out = []
        for (mid, tid), bucket in sorted(groups.items()):
            if mid != model_id or tid == ORIG:
                continue
            if transform_id is not None and tid != transform_id:
                continue
            out.extend(bucket)
        return out


# ---------------------------------------------------------------------------
# Aggregation primitives
# ---------------------------------------------------------------------------


def majority_vote(labels: list[int], tie_rule: str = TIES0) -> int:
    """Strict-majority label; an exact tie falls to the tie rule's label."""
    if not labels:
        raise EmptyInput("majority_vote of an empty collection")
    if tie_rule not in (TIES0, TIES1):
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    ones = 0
    for label in labels:
        if label not in (0, 1):
            raise OutOfRange(f"label {label} not in {{0,1}}")
        ones += label
    zeros = len(labels) - ones
    if ones > zeros:
        return 1
    if zeros > ones:
        return 0
    return 0 if tie_rule == TIES0 else 1


def average_probability(probs: list[float]) -> tuple[int, float]:
    """(label, mean p1): label is 1 only when the mean is strictly above the
    0.5 decision boundary; exactly 0.5 counts as 0."""
    if not probs:
        raise EmptyInput("average_probability of an empty collection")
    for p in probs:
        if not (0.0 <= p <= 1.0):
            raise OutOfRange(f"p1 {p} outside [0,1]")
    mean = sum(probs) / len(probs)
    return (1 if mean > 0.5 else 0), mean


def signed_label(label: int) -> int:
    """0 -> -1, 1 -> +1."""
    if label == 0:
        return -1
    if label == 1:
        return 1
    raise OutOfRange(f"label {label} not in {{0,1}}")


def centered_probability(p1: float) -> float:
    """p1 - 0.5, mapping [0,1] onto [-0.5, 0.5]."""
    if not (0.0 <= p1 <= 1.0):
        raise OutOfRange(f"p1 {p1} outside [0,1]")
    return p1 - 0.5


def transform_score(values: list[float]) -> float:
    """Plain sum of one operator's encoded predictions; an inapplicable
    operator contributes an empty group, i.e. zero."""
    return float(sum(values))


def encode(p: Prediction, encoding: str) -> float:
    if encoding == LABELS:
        return float(signed_label(p.label))
    if encoding == PROBABILITY:
        return centered_probability(p.p1)
    raise ValueError(f"unknown encoding {encoding!r}")


# ---------------------------------------------------------------------------
# Weighted combination
# ---------------------------------------------------------------------------


@dataclass
class EnsembleWeights:
    """One weight per model followed by one per operator, stored
    structurally so serialization order is unambiguous."""

    model_ids: list[str]
    transform_ids: list[str]
    values: list[float]

    def __post_init__(self):
        expected = len(self.model_ids) + len(self.transform_ids)
        if len(self.values) != expected:
            raise DimensionMismatch(
                f"{len(self.values)} weights for {len(self.model_ids)} models + "
                f"{len(self.transform_ids)} operators"
            )
        for v in self.values:
            if not np.isfinite(v):
                raise ValueError(f"non-finite weight {v}")

    @property
    def model_weights(self) -> dict[str, float]:
        return dict(zip(self.model_ids, self.values))

    @property
    def transform_weights(self) -> dict[str, float]:
        return dict(zip(self.transform_ids, self.values[len(self.model_ids):]))

    def to_json(self) -> dict:
        return {
            "model_ids": self.model_ids,
            "transform_ids": self.transform_ids,
            "weights": self.values,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EnsembleWeights":
        return cls(
            model_ids=list(obj["model_ids"]),
            transform_ids=list(obj["transform_ids"]),
            values=[float(v) for v in obj["weights"]],
        )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "EnsembleWeights":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def weighted_predict(
    weights: EnsembleWeights,
    orig_scores: dict[str, float],
    op_scores: dict[str, float],
) -> int:
    """Label from the weighted sum of per-model original terms and
    per-operator summed terms; positive score means label 1."""
    if set(orig_scores) != set(weights.model_ids):
        raise DimensionMismatch(
            f"orig scores for {sorted(orig_scores)} but weights over {weights.model_ids}"
        )
    unknown_ops = set(op_scores) - set(weights.transform_ids)
    if unknown_ops:
        raise DimensionMismatch(f"op scores for unknown operators {sorted(unknown_ops)}")
    score = 0.0
    for mid, w in weights.model_weights.items():
        score += w * orig_scores[mid]
    for tid, w in weights.transform_weights.items():
        score += w * op_scores.get(tid, 0.0)
    return 1 if score > 0 else 0


# ---------------------------------------------------------------------------
# Feature extraction shared by fitting and evaluation
# ---------------------------------------------------------------------------


def _scope_models(pset: PredictionSet, scope: str, model_id: str | None) -> list[str]:
    if scope == SCOPE_DATA:
        if model_id is None:
            raise ValueError("data scope requires a model_id")
        return [model_id]
    return sorted(pset.model_ids)


def _require_origs(pset: PredictionSet, models: list[str]) -> None:
    missing = [
        (parent, mid)
        for parent in pset.parents()
        for mid in models
        if pset.orig(parent, mid) is None
    ]
    if missing:
        raise MissingPredictions(missing, "parents lacking an orig prediction")


def parent_features(
    pset: PredictionSet,
    parent: int,
    models: list[str],
    transform_ids: list[str],
    encoding: str,
    use_variants: bool,
) -> tuple[dict[str, float], dict[str, float]]:
    """(orig_scores, op_scores) for one parent under a scope's model list."""
    orig_scores = {}
    for mid in models:
        orig = pset.orig(parent, mid)
        if orig is None:
            raise MissingPredictions([(parent, mid)], "parent lacking an orig prediction")
        orig_scores[mid] = encode(orig, encoding)
    op_scores: dict[str, float] = {}
    if use_variants:
        for tid in transform_ids:
            values = []
            for mid in models:
                values.extend(encode(p, encoding) for p in pset.variants(parent, mid, tid))
            op_scores[tid] = transform_score(values)
    return orig_scores, op_scores


def feature_matrix(
    pset: PredictionSet,
    truth: dict[int, int],
    scope: str,
    encoding: str,
    model_id: str | None = None,
    transform_ids: list[str] | None = None,
) -> tuple[list[int], list[str], list[str], np.ndarray, np.ndarray]:
    """Rows per parent: [orig terms per model..., op terms per operator...].

    In model scope the operator columns are structurally present but zero,
    matching the fixed models+operators weight dimension.
    """
    models = _scope_models(pset, scope, model_id)
    _require_origs(pset, models)
    tids = transform_ids if transform_ids is not None else sorted(pset.transform_ids)
    use_variants = scope != SCOPE_MODEL
    parents = [p for p in pset.parents() if p in truth]
    X = np.zeros((len(parents), len(models) + len(tids)))
    y = np.zeros(len(parents), dtype=int)
    for i, parent in enumerate(parents):
        orig_scores, op_scores = parent_features(
            pset, parent, models, tids, encoding, use_variants
        )
        X[i, : len(models)] = [orig_scores[m] for m in models]
        X[i, len(models):] = [op_scores.get(t, 0.0) for t in tids]
        y[i] = truth[parent]
    return parents, models, tids, X, y


# ---------------------------------------------------------------------------
# Weight fitting
# ---------------------------------------------------------------------------


@dataclass
class FitConfig:
    seed: int = 42
    restarts: int = 10
    budget: int = 2000  # objective evaluations per restart
    steps: tuple[float, ...] = (1.0, 0.5, 0.25, 0.125, 0.0625)


@dataclass
class FitResult:
    weights: EnsembleWeights
    accuracy: float
    restart: int
    evaluations: int


def _accuracy(X: np.ndarray, y: np.ndarray, w: np.ndarray) -> float:
    pred = (X @ w > 0).astype(int)
    return float(np.mean(pred == y))


def _coordinate_search(
    X: np.ndarray, y: np.ndarray, start: np.ndarray, budget: int, steps: tuple[float, ...]
) -> tuple[np.ndarray, float, int]:
    w = start.astype(float).copy()
    best = _accuracy(X, y, w)
    evals = 1
    for step in steps:
        improved = True
        while improved and evals < budget:
            improved = False
            for j in range(len(w)):
                for delta in (step, -step):
                    if evals >= budget:
                        break
                    trial = w.copy()
                    trial[j] += delta
                    acc = _accuracy(X, y, trial)
                    evals += 1
                    if acc > best:
                        best, w = acc, trial
                        improved = True
    return w, best, evals


def fit_weights(
    val: PredictionSet,
    truth: dict[int, int],
    encoding: str,
    scope: str = SCOPE_DATA_AND_MODEL,
    model_id: str | None = None,
    config: FitConfig | None = None,
    transform_ids: list[str] | None = None,
) -> FitResult:
    """Maximize validation accuracy by derivative-free coordinate search from
    a fixed restart set (per-model one-hots, uniform, seeded randoms). Ties
    between restarts break toward the lowest restart index."""
    config = config or FitConfig()
    if not truth:
        raise NoValidationData("empty ground truth")
    parents, models, tids, X, y = feature_matrix(
        val, truth, scope, encoding, model_id, transform_ids
    )
    if not parents:
        raise NoValidationData("no validation parents with ground truth")
    d = len(models) + len(tids)
    starts: list[np.ndarray] = []
    for k in range(len(models)):
        one_hot = np.zeros(d)
        one_hot[k] = 1.0
        starts.append(one_hot)
    starts.append(np.ones(d))
    rng = np.random.default_rng(config.seed)
    while len(starts) < config.restarts:
        starts.append(rng.standard_normal(d))
    starts = starts[: max(config.restarts, len(models) + 1)]

    best: tuple[float, int, np.ndarray, int] | None = None
    for idx, start in enumerate(starts):
        w, acc, evals = _coordinate_search(X, y, start, config.budget, config.steps)
        if best is None or acc > best[0]:
            best = (acc, idx, w, evals)
    acc, idx, w, evals = best
    weights = EnsembleWeights(models, tids, [float(v) for v in w])
    return FitResult(weights=weights, accuracy=acc, restart=idx, evaluations=evals)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _pool(pset: PredictionSet, parent: int, scope: str, model_id: str | None) -> list[Prediction]:
    """Every prediction feeding majority/average for one parent: scope
    decides whether variants and/or extra models participate."""
    models = _scope_models(pset, scope, model_id)
    pool = []
    for mid in models:
        orig = pset.orig(parent, mid)
        if orig is None:
            raise MissingPredictions([(parent, mid)], "parent lacking an orig prediction")
        pool.append(orig)
        if scope != SCOPE_MODEL:
            pool.extend(pset.variants(parent, mid))
    return pool


def evaluate(
    test: PredictionSet,
    truth: dict[int, int],
    strategy: str,
    scope: str,
    model_id: str | None = None,
    weights: EnsembleWeights | None = None,
) -> float:
    """Accuracy of one strategy in one scope over all parents with ground
    truth. Weighted strategies require fitted weights."""
    models = _scope_models(test, scope, model_id)
    _require_origs(test, models)
    parents = [p for p in test.parents() if p in truth]
    if not parents:
        raise EmptyInput("no parents with ground truth")
    correct = 0
    if strategy in (STRATEGY_WEIGHTED_LABELS, STRATEGY_WEIGHTED_PROBABILITY):
        if weights is None:
            raise ValueError(f"strategy {strategy} requires weights")
        encoding = LABELS if strategy == STRATEGY_WEIGHTED_LABELS else PROBABILITY
        for parent in parents:
            orig_scores, op_scores = parent_features(
                test, parent, weights.model_ids, weights.transform_ids,
                encoding, scope != SCOPE_MODEL,
            )
            if weighted_predict(weights, orig_scores, op_scores) == truth[parent]:
                correct += 1
        return correct / len(parents)
    for parent in parents:
        pool = _pool(test, parent, scope, model_id)
        if strategy == STRATEGY_MAJORITY_TIES0:
            label = majority_vote([p.label for p in pool], TIES0)
        elif strategy == STRATEGY_MAJORITY_TIES1:
            label = majority_vote([p.label for p in pool], TIES1)
        elif strategy == STRATEGY_AVERAGE:
            label, _ = average_probability([p.p1 for p in pool])
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        if label == truth[parent]:
            correct += 1
    return correct / len(parents)


def original_accuracy(test: PredictionSet, truth: dict[int, int], model_id: str) -> float:
    """Baseline: the model's own labels on original functions."""
    _require_origs(test, [model_id])
    parents = [p for p in test.parents() if p in truth]
    if not parents:
        raise EmptyInput("no parents with ground truth")
    correct = sum(
        1 for p in parents if test.orig(p, model_id).label == truth[p]
    )
    return correct / len(parents)


# ---------------------------------------------------------------------------
# Transition analysis
# ---------------------------------------------------------------------------


@dataclass
class TransitionMatrix:
    """Counts of original-label -> variant-label pairs for one model."""

    c00: int = 0
    c01: int = 0
    c10: int = 0
    c11: int = 0

    @property
    def total(self) -> int:
        return self.c00 + self.c01 + self.c10 + self.c11

    @property
    def unchanged_fraction(self) -> float:
        return (self.c00 + self.c11) / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "0->0": self.c00,
            "0->1": self.c01,
            "1->0": self.c10,
            "1->1": self.c11,
            "total": self.total,
            "unchanged_fraction": self.unchanged_fraction,
        }


def transitions(orig: list[Prediction], variants: list[Prediction]) -> TransitionMatrix:
    """Pair each variant prediction with its parent's original label and
    count the four label-transition cells."""
    model_ids = {p.model_id for p in orig} | {p.model_id for p in variants}
    if len(model_ids) > 1:
        raise ValueError(f"transitions mixes models: {sorted(model_ids)}")
    orig_label: dict[int, int] = {}
    for p in orig:
        if p.transform_id != ORIG:
            raise ValueError(f"{p.variant_id} is not an orig prediction")
        orig_label[p.parent_idx] = p.label
    missing = sorted({v.parent_idx for v in variants} - set(orig_label))
    if missing:
        raise MissingPredictions(missing, "variants without an orig prediction")
    tm = TransitionMatrix()
    for v in variants:
        o = orig_label[v.parent_idx]
        if o == 0 and v.label == 0:
            tm.c00 += 1
        elif o == 0 and v.label == 1:
            tm.c01 += 1
        elif o == 1 and v.label == 0:
            tm.c10 += 1
        else:
            tm.c11 += 1
    return tm


def transitions_by_operator(
    orig: list[Prediction], variants: list[Prediction]
) -> dict[str, TransitionMatrix]:
    by_op: dict[str, list[Prediction]] = {}
    for v in variants:
        by_op.setdefault(v.transform_id, []).append(v)
    return {tid: transitions(orig, vs) for tid, vs in sorted(by_op.items())}
