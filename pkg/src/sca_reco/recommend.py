"""Training, serialization, and evaluation of the recommendation models.

A trained model bundles the estimator with the standardization fitted on its
own training rows and the ordered class list, so a saved model file is
self-contained.  Training reduces each project's optimal label set to its
primary label (first element in corpus analyzer order); evaluation scores
predictions against the full set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ScaId, format_beta
from .effectiveness import ProjectEvaluation, reevaluate
from .estimators import (
    DecisionTreeClassifier,
    KNeighborsClassifier,
    LogisticRegression,
    MLPClassifier,
    RandomForestClassifier,
    StandardScaler,
)
from .exceptions import (
    DegenerateDataset,
    FeatureMismatch,
    IoError,
    ParseError,
    SchemaError,
    TooFewSamples,
    UnsupportedModelKind,
)
from .features import FeatureVector, PreferenceDataset, build_dataset
from .metrics import MicroMetrics, mean_metrics, micro_metrics
from .rng import SplitMix64, derive_seed

MODEL_FILE_VERSION = 1


class ModelKind(Enum):
    DT = "dt"
    KNN = "knn"
    LR = "lr"
    MLP = "mlp"
    RF = "rf"


DEFAULT_HYPERPARAMS: dict[ModelKind, dict] = {
    ModelKind.DT: {"criterion": "gini", "max_depth": None, "min_samples_split": 2},
    ModelKind.KNN: {"n_neighbors": 5, "metric": "euclidean"},
    ModelKind.LR: {"l2": 1.0, "learning_rate": 0.1, "n_iter": 1000},
    ModelKind.MLP: {
        "hidden_units": 100,
        "learning_rate": 0.01,
        "momentum": 0.9,
        "epochs": 200,
    },
    ModelKind.RF: {
        "n_estimators": 100,
        "max_features": "sqrt",
        "bootstrap": True,
        "criterion": "gini",
        "max_depth": None,
        "min_samples_split": 2,
    },
}


def parse_model_kind(token: str) -> ModelKind:
    try:
        return ModelKind(token.strip().lower())
    except ValueError:
        raise UnsupportedModelKind(f"unknown model kind {token!r}")


def resolve_hyperparams(kind: ModelKind, overrides: dict | None = None) -> dict:
    params = dict(DEFAULT_HYPERPARAMS[kind])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise UnsupportedModelKind(f"{kind.value} has no hyperparameter {key!r}")
        params[key] = value
    return params


def build_estimator(kind: ModelKind, hyperparams: dict, seed: int):
    """Instantiate the estimator behind a model kind."""
    hp = resolve_hyperparams(kind, hyperparams)
    if kind is ModelKind.DT:
        if hp["criterion"] != "gini":
            raise UnsupportedModelKind("only the gini criterion is implemented")
        return DecisionTreeClassifier(
            max_depth=hp["max_depth"],
            min_samples_split=hp["min_samples_split"],
            random_state=seed,
        )
    if kind is ModelKind.KNN:
        if hp["metric"] != "euclidean":
            raise UnsupportedModelKind("only the euclidean metric is implemented")
        return KNeighborsClassifier(n_neighbors=hp["n_neighbors"])
    if kind is ModelKind.LR:
        return LogisticRegression(
            l2=hp["l2"], learning_rate=hp["learning_rate"], n_iter=hp["n_iter"]
        )
    if kind is ModelKind.MLP:
        return MLPClassifier(
            hidden_units=hp["hidden_units"],
            learning_rate=hp["learning_rate"],
            momentum=hp["momentum"],
            epochs=hp["epochs"],
            random_state=seed,
        )
    if kind is ModelKind.RF:
        if hp["criterion"] != "gini":
            raise UnsupportedModelKind("only the gini criterion is implemented")
        return RandomForestClassifier(
            n_estimators=hp["n_estimators"],
            max_features=hp["max_features"],
            bootstrap=hp["bootstrap"],
            max_depth=hp["max_depth"],
            min_samples_split=hp["min_samples_split"],
            random_state=seed,
        )
    raise UnsupportedModelKind(str(kind))


@dataclass
class RecommendationModel:
    """A fitted recommender plus everything needed to apply it elsewhere."""

    kind: ModelKind
    hyperparams: dict
    feature_names: tuple[str, ...]
    means: np.ndarray
    stds: np.ndarray
    classes: tuple[ScaId, ...]
    estimator: object
    seed: int
    version: int = MODEL_FILE_VERSION

    def _transform(self, matrix: np.ndarray) -> np.ndarray:
        scale = np.where(self.stds == 0.0, 1.0, self.stds)
        return (matrix - self.means) / scale

    def predict_matrix(self, matrix, feature_names: Sequence[str]) -> list[ScaId]:
        if tuple(feature_names) != self.feature_names:
            raise FeatureMismatch(
                f"model expects features {list(self.feature_names)}, "
                f"got {list(feature_names)}"
            )
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[1] != len(self.feature_names):
            raise FeatureMismatch("feature matrix width disagrees with the model")
        indices = self.estimator.predict(self._transform(matrix))
        return [self.classes[i] for i in indices]

    def predict(self, vector: FeatureVector) -> ScaId:
        return self.predict_matrix([vector.values], vector.names)[0]

    def save(self, path: str | Path) -> None:
        document = {
            "version": self.version,
            "kind": self.kind.value,
            "hyperparams": self.hyperparams,
            "feature_names": list(self.feature_names),
            "standardization": {
                "means": self.means.tolist(),
                "stds": self.stds.tolist(),
            },
            "params": {
                "classes": list(self.classes),
                "state": self.estimator.get_fitted_state(),
            },
            "seed": self.seed,
        }
        try:
            Path(path).write_text(
                json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n",
                encoding="utf-8",
            )
        except OSError as exc:
            raise IoError(str(exc)) from exc

    @classmethod
    def load(cls, path: str | Path) -> "RecommendationModel":
        path = Path(path)
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoError(str(exc)) from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        try:
            if document["version"] != MODEL_FILE_VERSION:
                raise SchemaError(f"{path}: unsupported model file version")
            kind = parse_model_kind(document["kind"])
            hyperparams = document["hyperparams"]
            seed = int(document["seed"])
            estimator = build_estimator(kind, hyperparams, seed)
            estimator.load_fitted_state(document["params"]["state"])
            return cls(
                kind=kind,
                hyperparams=hyperparams,
                feature_names=tuple(document["feature_names"]),
                means=np.asarray(document["standardization"]["means"], dtype=np.float64),
                stds=np.asarray(document["standardization"]["stds"], dtype=np.float64),
                classes=tuple(document["params"]["classes"]),
                estimator=estimator,
                seed=seed,
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"{path}: malformed model file: {exc}") from exc


def encode_labels(
    primary: Sequence[ScaId], sca_order: Sequence[ScaId]
) -> tuple[np.ndarray, tuple[ScaId, ...]]:
    """Map primary labels to dense class indices ordered by corpus order."""
    present = set(primary)
    classes = tuple(s for s in sca_order if s in present)
    index = {s: i for i, s in enumerate(classes)}
    return np.array([index[s] for s in primary], dtype=np.int64), classes


def train(
    dataset: PreferenceDataset,
    kind: ModelKind,
    seed: int = 0,
    hyperparams: dict | None = None,
) -> RecommendationModel:
    """Fit a recommender on the whole dataset (primary labels)."""
    if dataset.n_projects < 2:
        raise TooFewSamples("training needs at least 2 projects")
    y, classes = encode_labels(dataset.primary_labels(), dataset.sca_order)
    if len(classes) < 2:
        raise DegenerateDataset("training labels collapse to a single analyzer")
    scaler = StandardScaler().fit(dataset.matrix)
    estimator = build_estimator(kind, hyperparams or {}, seed)
    estimator.fit(scaler.transform(dataset.matrix), y, n_classes=len(classes))
    return RecommendationModel(
        kind=kind,
        hyperparams=resolve_hyperparams(kind, hyperparams),
        feature_names=dataset.feature_names,
        means=scaler.mean_,
        stds=scaler.std_,
        classes=classes,
        estimator=estimator,
        seed=seed,
    )


def stratified_folds(
    labels: Sequence[ScaId], folds: int, seed: int = 0
) -> list[list[int]]:
    """Deterministic stratified fold assignment (test indices per fold).

    Rows of each class are shuffled with a seeded stream and dealt into
    contiguous chunks whose sizes differ by at most one.
    """
    if folds < 2:
        raise ValueError("folds must be at least 2")
    if folds > len(labels):
        raise TooFewSamples(f"cannot split {len(labels)} rows into {folds} folds")
    by_class: dict[ScaId, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    fold_indices: list[list[int]] = [[] for _ in range(folds)]
    for class_position, class_label in enumerate(sorted(by_class)):
        rows = by_class[class_label]
        SplitMix64(derive_seed(seed, class_position)).shuffle(rows)
        base, extra = divmod(len(rows), folds)
        cursor = 0
        for f in range(folds):
            size = base + (1 if f < extra else 0)
            fold_indices[f].extend(rows[cursor : cursor + size])
            cursor += size
    return [sorted(fold) for fold in fold_indices]


@dataclass(frozen=True)
class CvResult:
    mean: MicroMetrics
    per_fold: tuple[MicroMetrics, ...]


def cross_validate(
    dataset: PreferenceDataset,
    kind: ModelKind,
    folds: int = 10,
    seed: int = 0,
    hyperparams: dict | None = None,
) -> CvResult:
    """Stratified k-fold cross-validation; the summary is the fold mean."""
    assignment = stratified_folds(dataset.primary_labels(), folds, seed)
    all_rows = set(range(dataset.n_projects))
    per_fold = []
    for fold_number, test_rows in enumerate(assignment):
        train_rows = sorted(all_rows - set(test_rows))
        model = train(
            dataset.subset_rows(train_rows), kind, derive_seed(seed, fold_number), hyperparams
        )
        if test_rows:
            predictions = model.predict_matrix(
                dataset.matrix[test_rows], dataset.feature_names
            )
            truth = [dataset.label_sets[i] for i in test_rows]
            per_fold.append(micro_metrics(truth, predictions))
        else:
            per_fold.append(MicroMetrics(0.0, 0.0, 0.0))
    return CvResult(mean=mean_metrics(per_fold), per_fold=tuple(per_fold))


def baseline_fixed(
    sca: ScaId, truth_sets: Sequence[Sequence[ScaId]]
) -> MicroMetrics:
    """Always recommend the same analyzer."""
    return micro_metrics(truth_sets, [sca] * len(truth_sets))


def baseline_random(
    truth_sets: Sequence[Sequence[ScaId]],
    sca_order: Sequence[ScaId],
    repeats: int = 100,
    seed: int = 0,
) -> MicroMetrics:
    """Uniform random recommendations, averaged over seeded repeats.

    Each repeat uses a child stream derived from (seed, repeat index), so
    results do not depend on evaluation order.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    if not sca_order:
        raise ValueError("the analyzer list is empty")
    runs = []
    for repeat in range(repeats):
        stream = SplitMix64(derive_seed(seed, repeat))
        predictions = [sca_order[stream.randrange(len(sca_order))] for _ in truth_sets]
        runs.append(micro_metrics(truth_sets, predictions))
    return mean_metrics(runs)


def dataset_from_evaluations(
    vectors: Sequence[FeatureVector],
    evaluations: Sequence[ProjectEvaluation],
) -> PreferenceDataset:
    """Join feature vectors with the optimal sets of stored evaluations."""
    if not evaluations:
        raise TooFewSamples("no evaluation records")
    sca_order = evaluations[0].sca_order()
    label_sets = {}
    for evaluation in evaluations:
        if evaluation.sca_order() != sca_order:
            raise SchemaError(
                f"evaluation for {evaluation.project_id!r} lists analyzers "
                "in a different order"
            )
        label_sets[evaluation.project_id] = evaluation.optimal.optimal
    return build_dataset(vectors, label_sets, sca_order)


def beta_sweep(
    evaluations: Sequence[ProjectEvaluation],
    vectors: Sequence[FeatureVector],
    kind: ModelKind,
    betas: Sequence[float],
    folds: int = 10,
    seed: int = 0,
) -> list[tuple[float, CvResult]]:
    """Re-derive labels from stored confusion counts at each beta and re-run
    the cross-validation.  No re-alignment happens; only the scores move."""
    if not betas:
        raise ValueError("betas must not be empty")
    rows = []
    for beta in betas:
        rescored = [reevaluate(evaluation, beta) for evaluation in evaluations]
        dataset = dataset_from_evaluations(vectors, rescored)
        rows.append((beta, cross_validate(dataset, kind, folds, seed)))
    return rows


def sweep_table(rows: list[tuple[float, CvResult]]) -> str:
    """Render sweep results as a TSV table."""
    lines = ["beta\tp_micro\tr_micro\tf1_micro"]
    for beta, result in rows:
        m = result.mean
        lines.append(
            f"{format_beta(beta)}\t{m.p_micro!r}\t{m.r_micro!r}\t{m.f1_micro!r}"
        )
    return "\n".join(lines) + "\n"
