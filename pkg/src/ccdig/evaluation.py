"""AUC, a k-NN baseline, overlap/imbalance metrics, and the Monte Carlo
simulation harness over the four uniform-box settings.

A replication samples fresh training and test data, fits every requested
classifier, and records its AUC (and prototype count where applicable).
Replications accumulate until the standard error of every classifier's
mean AUC drops to the target or the replication cap is reached.

The harness supports two ROC score protocols. The default, "label",
ranks test points by the classifier's predicted label, which puts every
classifier on the same footing and is the protocol under which the
reference class-imbalance gaps appear. "continuous" instead ranks by
each classifier's graded score (the cover discriminant, or the
positive-neighbor fraction), which measures ranking quality rather than
decision quality; fine-grained scores close most of the gaps.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .classifier import (
    VARIANT_PURE,
    VARIANT_RW,
    CccdModel,
    discriminant_batch,
    predict_batch,
    train,
    with_hyper,
)
from .core import LabeledDataset, as_point, as_points, cross_distance_matrix, sample_uniform_box

SETTINGS = ("embedded", "shifted", "disjoint", "balanced_overlap")
CLASSIFIER_KINDS = ("pcccd", "rwcccd", "knn")
SCORE_MODES = ("label", "continuous")


def auc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney statistic with ties.

    Equals (#{positive-negative pairs ranked correctly} + half the tied
    pairs) / (n1 * n0).
    """
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.ndim != 1 or y.shape != s.shape:
        raise ValueError("scores and labels must be matching 1-D sequences")
    if np.any(np.isnan(s)):
        raise ValueError("scores must not contain NaN")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be binary 0/1")
    n1 = int((y == 1).sum())
    n0 = len(y) - n1
    if n1 == 0 or n0 == 0:
        raise ValueError("both label values must be present")
    order = np.argsort(s, kind="stable")
    ss = s[order]
    starts = np.concatenate([[0], np.flatnonzero(ss[1:] != ss[:-1]) + 1])
    ends = np.concatenate([starts[1:], [len(ss)]])
    mean_ranks = (starts + ends + 1) / 2.0  # 1-based average rank per tie run
    ranks = np.empty(len(ss), dtype=np.float64)
    ranks[order] = np.repeat(mean_ranks, ends - starts)
    rank_sum = ranks[y == 1].sum()
    return float((rank_sum - n1 * (n1 + 1) / 2.0) / (n1 * n0))


def _majority_label(neighbor_labels: np.ndarray, counts, n_classes: int) -> int:
    votes = np.bincount(neighbor_labels, minlength=n_classes)
    return int(min(range(n_classes), key=lambda c: (-votes[c], -counts[c], c)))


def _knn_neighbor_labels(train_data: LabeledDataset, points, k: int) -> np.ndarray:
    if not 1 <= k <= train_data.n:
        raise ValueError(f"k must be in [1, {train_data.n}]")
    pts = as_points(points)
    if pts.shape[1] != train_data.dim:
        raise ValueError("dimension mismatch between query and training data")
    dist = cross_distance_matrix(pts, train_data.points)
    nearest = np.argsort(dist, axis=1, kind="stable")[:, :k]
    return train_data.labels[nearest]


def knn_predict(train_data: LabeledDataset, z, k: int, positive: int = 1) -> tuple[int, float]:
    """Majority label among the k nearest training points.

    Returns the label and the fraction of neighbors from the `positive`
    class. Distance ties go to the lower training index; vote ties to
    the larger training class, then the lower class id.
    """
    neighbors = _knn_neighbor_labels(train_data, as_point(z)[None, :], k)[0]
    label = _majority_label(neighbors, train_data.class_counts, train_data.n_classes)
    return label, float(np.mean(neighbors == positive))


def knn_predict_batch(train_data: LabeledDataset, points, k: int) -> np.ndarray:
    """Majority labels for many query points at once."""
    neighbors = _knn_neighbor_labels(train_data, points, k)
    counts = train_data.class_counts
    return np.array(
        [_majority_label(row, counts, train_data.n_classes) for row in neighbors],
        dtype=np.int64,
    )


def knn_scores(train_data: LabeledDataset, points, k: int, positive: int = 1) -> np.ndarray:
    """Positive-neighbor fractions for many query points at once."""
    neighbors = _knn_neighbor_labels(train_data, points, k)
    return (neighbors == positive).mean(axis=1)


def overlap_alpha(delta: float, d: int) -> float:
    """Support overlap ratio of two unit boxes shifted by delta per axis."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must be in [0,1]")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    a = (1.0 - delta) ** d
    return a / (2.0 - a)


def overlap_delta(alpha: float, d: int) -> float:
    """Per-axis shift yielding a given overlap ratio; inverse of overlap_alpha."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0,1]")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    return 1.0 - (2.0 * alpha / (1.0 + alpha)) ** (1.0 / d)


def local_imbalance(X, Y, region) -> float | None:
    """Class-size ratio |Y in E| / |X in E| over an axis-aligned box E.

    Returns None when no X point falls in the region.
    """
    low, high = region
    xs = as_points(X)
    ys = as_points(Y)
    lo = np.broadcast_to(np.asarray(low, dtype=np.float64), (xs.shape[1],))
    hi = np.broadcast_to(np.asarray(high, dtype=np.float64), (xs.shape[1],))
    if np.any(lo > hi):
        raise ValueError("region must satisfy low <= high componentwise")
    in_x = int(np.all((xs >= lo) & (xs <= hi), axis=1).sum())
    in_y = int(np.all((ys >= lo) & (ys <= hi), axis=1).sum())
    if in_x == 0:
        return None
    return in_y / in_x


@dataclass(frozen=True)
class SimulationConfig:
    """One cell of the simulation grid.

    The first class (label 0, size n) is uniform on the unit box; the
    second (label 1, size m) sits on a box determined by the setting:
    embedded in the middle, shifted by delta per axis, disjoint along
    the first axis, or shifted to hit a target overlap ratio alpha.
    Exactly one of m and q (= m/n) must be given.
    """

    setting: str
    d: int
    n: int
    m: int | None = None
    q: float | None = None
    delta: float | None = None
    alpha: float | None = None
    test_per_class: int = 100
    max_test_reps: int = 200
    se_target: float = 0.0005
    base_seed: int = 0

    def __post_init__(self):
        if self.setting not in SETTINGS:
            raise ValueError(f"unknown setting {self.setting!r}")
        if self.d < 1 or self.n < 1:
            raise ValueError("d and n must be at least 1")
        if (self.m is None) == (self.q is None):
            raise ValueError("give exactly one of m and q")
        if self.q is not None and self.q <= 0:
            raise ValueError("q must be positive")
        if self.resolved_m < 1:
            raise ValueError("the second class must have at least one point")
        needs_delta = self.setting in ("shifted", "disjoint")
        if needs_delta and self.delta is None:
            raise ValueError(f"setting {self.setting!r} requires delta")
        if not needs_delta and self.delta is not None:
            raise ValueError(f"setting {self.setting!r} does not take delta")
        if self.setting == "balanced_overlap":
            if self.alpha is None:
                raise ValueError("setting 'balanced_overlap' requires alpha")
            if not 0.0 <= self.alpha <= 1.0:
                raise ValueError("alpha must be in [0,1]")
        elif self.alpha is not None:
            raise ValueError(f"setting {self.setting!r} does not take alpha")
        if self.delta is not None:
            if self.setting == "shifted" and not 0.0 <= self.delta <= 1.0:
                raise ValueError("delta must be in [0,1] for the shifted setting")
            if self.setting == "disjoint" and self.delta < 0.0:
                raise ValueError("delta must be non-negative for the disjoint setting")
        if self.test_per_class < 1:
            raise ValueError("test_per_class must be at least 1")
        if self.max_test_reps < 2:
            raise ValueError("max_test_reps must be at least 2")
        if self.se_target < 0:
            raise ValueError("se_target must be non-negative")
        if self.base_seed < 0:
            raise ValueError("base_seed must be non-negative")

    @property
    def resolved_m(self) -> int:
        if self.m is not None:
            return int(self.m)
        return int(round(self.q * self.n))

    @property
    def delta_or_alpha(self) -> float | None:
        return self.alpha if self.setting == "balanced_overlap" else self.delta

    def supports(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(x_low, x_high, y_low, y_high) bounds for the two class boxes."""
        d = self.d
        x_low = np.zeros(d)
        x_high = np.ones(d)
        if self.setting == "embedded":
            y_low = np.full(d, 0.3)
            y_high = np.full(d, 0.7)
        elif self.setting in ("shifted", "balanced_overlap"):
            delta = self.delta if self.setting == "shifted" else overlap_delta(self.alpha, d)
            y_low = np.full(d, delta)
            y_high = np.full(d, 1.0 + delta)
        else:  # disjoint: separated along the first axis only
            y_low = np.zeros(d)
            y_high = np.ones(d)
            y_low[0] = 1.0 + self.delta
            y_high[0] = 2.0 + self.delta
        return x_low, x_high, y_low, y_high


@dataclass(frozen=True)
class ClassifierSpec:
    """A classifier entry for the harness: kind plus its one hyperparameter
    (tau for pcccd, e for rwcccd, k for knn)."""

    kind: str
    param: float
    label: str = ""

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        if self.kind == "pcccd" and not 0.0 < self.param <= 1.0:
            raise ValueError("tau must be in (0,1]")
        if self.kind == "rwcccd" and not 0.0 <= self.param <= 1.0:
            raise ValueError("e must be in [0,1]")
        if self.kind == "knn" and (self.param < 1 or self.param != int(self.param)):
            raise ValueError("k must be a positive integer")

    @property
    def name(self) -> str:
        return self.label or self.kind


@dataclass(frozen=True)
class ClassifierResult:
    name: str
    aucs: tuple[float, ...]
    prototype_counts: tuple[int, ...] | None

    @property
    def reps(self) -> int:
        return len(self.aucs)

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.aucs))

    @property
    def se_auc(self) -> float:
        return float(np.std(self.aucs, ddof=1) / math.sqrt(self.reps))

    @property
    def mean_prototypes(self) -> float | None:
        if self.prototype_counts is None:
            return None
        return float(np.mean(self.prototype_counts))


@dataclass(frozen=True)
class EvalReport:
    config: SimulationConfig
    results: tuple[ClassifierResult, ...]

    @property
    def reps(self) -> int:
        return self.results[0].reps if self.results else 0


def _sample_replication(config: SimulationConfig, rng: np.random.Generator):
    x_low, x_high, y_low, y_high = config.supports()
    d, n, m, t = config.d, config.n, config.resolved_m, config.test_per_class
    train_x = sample_uniform_box(d, x_low, x_high, n, rng)
    train_y = sample_uniform_box(d, y_low, y_high, m, rng)
    test_x = sample_uniform_box(d, x_low, x_high, t, rng)
    test_y = sample_uniform_box(d, y_low, y_high, t, rng)
    train_data = LabeledDataset(
        points=np.vstack([train_x, train_y]),
        labels=np.concatenate([np.zeros(n, dtype=np.int64), np.ones(m, dtype=np.int64)]),
    )
    test_points = np.vstack([test_x, test_y])
    test_labels = np.concatenate([np.zeros(t, dtype=np.int64), np.ones(t, dtype=np.int64)])
    return train_data, test_points, test_labels


def _fit_model(spec: ClassifierSpec, train_data: LabeledDataset) -> CccdModel | None:
    if spec.kind == "pcccd":
        return train(train_data, VARIANT_PURE, tau=spec.param)
    if spec.kind == "rwcccd":
        return train(train_data, VARIANT_RW, e=spec.param)
    return None


def _prototype_count(model: CccdModel) -> int:
    return sum(cover.n_balls for cover in model.covers)


def _model_scores(model: CccdModel, test_points, score_mode: str) -> np.ndarray:
    if score_mode == "label":
        return predict_batch(model, test_points)[0].astype(np.float64)
    return discriminant_batch(model, test_points, positive_class=1)


def _score_spec(
    spec: ClassifierSpec, train_data: LabeledDataset, test_points, score_mode: str
) -> tuple[np.ndarray, int | None]:
    model = _fit_model(spec, train_data)
    if model is None:
        k = int(spec.param)
        if score_mode == "label":
            return knn_predict_batch(train_data, test_points, k).astype(np.float64), None
        return knn_scores(train_data, test_points, k), None
    return _model_scores(model, test_points, score_mode), _prototype_count(model)


def _check_score_mode(score_mode: str) -> str:
    if score_mode not in SCORE_MODES:
        raise ValueError(f"score_mode must be one of {SCORE_MODES}")
    return score_mode


def _run_replication(config: SimulationConfig, classifiers, rep: int, score_mode: str):
    rng = np.random.default_rng(config.base_seed + rep)
    train_data, test_points, test_labels = _sample_replication(config, rng)
    aucs = []
    protos = []
    for spec in classifiers:
        scores, count = _score_spec(spec, train_data, test_points, score_mode)
        aucs.append(auc(scores, test_labels))
        protos.append(count)
    return aucs, protos


def _se(values: list[float]) -> float:
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def run_simulation(
    config: SimulationConfig, classifiers, threads: int = 1, score_mode: str = "label"
) -> EvalReport:
    """Replicate train/test sampling until every classifier's mean-AUC
    standard error reaches the target or the replication cap.

    Deterministic for a given base seed; replication r always uses seed
    base_seed + r, so the report does not depend on the thread count.
    """
    classifiers = tuple(classifiers)
    if not classifiers:
        raise ValueError("need at least one classifier")
    score_mode = _check_score_mode(score_mode)
    per_clf_aucs: list[list[float]] = [[] for _ in classifiers]
    per_clf_protos: list[list[int]] = [[] for _ in classifiers]

    def consume(result) -> bool:
        aucs, protos = result
        for j in range(len(classifiers)):
            per_clf_aucs[j].append(aucs[j])
            per_clf_protos[j].append(protos[j])
        reps = len(per_clf_aucs[0])
        if reps >= 2 and all(_se(a) <= config.se_target for a in per_clf_aucs):
            return True
        return reps >= config.max_test_reps

    if threads <= 1:
        for rep in range(config.max_test_reps):
            if consume(_run_replication(config, classifiers, rep, score_mode)):
                break
    else:
        # speculative prefetch: replications are consumed strictly in order,
        # so results match the sequential run with any thread count
        with ThreadPoolExecutor(max_workers=threads) as pool:
            window = threads * 2
            futures = {
                rep: pool.submit(_run_replication, config, classifiers, rep, score_mode)
                for rep in range(min(window, config.max_test_reps))
            }
            next_rep = len(futures)
            for rep in range(config.max_test_reps):
                done = consume(futures.pop(rep).result())
                if done:
                    for f in futures.values():
                        f.cancel()
                    break
                if next_rep < config.max_test_reps:
                    futures[next_rep] = pool.submit(
                        _run_replication, config, classifiers, next_rep, score_mode
                    )
                    next_rep += 1
    results = tuple(
        ClassifierResult(
            name=spec.name,
            aucs=tuple(per_clf_aucs[j]),
            prototype_counts=None if per_clf_protos[j][0] is None else tuple(per_clf_protos[j]),
        )
        for j, spec in enumerate(classifiers)
    )
    return EvalReport(config=config, results=results)


@dataclass(frozen=True)
class PilotResult:
    """Histogram of how often each grid value achieved the top AUC."""

    family: str
    grid: tuple[float, ...]
    counts: tuple[int, ...]
    reps: int

    @property
    def selected(self) -> float:
        best = max(self.counts)
        return min(v for v, c in zip(self.grid, self.counts) if c == best)


def pilot_study(
    config: SimulationConfig, family: str, grid, reps: int = 200, score_mode: str = "label"
) -> PilotResult:
    """Per replication, score every grid value on the same train/test pair
    and count which values reach the maximum AUC; the winner is the mode
    (the smallest value on mode ties).
    """
    if family not in CLASSIFIER_KINDS:
        raise ValueError(f"unknown classifier family {family!r}")
    score_mode = _check_score_mode(score_mode)
    grid = tuple(float(v) for v in grid)
    if not grid:
        raise ValueError("the parameter grid must be non-empty")
    if len(set(grid)) != len(grid):
        raise ValueError("grid values must be distinct")
    if reps < 1:
        raise ValueError("reps must be at least 1")
    counts = np.zeros(len(grid), dtype=np.int64)
    for rep in range(reps):
        rng = np.random.default_rng(np.random.SeedSequence((config.base_seed, rep)))
        train_data, test_points, test_labels = _sample_replication(config, rng)
        if family == "rwcccd":
            # covers do not depend on e, so fit once and swap the exponent
            base = train(train_data, VARIANT_RW, e=grid[0])
            aucs = [
                auc(_model_scores(with_hyper(base, e=v), test_points, score_mode), test_labels)
                for v in grid
            ]
        else:
            aucs = [
                auc(
                    _score_spec(ClassifierSpec(family, v), train_data, test_points, score_mode)[0],
                    test_labels,
                )
                for v in grid
            ]
        top = max(aucs)
        counts[[i for i, a in enumerate(aucs) if a == top]] += 1
    return PilotResult(family=family, grid=grid, counts=tuple(int(c) for c in counts), reps=reps)


def pilot_select(
    config: SimulationConfig, family: str, grid, reps: int = 200, score_mode: str = "label"
) -> float:
    """The pilot winner only; see pilot_study for the protocol."""
    return pilot_study(config, family, grid, reps, score_mode).selected


@dataclass(frozen=True)
class PrototypeStat:
    class_id: int
    n_prototypes: int
    n_train: int

    @property
    def ratio(self) -> float:
        return self.n_prototypes / self.n_train


def reduction_stats(model: CccdModel, train_sizes=None) -> list[PrototypeStat]:
    """Per-class prototype (covering-ball) counts and reduction ratios."""
    sizes = tuple(train_sizes) if train_sizes is not None else model.class_counts
    if len(sizes) != model.n_classes:
        raise ValueError("need one training size per class")
    return [
        PrototypeStat(class_id=cover.class_id, n_prototypes=cover.n_balls, n_train=int(sizes[i]))
        for i, cover in enumerate(model.covers)
    ]


REPORT_FIELDS = (
    "classifier",
    "setting",
    "d",
    "n",
    "m",
    "delta_or_alpha",
    "mean_auc",
    "se",
    "reps",
    "prototypes",
)


def _fmt6(x) -> str:
    return "" if x is None else f"{x:.6g}"


def report_rows(report: EvalReport) -> list[dict]:
    """Flatten a report into CSV-ready row dicts, one per classifier."""
    cfg = report.config
    rows = []
    for res in report.results:
        rows.append(
            {
                "classifier": res.name,
                "setting": cfg.setting,
                "d": cfg.d,
                "n": cfg.n,
                "m": cfg.resolved_m,
                "delta_or_alpha": _fmt6(cfg.delta_or_alpha),
                "mean_auc": _fmt6(res.mean_auc),
                "se": _fmt6(res.se_auc),
                "reps": res.reps,
                "prototypes": _fmt6(res.mean_prototypes),
            }
        )
    return rows


def format_report_table(rows: list[dict]) -> str:
    """Fixed-width text table over report_rows output."""
    widths = {f: len(f) for f in REPORT_FIELDS}
    for row in rows:
        for f in REPORT_FIELDS:
            widths[f] = max(widths[f], len(str(row[f])))
    lines = ["  ".join(f.ljust(widths[f]) for f in REPORT_FIELDS)]
    for row in rows:
        lines.append("  ".join(str(row[f]).ljust(widths[f]) for f in REPORT_FIELDS))
    return "\n".join(lines)
