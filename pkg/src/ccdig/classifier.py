"""Cover-based classification: scaled dissimilarity, training, prediction.

A trained model holds one ball cover per class. A query point's
dissimilarity to a class is the minimum over that class's balls of
d(z, center) / radius; the random-walk variant sharpens each ball's
vote by raising it to the power score**e. Prediction is the argmin
over classes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

import numpy as np

from .core import LabeledDataset, as_point, as_points, cross_distance_matrix
from .pccd import ClassCover, CoverBall, pccd_cover
from .rwccd import rw_cover

VARIANT_PURE = "pure"
VARIANT_RW = "random_walk"

# floor applied to ball scores before exponentiation; keeps rho**(T**e)
# defined and order-preserving when a score comes out non-positive
SCORE_CLAMP = 1e-3

# stand-in for an infinite dissimilarity gap in the discriminant
LARGE_GAP = 1e300

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class CccdModel:
    """Per-class ball covers plus the hyperparameters that built them."""

    variant: str
    covers: tuple[ClassCover, ...]
    hyper: dict
    dim: int
    label_map: tuple[str, ...]
    class_counts: tuple[int, ...]

    def __post_init__(self):
        if self.variant not in (VARIANT_PURE, VARIANT_RW):
            raise ValueError(f"unknown variant {self.variant!r}")
        if len(self.covers) < 2:
            raise ValueError("a model needs at least two classes")
        if len(self.label_map) != len(self.covers) or len(self.class_counts) != len(self.covers):
            raise ValueError("covers, label_map and class_counts must align")
        kind = "open" if self.variant == VARIANT_PURE else "closed"
        for cover in self.covers:
            for ball in cover.balls:
                if ball.ball_kind != kind:
                    raise ValueError(f"{self.variant} model requires {kind} balls")
                if self.variant == VARIANT_RW and ball.score is None:
                    raise ValueError("random-walk balls must carry scores")
                if len(ball.center) != self.dim:
                    raise ValueError("ball dimension does not match the model")
        object.__setattr__(self, "covers", tuple(self.covers))
        object.__setattr__(self, "label_map", tuple(self.label_map))
        object.__setattr__(self, "class_counts", tuple(int(c) for c in self.class_counts))

    @property
    def n_classes(self) -> int:
        return len(self.covers)


@dataclass(frozen=True)
class Prediction:
    label: int
    per_class_dissimilarity: tuple[float, ...]


def scaled_dissimilarity(z, ball: CoverBall) -> float:
    """d(z, center) / radius; a zero-radius ball is infinitely far from
    everything except its own center."""
    center = ball.center
    p = as_point(z)
    if p.shape != center.shape:
        raise ValueError(f"dimension mismatch: {p.size} vs {center.size}")
    diff = p - center
    d = float(np.sqrt((diff * diff).sum(axis=-1)))
    if ball.radius > 0:
        return d / ball.radius
    return 0.0 if d == 0.0 else float("inf")


def weighted_dissimilarity(z, ball: CoverBall, e: float) -> float:
    """Scaled dissimilarity raised to the ball's clamped score to the e."""
    if ball.score is None:
        raise ValueError("ball has no score; weighted dissimilarity needs one")
    e = float(e)
    if not 0.0 <= e <= 1.0:
        raise ValueError("e must be in [0,1]")
    rho = scaled_dissimilarity(z, ball)
    exponent = max(ball.score, SCORE_CLAMP) ** e
    with np.errstate(over="ignore"):  # huge rho**exponent saturates to inf
        return float(np.float64(rho) ** np.float64(exponent))


def train(data: LabeledDataset, variant: str, *, tau: float | None = None, e: float | None = None) -> CccdModel:
    """Fit one cover per class, each against the union of the others."""
    if data.n_classes < 2:
        raise ValueError("training requires at least two classes")
    if variant == VARIANT_PURE:
        if tau is None:
            raise ValueError("the pure variant requires tau")
        if not 0.0 < float(tau) <= 1.0:
            raise ValueError("tau must be in (0,1]")
        hyper = {"tau": float(tau)}
    elif variant == VARIANT_RW:
        if e is None:
            raise ValueError("the random-walk variant requires e")
        if not 0.0 <= float(e) <= 1.0:
            raise ValueError("e must be in [0,1]")
        hyper = {"e": float(e)}
    else:
        raise ValueError(f"unknown variant {variant!r}")
    covers = []
    for c in range(data.n_classes):
        targets = data.points[data.labels == c]
        nontargets = data.points[data.labels != c]
        if variant == VARIANT_PURE:
            covers.append(pccd_cover(targets, nontargets, hyper["tau"], class_id=c))
        else:
            covers.append(rw_cover(targets, nontargets, class_id=c))
    return CccdModel(
        variant=variant,
        covers=tuple(covers),
        hyper=hyper,
        dim=data.dim,
        label_map=data.label_names,
        class_counts=tuple(int(c) for c in data.class_counts),
    )


def _class_minima(model: CccdModel, points: np.ndarray) -> np.ndarray:
    """(n_points, n_classes) matrix of per-class minimum dissimilarities."""
    out = np.empty((len(points), model.n_classes), dtype=np.float64)
    for c, cover in enumerate(model.covers):
        centers = cover.centers()
        radii = cover.radii()
        dist = cross_distance_matrix(points, centers)
        safe = np.where(radii > 0, radii, 1.0)
        rho = dist / safe
        zero = radii <= 0
        if zero.any():
            rho[:, zero] = np.where(dist[:, zero] == 0.0, 0.0, np.inf)
        if model.variant == VARIANT_RW:
            scores = np.array([b.score for b in cover.balls], dtype=np.float64)
            exponent = np.maximum(scores, SCORE_CLAMP) ** model.hyper["e"]
            with np.errstate(over="ignore"):  # huge rho**exponent saturates to inf
                rho = rho**exponent
        out[:, c] = rho.min(axis=1)
    return out


def _argmin_label(minima: np.ndarray, class_counts: tuple[int, ...]) -> int:
    """Argmin with ties broken toward the larger class, then the lower id."""
    best = minima.min()
    candidates = np.flatnonzero(minima == best)
    if len(candidates) == 1:
        return int(candidates[0])
    return int(min(candidates, key=lambda c: (-class_counts[c], c)))


def predict(model: CccdModel, z) -> Prediction:
    """Classify one point."""
    p = as_point(z)
    if p.size != model.dim:
        raise ValueError(f"dimension mismatch: point has {p.size}, model expects {model.dim}")
    minima = _class_minima(model, p[None, :])[0]
    label = _argmin_label(minima, model.class_counts)
    return Prediction(label=label, per_class_dissimilarity=tuple(float(v) for v in minima))


def predict_batch(model: CccdModel, points) -> tuple[np.ndarray, np.ndarray]:
    """Labels and the per-class dissimilarity matrix for many points."""
    pts = as_points(points)
    if pts.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: points have {pts.shape[1]}, model expects {model.dim}")
    minima = _class_minima(model, pts)
    labels = np.array([_argmin_label(row, model.class_counts) for row in minima], dtype=np.int64)
    return labels, minima


def _gap(pos: np.ndarray, neg: np.ndarray) -> np.ndarray:
    pos_inf = np.isinf(pos)
    neg_inf = np.isinf(neg)
    out = np.where(neg_inf, LARGE_GAP, np.where(pos_inf, -LARGE_GAP, 0.0))
    both_fin = ~pos_inf & ~neg_inf
    out[both_fin] = neg[both_fin] - pos[both_fin]
    out[pos_inf & neg_inf] = 0.0
    return out


def discriminant(model: CccdModel, z, positive_class: int) -> float:
    """Continuous two-class score: larger means more like the positive class.

    Defined as (min dissimilarity to the negative class) minus (min
    dissimilarity to the positive class), with an infinite side replaced
    by a +-LARGE_GAP sentinel; its sign agrees with predict up to ties.
    """
    return float(discriminant_batch(model, as_point(z)[None, :], positive_class)[0])


def discriminant_batch(model: CccdModel, points, positive_class: int) -> np.ndarray:
    if model.n_classes != 2:
        raise ValueError("the discriminant is defined for two-class models only")
    if positive_class not in (0, 1):
        raise ValueError("positive_class must be one of the model's class ids")
    pts = as_points(points)
    if pts.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: points have {pts.shape[1]}, model expects {model.dim}")
    minima = _class_minima(model, pts)
    return _gap(minima[:, positive_class], minima[:, 1 - positive_class])


def model_to_dict(model: CccdModel) -> dict:
    covers = []
    for cover, n_train in zip(model.covers, model.class_counts):
        balls = []
        for b in cover.balls:
            entry = {
                "center": [float(v) for v in b.center],
                "center_index": int(b.center_index),
                "radius": float(b.radius),
            }
            if b.score is not None:
                entry["score"] = float(b.score)
            balls.append(entry)
        covers.append(
            {
                "class_id": int(cover.class_id),
                "is_pure": bool(cover.is_pure),
                "is_proper": bool(cover.is_proper),
                "n_train": int(n_train),
                "balls": balls,
            }
        )
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "variant": model.variant,
        "dim": int(model.dim),
        "hyper": dict(model.hyper),
        "label_map": list(model.label_map),
        "covers": covers,
    }


def model_from_dict(doc: dict) -> CccdModel:
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version!r}")
    variant = doc["variant"]
    kind = "open" if variant == VARIANT_PURE else "closed"
    covers = []
    counts = []
    for cd in doc["covers"]:
        balls = tuple(
            CoverBall(
                center=np.array(bd["center"], dtype=np.float64),
                center_index=int(bd["center_index"]),
                radius=float(bd["radius"]),
                ball_kind=kind,
                score=float(bd["score"]) if "score" in bd else None,
            )
            for bd in cd["balls"]
        )
        covers.append(
            ClassCover(
                class_id=int(cd["class_id"]),
                balls=balls,
                is_pure=bool(cd["is_pure"]),
                is_proper=bool(cd["is_proper"]),
            )
        )
        counts.append(int(cd["n_train"]))
    return CccdModel(
        variant=variant,
        covers=tuple(covers),
        hyper=dict(doc["hyper"]),
        dim=int(doc["dim"]),
        label_map=tuple(doc["label_map"]),
        class_counts=tuple(counts),
    )


def model_to_json(model: CccdModel) -> str:
    """JSON with full float precision; reloading reproduces predictions
    bit-exactly."""
    return json.dumps(model_to_dict(model), indent=2)


def model_from_json(text: str) -> CccdModel:
    return model_from_dict(json.loads(text))


def save_model(model: CccdModel, path) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))
        fh.write("\n")
    os.replace(tmp, path)


def load_model(path) -> CccdModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read())


def with_hyper(model: CccdModel, **hyper) -> CccdModel:
    """Same covers, different prediction hyperparameters (e.g. a new e)."""
    merged = dict(model.hyper)
    merged.update({k: float(v) for k, v in hyper.items()})
    return replace(model, hyper=merged)
