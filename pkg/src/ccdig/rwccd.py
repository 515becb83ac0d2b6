"""Random-walk class covers.

Each candidate ball radius gets a signed, size-reweighted count

    R_x(r) = w * |{targets within r}| - |{non-targets within r}|,

over closed balls, with w = |non-targets| / |targets| of the sets still
uncovered. The radius maximizing R_x (smallest on ties) defines the ball
at x, and a length penalty turns the walk value into a selection score

    T_x = R_x(r_x) - r_x * n_uncovered / (2 * d_max(x)).

The cover grows greedily: pick the highest-scoring center, drop every
point its closed ball covers, recompute, repeat until no target remains.
Covers may be impure (non-targets swallowed) and improper (zero-radius
balls cover nothing, not even their own center).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_point, as_points, cross_distance_matrix
from .pccd import ClassCover, CoverBall


@dataclass(frozen=True, eq=False)
class RwProfile:
    """Walk values over the sorted set of candidate radii for one center."""

    candidate_radii: np.ndarray
    walk_values: np.ndarray

    def __post_init__(self):
        cand = np.asarray(self.candidate_radii, dtype=np.float64).copy()
        walk = np.asarray(self.walk_values, dtype=np.float64).copy()
        if cand.ndim != 1 or cand.shape != walk.shape or len(cand) == 0:
            raise ValueError("profile needs matching non-empty radius and walk arrays")
        if np.any(np.diff(cand) <= 0):
            raise ValueError("candidate radii must be strictly increasing")
        if cand[0] != 0.0:
            raise ValueError("candidate radii must include the self-distance 0")
        cand.flags.writeable = False
        walk.flags.writeable = False
        object.__setattr__(self, "candidate_radii", cand)
        object.__setattr__(self, "walk_values", walk)


@dataclass(frozen=True)
class RwBallSelection:
    """Chosen radius for one center plus its walk value and score."""

    radius: float
    walk_value: float
    score: float


def rw_profile(x, H0, H1, weight: float | None = None) -> RwProfile:
    """Walk values for a center x over all candidate radii.

    x must belong to H0, the uncovered target points; H1 holds the
    uncovered non-target points and may be empty (then the reweighting
    factor defaults to 1 and the negative term vanishes). `weight`
    overrides the |H1|/|H0| factor, for covers that keep the original
    class-size ratio fixed across iterations.
    """
    X0 = as_points(H0)
    if len(X0) == 0:
        raise ValueError("the uncovered target set must be non-empty")
    p = as_point(x)
    d0 = cross_distance_matrix(p[None, :], X0)[0]
    if len(H1) > 0:
        d1 = cross_distance_matrix(p[None, :], as_points(H1))[0]
    else:
        d1 = np.empty(0, dtype=np.float64)
    if d0.min() != 0.0:
        raise ValueError("x must be a member of the uncovered target set")
    if weight is None:
        weight = len(d1) / len(d0) if len(d1) > 0 else 1.0
    cand = np.unique(np.concatenate([d0, d1]))
    count_t = np.searchsorted(np.sort(d0), cand, side="right")
    count_n = np.searchsorted(np.sort(d1), cand, side="right")
    walk = weight * count_t - count_n
    return RwProfile(candidate_radii=cand, walk_values=walk)


def rw_radius(profile: RwProfile) -> tuple[float, float]:
    """Radius maximizing the walk (no extra penalty), smallest on ties."""
    i = int(np.argmax(profile.walk_values))
    return float(profile.candidate_radii[i]), float(profile.walk_values[i])


def rw_score(walk_value: float, radius: float, n_uncovered: int, d_max: float) -> float:
    """Selection score: walk_value - radius * n_uncovered / (2 * d_max).

    A singleton target class has d_max = 0; the penalty is then defined
    as 0 to keep the score total. The penalty is evaluated as
    (radius / d_max) * (n_uncovered / 2) so that the frequent radius ==
    d_max case yields an exactly scale-free score.
    """
    if n_uncovered < 1:
        raise ValueError("n_uncovered must be at least 1")
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    if d_max == 0:
        return float(walk_value)
    return float(walk_value - (radius / d_max) * (n_uncovered / 2.0))


def rw_select(x, H0, H1, n_uncovered: int, d_max: float, weight: float | None = None) -> RwBallSelection:
    """Radius, walk value, and score for one candidate center."""
    radius, walk = rw_radius(rw_profile(x, H0, H1, weight))
    return RwBallSelection(radius=radius, walk_value=walk, score=rw_score(walk, radius, n_uncovered, d_max))


def rw_cover(targets, nontargets, class_id: int = 0, fixed_weight: bool = False) -> ClassCover:
    """Greedy random-walk ball cover of the target class.

    Each iteration recomputes every remaining center's best radius over
    the still-uncovered points, selects the highest score (lowest
    original index on ties), and removes everything the chosen closed
    ball covers. d_max is taken over all original targets, once. With
    `fixed_weight` the reweighting factor stays at the original
    class-size ratio instead of tracking the uncovered sets.
    """
    X = as_points(targets)
    n = len(X)
    if n == 0:
        raise ValueError("the target class must be non-empty")
    if len(nontargets) > 0:
        Y = as_points(nontargets)
        if Y.shape[1] != X.shape[1]:
            raise ValueError("target and non-target dimensions differ")
    else:
        Y = np.empty((0, X.shape[1]), dtype=np.float64)
    m = len(Y)
    allpts = np.vstack([X, Y]) if m else X
    dist = cross_distance_matrix(X, allpts)  # (n, n + m)
    is_target_col = np.concatenate([np.ones(n, dtype=bool), np.zeros(m, dtype=bool)])
    d_max = dist[:, :n].max(axis=1)
    h0 = np.ones(n, dtype=bool)
    h1 = np.ones(m, dtype=bool)
    balls: list[CoverBall] = []
    while h0.any():
        idx0 = np.flatnonzero(h0)
        cols = np.concatenate([idx0, n + np.flatnonzero(h1)])
        n_alive = len(idx0)
        m_alive = int(h1.sum())
        if fixed_weight:
            weight = m / n if m > 0 else 1.0
        else:
            weight = m_alive / n_alive if m_alive > 0 else 1.0
        sub = dist[np.ix_(idx0, cols)]
        order = np.argsort(sub, axis=1, kind="stable")
        sorted_d = np.take_along_axis(sub, order, axis=1)
        target_sorted = is_target_col[cols][order]
        count_t = np.cumsum(target_sorted, axis=1)
        count_n = np.cumsum(~target_sorted, axis=1)
        walk = weight * count_t - count_n
        # only the last entry of a run of equal radii carries the full count
        last = np.ones_like(target_sorted)
        last[:, :-1] = sorted_d[:, 1:] != sorted_d[:, :-1]
        candidates = np.where(last, walk, -np.inf)
        best = np.argmax(candidates, axis=1)  # first max = smallest radius
        rows = np.arange(n_alive)
        radii = sorted_d[rows, best]
        walks = walk[rows, best]
        dmax0 = d_max[idx0]
        # same evaluation order as rw_score, bitwise
        ratio = radii / np.where(dmax0 > 0, dmax0, 1.0)
        penalty = np.where(dmax0 > 0, ratio * (n_alive / 2.0), 0.0)
        scores = walks - penalty
        k = int(np.argmax(scores))  # first max = lowest original index
        center = int(idx0[k])
        r_star = float(radii[k])
        balls.append(
            CoverBall(
                center=X[center],
                center_index=center,
                radius=r_star,
                ball_kind="closed",
                score=float(scores[k]),
            )
        )
        h0 &= ~(dist[center, :n] <= r_star)
        h1 &= ~(dist[center, n:] <= r_star)
    sel = np.array([b.center_index for b in balls], dtype=np.int64)
    r_sel = np.array([b.radius for b in balls], dtype=np.float64)
    is_pure = m == 0 or not np.any(dist[sel][:, n:] <= r_sel[:, None])
    positive = r_sel > 0
    if positive.any():
        covered = np.any(dist[sel[positive], :n] <= r_sel[positive, None], axis=0)
    else:
        covered = np.zeros(n, dtype=bool)
    is_proper = bool(covered.all())
    return ClassCover(class_id=class_id, balls=tuple(balls), is_pure=bool(is_pure), is_proper=is_proper)
