"""Pure class covers: capped ball radii, the catch digraph, greedy domination.

A pure cover for a target class is a union of open balls centered at
selected target points. Each radius is capped by the distance to the
nearest non-target point, so no non-target point ever falls strictly
inside a ball. Ball centers are chosen as a greedy approximate minimum
dominating set of the digraph whose arc i -> j means "the ball at i
catches point j".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_points, cross_distance_matrix


@dataclass(frozen=True)
class Digraph:
    """Directed graph as per-vertex tuples of out-neighbor indices."""

    n_vertices: int
    arcs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.arcs) != self.n_vertices:
            raise ValueError("arcs must list out-neighbors for every vertex")
        arcs = tuple(tuple(int(j) for j in nbrs) for nbrs in self.arcs)
        for i, nbrs in enumerate(arcs):
            if len(set(nbrs)) != len(nbrs):
                raise ValueError(f"duplicate arcs out of vertex {i}")
            for j in nbrs:
                if not 0 <= j < self.n_vertices:
                    raise ValueError(f"arc {i}->{j} leaves the vertex range")
                if j == i:
                    raise ValueError(f"self-arc at vertex {i}")
        object.__setattr__(self, "arcs", arcs)


@dataclass(frozen=True, eq=False)
class CoverBall:
    """One covering ball: center point, radius, and (for random-walk
    covers) the selection score of the ball."""

    center: np.ndarray
    center_index: int
    radius: float
    ball_kind: str  # "open" or "closed"
    score: float | None = None

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).copy()
        center.flags.writeable = False
        if self.radius < 0:
            raise ValueError("radius must be non-negative")
        if self.ball_kind not in ("open", "closed"):
            raise ValueError(f"unknown ball kind {self.ball_kind!r}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True, eq=False)
class ClassCover:
    """All covering balls selected for one class, with honesty flags.

    `is_pure`: no non-target training point lies inside any ball
    (strictly inside for open balls, inside-or-on for closed ones).
    `is_proper`: every target training point is covered. Zero-radius
    closed balls cover nothing, not even their own center.
    """

    class_id: int
    balls: tuple[CoverBall, ...]
    is_pure: bool
    is_proper: bool

    def __post_init__(self):
        object.__setattr__(self, "balls", tuple(self.balls))

    @property
    def n_balls(self) -> int:
        return len(self.balls)

    def centers(self) -> np.ndarray:
        return np.array([b.center for b in self.balls], dtype=np.float64)

    def radii(self) -> np.ndarray:
        return np.array([b.radius for b in self.balls], dtype=np.float64)


def _validate_tau(tau: float) -> float:
    tau = float(tau)
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must be in (0,1]")
    return tau


def pccd_radii(targets, nontargets, tau: float) -> np.ndarray:
    """Ball radius for every target point.

    With d_near = distance to the nearest non-target point and
    d_far = largest target distance strictly below d_near (the point
    itself always qualifies at distance 0), the radius is

        r = (1 - tau) * d_far + tau * d_near

    so r always lands in (0, d_near]. A target point duplicated in the
    non-target class has d_near = 0 and gets radius 0.
    """
    tau = _validate_tau(tau)
    X = as_points(targets)
    Y = as_points(nontargets)
    dist_t = cross_distance_matrix(X, X)
    dist_n = cross_distance_matrix(X, Y)
    d_near = dist_n.min(axis=1)
    masked = np.where(dist_t < d_near[:, None], dist_t, -np.inf)
    d_far = masked.max(axis=1)
    d_far = np.where(d_near > 0, d_far, 0.0)
    radii = (1.0 - tau) * d_far + tau * d_near
    return np.where(d_near > 0, radii, 0.0)


def pccd_radius(x_index: int, targets, nontargets, tau: float) -> float:
    """Radius of the ball centered at targets[x_index]."""
    radii = pccd_radii(targets, nontargets, tau)
    if not 0 <= x_index < len(radii):
        raise ValueError(f"x_index {x_index} out of range")
    return float(radii[x_index])


def build_pccd_digraph(targets, radii) -> Digraph:
    """Arc i -> j (i != j) iff target j lies strictly inside ball i."""
    X = as_points(targets)
    r = np.asarray(radii, dtype=np.float64)
    if r.ndim != 1 or len(r) != len(X):
        raise ValueError("need exactly one radius per target point")
    if np.any(r < 0) or not np.all(np.isfinite(r)):
        raise ValueError("radii must be finite and non-negative")
    dist = cross_distance_matrix(X, X)
    caught = dist < r[:, None]
    np.fill_diagonal(caught, False)
    arcs = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in caught)
    return Digraph(n_vertices=len(X), arcs=arcs)


def greedy_dominating_set(g: Digraph) -> list[int]:
    """Greedy approximate minimum dominating set, in selection order.

    Repeatedly picks the vertex with the largest closed neighborhood in
    the digraph induced by the still-undominated vertices, removing that
    neighborhood. Ties go to the lowest vertex index.
    """
    n = g.n_vertices
    if n == 0:
        return []
    closed = np.zeros((n, n), dtype=bool)
    for i, nbrs in enumerate(g.arcs):
        closed[i, list(nbrs)] = True
        closed[i, i] = True
    alive = np.ones(n, dtype=bool)
    selected: list[int] = []
    while alive.any():
        idx = np.flatnonzero(alive)
        counts = closed[np.ix_(idx, idx)].sum(axis=1)
        v = int(idx[np.argmax(counts)])
        selected.append(v)
        alive &= ~closed[v]
    return selected


def pccd_cover(targets, nontargets, tau: float, class_id: int = 0) -> ClassCover:
    """Greedy approximate minimum-cardinality pure ball cover of the targets.

    The result is always pure and proper; both flags are still verified
    against the training points rather than assumed.
    """
    X = as_points(targets)
    Y = as_points(nontargets)
    if len(X) == 0 or len(Y) == 0:
        raise ValueError("both the target and non-target class must be non-empty")
    radii = pccd_radii(X, Y, tau)
    digraph = build_pccd_digraph(X, radii)
    centers = greedy_dominating_set(digraph)
    balls = tuple(
        CoverBall(center=X[i], center_index=i, radius=float(radii[i]), ball_kind="open")
        for i in centers
    )
    dist_t = cross_distance_matrix(X, X)
    dist_n = cross_distance_matrix(X, Y)
    sel = np.array(centers, dtype=np.int64)
    r_sel = radii[sel]
    is_pure = not np.any(dist_n[sel] < r_sel[:, None])
    covered = np.zeros(len(X), dtype=bool)
    covered[sel] = True  # a dominating-set member covers itself
    covered |= np.any(dist_t[sel] < r_sel[:, None], axis=0)
    is_proper = bool(covered.all())
    return ClassCover(class_id=class_id, balls=balls, is_pure=bool(is_pure), is_proper=is_proper)
