"""Shared generators and independent oracles for the test suite."""

import itertools
import math

import numpy as np

from ccdig.core import distance
from ccdig.rwccd import rw_select


def random_instance(seed, dims=(1, 2, 5), n_range=(5, 60), m_range=(5, 60)):
    """A random two-class instance mixing uniform boxes and Gaussian blobs."""
    rng = np.random.default_rng(seed)
    d = int(rng.choice(dims))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    m = int(rng.integers(m_range[0], m_range[1] + 1))

    def draw(count):
        center = rng.uniform(-1.0, 1.0, d)
        if rng.random() < 0.5:
            width = rng.uniform(0.2, 2.0)
            return center + rng.uniform(-width, width, (count, d))
        sigma = rng.uniform(0.1, 1.0)
        return center + sigma * rng.standard_normal((count, d))

    return draw(n), draw(m)


def exact_min_dominating_size(digraph) -> int:
    """Exhaustive minimum dominating set size (for small digraphs only)."""
    n = digraph.n_vertices
    if n == 0:
        return 0
    closed = [frozenset(nbrs) | {i} for i, nbrs in enumerate(digraph.arcs)]
    everything = frozenset(range(n))
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            dominated = frozenset()
            for v in subset:
                dominated |= closed[v]
            if dominated == everything:
                return size
    raise AssertionError("the full vertex set always dominates")


def brute_force_walk(x, H0, H1, weight=None):
    """Direct recomputation of the signed reweighted count per candidate radius.

    Distances come from the scalar distance op; counts and the weighted
    sum are plain Python arithmetic.
    """
    d0 = [distance(x, z) for z in H0]
    d1 = [distance(x, z) for z in H1]
    if weight is None:
        weight = len(d1) / len(d0) if d1 else 1.0
    candidates = sorted(set(d0) | set(d1))
    walks = []
    for r in candidates:
        ct = sum(1 for v in d0 if v <= r)
        cn = sum(1 for v in d1 if v <= r)
        walks.append(weight * ct - cn)
    return candidates, walks


def naive_rw_trace(targets, nontargets, fixed_weight=False):
    """Reference random-walk cover built ball by ball from the public
    single-center ops; returns [(center_index, radius, score), ...]."""
    X = np.asarray(targets, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    Y = np.asarray(nontargets, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    n, m = len(X), len(Y)
    d_max = [max(distance(X[i], X[j]) for j in range(n)) for i in range(n)]
    alive_t = list(range(n))
    alive_n = list(range(m))
    trace = []
    while alive_t:
        H0 = [X[i] for i in alive_t]
        H1 = [Y[j] for j in alive_n]
        if fixed_weight:
            weight = m / n if m > 0 else 1.0
        else:
            weight = len(H1) / len(H0) if H1 else 1.0
        n_uncovered = len(alive_t)
        best = None
        best_i = None
        for i in alive_t:
            sel = rw_select(X[i], H0, H1, n_uncovered, d_max[i], weight=weight)
            if best is None or sel.score > best.score:
                best, best_i = sel, i
        trace.append((best_i, best.radius, best.score))
        alive_t = [i for i in alive_t if distance(X[best_i], X[i]) > best.radius]
        alive_n = [j for j in alive_n if distance(X[best_i], Y[j]) > best.radius]
    return trace


def brute_force_auc(scores, labels) -> float:
    """All-pairs Mann-Whitney statistic with half weight on ties."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def trapezoid_roc_auc(scores, labels) -> float:
    """Area under the empirical ROC step curve by trapezoidal integration."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    y = y[order]
    n1 = int((y == 1).sum())
    n0 = len(y) - n1
    tp = np.cumsum(y == 1)
    fp = np.cumsum(y == 0)
    # keep only the last point of each tied-score run
    keep = np.concatenate([s[1:] != s[:-1], [True]])
    tpr = np.concatenate([[0.0], tp[keep] / n1])
    fpr = np.concatenate([[0.0], fp[keep] / n0])
    return float(np.trapezoid(tpr, fpr))


def ln_bound(n: int) -> float:
    return 1.0 + math.log(n)
