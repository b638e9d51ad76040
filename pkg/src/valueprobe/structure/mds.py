"""Ordinal (nonmetric) multidimensional scaling by stress majorization.

The solver alternates Guttman transforms with monotone regression of the
configuration distances on the dissimilarity order, Kruskal's primary
approach to ties. Disparities are renormalized to a fixed sum of squares
after each monotone step, so the normalized stress can only go down.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..errors import ValidationError


@dataclass(frozen=True)
class Dissimilarity:
    labels: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValidationError(f"dissimilarity must be {n}x{n}, got {d.shape}")
        if not np.isfinite(d).all():
            raise ValidationError("dissimilarities must be finite")
        if np.abs(d - d.T).max(initial=0.0) > 1e-12:
            raise ValidationError("dissimilarity matrix is not symmetric")
        if (d < 0).any():
            raise ValidationError("dissimilarities must be non-negative")
        d = (d + d.T) / 2
        np.fill_diagonal(d, 0.0)
        d.setflags(write=False)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "d", d)


@dataclass(frozen=True)
class Configuration:
    labels: tuple[str, ...]
    coords: np.ndarray
    stress: float
    iterations: int
    converged: bool
    stress_history: tuple[float, ...] = ()


def isotonic_regression(y: Sequence[float], weights: Sequence[float] | None = None) -> np.ndarray:
    """Least-squares non-decreasing fit by pool-adjacent-violators."""
    y = np.asarray(y, dtype=float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    # blocks as parallel stacks of (mean, weight, length)
    means: list[float] = []
    wts: list[float] = []
    sizes: list[int] = []
    for yi, wi in zip(y, w):
        means.append(float(yi))
        wts.append(float(wi))
        sizes.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            m2, w2, s2 = means.pop(), wts.pop(), sizes.pop()
            m1, w1, s1 = means[-1], wts[-1], sizes[-1]
            wsum = w1 + w2
            means[-1] = (m1 * w1 + m2 * w2) / wsum if wsum > 0 else (m1 + m2) / 2
            wts[-1] = wsum
            sizes[-1] = s1 + s2
    return np.repeat(means, sizes)


def torgerson(d: np.ndarray, dims: int = 2) -> np.ndarray:
    """Classical scaling with a sign convention that makes the result deterministic."""
    n = d.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    B = -0.5 * J @ (d ** 2) @ J
    vals, vecs = np.linalg.eigh(B)
    order = np.argsort(vals)[::-1][:dims]
    vals, vecs = vals[order], vecs[:, order]
    for k in range(dims):
        pivot = np.argmax(np.abs(vecs[:, k]))
        if vecs[pivot, k] < 0:
            vecs[:, k] = -vecs[:, k]
    X = vecs * np.sqrt(np.clip(vals, 0.0, None))
    if not np.any(X):
        # no positive spectrum; spread points on a line so the first Guttman step has distances
        X = np.zeros((n, dims))
        X[:, 0] = np.arange(n) - (n - 1) / 2
    return X


def _guttman(X: np.ndarray, dhat: np.ndarray, dist: np.ndarray) -> np.ndarray:
    # dhat and dist are condensed (pdist order) vectors
    n = X.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dist > 0, dhat / dist, 0.0)
    B = -squareform(ratio)
    B[np.diag_indices(n)] = -B.sum(axis=1)
    return B @ X / n


def _monotone_disparities(delta: np.ndarray, dist: np.ndarray, norm: float) -> np.ndarray:
    # primary approach: tied dissimilarities may take any order, so sort them by current distance
    order = np.lexsort((dist, delta))
    dhat = np.empty_like(dist)
    dhat[order] = isotonic_regression(dist[order])
    ss = float(dhat @ dhat)
    if ss == 0.0:
        return np.full_like(dist, np.sqrt(norm / dist.size))
    return dhat * np.sqrt(norm / ss)


def _stress(dhat: np.ndarray, dist: np.ndarray) -> float:
    return float(np.sqrt(((dhat - dist) ** 2).sum() / (dhat @ dhat)))


def _smacof(delta_sq: np.ndarray, X: np.ndarray, max_iter: int, tol: float):
    delta = squareform(delta_sq, checks=False)
    norm = float(delta.size)
    dist = pdist(X)
    dhat = _monotone_disparities(delta, dist, norm)
    # optimal dilation of the start so that the first stress value is comparable
    scale = float(dhat @ dist) / float(dist @ dist) if dist.any() else 1.0
    X = X * scale
    dist = dist * scale
    dhat = _monotone_disparities(delta, dist, norm)
    history = [_stress(dhat, dist)]
    converged = history[0] < 1e-12
    it = 0
    while not converged and it < max_iter:
        it += 1
        X = _guttman(X, dhat, dist)
        dist = pdist(X)
        dhat = _monotone_disparities(delta, dist, norm)
        history.append(_stress(dhat, dist))
        if history[-2] - history[-1] < tol or history[-1] < 1e-12:
            converged = True
    return X, history, it, converged


def ordinal_mds(
    dis: Dissimilarity,
    dims: int = 2,
    max_iter: int = 500,
    tol: float = 1e-6,
    n_starts: int = 1,
    random_state: int | None = 0,
) -> Configuration:
    """Fit an ordinal MDS configuration.

    The first start is always the Torgerson solution. Extra starts
    (``n_starts > 1``) use random configurations; the lowest stress wins.
    """
    d = dis.d
    n = d.shape[0]
    if n < dims + 1:
        raise ValidationError(f"need more than {dims} points for a {dims}-dimensional solution")
    if not np.any(d):
        raise ValidationError("all dissimilarities are zero")

    starts = [torgerson(d, dims)]
    rng = np.random.default_rng(random_state)
    for _ in range(n_starts - 1):
        starts.append(rng.standard_normal((n, dims)))

    best = None
    for X0 in starts:
        X, history, it, converged = _smacof(d, X0, max_iter, tol)
        if best is None or history[-1] < best[1][-1]:
            best = (X, history, it, converged)
    X, history, it, converged = best
    X = X - X.mean(axis=0)
    return Configuration(dis.labels, X, history[-1], it, converged, tuple(history))


def kruskal_stress(delta: np.ndarray, coords: np.ndarray) -> float:
    """Stress-1 of a configuration under the optimal monotone transform of ``delta``."""
    dv = squareform(np.asarray(delta, dtype=float), checks=False)
    dist = pdist(coords)
    order = np.lexsort((dist, dv))
    dhat = np.empty_like(dist)
    dhat[order] = isotonic_regression(dist[order])
    return float(np.sqrt(((dist - dhat) ** 2).sum() / (dist @ dist)))
