"""Similarity-transform procrustes fitting and Tucker's congruence coefficient."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

RANK_TOL = 1e-10


@dataclass(frozen=True)
class FitResult:
    rotated: np.ndarray
    rotation: np.ndarray
    scale: float
    translation: np.ndarray
    phi_overall: float
    phi_per_dimension: tuple[float, ...]
    alienation: float


def tucker_phi(x, y) -> float:
    """Congruence sum(xy) / sqrt(sum(x^2) sum(y^2)), on the values as given."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    denom = math.sqrt(float(x @ x) * float(y @ y))
    if denom == 0.0:
        raise ValidationError("congruence is undefined for an all-zero configuration")
    return float(x @ y) / denom


def alienation(phi: float) -> float:
    return math.sqrt(max(0.0, 1.0 - phi * phi))


def procrustes_fit(observed, target) -> FitResult:
    """Least-squares rotation (reflection allowed), uniform scale and
    translation of ``observed`` onto ``target``.

    Congruence is computed on the column-centered fitted and target
    configurations.
    """
    X = np.asarray(observed, dtype=float)
    Y = np.asarray(target, dtype=float)
    if X.shape != Y.shape or X.ndim != 2:
        raise ValidationError(f"configurations must have matching 2-D shapes, got {X.shape} and {Y.shape}")
    mx, my = X.mean(axis=0), Y.mean(axis=0)
    Xc, Yc = X - mx, Y - my
    C = Xc.T @ Yc
    U, s, Vt = np.linalg.svd(C)
    if s[0] == 0.0 or s[-1] <= RANK_TOL * s[0]:
        raise ValidationError("cross-product matrix is rank deficient; the rotation is not unique")
    R = U @ Vt
    scale = float(s.sum() / (Xc * Xc).sum())
    fitted_c = scale * Xc @ R
    rotated = fitted_c + my
    translation = my - scale * mx @ R
    phi = tucker_phi(fitted_c, Yc)
    per_dim = tuple(tucker_phi(fitted_c[:, k], Yc[:, k]) for k in range(X.shape[1]))
    return FitResult(rotated, R, scale, translation, phi, per_dim, alienation(phi))


def theoretical_target(circle_order) -> np.ndarray:
    """Equally spaced unit-circle points, first value at angle 0."""
    n = len(circle_order)
    angles = 2 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(angles), np.sin(angles)])
