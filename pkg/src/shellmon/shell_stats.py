"""Shell statistics for noisy high-dimensional point clusters.

A repeatable multichannel process observed through additive per-channel noise
produces realizations that concentrate on a thin hollow shell around the
noise-free response, not in a diffuse ball around it.  The distance from a
realization to the response has a chi-like distribution: its mean grows like
sqrt(k) with the number k of noise-carrying dimensions while its spread stays
near noise_sd / sqrt(2), so the mean/spread ratio hardens as k grows.

This module provides the empirical shell estimators (mean distance to the
centroid and its variance, both with population divisor M), the small-sample
offset that a held-out realization picks up against an M-sample centroid, and
the closed-form shell location/thickness in two flavors: the large-dimension
approximation mu = noise_sd*sqrt(k), var = noise_sd^2 * N / (2k), and the
exact chi moments.  The two variances disagree when the manifold dimension is
comparable to the ambient dimension; both are exposed and the Monte-Carlo
suite arbitrates (the exact moments win, see tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .synth import chi_moments

__all__ = [
    "ShellEstimate",
    "TheoreticalShell",
    "estimate_point_shell",
    "new_realization_correction",
    "realization_zscore",
    "theoretical_shell",
    "expected_pair_distance",
]


@dataclass
class ShellEstimate:
    """Incremental (mean, variance, weight) summary of a distance stream.

    Attributes:
        mu: Mean distance (shell center location), >= 0.
        var: Variance of distances about mu (squared half-thickness), >= 0.
        weight: Effective sample count behind the estimate.  An integer count
            in batch estimation; an accumulated smoothing weight in (0, 1]
            under exponential weighting.
        frozen: When True the estimate is a fixed reference; updaters must
            leave mu and var untouched.
    """

    mu: float
    var: float
    weight: float
    frozen: bool = False

    def __post_init__(self) -> None:
        if self.mu < 0 or self.var < 0 or self.weight < 0:
            raise ValueError(
                f"shell estimate fields must be non-negative, got "
                f"mu={self.mu}, var={self.var}, weight={self.weight}"
            )

    @property
    def sd(self) -> float:
        return math.sqrt(self.var)


@dataclass(frozen=True)
class TheoreticalShell:
    """Closed-form shell location and thickness for k = n_dims - manifold_dims.

    mu_approx/var_approx are the large-dimension closed forms
    (noise_sd*sqrt(k) and noise_sd^2 * n/(2k)); mu_exact/var_exact are the
    chi-distribution moments with k degrees of freedom scaled by noise_sd.
    mu_exact < mu_approx for every finite k, and var_approx overshoots
    var_exact once manifold_dims is an appreciable fraction of n_dims.
    """

    n_dims: int
    manifold_dims: int
    noise_sd: float
    mu_approx: float
    var_approx: float
    mu_exact: float
    var_exact: float

    @property
    def mu_point(self) -> float:
        """Approximate full noise-vector length noise_sd*sqrt(n_dims)."""
        return self.noise_sd * math.sqrt(self.n_dims)


def _as_matrix(realizations) -> np.ndarray:
    try:
        arr = np.asarray(realizations, dtype=float)
    except ValueError as exc:
        raise ValueError("dimension mismatch") from exc
    if arr.ndim == 1:
        arr = arr[None, :] if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("no realizations")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite realization values")
    return arr


def estimate_point_shell(realizations) -> tuple[np.ndarray, ShellEstimate]:
    """Centroid and distance-shell estimate of a realization cluster.

    The centroid is the arithmetic mean of the M realizations; the shell is
    the mean Euclidean distance to it and the variance of those distances.
    Both use the population divisor M (not M-1).  The streaming comparator
    reproduces this mean exactly; its variance differs slightly (each of its
    squared deviations is taken against the mean available at that step).

    Args:
        realizations: (M, N) array-like, rows are realizations.

    Returns:
        (centroid, ShellEstimate) with shell.weight = M.

    Raises:
        ValueError: empty input ("no realizations") or ragged rows
            ("dimension mismatch").
    """
    arr = _as_matrix(realizations)
    centroid = arr.mean(axis=0)
    dists = np.linalg.norm(arr - centroid[None, :], axis=1)
    mu = float(dists.mean())
    var = float(np.mean((dists - mu) ** 2))
    return centroid, ShellEstimate(mu=mu, var=var, weight=float(arr.shape[0]))


def new_realization_correction(shell: ShellEstimate, m: int) -> float:
    """Extra expected distance of a held-out realization to an m-sample centroid.

    A realization that did not participate in the centroid estimate sits
    farther from it than in-sample ones by shell.mu * sqrt(1 / (m*(m-1))).
    Strictly decreasing in m; vanishes as the training population grows.

    Raises:
        ValueError: m < 2 ("undefined correction").
    """
    if m < 2:
        raise ValueError("undefined correction")
    return shell.mu * math.sqrt(1.0 / (m * (m - 1)))


def realization_zscore(
    shell: ShellEstimate,
    distance: float,
    in_training: bool,
    m: int | None = None,
) -> tuple[float, float]:
    """Standardized shell coordinate of a realization-to-center distance.

    In-training realizations are scored against N(mu, var) directly; held-out
    ones first subtract the small-sample offset of new_realization_correction
    (m is required then).  The density is the normal pdf of the distance
    under the shell model, i.e. exp(-z^2/2) / (sd * sqrt(2*pi)).

    Raises:
        ValueError: shell.var == 0 ("degenerate shell"), or missing/invalid m
            for an out-of-training score.
    """
    if shell.var <= 0:
        raise ValueError("degenerate shell")
    center = shell.mu
    if not in_training:
        if m is None:
            raise ValueError("undefined correction")
        center += new_realization_correction(shell, m)
    sd = math.sqrt(shell.var)
    z = (distance - center) / sd
    density = math.exp(-0.5 * z * z) / (sd * math.sqrt(2.0 * math.pi))
    return z, density


def theoretical_shell(n_dims: int, manifold_dims: int, noise_sd: float) -> TheoreticalShell:
    """Closed-form shell for isotropic noise of sd noise_sd in n_dims dimensions.

    manifold_dims of the dimensions carry the response itself; only the
    k = n_dims - manifold_dims perpendicular ones contribute to the
    realization-to-manifold distance.

    Raises:
        ValueError: n_dims <= manifold_dims ("no perpendicular dimensions")
            or non-positive noise_sd.
    """
    if manifold_dims < 0 or n_dims <= manifold_dims:
        raise ValueError("no perpendicular dimensions")
    if noise_sd <= 0:
        raise ValueError(f"noise_sd must be positive, got {noise_sd}")
    k = n_dims - manifold_dims
    mu_exact, var_exact = chi_moments(k, noise_sd)
    return TheoreticalShell(
        n_dims=n_dims,
        manifold_dims=manifold_dims,
        noise_sd=noise_sd,
        mu_approx=noise_sd * math.sqrt(k),
        var_approx=noise_sd * noise_sd * n_dims / (2.0 * k),
        mu_exact=mu_exact,
        var_exact=var_exact,
    )


def expected_pair_distance(n_dims: int, manifold_dims: int, noise_sd: float) -> float:
    """Large-N mean distance between two realizations at the same manifold point.

    Closed form noise_sd * sqrt(2 * n_dims); equivalently the perpendicular
    shell mean times sqrt(2*n_dims/(n_dims - manifold_dims)).  The exact value
    is sqrt(2)*noise_sd*chi_mean(n_dims), noticeably smaller for small n_dims
    (about sqrt(pi) vs 2 at n_dims = 2).
    """
    if manifold_dims < 0 or n_dims <= manifold_dims:
        raise ValueError("no perpendicular dimensions")
    return noise_sd * math.sqrt(2.0 * n_dims)
