"""Ordinary kriging of cluster means over the independent coordinates.

Clusters sample the response manifold at scattered operating points; this
module interpolates their dependent-variable means to any operating point
and, crucially for the downstream match tests, reports the estimation error
sigma_M of that interpolation.

One variogram is shared by all dependent channels.  Site values are
standardized per channel (zero mean, unit spread across sites) so channels
with different magnitudes contribute comparably, and the empirical
semivariances of the standardized values are binned by inter-site distance
and least-squares fitted to a Gaussian model

    gamma(h) = c0 + c1 * (1 - exp(-h^2 / a^2)).

With fewer than four usable distance bins the fit falls back to
c0 = pooled site nugget, c1 = mean empirical semivariance, a = half the
mean pair distance.

Queries solve the ordinary-kriging system in variogram form with the
per-site nugget (mean dependent variance of the cluster mean, i.e.
dispersion / population) entering the diagonal, so heavily populated
clusters pull weights toward themselves.  The returned variance splits into
a structural part Q_sig (prediction variance of the smooth standardized
field, scaled back by each channel's spread) and a noise part Q_noise
(site-mean noise propagated through the squared weights):

    sigma_d^2 = s_d^2 * Q_sig + Q_noise
    sigma_M   = sqrt(sum_d sigma_d^2)

so a constant field reports a sigma_M driven by the nuggets alone, and a
query at a high-population site collapses to that site's value with
sigma_M -> 0.

Units follow the inputs: pass the pipeline's normalization scales to fit()
and everything (sites, values, estimate, sigma_M) lives in normalized
units, directly comparable to normalized realization distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.optimize import curve_fit

from .clustering import Cluster, validate_mask

__all__ = ["KrigingModel", "InterpolationResult", "fit", "interpolate"]

_MIN_SILL = 1e-12  # keeps the system positive when the field is constant
_MIN_FIT_BINS = 4


@dataclass(frozen=True)
class InterpolationResult:
    """Kriging output at one query point.

    estimate: interpolated dependent vector; sigma_M: its estimation-error
    vector length; weights: the ordinary-kriging site weights (diagnostic,
    they sum to 1).
    """

    estimate: np.ndarray
    sigma_M: float
    weights: np.ndarray


@dataclass(frozen=True)
class KrigingModel:
    """Immutable fitted interpolator.

    sites: (n, L) independent coordinates; site_values: (n, D) dependent
    means; site_nuggets: (n,) per-site mean variance of the site mean;
    variogram: (c0, c1, a) Gaussian parameters in standardized units;
    value_means/value_scales: per-channel standardization used for the fit;
    noise_scale: mean signal variance used to express nuggets in
    standardized units.
    """

    sites: np.ndarray
    site_values: np.ndarray
    site_nuggets: np.ndarray
    variogram: tuple[float, float, float]
    value_means: np.ndarray
    value_scales: np.ndarray
    noise_scale: float

    def __post_init__(self) -> None:
        c0, c1, a = self.variogram
        if self.sites.shape[0] < 2:
            raise ValueError("need at least two sites")
        if c0 < 0 or c1 <= 0 or a <= 0:
            raise ValueError(f"invalid variogram (c0={c0}, c1={c1}, a={a})")

    def to_dict(self) -> dict[str, Any]:
        return {
            "sites": self.sites.tolist(),
            "site_values": self.site_values.tolist(),
            "site_nuggets": self.site_nuggets.tolist(),
            "variogram": list(self.variogram),
            "value_means": self.value_means.tolist(),
            "value_scales": self.value_scales.tolist(),
            "noise_scale": self.noise_scale,
        }

    @classmethod
    def from_dict(cls, state: dict[str, Any]) -> "KrigingModel":
        return cls(
            sites=np.asarray(state["sites"], dtype=float),
            site_values=np.asarray(state["site_values"], dtype=float),
            site_nuggets=np.asarray(state["site_nuggets"], dtype=float),
            variogram=tuple(float(v) for v in state["variogram"]),
            value_means=np.asarray(state["value_means"], dtype=float),
            value_scales=np.asarray(state["value_scales"], dtype=float),
            noise_scale=float(state["noise_scale"]),
        )


def _gaussian_variogram(h: np.ndarray, c0: float, c1: float, a: float) -> np.ndarray:
    return c0 + c1 * (1.0 - np.exp(-(h * h) / (a * a)))


def fit(clusters: list[Cluster], mask, scales=None) -> KrigingModel:
    """Fit a kriging model to cluster sites, values, and dispersions.

    Sites are the mask==1 centroid coordinates, values the mask==0 ones,
    both divided by the matching scales entries when given.  The per-site
    nugget is the mean dependent per-dimension variance divided by the
    population, i.e. the noise variance of the site mean.

    Raises:
        ValueError: fewer than two clusters, no dependent dimensions, or
            all sites coincident ("no spatial spread").
    """
    if len(clusters) < 2:
        raise ValueError(f"need at least two clusters, got {len(clusters)}")
    m = validate_mask(mask)
    ind = m == 1
    dep = m == 0
    if not dep.any():
        raise ValueError("mask leaves no dependent dimensions to interpolate")
    if scales is None:
        s = np.ones(m.size)
    else:
        s = np.asarray(scales, dtype=float)
        if s.shape != m.shape:
            raise ValueError(f"scales length {s.size} != mask length {m.size}")
        if np.any(s <= 0):
            raise ValueError("scales must be positive")

    cent = np.array([c.centroid for c in clusters], dtype=float)
    pvar = np.array([c.per_dim_var for c in clusters], dtype=float)
    pops = np.array([c.population for c in clusters], dtype=float)
    if np.any(pops < 1):
        raise ValueError("cluster populations must be >= 1")
    sites = cent[:, ind] / s[ind]
    values = cent[:, dep] / s[dep]
    nuggets = (pvar[:, dep] / (s[dep] ** 2)).mean(axis=1) / pops

    n = sites.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    pair_h = np.linalg.norm(sites[iu] - sites[ju], axis=1)
    if float(pair_h.max()) == 0.0:
        raise ValueError("no spatial spread")

    means = values.mean(axis=0)
    spreads = values.std(axis=0)
    active = spreads > 0
    noise_scale = float(np.mean(spreads[active] ** 2)) if active.any() else 1.0
    if active.any():
        z = (values[:, active] - means[active]) / spreads[active]
        pair_gamma = 0.5 * np.mean((z[iu] - z[ju]) ** 2, axis=1)
    else:
        pair_gamma = np.zeros(pair_h.size)
    pooled_nugget = float(np.mean(nuggets / noise_scale))

    variogram = _fit_variogram(pair_h, pair_gamma, pooled_nugget)
    return KrigingModel(
        sites=sites,
        site_values=values,
        site_nuggets=nuggets,
        variogram=variogram,
        value_means=means,
        value_scales=spreads,
        noise_scale=noise_scale,
    )


def _fit_variogram(
    pair_h: np.ndarray, pair_gamma: np.ndarray, pooled_nugget: float
) -> tuple[float, float, float]:
    """Binned least-squares Gaussian fit with a small-sample fallback."""
    h_max = float(pair_h.max())
    edges = np.linspace(0.0, h_max, 11)
    which = np.clip(np.digitize(pair_h, edges[1:-1]), 0, 9)
    bin_h, bin_g = [], []
    for b in range(10):
        sel = which == b
        if sel.any():
            bin_h.append(float(pair_h[sel].mean()))
            bin_g.append(float(pair_gamma[sel].mean()))
    fallback = (
        pooled_nugget,
        max(float(pair_gamma.mean()), _MIN_SILL),
        0.5 * float(pair_h.mean()),
    )
    if len(bin_h) < _MIN_FIT_BINS:
        return fallback
    bh = np.asarray(bin_h)
    bg = np.asarray(bin_g)
    p0 = (
        max(float(bg.min()), 0.0),
        max(float(bg.max() - bg.min()), _MIN_SILL),
        float(np.median(bh)),
    )
    try:
        popt, _ = curve_fit(
            _gaussian_variogram,
            bh,
            bg,
            p0=p0,
            bounds=([0.0, _MIN_SILL, 1e-9 * h_max], [np.inf, np.inf, np.inf]),
            maxfev=10_000,
        )
    except (RuntimeError, ValueError):
        return fallback
    return float(popt[0]), float(popt[1]), float(popt[2])


def interpolate(model: KrigingModel, w) -> InterpolationResult:
    """Kriging estimate and uncertainty at independent coordinates w.

    Solves the ordinary-kriging system (unbiasedness row included, so the
    weights sum to 1) once and applies the weights to every dependent
    channel.  Extrapolation outside the site hull is allowed; sigma_M grows
    there.

    Raises:
        ValueError: wrong query length, non-finite query, or a singular
            system ("degenerate site geometry", e.g. duplicate sites with
            zero nugget).
    """
    wq = np.atleast_1d(np.asarray(w, dtype=float))
    if wq.shape != (model.sites.shape[1],):
        raise ValueError(
            f"query length {wq.size} != site dimension {model.sites.shape[1]}"
        )
    if not np.all(np.isfinite(wq)):
        raise ValueError("query coordinates must be finite")
    c0, c1, a = model.variogram
    sites = model.sites
    n = sites.shape[0]

    # variogram-form system: equivalent to the covariance form under the
    # unit-sum constraint, but stays well conditioned when the fitted sill
    # is huge (unbounded fields fit c1 -> inf with gamma finite on the data)
    diffs = sites[:, None, :] - sites[None, :, :]
    h2 = np.einsum("ijk,ijk->ij", diffs, diffs)
    gam = c0 + c1 * (1.0 - np.exp(-h2 / (a * a)))
    gam[np.diag_indices(n)] = -model.site_nuggets / model.noise_scale

    system = np.zeros((n + 1, n + 1))
    system[:n, :n] = gam
    system[:n, n] = 1.0
    system[n, :n] = 1.0
    d2 = np.einsum("ij,ij->i", sites - wq[None, :], sites - wq[None, :])
    rhs = np.zeros(n + 1)
    rhs[:n] = c0 + c1 * (1.0 - np.exp(-d2 / (a * a)))
    rhs[n] = 1.0
    try:
        sol = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError("degenerate site geometry") from exc
    lam, mu = sol[:n], sol[n]

    estimate = lam @ model.site_values
    q_sig = max(float(lam @ rhs[:n]) + mu - c0, 0.0)
    q_noise = float((lam * lam) @ model.site_nuggets)
    var_per_dim = model.value_scales**2 * q_sig + q_noise
    sigma_m = math.sqrt(float(var_per_dim.sum()))
    return InterpolationResult(estimate=estimate, sigma_M=sigma_m, weights=lam)
