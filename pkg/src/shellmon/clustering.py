"""Online dynamic clustering that samples a response manifold uniformly.

Realizations arrive one at a time and are organized into at most kmax
clusters.  Distances use only the dimensions flagged as independent by a
0/1 mask, each divided by a caller-supplied normalization scale, so
clustering follows the process inputs while the dependent channels ride
along in the centroids for later interpolation.

The first kmax realizations seed one cluster each.  After that, each
realization either merges into its nearest cluster (when the nearest
distance sdr_c is within dmax), or triggers a pairwise cluster-distance
search: if the realization is farther from every cluster than the closest
pair of clusters is from each other, that pair is fused and the freed slot
re-seeded with the realization.  dmax = cdist * shelldist adapts after
every ingest, where shelldist^2 is the population-weighted mean of the
per-cluster distance variances cvar; this shared radius pushes clusters
toward a uniform sampling distance along the manifold.

Bookkeeping choices that the update formulas imply rather than state:
population moves with the fused cluster (retained index keeps the combined
count, the freed index restarts at 1), the within-cluster dispersion matrix
V excludes the between-centroid spread on fusion while cvar includes it,
and coordinates are stored raw with scales applied only inside the distance
so drifting normalization never corrupts stored centroids (cvar absorbs the
drift approximately).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from ._kernels import min_weighted_pair, nearest_weighted

__all__ = [
    "Cluster",
    "ClusterModel",
    "IngestOutcome",
    "masked_distance",
    "min_pair_distance",
    "cluster_dependent_stats",
    "validate_mask",
]


def validate_mask(mask) -> np.ndarray:
    """Return the mask as an int array after checking it flags >= 1 dim."""
    arr = np.asarray(mask, dtype=int)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("mask must be a non-empty 1-D sequence")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("mask entries must be 0 or 1")
    if not arr.any():
        raise ValueError("mask must flag at least one dimension")
    return arr


def _weights(mask: np.ndarray, scales) -> np.ndarray:
    """Per-dimension squared-distance weights mask_i / scale_i^2."""
    if scales is None:
        return mask.astype(float)
    s = np.asarray(scales, dtype=float)
    if s.shape != mask.shape:
        raise ValueError(f"scales length {s.size} != mask length {mask.size}")
    if np.any(s <= 0):
        raise ValueError("scales must be positive")
    return mask / (s * s)


def masked_distance(a, b, mask, scales=None) -> float:
    """Euclidean distance over mask-flagged dimensions, scale-normalized.

    sqrt(sum_i mask_i * ((a_i - b_i) / scale_i)^2); scales default to 1.

    Raises:
        ValueError: length mismatch or non-positive scales.
    """
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    m = validate_mask(mask)
    if av.shape != bv.shape or av.shape != m.shape:
        raise ValueError(
            f"length mismatch: a {av.shape}, b {bv.shape}, mask {m.shape}"
        )
    w = _weights(m, scales)
    diff = av - bv
    return math.sqrt(float((diff * diff) @ w))


@dataclass
class Cluster:
    """Read-only snapshot of one cluster's state."""

    centroid: np.ndarray  # (N+L,) raw-unit mean of member realizations
    per_dim_var: np.ndarray  # (N+L,) per-dimension dispersion about the centroid
    population: int
    cvar: float  # masked-distance variance of members about the centroid


@dataclass(frozen=True)
class IngestOutcome:
    """What one ingest did: seeded(k), merged(k), or fused(j, k).

    For "fused", k is the retained cluster holding the combined population
    and j is the freed slot re-seeded with the new realization.  Indices are
    0-based positions into model.clusters.
    """

    kind: str
    k: int
    j: int | None = None


class ClusterModel:
    """Mutable clustering state over realizations of fixed dimension."""

    def __init__(self, kmax: int, cdist: float, mask) -> None:
        if kmax < 2:
            raise ValueError(f"kmax must be >= 2, got {kmax}")
        if cdist <= 0:
            raise ValueError(f"cdist must be positive, got {cdist}")
        self.kmax = int(kmax)
        self.cdist = float(cdist)
        self.mask = validate_mask(mask)
        n_dims = self.mask.size
        self._centroids = np.zeros((self.kmax, n_dims))
        self._per_dim_var = np.zeros((self.kmax, n_dims))
        self._pop = np.zeros(self.kmax, dtype=np.int64)
        self._cvar = np.zeros(self.kmax)
        self._k_active = 0
        self.kcount = 0
        self.shelldist = 0.0
        self.dmax = 0.0
        self.fusion_search_count = 0

    @property
    def n_dims(self) -> int:
        return self.mask.size

    @property
    def n_clusters(self) -> int:
        return self._k_active

    @property
    def clusters(self) -> list[Cluster]:
        """Snapshots of the active clusters (arrays are copies)."""
        return [
            Cluster(
                centroid=self._centroids[k].copy(),
                per_dim_var=self._per_dim_var[k].copy(),
                population=int(self._pop[k]),
                cvar=float(self._cvar[k]),
            )
            for k in range(self._k_active)
        ]

    @property
    def populations(self) -> np.ndarray:
        return self._pop[: self._k_active].copy()

    @property
    def centroids(self) -> np.ndarray:
        return self._centroids[: self._k_active].copy()

    def ingest(self, x, scales=None) -> IngestOutcome:
        """Absorb one realization and refresh shelldist/dmax.

        Raises:
            ValueError: realization length differs from the mask length.
        """
        xv = np.asarray(x, dtype=float)
        if xv.shape != (self.n_dims,):
            raise ValueError(
                f"dimension mismatch: realization {xv.shape}, expected ({self.n_dims},)"
            )
        w = _weights(self.mask, scales)
        self.kcount += 1
        if self._k_active < self.kmax:
            k = self._k_active
            self._centroids[k] = xv
            self._pop[k] = 1
            self._k_active += 1
            outcome = IngestOutcome("seeded", k)
        else:
            active = self._centroids[: self._k_active]
            k, sdr_c = nearest_weighted(active, xv, w)
            if sdr_c > self.dmax:
                j2, k2, sdcc = min_weighted_pair(active, w)
                self.fusion_search_count += 1
                if sdr_c > sdcc:
                    self._fuse(j2, k2, w)
                    self._centroids[j2] = xv
                    self._per_dim_var[j2] = 0.0
                    self._pop[j2] = 1
                    self._cvar[j2] = 0.0
                    outcome = IngestOutcome("fused", k2, j=j2)
                else:
                    self._merge(k, xv, sdr_c)
                    outcome = IngestOutcome("merged", k)
            else:
                self._merge(k, xv, sdr_c)
                outcome = IngestOutcome("merged", k)
        self._refresh_shelldist()
        return outcome

    def _merge(self, k: int, x: np.ndarray, sdr_c: float) -> None:
        p = int(self._pop[k])
        c_new = (x + p * self._centroids[k]) / (p + 1)
        diff = c_new - x
        self._per_dim_var[k] = (diff * diff + p * self._per_dim_var[k]) / (p + 1)
        self._cvar[k] = (p * self._cvar[k] + sdr_c * sdr_c) / (p + 1)
        self._centroids[k] = c_new
        self._pop[k] = p + 1

    def _fuse(self, j: int, k: int, w: np.ndarray) -> None:
        pj, pk = int(self._pop[j]), int(self._pop[k])
        total = pj + pk
        c_fusion = (pj * self._centroids[j] + pk * self._centroids[k]) / total
        self._per_dim_var[k] = (
            pj * self._per_dim_var[j] + pk * self._per_dim_var[k]
        ) / total
        dj = self._centroids[j] - c_fusion
        dk = self._centroids[k] - c_fusion
        self._cvar[k] = (
            pj * (self._cvar[j] + float((dj * dj) @ w))
            + pk * (self._cvar[k] + float((dk * dk) @ w))
        ) / total
        self._centroids[k] = c_fusion
        self._pop[k] = total

    def _refresh_shelldist(self) -> None:
        pops = self._pop[: self._k_active]
        total = int(pops.sum())
        if total == 0:
            self.shelldist = 0.0
        else:
            self.shelldist = math.sqrt(
                float(pops @ self._cvar[: self._k_active]) / total
            )
        self.dmax = self.cdist * self.shelldist

    def to_dict(self) -> dict[str, Any]:
        """Plain-type state snapshot; from_dict restores it exactly."""
        ka = self._k_active
        return {
            "kmax": self.kmax,
            "cdist": self.cdist,
            "mask": self.mask.tolist(),
            "kcount": self.kcount,
            "shelldist": self.shelldist,
            "dmax": self.dmax,
            "fusion_search_count": self.fusion_search_count,
            "centroids": self._centroids[:ka].tolist(),
            "per_dim_var": self._per_dim_var[:ka].tolist(),
            "populations": self._pop[:ka].tolist(),
            "cvar": self._cvar[:ka].tolist(),
        }

    @classmethod
    def from_dict(cls, state: dict[str, Any]) -> "ClusterModel":
        model = cls(kmax=state["kmax"], cdist=state["cdist"], mask=state["mask"])
        ka = len(state["populations"])
        model._k_active = ka
        model._centroids[:ka] = np.asarray(state["centroids"], dtype=float)
        model._per_dim_var[:ka] = np.asarray(state["per_dim_var"], dtype=float)
        model._pop[:ka] = np.asarray(state["populations"], dtype=np.int64)
        model._cvar[:ka] = np.asarray(state["cvar"], dtype=float)
        model.kcount = int(state["kcount"])
        model.shelldist = float(state["shelldist"])
        model.dmax = float(state["dmax"])
        model.fusion_search_count = int(state["fusion_search_count"])
        return model


def min_pair_distance(model: ClusterModel, scales=None) -> tuple[int, int, float]:
    """Closest pair of cluster centroids under the model's masked metric.

    Returns 0-based (j, k, distance) with j < k; ties resolve to the
    lexicographically smallest pair.

    Raises:
        ValueError: fewer than two clusters.
    """
    if model.n_clusters < 2:
        raise ValueError("need at least two clusters")
    w = _weights(model.mask, scales)
    return min_weighted_pair(model._centroids[: model.n_clusters], w)


def cluster_dependent_stats(cluster: Cluster, mask) -> tuple[np.ndarray, np.ndarray]:
    """Centroid mean and per-dimension variance over the dependent dims.

    Slices the mask == 0 positions; an all-independent mask yields empty
    vectors.
    """
    m = validate_mask(mask)
    if cluster.centroid.shape != m.shape:
        raise ValueError(
            f"length mismatch: centroid {cluster.centroid.shape}, mask {m.shape}"
        )
    dep = m == 0
    return cluster.centroid[dep].copy(), cluster.per_dim_var[dep].copy()
