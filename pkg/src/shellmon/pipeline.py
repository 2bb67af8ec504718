"""End-to-end monitoring: normalization, manifold model, and alarms.

A monitor watches a stream of raw realizations whose columns are split by a
roles vector into independent (process inputs) and dependent (measured
responses) dimensions.  Each step normalizes the realization, maintains a
reference for the expected response, and feeds the realization-to-reference
distance to a streaming comparator; leaving the shell band
|d - shelldist| > threshold_k * sqrt(shellvar + sigma_M^2) raises an alarm.

Two references run side by side:

* fast path: the last realization against the current reference.  With
  independent dimensions present ("manifold mode") the reference is a
  kriging interpolation of the cluster model at the realization's operating
  point, refit every refit_interval ingests, and sigma_M is the kriging
  uncertainty.  With no independent dimensions ("point mode") the reference
  is the running mean of all dependent vectors and sigma_M is that mean's
  own noise level, shrinking as the population grows.
* trend path: a reference frozen at the end of warm-up (a copy of the
  actualized average at that moment) against the exponentially weighted
  actualized average as it keeps moving.  Single realizations never leave
  the shell under a slow drift, but the averaged response walks away from
  the frozen reference long before any fast alarm.  Right after the freeze
  the two sides are copies of each other, so their distance climbs from
  zero to a steady plateau as the moving average forgets the warm-up data;
  the trend shell therefore skips that transient, trains on the plateau
  distances, and starts alarming only once its own statistics freeze.
  Because the averaging makes successive plateau distances serially
  correlated, the trained variance is corrected before the freeze for the
  two standard small-window effects: the shrinkage of a sample variance
  over correlated data, and the sampling error of the trained mean, which
  the frozen bound must also cover.

Normalization is dynamic at first (per-dimension scale = observed range,
with a tiny floor) and freezes as soon as comparisons arm, after
min(warmup, refit_interval) realizations: the shell statistics live in
normalized units, so scales that kept growing under the shells would
systematically deflate later distances and smear that drift into the shell
variance.  Reference vectors are stored in raw units and normalized at
use; per-dimension affine normalization commutes with averaging, so this
stays exact however scales moved during the dynamic window.

File formats owned by this module: realization CSV (header row naming
channels, one realization per row), roles JSON ({"independent": [names],
"dependent": [names]}, every CSV column assigned exactly once), model JSON
(versioned, "schema": 1), and the alarm JSON Lines stream (fixed field
order: seq, type, d, shelldist, sigma_m, bound, z, direction).
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import kriging
from .clustering import ClusterModel
from .comparator import Comparator

__all__ = [
    "Normalizer",
    "MonitorConfig",
    "MonitorState",
    "AlarmEvent",
    "save",
    "load",
    "load_realizations",
    "load_roles",
]

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class Normalizer:
    """Per-dimension dynamic range normalization.

    observe() widens the running [min, max] with the value and then maps it
    to (x - min) / scale with scale = max(range, floor); transform() applies
    the current scales without updating them.  The floor 1e-12 * (|max| + 1)
    keeps constant channels finite (they map to 0).
    """

    def __init__(self, n_dims: int) -> None:
        if n_dims < 1:
            raise ValueError(f"need n_dims >= 1, got {n_dims}")
        self.n_dims = n_dims
        self.count = 0
        self._mins = np.zeros(n_dims)
        self._maxs = np.zeros(n_dims)

    @property
    def mins(self) -> np.ndarray:
        return self._mins.copy()

    @property
    def maxs(self) -> np.ndarray:
        return self._maxs.copy()

    @property
    def scales(self) -> np.ndarray:
        if self.count == 0:
            raise ValueError("no observations")
        floor = 1e-12 * (np.abs(self._maxs) + 1.0)
        return np.maximum(self._maxs - self._mins, floor)

    def observe(self, x) -> np.ndarray:
        """Update ranges with x, then return it normalized."""
        xv = self._check(x)
        if self.count == 0:
            self._mins = xv.copy()
            self._maxs = xv.copy()
        else:
            np.minimum(self._mins, xv, out=self._mins)
            np.maximum(self._maxs, xv, out=self._maxs)
        self.count += 1
        return (xv - self._mins) / self.scales

    def transform(self, x) -> np.ndarray:
        """Normalize x with the current ranges, without updating them."""
        return (self._check(x) - self._mins) / self.scales

    def _check(self, x) -> np.ndarray:
        xv = np.asarray(x, dtype=float)
        if xv.shape != (self.n_dims,):
            raise ValueError(f"expected {self.n_dims} values, got shape {xv.shape}")
        if not np.all(np.isfinite(xv)):
            raise ValueError("non-finite input")
        return xv

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": self.count,
            "mins": self._mins.tolist(),
            "maxs": self._maxs.tolist(),
        }

    @classmethod
    def from_dict(cls, state: dict[str, Any], n_dims: int) -> "Normalizer":
        norm = cls(n_dims)
        norm.count = int(state["count"])
        norm._mins = np.asarray(state["mins"], dtype=float)
        norm._maxs = np.asarray(state["maxs"], dtype=float)
        return norm


@dataclass
class MonitorConfig:
    """Tunables for a monitor.

    threshold_k is the shared alarm multiplier; warmup is the initial
    history length M0 (the initial reference freezes after that many
    realizations); alpha drives the actualized-average smoothing and
    thereby the trend-shell schedule (its transient skip and training
    window scale with 1/alpha); refit_interval is the kriging refresh
    cadence in ingests and, in point mode, the reference population
    required before fast comparisons begin (a reference averaged over too
    few realizations would smear its own error into the shell statistics);
    min(warmup, refit_interval) is also the dynamic-normalization window;
    kmax/cdist configure the cluster model in manifold mode.
    """

    threshold_k: float = 4.0
    warmup: int = 500
    alpha: float = 0.01
    refit_interval: int = 100
    kmax: int = 50
    cdist: float = 1.5

    def __post_init__(self) -> None:
        if self.threshold_k <= 0:
            raise ValueError(f"threshold_k must be positive, got {self.threshold_k}")
        if self.warmup < 3:
            raise ValueError(f"warmup must be >= 3, got {self.warmup}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.refit_interval < 1:
            raise ValueError(
                f"refit_interval must be >= 1, got {self.refit_interval}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "threshold_k": self.threshold_k,
            "warmup": self.warmup,
            "alpha": self.alpha,
            "refit_interval": self.refit_interval,
            "kmax": self.kmax,
            "cdist": self.cdist,
        }


@dataclass(frozen=True)
class AlarmEvent:
    """One emitted alarm; emitted iff |d - shelldist| > bound.

    sigma_m is the combined estimate-error term sqrt(ex^2 + ey^2) that was
    folded into the bound; z standardizes the deviation by
    sqrt(shellvar + sigma_m^2).
    """

    seq: int
    type: str  # "fast" | "trend"
    d: float
    shelldist: float
    sigma_m: float
    bound: float
    z: float
    direction: str  # "above" | "below"

    def to_json(self) -> str:
        return json.dumps(
            {
                "seq": self.seq,
                "type": self.type,
                "d": self.d,
                "shelldist": self.shelldist,
                "sigma_m": self.sigma_m,
                "bound": self.bound,
                "z": self.z,
                "direction": self.direction,
            }
        )


class MonitorState:
    """Mutable state of one monitored asset; ingest realizations in order."""

    def __init__(self, roles, config: MonitorConfig | None = None) -> None:
        roles_arr = np.asarray(roles, dtype=int)
        if roles_arr.ndim != 1 or roles_arr.size == 0:
            raise ValueError("roles must be a non-empty 1-D sequence of 0/1")
        if not np.all((roles_arr == 0) | (roles_arr == 1)):
            raise ValueError("roles entries must be 0 (dependent) or 1 (independent)")
        if not (roles_arr == 0).any():
            raise ValueError("roles must include at least one dependent dimension")
        self.roles = roles_arr
        self.config = config if config is not None else MonitorConfig()
        self.mode = "manifold" if roles_arr.any() else "point"
        self.seq = 0
        n_dims = roles_arr.size
        self.normalizer = Normalizer(n_dims)
        self.fast = Comparator(mode="batch", threshold_k=self.config.threshold_k)
        self.trend = Comparator(mode="batch", threshold_k=self.config.threshold_k)
        self.clusters = (
            ClusterModel(self.config.kmax, self.config.cdist, roles_arr)
            if self.mode == "manifold"
            else None
        )
        self.kriging_model: kriging.KrigingModel | None = None
        n_dep = int((roles_arr == 0).sum())
        # batch reference over raw dependent vectors (single-pass moments)
        self._ref_count = 0
        self._ref_mean = np.zeros(n_dep)
        self._ref_m2 = np.zeros(n_dep)
        # actualized average: unnormalized ewma accumulator over raw vectors
        self._act_s = np.zeros(n_dep)
        self._act_aw = 0.0
        self._act_sw2 = 0.0
        self.initial_reference: np.ndarray | None = None
        self.ex_init: float = 0.0
        # transient trace of the most recent fast comparison (not persisted)
        self.last_fast_result = None

    @property
    def warmed_up(self) -> bool:
        return self.seq >= self.config.warmup

    @property
    def norm_freeze(self) -> int:
        """Realizations after which the normalization ranges stop moving.

        Comparisons arm once refit_interval realizations are in (kriging fit
        in manifold mode, reference population in point mode), and every
        distance a shell accumulates must be measured with one fixed set of
        scales, so the ranges freeze at that same boundary.
        """
        return min(self.config.warmup, self.config.refit_interval)

    @property
    def actualized_average(self) -> np.ndarray:
        """Current exponentially weighted mean of raw dependent vectors."""
        if self._act_aw == 0.0:
            raise ValueError("no realizations")
        return self._act_s / self._act_aw

    @property
    def effective_samples(self) -> float:
        """Effective sample count (sum w)^2 / sum w^2 of the actualized average."""
        if self._act_sw2 == 0.0:
            return 0.0
        return self._act_aw * self._act_aw / self._act_sw2

    @property
    def trend_skip(self) -> int:
        """Post-warm-up steps ignored by the trend shell.

        The initial reference starts as a copy of the actualized average, so
        their distance is zero until the moving average forgets the warm-up
        data; 3/alpha steps let that transient decay to a few percent.
        """
        return math.ceil(3.0 / self.config.alpha)

    @property
    def trend_train(self) -> int:
        """Plateau distances absorbed by the trend shell before it freezes.

        The averaged response decorrelates only every ~1/alpha steps, so the
        window spans ten such periods: shorter windows estimate the plateau
        mean and spread from a handful of effective samples, and an unlucky
        draw then leaves the frozen shell permanently misplaced.
        """
        return max(self.config.warmup, math.ceil(10.0 / self.config.alpha))

    @property
    def trend_var_correction(self) -> float:
        """Variance multiplier undoing the training window's serial bias.

        The actualized average is an exponentially weighted mean, so
        successive trend distances carry autocorrelation rho_l = (1-alpha)^l.
        Over a window of T of them, with S = sum_{l<T} (1 - l/T) rho_l, two
        standard corrections follow: the sample variance shrinks by
        b = 1 - 2S/T, and the trained mean carries sampling variance
        (1 + 2S)/T times the marginal variance.  The frozen bound must cover
        |d - trained mean|, whose variance is the marginal variance plus
        that of the mean, so the trained variance is scaled by
        (1/b) * (1 + (1 + 2S)/T).  The schedule keeps T >= 10/alpha, which
        bounds b away from zero (~0.82 at T = 10/alpha).
        """
        t = self.trend_train
        lags = np.arange(1.0, t)
        rho = (1.0 - self.config.alpha) ** lags
        s = float(np.sum((1.0 - lags / t) * rho))
        b = 1.0 - 2.0 * s / t
        return (1.0 + (1.0 + 2.0 * s) / t) / b

    def _dep_scales(self) -> np.ndarray:
        return self.normalizer.scales[self.roles == 0]

    def monitor_step(self, x) -> AlarmEvent | None:
        """Process one raw realization on the fast path.

        Normalizes (updating ranges only inside the dynamic window), trains
        the manifold model or the running reference, compares the
        realization to the interpolated/averaged reference, updates the
        actualized average, and on the warm-up boundary freezes the initial
        reference and restarts the trend shell.  Steps without a usable
        reference only train.
        """
        in_warmup = self.seq < self.config.warmup
        x_norm = (
            self.normalizer.observe(x)
            if self.seq < self.norm_freeze
            else self.normalizer.transform(x)
        )
        self.seq += 1
        x_raw = np.asarray(x, dtype=float)
        dep = self.roles == 0
        x_dep_raw = x_raw[dep]
        x_dep_norm = x_norm[dep]

        alarm: AlarmEvent | None = None
        if self.mode == "manifold":
            self.clusters.ingest(x_raw, scales=self.normalizer.scales)
            if (
                self.clusters.kcount % self.config.refit_interval == 0
                or self.seq == self.config.warmup
            ):
                self._refit_kriging()
            if self.kriging_model is not None:
                alarm = self._compare_fast(x_raw)
        elif self._ref_count >= self.config.refit_interval:
            ref_norm = (self._ref_mean - self.normalizer.mins[dep]) / self._dep_scales()
            d = float(np.linalg.norm(x_dep_norm - ref_norm))
            alarm = self._observe_fast(d, self._point_sigma_m())

        self._update_reference(x_dep_raw)
        self._update_actualized(x_dep_raw)
        if in_warmup:
            self._train_trend()
        if self.seq == self.config.warmup:
            self._freeze_reference()
        return alarm

    def _compare_fast(self, x_raw: np.ndarray) -> AlarmEvent | None:
        # The kriging frame is raw/scale (fit divides raw centroids by the
        # scales, with no min shift), so the query and the residual must be
        # built in that frame; mixing in the normalizer's min offset would
        # bias every distance by a constant.
        s = self.normalizer.scales
        ind = self.roles == 1
        try:
            res = kriging.interpolate(self.kriging_model, x_raw[ind] / s[ind])
        except ValueError as exc:
            logger.warning("interpolation failed at seq %d: %s", self.seq, exc)
            return None
        dep = self.roles == 0
        d = float(np.linalg.norm(x_raw[dep] / s[dep] - res.estimate))
        return self._observe_fast(d, res.sigma_M)

    def _observe_fast(self, d: float, sigma_m: float) -> AlarmEvent | None:
        result = self.fast.observe(d, ex=sigma_m)
        self.last_fast_result = result
        return self._event("fast", result, sigma_m)

    def _event(self, kind: str, result, sigma_m: float) -> AlarmEvent | None:
        if result.match:
            return None
        denom = result.bound / self.config.threshold_k
        deviation = result.d - result.shelldist
        z = deviation / denom if denom > 0 else math.copysign(math.inf, deviation)
        return AlarmEvent(
            seq=self.seq,
            type=kind,
            d=result.d,
            shelldist=result.shelldist,
            sigma_m=sigma_m,
            bound=result.bound,
            z=z,
            direction="above" if deviation > 0 else "below",
        )

    def _point_sigma_m(self) -> float:
        if self._ref_count < 2:
            return 0.0
        var_norm = (self._ref_m2 / self._ref_count) / self._dep_scales() ** 2
        return math.sqrt(float(var_norm.sum()) / self._ref_count)

    def _update_reference(self, x_dep_raw: np.ndarray) -> None:
        self._ref_count += 1
        delta = x_dep_raw - self._ref_mean
        self._ref_mean = self._ref_mean + delta / self._ref_count
        self._ref_m2 = self._ref_m2 + delta * (x_dep_raw - self._ref_mean)

    def _update_actualized(self, x_dep_raw: np.ndarray) -> None:
        a = self.config.alpha
        self._act_aw = a + (1.0 - a) * self._act_aw
        self._act_sw2 = a * a + (1.0 - a) * (1.0 - a) * self._act_sw2
        self._act_s = a * x_dep_raw + (1.0 - a) * self._act_s

    def _trend_errors(self) -> tuple[float, float]:
        """Estimate-error terms for the two sides of the trend comparison.

        Each is the shell mean scaled by sqrt(1 / (M (M - 1))) with M the
        (effective) population behind the estimate; negligible for long
        histories but widens the bound honestly for short ones.
        """
        mu = self.fast.shelldist
        if self.initial_reference is not None:
            ex = self.ex_init
        else:
            m = self._ref_count
            ex = mu * math.sqrt(1.0 / (m * (m - 1))) if m >= 2 else 0.0
        ess = self.effective_samples
        ey = mu * math.sqrt(1.0 / (ess * (ess - 1.0))) if ess > 1.000001 else 0.0
        return ex, ey

    def _trend_distance(self, reference_raw: np.ndarray) -> float:
        diff = (reference_raw - self.actualized_average) / self._dep_scales()
        return float(np.linalg.norm(diff))

    def _train_trend(self) -> None:
        if self._ref_count < 2:
            return
        d = self._trend_distance(self._ref_mean)
        ex, ey = self._trend_errors()
        self.trend.observe(d, ex=ex, ey=ey)

    def _freeze_reference(self) -> None:
        self.initial_reference = self.actualized_average.copy()
        ess = self.effective_samples
        self.ex_init = (
            self.fast.shelldist * math.sqrt(1.0 / (ess * (ess - 1.0)))
            if ess > 1.000001
            else 0.0
        )
        # The warm-up trend shell tracked two co-evolving averages; the real
        # comparison (frozen reference vs actualized average) starts fresh.
        self.trend = Comparator(mode="batch", threshold_k=self.config.threshold_k)

    def _refit_kriging(self) -> None:
        if self.clusters.n_clusters < 2:
            return
        try:
            self.kriging_model = kriging.fit(
                self.clusters.clusters, self.roles, scales=self.normalizer.scales
            )
        except ValueError as exc:
            logger.warning("kriging refit skipped at seq %d: %s", self.seq, exc)

    def trend_step(self) -> AlarmEvent | None:
        """Compare the frozen initial reference to the actualized average.

        For the first trend_skip steps after warm-up the distance is still
        dominated by the reference/average decorrelation transient and is
        ignored; the next trend_train distances train the trend shell; once
        it freezes, every mismatch raises a trend alarm.

        Raises:
            ValueError: warm-up not complete ("reference not frozen").
        """
        if self.initial_reference is None:
            raise ValueError("reference not frozen")
        if self.seq < self.config.warmup + self.trend_skip:
            return None
        d = self._trend_distance(self.initial_reference)
        ex, ey = self._trend_errors()
        result = self.trend.observe(d, ex=ex, ey=ey)
        if self.trend.frozen:
            return self._event("trend", result, math.sqrt(ex * ex + ey * ey))
        if self.trend.m >= self.trend_train:
            # undo the serial-correlation bias of the trained variance before
            # the shell becomes the permanent alarm reference
            self.trend.scale_variance(self.trend_var_correction)
            self.trend.freeze()
        return None

    def step(self, x) -> list[AlarmEvent]:
        """monitor_step plus, once warmed up, a trend_step; returns alarms."""
        events = []
        fast = self.monitor_step(x)
        if fast is not None:
            events.append(fast)
        if self.initial_reference is not None:
            trend = self.trend_step()
            if trend is not None:
                events.append(trend)
        return events

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "mode": self.mode,
            "roles": self.roles.tolist(),
            "config": self.config.to_dict(),
            "seq": self.seq,
            "normalizer": self.normalizer.to_dict(),
            "fast": self.fast.to_dict(),
            "trend": self.trend.to_dict(),
            "reference": {
                "count": self._ref_count,
                "mean": self._ref_mean.tolist(),
                "m2": self._ref_m2.tolist(),
            },
            "actualized": {
                "s": self._act_s.tolist(),
                "aw": self._act_aw,
                "sw2": self._act_sw2,
            },
            "initial_reference": (
                None
                if self.initial_reference is None
                else self.initial_reference.tolist()
            ),
            "ex_init": self.ex_init,
            "clusters": None if self.clusters is None else self.clusters.to_dict(),
            "kriging": (
                None if self.kriging_model is None else self.kriging_model.to_dict()
            ),
        }

    @classmethod
    def from_dict(cls, state: dict[str, Any]) -> "MonitorState":
        if state.get("schema") != SCHEMA_VERSION:
            raise ValueError(
                f"unsupported model schema {state.get('schema')!r}, "
                f"expected {SCHEMA_VERSION}"
            )
        config = MonitorConfig(**state["config"])
        monitor = cls(state["roles"], config)
        monitor.seq = int(state["seq"])
        monitor.normalizer = Normalizer.from_dict(
            state["normalizer"], monitor.roles.size
        )
        monitor.fast = Comparator.from_dict(state["fast"])
        monitor.trend = Comparator.from_dict(state["trend"])
        ref = state["reference"]
        monitor._ref_count = int(ref["count"])
        monitor._ref_mean = np.asarray(ref["mean"], dtype=float)
        monitor._ref_m2 = np.asarray(ref["m2"], dtype=float)
        act = state["actualized"]
        monitor._act_s = np.asarray(act["s"], dtype=float)
        monitor._act_aw = float(act["aw"])
        monitor._act_sw2 = float(act["sw2"])
        if state["initial_reference"] is not None:
            monitor.initial_reference = np.asarray(
                state["initial_reference"], dtype=float
            )
        monitor.ex_init = float(state["ex_init"])
        if state["clusters"] is not None:
            monitor.clusters = ClusterModel.from_dict(state["clusters"])
        if state["kriging"] is not None:
            monitor.kriging_model = kriging.KrigingModel.from_dict(state["kriging"])
        return monitor


def save(state: MonitorState, path) -> None:
    """Write the monitor state as versioned JSON; loading restores it exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state.to_dict(), fh, indent=2)
        fh.write("\n")


def load(path) -> MonitorState:
    """Read a monitor state written by save().

    Raises:
        ValueError: unreadable JSON or unsupported schema version.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            state = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"corrupt model file {path}: {exc}") from exc
    if not isinstance(state, dict):
        raise ValueError(f"corrupt model file {path}: expected a JSON object")
    return MonitorState.from_dict(state)


def load_realizations(path) -> tuple[list[str], np.ndarray]:
    """Read a realization CSV: header row of channel names, float rows.

    Raises:
        ValueError: missing header, ragged rows, or non-numeric cells; the
            message names the offending line.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            names = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected a header row") from None
        names = [n.strip() for n in names]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(names):
                raise ValueError(
                    f"{path}:{lineno}: expected {len(names)} columns, got {len(row)}"
                )
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric value") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return names, np.asarray(rows, dtype=float)


def load_roles(path, names: list[str]) -> np.ndarray:
    """Read a roles JSON and return the 0/1 vector aligned to the CSV columns.

    The file maps {"independent": [names], "dependent": [names]}; every CSV
    column must appear in exactly one list.

    Raises:
        ValueError: malformed file, unknown names, or unassigned columns.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"corrupt roles file {path}: {exc}") from exc
    if not isinstance(spec, dict):
        raise ValueError(f"{path}: expected a JSON object")
    independent = set(spec.get("independent", []))
    dependent = set(spec.get("dependent", []))
    both = independent & dependent
    if both:
        raise ValueError(f"{path}: columns in both roles: {sorted(both)}")
    unknown = (independent | dependent) - set(names)
    if unknown:
        raise ValueError(f"{path}: unknown columns: {sorted(unknown)}")
    missing = [n for n in names if n not in independent and n not in dependent]
    if missing:
        raise ValueError(f"{path}: columns without a role: {missing}")
    return np.asarray([1 if n in independent else 0 for n in names], dtype=int)


def roles_path_for(csv_path) -> Path:
    """Conventional sidecar path for a roles file next to a CSV."""
    p = Path(csv_path)
    return p.with_suffix(".roles.json")
