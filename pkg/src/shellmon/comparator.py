"""Incremental stream comparator with a k-sigma shell-distance match test.

The comparator watches a stream of distances d = ||X - Y|| between two
vector quantities (realizations or estimates) and maintains the running mean
(shelldist) and variance (shellvar) of that stream.  Each new distance is
matched against the shell built so far: a mismatch means the distance left
the band shelldist +/- threshold_k * sqrt(shellvar + ex^2 + ey^2), where ex
and ey are the estimation errors of X and Y (zero for raw realizations).

Two update modes are available.  Batch mode keeps exact running moments: the
variance update uses the mean from the previous step and divisor n, then the
mean absorbs the new distance, so after n observations shelldist is exactly
their arithmetic mean.  EWMA mode replaces both accumulators with
exponentially weighted ones, stored unnormalized and divided on read by the
accumulated weight alpha_weight = alpha + (1 - alpha) * alpha_weight, which
starts at 0 and climbs toward 1; this bias correction makes a constant
stream report exactly that constant from the first observation.

The first two observations are absorbed without a match test (no meaningful
spread exists yet).  A frozen comparator keeps testing but stops updating,
which turns it into a slow-trend detector against a fixed reference; the
optional match-only mode skips absorbing mismatched distances so outliers do
not widen the shell they violated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .shell_stats import ShellEstimate

__all__ = ["Comparator", "MatchResult"]

_MODES = ("batch", "ewma")


@dataclass(frozen=True)
class MatchResult:
    """Outcome of one comparison.

    shelldist/shellvar/bound are the values the match decision was made
    against, i.e. the shell before this distance was absorbed; read the
    comparator itself for the post-update state.  bound is
    threshold_k * sqrt(shellvar + ex^2 + ey^2) and is reported even for the
    first two observations, where match is forced true.
    """

    d: float
    match: bool
    shelldist: float
    shellvar: float
    bound: float

    @property
    def deviation(self) -> float:
        """Signed distance excess over the shell mean."""
        return self.d - self.shelldist


class Comparator:
    """Streaming mean/variance tracker with k-sigma mismatch detection."""

    def __init__(
        self,
        mode: str = "batch",
        threshold_k: float = 4.0,
        alpha: float | None = None,
        update_on_match_only: bool = False,
    ) -> None:
        if mode not in _MODES:
            raise ValueError(f"unknown mode {mode!r}, expected one of {_MODES}")
        if threshold_k <= 0:
            raise ValueError(f"threshold_k must be positive, got {threshold_k}")
        if mode == "ewma":
            if alpha is None or not 0.0 < alpha < 1.0:
                raise ValueError(f"ewma mode needs alpha in (0, 1), got {alpha}")
        elif alpha is not None:
            raise ValueError("alpha only applies to ewma mode")
        self.mode = mode
        self.threshold_k = float(threshold_k)
        self.alpha = float(alpha) if alpha is not None else None
        self.update_on_match_only = bool(update_on_match_only)
        self.m = 0  # comparisons processed, matched or not
        self.frozen = False
        self.alpha_weight = 0.0
        self._n = 0  # observations absorbed into the shell
        self._mean = 0.0  # running mean, or unnormalized ewma accumulator
        self._var = 0.0  # running variance, or unnormalized ewma accumulator

    @property
    def shelldist(self) -> float:
        if self.mode == "ewma":
            return self._mean / self.alpha_weight if self.alpha_weight > 0 else 0.0
        return self._mean

    @property
    def shellvar(self) -> float:
        if self.mode == "ewma":
            return self._var / self.alpha_weight if self.alpha_weight > 0 else 0.0
        return self._var

    @property
    def shell(self) -> ShellEstimate:
        weight = self.alpha_weight if self.mode == "ewma" else float(self._n)
        return ShellEstimate(
            mu=self.shelldist, var=self.shellvar, weight=weight, frozen=self.frozen
        )

    def observe(self, d: float, ex: float = 0.0, ey: float = 0.0) -> MatchResult:
        """Process one precomputed distance.

        The match test runs only once two observations are in (the shell has
        no spread before that); the shell then absorbs the distance unless
        the comparator is frozen or match-only mode rejects a mismatch.

        Raises:
            ValueError: negative d, ex, or ey, or non-finite d.
        """
        d = float(d)
        if not math.isfinite(d) or d < 0:
            raise ValueError(f"distance must be finite and >= 0, got {d}")
        if ex < 0 or ey < 0:
            raise ValueError(f"estimate errors must be >= 0, got ex={ex}, ey={ey}")
        prev_mean = self.shelldist
        prev_var = self.shellvar
        bound = self.threshold_k * math.sqrt(prev_var + ex * ex + ey * ey)
        match = True if self.m < 2 else abs(d - prev_mean) <= bound
        if not self.frozen and (match or not self.update_on_match_only):
            self._absorb(d, prev_mean)
        self.m += 1
        return MatchResult(
            d=d, match=match, shelldist=prev_mean, shellvar=prev_var, bound=bound
        )

    def compare(self, x, y, ex: float = 0.0, ey: float = 0.0) -> MatchResult:
        """Compare two equal-length vectors by their Euclidean distance.

        Raises:
            ValueError: dimension mismatch.
        """
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        ya = np.atleast_1d(np.asarray(y, dtype=float))
        if xa.shape != ya.shape:
            raise ValueError(f"dimension mismatch: {xa.shape} vs {ya.shape}")
        return self.observe(float(np.linalg.norm(xa - ya)), ex=ex, ey=ey)

    def _absorb(self, d: float, prev_mean: float) -> None:
        if self.mode == "ewma":
            a = self.alpha
            self.alpha_weight = a + (1.0 - a) * self.alpha_weight
            if self._n >= 1:
                diff = d - prev_mean
                self._var = a * diff * diff + (1.0 - a) * self._var
            self._mean = a * d + (1.0 - a) * self._mean
        else:
            n = self._n
            if n >= 1:
                diff = d - self._mean
                self._var = (diff * diff + (n - 1) * self._var) / n
            self._mean = (d + n * self._mean) / (n + 1)
        self._n += 1

    def freeze(self) -> None:
        """Lock the shell as a fixed reference for slow-trend detection.

        Raises:
            ValueError: fewer than two observations ("insufficient history").
        """
        if self.m < 2:
            raise ValueError("insufficient history")
        self.frozen = True

    def scale_variance(self, factor: float) -> None:
        """Rescale the shell variance by a known estimator-bias factor.

        A training window of serially correlated distances (for example
        from an exponentially weighted average) underestimates the marginal
        variance by a computable shrinkage; callers that know the
        correlation structure apply the correction here before freezing.

        Raises:
            ValueError: non-positive or non-finite factor, or a frozen shell.
        """
        if not math.isfinite(factor) or factor <= 0.0:
            raise ValueError(f"factor must be positive and finite, got {factor}")
        if self.frozen:
            raise ValueError("cannot rescale a frozen shell")
        self._var *= factor

    def to_dict(self) -> dict[str, Any]:
        """Plain-scalar state snapshot; from_dict restores it exactly."""
        return {
            "mode": self.mode,
            "threshold_k": self.threshold_k,
            "alpha": self.alpha,
            "update_on_match_only": self.update_on_match_only,
            "m": self.m,
            "frozen": self.frozen,
            "alpha_weight": self.alpha_weight,
            "n": self._n,
            "mean": self._mean,
            "var": self._var,
        }

    @classmethod
    def from_dict(cls, state: dict[str, Any]) -> "Comparator":
        c = cls(
            mode=state["mode"],
            threshold_k=state["threshold_k"],
            alpha=state["alpha"],
            update_on_match_only=state["update_on_match_only"],
        )
        c.m = int(state["m"])
        c.frozen = bool(state["frozen"])
        c.alpha_weight = float(state["alpha_weight"])
        c._n = int(state["n"])
        c._mean = float(state["mean"])
        c._var = float(state["var"])
        return c
