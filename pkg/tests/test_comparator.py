"""Tests for the incremental distance comparator."""

from __future__ import annotations

import math

import numpy as np
import pytest

from shellmon.comparator import Comparator


class TestBatchHandTrace:
    """The documented batch trace (10, 10.5, 10, 30)."""

    def test_running_statistics(self):
        """Means and variances follow the incremental recurrences exactly."""
        c = Comparator(mode="batch")
        c.observe(10.0)
        assert c.shelldist == pytest.approx(10.0, abs=1e-10)
        assert c.shellvar == pytest.approx(0.0, abs=1e-10)
        c.observe(10.5)
        assert c.shelldist == pytest.approx(10.25, abs=1e-10)
        assert c.shellvar == pytest.approx(0.25, abs=1e-10)
        result = c.observe(10.0)
        assert result.match is True
        assert c.shellvar == pytest.approx(0.15625, abs=1e-10)
        assert c.shelldist == pytest.approx(10.16666666666667, abs=1e-10)

    def test_outlier_mismatch(self):
        """The fourth value 30 breaks the four-sigma band."""
        c = Comparator(mode="batch")
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        result = c.observe(30.0)
        assert result.match is False
        assert result.bound == pytest.approx(
            4.0 * math.sqrt(0.15625), abs=1e-10
        )
        assert result.bound == pytest.approx(1.5811388300841898, abs=1e-10)

    def test_result_reports_pre_update_shell(self):
        """The match decision is made against the shell before absorption."""
        c = Comparator(mode="batch")
        c.observe(10.0)
        c.observe(10.5)
        result = c.observe(10.0)
        assert result.shelldist == pytest.approx(10.25, abs=1e-12)
        assert result.shellvar == pytest.approx(0.25, abs=1e-12)
        assert result.deviation == pytest.approx(-0.25, abs=1e-12)


class TestBatchMoments:
    """Batch mode reproduces exact population moments."""

    def test_mean_is_exact_variance_is_close(self):
        """shelldist is the exact mean; shellvar tracks the population
        variance closely but not exactly, because each squared deviation is
        taken against the mean available at that step."""
        rng = np.random.default_rng(1)
        data = rng.uniform(5.0, 15.0, size=200)
        c = Comparator(mode="batch", threshold_k=50.0)
        for d in data:
            c.observe(float(d))
        assert c.shelldist == pytest.approx(float(data.mean()), rel=1e-12)
        assert c.shellvar == pytest.approx(float(data.var()), rel=0.10)
        assert c.m == 200

    def test_first_two_always_match(self):
        """No spread exists before the second observation, so no test runs."""
        c = Comparator(mode="batch")
        assert c.observe(1.0).match is True
        assert c.observe(1000.0).match is True
        # the two-point shell is wide (variance 999^2), so only a far
        # outlier can leave it
        assert c.observe(1e9).match is False


class TestEwmaMode:
    """Exponentially weighted variant with bias-corrected read-out."""

    def test_constant_stream_reports_constant(self):
        """The weight correction makes a constant stream read back exactly."""
        c = Comparator(mode="ewma", alpha=0.1)
        for _ in range(5):
            c.observe(7.5)
        assert c.shelldist == pytest.approx(7.5, rel=1e-12)
        assert c.shellvar == pytest.approx(0.0, abs=1e-12)

    def test_weight_recurrence(self):
        """alpha_weight climbs as alpha + (1-alpha)*alpha_weight from zero."""
        c = Comparator(mode="ewma", alpha=0.5)
        c.observe(10.0)
        assert c.alpha_weight == pytest.approx(0.5, rel=1e-12)
        c.observe(12.0)
        assert c.alpha_weight == pytest.approx(0.75, rel=1e-12)
        assert c.shelldist == pytest.approx(11.333333333333334, rel=1e-12)

    def test_tracks_level_changes(self):
        """Recent observations dominate the smoothed shell."""
        c = Comparator(mode="ewma", alpha=0.2, threshold_k=100.0)
        for _ in range(50):
            c.observe(10.0)
        for _ in range(50):
            c.observe(20.0)
        assert abs(c.shelldist - 20.0) < 0.01

    def test_requires_alpha(self):
        """EWMA mode needs a smoothing factor strictly inside (0, 1)."""
        with pytest.raises(ValueError, match="alpha"):
            Comparator(mode="ewma")
        with pytest.raises(ValueError, match="alpha"):
            Comparator(mode="ewma", alpha=1.0)

    def test_batch_rejects_alpha(self):
        """Batch mode takes no smoothing factor."""
        with pytest.raises(ValueError, match="alpha only applies"):
            Comparator(mode="batch", alpha=0.2)


class TestFreeze:
    """Frozen comparators test without learning."""

    def test_frozen_shell_is_immutable(self):
        """Observations after freeze leave the shell untouched."""
        c = Comparator(mode="batch")
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        c.freeze()
        mu, var = c.shelldist, c.shellvar
        c.observe(50.0)
        assert c.shelldist == mu
        assert c.shellvar == var

    def test_frozen_still_tests(self):
        """A frozen comparator keeps flagging mismatches."""
        c = Comparator(mode="batch")
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        c.freeze()
        assert c.observe(10.1).match is True
        assert c.observe(30.0).match is False

    def test_detects_slow_trend(self):
        """A frozen shell flags a drift that a live one would absorb."""
        live = Comparator(mode="batch")
        frozen = Comparator(mode="batch")
        rng = np.random.default_rng(2)
        for i in range(100):
            d = 10.0 + rng.normal(0.0, 0.1)
            live.observe(d)
            frozen.observe(d)
        frozen.freeze()
        drift_flagged = {"live": False, "frozen": False}
        for i in range(2000):
            d = 10.0 + 0.002 * i + float(rng.normal(0.0, 0.1))
            if not live.observe(d).match:
                drift_flagged["live"] = True
            if not frozen.observe(d).match:
                drift_flagged["frozen"] = True
        assert drift_flagged["frozen"] is True
        assert drift_flagged["live"] is False

    def test_freeze_needs_history(self):
        """Freezing before two observations is an error."""
        c = Comparator(mode="batch")
        c.observe(1.0)
        with pytest.raises(ValueError, match="insufficient history"):
            c.freeze()


class TestVarianceRescaling:
    """Known estimator biases can be corrected before freezing."""

    def test_variance_scales_by_factor(self):
        """The shell variance multiplies by the given factor exactly."""
        c = Comparator(mode="batch")
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        var = c.shellvar
        c.scale_variance(1.5)
        assert c.shellvar == pytest.approx(1.5 * var)
        assert c.shelldist == pytest.approx(61.0 / 6.0)

    def test_rescaled_shell_widens_the_band(self):
        """A corrected variance admits distances the raw shell rejects."""
        raw = Comparator(mode="batch", threshold_k=2.0)
        wide = Comparator(mode="batch", threshold_k=2.0)
        for d in (10.0, 10.5, 10.0):
            raw.observe(d)
            wide.observe(d)
        wide.scale_variance(9.0)
        raw.freeze()
        wide.freeze()
        probe = raw.shelldist + 2.5 * math.sqrt(raw.shellvar)
        assert raw.observe(probe).match is False
        assert wide.observe(probe).match is True

    def test_frozen_shell_rejects_rescaling(self):
        """Corrections belong to training; a frozen shell is immutable."""
        c = Comparator(mode="batch")
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        c.freeze()
        with pytest.raises(ValueError, match="frozen"):
            c.scale_variance(2.0)

    def test_rejects_bad_factor(self):
        """Non-positive or non-finite factors are errors."""
        c = Comparator(mode="batch")
        c.observe(1.0)
        for factor in (0.0, -1.0, float("nan"), float("inf")):
            with pytest.raises(ValueError, match="factor"):
                c.scale_variance(factor)


class TestMatchOnlyUpdates:
    """Optionally keep mismatched distances out of the shell."""

    def test_outlier_not_absorbed(self):
        """A mismatch leaves the shell stats untouched in match-only mode."""
        c = Comparator(mode="batch", update_on_match_only=True)
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        mu, var = c.shelldist, c.shellvar
        result = c.observe(30.0)
        assert result.match is False
        assert c.shelldist == mu
        assert c.shellvar == var

    def test_matching_values_still_absorbed(self):
        """In-band distances keep training the shell."""
        c = Comparator(mode="batch", update_on_match_only=True)
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        mu = c.shelldist
        c.observe(10.2)
        assert c.shelldist != mu


class TestEstimateErrors:
    """Contributing estimate errors widen the match band."""

    def test_bound_composition(self):
        """The bound is threshold_k * sqrt(shellvar + ex^2 + ey^2) exactly."""
        c = Comparator(mode="batch", threshold_k=4.0)
        c.observe(10.0)
        c.observe(10.5)
        result = c.observe(10.0, ex=0.3, ey=0.4)
        assert result.bound == pytest.approx(
            4.0 * math.sqrt(0.25 + 0.09 + 0.16), rel=1e-12
        )

    def test_errors_can_rescue_a_match(self):
        """A distance outside the bare band can match with estimate errors."""
        c = Comparator(mode="batch", threshold_k=4.0, update_on_match_only=True)
        for d in (10.0, 10.5, 10.0):
            c.observe(d)
        assert c.observe(13.0).match is False
        assert c.observe(13.0, ex=1.0).match is True

    def test_negative_errors_rejected(self):
        """Estimate errors are lengths and cannot be negative."""
        c = Comparator(mode="batch")
        with pytest.raises(ValueError, match="estimate errors"):
            c.observe(1.0, ex=-0.1)


class TestCompareVectors:
    """The vector front end to observe()."""

    def test_distance_is_euclidean(self):
        """compare(x, y) feeds the Euclidean distance to the stream."""
        c = Comparator(mode="batch")
        result = c.compare([0.0, 0.0], [3.0, 4.0])
        assert result.d == pytest.approx(5.0, rel=1e-12)

    def test_dimension_mismatch_rejected(self):
        """Vectors of different lengths cannot be compared."""
        c = Comparator(mode="batch")
        with pytest.raises(ValueError, match="dimension mismatch"):
            c.compare([1.0, 2.0], [1.0, 2.0, 3.0])


class TestInputValidation:
    """Distances must be finite non-negative scalars."""

    def test_rejects_negative_distance(self):
        """Distances are norms; negatives are impossible."""
        c = Comparator(mode="batch")
        with pytest.raises(ValueError, match="finite and >= 0"):
            c.observe(-1.0)

    def test_rejects_non_finite_distance(self):
        """NaN and infinity are rejected."""
        c = Comparator(mode="batch")
        with pytest.raises(ValueError, match="finite and >= 0"):
            c.observe(float("nan"))

    def test_rejects_unknown_mode(self):
        """Only batch and ewma modes exist."""
        with pytest.raises(ValueError, match="unknown mode"):
            Comparator(mode="median")


class TestSerialization:
    """State snapshots restore behavior exactly."""

    def test_round_trip_is_exact(self):
        """to_dict/from_dict preserve every statistic bit-for-bit."""
        c = Comparator(mode="ewma", alpha=0.05, threshold_k=3.0)
        rng = np.random.default_rng(3)
        for d in rng.uniform(1.0, 2.0, size=57):
            c.observe(float(d))
        restored = Comparator.from_dict(c.to_dict())
        assert restored.to_dict() == c.to_dict()
        assert restored.shelldist == c.shelldist
        assert restored.shellvar == c.shellvar

    def test_continuation_matches_uninterrupted_run(self):
        """Splitting a stream across a snapshot changes nothing."""
        rng = np.random.default_rng(4)
        data = [float(d) for d in rng.uniform(5.0, 6.0, size=80)]
        whole = Comparator(mode="batch")
        for d in data:
            whole.observe(d)
        first = Comparator(mode="batch")
        for d in data[:40]:
            first.observe(d)
        second = Comparator.from_dict(first.to_dict())
        for d in data[40:]:
            second.observe(d)
        assert second.shelldist == whole.shelldist
        assert second.shellvar == whole.shellvar
        assert second.m == whole.m

    def test_shell_property_reflects_state(self):
        """The ShellEstimate view carries mu, var, weight, and frozen."""
        c = Comparator(mode="batch")
        c.observe(2.0)
        c.observe(4.0)  # variance against the running mean: (4 - 2)^2 / 1
        c.freeze()
        shell = c.shell
        assert shell.mu == 3.0
        assert shell.var == 4.0
        assert shell.weight == 2
        assert shell.frozen is True
