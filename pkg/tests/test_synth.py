"""Tests for the synthetic generators and closed-form oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

from shellmon.synth import (
    ManifoldSpec,
    chi_moments,
    gen_cloud,
    inject_defect,
    oracle_suite,
    perpendicular_distance,
)


class TestManifoldSpec:
    """Validation and derived attributes of the generator recipe."""

    def test_point_has_no_parameters(self):
        """A point manifold fixes manifold_dims at 0."""
        spec = ManifoldSpec(kind="point", n_dims=5)
        assert spec.manifold_dims == 0
        assert spec.n_independent == 0

    def test_line_and_circle_have_one_parameter(self):
        """Line and circle both have a single parameter."""
        assert ManifoldSpec(kind="line", n_dims=5).manifold_dims == 1
        assert ManifoldSpec(kind="circle", n_dims=5).manifold_dims == 1

    def test_circle_records_two_independent_columns(self):
        """The circle stream stores both in-plane coordinates."""
        assert ManifoldSpec(kind="circle", n_dims=5).n_independent == 2

    def test_plane_requires_manifold_dims(self):
        """A plane without a parameter count is rejected."""
        with pytest.raises(ValueError, match="manifold_dims"):
            ManifoldSpec(kind="plane", n_dims=5)

    def test_conflicting_manifold_dims_rejected(self):
        """Fixed-kind manifolds reject a contradictory parameter count."""
        with pytest.raises(ValueError, match="manifold_dims"):
            ManifoldSpec(kind="point", n_dims=5, manifold_dims=2)

    def test_unknown_kind_rejected(self):
        """Only the four supported kinds are accepted."""
        with pytest.raises(ValueError, match="unknown manifold kind"):
            ManifoldSpec(kind="torus", n_dims=5)

    def test_dims_must_exceed_parameters(self):
        """The manifold must leave perpendicular dimensions to carry noise."""
        with pytest.raises(ValueError, match="n_dims > manifold_dims"):
            ManifoldSpec(kind="plane", n_dims=3, manifold_dims=3)

    def test_noise_vector_broadcasts_scalar(self):
        """A scalar noise level applies to every channel."""
        spec = ManifoldSpec(kind="point", n_dims=4, noise=0.5)
        assert np.array_equal(spec.noise_vector(), [0.5, 0.5, 0.5, 0.5])

    def test_noise_vector_keeps_per_channel_values(self):
        """A per-channel noise vector is preserved."""
        spec = ManifoldSpec(kind="point", n_dims=3, noise=[0.1, 0.2, 0.3])
        assert np.array_equal(spec.noise_vector(), [0.1, 0.2, 0.3])

    def test_negative_noise_rejected(self):
        """Negative noise levels are rejected."""
        with pytest.raises(ValueError, match="noise entries"):
            ManifoldSpec(kind="point", n_dims=3, noise=-1.0)

    def test_wrong_noise_length_rejected(self):
        """A noise vector must match the channel count."""
        with pytest.raises(ValueError, match="noise must be scalar or length 3"):
            ManifoldSpec(kind="point", n_dims=3, noise=[0.1, 0.2])

    def test_default_param_ranges(self):
        """Circle defaults to a full turn, others to the unit interval."""
        assert ManifoldSpec(kind="circle", n_dims=3).param_range == (0.0, 2.0 * math.pi)
        assert ManifoldSpec(kind="line", n_dims=3).param_range == (0.0, 1.0)


class TestGenCloud:
    """Shape, determinism, and geometry of generated realization streams."""

    def test_shapes(self):
        """Realizations are (m, independent + dependent) with truth aligned."""
        spec = ManifoldSpec(kind="plane", n_dims=6, manifold_dims=2, seed=1)
        reals, truth = gen_cloud(spec, 50)
        assert reals.shape == (50, 2 + 6)
        assert truth.manifold_points.shape == (50, 6)
        assert truth.params.shape == (50, 2)
        assert truth.noise_norm.shape == (50,)
        assert truth.perp_dist.shape == (50,)

    def test_deterministic(self):
        """The same spec generates the identical stream."""
        spec = ManifoldSpec(kind="line", n_dims=4, seed=7)
        a, _ = gen_cloud(spec, 20)
        b, _ = gen_cloud(ManifoldSpec(kind="line", n_dims=4, seed=7), 20)
        assert np.array_equal(a, b)

    def test_seeds_differ(self):
        """Different seeds give different streams."""
        a, _ = gen_cloud(ManifoldSpec(kind="point", n_dims=4, seed=1), 10)
        b, _ = gen_cloud(ManifoldSpec(kind="point", n_dims=4, seed=2), 10)
        assert not np.array_equal(a, b)

    def test_point_cloud_centers_on_origin(self):
        """A point cloud centers on the configured origin."""
        origin = [5.0, -2.0, 1.0]
        spec = ManifoldSpec(kind="point", n_dims=3, noise=0.5, seed=3, origin=origin)
        reals, _ = gen_cloud(spec, 4000)
        assert np.allclose(reals.mean(axis=0), origin, atol=0.05)

    def test_zero_noise_sits_on_manifold(self):
        """With zero noise every realization has zero perpendicular distance."""
        spec = ManifoldSpec(kind="plane", n_dims=5, manifold_dims=2, noise=0.0, seed=2)
        _, truth = gen_cloud(spec, 30)
        # the distance is a sqrt of an O(eps) projection residue, so O(1e-8)
        assert np.allclose(truth.perp_dist, 0.0, atol=1e-7)
        assert np.allclose(truth.noise_norm, 0.0)

    def test_circle_independent_columns_on_radius(self):
        """The circle's independent columns lie exactly on the radius."""
        spec = ManifoldSpec(kind="circle", n_dims=8, radius=2.5, seed=4)
        reals, _ = gen_cloud(spec, 100)
        assert np.allclose(np.linalg.norm(reals[:, :2], axis=1), 2.5)

    def test_params_within_range(self):
        """Sampled parameters stay inside the configured interval."""
        spec = ManifoldSpec(kind="line", n_dims=3, seed=5, param_range=(2.0, 3.0))
        _, truth = gen_cloud(spec, 200)
        assert truth.params.min() >= 2.0
        assert truth.params.max() <= 3.0

    def test_noise_norm_matches_injected_noise(self):
        """noise_norm is the distance from the realization to its true point."""
        spec = ManifoldSpec(kind="plane", n_dims=6, manifold_dims=2, seed=6)
        reals, truth = gen_cloud(spec, 40)
        dep = reals[:, 2:]
        norms = np.linalg.norm(dep - truth.manifold_points, axis=1)
        assert np.allclose(norms, truth.noise_norm, rtol=1e-12)

    def test_rejects_empty_request(self):
        """At least one realization must be requested."""
        with pytest.raises(ValueError, match="need m >= 1"):
            gen_cloud(ManifoldSpec(kind="point", n_dims=3), 0)


class TestPerpendicularDistance:
    """Analytic nearest-point distances for each manifold kind."""

    def test_point_is_euclidean(self):
        """Distance to a point manifold is the plain Euclidean norm."""
        spec = ManifoldSpec(kind="point", n_dims=3, origin=[1.0, 0.0, 0.0])
        assert perpendicular_distance(spec, np.array([1.0, 3.0, 4.0])) == pytest.approx(
            5.0
        )

    def test_manifold_points_have_zero_distance(self):
        """Noise-free points sit exactly on their manifold."""
        for kind, l_dims in (("line", None), ("plane", 3), ("circle", None)):
            spec = ManifoldSpec(kind=kind, n_dims=7, manifold_dims=l_dims, seed=8)
            _, truth = gen_cloud(
                ManifoldSpec(kind=kind, n_dims=7, manifold_dims=l_dims, seed=8, noise=0.0),
                20,
            )
            dist = perpendicular_distance(spec, truth.manifold_points)
            assert np.allclose(dist, 0.0, atol=1e-7)

    def test_pythagoras_against_noise_norm(self):
        """Perpendicular distance never exceeds the full noise length."""
        spec = ManifoldSpec(kind="plane", n_dims=10, manifold_dims=2, seed=9)
        _, truth = gen_cloud(spec, 200)
        assert np.all(truth.perp_dist <= truth.noise_norm + 1e-12)

    def test_circle_center_distance_is_radius(self):
        """The circle's center is one radius away from the circle."""
        spec = ManifoldSpec(kind="circle", n_dims=5, radius=2.0, seed=10)
        assert perpendicular_distance(spec, np.zeros(5)) == pytest.approx(2.0)

    def test_batch_matches_single(self):
        """Batch evaluation equals per-row evaluation."""
        spec = ManifoldSpec(kind="circle", n_dims=6, seed=11)
        reals, _ = gen_cloud(spec, 10)
        dep = reals[:, 2:]
        batch = perpendicular_distance(spec, dep)
        singles = [perpendicular_distance(spec, row) for row in dep]
        assert np.allclose(batch, singles, rtol=1e-12)

    def test_wrong_width_rejected(self):
        """A dependent block of the wrong width is rejected."""
        spec = ManifoldSpec(kind="point", n_dims=4)
        with pytest.raises(ValueError, match="expected 4 dependent columns"):
            perpendicular_distance(spec, np.zeros(3))


class TestChiMoments:
    """Exact moments of the Gaussian noise-vector length."""

    def test_one_dimension(self):
        """k=1 is the half-normal mean sqrt(2/pi)."""
        mean, var = chi_moments(1)
        assert mean == pytest.approx(math.sqrt(2.0 / math.pi), rel=1e-12)
        assert var == pytest.approx(1.0 - 2.0 / math.pi, rel=1e-12)

    def test_three_dimensions(self):
        """k=3 gives the textbook value 2*sqrt(2/pi)."""
        mean, _ = chi_moments(3)
        assert mean == pytest.approx(2.0 * math.sqrt(2.0 / math.pi), rel=1e-12)

    def test_mean_square_plus_var_is_k(self):
        """mean^2 + var equals k exactly at every k."""
        for k in (1, 2, 10, 97, 1000, 100000):
            mean, var = chi_moments(k)
            assert mean * mean + var == pytest.approx(k, rel=1e-12)

    def test_large_k_concentration(self):
        """The mean approaches sqrt(k) and the variance approaches 1/2."""
        mean, var = chi_moments(1000)
        assert mean == pytest.approx(31.614871896968094, rel=1e-12)
        assert var == pytest.approx(0.4998749382970118, rel=1e-9)

    def test_scale_factor(self):
        """A noise amplitude scales the mean linearly, the variance squared."""
        mean1, var1 = chi_moments(10)
        mean2, var2 = chi_moments(10, eps0=3.0)
        assert mean2 == pytest.approx(3.0 * mean1, rel=1e-12)
        assert var2 == pytest.approx(9.0 * var1, rel=1e-12)

    def test_rejects_nonpositive_k(self):
        """Dimension counts below one are rejected."""
        with pytest.raises(ValueError, match="need k >= 1"):
            chi_moments(0)


class TestInjectDefect:
    """Offset injection for detection experiments."""

    def test_offsets_from_index(self):
        """Rows at and after from_index pick up the offset; earlier rows do not."""
        base = np.zeros((5, 3))
        out = inject_defect(base, [1], 2.0, 3)
        assert np.array_equal(out[:3], np.zeros((3, 3)))
        assert np.array_equal(out[3:, 1], [2.0, 2.0])
        assert np.array_equal(out[3:, [0, 2]], np.zeros((2, 2)))

    def test_original_untouched(self):
        """The input stream is copied, not mutated."""
        base = np.zeros((4, 2))
        inject_defect(base, [0], 1.0, 0)
        assert np.array_equal(base, np.zeros((4, 2)))

    def test_beyond_end_is_noop(self):
        """A defect starting past the stream end changes nothing."""
        base = np.ones((3, 2))
        out = inject_defect(base, [0], 5.0, 10)
        assert np.array_equal(out, base)

    def test_empty_dims_rejected(self):
        """A defect must touch at least one column."""
        with pytest.raises(ValueError, match="empty dims"):
            inject_defect(np.zeros((3, 2)), [], 1.0, 0)

    def test_out_of_range_dims_rejected(self):
        """Column indices must exist."""
        with pytest.raises(ValueError, match="out of range"):
            inject_defect(np.zeros((3, 2)), [2], 1.0, 0)

    def test_negative_index_rejected(self):
        """Negative start rows are rejected."""
        with pytest.raises(ValueError, match="from_index"):
            inject_defect(np.zeros((3, 2)), [0], 1.0, -1)


class TestOracleSuite:
    """The Monte-Carlo cross-check table."""

    def test_all_checks_pass_at_default_seed(self):
        """Every closed-form prediction holds within its stated tolerance."""
        checks = oracle_suite(seed=0, m=4000)
        for check in checks:
            assert check.passed, (
                f"{check.name}: measured {check.measured} vs expected "
                f"{check.expected} (rel_tol {check.rel_tol})"
            )

    def test_covers_the_documented_quantities(self):
        """The suite covers point shells, plane shells, and pair distances."""
        names = [c.name for c in oracle_suite(seed=0, m=500)]
        assert len(names) == len(set(names))
        assert any("point shell mean" in n for n in names)
        assert any("plane shell variance" in n for n in names)
        assert any("pair distance" in n for n in names)

    def test_notes_document_the_closed_forms(self):
        """Approximate closed forms are reported alongside the exact ones."""
        checks = oracle_suite(seed=0, m=500)
        notes = [c.note for c in checks if c.note]
        assert any("n/(2k)" in n for n in notes)
        assert any("sqrt(2N)" in n for n in notes)
