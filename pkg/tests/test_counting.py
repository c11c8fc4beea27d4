"""Tests for the counting simulation and the intensity-ratio estimators."""

import json
import math

import numpy as np
import pytest

from noisedist import (
    SIGMA_Y,
    SIGMA_Z,
    EstimationError,
    IntensityTable,
    ValidationError,
    bayes_invert,
    estimate_probabilities,
    nd_from_counts,
    optimal_correction,
    polar_angle,
    polar_observable,
    simulate_intensities,
    theory_disturbance_optimal,
    theory_disturbance_uncorrected,
    theory_noise,
)
from noisedist.counting import CSV_HEADER, EstimatedProbabilities

H_SIN45 = 0.6008760366928561

PAPER_GRID_DEG = list(range(0, 91, 10)) + list(range(100, 181, 20))


def make_tables(theta_deg, shots, seed, mode, corrected=False):
    m = polar_observable(math.radians(theta_deg))
    if corrected:
        corr = optimal_correction(m.axis, SIGMA_Y)
        label = "optimal"
    else:
        corr, label = None, "identity"
    table_a = simulate_intensities(m, None, "A", shots, seed, mode)
    table_b = simulate_intensities(m, corr, "B", shots, seed, mode, correction_label=label)
    return table_a, table_b


class TestSimulate:
    def test_exact_theta_zero_family_a(self):
        # alpha=+1 always gives mu=+1, then beta' is even odds: 500/500 per input
        table = simulate_intensities(polar_observable(0.0), None, "A", 1000, 0, "exact")
        expected = np.array([
            [[500.0, 500.0], [0.0, 0.0]],
            [[0.0, 0.0], [500.0, 500.0]],
        ])
        assert np.array_equal(table.counts, expected)

    def test_exact_theta_90_family_b_is_repeatable(self):
        # M = B: all counts land on mu = beta' = beta
        table = simulate_intensities(polar_observable(math.pi / 2), None, "B", 1000, 0, "exact")
        assert table.counts[0, 0, 0] == pytest.approx(1000.0, abs=1e-9)
        assert table.counts[1, 1, 1] == pytest.approx(1000.0, abs=1e-9)
        assert table.counts.sum() == pytest.approx(2000.0, abs=1e-9)

    def test_exact_counts_match_joint_distribution(self):
        from noisedist import ProjectiveInstrument, sequential_joint
        from noisedist.bloch import OUTCOMES

        for deg in (30.0, 50.0, 120.0):
            m = polar_observable(math.radians(deg))
            table_a, table_b = make_tables(deg, 1234, 0, "exact")
            for table, input_obs in ((table_a, SIGMA_Z), (table_b, SIGMA_Y)):
                per_input = table.counts.sum(axis=(1, 2))
                assert per_input == pytest.approx([1234.0, 1234.0], abs=1e-9)
                inst = ProjectiveInstrument(m)
                for i, outcome in enumerate(OUTCOMES):
                    joint = sequential_joint(input_obs.eigenstate(outcome), inst, SIGMA_Y)
                    assert np.allclose(table.counts[i] / 1234.0, joint, atol=1e-12)

    def test_multinomial_is_seed_deterministic(self):
        a1, b1 = make_tables(50.0, 10000, 7, "multinomial")
        a2, b2 = make_tables(50.0, 10000, 7, "multinomial")
        assert np.array_equal(a1.counts, a2.counts)
        assert np.array_equal(b1.counts, b2.counts)
        a3, _ = make_tables(50.0, 10000, 8, "multinomial")
        assert not np.array_equal(a1.counts, a3.counts)

    def test_multinomial_rows_sum_to_shots(self):
        table, _ = make_tables(50.0, 10000, 3, "multinomial")
        assert np.array_equal(table.counts.sum(axis=(1, 2)), [10000.0, 10000.0])

    def test_identity_and_corrected_streams_are_independent(self):
        m = polar_observable(math.radians(50.0))
        plain = simulate_intensities(m, None, "B", 10000, 5, "multinomial")
        corr = simulate_intensities(m, optimal_correction(m.axis, SIGMA_Y), "B", 10000, 5,
                                    "multinomial", correction_label="optimal")
        assert not np.array_equal(plain.counts, corr.counts)

    def test_poisson_reproducible_and_unconstrained(self):
        t1, _ = make_tables(50.0, 10000, 11, "poisson")
        t2, _ = make_tables(50.0, 10000, 11, "poisson")
        assert np.array_equal(t1.counts, t2.counts)
        # cell totals fluctuate around shots rather than being capped by it
        assert t1.counts.sum() == pytest.approx(20000.0, rel=0.05)

    def test_efficiency_thins_uniformly(self):
        m = polar_observable(math.radians(50.0))
        exact = simulate_intensities(m, None, "B", 1000, 0, "exact", efficiency=0.5)
        full = simulate_intensities(m, None, "B", 1000, 0, "exact")
        assert np.allclose(exact.counts, 0.5 * full.counts, atol=1e-12)
        thinned = simulate_intensities(m, None, "B", 1000, 0, "multinomial", efficiency=0.5)
        assert thinned.counts.sum() < 2000.0

    def test_validation(self):
        m = polar_observable(0.3)
        with pytest.raises(ValidationError):
            simulate_intensities(m, None, "A", 0, 0, "exact")
        with pytest.raises(ValidationError):
            simulate_intensities(m, None, "C", 10, 0, "exact")
        with pytest.raises(ValidationError):
            simulate_intensities(m, None, "A", 10, 0, "gaussian")
        with pytest.raises(ValidationError):
            simulate_intensities(m, None, "A", 10, -1, "multinomial")
        with pytest.raises(ValidationError):
            simulate_intensities(m, None, "A", 10, 0, "exact", efficiency=0.0)

    def test_polar_angle_round_trip(self):
        for deg in (0.0, 50.0, 90.0, 180.0):
            assert math.degrees(polar_angle(polar_observable(math.radians(deg)))) == (
                pytest.approx(deg, abs=1e-12))


class TestEstimators:
    def test_theta_zero_is_deterministic_channel(self):
        table, _ = make_tables(0.0, 1000, 0, "exact")
        est = estimate_probabilities(table)
        assert np.allclose(est.p_out_given_in, np.eye(2), atol=1e-15)
        assert np.allclose(est.p_input, [0.5, 0.5], atol=1e-15)

    def test_sixty_degrees(self):
        table, _ = make_tables(60.0, 1000, 0, "exact")
        est = estimate_probabilities(table)
        assert est.p_out_given_in[0, 0] == pytest.approx(0.75, abs=1e-12)

    def test_family_b_identity_channel_is_sin_squared(self):
        # p(beta'|beta) = (1 + beta' beta sin^2(50 deg)) / 2
        _, table = make_tables(50.0, 1000, 0, "exact")
        est = estimate_probabilities(table)
        s2 = math.sin(math.radians(50.0)) ** 2
        expected = np.array([[(1 + s2) / 2, (1 - s2) / 2], [(1 - s2) / 2, (1 + s2) / 2]])
        assert np.allclose(est.p_out_given_in, expected, atol=1e-12)

    def test_rows_are_normalized(self):
        for mode in ("exact", "multinomial", "poisson"):
            table, _ = make_tables(40.0, 2000, 1, mode)
            est = estimate_probabilities(table)
            assert np.allclose(est.p_out_given_in.sum(axis=1), 1.0, atol=1e-9)

    def test_zero_input_row_raises(self):
        counts = np.zeros((2, 2, 2))
        counts[0, 0, 0] = 10.0
        table = IntensityTable("A", counts, 0.0, 10, 0, "multinomial")
        with pytest.raises(EstimationError):
            estimate_probabilities(table)


class TestBayes:
    def test_symmetric_channel_posterior_equals_forward(self):
        for deg in (20.0, 50.0, 70.0):
            table, _ = make_tables(deg, 1000, 0, "exact")
            est = bayes_invert(estimate_probabilities(table))
            assert np.allclose(est.p_in_given_out, est.p_out_given_in.T, atol=1e-12)
            assert np.allclose(est.p_out, [0.5, 0.5], atol=1e-12)

    def test_degenerate_prior_pins_posterior(self):
        est = EstimatedProbabilities(
            family="A",
            p_input=np.array([1.0, 0.0]),
            p_out_given_in=np.array([[0.7, 0.3], [0.2, 0.8]]),
        )
        inv = bayes_invert(est)
        assert np.allclose(inv.p_in_given_out, [[1.0, 0.0], [1.0, 0.0]], atol=1e-15)
        assert inv.dropped == ()

    def test_zero_marginal_outcome_dropped_with_flag(self):
        est = EstimatedProbabilities(
            family="A",
            p_input=np.array([0.5, 0.5]),
            p_out_given_in=np.array([[1.0, 0.0], [1.0, 0.0]]),
        )
        inv = bayes_invert(est)
        assert inv.dropped == (-1,)
        assert np.allclose(inv.p_in_given_out[1], 0.0)

    def test_sampled_family_b_posterior_matches_channel_formula(self):
        # p(beta|beta') for the uncorrected chain is (1 + beta' beta sin^2(50))/2,
        # up to counting noise
        _, table = make_tables(50.0, 10**6, 0, "multinomial")
        est = bayes_invert(estimate_probabilities(table))
        s2 = math.sin(math.radians(50.0)) ** 2
        expected = np.array([[(1 + s2) / 2, (1 - s2) / 2], [(1 - s2) / 2, (1 + s2) / 2]])
        assert np.max(np.abs(est.p_in_given_out - expected)) < 0.01

    def test_bayes_consistency_for_sampled_tables(self):
        # p(in|out) p(out) == p(out|in) p(in)
        for mode in ("multinomial", "poisson"):
            for deg in PAPER_GRID_DEG:
                table, _ = make_tables(float(deg), 5000, 2, mode)
                est = bayes_invert(estimate_probabilities(table))
                lhs = est.p_in_given_out * est.p_out[:, None]
                rhs = (est.p_out_given_in * est.p_input[:, None]).T
                assert np.allclose(lhs, rhs, atol=1e-9)


class TestNDFromCounts:
    def test_exact_endpoints(self):
        a0, b0 = make_tables(0.0, 1000, 0, "exact")
        point = nd_from_counts(a0, b0)
        assert (point.noise, point.disturbance) == (0.0, 1.0)
        a90, b90 = make_tables(90.0, 1000, 0, "exact")
        point = nd_from_counts(a90, b90)
        assert (point.noise, point.disturbance) == (1.0, 0.0)

    def test_exact_pipeline_equals_analytic_on_grid(self):
        for deg in PAPER_GRID_DEG:
            theta = math.radians(deg)
            a, b0 = make_tables(float(deg), 10**6, 0, "exact")
            _, bc = make_tables(float(deg), 10**6, 0, "exact", corrected=True)
            plain = nd_from_counts(a, b0)
            corrected = nd_from_counts(a, bc)
            assert plain.noise == pytest.approx(theory_noise(theta), abs=1e-12)
            assert plain.disturbance == pytest.approx(
                theory_disturbance_uncorrected(theta), abs=1e-12)
            assert corrected.disturbance == pytest.approx(
                theory_disturbance_optimal(theta), abs=1e-12)
            assert corrected.corrected and not plain.corrected

    def test_multinomial_converges_at_45_degrees(self):
        a, b = make_tables(45.0, 10**6, 0, "multinomial", corrected=True)
        point = nd_from_counts(a, b)
        assert abs(point.noise - H_SIN45) < 0.01
        assert abs(point.disturbance - H_SIN45) < 0.01

    def test_estimator_error_shrinks_with_shots(self):
        # max error over the grid is non-increasing along the shots ladder
        for seed in (0, 1, 2):
            max_err = []
            for shots in (10**3, 10**4, 10**5, 10**6):
                worst = 0.0
                for deg in PAPER_GRID_DEG:
                    theta = math.radians(deg)
                    a, b = make_tables(float(deg), shots, seed, "multinomial")
                    point = nd_from_counts(a, b)
                    worst = max(worst, abs(point.noise - theory_noise(theta)),
                                abs(point.disturbance - theory_disturbance_uncorrected(theta)))
                max_err.append(worst)
            assert max_err[-1] < 0.01
            assert all(a >= b for a, b in zip(max_err, max_err[1:])), (seed, max_err)

    def test_family_mismatch_rejected(self):
        a, b = make_tables(30.0, 100, 0, "exact")
        with pytest.raises(ValidationError):
            nd_from_counts(b, a)


class TestSerialization:
    def test_csv_header_and_shape(self):
        table, _ = make_tables(50.0, 1000, 4, "multinomial")
        text = table.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == 9
        first = lines[1].split(",")
        assert first[0] == "A" and first[1] == "1" and first[2] == "1" and first[3] == "1"
        # sampled counts serialize as integers
        assert all("." not in line.split(",")[4] for line in lines[1:])

    def test_exact_mode_serializes_reals(self):
        table, _ = make_tables(45.0, 1000, 0, "exact")
        assert any("." in line.split(",")[4] for line in table.to_csv().strip().split("\n")[1:])

    def test_json_round_trip(self):
        _, table = make_tables(50.0, 1000, 4, "multinomial", corrected=True)
        data = json.loads(table.to_json())
        assert data["family"] == "B"
        assert data["theta_deg"] == pytest.approx(50.0, abs=1e-12)
        assert data["shots"] == 1000 and data["seed"] == 4
        assert data["mode"] == "multinomial" and data["correction"] == "optimal"
        assert len(data["counts"]) == 8
        again = IntensityTable.from_json(table.to_json())
        assert np.array_equal(again.counts, table.counts)
        assert again.family == table.family and again.mode == table.mode

    def test_counts_shape_validated(self):
        with pytest.raises(ValidationError):
            IntensityTable("A", np.zeros((2, 2)), 0.0, 10, 0, "exact")
        with pytest.raises(ValidationError):
            IntensityTable("A", -np.ones((2, 2, 2)), 0.0, 10, 0, "exact")
