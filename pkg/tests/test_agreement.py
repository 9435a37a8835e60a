"""Bland-Altman, Welch t-test, subgrouping, pairs CSV, SVG plot."""

import numpy as np
import pytest

from tremorkit import (
    DegenerateVarianceError,
    InsufficientDataError,
    MethodPair,
    ParseError,
    ValidationError,
    bland_altman,
    bland_altman_svg,
    subgroup_compare,
    welch_t_test,
)
from tremorkit.agreement import parse_pairs_file, serialize_pairs_file


def pairs_from_diffs(diffs, ref=10.0, labels=None):
    return [MethodPair(cv_cm=ref + d, ref_cm=ref, labels=labels or {}) for d in diffs]


class TestBlandAltman:
    def test_identical_methods(self):
        result = bland_altman(pairs_from_diffs([0.0, 0.0, 0.0]))
        assert result.bias_cm == 0.0
        assert result.sd_cm == 0.0
        assert (result.loa_low_cm, result.loa_high_cm) == (0.0, 0.0)

    def test_hand_computed_example(self):
        """Differences {1, -1, 0, 0}: var = 2/3 with n-1 = 3, sd = 0.8165."""
        result = bland_altman(pairs_from_diffs([1.0, -1.0, 0.0, 0.0]))
        assert result.n == 4
        assert result.bias_cm == pytest.approx(0.0, abs=1e-12)
        assert result.sd_cm == pytest.approx(0.8165, abs=1e-4)
        assert result.loa_low_cm == pytest.approx(-1.6003, abs=1e-4)
        assert result.loa_high_cm == pytest.approx(1.6003, abs=1e-4)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            bland_altman(pairs_from_diffs([0.5]))

    def test_negative_measurement_rejected(self):
        with pytest.raises(ValidationError):
            MethodPair(cv_cm=-0.1, ref_cm=1.0)

    def test_antisymmetry_and_shift_invariance(self):
        """Swapping methods negates bias and mirrors the LoA; adding a
        constant to cv shifts bias and LoA by that constant, sd unchanged.
        200 randomized cases."""
        rng = np.random.default_rng(2024)
        for _ in range(200):
            n = int(rng.integers(2, 40))
            cv = rng.uniform(0.0, 20.0, n)
            ref = rng.uniform(0.0, 20.0, n)
            pairs = [MethodPair(cv_cm=float(c), ref_cm=float(r)) for c, r in zip(cv, ref)]
            swapped = [MethodPair(cv_cm=float(r), ref_cm=float(c)) for c, r in zip(cv, ref)]
            a, b = bland_altman(pairs), bland_altman(swapped)
            assert b.bias_cm == pytest.approx(-a.bias_cm, abs=1e-12)
            assert b.loa_low_cm == pytest.approx(-a.loa_high_cm, abs=1e-11)
            assert b.loa_high_cm == pytest.approx(-a.loa_low_cm, abs=1e-11)

            shift = float(rng.uniform(0.0, 5.0))
            shifted = bland_altman(
                [MethodPair(cv_cm=float(c) + shift, ref_cm=float(r)) for c, r in zip(cv, ref)]
            )
            assert shifted.bias_cm == pytest.approx(a.bias_cm + shift, abs=1e-10)
            assert shifted.sd_cm == pytest.approx(a.sd_cm, abs=1e-10)
            assert shifted.loa_low_cm == pytest.approx(a.loa_low_cm + shift, abs=1e-10)
            assert shifted.loa_high_cm == pytest.approx(a.loa_high_cm + shift, abs=1e-10)


class TestWelchTTest:
    def test_identical_groups(self):
        result = welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert result.t_stat == 0.0
        assert result.p_two_sided == pytest.approx(1.0, abs=1e-12)

    def test_hand_computed_example(self):
        """{1,2,3,4} vs {2,3,4,5}: t = -1/sqrt(5/6), df = 6 exactly."""
        result = welch_t_test([1.0, 2.0, 3.0, 4.0], [2.0, 3.0, 4.0, 5.0])
        assert result.t_stat == pytest.approx(-1.0954, abs=1e-4)
        assert result.df == pytest.approx(6.0, abs=1e-12)
        assert result.p_two_sided == pytest.approx(0.315, abs=1e-3)
        assert result.group_means == (2.5, 3.5)
        assert result.group_ns == (4, 4)

    def test_degenerate_variance(self):
        with pytest.raises(DegenerateVarianceError):
            welch_t_test([0.0, 0.0, 0.0], [1.0, 1.0, 1.0])

    def test_insufficient_group(self):
        with pytest.raises(InsufficientDataError):
            welch_t_test([1.0], [1.0, 2.0])

    def test_antisymmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = rng.normal(0.0, 1.0, int(rng.integers(2, 30)))
            b = rng.normal(0.3, 1.5, int(rng.integers(2, 30)))
            if np.var(a, ddof=1) == 0 and np.var(b, ddof=1) == 0:
                continue
            r_ab = welch_t_test(a, b)
            r_ba = welch_t_test(b, a)
            assert r_ab.t_stat == pytest.approx(-r_ba.t_stat, abs=1e-12)
            assert r_ab.p_two_sided == pytest.approx(r_ba.p_two_sided, abs=1e-12)

    def test_pooled_mode(self):
        result = welch_t_test([1.0, 2.0, 3.0, 4.0], [2.0, 3.0, 4.0, 5.0], pooled=True)
        assert result.df == 6.0
        assert result.t_stat == pytest.approx(-1.0954, abs=1e-4)


class TestSubgroupCompare:
    def test_single_group_no_test(self):
        pairs = pairs_from_diffs([0.1, -0.1, 0.0], labels={"site": "a"})
        comparison = subgroup_compare(pairs, "site")
        assert set(comparison.groups) == {"a"}
        assert comparison.ttest is None
        assert "1 group" in comparison.skipped_reason

    def test_same_distribution_rarely_significant(self):
        """Two groups drawn from one difference distribution: p > 0.05 in at
        least 90 of 100 seeded trials (5% level, so ~95 expected)."""
        not_significant = 0
        for seed in range(100):
            rng = np.random.default_rng(seed)
            pairs = []
            for group in ("ii", "vi"):
                for d in rng.normal(0.0, 0.5, 15):
                    pairs.append(MethodPair(cv_cm=10.0 + d, ref_cm=10.0, labels={"tone": group}))
            comparison = subgroup_compare(pairs, "tone")
            if comparison.ttest.p_two_sided > 0.05:
                not_significant += 1
        assert not_significant >= 90

    def test_strong_effect_detected(self):
        rng = np.random.default_rng(8)
        pairs = pairs_from_diffs(rng.normal(0.0, 0.1, 15), labels={"tone": "ii"})
        pairs += pairs_from_diffs(rng.normal(1.0, 0.1, 15), labels={"tone": "vi"})
        comparison = subgroup_compare(pairs, "tone")
        assert comparison.ttest.p_two_sided < 0.001

    def test_three_groups_skips_test_but_reports(self):
        pairs = []
        for group in ("a", "b", "c"):
            pairs += pairs_from_diffs([0.1, -0.1], labels={"g": group})
        comparison = subgroup_compare(pairs, "g")
        assert set(comparison.groups) == {"a", "b", "c"}
        assert comparison.ttest is None
        assert "3 group" in comparison.skipped_reason

    def test_missing_label_rejected(self):
        pairs = pairs_from_diffs([0.1, -0.1], labels={"g": "a"})
        pairs.append(MethodPair(cv_cm=1.0, ref_cm=1.0))
        with pytest.raises(ValidationError):
            subgroup_compare(pairs, "g")


class TestPairsFile:
    def test_round_trip(self):
        pairs = [
            MethodPair(cv_cm=1.5, ref_cm=1.0, labels={"depth": "50", "tone": "ii"}),
            MethodPair(cv_cm=2.0, ref_cm=2.5, labels={"depth": "75", "tone": "vi"}),
        ]
        data = serialize_pairs_file(pairs, ["depth", "tone"])
        parsed = parse_pairs_file(data)
        assert parsed == pairs

    def test_bad_header(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_pairs_file(b"ref_cm,cv_cm\n1,2\n")

    def test_bad_value(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_pairs_file(b"cv_cm,ref_cm\nx,2\n")


class TestSvgPlot:
    def test_two_identical_pairs(self):
        pairs = pairs_from_diffs([0.5, 0.5])
        result = bland_altman(pairs)
        svg = bland_altman_svg(pairs, result).decode()
        assert svg.count("<circle") == 2
        # bias and both LoA collapse onto one height: 3 coincident lines
        heights = {
            line.split('y1="')[1].split('"')[0]
            for line in svg.splitlines()
            if "<line" in line and "#1f77b4" in line
        }
        assert svg.count("#1f77b4") == 3
        assert len(heights) == 1

    def test_sixty_pairs_deterministic(self):
        rng = np.random.default_rng(60)
        pairs = pairs_from_diffs(rng.normal(0.0, 0.5, 60))
        result = bland_altman(pairs)
        first = bland_altman_svg(pairs, result)
        second = bland_altman_svg(pairs, result)
        assert first == second
        assert first.decode().count("<circle") == 60
        assert b"Mean of methods (cm)" in first
        assert b"Difference (cm)" in first

    def test_empty_pairs_rejected(self):
        with pytest.raises(InsufficientDataError):
            bland_altman_svg([], bland_altman(pairs_from_diffs([0.0, 0.0])))
