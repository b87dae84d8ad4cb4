"""
Unit tests for membership functions, rules, calibration and inference
"""
import logging

import numpy as np
import pytest

from vigil.errors import ClusteringError, FeatureUndefinedError, InputError, RuleSyntaxError
from vigil.features import FeatureVector
from vigil.fuzzy import (
    FuzzySystem,
    LinguisticVariable,
    MembershipFunction,
    calibrate,
    classify,
    default_rule_base,
    defuzzify,
    infer,
    load_rule_base,
    membership_degree,
    output_variable,
    parse_rule,
)
from vigil.fuzzy.calibration import calibrate_variable, terms_from_centers
from vigil.fuzzy.engine import firing_strengths
from vigil.fuzzy.rules import format_rule, parse_rule_base


def clipped_centroid(term, height, points=100001):
    """Centroid of an output term clipped at height, by dense numeric integration"""
    x = np.linspace(0.0, 1.0, points)
    shapes = {
        'S': np.clip(1 - 2 * x, 0, 1),
        'M': np.clip(1 - np.abs(2 * x - 1), 0, 1),
        'L': np.clip(2 * x - 1, 0, 1),
    }
    mu = np.minimum(shapes[term], height)

    def integral(y):
        return np.sum((y[1:] + y[:-1]) / 2 * np.diff(x))

    return integral(x * mu) / integral(mu)


def unit_variables():
    """A, V and D with apexes at 0, 1 and 2"""
    return {name: LinguisticVariable(name, terms_from_centers(0.0, 1.0, 2.0), (-0.1, 2.1))
            for name in ('A', 'V', 'D')}


def vector(a, v, d):
    return FeatureVector(a, v, d)


class TestMembership:
    """Test triangular membership functions"""

    def test_triangle(self):
        """Test the rising edge, apex and falling edge"""
        mf = MembershipFunction(0.0, 1.0, 2.0)
        assert membership_degree(mf, 0.5) == 0.5
        assert membership_degree(mf, 1.0) == 1.0
        assert membership_degree(mf, 1.5) == 0.5
        assert membership_degree(mf, 2.0) == 0.0
        assert membership_degree(mf, -1.0) == 0.0

    def test_shoulders(self):
        """Test that shoulders saturate beyond their apex"""
        left = MembershipFunction(0.0, 0.0, 1.0)
        right = MembershipFunction(1.0, 2.0, 2.0)
        assert membership_degree(left, -5.0) == 1.0
        assert membership_degree(left, 0.25) == 0.75
        assert membership_degree(right, 10.0) == 1.0
        assert membership_degree(right, 1.5) == 0.5

    def test_vectorized(self):
        """Test evaluation on an array"""
        mf = MembershipFunction(0.0, 1.0, 2.0)
        np.testing.assert_allclose(mf.degree([0.0, 0.5, 1.0, 3.0]), [0.0, 0.5, 1.0, 0.0])

    def test_invalid_breakpoints(self):
        with pytest.raises(InputError):
            MembershipFunction(2.0, 1.0, 3.0)

    def test_variable_needs_all_terms(self):
        """Test that S, M and L are all required"""
        with pytest.raises(InputError):
            LinguisticVariable('A', {'S': MembershipFunction(0, 0, 1)}, (0.0, 1.0))

    def test_partition_of_unity(self):
        """Test that calibrated terms sum to one between the outer apexes"""
        var = unit_variables()['A']
        for x in np.linspace(0.0, 2.0, 41):
            assert sum(var.fuzzify(x).values()) == pytest.approx(1.0)
        assert var.covers()


class TestRules:
    """Test rule parsing"""

    def test_default_rule_base(self):
        """Test the nine default rules"""
        rules = default_rule_base()
        assert len(rules) == 9
        assert rules.labels == tuple(f'rule_{i}' for i in range(1, 10))
        first = rules.rules[0]
        assert first.antecedent == (('A', 'M'),)
        assert first.consequent == 'S'
        assert format_rule(rules.rules[2]) == 'A=L & V=L & D=L -> DS=L'

    def test_parse_case_and_spacing(self):
        """Test lowercase names and loose spacing"""
        rule = parse_rule(' a = s &  v=m -> ds = l ')
        assert rule.antecedent == (('A', 'S'), ('V', 'M'))
        assert rule.consequent == 'L'

    @pytest.mark.parametrize('text', [
        'A=S & V=M',
        'X=S -> DS=S',
        'A=Q -> DS=S',
        'A=S & A=M -> DS=S',
        'A=S -> D=S',
        'A=S -> DS=Z',
    ])
    def test_syntax_errors(self, text):
        """Test malformed rule lines"""
        with pytest.raises(RuleSyntaxError):
            parse_rule(text)

    def test_error_reports_line(self):
        """Test that a bad line in a rule file is located"""
        with pytest.raises(RuleSyntaxError, match='line 3'):
            parse_rule_base('# rules\nA=S -> DS=S\nA=S V=M -> DS=S\n')

    def test_override_file(self, tmp_path, caplog):
        """Test that a short override file loads with a warning"""
        path = tmp_path / 'rules.txt'
        path.write_text('A=S -> DS=L\nA=L -> DS=S  # reversed\n')
        with caplog.at_level(logging.WARNING, logger='vigil.fuzzy.rules'):
            rules = load_rule_base(path)
        assert len(rules) == 2
        assert 'instead of the usual nine' in caplog.text


class TestCalibration:
    """Test membership calibration by clustering"""

    def test_centers_become_apexes(self, rng):
        """Test that three clusters give the S, M and L apexes"""
        values = np.concatenate([rng.normal(m, 0.1, 30) for m in (1.0, 4.0, 9.0)])
        var, centers, fallback, result = calibrate_variable('A', values)
        assert not fallback
        np.testing.assert_allclose(centers, [1.0, 4.0, 9.0], atol=0.1)
        assert var.apex('S') == centers[0]
        assert var.apex('M') == centers[1]
        assert var.apex('L') == centers[2]
        assert result.converged
        assert var.covers()

    def test_universe_padding(self):
        """Test the 5% margin around the observed range"""
        var, _, _, _ = calibrate_variable('A', [0.0, 1.0, 2.0, 10.0])
        assert var.universe == pytest.approx((-0.5, 10.5))

    def test_too_few_values_fall_back(self):
        """Test the uniform partition for fewer than three values"""
        var, centers, fallback, result = calibrate_variable('D', [1.0, 2.0])
        assert fallback
        assert result is None
        assert centers == pytest.approx((0.95, 1.5, 2.05))

    def test_constant_series_falls_back(self):
        """Test that a constant series gets a narrow uniform partition"""
        var, centers, fallback, _ = calibrate_variable('V', [0.0] * 6)
        assert fallback
        assert centers == pytest.approx((-0.05, 0.0, 0.05))
        assert var.fuzzify(0.0)['M'] == 1.0

    def test_non_finite_values_ignored(self):
        """Test that NaN entries are dropped before clustering"""
        _, centers, fallback, _ = calibrate_variable('A', [1.0, np.nan, 5.0, 9.0])
        assert not fallback
        np.testing.assert_allclose(centers, [1.0, 5.0, 9.0], atol=1e-3)

    def test_cluster_count(self):
        """Test that only three clusters are accepted"""
        with pytest.raises(ClusteringError):
            calibrate_variable('A', [1.0, 2.0, 3.0, 4.0], c=4)

    def test_calibrate_all(self, rng):
        """Test calibrating the three features together"""
        series = {name: rng.uniform(0, 10, 40) for name in ('A', 'V', 'D')}
        calibration = calibrate(series)
        assert set(calibration.variables) == {'A', 'V', 'D'}
        assert not any(calibration.fallback.values())


class TestInference:
    """Test Mamdani inference and defuzzification"""

    def setup_method(self):
        """Calibrated system with apexes at 0, 1 and 2"""
        self.system = FuzzySystem(default_rule_base(), unit_variables())

    def test_all_small(self):
        """Test that the all-S apex gives DS below 0.5"""
        result = classify(vector(0.0, 0.0, 0.0), self.system)
        assert result.ds < 0.5
        assert result.ds == pytest.approx(1 / 6, abs=1e-6)
        assert result.trace()['rule_2'] == 1.0

    def test_all_large(self):
        """Test that the all-L apex gives DS above 0.5"""
        result = classify(vector(2.0, 2.0, 2.0), self.system)
        assert result.ds > 0.5
        assert result.ds == pytest.approx(5 / 6, abs=1e-6)

    def test_medium_arousal_fires_first_rule_only(self):
        """Test that A at its M apex fires only the first rule"""
        result = classify(vector(1.0, 0.0, 2.0), self.system)
        assert result.strengths == (1.0,) + (0.0,) * 8
        assert result.ds == pytest.approx(1 / 6, abs=1e-6)

    @pytest.mark.parametrize('a', [0.3, 0.55, 0.9])
    def test_clipped_centroid_matches_integration(self, a):
        """Test one clipped rule against dense numeric integration"""
        # V at L and D at S leave only the A=M rule able to fire
        x = vector(a, 2.0, 0.0)
        strengths = firing_strengths(self.system.rules, self.system.variables, x)
        fired = [s for s in strengths if s > 0]
        assert fired == [pytest.approx(a)]
        assert classify(x, self.system).ds == pytest.approx(clipped_centroid('S', a), abs=1e-6)

    def test_clipped_medium_output(self):
        """Test that a clipped M output stays centred"""
        # A=S, V=L and D between S and M fire rule 7 (-> M) and nothing else
        x = vector(0.0, 2.0, 0.4)
        result = classify(x, self.system)
        assert result.strengths[6] == pytest.approx(0.4)
        assert sum(s > 0 for s in result.strengths) == 1
        assert result.ds == pytest.approx(clipped_centroid('M', 0.4), abs=1e-6)
        assert result.ds == pytest.approx(0.5, abs=1e-6)

    def test_indeterminate(self):
        """Test DS = 0.5 flagged when no rule fires"""
        result = classify(vector(2.0, 1.0, 0.0), self.system)
        assert result.indeterminate
        assert result.ds == 0.5
        assert not any(result.strengths)

    def test_infer_and_defuzzify(self):
        """Test the module functions used without a FuzzySystem"""
        aggregate = infer(default_rule_base(), unit_variables(), vector(2.0, 2.0, 2.0), resolution=501)
        assert len(aggregate.universe) == 501
        assert aggregate.degrees.max() == 1.0
        assert defuzzify(aggregate).value == pytest.approx(5 / 6, abs=1e-4)

    def test_undefined_input(self):
        """Test that a NaN feature is refused"""
        with pytest.raises(FeatureUndefinedError):
            classify(vector(np.nan, 0.0, 0.0), self.system)

    def test_resolution_floor(self):
        """Test that coarse output grids are refused"""
        with pytest.raises(InputError):
            FuzzySystem(default_rule_base(), unit_variables(), resolution=100)

    def test_output_terms(self):
        """Test the fixed DS terms"""
        out = output_variable()
        assert out.universe == (0.0, 1.0)
        assert [out.apex(t) for t in ('S', 'M', 'L')] == [0.0, 0.5, 1.0]
