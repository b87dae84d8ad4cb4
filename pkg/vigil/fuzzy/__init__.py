"""
Mamdani fuzzy classification of drowsiness
Membership functions, the rule base, fuzzy C-means calibration and the
min/max inference engine with centroid defuzzification
"""
from vigil.fuzzy.calibration import Calibration, calibrate
from vigil.fuzzy.engine import (
    Aggregate,
    Classification,
    Defuzzified,
    FuzzySystem,
    classify,
    defuzzify,
    infer,
    output_variable,
)
from vigil.fuzzy.fcm import FcmResult, fcm_cluster
from vigil.fuzzy.membership import LinguisticVariable, MembershipFunction, membership_degree
from vigil.fuzzy.rules import FuzzyRule, RuleBase, default_rule_base, load_rule_base, parse_rule

__all__ = [
    'Aggregate', 'Calibration', 'Classification', 'Defuzzified', 'FcmResult',
    'FuzzyRule', 'FuzzySystem', 'LinguisticVariable', 'MembershipFunction',
    'RuleBase', 'calibrate', 'classify', 'default_rule_base', 'defuzzify',
    'fcm_cluster', 'infer', 'load_rule_base', 'membership_degree',
    'output_variable', 'parse_rule',
]
