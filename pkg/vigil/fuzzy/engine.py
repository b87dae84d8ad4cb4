"""
Mamdani inference over arousal, valence and dominance
min for AND, min-implication, max-aggregation, centroid defuzzification
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from vigil.errors import FeatureUndefinedError, InputError
from vigil.fuzzy.membership import LinguisticVariable, MembershipFunction
from vigil.fuzzy.rules import OUTPUT_VARIABLE

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 501
DEFAULT_RESOLUTION = 10001
INDETERMINATE_DS = 0.5
EMPTY_MASS = 1e-12


def output_variable():
    """Drowsiness state DS on [0, 1] with fixed Small/Medium/Large triangles"""
    return LinguisticVariable(
        OUTPUT_VARIABLE,
        {
            'S': MembershipFunction(0.0, 0.0, 0.5),
            'M': MembershipFunction(0.0, 0.5, 1.0),
            'L': MembershipFunction(0.5, 1.0, 1.0),
        },
        (0.0, 1.0),
    )


@dataclass(frozen=True)
class Aggregate:
    """Aggregated output fuzzy set sampled on the DS universe"""

    universe: np.ndarray
    degrees: np.ndarray
    strengths: tuple


@dataclass(frozen=True)
class Defuzzified:
    value: float
    indeterminate: bool


@dataclass(frozen=True)
class Classification:
    """Crisp DS score with the firing strength of every rule"""

    ds: float
    indeterminate: bool
    strengths: tuple
    rule_labels: tuple

    def trace(self):
        return dict(zip(self.rule_labels, self.strengths))


def _inputs(x):
    values = {'A': x.arousal, 'V': x.valence, 'D': x.dominance}
    for name, value in values.items():
        if value is None or not math.isfinite(value):
            raise FeatureUndefinedError(name, 'input', float('nan'))
    return values


def firing_strengths(rules, variables, x):
    """
    Strength of every rule for one feature vector

    Args:
        rules: RuleBase
        variables: Calibrated input variables keyed 'A', 'V', 'D'
        x: FeatureVector

    Returns:
        Tuple of strengths in rule order
    """
    inputs = _inputs(x)
    degrees = {name: variables[name].fuzzify(value) for name, value in inputs.items()}
    return tuple(rule.strength(degrees) for rule in rules)


def _sample_terms(output, resolution):
    if resolution < MIN_RESOLUTION:
        raise InputError(f"output resolution must be >= {MIN_RESOLUTION}, got {resolution}")
    universe = np.linspace(*output.universe, resolution)
    return universe, {term: mf.degree(universe) for term, mf in output.terms.items()}


def _aggregate(rules, strengths, universe, term_degrees):
    degrees = np.zeros_like(universe)
    for rule, strength in zip(rules, strengths):
        if strength > 0:
            degrees = np.maximum(degrees, np.minimum(term_degrees[rule.consequent], strength))
    return Aggregate(universe, degrees, strengths)


def infer(rules, variables, x, output=None, resolution=DEFAULT_RESOLUTION):
    """
    Mamdani inference

    Each rule fires at the minimum of its literal degrees, clips its output
    term at that strength, and the clipped terms are combined by pointwise max.

    Args:
        rules: RuleBase
        variables: Calibrated input variables keyed 'A', 'V', 'D'
        x: FeatureVector
        output: Output LinguisticVariable, defaults to output_variable()
        resolution: Number of evenly spaced DS samples

    Returns:
        Aggregate
    """
    universe, term_degrees = _sample_terms(output or output_variable(), resolution)
    return _aggregate(rules, firing_strengths(rules, variables, x), universe, term_degrees)


def defuzzify(aggregate):
    """
    Centroid of the aggregated set

    Samples are weighted by the trapezoid rule (endpoints count half), so
    the result is sum(w x mu) / sum(w mu).

    Args:
        aggregate: Aggregate

    Returns:
        Defuzzified; an empty set gives DS = 0.5 flagged indeterminate
    """
    x = aggregate.universe
    mu = aggregate.degrees
    if mu.sum() < EMPTY_MASS:
        return Defuzzified(INDETERMINATE_DS, True)
    weights = np.ones_like(x)
    weights[0] = weights[-1] = 0.5
    weighted = weights * mu
    return Defuzzified(float(np.sum(weighted * x) / np.sum(weighted)), False)


@dataclass(frozen=True)
class FuzzySystem:
    """Calibrated, immutable classifier"""

    rules: object
    variables: dict
    output: LinguisticVariable = field(default_factory=output_variable)
    resolution: int = DEFAULT_RESOLUTION
    _universe: np.ndarray = field(init=False, repr=False, compare=False)
    _term_degrees: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        missing = [name for name in ('A', 'V', 'D') if name not in self.variables]
        if missing:
            raise InputError(f"fuzzy system lacks input variables {', '.join(missing)}")
        universe, term_degrees = _sample_terms(self.output, self.resolution)
        object.__setattr__(self, '_universe', universe)
        object.__setattr__(self, '_term_degrees', term_degrees)

    def infer(self, x):
        strengths = firing_strengths(self.rules, self.variables, x)
        return _aggregate(self.rules, strengths, self._universe, self._term_degrees)

    def classify(self, x):
        """
        DS score and rule trace for one feature vector

        Raises:
            FeatureUndefinedError: x holds an undefined feature
        """
        aggregate = self.infer(x)
        result = defuzzify(aggregate)
        if result.indeterminate:
            logger.debug("No rule fired for epoch at %g s; DS set to %.1f", x.epoch_start_s, result.value)
        labels = tuple(rule.label or f'rule_{i}' for i, rule in enumerate(self.rules, start=1))
        return Classification(result.value, result.indeterminate, aggregate.strengths, labels)


def classify(x, system):
    """
    Classify one epoch

    Args:
        x: FeatureVector
        system: FuzzySystem

    Returns:
        Classification
    """
    return system.classify(x)
