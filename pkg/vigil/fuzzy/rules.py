"""
Fuzzy rule base for the drowsiness state
Rules read 'A=S & V=S & D=S -> DS=S': a conjunction of input literals and
one output term
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from vigil.errors import RuleSyntaxError
from vigil.fuzzy.membership import TERMS

logger = logging.getLogger(__name__)

INPUT_VARIABLES = ('A', 'V', 'D')
OUTPUT_VARIABLE = 'DS'

# The first rule is printed with consequent "D = S"; DS is the only output,
# so it is read as DS = S.
DEFAULT_RULES = """\
A=M -> DS=S
A=S & V=S & D=S -> DS=S
A=L & V=L & D=L -> DS=L
A=L & V=S & D=M -> DS=S
A=L & V=S & D=L -> DS=S
A=S & V=M & D=M -> DS=S
A=S & V=L & D=M -> DS=M
A=S & V=M & D=L -> DS=S
A=S & V=L & D=L -> DS=M
"""

_LITERAL = re.compile(r'^\s*([A-Za-z]+)\s*=\s*([A-Za-z])\s*$')


@dataclass(frozen=True)
class FuzzyRule:
    """if <antecedent literals> then DS = <consequent>"""

    antecedent: tuple
    consequent: str
    label: str = ''

    def __post_init__(self):
        antecedent = tuple((var.upper(), term.upper()) for var, term in self.antecedent)
        if not 1 <= len(antecedent) <= len(INPUT_VARIABLES):
            raise RuleSyntaxError(f"rule needs 1 to 3 literals, got {len(antecedent)}")
        seen = set()
        for var, term in antecedent:
            if var not in INPUT_VARIABLES:
                raise RuleSyntaxError(f"unknown input variable {var!r}")
            if term not in TERMS:
                raise RuleSyntaxError(f"unknown term {term!r} for {var}")
            if var in seen:
                raise RuleSyntaxError(f"variable {var} appears twice in one rule")
            seen.add(var)
        if self.consequent.upper() not in TERMS:
            raise RuleSyntaxError(f"unknown output term {self.consequent!r}")
        object.__setattr__(self, 'antecedent', antecedent)
        object.__setattr__(self, 'consequent', self.consequent.upper())

    def strength(self, degrees):
        """
        Firing strength: minimum over the antecedent literals

        Args:
            degrees: var -> {term -> degree}

        Returns:
            Strength in [0, 1]
        """
        return min(degrees[var][term] for var, term in self.antecedent)


@dataclass(frozen=True)
class RuleBase:
    """Ordered rules; strengths are reported in this order"""

    rules: tuple

    def __post_init__(self):
        object.__setattr__(self, 'rules', tuple(self.rules))
        if not self.rules:
            raise RuleSyntaxError("rule base is empty")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    @property
    def labels(self):
        return tuple(rule.label for rule in self.rules)


def parse_rule(line, label=''):
    """
    Parse one rule

    Args:
        line: Text such as 'A=S & V=M & D=L -> DS=S'
        label: Name recorded in traces

    Returns:
        FuzzyRule
    """
    if '->' not in line:
        raise RuleSyntaxError(f"missing '->' in rule {line.strip()!r}")
    left, right = line.split('->', 1)
    literals = []
    for part in left.split('&'):
        match = _LITERAL.match(part)
        if not match:
            raise RuleSyntaxError(f"bad literal {part.strip()!r} in rule {line.strip()!r}")
        literals.append((match.group(1), match.group(2)))
    match = _LITERAL.match(right)
    if not match or match.group(1).upper() != OUTPUT_VARIABLE:
        raise RuleSyntaxError(f"consequent must be DS=<term>, got {right.strip()!r}")
    return FuzzyRule(tuple(literals), match.group(2), label)


def format_rule(rule):
    """Inverse of parse_rule"""
    left = ' & '.join(f'{var}={term}' for var, term in rule.antecedent)
    return f'{left} -> {OUTPUT_VARIABLE}={rule.consequent}'


def parse_rule_base(text):
    """
    Parse one rule per line; blank lines and '#' comments are skipped

    Returns:
        RuleBase with rules labelled rule_1, rule_2, ...
    """
    rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            rules.append(parse_rule(line, f'rule_{len(rules) + 1}'))
        except RuleSyntaxError as e:
            raise RuleSyntaxError(f"line {number}: {e}") from None
    return RuleBase(tuple(rules))


def default_rule_base():
    """The nine drowsiness rules"""
    return parse_rule_base(DEFAULT_RULES)


def load_rule_base(path):
    """Read a rule-base override file"""
    rule_base = parse_rule_base(Path(path).read_text(encoding='ascii', errors='replace'))
    if len(rule_base) != 9:
        logger.warning("Rule base %s has %d rules instead of the usual nine", path, len(rule_base))
    return rule_base
