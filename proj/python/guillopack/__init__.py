"""Guillotine two-dimensional knapsack: separability, L-packing,
compartment-based solving and exhaustive oracles.

Instances and packings are plain dicts in the same JSON layout the
``guillopack`` command line uses.
"""

import json

try:
    from . import _guillopack as _core
except ImportError:  # in-tree build: the extension sits next to the package
    import _guillopack as _core

InputError = _core.InputError
BudgetExceeded = _core.BudgetExceeded

__all__ = [
    "InputError", "BudgetExceeded", "check", "solve", "oracle", "nfdh", "lpack",
    "classify", "compose", "render_svg", "ratio", "gen_hard", "gen_random", "pinwheel",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def check(packing):
    """Validity, separability, stage count and cut tree of a packing."""
    return json.loads(_core.check(_dump(packing)))


def solve(instance, eps="1/3", compartments=None, mode="auto", seed=1,
          eps_large=None, eps_small=None, max_trees=400):
    """Cardinality pipeline. Without compartments they are enumerated."""
    comps = None if compartments is None else _dump(compartments)
    return json.loads(_core.solve(_dump(instance), str(eps), comps, mode, seed,
                                  None if eps_large is None else str(eps_large),
                                  None if eps_small is None else str(eps_small), max_trees))


def oracle(instance, flavor="guillotine", budget=50_000_000):
    return json.loads(_core.oracle(_dump(instance), flavor, budget))


def nfdh(instance):
    return json.loads(_core.nfdh(_dump(instance)))


def lpack(instance, h_wide, w_tall, objective="cardinality"):
    return json.loads(_core.lpack(_dump(instance), h_wide, w_tall, objective))


def classify(instance, eps="1/3", eps_large=None, eps_small=None):
    return json.loads(_core.classify(_dump(instance), str(eps),
                                     None if eps_large is None else str(eps_large),
                                     None if eps_small is None else str(eps_small)))


def compose(compartments, instance, fillings):
    return json.loads(_core.compose(_dump(compartments), _dump(instance), _dump(fillings)))


def render_svg(packing, cuts=True):
    return _core.render_svg(_dump(packing), cuts)


def ratio(instances, budget=5_000_000):
    return json.loads(_core.ratio([_dump(i) for i in instances], budget))


def gen_hard(k):
    return json.loads(_core.gen_hard(k))


def gen_random(n, side, profile="mixed", seed=1, unit_profit=False):
    return json.loads(_core.gen_random(n, side, profile, seed, unit_profit))


def pinwheel():
    return json.loads(_core.pinwheel())
