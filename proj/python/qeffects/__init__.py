"""Kraus families, fixed-point spaces and effect sharpness.

Matrices are complex numpy arrays. Structured results come back as dicts.
"""

import json

import numpy as np

from ._core import (
    Effect,
    KrausFamily,
    QEffectsError,
    Tolerance,
    commutant,
    counterexample_search,
    dual_apply,
    fixed_point_space,
    fuzzy_projection,
    gen_effect,
    gen_kraus,
    pqp_decompose,
    run_cli,
    schwarz_gap,
    sequential_product,
    suite_tags,
    superoperator,
)
from . import _core

__all__ = [
    "Effect",
    "KrausFamily",
    "QEffectsError",
    "Tolerance",
    "apply_function",
    "channel_from_json",
    "channel_to_json",
    "check_containment",
    "check_equivalence",
    "classify",
    "classify_sharpness",
    "commutant",
    "counterexample_search",
    "dual_apply",
    "family",
    "fixed_point_space",
    "fuzzy_projection",
    "gen_effect",
    "gen_kraus",
    "pqp_decompose",
    "run_cli",
    "run_suite",
    "schwarz_gap",
    "sequential_product",
    "suite_tags",
    "superoperator",
]


def _tol(tol):
    return Tolerance() if tol is None else tol


def family(operators, tol=None):
    """Validated family from a list of square arrays."""
    return KrausFamily([np.asarray(a, dtype=complex) for a in operators], _tol(tol))


def classify(fam, tol=None):
    return json.loads(_core._classify(fam, _tol(tol)))


def check_containment(fam, tol=None):
    return json.loads(_core._check_containment(fam, _tol(tol)))


def check_equivalence(fam, tol=None):
    return json.loads(_core._check_equivalence(fam, _tol(tol)))


def classify_sharpness(a, blocks=None, tol=None):
    if not isinstance(a, Effect):
        a = Effect(np.asarray(a, dtype=complex), _tol(tol))
    return json.loads(_core._classify_sharpness(a, blocks, _tol(tol)))


def apply_function(a, spec, tol=None):
    """h(A) for a FunctionSpec dict such as {"family": "power", "t": 2}."""
    if not isinstance(a, Effect):
        a = Effect(np.asarray(a, dtype=complex), _tol(tol))
    return _core._apply_function(a, json.dumps(spec), _tol(tol))


def channel_to_json(fam):
    return json.loads(fam._to_json())


def channel_from_json(obj, tol=None):
    text = obj if isinstance(obj, str) else json.dumps(obj)
    return _core._channel_from_json(text, _tol(tol))


def run_suite(dims=(2, 3), trials=10, seed=0, suites=None, search_budget=0, tol=None,
              include_timing=True):
    """Runs the property suites and returns the versioned report as a dict."""
    suites = list(suite_tags()) if suites is None else list(suites)
    text = _core._run_suite(list(dims), trials, seed, suites, search_budget, _tol(tol),
                            include_timing)
    return json.loads(text)
