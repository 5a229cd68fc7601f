"""Greedy-basis laboratory: quasi-greedy and suppression-unconditional constants.

Thin wrapper over the C++ core.  Instances are the same JSON documents the
``gbl`` CLI consumes (``schema: gbl/1``); every function accepts either a dict
or a JSON string.
"""

import json as _json

from ._core import (
    GblError,
    constants as _constants,
    dual_coefficients as _dual_coefficients,
    gallery_families,
    gallery_json as _gallery_json,
    analyze_json as _analyze_json,
    greedy_indices as _greedy_indices,
    norm as _norm,
    renorm_json as _renorm_json,
    witness_json as _witness_json,
)

__all__ = [
    "GblError",
    "analyze",
    "constants",
    "dual_coefficients",
    "gallery",
    "gallery_families",
    "greedy_indices",
    "norm",
    "renorm",
    "witness",
]


def _text(instance):
    if isinstance(instance, str):
        return instance
    return _json.dumps(instance)


def gallery(name):
    """Builtin instance (dict) for a gallery name such as ``"shear-2"``."""
    return _json.loads(_gallery_json(name))


def analyze(instance, budget=10000, seed=0, tol=1e-9, all_ties=False):
    """Full report: estimates for K_su, C_w, C_t, C_qg plus the verdict."""
    return _json.loads(_analyze_json(_text(instance), budget, seed, tol, all_ties))


def witness(instance, hilbert=False, budget=10000, seed=0, tol=1e-9):
    """Strongest greedy-violation certificate, or per-pair Hilbert witnesses."""
    return _json.loads(_witness_json(_text(instance), hilbert, budget, seed, tol))


def renorm(instance):
    """The 1-suppression renormed instance (dict)."""
    return _json.loads(_renorm_json(_text(instance)))


def constants(instance, budget=10000, seed=0):
    """Estimates with native witnesses (numpy arrays, 0-based index lists)."""
    return _constants(_text(instance), budget, seed)


def norm(instance, x):
    """Evaluate the instance norm at ``x``."""
    return _norm(_text(instance), x)


def dual_coefficients(instance, x):
    """Biorthogonal coefficients of ``x`` in the instance basis."""
    return _dual_coefficients(_text(instance), x)


def greedy_indices(instance, x, n):
    """One valid greedy set of size ``n`` for ``x`` (0-based)."""
    return _greedy_indices(_text(instance), x, n)
