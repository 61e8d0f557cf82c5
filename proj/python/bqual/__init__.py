"""Quality evaluation of bounded B abstract machines."""

from __future__ import annotations

import json
import os
from typing import Iterable, Mapping

from . import _bqual
from ._bqual import BqualError, InputError, MachineSyntaxError, PlanError, format_machine, word_count

__all__ = [
    "BqualError",
    "InputError",
    "MachineSyntaxError",
    "PlanError",
    "evaluate",
    "explore",
    "format_machine",
    "similarity",
    "word_count",
]

__version__ = "0.1.0"


def _path(p):
    return None if p is None else os.fspath(p)


def evaluate(machine, *, required=None, reference=None, goals=None, plan=None, trials=20,
             n_extra=None, n_missing=None, seed=None, word_limit=10_000, max_states=100_000,
             max_transitions=5_000_000, similarity_threshold=5_000,
             deltas: Mapping[str, os.PathLike | str] | None = None) -> dict:
    """Report dict with the same layout as ``bqual evaluate --format json``."""
    if (required is None) == (reference is None):
        raise ValueError("give exactly one of required= or reference=")
    if seed is None and os.environ.get("BQUAL_SEED"):
        seed = int(os.environ["BQUAL_SEED"], 0)
    text = _bqual.evaluate_json(
        _path(machine), _path(required), _path(reference), _path(goals), _path(plan), trials, n_extra,
        n_missing, seed, word_limit, max_states, max_transitions, similarity_threshold,
        {op: _path(p) for op, p in (deltas or {}).items()})
    return json.loads(text)


def explore(machine, *, max_states=100_000, max_transitions=5_000_000, transitions=False) -> dict:
    return json.loads(_bqual.explore_json(_path(machine), max_states, max_transitions, transitions))


def similarity(left: Iterable[dict], right: Iterable[dict]) -> int:
    """Maximum total agreement between two lists of {"pre", "op", "post"} transitions."""
    return _bqual.similarity_json(json.dumps(list(left)), json.dumps(list(right)))
