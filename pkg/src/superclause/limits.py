"""Resource caps used across the package.

Caps live in a context variable so that callers (and the CLI) can tighten or
relax them for a block of code without threading arguments through every
function::

    with limits(max_vars=16):
        entails(f, g)

``SUPERCLAUSE_MAX_VARS`` in the environment overrides the default entailment
cap when no explicit value is set.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os

DEFAULT_MAX_VARS = 24
DEFAULT_CLOSURE_BUDGET = 100_000
DEFAULT_ORACLE_CAP = 18
DEFAULT_PROVER_NODES = 20_000


@dataclasses.dataclass(frozen=True)
class Limits:
    max_vars: int = DEFAULT_MAX_VARS
    closure_budget: int = DEFAULT_CLOSURE_BUDGET
    oracle_cap: int = DEFAULT_ORACLE_CAP
    prover_nodes: int = DEFAULT_PROVER_NODES


def _initial() -> Limits:
    env = os.environ.get("SUPERCLAUSE_MAX_VARS")
    if env:
        return Limits(max_vars=int(env))
    return Limits()


_current: contextvars.ContextVar[Limits | None] = contextvars.ContextVar("superclause_limits", default=None)


def current() -> Limits:
    value = _current.get()
    return value if value is not None else _initial()


@contextlib.contextmanager
def limits(**overrides):
    """Temporarily override one or more caps."""
    overrides = {k: v for k, v in overrides.items() if v is not None}
    token = _current.set(dataclasses.replace(current(), **overrides))
    try:
        yield current()
    finally:
        _current.reset(token)
