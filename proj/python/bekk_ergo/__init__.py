"""Python access to the bekk_ergo core.

Models and states are plain dicts in the same layout as the JSON files read by
the ``bekk-ergo`` tool, or paths to such files.
"""

import json
import os

from . import _core
from ._core import (
    DimensionError,
    DomainError,
    NumericalError,
    SchemaError,
    ValidationError,
    elimination_duplication,
    example_names,
    unvech,
    vech,
)

__version__ = _core.__version__


def _text(obj):
    if obj is None:
        return None
    if isinstance(obj, (str, os.PathLike)) and os.path.exists(obj):
        with open(obj, encoding="utf-8") as f:
            return f.read()
    if isinstance(obj, str):
        return obj
    return json.dumps(obj)


def example(name):
    """Built-in model as a dict."""
    return json.loads(_core.example(name))


def example_off_start(name):
    """Off-variety start state of a built-in model, or None."""
    s = _core.example_off_start(name)
    return None if s is None else json.loads(s)


def model_hash(model):
    return _core.model_hash(_text(model))


def check(model, margin=0.0):
    """Spectral radii, stationarity flag and the fixed points."""
    return json.loads(_core.check(_text(model), margin))


def certificate(model):
    """Drift certificate with its telescoping residuals."""
    return json.loads(_core.certificate(_text(model)))


def conditional_drift(model, state):
    """Returns (V(y), E[V(Y_1) | Y_0 = y])."""
    return _core.conditional_drift(_text(model), _text(state))


def simulate(model, n=1000, burn_in=0, seed=0, stream=0, innovation="gaussian",
             sqrt_mode="symmetric", start=None):
    """Returns (x, vech_sigma, metadata); arrays have one row per step."""
    x, sigma, meta = _core.simulate(_text(model), n, burn_in, seed, stream, innovation,
                                    sqrt_mode, _text(start))
    return x, sigma, json.loads(meta)


def offstate_probe(model, state, horizon=0, seed=0):
    return json.loads(_core.offstate_probe(_text(model), _text(state), horizon, seed))
