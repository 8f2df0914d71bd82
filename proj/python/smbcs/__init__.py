"""Scattershot multiboson correlation sampling."""

import json

from ._core import (
    DomainError,
    GuardExceeded,
    NumericAssertion,
    at_least_one_probability,
    eigenphases,
    gaussian_diagnostics,
    haar_random,
    perm_fast,
    perm_glynn,
    perm_naive,
    photon_statistics,
    single_photon_probability,
    source_count,
    squeezing_for_at_least_one,
    success_curve,
    success_probability,
    unitarity_defect,
)
from . import _core

__version__ = "0.1.0"


def default_config():
    return json.loads(_core.default_config_json())


def _config_text(config):
    merged = default_config()
    for key, value in (config or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key].update(value)
        else:
            merged[key] = value
    return json.dumps(merged)


def config_hash(config=None):
    return _core.config_hash(_config_text(config))


def distribution(config=None, modes=None):
    """Exact outcome distribution for photons at ports 0..N-1."""
    return json.loads(_core.distribution_json(_config_text(config), modes))


def simulate(config=None):
    """One record per sample, as written to simulate.jsonl by the CLI."""
    return json.loads(_core.simulate_json(_config_text(config)))
