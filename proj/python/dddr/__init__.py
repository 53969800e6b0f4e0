"""Decision-dependent distributionally robust facility location."""

import json as _json
import os as _os

from ._core import *  # noqa: F401,F403
from ._core import (
    __version__,
    _config_hash,
    _export_lp,
    _generate_instance,
    _normalize_config,
    _problem_from_json,
    _problem_to_json,
    _run,
)


def _text(config):
    return _json.dumps(config if config is not None else {})


def normalize_config(config=None):
    """Validated config with every default filled in."""
    return _json.loads(_normalize_config(_text(config)))


def config_hash(config=None):
    return _config_hash(_text(config))


def generate_instance(config=None, seed=1):
    """Seeded instance for an experiment config given as a dict."""
    return _generate_instance(_text(config), seed)


def run(config, out_dir):
    """Run the full pipeline; returns the written files relative to out_dir."""
    return _run(_text(config), _os.fspath(out_dir))


def problem_to_dict(problem):
    return _json.loads(_problem_to_json(problem))


def problem_from_dict(doc):
    return _problem_from_json(_json.dumps(doc))


def export_lp(problem, method="dddr", dual_bound=100.0, cuts=False, budget=None):
    return _export_lp(problem, method, dual_bound, cuts, budget)
