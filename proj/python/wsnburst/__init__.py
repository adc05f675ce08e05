"""N-Burst WSN traffic model: closed-form results and a discrete-event simulator.

Distribution specs and configs are plain dicts with the same keys as the JSON
config file, e.g. ``{"kind": "pareto", "alpha": 1.4, "mean": 50}``.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    blowup_points,
    burstiness,
    mpd_smooth_limit,
)

__version__ = _core.__version__

__all__ = [
    "ConfigError",
    "DomainError",
    "blowup_points",
    "build_topology",
    "bulk_factor",
    "burstiness",
    "derive_source_params",
    "load_config",
    "mean_of",
    "mpd_bulk_limit",
    "mpd_smooth_limit",
    "normalize_config",
    "reliability",
    "run_replication",
    "run_sweep",
    "sample",
    "tpt_calibrate",
    "validate_topology",
]


def _dump(value):
    return value if isinstance(value, str) else _json.dumps(value)


def reliability(spec, x):
    """Pr(X > x)."""
    return _core.reliability(_dump(spec), float(x))


def mean_of(spec):
    return _core.mean_of(_dump(spec))


def sample(spec, count, seed):
    """`count` draws from one seeded stream, as a list of floats."""
    return _core.sample(_dump(spec), int(count), int(seed))


def tpt_calibrate(theta, alpha, mean, truncation):
    return _json.loads(_core.tpt_calibrate(theta, alpha, mean, truncation))


def derive_source_params(lambda_total, N, n_p, b, on="exp", off="exp", mode="constant"):
    """Per-source rates and ON/OFF laws. `on`/`off` take the config's on_kind/off_kind forms."""
    return _json.loads(_core.derive_source_params(lambda_total, N, n_p, b, _json.dumps(on), _json.dumps(off), mode))


def bulk_factor(law, samples=1_000_000, seed=0x5EED):
    """D for a burst law "geom:<n_p>" or "det:<L>"; returns (value, std_error, unstable)."""
    return _core.bulk_factor(law, samples, seed)


def mpd_bulk_limit(v, rho, law):
    return _core.mpd_bulk_limit(v, rho, law)


def normalize_config(config):
    """Validate a config dict and return it with every default filled in."""
    return _json.loads(_core.normalize_config(_dump(config)))


def load_config(path):
    return _json.loads(_core.load_config(str(path)))


def build_topology(config, N):
    return _json.loads(_core.build_topology(_dump(config), int(N)))


def validate_topology(config, N):
    """List of (invariant, detail) pairs; empty when the topology is sound."""
    return _core.validate_topology(_dump(config), int(N))


def run_replication(config, N, b, day=0):
    """One simulated day at (N, b); seeded like the sweep harness."""
    return _json.loads(_core.run_replication(_dump(config), int(N), float(b), int(day)))


def run_sweep(config, parallel=1, write_files=False):
    """Full sweep. Returns {"rows": [...], "files": [...], "warnings": [...]}."""
    return _json.loads(_core.run_sweep(_dump(config), int(parallel), bool(write_files)))
