"""Adaptive-basis reduced-order models."""

import json as _json

from . import _core
from ._core import (
    AdaptromError,
    extend_and_orthonormalize,
    from_additional_basis,
    local_additional_basis,
    pod,
    read_romx,
    select_rows,
    write_romx,
)

__all__ = [
    "AdaptromError",
    "bench",
    "build_snapshots",
    "extend_and_orthonormalize",
    "from_additional_basis",
    "local_additional_basis",
    "pod",
    "read_romx",
    "run",
    "select_rows",
    "validate_config",
    "write_romx",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def validate_config(config):
    """Raise AdaptromError if the configuration (dict or JSON text) is unusable."""
    _core.validate_config(_text(config))


def build_snapshots(config):
    """Snapshot matrix, one column per parameter value or time step."""
    return _core.build_snapshots(_text(config))


def run(config):
    """Result records for every evaluation point and strategy."""
    return _json.loads(_core.run(_text(config)))


def bench(config):
    """Cost table comparing the full model with each strategy."""
    return _json.loads(_core.bench(_text(config)))
