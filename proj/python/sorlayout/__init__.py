"""SOR-based GUI layout constraint solver."""

import json as _json

from ._sorlayout import (
    ConstraintSystem,
    Layout,
    SolverError,
    bench_main,
    fit_cubic,
    generate_layout,
    solve,
    solve_with_insertion,
)
from ._sorlayout import _Service

__all__ = [
    "ConstraintSystem",
    "Layout",
    "Service",
    "SolverError",
    "bench_main",
    "fit_cubic",
    "generate_layout",
    "solve",
    "solve_with_insertion",
]


class Service:
    """In-process solver service speaking the JSON message protocol."""

    def __init__(self, max_sessions=64, omega=0.7, tolerance=0.01, token_seed=0):
        self._impl = _Service(max_sessions, omega, tolerance, token_seed)

    def handle(self, message):
        return _json.loads(self._impl.handle(_json.dumps(message)))

    @property
    def session_count(self):
        return self._impl.session_count
