"""Numerical tolerances, centralized.

Every comparison threshold used by the package lives in one record so the
whole stack can be tightened or relaxed consistently.  A JSON file pointed
to by the ``QSECTOR_TOLERANCES`` environment variable overrides individual
fields.
"""

from __future__ import annotations

import dataclasses
import json
import os

TOLERANCES_ENV_VAR = "QSECTOR_TOLERANCES"


@dataclasses.dataclass(frozen=True)
class Tolerances:
    unit_norm: float = 1e-10          # |  ||v|| - 1 |
    hermitian: float = 1e-10          # max |M - M^dagger|
    projector: float = 1e-9           # ||P^2 - P||
    ray_equality: float = 1e-10       # 1 - |<v|w>|
    orthogonality: float = 1e-10      # |<u_i|u_j>|, i != j
    completeness: float = 1e-9        # || sum |u_i><u_i| - I ||
    spectral_reconstruction: float = 1e-8
    degenerate_gap: float = 1e-8      # eigenvalue gap below which we reject
    frame_function: float = 1e-9      # |sum_i p(u_i) - 1| per context
    tensor_factorization: float = 1e-12
    sector_tail: float = 1e-12        # |<phi|psi> - 1| treated as exactly 1
    block_epsilon: float = 1e-6       # cross-sector magnitude threshold


def load_tolerances(path: str | None = None) -> Tolerances:
    """Tolerances from ``path``, or from $QSECTOR_TOLERANCES, or defaults."""
    if path is None:
        path = os.environ.get(TOLERANCES_ENV_VAR)
    if not path:
        return Tolerances()
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in dataclasses.fields(Tolerances)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown tolerance fields: {sorted(unknown)}")
    return Tolerances(**data)


# honors $QSECTOR_TOLERANCES at import time
DEFAULT_TOLERANCES = load_tolerances()
