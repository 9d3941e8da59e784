"""Embedded Kochen-Specker instances.

The canonical non-colorable witness is the 18-vector, 9-context set in
dimension 4 (Cabello, Estebaranz, Garcia-Alcaine).  Entries are 0/±1 so all
orthogonality relations are exact.  Each vector appears in exactly two
contexts, which makes the set non-colorable by a parity argument; the
search proves it independently.
"""

from __future__ import annotations

import numpy as np

from .contextuality import KSInstance

_CABELLO_VECTORS = [
    (0, 0, 0, 1),
    (0, 0, 1, 0),
    (1, 1, 0, 0),
    (1, -1, 0, 0),
    (0, 1, 0, 0),
    (1, 0, 1, 0),
    (1, 0, -1, 0),
    (1, -1, 1, -1),
    (1, -1, -1, 1),
    (0, 0, 1, 1),
    (1, 1, 1, 1),
    (0, 1, 0, -1),
    (1, 0, 0, 1),
    (1, 0, 0, -1),
    (0, 1, -1, 0),
    (1, 1, -1, 1),
    (1, 1, 1, -1),
    (-1, 1, 1, 1),
]

_CABELLO_CONTEXTS = [
    (0, 1, 2, 3),
    (0, 4, 5, 6),
    (7, 8, 2, 9),
    (7, 10, 6, 11),
    (1, 4, 12, 13),
    (8, 10, 13, 14),
    (15, 16, 3, 9),
    (15, 17, 5, 11),
    (16, 17, 12, 14),
]

# Two overlapping bases in dim 3 sharing e1; coloring e1 = 1 works.
_CONTROL_VECTORS = [
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (0, 1, 1),
    (0, 1, -1),
]

_CONTROL_CONTEXTS = [
    (0, 1, 2),
    (0, 3, 4),
]


def _instance(dim: int, raw_vectors, contexts) -> KSInstance:
    vectors = tuple(
        (lambda a: a / np.linalg.norm(a))(np.array(v, dtype=np.complex128))
        for v in raw_vectors
    )
    return KSInstance(dim, vectors, tuple(contexts))


def cabello18() -> KSInstance:
    return _instance(4, _CABELLO_VECTORS, _CABELLO_CONTEXTS)


def colorable_control() -> KSInstance:
    return _instance(3, _CONTROL_VECTORS, _CONTROL_CONTEXTS)


BUILTIN_INSTANCES = {
    "cabello18": cabello18,
    "control": colorable_control,
}
