"""Contexts, modalities, extravalence, Born probabilities, frame functions,
and the Kochen-Specker {0,1}-colorability search."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatchError, InputError
from .linalg import Ray, as_cvec, inner, projector, random_unit, spectral


@dataclass(frozen=True, eq=False)
class Context:
    """A complete projective measurement: an orthonormal basis of the space."""

    basis: tuple[np.ndarray, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.basis) < 2:
            raise InputError("a context needs dimension >= 2")
        dim = self.basis[0].size
        tol = DEFAULT_TOLERANCES
        for v in self.basis:
            if v.size != dim:
                raise DimensionMismatchError("context basis vectors differ in dim")
            if abs(np.linalg.norm(v) - 1.0) > tol.unit_norm:
                raise InputError("context basis vector is not unit")
        if len(self.basis) != dim:
            raise InputError("context must contain exactly dim vectors")
        for i in range(dim):
            for j in range(i + 1, dim):
                if abs(inner(self.basis[i], self.basis[j])) > tol.orthogonality:
                    raise InputError(f"basis vectors {i},{j} are not orthogonal")
        resolution = sum(projector(v) for v in self.basis)
        if float(np.linalg.norm(resolution - np.eye(dim))) > tol.completeness:
            raise InputError("projectors do not resolve the identity")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def rays(self) -> list[Ray]:
        return [Ray(v) for v in self.basis]

    def index_of(self, ray: Ray, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
        for i, v in enumerate(self.basis):
            if abs(inner(v, ray.vector)) >= 1.0 - tol.ray_equality:
                return i
        raise InputError("ray is not an element of this context")


@dataclass(frozen=True, eq=False)
class Modality:
    """A ray regarded as an eigenstate of one specific context."""

    ray: Ray
    context: Context
    index: int

    def __post_init__(self):
        if not (0 <= self.index < self.context.dim):
            raise InputError("modality index out of range")
        ov = abs(inner(self.context.basis[self.index], self.ray.vector))
        if ov < 1.0 - DEFAULT_TOLERANCES.ray_equality:
            raise InputError("ray is not the indexed eigenstate of the context")

    @property
    def dim(self) -> int:
        return self.ray.dim


def context_from_observable(h: np.ndarray, label: str = "") -> Context:
    """Context of a non-degenerate Hermitian observable, ascending eigenvalue."""
    pairs = spectral(h)
    return Context(tuple(v for _, v in pairs), label=label)


def modality(ray: Ray, context: Context) -> Modality:
    return Modality(ray, context, context.index_of(ray))


def extravalent(m1: Modality, m2: Modality) -> bool:
    """Same extravalence class: the two modalities share a ray."""
    if m1.dim != m2.dim:
        raise DimensionMismatchError("modalities live in different dimensions")
    return m1.ray == m2.ray


def contexts_containing(
    ray: Ray, count: int, seed: int = 0
) -> list[Context]:
    """``count`` distinct contexts all admitting ``ray`` as a basis element.

    Completion is by seeded random vectors orthonormalized against the ray
    (Gram-Schmidt), so the result is deterministic for a given seed.
    """
    if count < 1:
        raise InputError("count must be >= 1")
    dim = ray.dim
    if dim < 3 and count > 1:
        raise InputError("extravalence requires dim >= 3")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        basis = [np.array(ray.vector)]
        while len(basis) < dim:
            v = random_unit(dim, rng)
            for u in basis:
                v = v - inner(u, v) * u
            nrm = np.linalg.norm(v)
            if nrm < 1e-6:
                continue
            basis.append(v / nrm)
        out.append(Context(tuple(basis), label=f"completion-{seed}-{k}"))
    return out


def born_probability(a: Ray, b: Ray) -> float:
    """|<a|b>|^2; a function of the two rays only, hence non-contextual."""
    if a.dim != b.dim:
        raise DimensionMismatchError("rays live in different dimensions")
    p = abs(inner(a.vector, b.vector)) ** 2
    return min(1.0, max(0.0, p))


class ProbabilityAssignment:
    """A non-contextual probability over rays: p depends on the ray alone.

    Backed by a callable; explicit per-ray overrides take precedence (keyed
    by canonical-phase rounding with exact ray-equality resolution).
    """

    def __init__(
        self,
        fn: Optional[Callable[[Ray], float]] = None,
        overrides: Optional[dict[Ray, float]] = None,
        name: str = "",
    ):
        self._fn = fn
        self._overrides = dict(overrides or {})
        self.name = name

    def __call__(self, ray: Ray) -> float:
        if ray in self._overrides:
            return self._overrides[ray]
        if self._fn is None:
            raise KeyError("unassigned ray")
        return self._fn(ray)


def born_assignment(psi: Ray) -> ProbabilityAssignment:
    return ProbabilityAssignment(
        fn=lambda ray: born_probability(ray, psi), name="born"
    )


def uniform_assignment(dim: int) -> ProbabilityAssignment:
    return ProbabilityAssignment(fn=lambda ray: 1.0 / dim, name="uniform")


def ones_assignment() -> ProbabilityAssignment:
    """Deliberately invalid frame function: p = 1 everywhere."""
    return ProbabilityAssignment(fn=lambda ray: 1.0, name="ones")


@dataclass(frozen=True)
class ContextCheck:
    label: str
    total: float
    passed: bool
    failure: str = ""


@dataclass(frozen=True)
class FrameFunctionReport:
    checks: tuple[ContextCheck, ...]
    passed: bool
    tolerance: float


def verify_frame_function(
    p: ProbabilityAssignment,
    contexts: Sequence[Context],
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> FrameFunctionReport:
    """Check the frame-function hypothesis: values in [0,1], unit sum per context."""
    checks = []
    all_ok = True
    for i, ctx in enumerate(contexts):
        label = ctx.label or f"context-{i}"
        total = 0.0
        failure = ""
        ok = True
        for ray in ctx.rays():
            try:
                value = p(ray)
            except KeyError:
                ok = False
                failure = "unassigned ray"
                break
            if not (0.0 <= value <= 1.0):
                ok = False
                failure = f"value {value!r} outside [0,1]"
                break
            total += value
        if ok and abs(total - 1.0) > tol.frame_function:
            ok = False
            failure = f"sum {total!r} != 1"
        checks.append(ContextCheck(label, total, ok, failure))
        all_ok = all_ok and ok
    return FrameFunctionReport(tuple(checks), all_ok, tol.frame_function)


# --------------------------------------------------------------------------
# Kochen-Specker colorability
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KSInstance:
    """A finite KS coloring instance: vectors plus contexts of index sets.

    Contexts are materialized and validated on construction; vectors that
    are equal as rays are merged into one coloring variable.
    """

    dim: int
    vectors: tuple[np.ndarray, ...]
    contexts: tuple[tuple[int, ...], ...]
    classes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.dim < 2:
            raise InputError("KS instance needs dim >= 2")
        for v in self.vectors:
            if v.size != self.dim:
                raise DimensionMismatchError("vector dim mismatch")
        for idx_set in self.contexts:
            if len(set(idx_set)) != self.dim:
                raise InputError("each context must list dim distinct vectors")
            if any(i < 0 or i >= len(self.vectors) for i in idx_set):
                raise InputError("context references an unknown vector")
            Context(tuple(self.vectors[i] for i in idx_set))
        rays = [Ray(v) for v in self.vectors]
        classes = [-1] * len(rays)
        next_class = 0
        for i, r in enumerate(rays):
            for j in range(i):
                if rays[j] == r:
                    classes[i] = classes[j]
                    break
            else:
                classes[i] = next_class
                next_class += 1
        object.__setattr__(self, "classes", tuple(classes))

    @property
    def n_classes(self) -> int:
        return max(self.classes) + 1

    @classmethod
    def from_json(cls, data: dict) -> "KSInstance":
        try:
            dim = int(data["dim"])
            vectors = tuple(
                np.array([complex(re, im) for re, im in vec], dtype=np.complex128)
                for vec in data["vectors"]
            )
            contexts = tuple(tuple(int(i) for i in ctx) for ctx in data["contexts"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed KS instance: {exc}") from exc
        vectors = tuple(v / np.linalg.norm(v) for v in vectors)
        return cls(dim, vectors, contexts)

    @classmethod
    def load(cls, path: str) -> "KSInstance":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vectors": [
                [[float(z.real), float(z.imag)] for z in v] for v in self.vectors
            ],
            "contexts": [list(c) for c in self.contexts],
        }


@dataclass(frozen=True)
class ValueAssignment:
    """{0,1} values per vector; same ray always carries the same value."""

    instance: KSInstance
    values: tuple[int, ...]  # indexed by vector position

    def value_of(self, index: int) -> int:
        return self.values[index]

    def verify(self) -> bool:
        for ctx in self.instance.contexts:
            if sum(self.values[i] for i in ctx) != 1:
                return False
        for i, ci in enumerate(self.instance.classes):
            for j in range(i):
                if self.instance.classes[j] == ci and self.values[j] != self.values[i]:
                    return False
        return True


def _propagate(
    instance: KSInstance, values: list[int], queue: list[int]
) -> bool:
    """Unit propagation over contexts; values are -1/0/1 per ray class."""
    by_class = [[] for _ in range(instance.n_classes)]
    for ci, ctx in enumerate(instance.contexts):
        for vi in ctx:
            by_class[instance.classes[vi]].append(ci)
    while queue:
        cls = queue.pop()
        for ci in by_class[cls]:
            ctx_classes = [instance.classes[vi] for vi in instance.contexts[ci]]
            ones = sum(1 for c in ctx_classes if values[c] == 1)
            zeros = sum(1 for c in ctx_classes if values[c] == 0)
            if ones > 1 or (zeros == len(ctx_classes)):
                return False
            if ones == 1:
                for c in ctx_classes:
                    if values[c] == -1:
                        values[c] = 0
                        queue.append(c)
            elif zeros == len(ctx_classes) - 1:
                for c in ctx_classes:
                    if values[c] == -1:
                        values[c] = 1
                        queue.append(c)
    return True


def _search(instance: KSInstance, values: list[int]) -> Iterator[list[int]]:
    try:
        cls = values.index(-1)
    except ValueError:
        # complete; contexts were kept consistent by propagation
        for ctx in instance.contexts:
            if sum(values[instance.classes[vi]] for vi in ctx) != 1:
                return
        yield list(values)
        return
    for choice in (1, 0):
        trial = list(values)
        trial[cls] = choice
        if _propagate(instance, trial, [cls]):
            yield from _search(instance, trial)


def ks_colorings(instance: KSInstance) -> Iterator[ValueAssignment]:
    """Exhaustively enumerate all admissible {0,1} colorings."""
    values = [-1] * instance.n_classes
    for solution in _search(instance, values):
        per_vector = tuple(solution[instance.classes[i]] for i in range(len(instance.vectors)))
        yield ValueAssignment(instance, per_vector)


def ks_colorability(instance: KSInstance) -> Optional[ValueAssignment]:
    """First admissible coloring, or None.

    The backtracking search with unit propagation is exhaustive, so None is
    a non-colorability certificate for the instance.
    """
    return next(ks_colorings(instance), None)
