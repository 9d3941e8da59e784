"""Symbolic infinite sequences and product states, with log-domain numerics.

A sequence of complex factors (or of local states) is described by a
structured tail plus finitely many deviations, indexed from alpha = 1 so
"odd/even site" language is unambiguous.  Overlaps of truncated product
states are accumulated as log2-magnitude plus phase: a million factors of
1/sqrt(2) underflow any fixed-precision product but are exact in the log
domain.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import ClassVar, Mapping, Union

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatchError, InputError
from .linalg import inner, require_unit

# --------------------------------------------------------------------------
# Tails and specs
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConstantTail:
    value: object  # complex (sequence) or local state vector (product state)


@dataclass(frozen=True, eq=False)
class PeriodicTail:
    values: tuple  # one complex / local state per period position

    def __post_init__(self):
        if len(self.values) < 1:
            raise InputError("periodic tail needs at least one entry")


@dataclass(frozen=True)
class PowerLawTail:
    """z_alpha = 1 + scale * alpha ** (-exponent); sequences only."""

    scale: complex
    exponent: float

    def __post_init__(self):
        if self.exponent <= 0:
            raise InputError("power-law tail requires a positive exponent")


SequenceTail = Union[ConstantTail, PeriodicTail, PowerLawTail]


@dataclass(frozen=True, eq=False)
class SequenceSpec:
    tail: SequenceTail
    deviations: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        for idx in self.deviations:
            if idx < 1:
                raise InputError("deviation indices are 1-based")

    def factor(self, alpha: int) -> complex:
        if alpha in self.deviations:
            return complex(self.deviations[alpha])
        t = self.tail
        if isinstance(t, ConstantTail):
            return complex(t.value)
        if isinstance(t, PeriodicTail):
            return complex(t.values[(alpha - 1) % len(t.values)])
        return 1.0 + complex(t.scale) * alpha ** (-t.exponent)


# --------------------------------------------------------------------------
# Infinite-product classification
# --------------------------------------------------------------------------

CONVERGES = "converges"
QUASI_CONVERGES = "quasi_converges"
DIVERGES_TO_ZERO = "diverges_to_zero"
DIVERGES = "diverges"


@dataclass(frozen=True)
class ProductClassification:
    kind: str
    value: complex | None = None

    def __post_init__(self):
        if self.kind == CONVERGES and self.value is None:
            raise InputError("a convergent product carries a value")


def _power_law_tail_value(scale: complex, p: float, terms: int = 100_000) -> complex:
    """Product over alpha>=1 of (1 + scale*alpha^-p), p > 1.

    Direct log-sum of the first ``terms`` factors plus an Euler-Maclaurin
    tail estimate; exp of the sum is branch-safe.
    """
    alphas = np.arange(1, terms + 1, dtype=np.float64)
    factors = 1.0 + complex(scale) * alphas ** (-p)
    log_sum = complex(np.sum(np.log(factors)))
    edge = terms + 0.5
    tail = complex(scale) * edge ** (1.0 - p) / (p - 1.0)
    tail -= complex(scale) ** 2 * edge ** (1.0 - 2.0 * p) / (2.0 * (2.0 * p - 1.0))
    return cmath.exp(log_sum + tail)


def classify_product(
    spec: SequenceSpec, tol: Tolerances = DEFAULT_TOLERANCES
) -> ProductClassification:
    """von Neumann convergence class of the infinite product of factors.

    Convergence requires sum |z_alpha - 1| < infinity over the tail; an
    exact-zero factor anywhere makes the product trivially convergent to 0.
    Quasi-convergence is detected for unimodular constant/periodic tails
    whose phases do not settle at 1.  Conditionally convergent edge cases
    are reported as divergent (documented limitation).
    """
    if any(z == 0 for z in map(complex, spec.deviations.values())):
        return ProductClassification(CONVERGES, 0j)

    t = spec.tail
    close = tol.sector_tail

    def moduli_verdict(values: tuple[complex, ...]) -> ProductClassification:
        if all(abs(z - 1.0) <= close for z in values):
            tail_value = 1.0 + 0j
        elif any(z == 0 for z in values):
            return ProductClassification(CONVERGES, 0j)
        elif all(abs(abs(z) - 1.0) <= close for z in values):
            return ProductClassification(QUASI_CONVERGES)
        else:
            mod = math.prod(abs(z) for z in values)
            if mod < 1.0:
                return ProductClassification(DIVERGES_TO_ZERO)
            return ProductClassification(DIVERGES)
        value = tail_value
        for idx, dev in spec.deviations.items():
            value *= complex(dev) / spec_tail_factor(spec, idx)
        return ProductClassification(CONVERGES, value)

    if isinstance(t, ConstantTail):
        return moduli_verdict((complex(t.value),))
    if isinstance(t, PeriodicTail):
        return moduli_verdict(tuple(complex(z) for z in t.values))

    # power law
    c = complex(t.scale)
    p = t.exponent
    bound = int(abs(c) ** (1.0 / p)) + 2
    for alpha in range(1, bound + 1):
        if alpha not in spec.deviations and 1.0 + c * alpha ** (-p) == 0:
            return ProductClassification(CONVERGES, 0j)
    if c == 0:
        value = 1.0 + 0j
        for idx, dev in spec.deviations.items():
            value *= complex(dev)
        return ProductClassification(CONVERGES, value)
    if p > 1.0:
        value = _power_law_tail_value(c, p)
        for idx, dev in spec.deviations.items():
            value *= complex(dev) / spec_tail_factor(spec, idx)
        return ProductClassification(CONVERGES, value)
    if c.real < 0:
        return ProductClassification(DIVERGES_TO_ZERO)
    return ProductClassification(DIVERGES)


def spec_tail_factor(spec: SequenceSpec, alpha: int) -> complex:
    """Tail factor at alpha, ignoring deviations."""
    t = spec.tail
    if isinstance(t, ConstantTail):
        return complex(t.value)
    if isinstance(t, PeriodicTail):
        return complex(t.values[(alpha - 1) % len(t.values)])
    return 1.0 + complex(t.scale) * alpha ** (-t.exponent)


# --------------------------------------------------------------------------
# Product states
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProductStateSpec:
    """An infinite product state: structured tail of local unit states plus
    finitely many per-site deviations (1-based indices)."""

    local_dim: int
    tail: Union[ConstantTail, PeriodicTail]
    deviations: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        states = []
        if isinstance(self.tail, ConstantTail):
            states.append(self.tail.value)
        elif isinstance(self.tail, PeriodicTail):
            states.extend(self.tail.values)
        else:
            raise InputError("product-state tails are constant or periodic")
        states.extend(self.deviations.values())
        for s in states:
            v = require_unit(s)
            if v.size != self.local_dim:
                raise DimensionMismatchError("local state dim mismatch")
        for idx in self.deviations:
            if idx < 1:
                raise InputError("deviation indices are 1-based")

    @property
    def period(self) -> int:
        return len(self.tail.values) if isinstance(self.tail, PeriodicTail) else 1

    def tail_state(self, alpha: int) -> np.ndarray:
        if isinstance(self.tail, ConstantTail):
            return self.tail.value
        return self.tail.values[(alpha - 1) % len(self.tail.values)]

    def site_state(self, alpha: int) -> np.ndarray:
        if alpha in self.deviations:
            return self.deviations[alpha]
        return self.tail_state(alpha)

    def last_deviation(self) -> int:
        return max(self.deviations, default=0)


# --------------------------------------------------------------------------
# Log-domain amplitudes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LogAmplitude:
    """A complex amplitude as log2-magnitude plus phase (radians)."""

    log2_magnitude: float
    phase: float = 0.0

    ZERO: ClassVar["LogAmplitude"]  # set below

    @property
    def is_zero(self) -> bool:
        return self.log2_magnitude == -math.inf

    @property
    def magnitude(self) -> float:
        return 0.0 if self.is_zero else 2.0 ** self.log2_magnitude

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return self.magnitude * cmath.exp(1j * self.phase)

    @classmethod
    def of(cls, z: complex) -> "LogAmplitude":
        z = complex(z)
        if z == 0:
            return cls.ZERO
        return cls(math.log2(abs(z)), cmath.phase(z))

    def scaled(self, z: complex) -> "LogAmplitude":
        other = LogAmplitude.of(z)
        if self.is_zero or other.is_zero:
            return LogAmplitude.ZERO
        return LogAmplitude(
            self.log2_magnitude + other.log2_magnitude, self.phase + other.phase
        )


LogAmplitude.ZERO = LogAmplitude(-math.inf, 0.0)


def log_sum(terms: list[LogAmplitude]) -> LogAmplitude:
    """Sum of log-domain amplitudes, rescaled by the dominant magnitude."""
    live = [t for t in terms if not t.is_zero]
    if not live:
        return LogAmplitude.ZERO
    if len(live) == 1:
        return live[0]
    top = max(t.log2_magnitude for t in live)
    acc = 0j
    for t in live:
        acc += 2.0 ** (t.log2_magnitude - top) * cmath.exp(1j * t.phase)
    if acc == 0:
        return LogAmplitude.ZERO
    return LogAmplitude(top + math.log2(abs(acc)), cmath.phase(acc))


# --------------------------------------------------------------------------
# Overlap kernel
# --------------------------------------------------------------------------


class OverlapKernel:
    """Precomputed per-residue tail factors for <Psi_n|Phi_n> evaluations.

    Evaluation at any truncation n costs O(period + deviations), so curves
    over n up to 10^6 are cheap and exact in the log domain.
    """

    def __init__(self, bra: ProductStateSpec, ket: ProductStateSpec):
        if bra.local_dim != ket.local_dim:
            raise DimensionMismatchError("product states differ in local_dim")
        self.bra = bra
        self.ket = ket
        self.period = math.lcm(bra.period, ket.period)
        self.residue_factors = [
            complex(inner(bra.tail_state(r), ket.tail_state(r)))
            for r in range(1, self.period + 1)
        ]
        self.special = sorted(set(bra.deviations) | set(ket.deviations))
        self.special_factors = {
            a: complex(inner(bra.site_state(a), ket.site_state(a)))
            for a in self.special
        }

    def evaluate(self, n: int, exclude: frozenset[int] = frozenset()) -> LogAmplitude:
        if n < 1:
            raise InputError("truncation must be >= 1")
        log2_mag = 0.0
        phase = 0.0
        skipped = set(self.special) | set(exclude)
        for r in range(1, self.period + 1):
            if r > n:
                break
            count = (n - r) // self.period + 1
            count -= sum(
                1 for a in skipped if a <= n and (a - 1) % self.period == r - 1
            )
            if count <= 0:
                continue
            z = self.residue_factors[r - 1]
            if z == 0:
                return LogAmplitude.ZERO
            log2_mag += count * math.log2(abs(z))
            phase += count * cmath.phase(z)
        for a in self.special:
            if a > n or a in exclude:
                continue
            z = self.special_factors[a]
            if z == 0:
                return LogAmplitude.ZERO
            log2_mag += math.log2(abs(z))
            phase += cmath.phase(z)
        return LogAmplitude(log2_mag, phase)


def truncated_overlap(
    bra: ProductStateSpec, ket: ProductStateSpec, n: int
) -> LogAmplitude:
    """Product over alpha <= n of <psi_alpha|phi_alpha>, in the log domain."""
    return OverlapKernel(bra, ket).evaluate(n)


@dataclass(frozen=True)
class CurvePoint:
    n: int
    magnitude: float
    log2_magnitude: float


def orthogonalization_curve(
    bra: ProductStateSpec, ket: ProductStateSpec, n_list: list[int]
) -> list[CurvePoint]:
    if list(n_list) != sorted(set(n_list)):
        raise InputError("n_list must be strictly ascending")
    kernel = OverlapKernel(bra, ket)
    out = []
    for n in n_list:
        amp = kernel.evaluate(n)
        out.append(CurvePoint(n, amp.magnitude, amp.log2_magnitude))
    return out


# --------------------------------------------------------------------------
# Sector equivalence
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorVerdict:
    same_sector: bool
    witness: str  # convergence class of sum |<phi_alpha|psi_alpha> - 1|


def same_sector(
    a: ProductStateSpec,
    b: ProductStateSpec,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SectorVerdict:
    """Decide whether sum_alpha |<phi_alpha|psi_alpha> - 1| converges.

    Deviations contribute finitely many terms, so the verdict is decided by
    the tail pattern alone: every tail position must have overlap exactly 1
    (a constant tail is a period-1 periodic tail for comparison purposes).
    """
    if a.local_dim != b.local_dim:
        raise DimensionMismatchError("product states differ in local_dim")
    period = math.lcm(a.period, b.period)
    for r in range(1, period + 1):
        z = inner(a.tail_state(r), b.tail_state(r))
        if abs(z - 1.0) > tol.sector_tail:
            return SectorVerdict(False, DIVERGES)
    return SectorVerdict(True, CONVERGES)


# --------------------------------------------------------------------------
# JSON (de)serialization
# --------------------------------------------------------------------------


def _state_from_json(entries) -> np.ndarray:
    return np.array([complex(re, im) for re, im in entries], dtype=np.complex128)


def _state_to_json(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def product_state_from_json(data: dict) -> ProductStateSpec:
    try:
        local_dim = int(data["local_dim"])
        tail = data["tail"]
        kind = tail["kind"]
        if kind == "constant":
            tail_obj = ConstantTail(_state_from_json(tail["data"]))
        elif kind == "periodic":
            tail_obj = PeriodicTail(tuple(_state_from_json(s) for s in tail["data"]))
        else:
            raise InputError(f"unknown tail kind {kind!r}")
        deviations = {
            int(idx): _state_from_json(state)
            for idx, state in data.get("deviations", {}).items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed product-state spec: {exc}") from exc
    return ProductStateSpec(local_dim, tail_obj, deviations)


def product_state_to_json(spec: ProductStateSpec) -> dict:
    if isinstance(spec.tail, ConstantTail):
        tail = {"kind": "constant", "data": _state_to_json(spec.tail.value)}
    else:
        tail = {"kind": "periodic", "data": [_state_to_json(s) for s in spec.tail.values]}
    return {
        "local_dim": spec.local_dim,
        "tail": tail,
        "deviations": {
            str(i): _state_to_json(s) for i, s in sorted(spec.deviations.items())
        },
    }
