"""Measurement-cascade simulator.

The entangled system+device state is kept as a finite list of branches
(amplitude, pointer product-state spec); the device Hilbert space is never
materialized, so device sizes up to 10^6 sites are exact.  Distinct pointer
states share a uniform per-site overlap eta, so off-diagonal coherences
decay as eta**L while the cascade grows the device.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .sequences import ConstantTail, LogAmplitude, ProductStateSpec, truncated_overlap


@dataclass(frozen=True)
class CascadeConfig:
    amplitudes: tuple[complex, ...]
    pointer_overlap: float  # eta, per-site overlap between distinct pointers
    initial_size: int = 1
    growth: float = 2.0
    depth_cap: int = 60

    def __post_init__(self):
        total = sum(abs(a) ** 2 for a in self.amplitudes)
        if abs(total - 1.0) > 1e-10:
            raise InputError(f"amplitudes are not normalized (sum {total!r})")
        if not (0.0 <= self.pointer_overlap < 1.0):
            raise InputError("pointer overlap must lie in [0, 1)")
        if self.initial_size < 1:
            raise InputError("initial device size must be >= 1")
        if self.growth <= 1.0:
            raise InputError("growth factor must exceed 1")
        if self.depth_cap < 0:
            raise InputError("depth cap must be >= 0")

    @property
    def outcomes(self) -> int:
        return len(self.amplitudes)

    def probabilities(self) -> np.ndarray:
        return np.array([abs(a) ** 2 for a in self.amplitudes])


def pointer_local_states(m: int, eta: float) -> list[np.ndarray]:
    """m local states with pairwise inner product exactly eta.

    For m <= 2 two qubit states at Bloch angle arccos(eta) suffice; for
    larger m the states sqrt(eta)|0> + sqrt(1-eta)|k> in dimension m+1 give
    the uniform overlap for any eta in [0, 1).
    """
    if m < 1:
        raise InputError("need at least one outcome")
    if m == 1:
        return [np.array([1.0 + 0j])]
    if m == 2:
        s = math.sqrt(1.0 - eta * eta)
        return [
            np.array([1.0, 0.0], dtype=np.complex128),
            np.array([eta, s], dtype=np.complex128),
        ]
    a = math.sqrt(eta)
    b = math.sqrt(1.0 - eta)
    out = []
    for k in range(m):
        v = np.zeros(m + 1, dtype=np.complex128)
        v[0] = a
        v[k + 1] = b
        out.append(v)
    return out


@dataclass(frozen=True)
class BranchState:
    """sum_k psi_k |u_k> (x) |D_k> with each pointer a product-state spec."""

    amplitudes: tuple[complex, ...]
    pointers: tuple[ProductStateSpec, ...]
    device_size: int
    depth: int = 0

    def __post_init__(self):
        if len(self.amplitudes) != len(self.pointers):
            raise InputError("one pointer spec per branch is required")
        if self.device_size < 1:
            raise InputError("device size must be >= 1")

    def pointer_overlap_amplitude(self, j: int, k: int) -> LogAmplitude:
        """<D_k|D_j> truncated at the current device size."""
        return truncated_overlap(self.pointers[k], self.pointers[j], self.device_size)

    def coherence(self, j: int, k: int) -> LogAmplitude:
        """rho_jk = psi_j psi_k^* <D_k|D_j>."""
        factor = self.amplitudes[j] * self.amplitudes[k].conjugate()
        return self.pointer_overlap_amplitude(j, k).scaled(factor)

    def populations(self) -> np.ndarray:
        return np.array([abs(a) ** 2 for a in self.amplitudes])


def premeasure(config: CascadeConfig) -> BranchState:
    """Depth-0 entangled state: device of ``initial_size`` sites per branch."""
    locals_ = pointer_local_states(config.outcomes, config.pointer_overlap)
    dim = locals_[0].size
    pointers = tuple(
        ProductStateSpec(dim, ConstantTail(v)) for v in locals_
    )
    return BranchState(tuple(config.amplitudes), pointers, config.initial_size, 0)


def cascade_step(
    state: BranchState, growth: float, depth_cap: int = 60
) -> BranchState:
    """One cascade stage: device size L -> ceil(growth * L), amplitudes fixed."""
    if state.depth + 1 > depth_cap:
        raise InputError(f"depth cap {depth_cap} exceeded")
    new_size = math.ceil(growth * state.device_size)
    return BranchState(state.amplitudes, state.pointers, new_size, state.depth + 1)


def device_sizes(config: CascadeConfig, depths: Sequence[int]) -> list[int]:
    """Device size reached at each requested depth along the cascade ladder."""
    if any(d < 0 for d in depths):
        raise InputError("depths must be >= 0")
    top = max(depths, default=0)
    if top > config.depth_cap:
        raise InputError(f"depth cap {config.depth_cap} exceeded")
    sizes = [config.initial_size]
    for _ in range(top):
        sizes.append(math.ceil(config.growth * sizes[-1]))
    return [sizes[d] for d in depths]


@dataclass(frozen=True)
class CoherenceEntry:
    depth: int
    device_size: int
    j: int
    k: int
    magnitude: float
    log2_magnitude: float


@dataclass(frozen=True)
class CoherenceReport:
    entries: tuple[CoherenceEntry, ...]
    traces: tuple[float, ...]  # sum_k rho_kk per depth; pointers are normalized


def coherence_curve(config: CascadeConfig, depths: Sequence[int]) -> CoherenceReport:
    """|rho_jk| = |psi_j psi_k| * eta**L at each depth, in the log domain."""
    sizes = device_sizes(config, depths)
    eta = config.pointer_overlap
    log2_eta = math.log2(eta) if eta > 0.0 else -math.inf
    entries = []
    traces = []
    m = config.outcomes
    for depth, size in zip(depths, sizes):
        for j in range(m):
            for k in range(m):
                if j == k:
                    continue
                weight = abs(config.amplitudes[j] * config.amplitudes[k])
                if weight == 0.0 or eta == 0.0:
                    log2_mag = -math.inf
                else:
                    log2_mag = math.log2(weight) + size * log2_eta
                mag = 0.0 if log2_mag == -math.inf else 2.0 ** log2_mag
                entries.append(CoherenceEntry(depth, size, j, k, mag, log2_mag))
        traces.append(float(np.sum(config.probabilities())))
    return CoherenceReport(tuple(entries), tuple(traces))


@dataclass(frozen=True)
class SampleReport:
    counts: tuple[int, ...]
    frequencies: tuple[float, ...]
    probabilities: tuple[float, ...]
    samples: int
    seed: int


def sample_outcome(config: CascadeConfig, samples: int, seed: int) -> SampleReport:
    """Born-weighted outcome draws; deterministic for a given seed."""
    if samples < 1:
        raise InputError("sample count must be >= 1")
    probs = config.probabilities()
    probs = probs / probs.sum()  # guard rounding so choice() accepts it
    rng = np.random.default_rng(seed)
    draws = rng.choice(config.outcomes, size=samples, p=probs)
    counts = np.bincount(draws, minlength=config.outcomes)
    return SampleReport(
        counts=tuple(int(c) for c in counts),
        frequencies=tuple(float(c) / samples for c in counts),
        probabilities=tuple(float(p) for p in probs),
        samples=samples,
        seed=seed,
    )


def cascade_config_from_json(data: dict) -> CascadeConfig:
    try:
        amplitudes = tuple(
            complex(re, im) for re, im in data["amplitudes"]
        )
        return CascadeConfig(
            amplitudes=amplitudes,
            pointer_overlap=float(data["pointer_overlap"]),
            initial_size=int(data.get("initial_size", 1)),
            growth=float(data.get("growth", 2.0)),
            depth_cap=int(data.get("depth_cap", 60)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed cascade config: {exc}") from exc


def cascade_config_to_json(config: CascadeConfig) -> dict:
    return {
        "amplitudes": [[a.real, a.imag] for a in config.amplitudes],
        "pointer_overlap": config.pointer_overlap,
        "initial_size": config.initial_size,
        "growth": config.growth,
        "depth_cap": config.depth_cap,
    }
