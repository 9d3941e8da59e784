"""Pydantic request/response models for the REST service and the CLI.

Complex numbers travel as [re, im] pairs; state vectors as lists of pairs.
These models are the single wire format: the CLI builds requests from its
flags and input files and renders responses to JSON/CSV artifacts.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

ComplexPair = tuple[float, float]
StateVector = list[ComplexPair]


class TailModel(BaseModel):
    kind: Literal["constant", "periodic"]
    data: Any  # a state for "constant", a list of states for "periodic"


class ProductStateSpecModel(BaseModel):
    local_dim: int
    tail: TailModel
    deviations: dict[str, StateVector] = Field(default_factory=dict)


class KSInstanceModel(BaseModel):
    dim: int
    vectors: list[StateVector]
    contexts: list[list[int]]


class KsCheckRequest(BaseModel):
    instance: KSInstanceModel


class KsCheckResponse(BaseModel):
    colorable: bool
    assignment: Optional[list[int]] = None  # per listed vector
    contexts_checked: int


class GleasonTestRequest(BaseModel):
    dim: int = 4
    contexts: int = 100
    seed: int = 0
    state: Optional[StateVector] = None  # random unit state when omitted
    assignment: Literal["born", "uniform", "ones"] = "born"


class ContextSumModel(BaseModel):
    label: str
    total: float
    passed: bool
    failure: str = ""


class GleasonTestResponse(BaseModel):
    passed: bool
    tolerance: float
    checks: list[ContextSumModel]


class CurvePointModel(BaseModel):
    n: int
    overlap_abs: float
    log2_overlap_abs: Optional[float]  # None encodes an exact zero overlap


class SectorRequest(BaseModel):
    spec_a: ProductStateSpecModel
    spec_b: ProductStateSpecModel
    n_list: list[int] = Field(default_factory=lambda: [4, 8, 16, 32, 64])


class SectorResponse(BaseModel):
    same_sector: bool
    witness: str
    curve: list[CurvePointModel]


class OverlapRequest(BaseModel):
    spec_a: ProductStateSpecModel
    spec_b: ProductStateSpecModel
    n_list: list[int]


class OverlapResponse(BaseModel):
    curve: list[CurvePointModel]


class OperatorBlockRequest(BaseModel):
    expr: dict  # nested {op: sum|product|scale|site, ...} tree
    reps: list[ProductStateSpecModel]
    truncation: int = 64
    epsilon: float = 1e-6
    term_budget: int = 100_000


class BlockEntryModel(BaseModel):
    row: int
    col: int
    row_sector: int
    col_sector: int
    magnitude: float
    log2_magnitude: Optional[float]


class OperatorBlockResponse(BaseModel):
    sector_labels: list[int]
    entries: list[BlockEntryModel]
    cross_sector_max: float
    epsilon: float
    truncation: int
    passes: bool


class CascadeConfigModel(BaseModel):
    amplitudes: list[ComplexPair]
    pointer_overlap: float
    initial_size: int = 1
    growth: float = 2.0
    depth_cap: int = 60


class CascadeRequest(BaseModel):
    config: CascadeConfigModel
    depths: list[int] = Field(default_factory=lambda: list(range(11)))
    samples: int = 100_000
    seed: int = 0


class CoherenceEntryModel(BaseModel):
    depth: int
    device_size: int
    j: int
    k: int
    magnitude: float
    log2_magnitude: Optional[float]


class HistogramModel(BaseModel):
    counts: list[int]
    frequencies: list[float]
    probabilities: list[float]
    samples: int
    seed: int


class CascadeResponse(BaseModel):
    coherence: list[CoherenceEntryModel]
    traces: list[float]
    histogram: HistogramModel
