"""Request -> response handlers shared by the FastAPI app and the CLI."""

from __future__ import annotations

import math

import numpy as np

from ..contextuality import (
    Context,
    KSInstance,
    born_assignment,
    ks_colorability,
    ones_assignment,
    uniform_assignment,
    verify_frame_function,
)
from ..errors import InputError
from ..linalg import Ray, random_unit, random_unitary
from ..measurement import CascadeConfig, coherence_curve, sample_outcome
from ..operators import expr_from_json, sector_block_report
from ..sequences import (
    orthogonalization_curve,
    product_state_from_json,
    same_sector,
)
from . import schemas as s


def _product_state(model: s.ProductStateSpecModel):
    return product_state_from_json(model.model_dump())


def ks_check(req: s.KsCheckRequest) -> s.KsCheckResponse:
    instance = KSInstance.from_json(req.instance.model_dump())
    assignment = ks_colorability(instance)
    return s.KsCheckResponse(
        colorable=assignment is not None,
        assignment=list(assignment.values) if assignment is not None else None,
        contexts_checked=len(instance.contexts),
    )


def gleason_test(req: s.GleasonTestRequest) -> s.GleasonTestResponse:
    if req.dim < 2:
        raise InputError("dim must be >= 2")
    if req.contexts < 1:
        raise InputError("contexts must be >= 1")
    rng = np.random.default_rng(req.seed)
    if req.state is not None:
        vec = np.array([complex(re, im) for re, im in req.state])
        if vec.size != req.dim:
            raise InputError("state vector does not match dim")
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise InputError("state vector is zero")
        psi = Ray(vec / nrm)
    else:
        psi = Ray(random_unit(req.dim, rng))
    if req.assignment == "born":
        p = born_assignment(psi)
    elif req.assignment == "uniform":
        p = uniform_assignment(req.dim)
    else:
        p = ones_assignment()
    contexts = [
        Context(tuple(random_unitary(req.dim, rng).T), label=f"random-{i}")
        for i in range(req.contexts)
    ]
    report = verify_frame_function(p, contexts)
    return s.GleasonTestResponse(
        passed=report.passed,
        tolerance=report.tolerance,
        checks=[
            s.ContextSumModel(
                label=c.label, total=c.total, passed=c.passed, failure=c.failure
            )
            for c in report.checks
        ],
    )


def _finite(log2_magnitude: float):
    """JSON has no -inf; an exact zero travels as null."""
    return None if log2_magnitude == -math.inf else log2_magnitude


def _curve_models(points) -> list[s.CurvePointModel]:
    return [
        s.CurvePointModel(
            n=p.n, overlap_abs=p.magnitude, log2_overlap_abs=_finite(p.log2_magnitude)
        )
        for p in points
    ]


def sector(req: s.SectorRequest) -> s.SectorResponse:
    a = _product_state(req.spec_a)
    b = _product_state(req.spec_b)
    verdict = same_sector(a, b)
    curve = orthogonalization_curve(a, b, req.n_list)
    return s.SectorResponse(
        same_sector=verdict.same_sector,
        witness=verdict.witness,
        curve=_curve_models(curve),
    )


def overlap(req: s.OverlapRequest) -> s.OverlapResponse:
    a = _product_state(req.spec_a)
    b = _product_state(req.spec_b)
    curve = orthogonalization_curve(a, b, req.n_list)
    return s.OverlapResponse(curve=_curve_models(curve))


def operator_block(req: s.OperatorBlockRequest) -> s.OperatorBlockResponse:
    expr = expr_from_json(req.expr)
    reps = [_product_state(m) for m in req.reps]
    report = sector_block_report(
        expr, reps, req.truncation, epsilon=req.epsilon, term_budget=req.term_budget
    )
    entries = [
        s.BlockEntryModel(
            row=row,
            col=col,
            row_sector=rs,
            col_sector=cs,
            magnitude=mag,
            log2_magnitude=_finite(log2),
        )
        for row, col, rs, cs, mag, log2 in report.rows()
    ]
    return s.OperatorBlockResponse(
        sector_labels=list(report.sector_labels),
        entries=entries,
        cross_sector_max=report.cross_sector_max,
        epsilon=report.epsilon,
        truncation=report.truncation,
        passes=report.passes,
    )


def cascade(req: s.CascadeRequest) -> s.CascadeResponse:
    config = CascadeConfig(
        amplitudes=tuple(complex(re, im) for re, im in req.config.amplitudes),
        pointer_overlap=req.config.pointer_overlap,
        initial_size=req.config.initial_size,
        growth=req.config.growth,
        depth_cap=req.config.depth_cap,
    )
    report = coherence_curve(config, req.depths)
    histogram = sample_outcome(config, req.samples, req.seed)
    return s.CascadeResponse(
        coherence=[
            s.CoherenceEntryModel(
                depth=e.depth,
                device_size=e.device_size,
                j=e.j,
                k=e.k,
                magnitude=e.magnitude,
                log2_magnitude=_finite(e.log2_magnitude),
            )
            for e in report.entries
        ],
        traces=list(report.traces),
        histogram=s.HistogramModel(
            counts=list(histogram.counts),
            frequencies=list(histogram.frequencies),
            probabilities=list(histogram.probabilities),
            samples=histogram.samples,
            seed=histogram.seed,
        ),
    )
