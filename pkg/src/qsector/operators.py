"""Completed single-site operators and the ring of their finite combinations.

An expression tree over single-site leaves is expanded into a normal form:
a sum of terms, each a coefficient times per-site local matrices (products
of operators on the same site compose locally; operators on distinct sites
commute and factorize).  Every term's matrix element between truncated
product states is then a product of local brackets, accumulated in the log
domain, so truncations up to 10^6 sites stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import DimensionMismatchError, InputError, TermBudgetExceededError
from .linalg import as_cmat
from .sequences import (
    LogAmplitude,
    OverlapKernel,
    ProductStateSpec,
    log_sum,
    same_sector,
    _state_to_json,
)

DEFAULT_TERM_BUDGET = 100_000


@dataclass(frozen=True, eq=False)
class SiteOp:
    """A local operator completed by identity on every other site."""

    site: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_cmat(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise InputError("site operator must be square")
        if self.site < 1:
            raise InputError("site indices are 1-based")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class Sum:
    terms: tuple["OperatorExpr", ...]


@dataclass(frozen=True, eq=False)
class Product:
    factors: tuple["OperatorExpr", ...]


@dataclass(frozen=True, eq=False)
class Scale:
    factor: complex
    expr: "OperatorExpr"


OperatorExpr = Union[SiteOp, Sum, Product, Scale]


def identity_expr() -> Product:
    """The empty product: identity on every site."""
    return Product(())


def max_site(expr: OperatorExpr) -> int:
    if isinstance(expr, SiteOp):
        return expr.site
    if isinstance(expr, Sum):
        return max((max_site(t) for t in expr.terms), default=0)
    if isinstance(expr, Product):
        return max((max_site(f) for f in expr.factors), default=0)
    if isinstance(expr, Scale):
        return max_site(expr.expr)
    raise InputError(f"not an operator expression: {expr!r}")


@dataclass(frozen=True)
class Term:
    """coefficient * product over sites of local matrices."""

    coefficient: complex
    site_matrices: Mapping[int, np.ndarray] = field(default_factory=dict)


def expand(expr: OperatorExpr, term_budget: int = DEFAULT_TERM_BUDGET) -> list[Term]:
    """Normal form: a flat list of per-site factorized terms."""

    def check(terms: list[Term]) -> list[Term]:
        if len(terms) > term_budget:
            raise TermBudgetExceededError(
                f"expansion exceeds term budget {term_budget}"
            )
        return terms

    if isinstance(expr, SiteOp):
        return [Term(1.0 + 0j, {expr.site: expr.matrix})]
    if isinstance(expr, Scale):
        return check(
            [
                Term(complex(expr.factor) * t.coefficient, t.site_matrices)
                for t in expand(expr.expr, term_budget)
            ]
        )
    if isinstance(expr, Sum):
        out: list[Term] = []
        for sub in expr.terms:
            out.extend(expand(sub, term_budget))
            check(out)
        return out
    if isinstance(expr, Product):
        out = [Term(1.0 + 0j, {})]
        for factor in expr.factors:
            sub = expand(factor, term_budget)
            merged: list[Term] = []
            for left in out:
                for right in sub:
                    mats = dict(left.site_matrices)
                    for site, m in right.site_matrices.items():
                        mats[site] = mats[site] @ m if site in mats else m
                    merged.append(Term(left.coefficient * right.coefficient, mats))
            out = check(merged)
        return out
    raise InputError(f"not an operator expression: {expr!r}")


def matrix_element(
    expr: OperatorExpr,
    bra: ProductStateSpec,
    ket: ProductStateSpec,
    n: int,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> LogAmplitude:
    """<Psi_n| expr |Phi_n> without materializing the 2^n space.

    The identity expression reproduces truncated_overlap bit for bit.
    """
    if bra.local_dim != ket.local_dim:
        raise DimensionMismatchError("bra and ket differ in local_dim")
    top = max_site(expr)
    if top > n:
        raise InputError(f"expression touches site {top} beyond truncation {n}")
    terms = expand(expr, term_budget)
    kernel = OverlapKernel(bra, ket)
    amplitudes = []
    for term in terms:
        support = frozenset(term.site_matrices)
        amp = kernel.evaluate(n, exclude=support)
        amp = amp.scaled(term.coefficient)
        for site, m in term.site_matrices.items():
            if m.shape[0] != bra.local_dim:
                raise DimensionMismatchError(
                    f"site {site} operator dim {m.shape[0]} != local_dim {bra.local_dim}"
                )
            bracket = complex(
                np.vdot(bra.site_state(site), m @ ket.site_state(site))
            )
            amp = amp.scaled(bracket)
        amplitudes.append(amp)
    return log_sum(amplitudes)


@dataclass(frozen=True)
class DecayPoint:
    n: int
    magnitude: float
    log2_magnitude: float


def intersector_decay(
    expr: OperatorExpr,
    bra: ProductStateSpec,
    ket: ProductStateSpec,
    n_list: Sequence[int],
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> list[DecayPoint]:
    """Truncated matrix elements along n for a different-sector pair."""
    if not n_list:
        raise InputError("n_list must be non-empty")
    if same_sector(bra, ket).same_sector:
        raise InputError(
            "states are in the same sector; use matrix_element directly"
        )
    if max_site(expr) > min(n_list):
        raise InputError("expression touches sites beyond the smallest truncation")
    out = []
    for n in n_list:
        amp = matrix_element(expr, bra, ket, n, term_budget)
        out.append(DecayPoint(n, amp.magnitude, amp.log2_magnitude))
    return out


@dataclass(frozen=True)
class BlockReport:
    """Pairwise truncated matrix elements grouped by sector."""

    sector_labels: tuple[int, ...]
    magnitudes: np.ndarray  # len(reps) x len(reps)
    log2_magnitudes: np.ndarray
    truncation: int
    epsilon: float

    @property
    def cross_sector_max(self) -> float:
        best = 0.0
        k = len(self.sector_labels)
        for i in range(k):
            for j in range(k):
                if self.sector_labels[i] != self.sector_labels[j]:
                    best = max(best, float(self.magnitudes[i, j]))
        return best

    @property
    def has_cross_entries(self) -> bool:
        return len(set(self.sector_labels)) > 1

    @property
    def passes(self) -> bool:
        return (not self.has_cross_entries) or self.cross_sector_max < self.epsilon

    def rows(self) -> list[tuple]:
        out = []
        k = len(self.sector_labels)
        for i in range(k):
            for j in range(k):
                out.append(
                    (
                        i,
                        j,
                        self.sector_labels[i],
                        self.sector_labels[j],
                        float(self.magnitudes[i, j]),
                        float(self.log2_magnitudes[i, j]),
                    )
                )
        return out


def classify_sectors(reps: Sequence[ProductStateSpec]) -> tuple[int, ...]:
    """Greedy labelling of representatives by sector equivalence."""
    labels: list[int] = []
    leaders: list[ProductStateSpec] = []
    for rep in reps:
        for lbl, leader in enumerate(leaders):
            if same_sector(rep, leader).same_sector:
                labels.append(lbl)
                break
        else:
            labels.append(len(leaders))
            leaders.append(rep)
    return tuple(labels)


def sector_block_report(
    expr: OperatorExpr,
    reps: Sequence[ProductStateSpec],
    n: int,
    epsilon: float = 1e-6,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> BlockReport:
    if not reps:
        raise InputError("at least one representative is required")
    labels = classify_sectors(reps)
    k = len(reps)
    mags = np.zeros((k, k))
    logs = np.full((k, k), -np.inf)
    for i in range(k):
        for j in range(k):
            amp = matrix_element(expr, reps[i], reps[j], n, term_budget)
            mags[i, j] = amp.magnitude
            logs[i, j] = amp.log2_magnitude
    return BlockReport(labels, mags, logs, n, epsilon)


# --------------------------------------------------------------------------
# JSON (de)serialization
# --------------------------------------------------------------------------


def expr_from_json(data: dict) -> OperatorExpr:
    try:
        op = data["op"]
        if op == "site":
            matrix = np.array(
                [[complex(re, im) for re, im in row] for row in data["matrix"]],
                dtype=np.complex128,
            )
            return SiteOp(int(data["site"]), matrix)
        if op == "sum":
            return Sum(tuple(expr_from_json(t) for t in data["terms"]))
        if op == "product":
            return Product(tuple(expr_from_json(f) for f in data["factors"]))
        if op == "scale":
            re, im = data["factor"]
            return Scale(complex(re, im), expr_from_json(data["expr"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed operator expression: {exc}") from exc
    raise InputError(f"unknown operator node {data.get('op')!r}")


def expr_to_json(expr: OperatorExpr) -> dict:
    if isinstance(expr, SiteOp):
        return {
            "op": "site",
            "site": expr.site,
            "matrix": [_state_to_json(row) for row in expr.matrix],
        }
    if isinstance(expr, Sum):
        return {"op": "sum", "terms": [expr_to_json(t) for t in expr.terms]}
    if isinstance(expr, Product):
        return {"op": "product", "factors": [expr_to_json(f) for f in expr.factors]}
    if isinstance(expr, Scale):
        return {
            "op": "scale",
            "factor": [expr.factor.real, expr.factor.imag],
            "expr": expr_to_json(expr.expr),
        }
    raise InputError(f"not an operator expression: {expr!r}")
