"""Propagation of basis-rate perturbations to the full ensemble.

Perturbations are always expressed against a declared basis, never as raw
entry edits: which entries move directly is exactly the information a basis
encodes, and the linear map from basis deltas to a full matrix delta is the
stack of unit-response matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisSpec, epsilon_matrices
from .errors import (
    BadParamsError,
    GraphMismatchError,
    LengthMismatchError,
    NotArbitrageFreeError,
    SpecMismatchError,
)
from .exchange import DEFAULT_TOL, LogRateMatrix, RateMatrix, check_no_arbitrage, exp_of


@dataclass(frozen=True)
class PerturbationVector:
    """Per-coordinate log-domain shifts of a basis assignment."""

    spec: BasisSpec
    deltas: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.deltas)
        if len(vals) != self.spec.size:
            raise LengthMismatchError(
                f"{self.spec.size} basis entries but {len(vals)} deltas"
            )
        if not all(math.isfinite(v) for v in vals):
            raise BadParamsError("perturbation deltas must be finite")
        object.__setattr__(self, "deltas", vals)


@dataclass(frozen=True, eq=False)
class PerturbationOperator:
    """Linear map from basis-coordinate deltas to a full matrix delta.

    ``response[k]`` is the unit response of coordinate k; applying the map is
    a delta-weighted sum of these, so the k-th unit vector maps to the k-th
    response exactly.
    """

    spec: BasisSpec
    response: np.ndarray = field(repr=False)  # (t, n, n), read-only


def build_operator(spec: BasisSpec) -> PerturbationOperator:
    """Stack the spec's unit-response matrices into a perturbation operator."""
    eps = epsilon_matrices(spec)
    n = spec.graph.n
    if eps.matrices:
        stack = np.stack([m.entries for m in eps.matrices])
    else:
        stack = np.zeros((0, n, n))
    stack.setflags(write=False)
    return PerturbationOperator(spec=spec, response=stack)


def propagate_log(op: PerturbationOperator, d: PerturbationVector) -> LogRateMatrix:
    """Full log-domain delta for the given basis deltas.

    The result is itself arbitrage-free: the unit responses are, and the
    space is closed under linear combination.
    """
    if d.spec != op.spec:
        raise SpecMismatchError("perturbation and operator use different bases")
    delta = np.tensordot(np.asarray(d.deltas, dtype=float), op.response, axes=1)
    return LogRateMatrix(op.spec.graph, delta)


def propagate_multiplicative_first_order(
    r: RateMatrix, d_log: LogRateMatrix
) -> np.ndarray:
    """First-order rate delta: each entry times its log delta.

    The multiplicative response to a log shift d is rate * (exp(d) - 1);
    to first order that is rate * d. Non-edge coordinates come out 0.
    """
    if r.graph != d_log.graph:
        raise GraphMismatchError("rates and delta live on different graphs")
    out = r.entries * d_log.entries
    out.setflags(write=False)
    return out


def apply_exact(
    e: LogRateMatrix, d_log: LogRateMatrix, tol: float = DEFAULT_TOL
) -> tuple[LogRateMatrix, RateMatrix]:
    """Exact update: add the delta in log domain and re-exponentiate.

    Both inputs must pass the arbitrage check at ``tol``; their sum then
    stays within twice that tolerance, so repeated exact updates never leave
    the consistent region by more than accumulated rounding.
    """
    if e.graph != d_log.graph:
        raise GraphMismatchError("state and delta live on different graphs")
    for name, m in (("state", e), ("delta", d_log)):
        if not check_no_arbitrage(m, tol).ok:
            raise NotArbitrageFreeError(f"{name} matrix fails the arbitrage check")
    updated = LogRateMatrix(e.graph, e.entries + d_log.entries)
    return updated, exp_of(updated)
