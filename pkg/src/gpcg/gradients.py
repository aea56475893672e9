"""Sobolev gradients, tangent projections and Riemannian gradients.

Two metrics on H^1_0 are supported:

* ``h10``: (v, w) = (grad v, grad w)_L2, realized by the stiffness
  operator; the Sobolev gradient costs one Laplace solve and the tangent
  projection a second one.
* ``au``: the energy-adaptive form a_u(v, w) with linearization point u;
  the Sobolev gradient of E at the linearization point is u itself, so
  the Riemannian gradient needs a single solve with the a_u operator.

Both expose the same interface: ``riesz`` (X R = M v), ``inner`` and a
cached Riesz representative of the base point for the projection
P(v) = v - R_X(u) (u, v)_L2 / (u, R_X(u))_L2.
"""

from typing import Optional

import numpy as np

from .energy import EnergyContext
from .errors import DegenerateProjectionError
from .operators import SparseOperator
from .solve import solve_spd

RIESZ_TOL = 1e-10
PROJECTION_GUARD = 1e-14


class Metric:
    """Common machinery for an SPD metric operator on the pair space."""

    tag: str

    def __init__(self, ctx: EnergyContext, op: SparseOperator):
        self.ctx = ctx
        self.op = op
        diag = op.diagonal()
        self._inv_diag = 1.0 / diag
        self._riesz_cache: dict[int, np.ndarray] = {}

    def inner(self, x, y) -> float:
        """(x, y)_X via one operator application."""
        return float(self.op.matvec(x) @ y)

    def solve(self, rhs, tol: float = RIESZ_TOL, x0=None) -> np.ndarray:
        return solve_spd(self.op, rhs, tol=tol, x0=x0, inv_diag=self._inv_diag)

    def riesz(self, v, tol: float = RIESZ_TOL, x0=None) -> np.ndarray:
        """Riesz representative: solve X R = M v."""
        return self.solve(self.ctx.M.matvec(v), tol=tol, x0=x0)

    def riesz_of_point(self, u, tol: float = RIESZ_TOL, x0=None) -> np.ndarray:
        """R_X(u) with a cache keyed on the identity of u."""
        key = id(u)
        hit = self._riesz_cache.get(key)
        if hit is not None:
            return hit
        r = self.riesz(u, tol=tol, x0=x0)
        self._riesz_cache = {key: r}  # single slot: one base point at a time
        return r


class H10Metric(Metric):
    """Fixed metric (grad v, grad w)_L2; operator = stiffness."""

    tag = "h10"

    def __init__(self, ctx: EnergyContext):
        super().__init__(ctx, ctx.ops.K)


class AdaptiveMetric(Metric):
    """Energy-adaptive metric a_u at a linearization point.

    Rebuilt whenever the point changes; the kappa |u|^2 mass block is the
    only part reassembled.
    """

    tag = "au"

    def __init__(self, ctx: EnergyContext, point: np.ndarray):
        super().__init__(ctx, ctx.au_operator(point))
        self.point = point


def make_metric(ctx: EnergyContext, tag: str, point=None) -> Metric:
    if tag == "h10":
        return H10Metric(ctx)
    if tag == "au":
        if point is None:
            raise ValueError("adaptive metric needs a linearization point")
        return AdaptiveMetric(ctx, point)
    raise ValueError(f"unknown metric tag {tag!r}")


def projection_denominator(metric: Metric, u, r=None) -> float:
    """(u, R_X(u))_L2, the denominator of the tangent projection."""
    if r is None:
        r = metric.riesz_of_point(u)
    denom = metric.ctx.l2_inner(u, r)
    if denom <= PROJECTION_GUARD:
        raise DegenerateProjectionError(
            f"projection denominator {denom:.3e} is not safely positive; "
            "the metric is likely not SPD (violated admissibility)"
        )
    return denom


def project_tangent(metric: Metric, u, v) -> np.ndarray:
    """X-orthogonal projection of v onto the tangent space at u."""
    r = metric.riesz_of_point(u)
    denom = projection_denominator(metric, u, r)
    return v - r * (metric.ctx.l2_inner(u, v) / denom)


def sobolev_gradient(metric: Metric, ctx: EnergyContext, u) -> np.ndarray:
    """Riesz representative of E'(u) in the metric.

    In the adaptive metric at its own linearization point this is u
    itself (no solve); in the h10 metric it is u plus one Laplace solve
    with the non-Laplacian part of E'(u) as right-hand side.
    """
    if metric.tag == "au":
        _require_point(metric, u)
        return u.copy()
    load = ctx.eprime(u) - ctx.ops.K.matvec(u)
    q = metric.solve(load)
    return u + q


def _require_point(metric: Metric, u):
    point = getattr(metric, "point", None)
    if point is not None and point is not u and not np.array_equal(point, u):
        raise ValueError("adaptive metric must be linearized at the evaluation point")


def riemannian_gradient(metric: Metric, ctx: EnergyContext, u) -> np.ndarray:
    """Tangent projection of the Sobolev gradient at u."""
    if metric.tag == "au":
        _require_point(metric, u)
        r = metric.riesz_of_point(u)
        denom = projection_denominator(metric, u, r)
        return u - r / denom
    return project_tangent(metric, u, sobolev_gradient(metric, ctx, u))
