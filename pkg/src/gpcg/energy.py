"""Gross-Pitaevskii energy, its derivatives and the adaptive form a_u.

E(u) = 1/2 int |grad u|^2 + V |u|^2 - Omega conj(u) L3 u + kappa/2 |u|^4

with L3 = -i (x d_y - y d_x).  In the real-pair representation the
quadratic part is u' A0 u with A0 = K + Vm + Rm, and the quartic part is
integrated by the shared degree-4 rule, so the identity
lambda = 2 E(u) + kappa/2 ||u||_L4^4 holds at rounding level for unit u.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .mesh import Mesh
from .operators import (
    OperatorSet,
    SparseOperator,
    _pair_operator,
    assemble_operators,
    density_weights,
)
from .space import get_space


@dataclass(frozen=True)
class Physics:
    """Trap frequencies, rotation speed, repulsion and domain half-width."""

    gamma_x: float
    gamma_y: float
    Omega: float
    kappa: float
    L: float

    def __post_init__(self):
        if self.kappa < 0:
            raise ConfigError("repulsion parameter kappa must be >= 0")
        if self.gamma_x <= 0 or self.gamma_y <= 0:
            raise ConfigError("trap frequencies must be positive")
        if self.L <= 0:
            raise ConfigError("domain half-width must be positive")

    def potential(self, x, y):
        """Harmonic trap V(x, y) = (gamma_x^2 x^2 + gamma_y^2 y^2) / 2."""
        return 0.5 * (self.gamma_x**2 * x * x + self.gamma_y**2 * y * y)


@dataclass(frozen=True)
class A1Report:
    """Outcome of the trapping-vs-rotation balance check.

    ``epsilon`` is the largest value with
    V(x) - (1 + epsilon)/4 Omega^2 (x^2 + y^2) >= 0 at every quadrature
    point (infinite when Omega = 0); the configuration is admissible when
    epsilon > 0.  ``witness`` is a violating point when there is one.
    """

    epsilon: float
    satisfied: bool
    witness: Optional[tuple] = None


def check_A1(physics: Physics, mesh: Mesh) -> A1Report:
    """Scan quadrature points for the admissibility margin epsilon."""
    space = get_space(mesh)
    v = physics.potential(space.qx, space.qy)
    if np.any(v < 0):
        bad = np.unravel_index(int(np.argmin(v)), v.shape)
        return A1Report(-math.inf, False, (space.qx[bad], space.qy[bad]))
    if physics.Omega == 0.0:
        return A1Report(math.inf, True)
    r2 = space.qx**2 + space.qy**2
    ratio = 4.0 * v / (physics.Omega**2 * r2)
    k = int(np.argmin(ratio))
    eps = float(ratio.flat[k]) - 1.0
    if eps <= 0:
        bad = np.unravel_index(k, r2.shape)
        return A1Report(eps, False, (float(space.qx[bad]), float(space.qy[bad])))
    return A1Report(eps, True)


class EnergyContext:
    """Physics bound to a mesh: assembled operators and cached blocks."""

    def __init__(self, physics: Physics, mesh: Mesh):
        self.physics = physics
        self.mesh = mesh
        self.space = get_space(mesh)
        self.ops: OperatorSet = assemble_operators(mesh, physics.potential, physics.Omega)
        diag_block, off_block = self.ops.a0_blocks()
        self._a0_diag_block = diag_block      # scalar block of K + Vm
        self._a0_off_block = off_block        # scalar block carrying -Omega L
        self.A0: SparseOperator = _pair_operator(self.space, diag_block, off_block)
        self.M: SparseOperator = self.ops.M
        self._mass_scalar = SparseOperator(
            self.space.indptr, self.space.indices, self.ops.mass_data, symmetric=True
        )
        self._quad_scalar = SparseOperator(
            self.space.indptr, self.space.indices, diag_block, symmetric=True
        )
        self._ang_scalar = SparseOperator(
            self.space.indptr, self.space.indices, self.ops.angular_data
        )

    # -- basic L2 geometry (same mass quadrature everywhere) -----------

    def l2_inner(self, u, v) -> float:
        ur, ui = self.mesh.split(u)
        vr, vi = self.mesh.split(v)
        m = self._mass_scalar
        return float(ur @ m.matvec(vr) + ui @ m.matvec(vi))

    def l2_norm(self, u) -> float:
        return math.sqrt(self.l2_inner(u, u))

    def quartic(self, u) -> float:
        from .operators import l4_norm4

        return l4_norm4(self.mesh, u)

    # -- energy and derivatives ----------------------------------------

    def quadratic_form(self, u) -> float:
        """u' A0 u evaluated block-wise.

        Block-wise evaluation makes the exact phase rotations
        (re, im) -> (-im, re) and -> (-re, -im) reproduce the energy to
        the last bit.
        """
        re, im = self.mesh.split(u)
        q = self._quad_scalar
        ang = self._ang_scalar
        sym = float(re @ q.matvec(re) + im @ q.matvec(im))
        rot = float(re @ ang.matvec(im) - im @ ang.matvec(re))
        return sym - self.physics.Omega * rot

    def energy(self, u) -> float:
        e = 0.5 * self.quadratic_form(u)
        if self.physics.kappa != 0.0:
            e += 0.25 * self.physics.kappa * self.quartic(u)
        return e

    def eprime(self, u) -> np.ndarray:
        """Coefficient vector of the first derivative <E'(u), .>."""
        out = self.A0.matvec(u)
        kappa = self.physics.kappa
        if kappa != 0.0:
            s = density_weights(self.space, u)
            re, im = self.mesh.split(u)
            out = out + kappa * self.space.apply_field_dual(
                s * self.space.at_quad(re), s * self.space.at_quad(im)
            )
        return out

    def eprimeprime_apply(self, u, v) -> np.ndarray:
        """Coefficient vector of <E''(u) v, .> (matrix-free)."""
        out = self.A0.matvec(v)
        kappa = self.physics.kappa
        if kappa == 0.0:
            return out
        space = self.space
        ur, ui = self.mesh.split(u)
        vr, vi = self.mesh.split(v)
        ur_q, ui_q = space.at_quad(ur), space.at_quad(ui)
        vr_q, vi_q = space.at_quad(vr), space.at_quad(vi)
        dens = ur_q * ur_q + ui_q * ui_q
        cross = ur_q * vr_q + ui_q * vi_q  # Re(u conj(v)) pointwise
        out = out + kappa * space.apply_field_dual(dens * vr_q, dens * vi_q)
        out = out + 2.0 * kappa * space.apply_field_dual(cross * ur_q, cross * ui_q)
        return out

    def lagrange_lambda(self, u) -> float:
        """<E'(u), u>, the multiplier of the constrained problem."""
        return float(self.eprime(u) @ u)

    def au_data(self, u) -> tuple[np.ndarray, np.ndarray]:
        """Scalar blocks (diag, offdiag) of the adaptive form a_u."""
        diag = self._a0_diag_block
        kappa = self.physics.kappa
        if kappa != 0.0:
            diag = diag + kappa * self.space.assemble_weighted_mass(
                density_weights(self.space, u)
            )
        return diag, self._a0_off_block

    def au_operator(self, u) -> SparseOperator:
        """A0 + kappa D(u); SPD under the admissibility assumption."""
        diag, off = self.au_data(u)
        return _pair_operator(self.space, diag, off)
