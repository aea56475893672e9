"""Sparse operators on the real-pair representation of complex fields.

A complex field with N interior degrees of freedom is a real vector of
length 2N ([Re; Im]); every bilinear form in the energy becomes a real
symmetric 2N x 2N matrix.  The rotation form couples the two blocks:
with L[j,k] = int (x d_y phi_k - y d_x phi_k) phi_j (antisymmetric), the
real-pair matrix of (L3 v, w)_L2 is [[0, L], [-L, 0]], which is symmetric.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .mesh import Mesh
from .quadrature import TRI_POINTS, TRI_WEIGHTS
from .space import Space, get_space


@dataclass
class SparseOperator:
    """CSR matrix with a symmetry flag and deterministic matvec."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    symmetric: bool = False

    @property
    def shape(self):
        n = self.indptr.shape[0] - 1
        return (n, n)

    def matvec(self, x):
        return _kernels.csr_matvec(self.indptr, self.indices, self.data, x)

    def diagonal(self):
        n = self.shape[0]
        row = np.repeat(np.arange(n, dtype=self.indices.dtype), np.diff(self.indptr))
        mask = self.indices == row
        diag = np.zeros(n)
        diag[row[mask]] = self.data[mask]
        return diag

    def to_scipy(self):
        return sp.csr_matrix((self.data, self.indices, self.indptr), shape=self.shape)

    def asymmetry(self):
        """max |A - A^T| entry (0 for exactly symmetric storage)."""
        a = self.to_scipy()
        d = (a - a.T).tocoo()
        return float(np.max(np.abs(d.data))) if d.nnz else 0.0

    def check_symmetry(self, rtol=1e-14):
        scale = float(np.max(np.abs(self.data))) if self.data.size else 0.0
        if scale == 0.0:
            return True
        return self.asymmetry() <= rtol * scale

    def with_data(self, data):
        return SparseOperator(self.indptr, self.indices, data, symmetric=self.symmetric)


def _pair_operator(space: Space, d11, d12=None, d22=None) -> SparseOperator:
    """Build the 2N operator [[B11, B12], [B12^T, B22]] from scalar blocks."""
    d21 = None if d12 is None else space.transpose_data(d12)
    if d22 is None:
        d22 = d11
    data2 = space.block_data(d11, d12, d21, d22)
    return SparseOperator(space.indptr2, space.indices2, data2, symmetric=True)


@dataclass
class OperatorSet:
    """Assembled discrete forms of the energy's four terms (2N operators).

    Scalar single-block data arrays are kept alongside for cheap
    recombination (the adaptive metric is reassembled every iteration).
    """

    space: Space
    M: SparseOperator
    K: SparseOperator
    Vm: SparseOperator
    Rm: SparseOperator
    mass_data: np.ndarray        # scalar block of M
    stiffness_data: np.ndarray   # scalar block of K
    potential_data: np.ndarray   # scalar block of Vm
    angular_data: np.ndarray     # antisymmetric L (without the -Omega factor)
    Omega: float

    def a0_blocks(self):
        """Scalar blocks (diag, offdiag) of A0 = K + Vm + Rm."""
        return (
            self.stiffness_data + self.potential_data,
            -self.Omega * self.angular_data,
        )


def assemble_operators(mesh: Mesh, potential, Omega: float) -> OperatorSet:
    """Assemble mass, stiffness, potential and rotation operators.

    ``potential`` is a scalar field f(x, y) evaluated at quadrature
    points; the rotation operator carries the -Omega factor so that
    A0 = K + Vm + Rm.
    """
    space = get_space(mesh)
    mass = space.assemble_mass()
    stiff = space.assemble_stiffness()
    v_eq = np.asarray(potential(space.qx, space.qy), dtype=float)
    if v_eq.shape != space.qx.shape:
        v_eq = np.broadcast_to(v_eq, space.qx.shape).copy()
    pot = space.assemble_weighted_mass(v_eq)
    ang = space.assemble_angular()

    ops = OperatorSet(
        space=space,
        M=_pair_operator(space, mass),
        K=_pair_operator(space, stiff),
        Vm=_pair_operator(space, pot),
        Rm=_pair_operator(space, np.zeros_like(mass), -Omega * ang),
        mass_data=mass,
        stiffness_data=stiff,
        potential_data=pot,
        angular_data=ang,
        Omega=float(Omega),
    )
    for name in ("M", "K", "Vm", "Rm"):
        op = getattr(ops, name)
        if not op.check_symmetry():
            raise AssertionError(f"assembled operator {name} failed the symmetry check")
    return ops


def density_weights(space: Space, u) -> np.ndarray:
    """|u|^2 at quadrature points, (ntri, nq)."""
    re, im = space.mesh.split(u)
    re_q = space.at_quad(re)
    im_q = space.at_quad(im)
    return re_q * re_q + im_q * im_q


def assemble_density_mass(mesh: Mesh, u) -> SparseOperator:
    """Symmetric 2N operator of the form (|u|^2 v, w)_L2.

    |u|^2 is evaluated at quadrature points from the nodal values of u,
    which keeps (D(u) u, u) exactly equal to the quartic integral.
    """
    space = get_space(mesh)
    data = space.assemble_weighted_mass(density_weights(space, u))
    return _pair_operator(space, data)


# ----------------------------------------------------------------------
# inner products and norms
# ----------------------------------------------------------------------

def _mass_block(mesh: Mesh):
    space = get_space(mesh)
    try:
        return space._mass_data_cache
    except AttributeError:
        space._mass_data_cache = SparseOperator(
            space.indptr, space.indices, space.assemble_mass(), symmetric=True
        )
        return space._mass_data_cache


def l2_inner(mesh: Mesh, u, v) -> float:
    """Real L2 inner product Re integral u conj(v)."""
    m = _mass_block(mesh)
    ur, ui = mesh.split(u)
    vr, vi = mesh.split(v)
    return float(ur @ m.matvec(vr) + ui @ m.matvec(vi))


def l2_norm(mesh: Mesh, u) -> float:
    return float(np.sqrt(l2_inner(mesh, u, u)))


def l4_norm4(mesh: Mesh, u) -> float:
    """Integral of |u|^4 with the same quadrature as the energy."""
    space = get_space(mesh)
    re, im = mesh.split(u)
    return float(
        _kernels.quartic_sum(
            mesh.triangles,
            mesh.pad(re),
            mesh.pad(im),
            TRI_POINTS,
            TRI_WEIGHTS,
            space.areas,
        )
    )


def multiply_i(mesh: Mesh, u) -> np.ndarray:
    """The field i*u in the real-pair representation: (re, im) -> (-im, re)."""
    re, im = mesh.split(u)
    return np.concatenate([-im, re])
