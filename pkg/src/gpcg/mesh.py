"""Structured P1 triangulation of the square [-L, L]^2.

Homogeneous Dirichlet boundary: only interior nodes carry degrees of
freedom.  Node numbering is row-major in (x fastest, y slowest) order and
every cell is split along the same diagonal, so two meshes built from the
same (L, n) are bit-identical.

Complex fields live on interior nodes as stacked real pairs: a field u is
a real vector of length 2N with u[:N] = Re(u) and u[N:] = Im(u), in
interior-node order.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class Mesh:
    """Triangulation data; build through :func:`build_mesh`."""

    L: float
    n: int
    nodes: np.ndarray        # ((n+1)^2, 2) coordinates
    triangles: np.ndarray    # (2 n^2, 3) node indices, int32, CCW
    interior_nodes: np.ndarray  # (N,) node indices of the interior dofs
    node_to_dof: np.ndarray  # ((n+1)^2,) interior dof index or -1

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def num_interior(self) -> int:
        return self.interior_nodes.shape[0]

    def split(self, u):
        """Return the (re, im) halves of a stacked field vector."""
        n = self.num_interior
        return u[:n], u[n:]

    def pad(self, v):
        """Scatter interior nodal values to the full node set (boundary 0)."""
        full = np.zeros(self.nodes.shape[0])
        full[self.interior_nodes] = v
        return full


def build_mesh(L: float, n: int) -> Mesh:
    """Build the structured triangulation with n subdivisions per axis.

    Each cell is split along the diagonal from its lower-left to its
    upper-right corner; both triangles are counterclockwise.
    """
    if n < 4:
        raise ConfigError(f"mesh subdivisions must be >= 4, got {n}")
    if not (L > 0):
        raise ConfigError(f"domain half-width must be positive, got {L}")

    coords_1d = np.linspace(-L, L, n + 1)
    X, Y = np.meshgrid(coords_1d, coords_1d)  # row-major: y slow, x fast
    nodes = np.column_stack([X.ravel(), Y.ravel()])

    nid = np.arange((n + 1) * (n + 1), dtype=np.int32).reshape(n + 1, n + 1)
    a = nid[:-1, :-1].ravel()  # lower-left of each cell
    b = nid[:-1, 1:].ravel()   # lower-right
    c = nid[1:, 1:].ravel()    # upper-right
    d = nid[1:, :-1].ravel()   # upper-left
    lower = np.column_stack([a, b, c])
    upper = np.column_stack([a, c, d])
    triangles = np.empty((2 * n * n, 3), dtype=np.int32)
    triangles[0::2] = lower
    triangles[1::2] = upper

    interior_mask = np.zeros((n + 1, n + 1), dtype=bool)
    interior_mask[1:-1, 1:-1] = True
    interior_nodes = np.flatnonzero(interior_mask.ravel()).astype(np.int32)
    node_to_dof = np.full((n + 1) * (n + 1), -1, dtype=np.int32)
    node_to_dof[interior_nodes] = np.arange(interior_nodes.size, dtype=np.int32)

    return Mesh(
        L=float(L),
        n=int(n),
        nodes=nodes,
        triangles=triangles,
        interior_nodes=interior_nodes,
        node_to_dof=node_to_dof,
    )


def interpolate(mesh: Mesh, f) -> np.ndarray:
    """Nodal interpolation of a complex-valued f(x, y) on interior nodes.

    Not normalized; retraction to the unit sphere is a separate step.
    """
    pts = mesh.nodes[mesh.interior_nodes]
    vals = np.asarray(f(pts[:, 0], pts[:, 1]), dtype=complex)
    return np.concatenate([vals.real, vals.imag])
