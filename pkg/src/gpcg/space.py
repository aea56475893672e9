"""Assembly workspace shared by all operators on one mesh.

Precomputes, once per (L, n):

* the scalar interior-dof sparsity pattern (CSR) and, for every
  element-local pair, its position in the CSR data array,
* quadrature point coordinates, gradients and areas per triangle,
* the block layout mapping four scalar blocks into the 2N x 2N real-pair
  pattern, and the transpose permutation of the scalar pattern.

All assemblies are single-threaded scatter-adds with a fixed order, so
repeated assemblies of the same configuration are bit-identical.
"""

import numpy as np
import scipy.sparse as sp

from .mesh import Mesh
from .quadrature import PHI_PHI_W, TRI_POINTS, TRI_WEIGHTS


class Space:
    """Per-mesh assembly tables; obtain through :func:`get_space`."""

    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        tris = mesh.triangles
        pts = mesh.nodes
        ntri = tris.shape[0]

        p0 = pts[tris[:, 0]]
        p1 = pts[tris[:, 1]]
        p2 = pts[tris[:, 2]]
        d1 = p1 - p0
        d2 = p2 - p0
        det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        self.areas = 0.5 * det
        if np.any(self.areas <= 0):
            raise AssertionError("triangulation contains non-positive areas")

        # P1 gradients, constant per element: grad phi_a = (gx[:, a], gy[:, a])
        self.gx = np.column_stack(
            [p1[:, 1] - p2[:, 1], p2[:, 1] - p0[:, 1], p0[:, 1] - p1[:, 1]]
        ) / det[:, None]
        self.gy = np.column_stack(
            [p2[:, 0] - p1[:, 0], p0[:, 0] - p2[:, 0], p1[:, 0] - p0[:, 0]]
        ) / det[:, None]

        # physical quadrature points, (ntri, nq)
        self.qx = np.einsum("ea,qa->eq", pts[tris][:, :, 0], TRI_POINTS)
        self.qy = np.einsum("ea,qa->eq", pts[tris][:, :, 1], TRI_POINTS)

        # interior dof index per element corner, -1 on the boundary
        self.tri_dof = mesh.node_to_dof[tris]
        N = mesh.num_interior
        self.N = N

        rows = np.repeat(self.tri_dof, 3, axis=1).ravel()
        cols = np.tile(self.tri_dof, (1, 3)).ravel()
        valid = (rows >= 0) & (cols >= 0)
        pat = sp.coo_matrix(
            (np.ones(valid.sum()), (rows[valid], cols[valid])), shape=(N, N)
        ).tocsr()
        pat.sum_duplicates()
        pat.sort_indices()
        self.indptr = pat.indptr.astype(np.int32)
        self.indices = pat.indices.astype(np.int32)
        self.nnz = self.indices.shape[0]

        # position of each element-local (a, b) pair inside the CSR data
        row_of_entry = np.repeat(np.arange(N, dtype=np.int64), np.diff(self.indptr))
        keys = row_of_entry * N + self.indices
        pair_keys = rows[valid].astype(np.int64) * N + cols[valid].astype(np.int64)
        pos = np.searchsorted(keys, pair_keys).astype(np.int64)
        self.pair_valid = valid  # (ntri*9,) mask in (e, a, b) raveled order
        self.pair_pos = pos      # positions for the valid pairs only

        # vector scatter: valid element corners and their dof indices
        corner_valid = (self.tri_dof >= 0).ravel()
        self.corner_valid = corner_valid
        self.corner_dof = self.tri_dof.ravel()[corner_valid]

        # transpose permutation of the scalar pattern
        perm = sp.csr_matrix(
            (np.arange(self.nnz, dtype=np.int64), self.indices, self.indptr),
            shape=(N, N),
        ).T.tocsr()
        perm.sort_indices()
        self.tperm = perm.data

        # diagonal entry positions
        self.diag_pos = np.searchsorted(keys, np.arange(N, dtype=np.int64) * N + np.arange(N))

        # 2N block layout: row i holds [cols, cols + N] in sorted order
        counts = np.diff(self.indptr)
        indptr2 = np.zeros(2 * N + 1, dtype=np.int64)
        indptr2[1 : N + 1] = np.cumsum(2 * counts)
        indptr2[N + 1 :] = indptr2[N] + np.cumsum(2 * counts)
        self.indptr2 = indptr2.astype(np.int32)
        indices2 = np.empty(2 * self.nnz * 2, dtype=np.int32)
        # slots for scalar entry k (row r, offset o): left block then right block
        off_in_row = np.arange(self.nnz, dtype=np.int64) - np.repeat(
            self.indptr[:-1].astype(np.int64), counts
        )
        base_top = indptr2[row_of_entry]
        base_bot = indptr2[N + row_of_entry]
        self.pos11 = base_top + off_in_row
        self.pos12 = base_top + counts[row_of_entry] + off_in_row
        self.pos21 = base_bot + off_in_row
        self.pos22 = base_bot + counts[row_of_entry] + off_in_row
        indices2[self.pos11] = self.indices
        indices2[self.pos12] = self.indices + N
        indices2[self.pos21] = self.indices
        indices2[self.pos22] = self.indices + N
        self.indices2 = indices2
        self.nnz2 = indices2.shape[0]

        self.ntri = ntri
        # element mass matrices are exact: A/12 * [[2,1,1],[1,2,1],[1,1,2]]
        self._mass_local = (np.ones((3, 3)) + np.eye(3)) / 12.0

    # ------------------------------------------------------------------
    # scalar assemblies (data arrays on the interior-dof pattern)
    # ------------------------------------------------------------------

    def _scatter_matrix(self, local):
        """Accumulate (ntri, 3, 3) element matrices into CSR data."""
        vals = local.reshape(-1)[self.pair_valid]
        return np.bincount(self.pair_pos, weights=vals, minlength=self.nnz)

    def scatter_vector(self, local):
        """Accumulate (ntri, 3) element vectors into a dof vector."""
        vals = local.reshape(-1)[self.corner_valid]
        return np.bincount(self.corner_dof, weights=vals, minlength=self.N)

    def assemble_mass(self):
        local = self.areas[:, None, None] * self._mass_local[None, :, :]
        return self._scatter_matrix(local)

    def assemble_stiffness(self):
        local = self.areas[:, None, None] * (
            np.einsum("ea,eb->eab", self.gx, self.gx)
            + np.einsum("ea,eb->eab", self.gy, self.gy)
        )
        return self._scatter_matrix(local)

    def assemble_weighted_mass(self, s_eq):
        """(s v, w)_L2 with the scalar weight s given at quadrature points."""
        local = self.areas[:, None, None] * np.einsum("eq,qab->eab", s_eq, PHI_PHI_W)
        return self._scatter_matrix(local)

    def assemble_angular(self):
        """Data of L[j, k] = int (x d_y phi_k - y d_x phi_k) phi_j.

        Antisymmetrized after assembly so the real-pair rotation operator
        is exactly symmetric.
        """
        # b . grad phi_k at quadrature points, (ntri, nq, 3)
        adv = (
            self.qx[:, :, None] * self.gy[:, None, :]
            - self.qy[:, :, None] * self.gx[:, None, :]
        )
        wphi = TRI_WEIGHTS[:, None] * TRI_POINTS  # (nq, 3) test factors
        local = self.areas[:, None, None] * np.einsum("qj,eqk->ejk", wphi, adv)
        data = self._scatter_matrix(local)
        return 0.5 * (data - data[self.tperm])

    def apply_field_dual(self, f_re_eq, f_im_eq):
        """Dual vector of w -> Re integral (f_re + i f_im)(x) conj(w)(x) dx.

        The complex field is given by its values at quadrature points; the
        result is the stacked real-pair coefficient vector of length 2N.
        """
        wphi = TRI_WEIGHTS[:, None] * TRI_POINTS
        loc_re = self.areas[:, None] * (f_re_eq @ wphi)
        loc_im = self.areas[:, None] * (f_im_eq @ wphi)
        return np.concatenate(
            [self.scatter_vector(loc_re), self.scatter_vector(loc_im)]
        )

    def at_quad(self, v_interior):
        """Values of one real nodal field at all quadrature points."""
        full = self.mesh.pad(v_interior)
        return full[self.mesh.triangles] @ TRI_POINTS.T

    # ------------------------------------------------------------------
    # block composition into the 2N real-pair pattern
    # ------------------------------------------------------------------

    def block_data(self, d11=None, d12=None, d21=None, d22=None):
        data2 = np.zeros(self.nnz2)
        if d11 is not None:
            data2[self.pos11] = d11
        if d12 is not None:
            data2[self.pos12] = d12
        if d21 is not None:
            data2[self.pos21] = d21
        if d22 is not None:
            data2[self.pos22] = d22
        return data2

    def transpose_data(self, data):
        return data[self.tperm]


_SPACE_CACHE: dict[tuple[float, int], Space] = {}


def get_space(mesh: Mesh) -> Space:
    key = (mesh.L, mesh.n)
    space = _SPACE_CACHE.get(key)
    if space is None:
        space = Space(mesh)
        _SPACE_CACHE[key] = space
    return space
