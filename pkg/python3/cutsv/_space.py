#!/usr/bin/env python3

# Copyright (c) 2020-2021 Fpemud <fpemud@sina.com>
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.



import numpy as np
from ._util import Util
from ._errors import ConfigError, GeometryError
from ._polynomial import Monomials


class LagrangeElement:
    """
    Degree-k Lagrange element on the reference triangle (0,0), (1,0), (0,1).

    Local nodes: the 3 vertices, then k-1 nodes on each edge (v0,v1), (v1,v2), (v2,v0)
    running from the first to the second vertex, then the interior nodes.
    """

    VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

    def __init__(self, k):
        self.k = k
        self.monomials = Monomials(k)

        nodes = list(self.VERTICES)
        for e in range(3):
            a = self.VERTICES[e]
            b = self.VERTICES[(e + 1) % 3]
            nodes += [a + j / k * (b - a) for j in range(1, k)]
        nodes += [np.array([i / k, j / k]) for j in range(1, k) for i in range(1, k - j)]
        self.nodes = np.array(nodes)
        self.size = len(self.nodes)
        assert self.size == self.monomials.size

        # column i holds the monomial coefficients of shape function i
        self.coefficients = np.linalg.inv(self.monomials.evaluate(self.nodes))
        self.grad_coefficients = np.stack([self.monomials.derivative_matrix(0) @ self.coefficients,
                                           self.monomials.derivative_matrix(1) @ self.coefficients])

    @property
    def n_interior(self):
        return (self.k - 1) * (self.k - 2) // 2

    def values(self, ref_points):
        return self.monomials.evaluate(ref_points) @ self.coefficients

    def gradients(self, ref_points):
        m = self.monomials.evaluate(ref_points)
        return np.stack([m @ self.grad_coefficients[0], m @ self.grad_coefficients[1]], axis=-1)


class SvSpace:
    """
    Scott-Vogelius pair on the active CT mesh.

    Scalar Lagrange dofs are numbered active vertices first, then k-1 nodes per active face
    (running from faces[f, 0]), then interior nodes cell by cell. Velocity dofs are blocked by
    component, component c of scalar dof i is c * n_scalar + i. The pressure is discontinuous with
    an L2(K)-orthonormal basis of P_{k-1}, the dofs of active cell a are a * n_local_p + j.
    Cell arguments of the tabulate methods are positions in active_cells.
    """

    def __init__(self, ct, topo, k):
        self.mesh = ct
        self.topo = topo
        self.k = k
        self.element = LagrangeElement(k)
        self.pressure_monomials = Monomials(k - 1)

        self.active_cells = topo.ct_active
        self.cell_index = np.full(ct.n_triangles, -1, dtype=np.int64)
        self.cell_index[self.active_cells] = np.arange(len(self.active_cells))

        self._numberDofs()
        self._buildGeometry()
        self._buildPressureBasis()

    @property
    def n_cells(self):
        return len(self.active_cells)

    @property
    def n_local_u(self):
        return 2 * self.element.size

    @property
    def n_local_p(self):
        return self.pressure_monomials.size

    def _numberDofs(self):
        ct = self.mesh
        k = self.k
        tri = ct.triangles[self.active_cells]
        cf = ct.cell_faces[self.active_cells]
        na = len(tri)

        usedVertices = np.unique(tri)
        vmap = np.full(ct.n_vertices, -1, dtype=np.int64)
        vmap[usedVertices] = np.arange(len(usedVertices))
        usedFaces = np.unique(cf)
        fmap = np.full(ct.n_faces, -1, dtype=np.int64)
        fmap[usedFaces] = np.arange(len(usedFaces))

        nv = len(usedVertices)
        nf = len(usedFaces)
        ni = self.element.n_interior

        cols = [vmap[tri]]
        for e in range(3):
            f = cf[:, e]
            forward = tri[:, e] == ct.faces[f, 0]
            for j in range(1, k):
                pos = np.where(forward, j, k - j)
                cols.append((nv + fmap[f] * (k - 1) + pos - 1)[:, None])
        cols.append(nv + nf * (k - 1) + np.arange(na)[:, None] * ni + np.arange(ni)[None, :])

        self.cell_dofs = np.hstack(cols).astype(np.int64)
        self.n_vertex_dofs = nv
        self.n_edge_dofs = nf * (k - 1)
        self.n_scalar = nv + nf * (k - 1) + na * ni
        self.n_u = 2 * self.n_scalar
        self.n_p = na * self.n_local_p
        self.velocity_dofs = np.hstack([self.cell_dofs, self.cell_dofs + self.n_scalar])
        self.pressure_dofs = np.arange(self.n_p, dtype=np.int64).reshape(na, self.n_local_p)

    def _buildGeometry(self):
        ct = self.mesh
        xy = ct.vertices[ct.triangles[self.active_cells]]
        self.origin = xy[:, 0]
        self.jacobian = np.stack([xy[:, 1] - xy[:, 0], xy[:, 2] - xy[:, 0]], axis=2)
        self.inverse_jacobian = np.linalg.inv(self.jacobian)
        self.cell_areas = ct.areas[self.active_cells]
        self.cell_diameters = ct.diameters[self.active_cells]
        self.centroids = xy.mean(axis=1)

        self.node_points = np.zeros((self.n_scalar, 2))
        self.node_points[self.cell_dofs] = self.to_physical(np.arange(self.n_cells), np.broadcast_to(self.element.nodes, (self.n_cells,) + self.element.nodes.shape))

    def _buildPressureBasis(self):
        ref, w = Util.triangleRule(2 * self.k)
        pts = self.to_physical(np.arange(self.n_cells), np.broadcast_to(ref, (self.n_cells,) + ref.shape))
        q = self.pressure_monomials.evaluate(self._scaled(np.arange(self.n_cells), pts))
        gram = np.einsum("q,cqi,cqj->cij", w, q, q) * (2 * self.cell_areas)[:, None, None]
        low = np.linalg.cholesky(gram)
        eye = np.broadcast_to(np.eye(self.n_local_p), gram.shape)
        self.pressure_coefficients = np.swapaxes(np.linalg.solve(low, eye), 1, 2)

    def _scaled(self, cells, points):
        return (points - self.centroids[cells, None, :]) / self.cell_diameters[cells, None, None]

    def to_reference(self, cells, points):
        """Points (nc, nq, 2), one batch per cell."""
        return np.einsum("cij,cqj->cqi", self.inverse_jacobian[cells], points - self.origin[cells, None, :])

    def to_physical(self, cells, ref_points):
        return self.origin[cells, None, :] + np.einsum("cij,cqj->cqi", self.jacobian[cells], ref_points)

    def tabulate_velocity(self, cells, points):
        """
        Scalar shape values (nc, nq, nloc) and physical gradients (nc, nq, nloc, 2).
        """

        ref = self.to_reference(cells, points)
        values = self.element.values(ref)
        gref = self.element.gradients(ref)
        grads = np.einsum("cji,cqaj->cqai", self.inverse_jacobian[cells], gref)
        return values, grads

    def tabulate_velocity_directional(self, cells, points, directions, order):
        """Scalar (directions . grad)^order of the shape functions, directions given per cell."""

        ref = self.to_reference(cells, points)
        d = np.einsum("cij,cj->ci", self.inverse_jacobian[cells], directions)
        mono = self.element.monomials
        op = np.linalg.matrix_power(d[:, 0, None, None] * mono.derivative_matrix(0)
                                    + d[:, 1, None, None] * mono.derivative_matrix(1), order)
        return np.einsum("cqm,cmn,na->cqa", mono.evaluate(ref), op, self.element.coefficients)

    def tabulate_pressure(self, cells, points):
        q = self.pressure_monomials.evaluate(self._scaled(cells, points))
        return np.einsum("cqm,cma->cqa", q, self.pressure_coefficients[cells])

    def tabulate_pressure_directional(self, cells, points, directions, order):
        d = directions / self.cell_diameters[cells, None]
        mono = self.pressure_monomials
        op = np.linalg.matrix_power(d[:, 0, None, None] * mono.derivative_matrix(0)
                                    + d[:, 1, None, None] * mono.derivative_matrix(1), order)
        q = mono.evaluate(self._scaled(cells, points))
        return np.einsum("cqm,cmn,cna->cqa", q, op, self.pressure_coefficients[cells])

    @staticmethod
    def vector_divergence(grads):
        """Divergence of the component-blocked vector basis, shape (nc, nq, 2 * nloc)."""
        return np.concatenate([grads[..., 0], grads[..., 1]], axis=-1)

    def velocity_at(self, cell, points, coefficients):
        a = self._activeIndex(cell)
        points = np.atleast_2d(points)
        values, _ = self.tabulate_velocity(np.array([a]), points[None])
        c = coefficients[self.velocity_dofs[a]].reshape(2, -1)
        return values[0] @ c.T

    def velocity_gradient_at(self, cell, points, coefficients):
        a = self._activeIndex(cell)
        points = np.atleast_2d(points)
        _, grads = self.tabulate_velocity(np.array([a]), points[None])
        c = coefficients[self.velocity_dofs[a]].reshape(2, -1)
        return np.einsum("ia,qaj->qij", c, grads[0])

    def pressure_at(self, cell, points, coefficients):
        a = self._activeIndex(cell)
        points = np.atleast_2d(points)
        return self.tabulate_pressure(np.array([a]), points[None])[0] @ coefficients[self.pressure_dofs[a]]

    def contains(self, cell, points, tol=1e-12):
        lam = Util.barycentric(self.mesh.triangle_coords(cell), points)
        return np.all(lam >= -tol, axis=1)

    def face_gauss_points(self, faces, n):
        """Gauss points (nf, n, 2) and weights (nf, n) on mesh faces."""

        s, w = Util.gaussLegendre(n)
        p = self.mesh.vertices[self.mesh.faces[faces, 0]]
        q = self.mesh.vertices[self.mesh.faces[faces, 1]]
        pts = p[:, None, :] + s[None, :, None] * (q - p)[:, None, :]
        return pts, w[None, :] * self.mesh.face_lengths[faces, None]

    def _activeIndex(self, cell):
        if not (0 <= cell < self.mesh.n_triangles) or self.cell_index[cell] < 0:
            raise GeometryError("cell %s is not an active cell" % (cell))
        return int(self.cell_index[cell])


def build_space(ct, topo, k):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 2:
        raise ConfigError("invalid polynomial degree %s, the velocity degree must be at least 2" % (k))
    return SvSpace(ct, topo, int(k))


def eval_basis(space, cell, x, m=0):
    """Velocity shape values (n, nloc) for m=0, gradients (n, nloc, 2) for m=1 at points x of the CT cell."""

    assert m in (0, 1)
    a = space._activeIndex(cell)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if not np.all(space.contains(cell, x)):
        raise GeometryError("point outside cell %d" % (cell))
    values, grads = space.tabulate_velocity(np.array([a]), x[None])
    return values[0] if m == 0 else grads[0]


def face_normal_jump(space, face, order, coefficients, field="velocity", n_points=None):
    """
    Jump (first cell minus second cell) of the order-th derivative along the stored face
    normal, at the Gauss points of the face. Velocity jumps have shape (n, 2).
    """

    topo = space.topo
    if face not in set(topo.active_faces.tolist()):
        raise GeometryError("face %s is not interior to the active mesh" % (face))
    if field == "velocity":
        assert 1 <= order <= space.k or order == 0
    elif field == "pressure":
        assert 0 <= order <= space.k - 1
    else:
        assert False

    n = space.k + 1 if n_points is None else n_points
    pts, _ = space.face_gauss_points(np.array([face]), n)
    normal = space.mesh.face_normals[face][None, :]

    ret = 0
    for side, sign in [(0, 1.0), (1, -1.0)]:
        a = space.cell_index[space.mesh.face_cells[face, side]]
        cells = np.array([a])
        if field == "velocity":
            vals = space.tabulate_velocity_directional(cells, pts, normal, order)[0]
            c = coefficients[space.velocity_dofs[a]].reshape(2, -1)
            ret = ret + sign * (vals @ c.T)
        else:
            vals = space.tabulate_pressure_directional(cells, pts, normal, order)[0]
            ret = ret + sign * (vals @ coefficients[space.pressure_dofs[a]])
    return ret


def interpolate_velocity(space, func):
    """Nodal interpolant of func, which maps points (n, 2) to values (n, 2)."""

    v = np.asarray(func(space.node_points), dtype=float)
    return np.concatenate([v[:, 0], v[:, 1]])


def project_pressure(space, func, rules):
    """Cellwise L2(K) projection of func on the pressure space."""

    cells = np.arange(space.n_cells)
    pts, w = rules.full_cell_rule(space, cells)
    psi = space.tabulate_pressure(cells, pts)
    vals = func(pts.reshape(-1, 2)).reshape(pts.shape[:2])
    return np.einsum("cq,cq,cqa->ca", w, vals, psi).reshape(-1)
