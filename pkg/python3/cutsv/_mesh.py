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
import scipy.sparse
from ._util import Util
from ._errors import MeshError
from ._vtk import write_legacy_vtk


class TriangleMesh:
    """
    Conforming triangulation with face topology.

    faces[f] holds the two vertex indices of face f (sorted), face_cells[f] the adjacent
    triangles (lower index first, -1 for a boundary face), cell_faces[t, e] the face of the
    local edge (triangles[t, e], triangles[t, (e + 1) % 3]).
    """

    def __init__(self, vertices, triangles):
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        assert self.vertices.ndim == 2 and self.vertices.shape[1] == 2
        assert self.triangles.ndim == 2 and self.triangles.shape[1] == 3

        self.areas = Util.signedAreas(self.vertices, self.triangles)
        if np.any(self.areas <= 0):
            raise MeshError("triangle %d is not counterclockwise" % (int(np.argmin(self.areas))))
        self.diameters = Util.diameters(self.vertices, self.triangles)

        self._buildTopology()
        self._buildFaceGeometry()

        self._vertexCells = scipy.sparse.csr_matrix(
            (np.ones(self.triangles.size), (self.triangles.ravel(), np.repeat(np.arange(self.n_triangles), 3))),
            shape=(self.n_vertices, self.n_triangles))

        for arr in [self.vertices, self.triangles, self.areas, self.diameters, self.faces, self.face_cells,
                    self.cell_faces, self.face_lengths, self.face_normals]:
            arr.setflags(write=False)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_triangles(self):
        return len(self.triangles)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def boundary_faces(self):
        return np.flatnonzero(self.face_cells[:, 1] < 0)

    @property
    def interior_faces(self):
        return np.flatnonzero(self.face_cells[:, 1] >= 0)

    @property
    def centroids(self):
        return self.vertices[self.triangles].mean(axis=1)

    def triangle_coords(self, t):
        return self.vertices[self.triangles[t]]

    def element_patch(self, t):
        """All triangles sharing at least one vertex with t, t included, sorted."""

        if not (0 <= t < self.n_triangles):
            raise MeshError("invalid triangle index %s" % (t))
        return np.unique(self._vertexCells[self.triangles[t]].indices)

    def write_vtk(self, path, cell_data=None):
        write_legacy_vtk(path, self.vertices, self.triangles, cell_data)

    def _buildTopology(self):
        nt = self.n_triangles

        edges = np.concatenate([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]], self.triangles[:, [2, 0]]])
        faces, inverse = np.unique(np.sort(edges, axis=1), axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)

        counts = np.bincount(inverse, minlength=len(faces))
        if np.any(counts > 2):
            raise MeshError("face %d is shared by more than two triangles" % (int(np.argmax(counts))))

        cellId = np.tile(np.arange(nt), 3)
        order = np.argsort(inverse, kind="stable")
        invSorted = inverse[order]
        cellSorted = cellId[order]
        first = np.ones(len(order), dtype=bool)
        first[1:] = invSorted[1:] != invSorted[:-1]

        faceCells = np.full((len(faces), 2), -1, dtype=np.int64)
        faceCells[invSorted[first], 0] = cellSorted[first]
        faceCells[invSorted[~first], 1] = cellSorted[~first]
        swap = (faceCells[:, 1] >= 0) & (faceCells[:, 1] < faceCells[:, 0])
        faceCells[swap] = faceCells[swap][:, ::-1]

        self.faces = faces.astype(np.int64)
        self.face_cells = faceCells
        self.cell_faces = inverse.reshape(3, nt).T.copy()

    def _buildFaceGeometry(self):
        p = self.vertices[self.faces[:, 0]]
        q = self.vertices[self.faces[:, 1]]
        t = q - p
        self.face_lengths = np.linalg.norm(t, axis=1)
        n = np.column_stack([t[:, 1], -t[:, 0]]) / self.face_lengths[:, None]

        # normals point out of the lower-indexed adjacent triangle
        inward = np.einsum("ij,ij->i", self.centroids[self.face_cells[:, 0]] - 0.5 * (p + q), n) > 0
        n[inward] *= -1
        self.face_normals = n


class BackgroundMesh(TriangleMesh):

    def __init__(self, vertices, triangles, h, n, box):
        super().__init__(vertices, triangles)
        self.h = h
        self.n = n
        self.box = box


class CtMesh(TriangleMesh):
    """
    Clough-Tocher refinement: child 3 * t + i of macro triangle t is (v_i, v_{i+1}, barycenter).
    """

    def __init__(self, macro):
        nv = macro.n_vertices
        nt = macro.n_triangles
        tri = macro.triangles

        barycenters = macro.vertices[tri].mean(axis=1)
        m = nv + np.arange(nt)
        children = np.empty((nt, 3, 3), dtype=np.int64)
        for i in range(3):
            children[:, i, 0] = tri[:, i]
            children[:, i, 1] = tri[:, (i + 1) % 3]
            children[:, i, 2] = m

        super().__init__(np.vstack([macro.vertices, barycenters]), children.reshape(-1, 3))

        self.macro = macro
        self.h = macro.h
        self.barycenters = barycenters
        self.child_to_macro = np.repeat(np.arange(nt), 3)
        self.macro_to_children = np.arange(3 * nt).reshape(nt, 3)

        fc = self.face_cells
        self.face_macro_interior = (fc[:, 1] >= 0) & (self.child_to_macro[fc[:, 0]] == self.child_to_macro[np.maximum(fc[:, 1], 0)])

        for arr in [self.barycenters, self.child_to_macro, self.macro_to_children, self.face_macro_interior]:
            arr.setflags(write=False)


def build_type1_mesh(n, box=((0.0, 0.0), (1.0, 1.0))):
    """
    Uniform n x n grid on the box, every square split by its lower-left to upper-right diagonal.
    """

    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise MeshError("invalid subdivision count %s" % (n))
    (x0, y0), (x1, y1) = box
    if not (x1 > x0 and y1 > y0):
        raise MeshError("invalid covering box %s" % (box,))

    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    X, Y = np.meshgrid(xs, ys, indexing="xy")
    vertices = np.column_stack([X.ravel(), Y.ravel()])

    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    a = (j * (n + 1) + i).ravel()
    b = a + 1
    c = a + n + 2
    d = a + n + 1
    triangles = np.empty((2 * n * n, 3), dtype=np.int64)
    triangles[0::2] = np.column_stack([a, b, c])
    triangles[1::2] = np.column_stack([a, c, d])

    h = max((x1 - x0) / n, (y1 - y0) / n)
    return BackgroundMesh(vertices, triangles, h, n, ((x0, y0), (x1, y1)))


def clough_tocher_refine(mesh):
    return CtMesh(mesh)


def element_patch(mesh, t):
    return mesh.element_patch(t)
