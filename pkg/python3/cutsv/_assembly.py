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



import os
import logging
import numpy as np
import scipy.io
import scipy.sparse
from ._errors import AssemblyError


_LOGGER = logging.getLogger(__name__)

# cells per vectorized batch
_CHUNK = 2048


class AssembledSystem:
    """
    Blocks of the discrete Stokes system.

    a_parts holds the viscous, grad-div, Nitsche consistency, penalty and ghost parts of a_h,
    f_parts the volume, consistency and penalty parts of the momentum right-hand side.
    A and F are the recombinations for (gamma, eta). J is kept without the 1/(1+gamma) factor.
    """

    A_PARTS = ["viscous", "graddiv", "nitsche", "penalty", "ghost"]
    F_PARTS = ["volume", "consistency", "penalty"]

    def __init__(self, a_parts, b, j, m, f_parts, g, gamma, eta, h):
        assert sorted(a_parts) == sorted(self.A_PARTS)
        assert sorted(f_parts) == sorted(self.F_PARTS)

        self.a_parts = a_parts
        self.B = b
        self.J = j
        self.m = m
        self.f_parts = f_parts
        self.G = g
        self.gamma = gamma
        self.eta = eta
        self.h = h

        self.A = _combineA(a_parts, gamma, eta)
        self.F = f_parts["volume"] + f_parts["consistency"] + eta * f_parts["penalty"]

    @property
    def n_u(self):
        return self.A.shape[0]

    @property
    def n_p(self):
        return self.J.shape[0]

    def with_params(self, gamma, eta):
        return AssembledSystem(self.a_parts, self.B, self.J, self.m, self.f_parts, self.G, gamma, eta, self.h)

    def norm_matrix(self, with_graddiv=False):
        """Gram matrix of the mesh-dependent velocity norm, optionally with the grad-div part."""

        ret = self.a_parts["viscous"] + self.eta * self.a_parts["penalty"] + self.a_parts["ghost"]
        if with_graddiv:
            ret = ret + self.gamma * self.a_parts["graddiv"]
        return ret.tocsr()


def assemble_a(space, topo, rules, params):
    gamma, eta = params.resolve(space.mesh.h)
    return _combineA(_assembleAParts(space, topo, rules), gamma, eta)


def assemble_b(space, topo, rules):
    _checkRules(topo, rules)
    asm = _Accumulator(space.n_p, space.n_u)
    for cells, pts, w in rules.volume_batches(space, _CHUNK):
        _, grads = space.tabulate_velocity(cells, pts)
        div = space.vector_divergence(grads)
        psi = space.tabulate_pressure(cells, pts)
        asm.add(space.pressure_dofs[cells], space.velocity_dofs[cells], -np.einsum("cq,cqp,cqa->cpa", w, psi, div))
    for cells, pts, w, nrm in rules.interface_batches(space, _CHUNK):
        values, _ = space.tabulate_velocity(cells, pts)
        psi = space.tabulate_pressure(cells, pts)
        vn = np.concatenate([values * nrm[..., 0, None], values * nrm[..., 1, None]], axis=-1)
        asm.add(space.pressure_dofs[cells], space.velocity_dofs[cells], np.einsum("cq,cqp,cqa->cpa", w, psi, vn))
    return asm.matrix()


def assemble_J(space, topo):
    """Pressure ghost penalty over the faces of the cut strip, without the 1/(1+gamma) factor."""

    k = space.k
    faces = topo.ghost_faces
    asm = _Accumulator(space.n_p, space.n_p)
    if len(faces) > 0:
        c0, c1, pts, w, nrm, hf = _faceData(space, faces)
        dofs = np.hstack([space.pressure_dofs[c0], space.pressure_dofs[c1]])
        for order in range(0, k):
            jump = np.concatenate([space.tabulate_pressure_directional(c0, pts, nrm, order),
                                   -space.tabulate_pressure_directional(c1, pts, nrm, order)], axis=-1)
            loc = np.einsum("fq,fqa,fqb->fab", w, jump, jump) * (hf ** (2 * order + 1))[:, None, None]
            asm.add(dofs, dofs, loc)
    ret = asm.matrix()
    return ((ret + ret.T) * 0.5).tocsr()


def assemble_mean_constraint(space, topo, rules):
    """Integrals of the pressure basis over the interior region."""

    ret = np.zeros(space.n_p)
    cells = space.cell_index[topo.ct_interior]
    for i in range(0, len(cells), _CHUNK):
        chunk = cells[i:i + _CHUNK]
        pts, w = rules.full_cell_rule(space, chunk)
        psi = space.tabulate_pressure(chunk, pts)
        np.add.at(ret, space.pressure_dofs[chunk], np.einsum("cq,cqp->cp", w, psi))
    return ret


def assemble_rhs(space, topo, rules, f, g, params):
    """
    F(v) = (f, v) - <n.grad v, g> + eta sum_K 1/h_K <g, v>_{K_Gamma},  G(q) = <g.n, q>.
    """

    _, eta = params.resolve(space.mesh.h)
    parts, gvec = _assembleRhsParts(space, topo, rules, f, g)
    return parts["volume"] + parts["consistency"] + eta * parts["penalty"], gvec


def assemble_system(space, topo, rules, exact, params):
    gamma, eta = params.resolve(space.mesh.h)
    _LOGGER.info("assembling n_u=%d n_p=%d with gamma=%g eta=%g", space.n_u, space.n_p, gamma, eta)

    aParts = _assembleAParts(space, topo, rules)
    b = assemble_b(space, topo, rules)
    j = assemble_J(space, topo)
    m = assemble_mean_constraint(space, topo, rules)
    fParts, gvec = _assembleRhsParts(space, topo, rules, exact.forcing, exact.boundary_trace)
    return AssembledSystem(aParts, b, j, m, fParts, gvec, gamma, eta, space.mesh.h)


def export_matrices(system, dir_path):
    """Writes every block in Matrix Market format, vectors as dense columns."""

    os.makedirs(dir_path, exist_ok=True)
    for name, mat in [("A", system.A), ("B", system.B), ("J", system.J)]:
        scipy.io.mmwrite(os.path.join(dir_path, name + ".mtx"), mat.tocoo())
    for name, vec in [("m", system.m), ("F", system.F), ("G", system.G)]:
        scipy.io.mmwrite(os.path.join(dir_path, name + ".mtx"), vec.reshape(-1, 1))


class _Accumulator:

    def __init__(self, n_rows, n_cols):
        self._shape = (n_rows, n_cols)
        self._rows = []
        self._cols = []
        self._vals = []

    def add(self, row_dofs, col_dofs, local):
        r = np.broadcast_to(row_dofs[:, :, None], local.shape)
        c = np.broadcast_to(col_dofs[:, None, :], local.shape)
        self._rows.append(r.ravel())
        self._cols.append(c.ravel())
        self._vals.append(local.ravel())

    def add_scalar_blocks(self, scalar_dofs, local, n_scalar):
        # same scalar matrix on both velocity components
        for comp in range(2):
            d = scalar_dofs + comp * n_scalar
            self.add(d, d, local)

    def matrix(self):
        if len(self._vals) == 0:
            return scipy.sparse.csr_matrix(self._shape)
        return scipy.sparse.coo_matrix((np.concatenate(self._vals), (np.concatenate(self._rows), np.concatenate(self._cols))),
                                       shape=self._shape).tocsr()


def _combineA(parts, gamma, eta):
    ret = parts["viscous"] + gamma * parts["graddiv"] + parts["nitsche"] + parts["ghost"] + eta * parts["penalty"]
    return ((ret + ret.T) * 0.5).tocsr()


def _checkRules(topo, rules):
    for t in topo.ct_cut:
        if not rules.has_rule(t):
            raise AssemblyError("no quadrature rule for active cut cell %d" % (t))


def _faceData(space, faces):
    mesh = space.mesh
    c0 = space.cell_index[mesh.face_cells[faces, 0]]
    c1 = space.cell_index[mesh.face_cells[faces, 1]]
    assert np.all(c0 >= 0) and np.all(c1 >= 0)
    pts, w = space.face_gauss_points(faces, space.k + 1)
    return c0, c1, pts, w, mesh.face_normals[faces], mesh.face_lengths[faces]


def _assembleAParts(space, topo, rules):
    _checkRules(topo, rules)
    ns = space.n_scalar
    nu = space.n_u

    visc = _Accumulator(nu, nu)
    graddiv = _Accumulator(nu, nu)
    for cells, pts, w in rules.volume_batches(space, _CHUNK):
        _, grads = space.tabulate_velocity(cells, pts)
        visc.add_scalar_blocks(space.cell_dofs[cells], np.einsum("cq,cqai,cqbi->cab", w, grads, grads), ns)
        div = space.vector_divergence(grads)
        graddiv.add(space.velocity_dofs[cells], space.velocity_dofs[cells], np.einsum("cq,cqa,cqb->cab", w, div, div))

    nitsche = _Accumulator(nu, nu)
    penalty = _Accumulator(nu, nu)
    for cells, pts, w, nrm in rules.interface_batches(space, _CHUNK):
        values, grads = space.tabulate_velocity(cells, pts)
        dn = np.einsum("cqai,cqi->cqa", grads, nrm)
        cons = np.einsum("cq,cqa,cqb->cab", w, values, dn)
        nitsche.add_scalar_blocks(space.cell_dofs[cells], -(cons + np.swapaxes(cons, 1, 2)), ns)
        mass = np.einsum("cq,cqa,cqb->cab", w, values, values) / space.cell_diameters[cells, None, None]
        penalty.add_scalar_blocks(space.cell_dofs[cells], mass, ns)

    ghost = _Accumulator(nu, nu)
    faces = topo.ghost_faces
    if len(faces) > 0:
        c0, c1, pts, w, nrm, hf = _faceData(space, faces)
        dofs = np.hstack([space.cell_dofs[c0], space.cell_dofs[c1]])
        for order in range(1, space.k + 1):
            jump = np.concatenate([space.tabulate_velocity_directional(c0, pts, nrm, order),
                                   -space.tabulate_velocity_directional(c1, pts, nrm, order)], axis=-1)
            loc = np.einsum("fq,fqa,fqb->fab", w, jump, jump) * (hf ** (2 * order - 1))[:, None, None]
            ghost.add_scalar_blocks(dofs, loc, ns)

    ret = {
        "viscous": visc.matrix(),
        "graddiv": graddiv.matrix(),
        "nitsche": nitsche.matrix(),
        "penalty": penalty.matrix(),
        "ghost": ghost.matrix(),
    }
    _LOGGER.debug("velocity blocks: %s", ", ".join("%s nnz=%d" % (k, v.nnz) for k, v in ret.items()))
    return ret


def _assembleRhsParts(space, topo, rules, f, g):
    _checkRules(topo, rules)
    ns = space.n_scalar

    fvol = np.zeros(space.n_u)
    for cells, pts, w in rules.volume_batches(space, _CHUNK):
        values, _ = space.tabulate_velocity(cells, pts)
        loc = np.einsum("cq,cqa,cqi->cia", w, values, f(pts))
        _addVector(fvol, space.cell_dofs[cells], loc, ns)

    fcons = np.zeros(space.n_u)
    fpen = np.zeros(space.n_u)
    gvec = np.zeros(space.n_p)
    for cells, pts, w, nrm in rules.interface_batches(space, _CHUNK):
        values, grads = space.tabulate_velocity(cells, pts)
        dn = np.einsum("cqai,cqi->cqa", grads, nrm)
        gv = g(pts)
        _addVector(fcons, space.cell_dofs[cells], -np.einsum("cq,cqa,cqi->cia", w, dn, gv), ns)
        pen = np.einsum("cq,cqa,cqi->cia", w, values, gv) / space.cell_diameters[cells, None, None]
        _addVector(fpen, space.cell_dofs[cells], pen, ns)
        psi = space.tabulate_pressure(cells, pts)
        gn = np.einsum("cqi,cqi->cq", gv, nrm)
        np.add.at(gvec, space.pressure_dofs[cells], np.einsum("cq,cq,cqp->cp", w, gn, psi))

    return {"volume": fvol, "consistency": fcons, "penalty": fpen}, gvec


def _addVector(vec, scalar_dofs, local, n_scalar):
    # local has shape (nc, 2, nloc)
    for comp in range(2):
        np.add.at(vec, scalar_dofs + comp * n_scalar, local[:, comp, :])
