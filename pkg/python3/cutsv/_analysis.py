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



import math
import numpy as np
from ._util import Util
from ._assembly import assemble_mean_constraint


class ErrorReport:

    def __init__(self):
        self.err_h1_u = None                    # |grad(u - u_h)| over the domain
        self.err_l2_p = None                    # |p - p_h| with means aligned over the domain
        self.err_div = None                     # |div u_h| over the domain
        self.err_div_interior = None            # max over strip-interior cells of |div u_h|_K
        self.flux = None                        # outward flux of u_h through the interior region boundary
        self.n_u = None
        self.n_p = None

        self.grad_norm = None                   # |grad u_h| over the domain
        self.div_interior_l2 = None             # |div u_h| over the strip-interior region
        self.div_strip_share = None             # share of |div u_h|^2 carried by the strip
        self.pressure_mean_interior = None      # integral of p_h over the interior region

    def is_finite(self):
        return all(math.isfinite(x) for x in [self.err_h1_u, self.err_l2_p, self.err_div, self.err_div_interior, self.flux])


def compute_errors(solution, exact, space, topo, rules):
    """solution needs velocity and pressure coefficient vectors."""

    ret = ErrorReport()
    ret.n_u = space.n_u
    ret.n_p = space.n_p

    h1 = 0.0
    grad = 0.0
    div = _DivergenceSums(topo)
    pe2 = 0.0
    pe1 = 0.0
    area = 0.0
    for cells, pts, w in rules.volume_batches(space):
        _, grads = space.tabulate_velocity(cells, pts)
        c = solution.velocity[space.velocity_dofs[cells]].reshape(len(cells), 2, -1)
        guh = np.einsum("cia,cqaj->cqij", c, grads)
        h1 += np.einsum("cq,cqij->", w, (exact.velocity_gradient(pts) - guh) ** 2)
        grad += np.einsum("cq,cqij->", w, guh ** 2)
        div.add(space.active_cells[cells], w, guh[..., 0, 0] + guh[..., 1, 1])

        ph = np.einsum("cqp,cp->cq", space.tabulate_pressure(cells, pts), solution.pressure[space.pressure_dofs[cells]])
        e = exact.pressure(pts) - ph
        pe2 += np.sum(w * e * e)
        pe1 += np.sum(w * e)
        area += np.sum(w)

    ret.err_h1_u = math.sqrt(h1)
    ret.grad_norm = math.sqrt(grad)
    ret.err_div = math.sqrt(div.total)
    ret.div_strip_share = div.strip_share()
    # the best constant shift removes the mean of the error
    ret.err_l2_p = math.sqrt(max(pe2 - pe1 * pe1 / area, 0.0))

    ret.err_div_interior, ret.div_interior_l2 = check_interior_divfree(solution, space, topo)
    ret.flux = boundary_flux(solution, space, topo)
    ret.pressure_mean_interior = float(assemble_mean_constraint(space, topo, rules) @ solution.pressure)
    return ret


def check_interior_divfree(solution, space, topo):
    """
    Returns the maximal |div u_h|_{L2(K)} over the strip-interior cells and the L2 norm of
    div u_h over their union, both integrated exactly on full cells.
    """

    cells = space.cell_index[topo.strip_interior]
    if len(cells) == 0:
        return 0.0, 0.0
    ref, rw = Util.triangleRule(2 * space.k)
    pts = space.to_physical(cells, np.broadcast_to(ref, (len(cells),) + ref.shape))
    w = rw[None, :] * (2 * space.cell_areas[cells])[:, None]
    d = _divergence(solution, space, cells, pts)
    per = np.sqrt(np.sum(w * d * d, axis=1))
    return float(per.max()), float(np.sqrt(np.sum(per ** 2)))


def boundary_flux(solution, space, topo):
    """Outward flux of u_h through the boundary of the interior region."""

    faces = topo.interior_boundary_faces
    if len(faces) == 0:
        return 0.0
    mesh = space.mesh
    sign = topo.interior_boundary_sign
    inner = np.where(sign > 0, mesh.face_cells[faces, 0], mesh.face_cells[faces, 1])
    cells = space.cell_index[inner]
    pts, w = space.face_gauss_points(faces, space.k + 1)
    values, _ = space.tabulate_velocity(cells, pts)
    c = solution.velocity[space.velocity_dofs[cells]].reshape(len(cells), 2, -1)
    uh = np.einsum("cia,cqa->cqi", c, values)
    un = np.einsum("cqi,ci->cq", uh, mesh.face_normals[faces] * sign[:, None])
    return float(np.sum(w * un))


def divergence_split(solution, space, topo, rules):
    """Share of |div u_h|^2 over the domain that is carried by the strip cells."""

    div = _DivergenceSums(topo)
    for cells, pts, w in rules.volume_batches(space):
        div.add(space.active_cells[cells], w, _divergence(solution, space, cells, pts))
    return div.strip_share()


def divergence_cell_field(solution, space, topo, rules):
    """Mean of |div u_h| over K ∩ Omega for every CT cell, zero on inactive cells."""

    ret = np.zeros(space.mesh.n_triangles)
    for cells, pts, w in rules.volume_batches(space):
        d = np.abs(_divergence(solution, space, cells, pts))
        vol = w.sum(axis=1)
        mean = np.divide(np.sum(w * d, axis=1), vol, out=np.zeros_like(vol), where=vol > 0)
        ret[space.active_cells[cells]] = mean
    return ret


def compute_eoc(errors, hs):
    """Rates log(e_prev / e) / log(h_prev / h), None for the first entry."""

    assert len(errors) == len(hs)
    ret = [None]
    for i in range(1, len(errors)):
        e0, e1 = errors[i - 1], errors[i]
        if e0 is None or e1 is None or not (e0 > 0 and e1 > 0) or not (math.isfinite(e0) and math.isfinite(e1)):
            ret.append(float("nan"))
        else:
            ret.append(math.log(e0 / e1) / math.log(hs[i - 1] / hs[i]))
    return ret


class _DivergenceSums:

    def __init__(self, topo):
        self._strip = topo.strip_mask
        self.total = 0.0
        self.strip = 0.0

    def add(self, ct_cells, w, d):
        per = np.sum(w * d * d, axis=1)
        self.total += float(per.sum())
        self.strip += float(per[self._strip[ct_cells]].sum())

    def strip_share(self):
        if self.total == 0:
            # no violation at all
            return 1.0
        return self.strip / self.total


def _divergence(solution, space, cells, pts):
    _, grads = space.tabulate_velocity(cells, pts)
    c = solution.velocity[space.velocity_dofs[cells]]
    return np.einsum("ca,cqa->cq", c, space.vector_divergence(grads))
