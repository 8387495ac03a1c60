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



import enum
import math
import logging
import numpy as np
from ._util import Util
from ._errors import GeometryError


_LOGGER = logging.getLogger(__name__)

# edge parameters closer than this to an end point do not split the edge
_EDGE_EPS = 1e-14

# maximal angular span of one arc panel
_ARC_PANEL = np.pi / 8

# vertices this close to the circle count as inside, as in classify
_SNAP = 1e-12


class QuadTarget(enum.Enum):
    FULL = "full"
    CUT = "cut"
    INTERFACE = "interface"


class QuadRule:

    def __init__(self, points, weights, degree, target, normals=None):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.weights = np.asarray(weights, dtype=float).reshape(-1)
        self.degree = degree
        self.target = target
        self.normals = None if normals is None else np.asarray(normals, dtype=float).reshape(-1, 2)
        assert len(self.points) == len(self.weights)
        assert self.normals is None or len(self.normals) == len(self.points)

    @property
    def size(self):
        return len(self.weights)

    @property
    def is_empty(self):
        return self.size == 0

    def total(self):
        return float(self.weights.sum())

    def integrate(self, func):
        """Integral of func, which maps points (n, 2) to values (n, ...)."""

        if self.is_empty:
            return 0.0
        return np.tensordot(self.weights, func(self.points), axes=(0, 0))


def full_rule(tri, degree):
    tri = np.asarray(tri, dtype=float)
    ref, w = Util.triangleRule(degree)
    jac = np.array([tri[1] - tri[0], tri[2] - tri[0]]).T
    det = abs(np.linalg.det(jac))
    return QuadRule(tri[0] + ref @ jac.T, w * det, degree, QuadTarget.FULL)


def _empty(degree, target):
    return QuadRule(np.zeros((0, 2)), np.zeros(0), degree, target,
                    np.zeros((0, 2)) if target == QuadTarget.INTERFACE else None)


def _strictlyInside(tri, point):
    return bool(np.all(Util.barycentric(tri, point)[0] > 0))


def _cutGeometry(tri, dom):
    """
    Boundary of K ∩ Omega as straight pieces (pairs of points on the edges of K)
    and arcs (angle intervals of the circle inside K).
    Returns None when K lies inside the closed disk up to _SNAP.
    """

    if np.all(np.linalg.norm(tri - dom.center, axis=1) <= dom.radius + _SNAP):
        return None

    segments = []
    rootPoints = []
    for i in range(3):
        a = tri[i]
        b = tri[(i + 1) % 3]
        roots = dom.segment_intersections(a, b)
        rootPoints += [a + t * (b - a) for t in roots]
        ts = [0.0] + [t for t in roots if _EDGE_EPS < t < 1 - _EDGE_EPS] + [1.0]
        for t0, t1 in zip(ts[:-1], ts[1:]):
            if dom.phi(a + 0.5 * (t0 + t1) * (b - a)) < 0:
                segments.append((a + t0 * (b - a), a + t1 * (b - a)))

    if len(rootPoints) == 0:
        # the circle may still lie strictly inside the triangle
        if _strictlyInside(tri, dom.center) and \
                Util.pointSegmentDistance(dom.center, tri, np.roll(tri, -1, axis=0)).min() > dom.radius:
            return [], [(0.0, 2 * np.pi)]
        return [], []

    angles = np.sort(np.mod(dom.angle_of(np.array(rootPoints)), 2 * np.pi))
    keep = np.ones(len(angles), dtype=bool)
    keep[1:] = np.diff(angles) > 1e-12
    angles = angles[keep]
    if len(angles) > 1 and angles[0] + 2 * np.pi - angles[-1] <= 1e-12:
        angles = angles[:-1]

    arcs = []
    for i in range(len(angles)):
        t0 = angles[i]
        t1 = angles[i + 1] if i + 1 < len(angles) else angles[0] + 2 * np.pi
        if _strictlyInside(tri, dom.point_at(0.5 * (t0 + t1))):
            arcs.append((t0, t1))
    return segments, arcs


def _arcPanels(t0, t1, n):
    """Gauss points and weights in angle over [t0, t1] split into panels."""

    count = max(1, math.ceil((t1 - t0) / _ARC_PANEL - 1e-12))
    x, w = Util.gaussLegendre(n)
    edges = np.linspace(t0, t1, count + 1)
    span = np.diff(edges)
    theta = (edges[:-1, None] + span[:, None] * x[None, :]).ravel()
    weight = (span[:, None] * w[None, :]).ravel()
    return theta, weight


def cut_volume_rule(tri, dom, degree):
    """
    Rule on K ∩ Omega. The convex region is fanned from an inner point into straight
    triangles (collapsed Gauss) and curved sectors (Gauss in angle times Gauss in radius).
    """

    tri = np.asarray(tri, dtype=float)
    geom = _cutGeometry(tri, dom)
    if geom is None:
        return full_rule(tri, degree)
    segments, arcs = geom
    if len(segments) == 0 and len(arcs) == 0:
        return _empty(degree, QuadTarget.CUT)

    if len(segments) == 0:
        # the whole circle lies inside K
        apex = dom.center
    else:
        fanPoints = [p for seg in segments for p in seg] + [dom.point_at(0.5 * (t0 + t1)) for t0, t1 in arcs]
        apex = np.mean(fanPoints, axis=0)

    points = []
    weights = []

    ref, rw = Util.triangleRule(degree)
    for a, b in segments:
        jac = np.array([a - apex, b - apex]).T
        det = abs(np.linalg.det(jac))
        points.append(apex + ref @ jac.T)
        weights.append(rw * det)

    ns = max(1, math.ceil((degree + 2) / 2))
    s, ws = Util.gaussLegendre(ns)
    for t0, t1 in arcs:
        theta, wt = _arcPanels(t0, t1, degree + 2)
        gam = dom.point_at(theta)
        dgam = dom.radius * np.stack([-np.sin(theta), np.cos(theta)], axis=-1)
        det = np.abs(Util.cross2(gam - apex, dgam))
        points.append(apex + s[None, :, None] * (gam - apex)[:, None, :])
        weights.append(wt[:, None] * det[:, None] * (ws * s)[None, :])

    points = np.concatenate([p.reshape(-1, 2) for p in points])
    weights = np.concatenate([w.reshape(-1) for w in weights])
    keep = weights > 0
    return QuadRule(points[keep], weights[keep], degree, QuadTarget.CUT)


def interface_rule(tri, dom, degree):
    """Rule on the arc K_Gamma with outward unit normals, empty when the circle misses K."""

    tri = np.asarray(tri, dtype=float)
    geom = _cutGeometry(tri, dom)
    if geom is None or len(geom[1]) == 0:
        return _empty(degree, QuadTarget.INTERFACE)

    thetas = []
    weights = []
    for t0, t1 in geom[1]:
        theta, wt = _arcPanels(t0, t1, degree + 2)
        thetas.append(theta)
        weights.append(dom.radius * wt)
    theta = np.concatenate(thetas)
    normals = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return QuadRule(dom.center + dom.radius * normals, np.concatenate(weights), degree, QuadTarget.INTERFACE, normals)


class QuadratureSet:
    """
    Rules for all active CT cells of a topology.

    Uncut active cells share the reference rule (ref_points, ref_weights on the unit
    triangle). Cut cells carry padded batches: cut_points[i], cut_weights[i] for the volume
    K ∩ Omega of cell cut_cells[i], iface_points[i], iface_weights[i], iface_normals[i] for its
    interface arc. Padding has zero weight.
    """

    def __init__(self, degree, ref_points, ref_weights, cut_cells, volume_rules, interface_rules):
        self.degree = degree
        self.ref_points = ref_points
        self.ref_weights = ref_weights
        self.cut_cells = np.asarray(cut_cells, dtype=np.int64)
        self.volume_rules = volume_rules
        self.interface_rules = interface_rules
        self._index = {int(t): i for i, t in enumerate(self.cut_cells)}

        self.cut_points, self.cut_weights, _ = self._pad(volume_rules)
        self.iface_points, self.iface_weights, self.iface_normals = self._pad(interface_rules)

    def has_rule(self, t):
        return int(t) in self._index

    def volume_rule(self, t):
        return self.volume_rules[self._index[int(t)]]

    def interface_rule(self, t):
        return self.interface_rules[self._index[int(t)]]

    def interface_length(self):
        return float(self.iface_weights.sum())

    def full_cell_rule(self, space, cells):
        """Reference rule mapped onto active cells (positions in space.active_cells)."""

        ref = np.broadcast_to(self.ref_points, (len(cells),) + self.ref_points.shape)
        pts = space.to_physical(cells, ref)
        w = self.ref_weights[None, :] * (2 * space.cell_areas[cells])[:, None]
        return pts, w

    def volume_batches(self, space, chunk=2048):
        """Yields (active cell positions, points, weights) covering the domain part of every active cell."""

        full = space.cell_index[space.topo.ct_interior]
        for i in range(0, len(full), chunk):
            cells = full[i:i + chunk]
            pts, w = self.full_cell_rule(space, cells)
            yield cells, pts, w

        cut = space.cell_index[self.cut_cells]
        for i in range(0, len(cut), chunk):
            yield cut[i:i + chunk], self.cut_points[i:i + chunk], self.cut_weights[i:i + chunk]

    def interface_batches(self, space, chunk=2048):
        cut = space.cell_index[self.cut_cells]
        for i in range(0, len(cut), chunk):
            s = slice(i, i + chunk)
            yield cut[s], self.iface_points[s], self.iface_weights[s], self.iface_normals[s]

    @staticmethod
    def _pad(rules):
        n = max([r.size for r in rules], default=0)
        pts = np.zeros((len(rules), n, 2))
        wts = np.zeros((len(rules), n))
        nrm = np.zeros((len(rules), n, 2))
        for i, r in enumerate(rules):
            pts[i, :r.size] = r.points
            wts[i, :r.size] = r.weights
            if r.normals is not None:
                nrm[i, :r.size] = r.normals
        return pts, wts, nrm


def build_rules(ct, topo, dom, degree):
    ref, rw = Util.triangleRule(degree)

    volumeRules = []
    interfaceRules = []
    for t in topo.ct_cut:
        tri = ct.triangle_coords(t)
        volumeRules.append(cut_volume_rule(tri, dom, degree))
        interfaceRules.append(interface_rule(tri, dom, degree))

    # a single child may miss the arc, a cut macro cell may not
    arcLength = np.zeros(ct.macro.n_triangles)
    np.add.at(arcLength, ct.child_to_macro[topo.ct_cut], [r.total() for r in interfaceRules])
    for m in topo.macro_cut:
        if not arcLength[m] > 0:
            raise GeometryError("cut macro cell %d carries no interface" % (m))

    _LOGGER.debug("built cut rules for %d cells, interface length %.12f", len(topo.ct_cut), arcLength.sum())
    return QuadratureSet(degree, ref, rw, topo.ct_cut, volumeRules, interfaceRules)
