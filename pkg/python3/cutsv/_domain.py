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
import logging
import numpy as np
from ._util import Util
from ._errors import GeometryError
from ._prototype import LevelSet


_LOGGER = logging.getLogger(__name__)

_ROOT_EPS = 1e-14


class ImplicitCircle(LevelSet):
    """
    Disk with level set phi(x) = |x - center|^2 - radius^2.
    """

    def __init__(self, center, radius):
        if not (radius > 0 and np.isfinite(radius)):
            raise GeometryError("invalid circle radius %s" % (radius))
        self.center = np.array(center, dtype=float)
        self.radius = float(radius)
        assert self.center.shape == (2,)

    @classmethod
    def from_radius_squared(cls, center, radius_squared):
        if not radius_squared > 0:
            raise GeometryError("invalid squared circle radius %s" % (radius_squared))
        return cls(center, np.sqrt(radius_squared))

    @property
    def area(self):
        return np.pi * self.radius**2

    @property
    def perimeter(self):
        return 2 * np.pi * self.radius

    def get_description(self):
        return "circle(%r, %r, %r)" % (self.center[0], self.center[1], self.radius)

    def phi(self, points):
        d = np.asarray(points, dtype=float) - self.center
        return np.einsum("...i,...i->...", d, d) - self.radius**2

    def normal(self, points):
        d = np.asarray(points, dtype=float) - self.center
        return d / np.linalg.norm(d, axis=-1, keepdims=True)

    def point_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.center + self.radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    def angle_of(self, points):
        d = np.asarray(points, dtype=float) - self.center
        return np.arctan2(d[..., 1], d[..., 0])

    def segment_intersections(self, p, q):
        p = np.asarray(p, dtype=float)
        d = np.asarray(q, dtype=float) - p
        w = p - self.center
        a = d @ d
        b = 2 * (d @ w)
        c = w @ w - self.radius**2
        disc = b * b - 4 * a * c
        if disc <= 0:
            # tangential contact has zero measure
            return np.zeros(0)
        s = np.sqrt(disc)
        # numerically stable pair of roots
        qq = -0.5 * (b + np.copysign(s, b))
        roots = [qq / a, c / qq] if qq != 0 else [0.0]
        # roots at an end point may land just outside [0, 1]
        return np.clip(sorted(t for t in roots if -_ROOT_EPS <= t <= 1.0 + _ROOT_EPS), 0.0, 1.0)


class CellClass(enum.IntEnum):
    INTERIOR = 0
    CUT = 1
    EXTERIOR = 2


class CutTopology:
    """
    Classification of macro and CT cells and faces against the domain.

    All sets are sorted index arrays. A CT cell inherits the class of its macro parent.
    """

    def __init__(self, ct, dom, macro_class, degenerate_vertices):
        self.mesh = ct
        self.domain = dom
        self.macro_class = macro_class
        self.ct_class = macro_class[ct.child_to_macro]
        self.degenerate_vertices = degenerate_vertices

        self.macro_interior = np.flatnonzero(macro_class == CellClass.INTERIOR)
        self.macro_cut = np.flatnonzero(macro_class == CellClass.CUT)
        self.macro_exterior = np.flatnonzero(macro_class == CellClass.EXTERIOR)
        self.macro_active = np.flatnonzero(macro_class != CellClass.EXTERIOR)

        self.ct_interior = np.flatnonzero(self.ct_class == CellClass.INTERIOR)
        self.ct_cut = np.flatnonzero(self.ct_class == CellClass.CUT)
        self.ct_active = np.flatnonzero(self.ct_class != CellClass.EXTERIOR)
        self.active_mask = self.ct_class != CellClass.EXTERIOR

        fc = ct.face_cells
        second = np.maximum(fc[:, 1], 0)
        bothActive = (fc[:, 1] >= 0) & self.active_mask[fc[:, 0]] & self.active_mask[second]
        anyCut = (self.ct_class[fc[:, 0]] == CellClass.CUT) | ((fc[:, 1] >= 0) & (self.ct_class[second] == CellClass.CUT))

        # interior faces of the active CT mesh
        self.active_faces = np.flatnonzero(bothActive)
        # ghost penalty faces, faces on the boundary of the active mesh are excluded
        self.ghost_faces = np.flatnonzero(bothActive & anyCut)

        isCut = self.ct_class == CellClass.CUT
        strip = isCut.copy()
        f = self.active_faces
        # a cell may sit on several active faces, plain fancy-index assignment would keep one write
        np.logical_or.at(strip, fc[f, 0], isCut[fc[f, 1]])
        np.logical_or.at(strip, fc[f, 1], isCut[fc[f, 0]])
        self.strip_mask = strip
        self.strip = np.flatnonzero(strip)
        self.strip_interior = np.flatnonzero(self.active_mask & ~strip)

        # faces of the boundary of the interior region, oriented out of it
        isInt = self.ct_class == CellClass.INTERIOR
        firstInt = isInt[fc[:, 0]]
        secondInt = (fc[:, 1] >= 0) & isInt[second]
        self.interior_boundary_faces = np.flatnonzero(firstInt != secondInt)
        self.interior_boundary_sign = np.where(firstInt[self.interior_boundary_faces], 1.0, -1.0)

        for arr in [self.macro_class, self.ct_class, self.degenerate_vertices, self.macro_interior, self.macro_cut,
                    self.macro_exterior, self.macro_active, self.ct_interior, self.ct_cut, self.ct_active,
                    self.active_mask, self.active_faces, self.ghost_faces, self.strip_mask, self.strip,
                    self.strip_interior, self.interior_boundary_faces, self.interior_boundary_sign]:
            arr.setflags(write=False)


class DomainMeasures:

    def __init__(self, strip_area, strip_interior_area, cut_area, interior_area, active_area):
        self.strip_area = strip_area
        self.strip_interior_area = strip_interior_area
        self.cut_area = cut_area
        self.interior_area = interior_area
        self.active_area = active_area

    def __repr__(self):
        return "DomainMeasures(strip=%.6e, strip_interior=%.6e, cut=%.6e, interior=%.6e, active=%.6e)" % (
            self.strip_area, self.strip_interior_area, self.cut_area, self.interior_area, self.active_area)


def classify(ct, dom, tol_geom=1e-12):
    macro = ct.macro
    xy = macro.vertices[macro.triangles]
    r = np.linalg.norm(xy - dom.center, axis=2)
    dist = Util.pointTriangleDistance(dom.center, xy[:, 0], xy[:, 1], xy[:, 2])

    # cut iff some point of the closed triangle is strictly inside and some strictly outside
    cut = (dist < dom.radius - tol_geom) & (r.max(axis=1) > dom.radius + tol_geom)
    # vertices within tol_geom of the circle count as inside
    interior = ~cut & (r.max(axis=1) <= dom.radius + tol_geom)

    macroClass = np.full(macro.n_triangles, CellClass.EXTERIOR, dtype=np.int8)
    macroClass[interior] = CellClass.INTERIOR
    macroClass[cut] = CellClass.CUT

    vr = np.linalg.norm(macro.vertices - dom.center, axis=1)
    degenerate = np.flatnonzero(np.abs(vr - dom.radius) < tol_geom)
    if len(degenerate) > 0:
        _LOGGER.warning("%d mesh vertices lie within %g of the interface, first one is %d",
                        len(degenerate), tol_geom, degenerate[0])

    topo = CutTopology(ct, dom, macroClass, degenerate)
    _LOGGER.info("classified %d macro cells: %d interior, %d cut, %d exterior",
                 macro.n_triangles, len(topo.macro_interior), len(topo.macro_cut), len(topo.macro_exterior))
    return topo


def boundary_distance_strip(ct, topo):
    a = ct.areas
    return DomainMeasures(
        strip_area=float(a[topo.strip].sum()),
        strip_interior_area=float(a[topo.strip_interior].sum()),
        cut_area=float(a[topo.ct_cut].sum()),
        interior_area=float(a[topo.ct_interior].sum()),
        active_area=float(a[topo.ct_active].sum()),
    )
