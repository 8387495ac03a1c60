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
import functools
import numpy as np


class Util:

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def gaussLegendre(n):
        # n-point Gauss rule on [0, 1]
        x, w = np.polynomial.legendre.leggauss(n)
        return 0.5 * (x + 1.0), 0.5 * w

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def triangleRule(degree):
        """Collapsed Gauss rule on the reference triangle (0,0), (1,0), (0,1), exact up to degree."""

        # the Duffy jacobian adds one to the polynomial degree in the collapsed direction
        n = max(1, math.ceil((degree + 2) / 2))
        s, ws = Util.gaussLegendre(n)
        u, v = np.meshgrid(s, s, indexing="ij")
        wu, wv = np.meshgrid(ws, ws, indexing="ij")
        pts = np.stack([u.ravel(), (v * (1.0 - u)).ravel()], axis=1)
        wts = (wu * wv * (1.0 - u)).ravel()
        pts.setflags(write=False)
        wts.setflags(write=False)
        return pts, wts

    @staticmethod
    def signedAreas(vertices, triangles):
        a = vertices[triangles[:, 0]]
        b = vertices[triangles[:, 1]]
        c = vertices[triangles[:, 2]]
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    @staticmethod
    def cross2(a, b):
        return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]

    @staticmethod
    def barycentric(tri, points):
        """Barycentric coordinates of points (n, 2) with respect to the triangle tri (3, 2)."""

        points = np.atleast_2d(points)
        t = np.array([tri[1] - tri[0], tri[2] - tri[0]]).T
        lam12 = np.linalg.solve(t, (points - tri[0]).T).T
        return np.column_stack([1.0 - lam12.sum(axis=1), lam12])

    @staticmethod
    def pointSegmentDistance(point, a, b):
        # vectorized over the segment arrays a, b of shape (n, 2)
        d = b - a
        t = np.einsum("ij,ij->i", point - a, d) / np.einsum("ij,ij->i", d, d)
        t = np.clip(t, 0.0, 1.0)
        return np.linalg.norm(point - (a + t[:, None] * d), axis=1)

    @staticmethod
    def pointTriangleDistance(point, a, b, c):
        """Distance from one point to each closed triangle (a[i], b[i], c[i]), zero when inside."""

        d = np.minimum(Util.pointSegmentDistance(point, a, b),
                       np.minimum(Util.pointSegmentDistance(point, b, c), Util.pointSegmentDistance(point, c, a)))
        s1 = Util.cross2(b - a, point - a)
        s2 = Util.cross2(c - b, point - b)
        s3 = Util.cross2(a - c, point - c)
        inside = (s1 >= 0) & (s2 >= 0) & (s3 >= 0)
        d[inside] = 0.0
        return d

    @staticmethod
    def diameters(vertices, triangles):
        a = vertices[triangles[:, 0]]
        b = vertices[triangles[:, 1]]
        c = vertices[triangles[:, 2]]
        return np.maximum(np.linalg.norm(b - a, axis=1),
                          np.maximum(np.linalg.norm(c - b, axis=1), np.linalg.norm(a - c, axis=1)))
