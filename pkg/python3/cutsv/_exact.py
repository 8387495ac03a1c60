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
from ._prototype import ManufacturedSolution


class CircleStokesSolution(ManufacturedSolution):
    """
    u = (2 psi b, -2 psi a) with psi = (x1 - 1/2)^2 + (x2 - 1/2)^2 - 1/4, a = 2 x1 - 1, b = 2 x2 - 1,
    p = scale * (10 (x1^2 - x2^2)^2 + c).

    u is the curl of psi^2 / 2, hence divergence free.
    """

    def __init__(self, scale=1e3, constant=0.0):
        self.scale = scale
        self.constant = constant

    def get_description(self):
        return "circle-stokes(%r, %r)" % (self.scale, self.constant)

    @staticmethod
    def _parts(points):
        points = np.asarray(points, dtype=float)
        x = points[..., 0]
        y = points[..., 1]
        psi = (x - 0.5)**2 + (y - 0.5)**2 - 0.25
        return x, y, psi, 2 * x - 1, 2 * y - 1

    def velocity(self, points):
        _, _, psi, a, b = self._parts(points)
        return np.stack([2 * psi * b, -2 * psi * a], axis=-1)

    def velocity_gradient(self, points):
        _, _, psi, a, b = self._parts(points)
        row0 = np.stack([2 * a * b, 2 * b * b + 4 * psi], axis=-1)
        row1 = np.stack([-2 * a * a - 4 * psi, -2 * a * b], axis=-1)
        return np.stack([row0, row1], axis=-2)

    def velocity_laplacian(self, points):
        _, _, _, a, b = self._parts(points)
        return np.stack([16 * b, -16 * a], axis=-1)

    def pressure(self, points):
        x, y, _, _, _ = self._parts(points)
        return self.scale * (10 * (x * x - y * y)**2 + self.constant)

    def pressure_gradient(self, points):
        x, y, _, _, _ = self._parts(points)
        s = 40 * self.scale * (x * x - y * y)
        return np.stack([s * x, -s * y], axis=-1)
