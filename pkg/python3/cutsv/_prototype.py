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



import abc
import numpy as np


class LevelSet(abc.ABC):
    """
    Implicit description of the physical domain, inside is where phi < 0.
    """

    @abc.abstractmethod
    def get_description(self):
        pass

    @abc.abstractmethod
    def phi(self, points):
        pass

    @abc.abstractmethod
    def normal(self, points):
        # returns the outward unit normal of the zero level set
        pass

    @abc.abstractmethod
    def segment_intersections(self, p, q):
        # returns sorted parameters t in [0, 1] where p + t * (q - p) meets the zero level set
        pass

    def __eq__(self, other):
        if not isinstance(other, LevelSet):
            return False
        if self.get_description() != other.get_description():
            return False
        return True

    def __ne__(self, other):
        return (not self.__eq__(other))

    def __hash__(self):
        return hash(self.get_description())


class ManufacturedSolution(abc.ABC):
    """
    Exact Stokes pair (u, p). Points are arrays of shape (..., 2).
    """

    @abc.abstractmethod
    def get_description(self):
        pass

    @abc.abstractmethod
    def velocity(self, points):
        # shape (..., 2)
        pass

    @abc.abstractmethod
    def velocity_gradient(self, points):
        # shape (..., 2, 2), entry [i, j] is d u_i / d x_j
        pass

    @abc.abstractmethod
    def velocity_laplacian(self, points):
        pass

    @abc.abstractmethod
    def pressure(self, points):
        pass

    @abc.abstractmethod
    def pressure_gradient(self, points):
        pass

    def forcing(self, points):
        return -self.velocity_laplacian(points) + self.pressure_gradient(points)

    def boundary_trace(self, points):
        return self.velocity(points)

    def divergence(self, points):
        g = self.velocity_gradient(points)
        return g[..., 0, 0] + g[..., 1, 1]

    def check_forcing(self, points, step=1e-4):
        """Relative deviation between forcing() and a central-difference evaluation of -lap(u) + grad(p)."""

        points = np.asarray(points, dtype=float)
        ex = np.array([step, 0.0])
        ey = np.array([0.0, step])

        u0 = self.velocity(points)
        lap = (self.velocity(points + ex) + self.velocity(points - ex)
               + self.velocity(points + ey) + self.velocity(points - ey) - 4 * u0) / step**2
        gradp = np.stack([
            (self.pressure(points + ex) - self.pressure(points - ex)) / (2 * step),
            (self.pressure(points + ey) - self.pressure(points - ey)) / (2 * step),
        ], axis=-1)

        f = self.forcing(points)
        return float(np.max(np.abs(f - (-lap + gradp))) / max(1.0, np.max(np.abs(f))))
