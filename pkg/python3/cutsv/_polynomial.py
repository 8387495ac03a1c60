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


class Monomials:
    """
    Monomials x^a * y^b with a + b <= degree, ordered by total degree.
    Polynomials are coefficient vectors (or matrices, one column per polynomial) in this basis.
    """

    def __init__(self, degree):
        assert degree >= 0

        self.degree = degree
        self.exponents = np.array([(d - b, b) for d in range(degree + 1) for b in range(d + 1)], dtype=np.int64)
        self.size = len(self.exponents)
        self._index = {tuple(e): i for i, e in enumerate(self.exponents.tolist())}
        self._dx = self._derivativeMatrix(0)
        self._dy = self._derivativeMatrix(1)

    def evaluate(self, points):
        """Values of all monomials, shape points.shape[:-1] + (size,)."""

        points = np.asarray(points, dtype=float)
        x = points[..., 0, None]
        y = points[..., 1, None]
        return x ** self.exponents[:, 0] * y ** self.exponents[:, 1]

    def derivative_matrix(self, axis):
        return self._dx if axis == 0 else self._dy

    def _derivativeMatrix(self, axis):
        ret = np.zeros((self.size, self.size))
        for j, (a, b) in enumerate(self.exponents.tolist()):
            if axis == 0 and a > 0:
                ret[self._index[(a - 1, b)], j] = a
            elif axis == 1 and b > 0:
                ret[self._index[(a, b - 1)], j] = b
        return ret
