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


VTK_TRIANGLE = 5


def write_legacy_vtk(path, points, triangles, cell_data=None, title="cutsv"):
    """
    Write a triangle mesh as a legacy ASCII VTK unstructured grid.
    cell_data maps a name to one scalar per triangle.
    """

    points = np.asarray(points, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64)
    cell_data = dict() if cell_data is None else cell_data
    for name, values in cell_data.items():
        assert " " not in name
        assert len(values) == len(triangles)

    with open(path, "w") as f:
        f.write("# vtk DataFile Version 3.0\n")
        f.write("%s\n" % (title))
        f.write("ASCII\n")
        f.write("DATASET UNSTRUCTURED_GRID\n")

        f.write("POINTS %d double\n" % (len(points)))
        for x, y in points:
            f.write("%.16e %.16e 0\n" % (x, y))

        f.write("CELLS %d %d\n" % (len(triangles), 4 * len(triangles)))
        for a, b, c in triangles:
            f.write("3 %d %d %d\n" % (a, b, c))

        f.write("CELL_TYPES %d\n" % (len(triangles)))
        for _ in range(len(triangles)):
            f.write("%d\n" % (VTK_TRIANGLE))

        if len(cell_data) > 0:
            f.write("CELL_DATA %d\n" % (len(triangles)))
            for name, values in cell_data.items():
                f.write("SCALARS %s double 1\n" % (name))
                f.write("LOOKUP_TABLE default\n")
                for v in np.asarray(values, dtype=float):
                    f.write("%.16e\n" % (v))
