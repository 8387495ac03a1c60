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



__package__ = 'cutsv'

__version__ = '0.0.1'

__author__ = 'Fpemud <fpemud@sina.com>'


from ._mesh import TriangleMesh
from ._mesh import BackgroundMesh
from ._mesh import CtMesh
from ._mesh import build_type1_mesh
from ._mesh import clough_tocher_refine
from ._mesh import element_patch

from ._prototype import LevelSet
from ._prototype import ManufacturedSolution

from ._domain import ImplicitCircle
from ._domain import CellClass
from ._domain import CutTopology
from ._domain import DomainMeasures
from ._domain import classify
from ._domain import boundary_distance_strip

from ._quadrature import QuadTarget
from ._quadrature import QuadRule
from ._quadrature import QuadratureSet
from ._quadrature import full_rule
from ._quadrature import cut_volume_rule
from ._quadrature import interface_rule
from ._quadrature import build_rules

from ._space import LagrangeElement
from ._space import SvSpace
from ._space import build_space
from ._space import eval_basis
from ._space import face_normal_jump
from ._space import interpolate_velocity
from ._space import project_pressure

from ._settings import ParamSpec
from ._settings import MethodParams
from ._settings import StudyConfig
from ._settings import parse_config

from ._assembly import AssembledSystem
from ._assembly import assemble_a
from ._assembly import assemble_b
from ._assembly import assemble_J
from ._assembly import assemble_mean_constraint
from ._assembly import assemble_rhs
from ._assembly import assemble_system
from ._assembly import export_matrices

from ._solver import SaddleSolution
from ._solver import InfSupEstimate
from ._solver import solve
from ._solver import estimate_infsup
from ._solver import probe_coercivity
from ._solver import probe_continuity

from ._exact import CircleStokesSolution

from ._analysis import ErrorReport
from ._analysis import compute_errors
from ._analysis import check_interior_divfree
from ._analysis import boundary_flux
from ._analysis import divergence_split
from ._analysis import divergence_cell_field
from ._analysis import compute_eoc

from ._outdir import OutputDir

from ._study import StudyStep
from ._study import MeshPipeline
from ._study import StudyRow
from ._study import StudyResult
from ._study import run_study
from ._study import emit_divergence_field

from ._errors import ConfigError
from ._errors import MeshError
from ._errors import GeometryError
from ._errors import AssemblyError
from ._errors import SolverError
from ._errors import OutputDirError
