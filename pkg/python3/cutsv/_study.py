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
import enum
import time
import logging
import functools
import multiprocessing
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
from ._errors import ConfigError, MeshError, GeometryError, AssemblyError, SolverError
from ._settings import StudyConfig
from ._mesh import build_type1_mesh, clough_tocher_refine
from ._domain import ImplicitCircle, classify
from ._quadrature import build_rules
from ._space import build_space
from ._assembly import assemble_system, export_matrices
from ._solver import solve
from ._exact import CircleStokesSolution
from ._analysis import compute_errors, compute_eoc, divergence_cell_field
from ._outdir import OutputDir


_LOGGER = logging.getLogger(__name__)

# failures that end a study row instead of the whole study
_ROW_ERRORS = (ConfigError, MeshError, GeometryError, AssemblyError, SolverError, np.linalg.LinAlgError)

CSV_HEADER = "h,n_u,n_p,err_h1_u,rate_u,err_l2_p,rate_p,err_div,rate_div,err_div_interior,flux,seconds"


def Action(*progressStepTuple):
    def decorator(func):
        @functools.wraps(func)
        def wrapper(self, *kargs, **kwargs):
            progressStepList = list(progressStepTuple)
            assert sorted(progressStepList) == list(progressStepList)
            assert self._progress in progressStepList
            t = time.perf_counter()
            func(self, *kargs, **kwargs)
            self._progress = StudyStep(progressStepList[-1] + 1)
            self._elapsed[self._progress] = time.perf_counter() - t
            _LOGGER.debug("h=%g: %s done in %.3fs", self._h, self._progress.name, self._elapsed[self._progress])
        return wrapper
    return decorator


class StudyStep(enum.IntEnum):
    INIT = enum.auto()
    MESHED = enum.auto()
    CLASSIFIED = enum.auto()
    SPACE_BUILT = enum.auto()
    ASSEMBLED = enum.auto()
    SOLVED = enum.auto()
    EVALUATED = enum.auto()


class MeshPipeline:
    """
    Runs mesh, classification, space, assembly, solve and error evaluation for one mesh size.
    The system is assembled once, every parameter series is solved on it.
    """

    def __init__(self, config, h, series=None):
        assert StudyConfig.check_object(config, raise_exception=False)

        self._cfg = config
        self._h = h
        self._series = config.method_params() if series is None else series
        self._domain = ImplicitCircle.from_radius_squared((config.center_x, config.center_y), config.radius_squared)
        self._exact = CircleStokesSolution()

        self.mesh = None
        self.ct_mesh = None
        self.topo = None
        self.space = None
        self.rules = None
        self.system = None
        self.solutions = dict()        # label -> SaddleSolution
        self.reports = dict()          # label -> ErrorReport
        self.failures = dict()         # label -> message

        self._progress = StudyStep.INIT
        self._elapsed = dict()
        self._solveTime = dict()

    def get_progress(self):
        return self._progress

    @property
    def h(self):
        return self._h

    def setup_seconds(self):
        return sum(self._elapsed.get(s, 0.0) for s in [StudyStep.MESHED, StudyStep.CLASSIFIED, StudyStep.SPACE_BUILT, StudyStep.ASSEMBLED])

    def series_seconds(self, label):
        return self.setup_seconds() + self._solveTime.get(label, 0.0)

    @Action(StudyStep.INIT)
    def action_build_mesh(self):
        self.mesh = build_type1_mesh(int(round(1 / self._h)))
        self.ct_mesh = clough_tocher_refine(self.mesh)

    @Action(StudyStep.MESHED)
    def action_classify(self):
        self.topo = classify(self.ct_mesh, self._domain)

    @Action(StudyStep.CLASSIFIED)
    def action_build_space(self):
        self.space = build_space(self.ct_mesh, self.topo, self._cfg.degree)
        self.rules = build_rules(self.ct_mesh, self.topo, self._domain, self._cfg.effective_quad_degree)
        _LOGGER.debug("h=%g: n_u=%d n_p=%d, %d cut cells, %d ghost faces",
                      self._h, self.space.n_u, self.space.n_p, len(self.topo.ct_cut), len(self.topo.ghost_faces))

    @Action(StudyStep.SPACE_BUILT)
    def action_assemble(self):
        self.system = assemble_system(self.space, self.topo, self.rules, self._exact, self._series[0])

    @Action(StudyStep.ASSEMBLED)
    def action_solve(self):
        for params in self._series:
            t = time.perf_counter()
            try:
                self.solutions[params.label] = solve(self.system, params, rtol=self._cfg.rtol, method=self._cfg.solver)
            except _ROW_ERRORS as e:
                _LOGGER.warning("h=%g, %s: solve failed: %s", self._h, params, e)
                self.failures[params.label] = str(e)
            self._solveTime[params.label] = time.perf_counter() - t

    @Action(StudyStep.SOLVED)
    def action_evaluate(self):
        for params in self._series:
            if params.label not in self.solutions:
                continue
            t = time.perf_counter()
            self.reports[params.label] = compute_errors(self.solutions[params.label], self._exact, self.space, self.topo, self.rules)
            self._solveTime[params.label] += time.perf_counter() - t

    def run(self):
        self.action_build_mesh()
        self.action_classify()
        self.action_build_space()
        self.action_assemble()
        self.action_solve()
        self.action_evaluate()


class StudyRow:

    def __init__(self, label, h):
        self.label = label
        self.h = h
        self.n_u = None
        self.n_p = None
        self.err_h1_u = None
        self.err_l2_p = None
        self.err_div = None
        self.err_div_interior = None
        self.flux = None
        self.seconds = None
        self.rate_u = None
        self.rate_p = None
        self.rate_div = None

        self.div_strip_share = None
        self.pressure_mean_interior = None
        self.grad_norm = None
        self.residual = None

        self.error = None              # failure message

    @property
    def ok(self):
        return self.error is None

    def to_csv(self):
        return ",".join([
            "%.6e" % (self.h),
            _fmtInt(self.n_u),
            _fmtInt(self.n_p),
            _fmtFloat(self.err_h1_u),
            _fmtRate(self.rate_u),
            _fmtFloat(self.err_l2_p),
            _fmtRate(self.rate_p),
            _fmtFloat(self.err_div),
            _fmtRate(self.rate_div),
            _fmtFloat(self.err_div_interior),
            _fmtFloat(self.flux),
            _fmtFloat(self.seconds),
        ])


class StudyResult:

    def __init__(self, series):
        self.series = series           # list of MethodParams
        self.rows = {p.label: [] for p in series}

    @property
    def all_ok(self):
        return all(r.ok for rows in self.rows.values() for r in rows)

    def series_rows(self, label=None):
        if label is None:
            assert len(self.series) == 1
            label = self.series[0].label
        return self.rows[label]

    def to_csv(self, label):
        return CSV_HEADER + "\n" + "".join(r.to_csv() + "\n" for r in self.rows[label])


def run_study(config, out_dir=None):
    """
    Runs every series over the mesh sequence and writes one CSV per series, the three
    error plots and the divergence field of one mesh into the output directory.
    """

    StudyConfig.check_object(config, raise_exception=True)
    if out_dir is None:
        out_dir = OutputDir(config.out_dir)
        out_dir.initialize()

    series = config.method_params()
    _LOGGER.info("study over h=%s with %d series", ", ".join("%g" % h for h in config.h_list), len(series))

    jobs = [(config, h, out_dir.path) for h in config.h_list]
    if config.workers > 1 and len(jobs) > 1:
        with multiprocessing.Pool(min(config.workers, len(jobs))) as pool:
            perMesh = pool.map(_runMeshSize, jobs)
    else:
        perMesh = [_runMeshSize(j) for j in jobs]

    # rows are collected in h_list order regardless of completion order
    ret = StudyResult(series)
    for rows in perMesh:
        for row in rows:
            ret.rows[row.label].append(row)

    for params in series:
        rows = ret.rows[params.label]
        hs = [r.h for r in rows]
        for attr, rateAttr in [("err_h1_u", "rate_u"), ("err_l2_p", "rate_p"), ("err_div", "rate_div")]:
            rates = compute_eoc([getattr(r, attr) for r in rows], hs)
            for r, rate in zip(rows, rates):
                setattr(r, rateAttr, rate)
        out_dir.save_record("errors_%s.csv" % (params.label), ret.to_csv(params.label))

    _plotErrors(ret, out_dir)

    for params in series:
        for r in ret.rows[params.label]:
            if not r.ok:
                _LOGGER.warning("h=%g, %s failed: %s", r.h, params, r.error)
    return ret


def emit_divergence_field(solution, space, topo, rules, path):
    """Writes the mean |div u_h| over K ∩ Omega of every strip cell as VTK cell data, zero elsewhere."""

    field = divergence_cell_field(solution, space, topo, rules)
    field[topo.strip_interior] = 0.0
    space.mesh.write_vtk(path, {"div_abs_mean": field})
    return field


def _runMeshSize(job):
    config, h, outDirPath = job
    series = config.method_params()
    pipeline = MeshPipeline(config, h, series)

    rows = [StudyRow(p.label, h) for p in series]
    try:
        pipeline.run()
    except _ROW_ERRORS as e:
        _LOGGER.warning("h=%g: pipeline stopped at %s: %s", h, pipeline.get_progress().name, e)
        for r in rows:
            r.error = str(e)
            r.seconds = pipeline.setup_seconds()
            if pipeline.space is not None:
                r.n_u = pipeline.space.n_u
                r.n_p = pipeline.space.n_p
        return rows

    for params, r in zip(series, rows):
        r.n_u = pipeline.space.n_u
        r.n_p = pipeline.space.n_p
        r.seconds = pipeline.series_seconds(params.label)
        if params.label in pipeline.failures:
            r.error = pipeline.failures[params.label]
            continue

        rep = pipeline.reports[params.label]
        r.err_h1_u = rep.err_h1_u
        r.err_l2_p = rep.err_l2_p
        r.err_div = rep.err_div
        r.err_div_interior = rep.err_div_interior
        r.flux = rep.flux
        r.div_strip_share = rep.div_strip_share
        r.pressure_mean_interior = rep.pressure_mean_interior
        r.grad_norm = rep.grad_norm
        r.residual = pipeline.solutions[params.label].residuals["relative"]
        _LOGGER.info("h=%g, %s: err_h1_u=%.4e err_l2_p=%.4e err_div=%.4e (%.2fs)",
                     h, params, r.err_h1_u, r.err_l2_p, r.err_div, r.seconds)

        if config.export_vtk and _isVtkMesh(config, h):
            emit_divergence_field(pipeline.solutions[params.label], pipeline.space, pipeline.topo, pipeline.rules,
                                  os.path.join(outDirPath, "div_%s.vtk" % (params.label)))

    if config.export_matrices:
        for params in series:
            export_matrices(pipeline.system.with_params(*params.resolve(h)),
                            os.path.join(outDirPath, "matrices", "n%d_%s" % (round(1 / h), params.label)))

    return rows


def _isVtkMesh(config, h):
    target = config.h_list[-1] if config.vtk_h is None else config.vtk_h
    return abs(h - target) <= 1e-9 * target


def _plotErrors(result, out_dir):
    for attr, title in [("err_h1_u", "velocity H1 error"), ("err_l2_p", "pressure L2 error"), ("err_div", "divergence L2 error")]:
        fig, ax = plt.subplots(figsize=(5, 4))
        for params in result.series:
            rows = [r for r in result.rows[params.label] if r.ok]
            if len(rows) > 0:
                ax.loglog([r.h for r in rows], [getattr(r, attr) for r in rows], marker="o", label=str(params))
        ax.set_xlabel("h")
        ax.set_title(title)
        ax.grid(True, which="both", alpha=0.3)
        if len(ax.get_lines()) > 0:
            ax.legend(fontsize="small")
        fig.tight_layout()
        fig.savefig(out_dir.get_file_path(attr + ".svg"), format="svg")
        plt.close(fig)


def _fmtFloat(x):
    return "nan" if x is None else "%.6e" % (x)


def _fmtInt(x):
    return "nan" if x is None else "%d" % (x)


def _fmtRate(x):
    return "" if x is None else "%.4f" % (x)
