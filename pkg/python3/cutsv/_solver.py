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



import logging
import numpy as np
import scipy.sparse
import scipy.sparse.linalg
from ._errors import SolverError


_LOGGER = logging.getLogger(__name__)

_MAX_REFINEMENT = 3


class SaddleSolution:

    def __init__(self, velocity, pressure, multiplier, residuals, stats):
        self.velocity = velocity
        self.pressure = pressure
        self.multiplier = multiplier
        # block residual norms: "momentum", "continuity", "constraint", "total", "relative"
        self.residuals = residuals
        self.stats = stats


class InfSupEstimate:

    def __init__(self, value, eigenvalues, iterations, kernel_dim):
        self.value = value
        self.eigenvalues = eigenvalues
        self.iterations = iterations
        self.kernel_dim = kernel_dim

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return "InfSupEstimate(value=%.6e, kernel_dim=%d, iterations=%d)" % (self.value, self.kernel_dim, self.iterations)


def saddle_matrix(system, j_scale):
    """[[A, B^T, 0], [B, -j_scale J, m], [0, m^T, 0]]"""

    m = scipy.sparse.csr_matrix(system.m.reshape(-1, 1))
    return scipy.sparse.bmat([
        [system.A, system.B.T, None],
        [system.B, -j_scale * system.J, m],
        [None, m.T, None],
    ], format="csc")


def solve(system, params=None, rtol=1e-10, method="direct"):
    """
    Solves the bordered Stokes system, the pressure mean over the interior region is fixed to zero.
    params, when given, overrides the (gamma, eta) the system was assembled with.
    Raises SolverError when the final relative residual is above rtol.
    """

    if params is not None:
        gamma, eta = params.resolve(system.h)
        if (gamma, eta) != (system.gamma, system.eta):
            system = system.with_params(gamma, eta)

    mat = saddle_matrix(system, 1.0 / (1.0 + system.gamma))
    rhs = np.concatenate([system.F, system.G, [0.0]])
    rhsNorm = max(np.linalg.norm(rhs), np.finfo(float).tiny)

    if method == "direct":
        x, stats = _solveDirect(mat, rhs, rtol * rhsNorm)
    elif method == "minres":
        x, stats = _solveMinres(system, mat, rhs, rtol)
    else:
        assert False

    nu = system.n_u
    np_ = system.n_p
    r = rhs - mat @ x
    residuals = {
        "momentum": float(np.linalg.norm(r[:nu])),
        "continuity": float(np.linalg.norm(r[nu:nu + np_])),
        "constraint": float(abs(r[-1])),
        "total": float(np.linalg.norm(r)),
        "relative": float(np.linalg.norm(r) / rhsNorm),
    }
    if not residuals["relative"] <= rtol:
        raise SolverError("%s solve stopped at relative residual %.3e above tolerance %.1e" % (method, residuals["relative"], rtol))

    _LOGGER.info("solved %d unknowns, relative residual %.3e", len(rhs), residuals["relative"])
    return SaddleSolution(x[:nu], x[nu:nu + np_], float(x[-1]), residuals, stats)


def estimate_infsup(system, nev=4, tol=1e-8, maxiter=200, seed=0):
    """
    Smallest eigenvalues of S = B A^{-1} B^T + J on the pressures orthogonal to m, by subspace
    inverse iteration. The pressure basis is orthonormal, so the pressure mass matrix is the identity.
    The square root of the smallest eigenvalue is returned as the inf-sup estimate.
    """

    system = system.with_params(0.0, system.eta)
    n = system.n_p
    nev = min(nev, n - 1)
    assert nev >= 1

    bordered = _factorize(saddle_matrix(system, 1.0))
    aLu = _factorize(system.A.tocsc())
    mu = system.m / np.linalg.norm(system.m)

    def _project(x):
        return x - np.outer(mu, mu @ x)

    def _applySchur(x):
        return system.B @ aLu.solve(np.asarray(system.B.T @ x)) + system.J @ x

    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(_project(rng.standard_normal((n, nev))))
    prev = None
    for it in range(1, maxiter + 1):
        rhs = np.zeros((system.n_u + n + 1, nev))
        rhs[system.n_u:system.n_u + n] = -q
        y = bordered.solve(rhs)[system.n_u:system.n_u + n]
        q, _ = np.linalg.qr(_project(y))

        h = q.T @ _applySchur(q)
        evals, evecs = np.linalg.eigh(0.5 * (h + h.T))
        q = q @ evecs
        if prev is not None and abs(evals[0] - prev) <= tol * max(abs(evals[0]), 1e-300):
            kernelDim = int(np.sum(evals < 1e-10 * max(1.0, evals[-1])))
            value = float(np.sqrt(max(evals[0], 0.0)))
            _LOGGER.info("inf-sup estimate %.6e after %d iterations", value, it)
            return InfSupEstimate(value, evals, it, kernelDim)
        prev = evals[0]

    raise SolverError("inf-sup iteration stagnated after %d iterations, last eigenvalue %.6e" % (maxiter, prev))


def probe_coercivity(system, samples=200, seed=0):
    """Minimum of a_h(v, v) / |v|^2 over random v, |.| the mesh-dependent norm without grad-div."""

    rng = np.random.default_rng(seed)
    v = rng.standard_normal((system.n_u, samples))
    norm = system.norm_matrix()
    return float(np.min(np.sum(v * (system.A @ v), axis=0) / np.sum(v * (norm @ v), axis=0)))


def probe_continuity(system, samples=50, seed=0):
    """Maximum of |a_h(u, v)| / (|u| |v|) over random pairs, |.| the norm including grad-div."""

    rng = np.random.default_rng(seed)
    u = rng.standard_normal((system.n_u, samples))
    v = rng.standard_normal((system.n_u, samples))
    norm = system.norm_matrix(with_graddiv=True)
    nu = np.sqrt(np.sum(u * (norm @ u), axis=0))
    nv = np.sqrt(np.sum(v * (norm @ v), axis=0))
    return float(np.max(np.abs(np.sum(u * (system.A @ v), axis=0)) / (nu * nv)))


def _factorize(mat):
    try:
        return scipy.sparse.linalg.splu(mat, permc_spec="COLAMD")
    except RuntimeError as e:
        absRows = np.asarray(abs(mat).sum(axis=1)).ravel()
        zeroRows = np.flatnonzero(absRows == 0)
        msg = "factorization failed: %s" % (e)
        if len(zeroRows) > 0:
            msg += ", structurally zero rows %s" % (zeroRows[:10].tolist())
        raise SolverError(msg)


def _solveDirect(mat, rhs, atol):
    lu = _factorize(mat)
    x = lu.solve(rhs)
    steps = 0
    r = rhs - mat @ x
    while np.linalg.norm(r) > atol and steps < _MAX_REFINEMENT:
        x = x + lu.solve(r)
        r = rhs - mat @ x
        steps += 1
    return x, {"method": "direct", "refinement_steps": steps, "factor_nnz": int(lu.L.nnz + lu.U.nnz)}


def _solveMinres(system, mat, rhs, rtol):
    """
    MINRES with the block diagonal preconditioner diag(A, (I + J) / (1 + gamma), s), s the
    Schur complement of the mean constraint. Restarted on the true residual until it meets rtol.
    """

    aLu = _factorize(system.A.tocsc())
    nu = system.n_u
    np_ = system.n_p
    pScale = 1.0 + system.gamma
    # the pressure basis is orthonormal, I is the pressure mass matrix
    sLu = _factorize((scipy.sparse.identity(np_, format="csc") + system.J).tocsc())
    mScale = 1.0 / (pScale * float(system.m @ sLu.solve(system.m)))

    def _apply(x):
        return np.concatenate([aLu.solve(x[:nu]), pScale * sLu.solve(x[nu:nu + np_]), mScale * x[-1:]])

    prec = scipy.sparse.linalg.LinearOperator(mat.shape, matvec=_apply, dtype=float)
    counter = [0]

    def _count(xk):
        counter[0] += 1

    rhsNorm = max(np.linalg.norm(rhs), np.finfo(float).tiny)
    x = np.zeros_like(rhs)
    r = rhs
    restarts = 0
    while True:
        dx, info = scipy.sparse.linalg.minres(mat, r, M=prec, rtol=rtol, maxiter=5 * len(rhs), callback=_count)
        x = x + dx
        r = rhs - mat @ x
        if np.linalg.norm(r) <= rtol * rhsNorm:
            break
        if restarts >= _MAX_REFINEMENT:
            raise SolverError("MINRES did not converge after %d iterations and %d restarts, relative residual %.3e" % (counter[0], restarts, np.linalg.norm(r) / rhsNorm))
        restarts += 1
    _LOGGER.debug("MINRES converged after %d iterations, %d restarts", counter[0], restarts)
    return x, {"method": "minres", "iterations": counter[0], "restarts": restarts}
