import numpy as np
import pytest
import scipy.sparse
import cutsv
import cutsv._solver
from conftest import assembled

def _tinySystem(viscous):
    zero = scipy.sparse.csr_matrix((2, 2))
    aParts = {
        "viscous": scipy.sparse.csr_matrix(viscous),
        "graddiv": zero,
        "nitsche": zero,
        "penalty": zero,
        "ghost": zero,
    }
    fParts = {
        "volume": np.array([1.0, 2.0]),
        "consistency": np.zeros(2),
        "penalty": np.zeros(2),
    }
    b = scipy.sparse.csr_matrix(np.array([[1.0, 0.0]]))
    j = scipy.sparse.csr_matrix((1, 1))
    return cutsv.AssembledSystem(aParts, b, j, np.array([1.0]), fParts, np.zeros(1), 0.0, 1.0, 1.0)

def _withRhs(system, f, g):
    fParts = {"volume": f, "consistency": np.zeros_like(f), "penalty": np.zeros_like(f)}
    return cutsv.AssembledSystem(system.a_parts, system.B, system.J, system.m, fParts, g,
                                 system.gamma, system.eta, system.h)

def test_single_pressure_unknown():
    sol = cutsv.solve(_tinySystem(np.eye(2)))
    assert np.allclose(sol.velocity, [1.0, 2.0], rtol=0, atol=1e-14)
    assert np.allclose(sol.pressure, [0.0], rtol=0, atol=1e-14)
    assert sol.multiplier == pytest.approx(-1.0, abs=1e-14)
    assert sol.stats["method"] == "direct"

def test_singular_velocity_block():
    with pytest.raises(cutsv.SolverError):
        cutsv.solve(_tinySystem(np.zeros((2, 2))))

@pytest.mark.parametrize("gamma", [0.0, 1.0, 100.0])
def test_manufactured_algebraic_solution(gamma, rng):
    d, _, base = assembled(10)
    system = base.with_params(gamma, base.eta)
    uStar = rng.standard_normal(system.n_u)
    pStar = rng.standard_normal(system.n_p)
    pStar -= system.m * (system.m @ pStar) / (system.m @ system.m)

    f = system.A @ uStar + system.B.T @ pStar
    g = system.B @ uStar - system.J @ pStar / (1 + gamma)
    sol = cutsv.solve(_withRhs(system, f, g))
    assert np.linalg.norm(sol.velocity - uStar) <= 1e-7 * np.linalg.norm(uStar)
    assert np.linalg.norm(sol.pressure - pStar) <= 1e-7 * np.linalg.norm(pStar)
    assert abs(sol.multiplier) < 1e-7

def test_full_solve(solved10):
    _, system, sol = solved10
    assert sol.residuals["relative"] <= 1e-10
    assert sol.residuals["total"] <= sol.residuals["relative"] * 1.0001 * np.linalg.norm(np.concatenate([system.F, system.G]))
    assert abs(system.m @ sol.pressure) <= 1e-8 * np.linalg.norm(system.m) * np.linalg.norm(sol.pressure)
    assert np.all(np.isfinite(sol.velocity))

def test_solve_is_deterministic(system10):
    _, params, system = system10
    a = cutsv.solve(system, params)
    b = cutsv.solve(system, params)
    assert np.array_equal(a.velocity, b.velocity)
    assert np.array_equal(a.pressure, b.pressure)

def test_params_override(system10):
    d, _, system = system10
    sol = cutsv.solve(system, cutsv.MethodParams(1.0, 100.0))
    ref = cutsv.solve(system.with_params(1.0, 100.0))
    assert np.array_equal(sol.velocity, ref.velocity)

def test_unconverged_solve_raises(system10):
    _, params, system = system10
    with pytest.raises(cutsv.SolverError, match="relative residual"):
        cutsv.solve(system, params, rtol=1e-300)

def test_factor_fill_stays_sparse():
    _, params, system = assembled(20)
    sol = cutsv.solve(system, params)
    mat = cutsv._solver.saddle_matrix(system, 1.0)
    assert sol.stats["factor_nnz"] <= 40 * mat.nnz

@pytest.mark.parametrize("gamma", [0.0, 1.0])
def test_minres_agrees_with_direct(gamma):
    _, params, system = assembled(5, gamma=gamma)
    direct = cutsv.solve(system, params)
    iterative = cutsv.solve(system, params, rtol=1e-10, method="minres")
    assert 0 < iterative.stats["iterations"] < system.n_u + system.n_p
    assert iterative.residuals["relative"] <= 1e-10
    assert np.linalg.norm(iterative.velocity - direct.velocity) <= 1e-6 * np.linalg.norm(direct.velocity)
    assert np.linalg.norm(iterative.pressure - direct.pressure) <= 1e-6 * np.linalg.norm(direct.pressure)

def test_infsup_estimate(system10):
    d, _, system = system10
    est = cutsv.estimate_infsup(system)
    assert est.value > 0
    assert est.kernel_dim == 0
    assert np.all(np.diff(est.eigenvalues) >= 0)
    assert float(est) == est.value

@pytest.mark.slow
def test_infsup_is_mesh_independent():
    values = [cutsv.estimate_infsup(assembled(n)[2]).value for n in [5, 10, 20, 40]]
    assert min(values) > 0
    assert max(values) / min(values) <= 2

def test_coercivity_sample(system10):
    _, _, system = system10
    assert cutsv.probe_coercivity(system) > 0

def test_continuity_sample_is_bounded():
    for n in [5, 10]:
        value = cutsv.probe_continuity(assembled(n)[2])
        assert 0 < value < 2

@pytest.mark.slow
@pytest.mark.parametrize("gamma", [0.0, 10.0])
def test_stability_constants_across_meshes(gamma):
    coercivity = []
    continuity = []
    for n in [10, 20, 40]:
        system = assembled(n)[2].with_params(gamma, 100.0)
        coercivity.append(cutsv.probe_coercivity(system))
        continuity.append(cutsv.probe_continuity(system))
    assert min(coercivity) > 0
    assert 0 < min(continuity) and max(continuity) < 2
    assert max(continuity) / min(continuity) <= 2

@pytest.mark.slow
@pytest.mark.parametrize("n", [10, 20])
def test_solution_bounded_in_gamma(n):
    d, _, system = assembled(n)
    norms = []
    for gamma in [0.0, 1.0, 10.0 / d.mesh.h]:
        sol = cutsv.solve(system.with_params(gamma, system.eta))
        u = sol.velocity
        # pressure basis is orthonormal on the active mesh
        norms.append((gamma, np.sqrt(u @ (system.norm_matrix() @ u)), np.linalg.norm(sol.pressure)))
    _, u0, p0 = norms[0]
    for gamma, u, p in norms[1:]:
        assert u0 / 2 <= u <= 2 * u0
        assert p <= 2 * np.sqrt(1 + gamma) * p0

def test_graddiv_reduces_divergence():
    d, _, system = assembled(10)
    exact = cutsv.CircleStokesSolution()
    errors = []
    for gamma in [0.0, 1.0, 10.0 / d.mesh.h]:
        sol = cutsv.solve(system.with_params(gamma, system.eta))
        errors.append(cutsv.compute_errors(sol, exact, d.space, d.topo, d.rules).err_div)
    assert errors[-1] < errors[0]
