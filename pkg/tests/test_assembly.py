import math
import numpy as np
import pytest
import scipy.io
import cutsv
from conftest import assembled


def _constant(space, value):
    u = np.zeros(space.n_u)
    u[:space.n_scalar] = value[0]
    u[space.n_scalar:] = value[1]
    return u


def _rotation(p):
    return np.stack([-(p[..., 1] - 0.5), p[..., 0] - 0.5], axis=-1)


def _roundoff(mat, x, y=None):
    """Floating point bound for x . (mat y), or for the entries of mat x when y is None."""

    eps = 1e4 * np.finfo(float).eps
    if y is None:
        return eps * (abs(mat) @ np.abs(x))
    return eps * (np.abs(x) @ (abs(mat) @ np.abs(y)))


def _zero(p):
    return np.zeros(p.shape[:-1] + (2,))


def test_blocks_are_symmetric(system10):
    _, _, system = system10
    assert abs(system.A - system.A.T).max() == 0
    assert abs(system.J - system.J.T).max() == 0


def test_block_shapes(system10):
    d, _, system = system10
    assert system.A.shape == (d.space.n_u, d.space.n_u)
    assert system.B.shape == (d.space.n_p, d.space.n_u)
    assert system.J.shape == (d.space.n_p, d.space.n_p)
    assert system.m.shape == (d.space.n_p,)
    assert system.F.shape == (d.space.n_u,)
    assert system.G.shape == (d.space.n_p,)


def test_pressure_ghost_is_semidefinite(system10):
    _, _, system = system10
    ev = np.linalg.eigvalsh(system.J.toarray())
    assert ev.min() >= -1e-12 * ev.max()


def test_constant_field_only_sees_penalty(system10):
    d, _, system = system10
    u = _constant(d.space, (1.0, 0.0))
    expected = sum(d.rules.interface_rule(t).total() / d.ct.diameters[t] for t in d.topo.ct_cut)
    assert u @ (system.A @ u) == pytest.approx(system.eta * expected, rel=1e-12)
    for name in ["viscous", "graddiv", "nitsche", "ghost"]:
        assert abs(u @ (system.a_parts[name] @ u)) <= _roundoff(system.a_parts[name], u, u)


def test_rotation_field(system10):
    d, _, system = system10
    u = cutsv.interpolate_velocity(d.space, _rotation)
    assert u @ (system.a_parts["viscous"] @ u) == pytest.approx(2 * d.dom.area, rel=1e-10)
    for name in ["graddiv", "ghost"]:
        assert abs(u @ (system.a_parts[name] @ u)) <= _roundoff(system.a_parts[name], u, u)
    # n . grad u = t and u = R t on the circle
    assert u @ (system.a_parts["nitsche"] @ u) == pytest.approx(-2 * d.dom.area * 2, rel=1e-10)


def test_ghost_vanishes_for_global_quadratics(system10):
    d, _, system = system10
    u = cutsv.interpolate_velocity(d.space, lambda p: np.stack([p[:, 0] ** 2 - p[:, 0] * p[:, 1], p[:, 1] ** 2 + 3 * p[:, 0]], axis=-1))
    assert abs(u @ (system.a_parts["ghost"] @ u)) <= _roundoff(system.a_parts["ghost"], u, u)


def test_divergence_theorem_for_constant_pressure(system10):
    d, _, system = system10
    one = cutsv.project_pressure(d.space, lambda x: np.ones(len(x)), d.rules)
    assert np.abs(system.B.T @ one).max() < 1e-10


def test_divergence_form_for_linear_pressure(system10):
    d, _, system = system10
    q = cutsv.project_pressure(d.space, lambda x: x[:, 0] - 0.5, d.rules)
    v = cutsv.interpolate_velocity(d.space, lambda p: np.stack([p[:, 0], np.zeros(len(p))], axis=-1))
    # b(q, v) = (grad q, v) when q is smooth
    assert q @ (system.B @ v) == pytest.approx(0.5 * d.dom.area, rel=1e-10)


def test_pressure_ghost_kernel(system10):
    d, _, system = system10
    one = cutsv.project_pressure(d.space, lambda x: np.ones(len(x)), d.rules)
    linear = cutsv.project_pressure(d.space, lambda x: 2 * x[:, 0] + x[:, 1], d.rules)
    assert np.all(np.abs(system.J @ one) <= _roundoff(system.J, one))
    assert np.all(np.abs(system.J @ linear) <= _roundoff(system.J, linear))


def test_mean_constraint(system10):
    d, _, system = system10
    one = cutsv.project_pressure(d.space, lambda x: np.ones(len(x)), d.rules)
    area = d.space.cell_areas[d.space.cell_index[d.topo.ct_interior]].sum()
    assert system.m @ one == pytest.approx(area, rel=1e-12)


def test_zero_data_gives_zero_rhs(disc10):
    d = disc10
    params = cutsv.MethodParams(1.0, 100.0)
    f, g = cutsv.assemble_rhs(d.space, d.topo, d.rules, _zero, _zero, params)
    assert not f.any()
    assert not g.any()


def test_unit_load_on_edge_node(disc10):
    d = disc10
    ct = d.ct
    interior = set(d.topo.ct_interior.tolist())
    face = next(f for f in d.topo.active_faces if all(c in interior for c in ct.face_cells[f]))
    mid = ct.vertices[ct.faces[face]].mean(axis=0)
    dof = int(np.flatnonzero(np.all(np.abs(d.space.node_points - mid) < 1e-12, axis=1))[0])

    f, _ = cutsv.assemble_rhs(d.space, d.topo, d.rules, lambda p: np.stack([np.ones(p.shape[:-1]), np.zeros(p.shape[:-1])], axis=-1), _zero, cutsv.MethodParams())
    assert f[dof] == pytest.approx(ct.areas[ct.face_cells[face]].sum() / 3, rel=1e-12)
    assert f[dof + d.space.n_scalar] == 0


def test_boundary_data_is_compatible(system10):
    d, _, system = system10
    one = cutsv.project_pressure(d.space, lambda x: np.ones(len(x)), d.rules)
    assert abs(system.G @ one) < 1e-10


def test_missing_rules_are_rejected(disc10):
    d = disc10
    empty = cutsv.QuadratureSet(d.rules.degree, d.rules.ref_points, d.rules.ref_weights, [], [], [])
    with pytest.raises(cutsv.AssemblyError):
        cutsv.assemble_b(d.space, d.topo, empty)
    with pytest.raises(cutsv.AssemblyError):
        cutsv.assemble_a(d.space, d.topo, empty, cutsv.MethodParams())


@pytest.mark.parametrize("gamma, eta", [(0.0, 100.0), (1.0, 100.0), (100.0, 100.0), (100.0, 7.0)])
def test_recombined_parameters(system10, gamma, eta):
    d, _, system = system10
    a = cutsv.assemble_a(d.space, d.topo, d.rules, cutsv.MethodParams(gamma, eta))
    other = system.with_params(gamma, eta)
    assert abs(other.A - a).max() <= 1e-12 * abs(a).max()
    assert other.eta == eta and other.gamma == gamma


def test_per_h_parameters_resolve_on_macro_size():
    d, params, system = assembled(5, gamma=cutsv.ParamSpec(10, per_h=True))
    assert math.isclose(system.gamma, 50.0)
    assert math.isclose(system.h, 0.2)


def test_export_matrices(system10, tmp_path):
    _, _, system = system10
    cutsv.export_matrices(system, tmp_path / "n10")
    for name in ["A", "B", "J", "m", "F", "G"]:
        assert (tmp_path / "n10" / (name + ".mtx")).exists()
    a = scipy.io.mmread(str(tmp_path / "n10" / "A.mtx")).tocsr()
    assert abs(a - system.A).max() <= 1e-14 * abs(system.A).max()
    g = np.asarray(scipy.io.mmread(str(tmp_path / "n10" / "G.mtx"))).ravel()
    assert np.allclose(g, system.G, rtol=1e-14, atol=0)
