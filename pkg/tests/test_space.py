import numpy as np
import pytest
import cutsv
from conftest import discretize


def _quadratic(p):
    x = p[..., 0]
    y = p[..., 1]
    return np.stack([1 + 2 * x - y + 3 * x * y - x * x, 0.5 * y * y - 2 * x * y + x], axis=-1)


def _randomPoints(space, rng, count):
    cells = rng.choice(space.active_cells, count)
    lam = rng.dirichlet(np.ones(3), count)
    pts = np.einsum("ci,cij->cj", lam, space.mesh.vertices[space.mesh.triangles[cells]])
    return cells, pts


def test_single_square_dimensions():
    d = discretize(1, radius_squared=4.0)
    assert len(d.topo.ct_active) == 6
    assert d.space.n_scalar == 17
    assert d.space.n_u == 34
    assert d.space.n_p == 18


@pytest.mark.parametrize("k", [1, 0, 2.5])
def test_invalid_degree(k, disc10):
    with pytest.raises(cutsv.ConfigError):
        cutsv.build_space(disc10.ct, disc10.topo, k)


def test_dimension_counts(disc10):
    space = disc10.space
    topo = disc10.topo
    ct = disc10.ct
    assert space.n_p == 3 * len(topo.ct_active)

    vertices = np.unique(ct.triangles[topo.ct_active])
    edges = np.unique(ct.cell_faces[topo.ct_active])
    assert space.n_scalar == len(vertices) + len(edges)
    assert space.n_u == 2 * space.n_scalar
    assert sorted(np.unique(space.cell_dofs).tolist()) == list(range(space.n_scalar))


def test_cubic_dimension_counts():
    d = discretize(4, k=3)
    topo = d.topo
    vertices = np.unique(d.ct.triangles[topo.ct_active])
    edges = np.unique(d.ct.cell_faces[topo.ct_active])
    assert d.space.n_scalar == len(vertices) + 2 * len(edges) + len(topo.ct_active)
    assert d.space.n_p == 6 * len(topo.ct_active)


@pytest.mark.parametrize("k", [2, 3])
def test_polynomial_reproduction(k, rng):
    d = discretize(6, k=k)
    space = d.space
    coeffs = cutsv.interpolate_velocity(space, _quadratic)
    cells, pts = _randomPoints(space, rng, 50)
    for c, p in zip(cells, pts):
        assert np.abs(space.velocity_at(c, p, coeffs) - _quadratic(p)).max() < 1e-13


def test_partition_of_unity(disc10, rng):
    space = disc10.space
    cells, pts = _randomPoints(space, rng, 30)
    for c, p in zip(cells, pts):
        values = cutsv.eval_basis(space, c, p, 0)
        grads = cutsv.eval_basis(space, c, p, 1)
        assert abs(values.sum() - 1) < 1e-14
        assert np.abs(grads.sum(axis=1)).max() < 1e-13 * space.cell_diameters.max() ** -1


def test_interpolated_gradient(disc10, rng):
    space = disc10.space
    coeffs = cutsv.interpolate_velocity(space, lambda p: np.stack([p[:, 0] ** 2, np.zeros(len(p))], axis=-1))
    cells, pts = _randomPoints(space, rng, 20)
    for c, p in zip(cells, pts):
        grad = space.velocity_gradient_at(c, p, coeffs)[0]
        assert np.abs(grad[0] - [2 * p[0], 0.0]).max() < 1e-12


def test_eval_basis_rejects_outside_points(disc10):
    c = disc10.topo.ct_active[0]
    far = disc10.ct.triangle_coords(c).mean(axis=0) + 1.0
    with pytest.raises(cutsv.GeometryError):
        cutsv.eval_basis(disc10.space, c, far)
    with pytest.raises(cutsv.GeometryError):
        cutsv.eval_basis(disc10.space, int(np.flatnonzero(~disc10.topo.active_mask)[0]), [0.0, 0.0])


def test_jumps_of_global_polynomials(disc10):
    space = disc10.space
    u = cutsv.interpolate_velocity(space, _quadratic)
    rules = disc10.rules
    p = cutsv.project_pressure(space, lambda x: 3 * x[:, 0] - 2 * x[:, 1] + 1, rules)
    for f in disc10.topo.ghost_faces[:40]:
        for order in range(0, 3):
            assert np.abs(cutsv.face_normal_jump(space, f, order, u)).max() < 1e-9
        for order in range(0, 2):
            assert np.abs(cutsv.face_normal_jump(space, f, order, p, field="pressure")).max() < 1e-9


def test_continuity_of_random_fields(disc10, rng):
    space = disc10.space
    u = rng.standard_normal(space.n_u)
    for f in disc10.topo.active_faces[::25]:
        assert np.abs(cutsv.face_normal_jump(space, f, 0, u)).max() < 1e-12


def test_first_order_jump_against_gradients(disc10, rng):
    space = disc10.space
    u = rng.standard_normal(space.n_u)
    ct = disc10.ct
    for f in disc10.topo.ghost_faces[::5]:
        pts, _ = space.face_gauss_points(np.array([f]), space.k + 1)
        n = ct.face_normals[f]
        c0, c1 = ct.face_cells[f]
        g0 = space.velocity_gradient_at(c0, pts[0], u)
        g1 = space.velocity_gradient_at(c1, pts[0], u)
        expected = np.einsum("qij,j->qi", g0 - g1, n)
        got = cutsv.face_normal_jump(space, f, 1, u)
        assert np.abs(got - expected).max() < 1e-10 * max(1.0, np.abs(expected).max())


def test_jump_rejects_boundary_faces(disc10):
    topo = disc10.topo
    outside = sorted(set(range(disc10.ct.n_faces)) - set(topo.active_faces.tolist()))
    with pytest.raises(cutsv.GeometryError):
        cutsv.face_normal_jump(disc10.space, outside[0], 1, np.zeros(disc10.space.n_u))


def test_divergence_lies_in_pressure_space(rng):
    d = discretize(5)
    space = d.space
    cells = np.arange(space.n_cells)
    pts, w = d.rules.full_cell_rule(space, cells)
    _, grads = space.tabulate_velocity(cells, pts)
    div = space.vector_divergence(grads)
    psi = space.tabulate_pressure(cells, pts)
    for _ in range(100):
        v = rng.standard_normal(space.n_u)
        dv = np.einsum("cqa,ca->cq", div, v[space.velocity_dofs])
        proj = np.einsum("cqp,cp->cq", psi, np.einsum("cq,cq,cqp->cp", w, dv, psi))
        assert np.sqrt(np.sum(w * (dv - proj) ** 2)) <= 1e-12 * np.sqrt(np.sum(w * dv ** 2))


def test_pressure_basis_is_orthonormal(disc10):
    space = disc10.space
    cells = np.arange(space.n_cells)
    pts, w = disc10.rules.full_cell_rule(space, cells)
    psi = space.tabulate_pressure(cells, pts)
    gram = np.einsum("cq,cqa,cqb->cab", w, psi, psi)
    assert np.abs(gram - np.eye(space.n_local_p)).max() < 1e-12


def test_basis_locality(disc10):
    space = disc10.space
    c = disc10.topo.ct_interior[0]
    a = space.cell_index[c]
    local = set(space.cell_dofs[a].tolist())
    other = [s for s in disc10.topo.ct_active if not local & set(space.cell_dofs[space.cell_index[s]].tolist())][0]
    u = np.zeros(space.n_u)
    u[space.cell_dofs[a]] = 1.0
    mid = disc10.ct.triangle_coords(other).mean(axis=0)
    assert np.abs(space.velocity_at(other, mid, u)).max() == 0.0


def test_interpolation_order():
    def _smooth(p):
        return np.stack([np.sin(2 * p[..., 0]) * np.cos(p[..., 1]), np.exp(p[..., 0] * p[..., 1])], axis=-1)

    errors = []
    hs = []
    for n in [5, 10, 20, 40]:
        d = discretize(n)
        space = d.space
        u = cutsv.interpolate_velocity(space, _smooth)
        cells = np.arange(space.n_cells)
        pts, w = d.rules.full_cell_rule(space, cells)
        values, _ = space.tabulate_velocity(cells, pts)
        uh = np.einsum("cia,cqa->cqi", u[space.velocity_dofs].reshape(len(cells), 2, -1), values)
        errors.append(np.sqrt(np.sum(w[..., None] * (uh - _smooth(pts)) ** 2)))
        hs.append(1.0 / n)
    rates = cutsv.compute_eoc(errors, hs)[1:]
    assert min(rates) >= 2 + 0.8


def test_pressure_projection_reproduces_linears(disc10, rng):
    space = disc10.space
    p = cutsv.project_pressure(space, lambda x: 2 * x[:, 0] - x[:, 1], disc10.rules)
    cells, pts = _randomPoints(space, rng, 20)
    for c, x in zip(cells, pts):
        assert space.pressure_at(c, x, p)[0] == pytest.approx(2 * x[0] - x[1], abs=1e-13)
