import math
import numpy as np
import pytest
import scipy.integrate
import cutsv
from conftest import discretize


def _sliceIntegral(tri, dom, a, b):
    """Integral of x^a y^b over tri ∩ disk, by adaptive quadrature of exact vertical slices."""

    cx, cy = dom.center
    r = dom.radius
    edges = [(tri[i], tri[(i + 1) % 3]) for i in range(3)]

    def _slice(x):
        ys = []
        for p, q in edges:
            if p[0] != q[0] and min(p[0], q[0]) <= x <= max(p[0], q[0]):
                ys.append(p[1] + (x - p[0]) / (q[0] - p[0]) * (q[1] - p[1]))
        if len(ys) == 0 or abs(x - cx) >= r:
            return 0.0
        s = math.sqrt(r * r - (x - cx) ** 2)
        y0 = max(min(ys), cy - s)
        y1 = min(max(ys), cy + s)
        if y1 <= y0:
            return 0.0
        return x ** a * (y1 ** (b + 1) - y0 ** (b + 1)) / (b + 1)

    breaks = [p[0] for p in tri] + [cx - r, cx + r]
    for p, q in edges:
        for t in dom.segment_intersections(p, q):
            breaks.append(p[0] + t * (q[0] - p[0]))
    lo = tri[:, 0].min()
    hi = tri[:, 0].max()
    breaks = sorted(x for x in breaks if lo < x < hi)
    val, _ = scipy.integrate.quad(_slice, lo, hi, points=breaks or None, epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


@pytest.mark.parametrize("degree", [2, 4, 6, 8])
def test_full_rule_exactness(degree):
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    rule = cutsv.full_rule(tri, degree)
    assert rule.target == cutsv.QuadTarget.FULL
    assert np.all(rule.weights > 0)
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            exact = math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)
            assert rule.integrate(lambda p: p[:, 0] ** a * p[:, 1] ** b) == pytest.approx(exact, rel=1e-13, abs=1e-15)


def test_uncut_and_exterior_cells(circle):
    inner = np.array([[0.45, 0.45], [0.55, 0.45], [0.5, 0.55]])
    rule = cutsv.cut_volume_rule(inner, circle, 6)
    assert rule.target == cutsv.QuadTarget.FULL
    assert rule.total() == pytest.approx(0.005, rel=1e-14)

    outer = np.array([[0.0, 0.0], [0.05, 0.0], [0.0, 0.05]])
    rule = cutsv.cut_volume_rule(outer, circle, 6)
    assert rule.is_empty
    assert rule.total() == 0.0
    assert cutsv.interface_rule(outer, circle, 6).is_empty


def test_circle_inside_triangle():
    dom = cutsv.ImplicitCircle((0.3, 0.3), 0.1)
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert cutsv.cut_volume_rule(tri, dom, 6).total() == pytest.approx(np.pi * 0.01, rel=1e-13)
    assert cutsv.interface_rule(tri, dom, 6).total() == pytest.approx(2 * np.pi * 0.1, rel=1e-13)


@pytest.mark.parametrize("n", [5, 10, 20])
def test_total_volume_and_length(n):
    # every mesh of this sequence has vertices on the circle
    d = discretize(n, quad_degree=8)
    topo = d.topo
    rules = d.rules

    volume = d.ct.areas[topo.ct_interior].sum() + sum(r.total() for r in rules.volume_rules)
    assert abs(volume - np.pi * 0.2) < 1e-10
    assert abs(rules.interface_length() - 2 * np.pi * np.sqrt(0.2)) < 1e-10


def test_interface_moments():
    d = discretize(20, quad_degree=8)
    total = np.zeros(2)
    first = 0.0
    for r in d.rules.interface_rules:
        total += r.integrate(lambda p: r.normals)
        first += r.integrate(lambda p: p[:, 0])
    length = 2 * np.pi * np.sqrt(0.2)
    assert np.abs(total).max() < 1e-10
    assert abs(first - 0.5 * length) < 1e-10


def test_interface_normals(disc10):
    for r in disc10.rules.interface_rules:
        assert np.allclose(np.linalg.norm(r.normals, axis=1), 1.0, atol=1e-12)
        dots = np.einsum("ij,ij->i", r.normals, r.points - disc10.dom.center)
        assert np.allclose(dots, disc10.dom.radius, atol=1e-12)


def test_positive_weights(disc10):
    for r in disc10.rules.volume_rules + disc10.rules.interface_rules:
        assert np.all(r.weights > 0)


def test_padded_batches(disc10):
    rules = disc10.rules
    assert rules.cut_points.shape[0] == len(disc10.topo.ct_cut)
    assert rules.cut_weights.sum(axis=1) == pytest.approx([r.total() for r in rules.volume_rules])
    assert rules.iface_weights.sum() == pytest.approx(rules.interface_length())
    for t in disc10.topo.ct_cut:
        assert rules.has_rule(t)
    assert not rules.has_rule(disc10.topo.ct_interior[0])


@pytest.mark.parametrize("offset", [0.0, 1e-13, -1e-13])
def test_vertex_on_circle_is_snapped(circle, offset):
    v = circle.center + (circle.radius + offset) * np.array([1.0, 0.0])
    tri = np.array([v, circle.center + [0.1, 0.05], circle.center + [0.05, 0.1]])
    rule = cutsv.cut_volume_rule(tri, circle, 6)
    assert rule.target == cutsv.QuadTarget.FULL
    d1 = tri[1] - tri[0]
    d2 = tri[2] - tri[0]
    assert rule.total() == pytest.approx(0.5 * abs(d1[0] * d2[1] - d1[1] * d2[0]), rel=1e-13)
    assert cutsv.interface_rule(tri, circle, 6).is_empty


def test_cut_classification_consistency(disc10):
    ct = disc10.ct
    topo = disc10.topo
    for m in topo.macro_cut:
        differs = False
        for c in ct.macro_to_children[m]:
            rule = cutsv.cut_volume_rule(ct.triangle_coords(c), disc10.dom, 6)
            differs |= rule.target != cutsv.QuadTarget.FULL or abs(rule.total() - ct.areas[c]) > 1e-14
        assert differs
    for m in topo.macro_interior[:20]:
        for c in ct.macro_to_children[m]:
            assert cutsv.cut_volume_rule(ct.triangle_coords(c), disc10.dom, 6).target == cutsv.QuadTarget.FULL


def test_cut_monomials_match_slice_oracle(disc10):
    ct = disc10.ct
    cells = disc10.topo.ct_cut[::7]
    assert len(cells) > 5
    for t in cells:
        tri = ct.triangle_coords(t)
        rule = cutsv.cut_volume_rule(tri, disc10.dom, 6)
        for a in range(5):
            for b in range(5 - a):
                got = rule.integrate(lambda p: p[:, 0] ** a * p[:, 1] ** b)
                assert abs(got - _sliceIntegral(tri, disc10.dom, a, b)) < 1e-9


def test_first_moment_of_one_cut_cell(disc10):
    t = disc10.topo.ct_cut[0]
    tri = disc10.ct.triangle_coords(t)
    rule = cutsv.cut_volume_rule(tri, disc10.dom, 6)
    assert abs(rule.integrate(lambda p: p[:, 0]) - _sliceIntegral(tri, disc10.dom, 1, 0)) < 1e-9
