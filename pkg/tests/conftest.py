import types
import functools
import numpy as np
import pytest
import cutsv


RADIUS_SQUARED = 0.2


@pytest.fixture(scope="session")
def circle():
    return cutsv.ImplicitCircle.from_radius_squared((0.5, 0.5), RADIUS_SQUARED)


@functools.lru_cache(maxsize=None)
def discretize(n, k=2, quad_degree=None, radius_squared=RADIUS_SQUARED):
    dom = cutsv.ImplicitCircle.from_radius_squared((0.5, 0.5), radius_squared)
    mesh = cutsv.build_type1_mesh(n)
    ct = cutsv.clough_tocher_refine(mesh)
    topo = cutsv.classify(ct, dom)
    space = cutsv.build_space(ct, topo, k)
    rules = cutsv.build_rules(ct, topo, dom, 2 * k + 2 if quad_degree is None else quad_degree)
    return types.SimpleNamespace(n=n, dom=dom, mesh=mesh, ct=ct, topo=topo, space=space, rules=rules)


@functools.lru_cache(maxsize=None)
def assembled(n, gamma=0.0, eta=100.0):
    d = discretize(n)
    params = cutsv.MethodParams(gamma, eta, 2)
    system = cutsv.assemble_system(d.space, d.topo, d.rules, cutsv.CircleStokesSolution(), params)
    return d, params, system


@pytest.fixture(scope="session")
def disc10():
    return discretize(10)


@pytest.fixture(scope="session")
def system10():
    return assembled(10)


@pytest.fixture(scope="session")
def solved10():
    d, params, system = assembled(10)
    return d, system, cutsv.solve(system, params)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
