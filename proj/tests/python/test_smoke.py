import numpy as np
import pytest

import rbbound as rb


@pytest.fixture(scope="module")
def transport():
    return rb.build_transport(0.1, 0.1)


@pytest.fixture(scope="module")
def reduced(transport):
    m = transport
    snaps = [m.solve_full(np.array([x])) for x in np.linspace(0.5, 1.0, 12)]
    adj = [m.solve_adjoint(np.array([x])) for x in np.linspace(0.5, 1.0, 12)]
    Z = rb.pod_basis(snaps, 4)
    Zd = rb.pod_basis(adj, 4)
    return rb.project(m, Z, Zd)


def test_full_solve_matches_time_march(transport):
    mu = np.array([0.75])
    u = transport.solve_full(mu)
    v = rb.transport_time_march(0.1, 0.1, mu)
    assert np.linalg.norm(u - v) <= 1e-8 * np.linalg.norm(v)


def test_model_shape(transport):
    assert transport.dim_x == 121
    u = transport.solve_full(np.array([0.6]))
    assert u.shape == (121,)
    assert np.isfinite(transport.output(u))


def test_reduced_output_close(transport, reduced):
    mu = np.array([0.8])
    s = transport.output(transport.solve_full(mu))
    st = rb.reduced_output(reduced, mu)
    sc = rb.corrected_output(reduced, mu)
    assert abs(st - s) < 1e-2
    assert abs(sc - s) <= abs(st - s) + 1e-12


def test_bound_certifies_error(transport, reduced):
    part = rb.Partition.uniform_grid(transport.box, 1)
    data = rb.train_goal_oriented(transport, reduced, part,
                                  sample_size=50, N=5, seed=3)
    assert data.t2_hat >= 0.0
    for mv in (0.55, 0.7, 0.92):
        mu = np.array([mv])
        s = transport.output(transport.solve_full(mu))
        st = rb.reduced_output(reduced, mu)
        assert abs(s - st) <= rb.bound(data, reduced, mu, 1e-4)


def test_sure_bounds(transport, reduced):
    mu = np.array([0.66])
    s = transport.output(transport.solve_full(mu))
    st = rb.reduced_output(reduced, mu)
    sc = rb.corrected_output(reduced, mu)
    assert rb.lipschitz_bound(transport, reduced, mu) >= abs(s - st)
    assert rb.dual_based_bound(transport, reduced, mu) >= abs(s - sc)


def test_errors_are_mapped(transport):
    with pytest.raises(rb.DomainError):
        transport.solve_full(np.array([2.0]))
    with pytest.raises(rb.ContractError):
        transport.output(np.array([1.0, 2.0]))


def test_sobol_analytic():
    rng = np.random.default_rng(11)
    M = 5000
    a = rng.uniform(size=(M, 2))
    b = rng.uniform(size=(M, 2))
    hybrid = b.copy()
    hybrid[:, 0] = a[:, 0]  # freeze the first input
    f = lambda m: m[:, 0] + 2.0 * m[:, 1]
    s, sp = f(a), f(hybrid)
    eps = np.full(M, 1e-3)

    assert abs(rb.sobol_point_estimate(list(s), list(sp)) - 0.2) < 0.05
    res = rb.sobol_certified(list(s), list(sp), list(eps), list(eps),
                             alpha_as=0.05, B=100, alpha=1e-5, seed=13)
    assert res.combined_interval[0] <= 0.2 <= res.combined_interval[1]
    assert res.meta_interval[0] <= res.s_hat <= res.meta_interval[1]
