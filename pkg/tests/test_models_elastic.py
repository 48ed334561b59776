import numpy as np
import pytest

from aderdg.models import (
    Elastic2D,
    Elastic3D,
    ElasticParams,
    MaterialRegion,
    elastic_plane_wave_eigenvectors,
)


@pytest.fixture
def params():
    return ElasticParams(lam=2.0, mu=1.0, rho=1.0)


def test_flux_is_zero(params):
    m2, m3 = Elastic2D(params), Elastic3D(params)
    rng = np.random.default_rng(0)
    assert np.all(m2.flux(rng.normal(size=5)) == 0.0)
    assert np.all(m3.flux(rng.normal(size=9)) == 0.0)


def test_source_is_zero(params):
    m3 = Elastic3D(params)
    assert np.all(m3.source(np.arange(9.0)) == 0.0)


def test_ncp_3d_frozen_example(params):
    # read off the printed matrix product with only dx u1 = 1 nonzero
    m = Elastic3D(params)
    grads = np.zeros((3, 9))
    grads[0, 6] = 1.0
    out = m.ncp(np.zeros(9), grads)
    assert np.allclose(out, [-4, -2, -2, 0, 0, 0, 0, 0, 0], atol=1e-14)


def test_ncp_3d_velocity_rows(params):
    m = Elastic3D(params)
    grads = np.zeros((3, 9))
    grads[0, 0] = 2.0   # dx sxx
    grads[1, 3] = 3.0   # dy sxy
    grads[2, 5] = 5.0   # dz sxz
    out = m.ncp(np.zeros(9), grads)
    assert np.allclose(out[6], -(2.0 + 3.0 + 5.0))
    assert np.allclose(out[:6], 0.0)


def test_ncp_2d_matches_3d_plane_strain(params):
    # embed a 2D gradient state into 3D with all z-derivatives zero
    m2, m3 = Elastic2D(params), Elastic3D(params)
    rng = np.random.default_rng(42)
    for _ in range(30):
        g2 = rng.normal(size=(2, 5))
        g3 = np.zeros((3, 9))
        # 2D (sxx, syy, sxy, u, v) -> 3D (sxx, syy, szz, sxy, syz, sxz, u, v, w)
        g3[:2, 0] = g2[:, 0]
        g3[:2, 1] = g2[:, 1]
        g3[:2, 3] = g2[:, 2]
        g3[:2, 6] = g2[:, 3]
        g3[:2, 7] = g2[:, 4]
        out2 = m2.ncp(np.zeros(5), g2)
        out3 = m3.ncp(np.zeros(9), g3)
        assert np.allclose(out2, out3[[0, 1, 3, 6, 7]], atol=1e-13)


def test_linearity_in_state_and_gradient(params):
    m = Elastic3D(params)
    rng = np.random.default_rng(9)
    q1, q2 = rng.normal(size=9), rng.normal(size=9)
    g1, g2 = rng.normal(size=(3, 9)), rng.normal(size=(3, 9))
    a, b = 0.7, -1.3
    # linear in gradients for any state (B does not depend on Q)
    lhs = m.ncp(q1, a * g1 + b * g2)
    rhs = a * m.ncp(q1, g1) + b * m.ncp(q2, g2) * 0 + b * m.ncp(q1, g2)
    assert np.allclose(lhs, rhs, atol=1e-12)
    # state independence
    assert np.allclose(m.ncp(q1, g1), m.ncp(q2, g1), atol=1e-14)


def test_wave_speeds_paper_values():
    hard = ElasticParams(lam=7509672500.0, mu=7509163750.0, rho=2200.0)
    assert abs(hard.cp - 3200.0) < 1e-9
    assert abs(hard.cs - 1847.5) < 1e-1
    soft = ElasticParams(lam=2.0, mu=1.0, rho=1.0)
    assert abs(soft.cp - 2.0) < 1e-14
    assert abs(soft.cs - 1.0) < 1e-14
    m = Elastic2D(hard)
    assert abs(m.max_signal_speed(np.zeros(5), np.array([1.0, 0.0])) - 3200.0) < 1e-9


def test_speed_quadratic_identities():
    rng = np.random.default_rng(4)
    for _ in range(50):
        lam = rng.uniform(0.1, 10)
        mu = rng.uniform(0.0, 10)
        rho = rng.uniform(0.1, 10)
        p = ElasticParams(lam=lam, mu=mu, rho=rho)
        assert abs(rho * p.cp**2 - (lam + 2 * mu)) < 1e-9 * (lam + 2 * mu)
        assert abs(rho * p.cs**2 - mu) < 1e-9 * max(mu, 1e-30)
        assert p.cp >= p.cs


def test_eigenvectors_paper_diagonal(params):
    r_p, r_s = elastic_plane_wave_eigenvectors(np.array([1.0, 1.0]), params)
    assert np.allclose(r_p, [4.0, 4.0, 2.0, -2.0, -2.0], atol=1e-14)
    assert np.allclose(r_s, [-2.0, 2.0, 0.0, 1.0, -1.0], atol=1e-14)


def test_eigenvectors_axis_cases(params):
    _, r_s = elastic_plane_wave_eigenvectors(np.array([1.0, 0.0]), params)
    assert np.allclose(r_s, [0.0, 0.0, 1.0, 0.0, -1.0], atol=1e-14)
    r_p, _ = elastic_plane_wave_eigenvectors(np.array([0.0, 1.0]), params)
    assert np.allclose(r_p, [2.0, 4.0, 0.0, 0.0, -2.0], atol=1e-14)


def test_unit_normal_eigenvectors_are_true_eigenvectors(params):
    # with a unit normal, (B . n) r_p = cp r_p and (B . n) r_s = cs r_s
    m = Elastic2D(params)
    rng = np.random.default_rng(11)
    for _ in range(25):
        phi = rng.uniform(0, 2 * np.pi)
        n = np.array([np.cos(phi), np.sin(phi)])
        r_p, r_s = elastic_plane_wave_eigenvectors(n, params)
        Bn = np.column_stack([m.bn_matvec(np.zeros(5), e, n) for e in np.eye(5)])
        assert np.allclose(Bn @ r_p, params.cp * r_p, atol=1e-10)
        assert np.allclose(Bn @ r_s, params.cs * r_s, atol=1e-10)


def test_piecewise_material_lookup():
    p = ElasticParams(
        lam=2.0, mu=1.0, rho=1.0,
        regions=(MaterialRegion(lo=(-0.5, -0.1), hi=(0.5, 0.1),
                                lam=200.0, mu=100.0, rho=1.0),),
    )
    assert p.material_at((0.0, 0.0)) == (200.0, 100.0, 1.0)
    assert p.material_at((0.9, 0.0)) == (2.0, 1.0, 1.0)
    assert p.material_at((0.0, 0.3)) == (2.0, 1.0, 1.0)


def test_invalid_materials_rejected():
    with pytest.raises(ValueError):
        ElasticParams(lam=1.0, mu=1.0, rho=-1.0)
    with pytest.raises(ValueError):
        ElasticParams(lam=-10.0, mu=1.0, rho=1.0)


def test_from_speeds_round_trip():
    p = ElasticParams.from_speeds(cp=3200.0, cs=1847.5, rho=2200.0)
    assert abs(p.lam - 7509672500.0) < 1.0
    assert abs(p.mu - 7509163750.0) < 1.0
