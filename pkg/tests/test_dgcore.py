import numpy as np
import pytest

from aderdg.basis import gauss_legendre
from aderdg.dgcore import cfl_dt, path_jump, picard_residual, picard_sweeps, predict, rusanov
from aderdg.errors import PathThroughInvalidState
from aderdg.models import Elastic2D, Elastic3D, ElasticParams, Hsgn, HsgnParams


@pytest.fixture
def hsgn():
    return Hsgn(HsgnParams(g=9.81, gamma=1.5, c=20.0, h0=1.0))


@pytest.fixture
def elastic():
    return Elastic2D(ElasticParams(lam=2.0, mu=1.0, rho=1.0))


def nodes_of(degree):
    return gauss_legendre(degree + 1)[0]


def element_from(fn, degree, nv, spacings=(0.3, 0.3), lo=(0.0, 0.0)):
    xs = lo[0] + nodes_of(degree) * spacings[0]
    ys = lo[1] + nodes_of(degree) * spacings[1]
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X, Y], axis=-1)
    return fn(pts)


# ------------------------------------------------------------- predictor


def test_predict_constant_elastic_is_fixed_point(elastic):
    n = 4
    el = np.tile(np.arange(1.0, 6.0), (n, n, 1))
    q1 = picard_sweeps(el, 0.01, (0.3, 0.3), elastic, 1)
    q9 = picard_sweeps(el, 0.01, (0.3, 0.3), elastic, 9)
    # constants converge after a single sweep
    assert np.abs(q1 - q9).max() < 1e-14
    for a in range(n):
        assert np.allclose(q9[..., a, :], el, atol=1e-14)


def test_predict_hsgn_lake_at_rest_constant_in_time(hsgn):
    n = 4
    el = np.zeros((n, n, 6))
    el[..., 0] = 1.0
    q = predict(el, 0.005, (0.5, 0.5), hsgn)
    for a in range(n):
        assert np.abs(q[..., a, :] - el).max() < 1e-14


@pytest.mark.parametrize("degree", [1, 2, 3, 4, 5])
def test_picard_one_directional_data_converges_in_n_plus_1(elastic, degree):
    # data varying along a single coordinate: the spatial operator chain
    # terminates after N+1 derivatives, the classic nilpotency bound
    rng = np.random.default_rng(degree)
    n = degree + 1
    coeffs = rng.normal(size=(n, 5))
    vals = np.vander(nodes_of(degree), n, increasing=True) @ coeffs
    el = np.repeat(vals[:, None, :], n, axis=1)
    dt = cfl_dt(0.3, 0.3, degree, 2.0)
    res = picard_residual(el, dt, (0.3, 0.3), elastic, degree + 1)
    assert res < 1e-11, res


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_picard_generic_data_converges_at_nilpotent_index(elastic, degree):
    # fully 2D data needs up to 2N+1 sweeps for the exact fixed point
    rng = np.random.default_rng(10 + degree)
    n = degree + 1
    el = rng.normal(size=(n, n, 5))
    dt = cfl_dt(0.3, 0.3, degree, 2.0)
    res = picard_residual(el, dt, (0.3, 0.3), elastic, 2 * degree + 1)
    assert res < 1e-12, res


def test_picard_nonlinear_converges_to_tolerance(hsgn):
    rng = np.random.default_rng(4)
    n = 4
    el = np.zeros((n, n, 6))
    el[..., 0] = 1.0 + 0.1 * rng.random((n, n))
    el[..., 1] = 0.2 * rng.standard_normal((n, n))
    el[..., 4] = 0.2 * rng.standard_normal((n, n))
    dt = cfl_dt(0.3, 0.5, 3, 21.0)
    q = predict(el, dt, (0.5, 0.5), hsgn)
    assert np.isfinite(q).all()
    res = picard_residual(el, dt, (0.5, 0.5), hsgn, 14)
    assert res < 1e-11


# ------------------------------------------------------------- rusanov


def test_rusanov_consistency(hsgn):
    q = np.array([1.2, 0.3, -0.1, 0.05, 0.2, 0.1])
    n = np.array([0.6, 0.8])
    got = rusanov(q, q, n, hsgn)
    assert np.allclose(got, hsgn.flux(q) @ n, atol=1e-14)


def test_rusanov_elastic_pure_penalty(elastic):
    rng = np.random.default_rng(0)
    qL, qR = rng.normal(size=5), rng.normal(size=5)
    n = np.array([1.0, 0.0])
    got = rusanov(qL, qR, n, elastic)
    assert np.allclose(got, -0.5 * elastic.params.cp * (qR - qL), atol=1e-14)


def test_rusanov_hsgn_mass_row_frozen():
    # hand-computable: still states, only h jumps; smax from the deeper state
    model = Hsgn(HsgnParams(g=9.81, gamma=1.5, c=20.0, h0=1.0))
    qL = np.array([1.0, 0, 0, 0, 0, 0.0])
    qR = np.array([1.2, 0, 0, 0, 0, 0.0])
    n = np.array([1.0, 0.0])
    smax = np.sqrt(9.81 * 1.2 + 400.0)
    got = rusanov(qL, qR, n, model)
    assert abs(got[0] - (-0.5 * smax * 0.2)) < 1e-13
    # momentum row keeps the central hydrostatic average
    hyd = 0.5 * (0.5 * 9.81 * 1.0 + 0.5 * 9.81 * 1.44)
    assert abs(got[1] - hyd) < 1e-12


# ------------------------------------------------------------- path jump


def test_path_jump_zero_for_equal_states(hsgn):
    q = np.array([1.1, 0.2, 0.1, 0.0, 0.3, 0.2])
    out = path_jump(q, q, np.array([1.0, 0.0]), hsgn)
    assert np.allclose(out, 0.0)


def test_path_jump_elastic_exact_any_rule(elastic):
    rng = np.random.default_rng(5)
    qL, qR = rng.normal(size=5), rng.normal(size=5)
    n = np.array([0.6, -0.8])
    ref = 0.5 * elastic.bn_matvec(qL, qR - qL, n)
    assert np.allclose(path_jump(qL, qR, n, elastic), ref, atol=1e-14)
    assert np.allclose(path_jump(qL, qR, n, elastic, n_path=9), ref, atol=1e-14)


def test_path_jump_bottom_jump_three_point_exact(hsgn):
    # only z_b jumps: the integrand is constant along the segment, so the
    # 3-point rule matches a 64-point reference to round-off
    qL = np.array([1.3, 0.5, -0.2, 0.1, 0.26, 0.0])
    qR = qL.copy()
    qR[5] = 0.4
    n = np.array([1.0, 0.0])
    j3 = path_jump(qL, qR, n, hsgn, n_path=3)
    j64 = path_jump(qL, qR, n, hsgn, n_path=16)
    assert np.abs(j3 - j64).max() < 1e-13
    h, p = 1.3, 0.26 / 1.3
    expected = 0.5 * (9.81 * h + 1.5 * p) * 0.4
    assert abs(j3[1] - expected) < 1e-12


def test_path_jump_two_sided_convention(hsgn):
    # D(qL, qR, n) == D(qR, qL, -n): both face sides add the same jump term
    rng = np.random.default_rng(8)
    for _ in range(50):
        qL = np.array([1.0 + 0.3 * rng.random(), *rng.normal(size=4) * 0.3,
                       rng.normal() * 0.2])
        qR = np.array([1.0 + 0.3 * rng.random(), *rng.normal(size=4) * 0.3,
                       rng.normal() * 0.2])
        phi = rng.uniform(0, 2 * np.pi)
        n = np.array([np.cos(phi), np.sin(phi)])
        a = path_jump(qL, qR, n, hsgn)
        b = path_jump(qR, qL, -n, hsgn)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-13)


def test_path_jump_through_dry_state_raises(hsgn):
    qL = np.array([1.0, 0, 0, 0, 0, 0.0])
    qR = np.array([-0.5, 0, 0, 0, 0, 0.0])
    with pytest.raises(PathThroughInvalidState):
        path_jump(qL, qR, np.array([1.0, 0.0]), hsgn)


# ------------------------------------------------------------- cfl


def test_cfl_dt_examples():
    assert abs(cfl_dt(0.45, 0.1, 3, 2.0) - 0.45 * 0.1 / 14.0) < 1e-15
    assert abs(cfl_dt(0.9, 1.0, 0, 1.0) - 0.9) < 1e-15
