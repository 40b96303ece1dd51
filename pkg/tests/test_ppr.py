import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffuse.generators import barbell, clique, random_connected
from diffuse.oracle import exact_ppr
from diffuse.ppr import PprParams, ppr_push


@pytest.mark.parametrize("alpha", [0.5, 0.85, 0.99])
def test_k2_closed_form(alpha):
    res = ppr_push(clique(2), [0], PprParams(alpha, 1e-10))
    want = np.array([1 / (1 + alpha), alpha / (1 + alpha)])
    assert np.allclose(res.p.to_dense(2), want, rtol=0, atol=1e-8)


def test_eps_at_least_one_pushes_nothing():
    # on K2 with eps == 1 the seed sits exactly at r_u == eps * d_u and is pushed
    for g, eps in ((clique(2), 1.5), (barbell(5), 1.0), (barbell(5), 3.0)):
        res = ppr_push(g, [0], PprParams(0.85, eps))
        assert len(res.p) == 0 and res.steps == 0


def test_triangle_against_dense_solve():
    g = clique(3)
    res = ppr_push(g, [0], PprParams(0.85, 1e-7))
    pstar = exact_ppr(g, [0], 0.85)
    assert np.all(np.abs(pstar - res.p.to_dense(3)) <= 2e-7)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(5, 50), st.sampled_from([0.1, 0.3, 0.6]),
       st.sampled_from([0.5, 0.85, 0.99]), st.sampled_from([1e-3, 1e-4, 1e-6]))
def test_accuracy_conservation_termination(seed, n, p, alpha, eps):
    rng = np.random.default_rng(seed)
    g = random_connected(n, p, rng)
    s = int(rng.integers(g.num_nodes))
    res = ppr_push(g, [s], PprParams(alpha, eps))
    dense = res.p.to_dense(g.num_nodes)
    pstar = exact_ppr(g, [s], alpha)
    assert np.all(np.abs(pstar - dense) <= eps * g.degrees)
    r = res.residual.to_dense(g.num_nodes)
    assert np.all(r < eps * g.degrees)
    assert np.all(r >= 0)
    assert res.p.l1() + res.residual.l1() == pytest.approx(1.0, abs=1e-12)
    assert res.p.l1() == pytest.approx((1 - alpha) * res.pushed_mass, rel=1e-12)


def test_deterministic():
    g = barbell(5)
    a = ppr_push(g, [3], PprParams(0.99, 1e-6))
    b = ppr_push(g, [3], PprParams(0.99, 1e-6))
    assert (a.steps, a.work) == (b.steps, b.work)
    assert np.array_equal(a.p.values, b.p.values)


@pytest.mark.parametrize("kw", [dict(alpha=0, eps=1e-3), dict(alpha=1, eps=1e-3), dict(alpha=0.5, eps=0)])
def test_param_validation(kw):
    with pytest.raises(ValueError):
        PprParams(**kw)


def test_bad_seed():
    with pytest.raises(ValueError):
        ppr_push(clique(3), [3], PprParams(0.5, 1e-3))
