import math

import numpy as np
import pytest
from scipy.linalg import expm

import visco

visco.set_quiet()


def test_params_and_roots():
    p = visco.ModelParams(nu=1.5, nu_prime=0.2, beta=0.8, gamma=1.1)
    assert p.nu_tilde == pytest.approx(1.7)
    k = 0.9
    mu = visco.eigenvalues(p, k)
    assert mu[0] * mu[1] == pytest.approx(p.beta**2 * k**2, rel=1e-12)
    assert mu[2] + mu[3] == pytest.approx(-(p.nu + p.nu_tilde) * k**2, rel=1e-12)
    with pytest.raises(ValueError):
        visco.ModelParams(nu=-1.0)


def test_kernel_matches_scipy_expm():
    p = visco.ModelParams()
    rng = np.random.default_rng(3)
    for _ in range(10):
        xi = rng.normal(size=3)
        t = rng.uniform(0.1, 3.0)
        z = rng.normal(size=6) + 1j * rng.normal(size=6)
        u = visco.manifold_basis(xi) @ z
        ref = expm(t * visco.generator_matrix(p, xi)) @ u
        got = visco.kernel_apply(p, xi, t, u)
        assert np.linalg.norm(got - ref) <= 1e-9 * np.linalg.norm(ref)


def test_branch_factor_initial_values():
    minus, plus, zero = visco.branch_factors(1.0, 2.0, 0.5, 0.0)
    assert (minus, plus, zero) == pytest.approx((0.0, 1.0, 1.0))


def test_rates_and_fit():
    assert visco.theoretical_rate(math.inf) == pytest.approx(2.0)
    assert visco.theoretical_rate(2.0) == pytest.approx(0.75)
    t = np.geomspace(1, 50, 12)
    f = visco.fit_decay_exponent(t, (1 + t) ** -1.25, 1.0, 50.0)
    assert f["slope"] == pytest.approx(1.25, abs=1e-12)


def test_radial_plancherel_consistency():
    p = visco.ModelParams()
    out = visco.radial_decay(p, [0.0, 2.0], mass=1.0, velocity=0.3)
    l2 = out["norms"][2.0]
    assert l2[1] < l2[0]
    # at t = 0 the state is (phi, 0, grad grad eta) with a unit-mass Gaussian phi
    assert l2[0] > (4 * math.pi) ** -0.75


def test_config_experiment_and_hash():
    cfg = "mode = linear_grid\nn = 16\nlength = 24\nt_end = 2\nsamples = 6\nradius = 4\nsplit = false"
    r = visco.run_experiment(cfg)
    assert len(r["series"]["times"]) == 7
    assert len(r["config_hash"]) == 16
    assert visco.fnv1a64("a") == "af63dc4c8601ec8c"
    with pytest.raises(ValueError):
        visco.run_experiment("unknown_key = 1")


def test_verify_subset():
    rep = visco.verify(suites={"identities", "ode_residuals"})
    assert rep["passed"]
    assert {s["name"] for s in rep["suites"]} == {"identities", "ode_residuals"}
    assert "kernel_oracle" in visco.verify_suite_names()
    bad = visco.verify(suites={"kernel_oracle"}, mutate_kernel=True)
    assert not bad["passed"]
