import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.special import roots_legendre

from wignoise.errors import DomainError, PoleAtOne
from wignoise.specfun import EllipticArgs, ellipf, ellipf_from_complement, elliptic_f


def quadrature_oracle(beta, gamma, n=2000):
    """High-node Gauss-Legendre quadrature of the defining integrand."""
    x, w = roots_legendre(n)
    alpha = 0.5 * beta * (x + 1.0)
    return float(np.sum(0.5 * beta * w / np.sqrt(1.0 - gamma**2 * np.sin(alpha) ** 2)))


def test_zero_modulus_reduces_to_amplitude():
    for beta in (0.0, 0.3, math.pi / 4, 1.2, math.pi / 2):
        assert elliptic_f(EllipticArgs(beta, 0.0)) == pytest.approx(beta, abs=1e-14)


def test_quarter_turn_zero_modulus():
    assert elliptic_f(EllipticArgs(math.pi / 4, 0.0)) == pytest.approx(math.pi / 4,
                                                                       abs=1e-15)


def test_complete_half_modulus_matches_quadrature_oracle():
    oracle = quadrature_oracle(math.pi / 2, 0.5, n=4000)
    value = elliptic_f(EllipticArgs(math.pi / 2, 0.5))
    assert value == pytest.approx(oracle, abs=1e-12)
    assert value == pytest.approx(1.6857503548, abs=1e-9)


def test_lattice_agreement_with_adaptive_quadrature():
    betas = np.linspace(0.03, math.pi / 2, 20)
    gammas = np.linspace(0.0, 0.95, 20)
    for beta in betas:
        for gamma in gammas:
            ref, _ = quad(lambda a: 1.0 / math.sqrt(1.0 - gamma**2 * math.sin(a) ** 2),
                          0.0, beta, epsabs=1e-13, epsrel=1e-13)
            assert elliptic_f(EllipticArgs(float(beta), float(gamma))) == \
                pytest.approx(ref, abs=1e-10)


@given(st.floats(0.05, math.pi / 2 - 0.05), st.floats(0.0, 0.9),
       st.floats(0.01, 0.04), st.floats(0.01, 0.05))
def test_monotone_in_both_arguments(beta, gamma, d_beta, d_gamma):
    base = elliptic_f(EllipticArgs(beta, gamma))
    assert elliptic_f(EllipticArgs(beta + d_beta, gamma)) > base
    assert elliptic_f(EllipticArgs(beta, gamma + d_gamma)) > base


def test_near_unit_modulus_from_complement():
    # kc supplied exactly: compare against the adaptive oracle where the
    # modulus is still representable below 1
    for kc in (1e-2, 1e-4, 1e-6):
        gamma2 = (1.0 - kc) * (1.0 + kc)
        beta = 1.2
        ref, _ = quad(lambda a: 1.0 / math.sqrt(1.0 - gamma2 * math.sin(a) ** 2),
                      0.0, beta, epsabs=1e-14, epsrel=1e-13)
        assert ellipf_from_complement(beta, kc) == pytest.approx(ref, rel=1e-11)


def test_complement_route_consistent_with_modulus_route():
    rng = np.random.default_rng(7)
    for _ in range(50):
        beta = rng.uniform(0.01, math.pi / 2)
        gamma = rng.uniform(0.0, 0.999)
        kc = math.sqrt(1.0 - gamma**2)
        assert ellipf_from_complement(beta, kc) == \
            pytest.approx(float(ellipf(beta, gamma)), rel=1e-13)


def test_vectorized_evaluation_matches_scalar():
    betas = np.linspace(0.1, 1.5, 7)
    vals = ellipf(betas, 0.7)
    for b, v in zip(betas, vals):
        assert v == pytest.approx(float(ellipf(float(b), 0.7)), rel=1e-15)


def test_pole_and_domain_errors():
    with pytest.raises(PoleAtOne):
        EllipticArgs(math.pi / 2, 1.0)
    with pytest.raises(DomainError):
        EllipticArgs(0.7, 1.0)
    with pytest.raises(DomainError):
        EllipticArgs(-0.1, 0.5)
    with pytest.raises(DomainError):
        EllipticArgs(2.0, 0.5)
    with pytest.raises(DomainError):
        EllipticArgs(0.5, -0.2)
