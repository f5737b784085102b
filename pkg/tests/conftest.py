"""Shared fixtures, random-instance generators, and frozen reference
values for the test suite.

Reference constants were computed with independent high-precision
oracles (mpmath at 50+ digits, exact Fraction arithmetic for the
sorted-dot values); scripts/derive_reference_values.py regenerates them.
"""

import numpy as np
import pytest
from hypothesis import settings

from ergokit import BatterySpec, QuantumState

settings.register_profile("ci", deadline=None, max_examples=50,
                          derandomize=True)
settings.load_profile("ci")


# --- the three-level demo instance ------------------------------------
# Published eigenvalues, rounded to three decimals; they sum to 0.999 and
# are used verbatim throughout (never renormalized).
DEMO_ENERGIES = (0.0, 0.579, 1.0)
DEMO_SPECTRUM = (0.538, 0.237, 0.224)          # passive arrangement
DEMO_ANTI = (0.224, 0.237, 0.538)              # anti-passive arrangement

DEMO_INITIAL_ENERGY = 0.675223                 # exact: 0.237*0.579 + 0.538
DEMO_PASSIVE_ENERGY = 0.361223                 # exact: 0.237*0.579 + 0.224
DEMO_ERGOTROPY = 0.314                         # exact difference
DEMO_E2 = 0.360861777                          # exact Fraction sort-and-dot
DEMO_ADVANTAGE_2 = 0.000722446                 # exact: 2*(e(1) - e(2))

DEMO_ENTROPY = 1.0098406492715599              # mpmath: -sum r ln r
DEMO_BETA = 1.0363528238614090                 # mpmath bisection, 50 dps
DEMO_GIBBS_ENERGY = 0.3532869394513052         # mpmath, at the beta above

ENTROPY_GIBBS_BETA1 = 1.0157163593878962       # mpmath: S(omega_1), demo levels
MAXMIX_ENERGY = 1.579 / 3.0                    # uniform populations


@pytest.fixture
def demo_battery():
    return BatterySpec(np.array(DEMO_ENERGIES))


@pytest.fixture
def demo_passive_state():
    return QuantumState.diagonal(DEMO_SPECTRUM)


@pytest.fixture
def demo_anti_state():
    return QuantumState.diagonal(DEMO_ANTI)


# --- random instance generators ----------------------------------------

def random_battery(rng, d, ground=0.0, max_gap=1.0):
    gaps = rng.uniform(0.05, max_gap, size=d - 1)
    return BatterySpec(ground + np.concatenate(([0.0], np.cumsum(gaps))))


def random_diagonal_state(rng, d):
    return QuantumState.diagonal(rng.dirichlet(np.ones(d)))


def random_density_matrix(rng, d):
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    return QuantumState.full(rho)


def random_unitary(rng, d):
    """Haar-ish unitary: QR orthonormalization of a complex Gaussian
    matrix with the R-diagonal phase fixed."""
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
