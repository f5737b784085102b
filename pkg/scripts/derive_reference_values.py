#!/usr/bin/env python3
"""Regenerate the frozen reference constants used by the test suite.

All values concern the bundled three-level demo instance: energies
(0, 0.579, 1), eigenvalues (0.538, 0.237, 0.224) taken verbatim (they
are quoted to three decimals and sum to 0.999). Entropy, the matched
inverse temperature, and the matched Gibbs energy are computed with
mpmath at 50 significant digits; sorted-dot energies use exact Fraction
arithmetic, entirely independent of the package implementation.
"""

import itertools
from fractions import Fraction

from mpmath import mp, mpf, exp, log

mp.dps = 50

EIGENVALUES = [mpf("0.538"), mpf("0.237"), mpf("0.224")]
ENERGIES = [mpf("0"), mpf("0.579"), mpf("1")]


def gibbs_populations(beta):
    weights = [exp(-beta * e) for e in ENERGIES]
    z = sum(weights)
    return [w / z for w in weights]


def gibbs_entropy(beta):
    return -sum(p * log(p) for p in gibbs_populations(beta))


def gibbs_energy(beta):
    return sum(p * e for p, e in zip(gibbs_populations(beta), ENERGIES))


def matched_beta(target, iterations=300):
    lo, hi = mpf(0), mpf(1)
    while gibbs_entropy(hi) > target:
        hi *= 2
    for _ in range(iterations):
        mid = (lo + hi) / 2
        if gibbs_entropy(mid) > target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def sorted_dot_energy_per_copy(n):
    """Exact rational e(n): expand all 3^n product probabilities and sum
    energies, sort, dot."""
    r = [Fraction(538, 1000), Fraction(237, 1000), Fraction(224, 1000)]
    eps = [Fraction(0), Fraction(579, 1000), Fraction(1)]
    probs, energies = [], []
    for idx in itertools.product(range(3), repeat=n):
        p, e = Fraction(1), Fraction(0)
        for i in idx:
            p *= r[i]
            e += eps[i]
        probs.append(p)
        energies.append(e)
    probs.sort(reverse=True)
    energies.sort()
    return sum(p * e for p, e in zip(probs, energies)) / n


def main():
    s_rho = -sum(x * log(x) for x in EIGENVALUES)
    beta = matched_beta(s_rho)
    print(f"entropy S(rho)          = {mp.nstr(s_rho, 20)}")
    print(f"matched beta            = {mp.nstr(beta, 20)}")
    print(f"matched Gibbs energy    = {mp.nstr(gibbs_energy(beta), 20)}")
    print(f"entropy residual        = {mp.nstr(abs(gibbs_entropy(beta) - s_rho), 5)}")
    print(f"S(Gibbs, beta=1)        = {mp.nstr(gibbs_entropy(mpf(1)), 20)}")
    for n in (1, 2, 3):
        e_n = sorted_dot_energy_per_copy(n)
        print(f"e({n}) exact             = {e_n} = {mp.nstr(mpf(e_n.numerator) / e_n.denominator, 20)}")
    e1, e2 = sorted_dot_energy_per_copy(1), sorted_dot_energy_per_copy(2)
    adv = 2 * (e1 - e2)
    print(f"2*(e(1) - e(2)) exact   = {adv} = {float(adv)}")


if __name__ == "__main__":
    main()
