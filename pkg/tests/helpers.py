"""Model generators and numerical helpers shared by the tests."""
from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from fracwave.constitutive import DiscreteModel
from fracwave.kernel import kernel_point
from fracwave.material import slowness
from fracwave.solver import Sampled

CASES = ("Case1", "Case2", "Case3", "Case4")


def _orders(rng, count, lo=0, hi=100):
    # distinct orders on a 0.01 lattice, so shared orders compare exactly
    picks = rng.choice(np.arange(lo, hi), size=count, replace=False)
    return [float(v) / 100.0 for v in np.sort(picks)]


def _coefficients(rng, count):
    return [float(v) for v in 10.0 ** rng.uniform(-1.0, 1.0, size=count)]


def _shared_terms(rng, orders):
    # a_i / b_i nonincreasing along increasing orders
    b = _coefficients(rng, len(orders))
    ratios = np.sort(10.0 ** rng.uniform(-1.0, 1.0, size=len(orders)))[::-1]
    a = [float(r * bi) for r, bi in zip(ratios, b)]
    return list(zip(a, orders)), list(zip(b, orders))


def random_admissible(rng, case):
    """Random discrete model of the requested admissibility case."""
    if case == "Case1":
        n = int(rng.integers(1, 5))
        orders = _orders(rng, n, 1)
        if rng.random() < 0.5:
            orders = [0.0] + orders[:-1] if n > 1 else orders
        stress, strain = _shared_terms(rng, orders)
    elif case == "Case2":
        n, extra = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        orders = _orders(rng, n + extra)
        stress, strain = _shared_terms(rng, orders[:n])
        strain += list(zip(_coefficients(rng, extra), orders[n:]))
    elif case == "Case3":
        m, extra = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        orders = _orders(rng, m + extra)
        stress, strain = _shared_terms(rng, orders[extra:])
        stress = list(zip(_coefficients(rng, extra), orders[:extra])) + stress
    elif case == "Case4":
        n, m = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        orders = _orders(rng, n + m)
        stress = list(zip(_coefficients(rng, n), orders[:n]))
        strain = list(zip(_coefficients(rng, m), orders[n:]))
    else:
        raise ValueError(case)
    return DiscreteModel(stress, strain, f"random {case}")


def admissible_models(case):
    """Hypothesis strategy drawing models of ``case`` from a seeded generator."""
    return st.integers(0, 2**32 - 1).map(
        lambda seed: random_admissible(np.random.default_rng(seed), case))


any_admissible = st.sampled_from(CASES).flatmap(admissible_models)


def time_integral(model, x, t, panels=40, nodes=20):
    """``Int_0^t K(x, tau) d tau`` with Gauss-Legendre panels graded toward the front."""
    a = slowness(model) * abs(x)
    edges = sorted([a + (t - a) * 0.5 ** j for j in range(panels)] + [a])
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        taus = 0.5 * (hi - lo) * gx + 0.5 * (hi + lo)
        vals = [kernel_point(model, x, tau).value for tau in taus]
        total += 0.5 * (hi - lo) * float(gw @ vals)
    return total


def gaussian(x, width, x0=0.0, amplitude=1.0):
    g = np.exp(-0.5 * ((x - x0) / width) ** 2) / (width * math.sqrt(2.0 * math.pi))
    return Sampled(x, amplitude * g)
