"""Thermodynamic admissibility of linear fractional models.

Discrete models fall into four admissible order patterns (Cases 1-4). This
module classifies a model, checks the coefficient ratio chains, and provides
the closed-form imaginary part of ``psi(xi, s) = s**2 + xi**2 Phi_eps/Phi_sigma``
used in the dissipativity argument, together with a brute-force grid scan.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constitutive import DiscreteModel, PowerTypeModel, ratio_polar
from .errors import DomainError, NotAdmissible

__all__ = [
    "CaseLabel",
    "A2ScanReport",
    "classify",
    "check_ratio_chain",
    "psi",
    "im_psi_closed_form",
    "scan_a2prime",
]

# Orders closer than this (but not equal) are treated as ambiguous input.
ORDER_AMBIGUITY = 1e-12


class CaseLabel(enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    ELASTIC = "Elastic"
    POWER_TYPE = "PowerType"

    def __str__(self):
        return self.value


def check_ratio_chain(pairs):
    """True iff ``a_1/b_1 >= a_2/b_2 >= ...`` for ``pairs = [(a_i, b_i), ...]``.

    Consecutive ratios are compared by cross-multiplication, so no division
    by small ``b_i`` takes place.
    """
    pairs = [(float(a), float(b)) for a, b in pairs]
    for _, b in pairs:
        if not b > 0.0:
            raise DomainError(f"denominators must be > 0, got {b!r}")
    return all(a0 * b1 >= a1 * b0 for (a0, b0), (a1, b1) in zip(pairs, pairs[1:]))


def _check_ambiguous(stress, strain):
    orders = sorted(set(stress) | set(strain))
    for lo, hi in zip(orders, orders[1:]):
        if hi - lo < ORDER_AMBIGUITY:
            raise NotAdmissible(
                f"orders {lo!r} and {hi!r} differ by less than {ORDER_AMBIGUITY:g}; "
                "ambiguous whether they are shared",
                reason="ambiguous_orders",
            )


def _shared_chain(model, stress_idx, strain_idx):
    pairs = [(model.stress[i].coefficient, model.strain[j].coefficient)
             for i, j in zip(stress_idx, strain_idx)]
    if not check_ratio_chain(pairs):
        raise NotAdmissible(
            "coefficient ratios a_i/b_i on the shared orders must be nonincreasing",
            reason="ratio_chain",
        )


def classify(model):
    """Admissibility class of a constitutive model.

    Raises
    ------
    NotAdmissible
        When the order pattern matches none of the four cases, the highest
        stress order exceeds the highest strain order, or a ratio chain on
        shared orders increases. ``err.reason`` names the violated constraint.
    """
    if isinstance(model, PowerTypeModel):
        return CaseLabel.POWER_TYPE
    if not isinstance(model, DiscreteModel):
        raise DomainError(f"unsupported model type {type(model).__name__}")
    if model.is_elastic:
        return CaseLabel.ELASTIC
    a_ord, b_ord = model.stress_orders, model.strain_orders
    _check_ambiguous(a_ord, b_ord)
    n, m = len(a_ord), len(b_ord)
    if a_ord[-1] > b_ord[-1]:
        raise NotAdmissible(
            "highest stress order exceeds highest strain order",
            reason="highest_order",
        )
    if a_ord == b_ord:
        _shared_chain(model, range(n), range(n))
        return CaseLabel.CASE1
    if m > n and b_ord[:n] == a_ord:
        _shared_chain(model, range(n), range(n))
        return CaseLabel.CASE2
    if n > m and a_ord[n - m:] == b_ord:
        _shared_chain(model, range(n - m, n), range(m))
        return CaseLabel.CASE3
    if a_ord[-1] < b_ord[0]:
        return CaseLabel.CASE4
    raise NotAdmissible(
        "order pattern matches none of the four admissible cases",
        reason="order_pattern",
    )


# ---------------------------------------------------------------------------
# psi and its imaginary part


def psi(model, xi, s):
    """``s**2 + xi**2 Phi_eps(s) / Phi_sigma(s)``; vectorised over ``s``."""
    s = np.asarray(s, dtype=complex)
    ratio = ratio_polar(model, np.abs(s), np.angle(s))
    return s * s + float(xi) ** 2 / ratio


def _pair_sum(coef_pairs, r, phi):
    """Sum of ``c r**(lo+hi) sin((hi-lo) phi)`` over ``(c, lo, hi)`` triples."""
    return math.fsum(c * r ** (lo + hi) * math.sin((hi - lo) * phi)
                     for c, lo, hi in coef_pairs)


def _shared_pairs(a, b, orders):
    # i < j on a block of shared orders: (a_i b_j - a_j b_i) r^(o_i+o_j) sin((o_j-o_i) phi)
    out = []
    for j in range(1, len(orders)):
        for i in range(j):
            out.append((a[i] * b[j] - a[j] * b[i], orders[i], orders[j]))
    return out


def _cross_pairs(a, a_ord, b, b_ord):
    # stress order strictly below strain order: a_i b_j r^(alpha_i+beta_j) sin((beta_j-alpha_i) phi)
    return [(ai * bj, ao, bo) for ai, ao in zip(a, a_ord) for bj, bo in zip(b, b_ord)]


def im_psi_closed_form(model, xi, r, phi):
    """Case-specific closed form of ``Im psi(xi, r e^{i phi})``.

    The cross terms are grouped so that every summand is visibly
    nonnegative for an admissible model and ``phi`` in ``(0, pi/2)``:
    shared orders contribute ``(a_i b_j - a_j b_i) sin((alpha_j - alpha_i) phi)``
    with ``i < j``, and unshared stress/strain pairs contribute
    ``a_i b_j sin((beta_j - alpha_i) phi)``.
    """
    label = classify(model)
    if label not in (CaseLabel.CASE1, CaseLabel.CASE2, CaseLabel.CASE3, CaseLabel.CASE4):
        raise NotAdmissible(f"closed form defined for Cases 1-4 only, got {label}",
                            reason="not_discrete_case")
    r, phi, xi = float(r), float(phi), float(xi)
    a = [t.coefficient for t in model.stress]
    b = [t.coefficient for t in model.strain]
    a_ord, b_ord = model.stress_orders, model.strain_orders
    n, m = len(a), len(b)
    sigma_sym = sum(c * (r ** o) * complex(math.cos(o * phi), math.sin(o * phi))
                    for c, o in zip(a, a_ord))
    weight = xi * xi / abs(sigma_sym) ** 2
    if label is CaseLabel.CASE1:
        pairs = _shared_pairs(a, b, a_ord)
    elif label is CaseLabel.CASE2:
        pairs = (_shared_pairs(a, b[:n], a_ord)
                 + _cross_pairs(a, a_ord, b[n:], b_ord[n:]))
    elif label is CaseLabel.CASE3:
        low = n - m
        pairs = (_cross_pairs(a[:low], a_ord[:low], b, b_ord)
                 + _shared_pairs(a[low:], b, b_ord))
    else:
        pairs = _cross_pairs(a, a_ord, b, b_ord)
    return r * r * math.sin(2.0 * phi) + weight * _pair_sum(pairs, r, phi)


# ---------------------------------------------------------------------------
# grid scan


@dataclass(frozen=True)
class A2ScanReport:
    """Minimum of ``|psi|`` over a product grid of ``xi`` and ``s`` values."""

    min_abs_psi: float
    argmin_xi: float
    argmin_s: complex
    n_xi: int
    n_s: int

    @property
    def passed(self):
        return self.min_abs_psi > 0.0

    @property
    def grid(self):
        return f"{self.n_xi} xi values x {self.n_s} s values"


def scan_a2prime(model, xi_grid, s_grid):
    """Brute-force ``min |psi(xi, s)|`` over ``xi_grid x s_grid``.

    A positive minimum is necessary evidence that ``psi`` has no zeros in
    the right half-plane; the scan catches implementation bugs, it proves
    nothing.
    """
    xi = np.atleast_1d(np.asarray(xi_grid, dtype=float))
    s = np.atleast_1d(np.asarray(s_grid, dtype=complex))
    if xi.size == 0 or s.size == 0:
        raise DomainError("scan grids must be nonempty")
    if np.any(s.real <= 0.0):
        raise DomainError("s grid must lie in Re s > 0")
    inv_ratio = 1.0 / ratio_polar(model, np.abs(s), np.angle(s))
    values = np.abs(s[None, :] ** 2 + (xi ** 2)[:, None] * inv_ratio[None, :])
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return A2ScanReport(float(values[i, j]), float(xi[i]), complex(s[j]), xi.size, s.size)
