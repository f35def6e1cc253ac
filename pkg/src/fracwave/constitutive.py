"""Constitutive distributions and their Laplace symbols.

Two families are supported:

* :class:`DiscreteModel` -- finite Dirac combs, i.e. linear fractional models
  ``sum a_i D^{alpha_i} sigma = sum b_j D^{beta_j} epsilon``. The symbol of a
  side is ``sum c s**o``.
* :class:`PowerTypeModel` -- ``phi_sigma(alpha) = tau**alpha``,
  ``phi_epsilon(alpha) = 1`` on ``[0, 1]``. The symbols are
  ``(tau s - 1) / ln(tau s)`` and ``(s - 1) / ln s``.

Every symbol is evaluated in polar form ``s = r exp(i theta)`` with
``theta`` in ``(-pi, pi]``, so powers and logarithms always sit on the
principal branch and the two banks of the negative real axis are selected by
``theta = +pi`` / ``theta = -pi`` explicitly instead of by signed zeros.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, NumericalError

__all__ = [
    "FractionalTerm",
    "DiscreteModel",
    "PowerTypeModel",
    "ConstitutiveModel",
    "STRESS",
    "STRAIN",
    "UPPER",
    "LOWER",
    "phi_at",
    "phi_polar",
    "ratio_at",
    "ratio_polar",
    "omega_at",
    "eval_on_cut",
    "elastic",
    "fractional_zener",
    "modified_zener",
    "modified_maxwell",
    "maxwell",
    "power_type",
    "reference_models",
]

STRESS = "stress"
STRAIN = "strain"
UPPER = "upper"
LOWER = "lower"

# Relative half-width of the neighbourhood of u = 1 where (u - 1)/ln u is
# replaced by its Taylor expansion.
REMOVABLE_WIDTH = 1e-8


@dataclass(frozen=True)
class FractionalTerm:
    """One term ``coefficient * D^order`` of a linear fractional model."""

    coefficient: float
    order: float

    def __post_init__(self):
        c, o = float(self.coefficient), float(self.order)
        if not (math.isfinite(c) and c > 0.0):
            raise DomainError(f"coefficient must be > 0, got {self.coefficient!r}")
        if not (math.isfinite(o) and 0.0 <= o < 1.0):
            raise DomainError(f"order must satisfy order ∈ [0,1), got {self.order!r}")
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "order", o)


def _as_terms(terms, side):
    out = []
    for item in terms:
        if isinstance(item, FractionalTerm):
            out.append(item)
        else:
            c, o = item
            out.append(FractionalTerm(c, o))
    if not out:
        raise DomainError(f"{side} side needs at least one term")
    orders = [t.order for t in out]
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise DomainError(f"{side} orders must be strictly increasing, got {orders}")
    return tuple(out)


@dataclass(frozen=True)
class DiscreteModel:
    """Linear fractional model given by stress-side and strain-side terms.

    ``stress`` and ``strain`` accept :class:`FractionalTerm` instances or
    ``(coefficient, order)`` pairs and are stored as tuples of terms.
    """

    stress: tuple
    strain: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "stress", _as_terms(self.stress, STRESS))
        object.__setattr__(self, "strain", _as_terms(self.strain, STRAIN))

    @property
    def stress_orders(self):
        return tuple(t.order for t in self.stress)

    @property
    def strain_orders(self):
        return tuple(t.order for t in self.strain)

    @property
    def is_elastic(self):
        return (len(self.stress) == 1 and len(self.strain) == 1
                and self.stress[0].order == 0.0 and self.strain[0].order == 0.0)

    def scaled(self, factor):
        """Both sides multiplied by the same positive constant."""
        return DiscreteModel(
            [(t.coefficient * factor, t.order) for t in self.stress],
            [(t.coefficient * factor, t.order) for t in self.strain],
            self.name,
        )

    def swapped(self):
        """Stress and strain term lists exchanged."""
        return DiscreteModel(self.strain, self.stress, self.name)


@dataclass(frozen=True)
class PowerTypeModel:
    """Power-type distributed-order model with ``0 < tau < 1``."""

    tau: float
    name: str = ""

    def __post_init__(self):
        tau = float(self.tau)
        if not (math.isfinite(tau) and 0.0 < tau < 1.0):
            raise DomainError(f"tau must satisfy 0 < tau < 1, got {self.tau!r}")
        object.__setattr__(self, "tau", tau)

    is_elastic = False


ConstitutiveModel = Union[DiscreteModel, PowerTypeModel]


# ---------------------------------------------------------------------------
# reference models


def elastic():
    return DiscreteModel([(1.0, 0.0)], [(1.0, 0.0)], "elastic")


def fractional_zener(tau=0.5, alpha=0.4):
    """``sigma + tau D^alpha sigma = epsilon + D^alpha epsilon`` (Case 1)."""
    return DiscreteModel([(1.0, 0.0), (tau, alpha)], [(1.0, 0.0), (1.0, alpha)],
                         "fractional Zener")


def modified_zener(a=2.0, b=4.0, alpha=0.25, beta=0.5):
    """``(1 + a D^alpha) sigma = (1 + b D^alpha + D^beta) epsilon`` (Case 2)."""
    return DiscreteModel([(1.0, 0.0), (a, alpha)],
                         [(1.0, 0.0), (b, alpha), (1.0, beta)], "modified Zener")


def modified_maxwell(a0=2.0, a1=1.0, alpha0=0.25, alpha1=0.75):
    """``(1 + a0 D^alpha0 + a1 D^alpha1) sigma = D^alpha1 epsilon`` (Case 3)."""
    return DiscreteModel([(1.0, 0.0), (a0, alpha0), (a1, alpha1)], [(1.0, alpha1)],
                         "modified Maxwell")


def maxwell(a=2.0, alpha=0.25, beta=0.75):
    """``(1 + a D^alpha) sigma = D^beta epsilon`` (Case 4)."""
    return DiscreteModel([(1.0, 0.0), (a, alpha)], [(1.0, beta)], "Maxwell")


def power_type(tau=0.5):
    return PowerTypeModel(tau, f"power type tau={tau:g}")


def reference_models():
    """The five models used throughout the validation suite."""
    return {
        "fractional_zener": fractional_zener(),
        "modified_zener": modified_zener(),
        "modified_maxwell": modified_maxwell(),
        "maxwell": maxwell(),
        "power_type": power_type(0.5),
    }


# ---------------------------------------------------------------------------
# symbol evaluation


def _log_ratio_fn(eps, log_u):
    """``(u - 1) / ln u`` given ``eps = u - 1`` and ``ln u`` (numpy arrays)."""
    near = np.abs(eps) < REMOVABLE_WIDTH
    safe_log = np.where(near, 1.0, log_u)
    e = np.where(near, eps, 0.0)
    taylor = 1.0 + e / 2.0 - e * e / 12.0
    return np.where(near, taylor, eps / safe_log)


def _dirac_symbol(terms, r, theta):
    lr = np.log(r)
    out = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
    for term in terms:
        o = term.order
        out = out + term.coefficient * np.exp(o * lr) * np.exp(1j * o * theta)
    return out


def phi_polar(model, side, r, theta):
    """Symbol of one side at ``s = r exp(i theta)``; vectorised over arrays.

    ``r`` must be positive and ``theta`` in ``[-pi, pi]``; ``theta = -pi``
    selects the lower bank of the branch cut.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if isinstance(model, DiscreteModel):
        terms = model.stress if side == STRESS else model.strain
        return _dirac_symbol(terms, r, theta)
    if side == STRESS:
        log_u = math.log(model.tau) + np.log(r) + 1j * theta
    else:
        log_u = np.log(r) + 1j * theta
    eps = np.expm1(log_u)
    return _log_ratio_fn(eps, log_u)


def ratio_polar(model, r, theta):
    """``Phi_sigma / Phi_epsilon`` at ``s = r exp(i theta)``; vectorised."""
    return phi_polar(model, STRESS, r, theta) / phi_polar(model, STRAIN, r, theta)


def _polar(s):
    s = complex(s)
    if s == 0:
        raise DomainError("symbols are not defined at s = 0")
    r, theta = abs(s), cmath.phase(s)
    if theta == -math.pi:
        theta = math.pi
    return r, theta


def phi_at(model, side, s):
    """Laplace symbol ``<phi(alpha), s**alpha>`` of the chosen side at complex ``s``."""
    if side not in (STRESS, STRAIN):
        raise DomainError(f"side must be {STRESS!r} or {STRAIN!r}")
    r, theta = _polar(s)
    return complex(phi_polar(model, side, r, theta))


def _checked_ratio(num, den):
    if not (abs(den) > 0.0 and math.isfinite(abs(den))) or not math.isfinite(abs(num)):
        raise NumericalError(f"strain symbol underflow/overflow: {den!r}")
    if abs(num) == 0.0:
        raise NumericalError("stress symbol underflow")
    return num / den


def ratio_at(model, s):
    """``Phi_sigma(s) / Phi_epsilon(s)`` on the principal branch."""
    r, theta = _polar(s)
    num = complex(phi_polar(model, STRESS, r, theta))
    den = complex(phi_polar(model, STRAIN, r, theta))
    return _checked_ratio(num, den)


def omega_at(model, s):
    """``s**2 Phi_sigma(s) / Phi_epsilon(s)``."""
    return complex(s) ** 2 * ratio_at(model, s)


def eval_on_cut(model, q, side=UPPER):
    """``Phi_sigma / Phi_epsilon`` on the ray ``s = q exp(+-i pi)``.

    ``side="upper"`` uses ``s**alpha = q**alpha exp(i alpha pi)`` and
    ``ln s = ln q + i pi``; ``"lower"`` flips the signs of the phases.
    """
    q = float(q)
    if not q > 0.0:
        raise DomainError(f"q must be > 0, got {q!r}")
    if side == UPPER:
        theta = math.pi
    elif side == LOWER:
        theta = -math.pi
    else:
        raise DomainError(f"side must be {UPPER!r} or {LOWER!r}")
    num = complex(phi_polar(model, STRESS, q, theta))
    den = complex(phi_polar(model, STRAIN, q, theta))
    return _checked_ratio(num, den)


# ---------------------------------------------------------------------------
# packed parameters for the quadrature backends


class ModelParams(NamedTuple):
    kind: int  # 0 = discrete, 1 = power type
    stress_coef: np.ndarray
    stress_order: np.ndarray
    strain_coef: np.ndarray
    strain_order: np.ndarray
    tau: float


@lru_cache(maxsize=256)
def model_params(model):
    if isinstance(model, DiscreteModel):
        arr = lambda xs: np.ascontiguousarray(xs, dtype=np.float64)  # noqa: E731
        return ModelParams(
            0,
            arr([t.coefficient for t in model.stress]),
            arr([t.order for t in model.stress]),
            arr([t.coefficient for t in model.strain]),
            arr([t.order for t in model.strain]),
            1.0,
        )
    empty = np.zeros(0, dtype=np.float64)
    return ModelParams(1, empty, empty, empty, empty, model.tau)
