"""Material descriptors and material functions.

Glass modulus, equilibrium compliance, slowness and wave speed follow from
the large- and small-``s`` limits of the symbol ratio and are computed in
closed form per admissibility class. Creep compliance ``J(t)`` and relaxation
modulus ``G(t)`` are obtained by Gaver-Stehfest inversion of

    J~(s) = Phi_sigma(s) / (s Phi_eps(s)),    G~(s) = Phi_eps(s) / (s Phi_sigma(s)).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .admissibility import CaseLabel, classify
from .constitutive import ratio_polar
from .errors import DomainError, InfiniteSpeed, NumericalError
from .inversion import stehfest

__all__ = [
    "TypeLabel",
    "MaterialSummary",
    "GrowthEstimate",
    "slowness",
    "summary",
    "wave_speed_dimensional",
    "creep_compliance",
    "relaxation_modulus",
    "creep_growth_diagnostic",
]


class TypeLabel(enum.Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    IV = "IV"

    def __str__(self):
        return self.value


def type_from_limits(glass_modulus, equilibrium_compliance):
    g_fin = math.isfinite(glass_modulus)
    j_fin = math.isfinite(equilibrium_compliance)
    if g_fin:
        return TypeLabel.I if j_fin else TypeLabel.II
    return TypeLabel.III if j_fin else TypeLabel.IV


@dataclass(frozen=True)
class MaterialSummary:
    """Scalar descriptors of a viscoelastic model.

    Infinite quantities are represented by ``math.inf``.
    """

    case: CaseLabel
    glass_modulus: float
    glass_compliance: float
    equilibrium_compliance: float
    slowness: float
    wave_speed: float
    type_label: TypeLabel

    def as_dict(self):
        return {
            "case": str(self.case),
            "glass_modulus": self.glass_modulus,
            "glass_compliance": self.glass_compliance,
            "equilibrium_compliance": self.equilibrium_compliance,
            "slowness": self.slowness,
            "wave_speed": self.wave_speed,
            "type": str(self.type_label),
        }


def _top_shared(model):
    # coefficients of the highest stress and strain terms (same order in Cases 1/3)
    return model.stress[-1].coefficient, model.strain[-1].coefficient


def _limits(model, label):
    """``(G_g, J_e)`` in closed form for an already classified model."""
    if label is CaseLabel.POWER_TYPE:
        return 1.0 / model.tau, 1.0
    a1, b1 = model.stress[0].coefficient, model.strain[0].coefficient
    if label in (CaseLabel.ELASTIC, CaseLabel.CASE1):
        an, bn = _top_shared(model)
        return bn / an, a1 / b1
    if label is CaseLabel.CASE2:
        return math.inf, a1 / b1
    if label is CaseLabel.CASE3:
        an, bn = _top_shared(model)
        return bn / an, math.inf
    return math.inf, math.inf


def slowness(model):
    """Large-``|s|`` limit ``k`` of ``|sqrt(Phi_sigma / Phi_eps)|``.

    Zero for models with an infinite glass modulus (Cases 2 and 4).
    """
    glass, _ = _limits(model, classify(model))
    return 0.0 if math.isinf(glass) else 1.0 / math.sqrt(glass)


def summary(model):
    """Glass/equilibrium limits, wave speed and viscoelastic type of ``model``."""
    label = classify(model)
    glass, eq = _limits(model, label)
    if math.isinf(glass):
        k, c, jg = 0.0, math.inf, 0.0
    else:
        k, c, jg = 1.0 / math.sqrt(glass), math.sqrt(glass), 1.0 / glass
    return MaterialSummary(label, glass, jg, eq, k, c, type_from_limits(glass, eq))


def wave_speed_dimensional(c, modulus, density):
    """Dimensional wave speed ``c sqrt(E / rho)`` in m/s."""
    c, modulus, density = float(c), float(modulus), float(density)
    if not (modulus > 0.0 and density > 0.0):
        raise DomainError("modulus and density must be positive")
    if math.isinf(c):
        raise InfiniteSpeed("model has no finite wave speed")
    return c * math.sqrt(modulus / density)


# ---------------------------------------------------------------------------
# material functions


def _ratio_real(model, s):
    s = np.asarray(s, dtype=float)
    return ratio_polar(model, s, 0.0).real


def creep_transform(model, s):
    """``J~(s)`` on the positive real axis."""
    s = np.asarray(s, dtype=float)
    return _ratio_real(model, s) / s


def relaxation_transform(model, s):
    """``G~(s)`` on the positive real axis."""
    s = np.asarray(s, dtype=float)
    return 1.0 / (_ratio_real(model, s) * s)


def _invert_grid(transform, model, t_grid, order, check_order, rtol, what):
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(~(t > 0.0)):
        raise DomainError("t_grid must be positive")
    if np.any(np.diff(t) < 0.0):
        raise DomainError("t_grid must be sorted")
    classify(model)

    def func(s):
        return transform(model, s)

    main = np.array([stehfest(func, ti, order) for ti in t])
    alt = np.array([stehfest(func, ti, check_order) for ti in t])
    flags = np.abs(main - alt) > rtol * np.maximum(np.abs(main), np.abs(alt))
    if np.any(flags):
        raise NumericalError(
            f"Stehfest orders {order} and {check_order} disagree for {what} "
            f"at {int(flags.sum())} of {t.size} points",
            details={"t": t, "values": main, "check": alt, "flags": flags},
        )
    return main


def creep_compliance(model, t_grid, order=12, check_order=14, rtol=1e-2):
    """Creep compliance ``J(t)`` sampled on ``t_grid``.

    Raises
    ------
    NumericalError
        When the order ``order`` and ``check_order`` inversions differ by more
        than ``rtol`` relative at some point. ``err.details["flags"]`` marks
        the offending points.
    """
    return _invert_grid(creep_transform, model, t_grid, order, check_order, rtol,
                        "creep compliance")


def relaxation_modulus(model, t_grid, order=12, check_order=14, rtol=1e-2):
    """Relaxation modulus ``G(t)`` sampled on ``t_grid``; see :func:`creep_compliance`."""
    return _invert_grid(relaxation_transform, model, t_grid, order, check_order, rtol,
                        "relaxation modulus")


@dataclass(frozen=True)
class GrowthEstimate:
    """Power-law exponent ``p`` in ``J~(s) ~ K / s**p`` as ``s -> 0``."""

    exponent: float
    passed: bool
    s_values: tuple


def creep_growth_diagnostic(model, decades=range(6, 13)):
    """Estimate the small-``s`` growth exponent of ``J~`` by log-log regression.

    The regression runs over ``s = 10**-j`` for ``j`` in ``decades``. The
    diagnostic passes when ``p < 3``, which bounds the large-time growth of
    the creep compliance.
    """
    classify(model)
    s = 10.0 ** -np.asarray(list(decades), dtype=float)
    y = np.log(creep_transform(model, s))
    slope = np.polyfit(np.log(s), y, 1)[0]
    p = float(-slope)
    return GrowthEstimate(p, p < 3.0, tuple(float(v) for v in s))
