from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracwave import (
    CaseLabel,
    DomainError,
    InfiniteSpeed,
    NumericalError,
    TypeLabel,
    creep_compliance,
    creep_growth_diagnostic,
    elastic,
    fractional_zener,
    maxwell,
    modified_maxwell,
    modified_zener,
    power_type,
    ratio_at,
    relaxation_modulus,
    slowness,
    summary,
    wave_speed_dimensional,
)
from fracwave.material import creep_transform, relaxation_transform, type_from_limits
from helpers import any_admissible

# [DERIVED] mpmath invertlaplace (talbot and de Hoog agree to 1e-37)
CREEP_REFERENCE = {
    "fractional_zener": (0.66107867278709684, 0.77896832015738825, 0.88608438377907397),
    "maxwell": (0.9071380499254482, 3.3448235863220425, 13.25513702238036),
    "power_type": (0.64881597140945866, 0.74461156802138252, 0.8353025108908039),
}
RELAXATION_REFERENCE = {
    "fractional_zener": (1.502715747972983, 1.2735352999606795, 1.1240856212147729),
    "maxwell": (0.62424821940044135, 0.15779137189936157, 0.036223918817807817),
    "power_type": (1.5357329701778033, 1.3349953867150431, 1.1934444629631241),
}
T_REFERENCE = (0.1, 1.0, 10.0)


class TestSlowness:
    def test_power(self):
        assert slowness(power_type(0.25)) == 0.5

    def test_case2(self):
        assert slowness(modified_zener()) == 0.0

    def test_case3(self):
        assert slowness(modified_maxwell()) == 1.0

    def test_elastic(self):
        assert slowness(elastic()) == 1.0

    @pytest.mark.parametrize("model,decades", [
        (fractional_zener(), (2, 4, 6, 8)),
        (modified_maxwell(), (2, 4, 6, 8)),
        # power-type symbols converge only logarithmically
        (power_type(0.25), (6, 10, 20, 50, 100)),
        (power_type(0.75), (6, 10, 20, 50, 100)),
    ])
    def test_matches_large_s_modulus(self, model, decades):
        k = slowness(model)
        gaps = [abs(abs(ratio_at(model, 10.0 ** j * np.exp(0.7j))) ** 0.5 - k)
                for j in decades]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-2 * k


class TestSummary:
    def test_fractional_zener(self):
        s = summary(fractional_zener())
        assert s.glass_modulus == 2.0 and s.equilibrium_compliance == 1.0
        assert s.wave_speed == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert s.type_label is TypeLabel.I and s.case is CaseLabel.CASE1

    def test_maxwell(self):
        s = summary(maxwell())
        assert math.isinf(s.glass_modulus) and math.isinf(s.equilibrium_compliance)
        assert math.isinf(s.wave_speed) and s.slowness == 0.0
        assert s.type_label is TypeLabel.IV

    def test_power(self):
        s = summary(power_type(0.25))
        assert (s.wave_speed, s.glass_modulus, s.equilibrium_compliance) == (2.0, 4.0, 1.0)

    def test_power_equilibrium_compliance_from_ratio(self):
        # J_e = lim s->0 of the ratio, sampled directly
        m = power_type(0.25)
        gaps = [abs(ratio_at(m, 10.0 ** -j).real - 1.0) for j in range(4, 13)]
        assert all(b < a for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.1

    @pytest.mark.parametrize("model,label", [
        (fractional_zener(), TypeLabel.I),
        (modified_zener(), TypeLabel.III),
        (modified_maxwell(), TypeLabel.II),
        (maxwell(), TypeLabel.IV),
        (power_type(0.5), TypeLabel.I),
    ])
    def test_type_table(self, model, label):
        s = summary(model)
        assert s.type_label is label
        assert s.type_label is type_from_limits(s.glass_modulus, s.equilibrium_compliance)

    @given(any_admissible)
    def test_invariants(self, model):
        s = summary(model)
        if math.isfinite(s.glass_modulus):
            assert s.glass_modulus * s.glass_compliance == pytest.approx(1.0, rel=1e-15)
            assert s.slowness ** 2 * s.glass_modulus == pytest.approx(1.0, rel=1e-15)
            assert s.wave_speed == pytest.approx(math.sqrt(s.glass_modulus), rel=1e-15)
        else:
            assert s.slowness == 0.0 and math.isinf(s.wave_speed)

    def test_as_dict(self):
        d = summary(modified_zener()).as_dict()
        assert d["case"] == "Case2" and d["type"] == "III"
        assert math.isinf(d["wave_speed"])


class TestWaveSpeedDimensional:
    def test_unit(self):
        assert wave_speed_dimensional(1.0, 7.0, 7.0) == 1.0

    def test_arithmetic(self):
        assert wave_speed_dimensional(2.0, 4.0, 1.0) == 4.0

    def test_infinite(self):
        with pytest.raises(InfiniteSpeed):
            wave_speed_dimensional(math.inf, 1.0, 1.0)

    @pytest.mark.parametrize("e,rho", [(0.0, 1.0), (1.0, -1.0)])
    def test_domain(self, e, rho):
        with pytest.raises(DomainError):
            wave_speed_dimensional(1.0, e, rho)


class TestMaterialFunctions:
    @pytest.mark.parametrize("name", sorted(CREEP_REFERENCE))
    def test_creep_reference(self, models, name):
        model = power_type(0.5) if name == "power_type" else models[name]
        got = creep_compliance(model, T_REFERENCE)
        np.testing.assert_allclose(got, CREEP_REFERENCE[name], rtol=1e-5)

    @pytest.mark.parametrize("name", sorted(RELAXATION_REFERENCE))
    def test_relaxation_reference(self, models, name):
        model = power_type(0.5) if name == "power_type" else models[name]
        got = relaxation_modulus(model, T_REFERENCE)
        np.testing.assert_allclose(got, RELAXATION_REFERENCE[name], rtol=1e-5)

    def test_zener_limits(self):
        j = creep_compliance(fractional_zener(), [1e-6, 1e6])
        g = relaxation_modulus(fractional_zener(), [1e-6, 1e6])
        assert j[0] == pytest.approx(0.5, rel=0.02) and j[1] == pytest.approx(1.0, rel=0.02)
        assert g[0] == pytest.approx(2.0, rel=0.02) and g[1] == pytest.approx(1.0, rel=0.02)

    def test_elastic(self):
        t = [0.01, 1.0, 100.0]
        np.testing.assert_allclose(creep_compliance(elastic(), t), 1.0, rtol=1e-6)
        np.testing.assert_allclose(relaxation_modulus(elastic(), t), 1.0, rtol=1e-6)

    def test_maxwell_unbounded(self):
        j = creep_compliance(maxwell(), [0.1, 1.0, 10.0])
        assert j[2] > j[1] > j[0]

    @given(any_admissible, st.floats(-4.0, 4.0))
    def test_reciprocity(self, model, log_s):
        s = 10.0 ** log_s
        prod = s * creep_transform(model, s) * s * relaxation_transform(model, s)
        assert abs(prod - 1.0) <= 1e-12

    def test_self_consistency_flags(self):
        # order 4 against 14 is too crude for the Maxwell creep curve
        with pytest.raises(NumericalError) as exc:
            creep_compliance(maxwell(), [0.1, 1.0, 10.0], order=4, check_order=14, rtol=1e-6)
        flags = exc.value.details["flags"]
        assert flags.dtype == bool and flags.shape == (3,) and flags.any()

    @pytest.mark.parametrize("t", [[0.0, 1.0], [2.0, 1.0], [-1.0]])
    def test_bad_grid(self, t):
        with pytest.raises(DomainError):
            creep_compliance(fractional_zener(), t)


class TestGrowth:
    @pytest.mark.parametrize("model,expected,tol", [
        (elastic(), 1.0, 1e-12),
        (fractional_zener(), 1.0, 1e-2),
        (maxwell(), 1.75, 1e-2),
    ])
    def test_exponents(self, model, expected, tol):
        g = creep_growth_diagnostic(model)
        assert g.exponent == pytest.approx(expected, abs=tol)
        assert g.passed

    def test_all_reference_models_pass(self, models):
        for model in models.values():
            assert creep_growth_diagnostic(model).passed
