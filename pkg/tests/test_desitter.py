"""
Tests for the de Sitter propagators.

Closed forms in d = 3, where the Gegenbauer functions are elementary, serve as oracles.
"""

import math

import pytest

from kgprop.config import ConfigBuilder
from kgprop.errors import DomainError, ExcludedParameter, KgpropValidationError, OnLightCone, OnSpectrum, OverlapZero
from kgprop.krein import bogoliubov_mode_coeffs
from kgprop.models.common import GegenbauerParams, PropagatorKind, Side
from kgprop.models.desitter import DsPairGeometry, DsPoint, DsRegion, VacuumParameter
from kgprop.spacetimes import (
    alpha_twostate_kernel,
    alpha_vacuum_kernel,
    antipodal,
    ds_coefficient,
    ds_dalembertian_residual,
    ds_geometry,
    ds_identity_residuals,
    ds_pair,
    ds_resolvent,
    euclidean_kernel,
    inout_vacua,
    op_feynman_ds,
    sample,
    scarf_mode_map,
    sphere_kernel,
    vacuum_coefficients,
)
from kgprop.specfun import gamma
from kgprop.spacetimes.base import z_boundary

K = PropagatorKind

# (tau, tau', theta) in each region
PAIRS = {
    DsRegion.S: [(0.3, 0.0, 1.2), (-0.4, 0.2, 1.9), (0.8, -0.5, 1.5)],
    DsRegion.V_PLUS: [(1.5, 0.0, 0.3), (2.0, 0.4, 0.9)],
    DsRegion.V_MINUS: [(-1.5, 0.0, 0.3), (-0.3, 1.6, 0.5)],
    DsRegion.A_PLUS: [(1.0, 0.0, 2.8), (1.2, 0.6, 2.6)],
    DsRegion.A_MINUS: [(-1.0, 0.0, 2.8), (-1.2, -0.6, 2.6)],
}
ALL_PAIRS = [pair for pairs in PAIRS.values() for pair in pairs]


def rel(x, y):
    return abs(x - y) / max(abs(y), 1e-300)


def phi_of(Z):
    """-Z = cos(phi) with phi in (0, pi)."""
    return math.acos(-Z)


class TestGeometry:
    """Tests for points and pair geometry."""

    def test_embedding_on_hyperboloid(self):
        x = DsPoint.zonal(0.7, 1.1, 4)
        e = x.embedding
        assert -e[0] ** 2 + sum(v * v for v in e[1:]) == pytest.approx(1.0, abs=1e-12)

    def test_coincident(self):
        x = DsPoint.zonal(0.4, 0.3, 3)
        geom = ds_geometry(x, x)
        assert geom.Z == pytest.approx(1.0, abs=1e-14)
        assert geom.null_separated

    def test_antipode_at_equal_time(self):
        x = DsPoint.zonal(0.0, 0.0, 3)
        geom = ds_geometry(antipodal(x), x)
        assert geom.Z == pytest.approx(-1.0)
        assert geom.null_separated

    def test_spacelike_example(self):
        geom = ds_pair(1.0, 0.0, math.pi / 2)
        assert geom.Z == pytest.approx(0.0, abs=1e-15)
        assert geom.region is DsRegion.S

    @pytest.mark.parametrize("region", list(PAIRS))
    def test_regions(self, region):
        for pair in PAIRS[region]:
            assert ds_pair(*pair).region is region

    def test_points_match_pair(self):
        for d in (2, 3, 5):
            for tau, tau_prime, theta in ALL_PAIRS:
                geom = ds_geometry(DsPoint.zonal(tau, theta, d), DsPoint.zonal(tau_prime, 0.0, d))
                direct = ds_pair(tau, tau_prime, theta)
                assert geom.Z == pytest.approx(direct.Z, abs=1e-12)
                assert geom.region is direct.region

    def test_antipodal_flips_Z(self):
        x, y = DsPoint.zonal(0.6, 0.4, 3), DsPoint.zonal(-0.2, 2.0, 3)
        geom = ds_geometry(x, y)
        flipped = ds_geometry(antipodal(x), y)
        assert flipped.Z == pytest.approx(-geom.Z)
        assert flipped.t == pytest.approx(geom.tA)
        assert geom.antipodal().Z == pytest.approx(flipped.Z)
        assert geom.antipodal().region is flipped.region

    def test_unit_vector_required(self):
        with pytest.raises(DomainError):
            DsPoint(0.0, (1.0, 0.5))

    def test_dimension_mismatch(self):
        with pytest.raises(KgpropValidationError):
            ds_geometry(DsPoint.zonal(0, 0, 3), DsPoint.zonal(0, 0, 4))

    def test_from_invariants(self):
        assert DsPairGeometry.from_invariants(2.0, t=1.0).region is DsRegion.V_PLUS
        assert DsPairGeometry.from_invariants(-2.0, tA=-1.0).region is DsRegion.A_PLUS
        with pytest.raises(DomainError):
            DsPairGeometry.from_invariants(2.0)


class TestEuclideanKernel:
    """Tests for the Euclidean family."""

    def test_coefficient_d2(self):
        assert ds_coefficient(2, 1.0).real == pytest.approx(1 / (4 * math.cosh(math.pi)), rel=1e-12)
        assert ds_coefficient(2, 1.0).real == pytest.approx(0.0215668, rel=1e-5)

    @pytest.mark.parametrize("nu", [0.5, 1.0, 2.3])
    def test_sphere_kernel_d3(self, nu):
        for Z in (-0.8, 0.0, 0.3, 0.9):
            phi = phi_of(Z)
            expected = math.sinh(nu * phi) / (4 * math.pi * math.sinh(math.pi * nu) * math.sin(phi))
            assert rel(sphere_kernel(3, nu, Z), expected) < 1e-10

    def test_sphere_kernel_domain(self):
        with pytest.raises(DomainError):
            sphere_kernel(3, 1.0, 1.5)

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_feynman_pair_vanishes_spacelike(self, d):
        geom = DsPairGeometry.from_invariants(0.5)
        total = euclidean_kernel(d, 1.0, K.F, geom) + euclidean_kernel(d, 1.0, K.FBAR, geom)
        assert abs(total) < 1e-10 * abs(euclidean_kernel(d, 1.0, K.F, geom))

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_pauli_jordan_from_frequencies(self, d):
        for pair in ALL_PAIRS:
            geom = ds_pair(*pair)
            pj = euclidean_kernel(d, 0.8, K.PJ, geom)
            pos = euclidean_kernel(d, 0.8, K.POS, geom)
            neg = euclidean_kernel(d, 0.8, K.NEG, geom)
            assert abs(pj - 1j * (pos - neg)) < 1e-10 * max(abs(pos), 1e-300)

    def test_pauli_jordan_support(self):
        for pair in PAIRS[DsRegion.S] + PAIRS[DsRegion.A_PLUS]:
            assert euclidean_kernel(3, 1.0, K.PJ, ds_pair(*pair)) == 0
        assert abs(euclidean_kernel(3, 1.0, K.PJ, ds_pair(1.5, 0.0, 0.3))) > 1e-6

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_identities(self, d):
        for pair in ALL_PAIRS:
            residuals = ds_identity_residuals(d, 1.1, ds_pair(*pair))
            assert max(residuals.values()) < 1e-10

    def test_tachyonic_parameter(self):
        geom = ds_pair(0.3, 0.0, 1.2)
        value = euclidean_kernel(3, 0.5j, K.F, geom)
        assert math.isfinite(abs(value))

    @pytest.mark.parametrize("d, y", [(3, 1.0), (3, 2.0), (4, 1.5), (2, 0.5)])
    def test_excluded_parameter(self, d, y):
        with pytest.raises(ExcludedParameter):
            euclidean_kernel(d, 1j * y, K.F, ds_pair(0.3, 0.0, 1.2))

    def test_light_cone(self):
        geom = DsPairGeometry.from_invariants(1.0, t=0.5)
        with pytest.raises(OnLightCone):
            euclidean_kernel(3, 1.0, K.F, geom)

    def test_kind_by_name(self):
        geom = ds_pair(0.3, 0.0, 1.2)
        assert euclidean_kernel(3, 1.0, "Fbar", geom) == euclidean_kernel(3, 1.0, K.FBAR, geom)


class TestAntipodalRelations:
    """SymA and PJA are Sym and PJ seen from the antipode."""

    POINTS = [
        (DsPoint.zonal(1.0, 2.8, 3), DsPoint.zonal(0.0, 0.0, 3)),
        (DsPoint.zonal(-0.9, 2.5, 3), DsPoint.zonal(0.3, 0.0, 3)),
        (DsPoint.zonal(0.2, 1.0, 3), DsPoint.zonal(-0.1, 0.0, 3)),
        (DsPoint.zonal(1.6, 0.2, 3), DsPoint.zonal(0.0, 0.0, 3)),
    ]

    @pytest.mark.parametrize("x, y", POINTS)
    def test_symmetric(self, x, y):
        lhs = euclidean_kernel(3, 1.3, K.SYM_A, ds_geometry(x, y))
        rhs = euclidean_kernel(3, 1.3, K.SYM, ds_geometry(antipodal(x), y))
        assert abs(lhs - rhs) < 1e-12 * max(abs(rhs), 1.0)

    @pytest.mark.parametrize("x, y", POINTS)
    def test_pauli_jordan(self, x, y):
        pja = euclidean_kernel(3, 1.3, K.PJ_A, ds_geometry(x, y))
        moved_x = euclidean_kernel(3, 1.3, K.PJ, ds_geometry(antipodal(x), y))
        moved_y = euclidean_kernel(3, 1.3, K.PJ, ds_geometry(x, antipodal(y)))
        assert abs(pja - moved_x) < 1e-12 * max(abs(pja), 1.0)
        assert abs(pja + moved_y) < 1e-12 * max(abs(pja), 1.0)


class TestResolvent:
    """Tests for the resolvent and the operator-theoretic Feynman kernels."""

    def test_timelike_value(self):
        geom = DsPairGeometry.from_invariants(3.0, t=1.0)
        value = ds_resolvent(3, 1 - 0.2j, geom)
        assert math.isfinite(abs(value)) and abs(value) > 0

    @pytest.mark.parametrize("d, nu", [(4, 0.5j), (4, 1.5j), (3, 2j), (3, 1.0), (5, 0.0)])
    def test_on_spectrum(self, d, nu):
        with pytest.raises(OnSpectrum):
            ds_resolvent(d, nu, ds_pair(0.3, 0.0, 1.2))

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_hermitian_symmetry(self, d):
        nu = 1.0 - 0.3j
        for pair in ALL_PAIRS:
            geom = ds_pair(*pair)
            value = ds_resolvent(d, nu, geom)
            assert rel(ds_resolvent(d, nu.conjugate(), geom), value.conjugate()) < 1e-10 or abs(value) < 1e-14

    @pytest.mark.parametrize("d, mu", [(3, 0.4), (3, 1.3), (4, 0.8), (4, 1.2)])
    def test_tachyonic_formula(self, d, mu):
        a = 0.5 * (d - 1)
        p = GegenbauerParams(0.5 * d - 1, mu)
        for pair in ALL_PAIRS:
            geom = ds_pair(*pair)
            above = z_boundary(p, -geom.Z, Side.ABOVE)
            below = z_boundary(p, -geom.Z, Side.BELOW)
            scale = gamma(a + mu) / (2 ** (2 + mu) * (2 * math.pi) ** a)
            if d % 2:
                expected = -1j * scale / math.sin(math.pi * mu) * (above - below)
            else:
                expected = -scale / math.cos(math.pi * mu) * (above + below)
            value = ds_resolvent(d, 1j * mu, geom)
            assert abs(value - expected) < 1e-10 * max(abs(expected), 1e-12)

    @pytest.mark.parametrize("d", [3, 4])
    def test_limit_from_below_is_feynman(self, d):
        for pair in ALL_PAIRS:
            geom = ds_pair(*pair)
            target = op_feynman_ds(d, 1.0, K.F, geom)
            anti = op_feynman_ds(d, 1.0, K.FBAR, geom)
            scale = max(abs(target), abs(anti), 1e-3)
            errors = [abs(ds_resolvent(d, 1 - eps * 1j, geom) - target) / scale for eps in (1e-2, 1e-3, 1e-4)]
            assert errors[2] <= errors[0]
            # first-order gap in eps
            below = 2 * ds_resolvent(d, 1 - 0.5e-4j, geom) - ds_resolvent(d, 1 - 1e-4j, geom)
            above = 2 * ds_resolvent(d, 1 + 0.5e-4j, geom) - ds_resolvent(d, 1 + 1e-4j, geom)
            assert abs(below - target) / scale < 1e-6
            assert abs(above - anti) / scale < 1e-6

    def test_decays_along_the_cone(self):
        near = ds_resolvent(3, 1 - 0.5j, DsPairGeometry.from_invariants(5.0, t=1.0))
        far = ds_resolvent(3, 1 - 0.5j, DsPairGeometry.from_invariants(50.0, t=1.0))
        assert abs(far) < abs(near)

    @pytest.mark.parametrize("nu", [0.7, 1.0, 1.8])
    def test_feynman_closed_form_d3(self, nu):
        for Z in (-0.7, 0.0, 0.3, 0.8):
            phi = phi_of(Z)
            geom = DsPairGeometry.from_invariants(Z)
            denominator = 4 * math.pi * math.sinh(math.pi * nu) * math.sin(phi)
            expected = 1j * math.cosh(nu * phi) / denominator
            assert rel(op_feynman_ds(3, nu, K.F, geom), expected) < 1e-9
            euclidean = euclidean_kernel(3, nu, K.F, geom)
            assert rel(op_feynman_ds(3, nu, K.F, geom) - euclidean, 1j * math.exp(-nu * phi) / denominator) < 1e-8

    def test_differs_from_euclidean(self):
        geom = DsPairGeometry.from_invariants(0.5)
        difference = op_feynman_ds(3, 1.0, K.F, geom) - euclidean_kernel(3, 1.0, K.F, geom)
        phi = phi_of(0.5)
        expected = math.exp(-phi) / (4 * math.pi * math.sinh(math.pi) * math.sin(phi))
        assert expected > 9e-4
        assert abs(difference) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("d", [3, 5])
    def test_odd_dimension_special(self, d):
        worst = 0.0
        for pair in PAIRS[DsRegion.S] + PAIRS[DsRegion.A_PLUS] + PAIRS[DsRegion.A_MINUS]:
            geom = ds_pair(*pair)
            F = op_feynman_ds(d, 1.0, K.F, geom)
            Fbar = op_feynman_ds(d, 1.0, K.FBAR, geom)
            worst = max(worst, abs(F + Fbar) / max(abs(F), 1e-12))
        assert worst < 1e-9
        far = DsPairGeometry.from_invariants(-2.0, tA=-1.0)
        assert abs(op_feynman_ds(d, 1.0, K.F, far) + op_feynman_ds(d, 1.0, K.FBAR, far)) < 1e-12

    def test_even_dimension_not_special(self):
        geom = DsPairGeometry.from_invariants(-2.0, tA=-1.0)
        total = op_feynman_ds(4, 1.0, K.F, geom) + op_feynman_ds(4, 1.0, K.FBAR, geom)
        assert abs(total) > 1e-4

    def test_forwarded_from_euclidean_kernel(self):
        geom = ds_pair(0.3, 0.0, 1.2)
        assert euclidean_kernel(4, 1.0, K.OP_F, geom) == op_feynman_ds(4, 1.0, K.F, geom)

    def test_requires_positive_nu(self):
        with pytest.raises(DomainError):
            op_feynman_ds(3, 1 - 0.1j, K.F, ds_pair(0.3, 0.0, 1.2))
        with pytest.raises(KgpropValidationError):
            op_feynman_ds(3, 1.0, K.PJ, ds_pair(0.3, 0.0, 1.2))


class TestVacua:
    """Tests for alpha-vacua, two-state kernels and the in/out vacua."""

    STATES = [(0.3, 0.3), (0.2 + 0.1j, -0.4j), (-0.5, 0.25 + 0.25j), (0.6j, 0.1)]

    def test_parameter_bound(self):
        with pytest.raises(DomainError, match=r"\|alpha\| < 1"):
            VacuumParameter(1.0)
        assert VacuumParameter.from_dict({"re": 0.1, "im": -0.2}).alpha == 0.1 - 0.2j
        assert VacuumParameter.from_dict([0.3, 0.0]).alpha == 0.3

    @pytest.mark.parametrize("kind", [K.POS, K.NEG, K.F, K.FBAR])
    def test_euclidean_reduction(self, kind):
        zero = VacuumParameter(0)
        for pair in ALL_PAIRS:
            geom = ds_pair(*pair)
            expected = euclidean_kernel(4, 1.2, kind, geom)
            value = alpha_twostate_kernel(4, 1.2, zero, zero, kind, geom)
            assert abs(value - expected) < 1e-12 * max(abs(expected), 1.0)

    @pytest.mark.parametrize("alpha, beta", STATES)
    @pytest.mark.parametrize("d", [3, 4])
    def test_identities(self, d, alpha, beta):
        a, b = VacuumParameter(alpha), VacuumParameter(beta)
        for pair in ALL_PAIRS:
            residuals = ds_identity_residuals(d, 0.9, ds_pair(*pair), a, b)
            assert max(residuals.values()) < 1e-8

    def test_single_state(self):
        a = VacuumParameter(0.3 - 0.2j)
        geom = ds_pair(1.0, 0.0, 2.8)
        for kind in (K.POS, K.F):
            assert alpha_vacuum_kernel(3, 1.0, a, kind, geom) == alpha_twostate_kernel(3, 1.0, a, a, kind, geom)

    def test_classical_kinds_do_not_depend_on_the_state(self):
        a, b = VacuumParameter(0.4), VacuumParameter(-0.2j)
        geom = ds_pair(1.5, 0.0, 0.3)
        assert alpha_twostate_kernel(3, 1.0, a, b, K.RET, geom) == euclidean_kernel(3, 1.0, K.RET, geom)

    def test_overlap_zero(self):
        a = VacuumParameter(1 - 1e-12)
        with pytest.raises(OverlapZero):
            alpha_twostate_kernel(3, 1.0, a, a, K.F, ds_pair(0.3, 0.0, 1.2))

    @pytest.mark.parametrize("alpha, beta", STATES)
    def test_mode_coefficients(self, alpha, beta):
        coefficients = vacuum_coefficients(VacuumParameter(alpha), VacuumParameter(beta))
        report = bogoliubov_mode_coeffs([coefficients.n], [[coefficients.m]])
        assert report.is_valid(1e-12)

    def test_inout_odd(self):
        minus, plus = inout_vacua(3, 1.0)
        assert minus.alpha == plus.alpha
        assert minus.alpha.real == pytest.approx(0.0432139, rel=1e-6)
        assert inout_vacua(5, 1.0)[0].alpha.real == pytest.approx(-math.exp(-math.pi))

    def test_inout_even(self):
        minus, plus = inout_vacua(4, 1.0)
        assert minus.alpha == pytest.approx(1j * math.exp(-math.pi))
        assert plus.alpha == pytest.approx(-1j * math.exp(-math.pi))
        assert inout_vacua(6, 1.0)[0].alpha == pytest.approx(-1j * math.exp(-math.pi))

    @pytest.mark.parametrize("nu", [0.6, 1.0])
    def test_inout_feynman_odd(self, nu):
        minus, plus = inout_vacua(3, nu)
        for pair in PAIRS[DsRegion.S]:
            geom = ds_pair(*pair)
            value = alpha_twostate_kernel(3, nu, plus, minus, K.F, geom)
            assert rel(value, op_feynman_ds(3, nu, K.F, geom)) < 1e-9

    @pytest.mark.parametrize("d", [4, 6])
    @pytest.mark.parametrize("nu", [0.6, 1.0])
    def test_inout_feynman_even(self, d, nu):
        minus, plus = inout_vacua(d, nu)
        for pair in PAIRS[DsRegion.A_PLUS] + PAIRS[DsRegion.A_MINUS]:
            geom = ds_pair(*pair)
            F = alpha_twostate_kernel(d, nu, plus, minus, K.F, geom)
            assert rel(F, op_feynman_ds(d, nu, K.F, geom)) < 1e-9
            Fbar = alpha_twostate_kernel(d, nu, minus, plus, K.FBAR, geom)
            assert rel(Fbar, op_feynman_ds(d, nu, K.FBAR, geom)) < 1e-9

    def test_inout_pair_even(self):
        minus, plus = inout_vacua(4, 1.0)
        geom = ds_pair(1.0, 0.0, 2.8)
        residuals = ds_identity_residuals(4, 1.0, geom, plus, minus)
        assert max(residuals.values()) < 1e-8
        mixed = alpha_twostate_kernel(4, 1.0, plus, minus, K.F, geom)
        assert abs(mixed - alpha_vacuum_kernel(4, 1.0, minus, K.F, geom)) > 1e-8


class TestScarfModes:
    """Tests for the Scarf index of the spherical modes."""

    @pytest.mark.parametrize(
        "d, l, index, reflectionless",
        [(3, 0, 0.5, True), (5, 1, 2.5, True), (4, 0, 1.0, False), (2, 3, 3.0, False), (7, 2, 4.5, True)],
    )
    def test_map(self, d, l, index, reflectionless):
        assert scarf_mode_map(d, l) == (pytest.approx(index), reflectionless)

    def test_rejects_negative_l(self):
        with pytest.raises(KgpropValidationError):
            scarf_mode_map(3, -1)


class TestDalembertian:
    """The kernels solve the Klein-Gordon equation off the light cone."""

    POINTS = [(0.3, 1.2), (1.5, 0.3), (1.0, 2.8), (-0.7, 1.9)]

    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("kind", [K.POS, K.NEG, K.F])
    def test_residual(self, d, kind):
        for tau, theta in self.POINTS:
            result = ds_dalembertian_residual(d, 1.1, kind, tau, theta)
            assert result.fine < 1e-3
            assert result.order > 1.5

    @pytest.mark.slow
    def test_operator_feynman_residual(self):
        for tau, theta in self.POINTS:
            result = ds_dalembertian_residual(4, 1.1, K.OP_F, tau, theta)
            assert result.fine < 1e-3


class TestSampling:
    """Grid sampling is order preserving with several workers."""

    def test_threads(self):
        geoms = [ds_pair(*pair) for pair in ALL_PAIRS]
        config = ConfigBuilder().with_threads(4).build()

        def value(geom):
            return euclidean_kernel(3, 1.0, K.F, geom)

        assert sample(value, geoms, config) == [value(g) for g in geoms]
