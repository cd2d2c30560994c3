"""
Tests for the anti-de Sitter propagators on the universal cover.
"""

import cmath
import math

import pytest

from kgprop.errors import ChartBoundary, DomainError, KgpropValidationError
from kgprop.models.antidesitter import AdsPoint, PoschlTellerRegime
from kgprop.models.common import PropagatorKind
from kgprop.spacetimes import (
    ads_classical,
    ads_geometry,
    ads_identity_residuals,
    ads_kernel,
    ads_kg_residual,
    ads_nu,
    ads_pair,
    ads_pos_neg,
    ads_resolvent,
    hyperbolic_kernel,
    op_feynman_ads,
    pt_mode_analysis,
)

K = PropagatorKind

# (delta, u) with x' at the origin, one pair per region
REGION_PAIRS = {
    0: (0.2, 0.8),
    1: (1.5, 0.3),
    -1: (-1.5, 0.3),
    2: (math.pi, 0.3),
    -2: (-math.pi, 0.3),
    3: (1.5 * math.pi, 0.3),
    -3: (-1.5 * math.pi, 0.3),
}


def rel(x, y):
    return abs(x - y) / max(abs(y), 1e-300)


class TestGeometry:
    """Tests for regions, charts and the signs s, s_tilde."""

    def test_coincidence_is_null(self):
        geom = ads_pair(0.0, 0.0)
        assert geom.Z == pytest.approx(-1.0)
        assert geom.null_separated

    def test_region_zero(self):
        geom = ads_pair(0.0, 0.3)
        assert geom.Z == pytest.approx(-1 / math.cos(0.3))
        assert (geom.region, geom.n, geom.s, geom.s_tilde) == (0, 0, 0, 0)

    def test_region_two(self):
        geom = ads_pair(math.pi, 0.3)
        assert geom.Z == pytest.approx(1 / math.cos(0.3))
        assert (geom.region, geom.n) == (2, 1)

    @pytest.mark.parametrize(
        "delta, region, n, s, s_tilde",
        [
            (1.5, 1, 0, 1, 1),
            (-1.5, -1, -1, 1, -1),
            (1.5 * math.pi, 3, 1, -1, -1),
            (-1.5 * math.pi, -3, -2, -1, 1),
            (2.5 * math.pi, 5, 2, 1, 1),
        ],
    )
    def test_odd_regions(self, delta, region, n, s, s_tilde):
        geom = ads_pair(delta, 0.3)
        assert (geom.region, geom.n, geom.s, geom.s_tilde) == (region, n, s, s_tilde)
        assert geom.s == (1 if math.sin(abs(delta)) > 0 else -1)
        assert geom.s_tilde == (1 if math.sin(delta) > 0 else -1)

    @pytest.mark.parametrize("region", sorted(REGION_PAIRS))
    def test_regions(self, region):
        assert ads_pair(*REGION_PAIRS[region]).region == region

    @pytest.mark.parametrize("region", sorted(REGION_PAIRS))
    def test_swapping_negates_region(self, region):
        delta, u = REGION_PAIRS[region]
        assert ads_pair(0.0, 0.0, delta, u).region == -region

    def test_off_origin_pair(self):
        geom = ads_pair(0.5, 0.7, -0.2, 0.4, theta=1.1)
        expected = (-math.cos(0.7) + math.sin(0.7) * math.sin(0.4) * math.cos(1.1)) / (math.cos(0.7) * math.cos(0.4))
        assert geom.Z == pytest.approx(expected)
        assert geom.delta == pytest.approx(0.7)

    def test_two_dimensional_points(self):
        x = AdsPoint.zonal(0.0, 0.3, math.pi, 2)
        y = AdsPoint.zonal(0.0, 0.3, 0.0, 2)
        assert x.omega == (-1.0,)
        assert x.d == 2
        s2, c2 = math.sin(0.3) ** 2, math.cos(0.3) ** 2
        assert ads_geometry(x, y).Z == pytest.approx(-(1 + s2) / c2)

    def test_points_match_pair(self):
        x = AdsPoint.zonal(1.2, 0.5, 0.7, 4)
        y = AdsPoint.zonal(-0.3, 0.2, 0.0, 4)
        geom = ads_geometry(x, y)
        assert geom.Z == pytest.approx(ads_pair(1.2, 0.5, -0.3, 0.2, theta=0.7).Z)

    def test_boundary_is_excluded(self):
        with pytest.raises(DomainError):
            AdsPoint(0.0, math.pi / 2)
        with pytest.raises(DomainError):
            ads_pair(0.0, 2.0)

    def test_dimension_mismatch(self):
        with pytest.raises(KgpropValidationError):
            ads_geometry(AdsPoint.zonal(0, 0.1, 0, 3), AdsPoint.zonal(0, 0.1, 0, 4))


class TestHyperbolicKernel:
    """The Euclidean section is the hyperbolic space."""

    @pytest.mark.parametrize("nu", [0.5, 1.0, 2.4])
    def test_closed_form_d3(self, nu):
        for r in (0.3, 1.0, 2.5):
            expected = math.exp(-nu * r) / (4 * math.pi * math.sinh(r))
            assert rel(hyperbolic_kernel(3, nu, -math.cosh(r)), expected) < 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            hyperbolic_kernel(3, 1.0, -0.5)
        with pytest.raises(DomainError):
            hyperbolic_kernel(3, -1.0, -2.0)


class TestResolvent:
    """Tests for the resolvent on the universal cover."""

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_wick_rotation_on_region_zero(self, d):
        geom = ads_pair(0.2, 0.8)
        below, above = 1.0 - 0.3j, 1.0 + 0.3j
        assert ads_resolvent(d, below, geom) == pytest.approx(1j * hyperbolic_kernel(d, below, geom.Z), rel=1e-12)
        assert ads_resolvent(d, above, geom) == pytest.approx(-1j * hyperbolic_kernel(d, above, geom.Z), rel=1e-12)

    @pytest.mark.parametrize("d", [3, 4])
    @pytest.mark.parametrize("imag", [-0.3, 0.3])
    @pytest.mark.parametrize("n", [-3, -2, -1, 0, 1, 2, 3])
    def test_charts_agree_on_overlaps(self, d, imag, n):
        nu = complex(1.1, imag)
        geom = ads_pair(n * math.pi + 1.2, 0.3)
        assert geom.region == 2 * n + 1
        lower = ads_resolvent(d, nu, geom, chart=n)
        upper = ads_resolvent(d, nu, geom, chart=n + 1)
        assert rel(upper, lower) < 1e-9

    @pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
    def test_pos_neg_charts_agree(self, n):
        geom = ads_pair(n * math.pi + 0.9, 0.4)
        for kind in (K.POS, K.NEG):
            lower = ads_pos_neg(4, 1.3, kind, geom, chart=n)
            upper = ads_pos_neg(4, 1.3, kind, geom, chart=n + 1)
            assert rel(upper, lower) < 1e-9

    @pytest.mark.parametrize("imag", [-0.3, 0.3])
    def test_decay_in_time(self, imag):
        nu = complex(1.0, imag)
        first = ads_resolvent(3, nu, ads_pair(0.0, 0.3))
        later = ads_resolvent(3, nu, ads_pair(5 * math.pi, 0.3))
        assert abs(later) / abs(first) == pytest.approx(math.exp(-5 * math.pi * 0.3), rel=1e-8)

    def test_rejects_real_nu(self):
        with pytest.raises(DomainError):
            ads_resolvent(3, 1.0, ads_pair(0.2, 0.8))
        with pytest.raises(DomainError):
            ads_resolvent(3, -1.0 + 0.2j, ads_pair(0.2, 0.8))

    def test_chart_boundary(self):
        with pytest.raises(ChartBoundary):
            ads_resolvent(3, 1 - 0.2j, ads_pair(1.5, 0.3), chart=3)
        with pytest.raises(ChartBoundary):
            ads_resolvent(3, 1 - 0.2j, ads_pair(0.0, 0.0))

    @pytest.mark.parametrize("d", [3, 4])
    def test_limit_is_feynman(self, d):
        for delta, u in REGION_PAIRS.values():
            geom = ads_pair(delta, u)
            target = op_feynman_ads(d, 1.2, K.F, geom)
            anti = op_feynman_ads(d, 1.2, K.FBAR, geom)
            scale = max(abs(target), abs(anti), 1e-3)
            below = 2 * ads_resolvent(d, 1.2 - 0.5e-4j, geom) - ads_resolvent(d, 1.2 - 1e-4j, geom)
            above = 2 * ads_resolvent(d, 1.2 + 0.5e-4j, geom) - ads_resolvent(d, 1.2 + 1e-4j, geom)
            assert abs(below - target) / scale < 1e-6
            assert abs(above - anti) / scale < 1e-6


class TestKleinGordon:
    """Finite-difference residuals with x' at the origin."""

    POINTS = [(0.4, 0.8), (1.5, 0.3), (3.0, 0.5), (-2.0, 0.6)]

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_resolvent(self, d):
        for tau, u in self.POINTS:
            result = ads_kg_residual(d, 1.1 - 0.3j, tau, u)
            assert result.fine < 1e-3
            assert result.order > 1.5

    @pytest.mark.parametrize("kind", [K.F, K.POS, K.NEG])
    def test_kernels(self, kind):
        for tau, u in self.POINTS:
            result = ads_kg_residual(3, 1.2, tau, u, kind=kind)
            assert result.fine < 1e-3
            assert result.order > 1.5

    def test_rejects_bad_step(self):
        with pytest.raises(KgpropValidationError):
            ads_kg_residual(3, 1.2, 0.4, 0.8, h=0.0)


class TestOperatorKernels:
    """Tests for the state defined by the operator-theoretic Feynman kernel."""

    def test_nu_from_mass(self):
        assert ads_nu(4, 0.0) == 1.5
        assert ads_nu(3, -0.75) == pytest.approx(0.5)
        assert ads_nu(3, -2.0).imag == pytest.approx(1.0)

    @pytest.mark.parametrize("d, nu", [(3, 1.2), (4, 1.5), (5, 0.7)])
    def test_commutator_vanishes_near_the_diagonal(self, d, nu):
        for i in range(50):
            delta = -0.6 + 1.2 * i / 49
            geom = ads_pair(delta, 0.9)
            assert geom.region == 0
            total = op_feynman_ads(d, nu, K.F, geom) + op_feynman_ads(d, nu, K.FBAR, geom)
            assert abs(total) < 1e-12 * abs(op_feynman_ads(d, nu, K.F, geom))
            assert ads_kernel(d, nu, K.PJ, geom) == 0

    def test_causal_support(self):
        geom = ads_pair(math.pi, 0.3)
        assert abs(ads_classical(3, 1.2, K.RET, geom)) > 1e-4
        assert ads_classical(3, 1.2, K.ADV, geom) == 0
        past = ads_pair(-math.pi, 0.3)
        assert ads_classical(3, 1.2, K.RET, past) == 0
        assert abs(ads_classical(3, 1.2, K.ADV, past)) > 1e-4

    def test_retarded_value_on_region_two(self):
        geom = ads_pair(math.pi, 0.3)
        F = op_feynman_ads(3, 1.2, K.F, geom)
        phase = cmath.exp(-1j * 2.2 * math.pi)
        # both boundary values share **Z**(Z) on V_2
        expected = F * (1 - phase.conjugate() / phase)
        assert ads_classical(3, 1.2, K.RET, geom) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("d", [3, 4])
    @pytest.mark.parametrize("region", sorted(REGION_PAIRS))
    def test_identities(self, d, region):
        residuals = ads_identity_residuals(d, 1.2, ads_pair(*REGION_PAIRS[region]))
        assert max(residuals.values()) < 1e-10

    @pytest.mark.parametrize("region", sorted(REGION_PAIRS))
    def test_frequency_parts_are_conjugate(self, region):
        geom = ads_pair(*REGION_PAIRS[region])
        pos = ads_kernel(4, 1.3, K.POS, geom)
        neg = ads_kernel(4, 1.3, K.NEG, geom)
        assert abs(pos - neg.conjugate()) < 1e-12 * abs(pos)

    @pytest.mark.parametrize("delta, u", [(0.2, 0.8), (1.5, 0.3), (math.pi, 0.3), (4.0, 0.5), (2 * math.pi + 1.0, 0.2)])
    def test_swapping_the_pair(self, delta, u):
        forward = ads_pair(delta, u)
        backward = ads_pair(-delta, u)
        pos = ads_pos_neg(4, 1.3, K.POS, forward)
        neg = ads_pos_neg(4, 1.3, K.NEG, backward, chart=-forward.n)
        assert rel(neg, pos) < 1e-12

    def test_requires_real_nu(self):
        with pytest.raises(DomainError):
            op_feynman_ads(3, 1.0 - 0.1j, K.F, ads_pair(0.2, 0.8))

    @pytest.mark.parametrize("kind", [K.SYM_A, K.PJ_A])
    def test_antipodal_kinds_rejected(self, kind):
        with pytest.raises(KgpropValidationError):
            ads_kernel(3, 1.2, kind, ads_pair(0.2, 0.8))

    def test_symmetric_part(self):
        geom = ads_pair(1.5, 0.3)
        expected = ads_kernel(3, 1.2, K.POS, geom) + ads_kernel(3, 1.2, K.NEG, geom)
        assert ads_kernel(3, 1.2, K.SYM, geom) == expected


class TestPoschlTeller:
    """Tests for the radial mode classification."""

    def test_essentially_self_adjoint(self):
        report = pt_mode_analysis(4, 0, 2.0)
        assert report.alpha == pytest.approx(0.5)
        assert report.regime is PoschlTellerRegime.ESSENTIALLY_SELF_ADJOINT
        assert report.origin_artifact
        assert "polar coordinates" in report.note

    @pytest.mark.parametrize(
        "nu2, regime",
        [
            (1.0, PoschlTellerRegime.ESSENTIALLY_SELF_ADJOINT),
            (0.5, PoschlTellerRegime.FRIEDRICHS_DISTINGUISHED),
            (0.0, PoschlTellerRegime.FRIEDRICHS_DISTINGUISHED),
            (-0.5, PoschlTellerRegime.UNBOUNDED_BELOW),
        ],
    )
    def test_regimes(self, nu2, regime):
        assert pt_mode_analysis(3, 0, nu2).regime is regime

    def test_higher_modes_are_regular(self):
        report = pt_mode_analysis(5, 1, 2.0)
        assert report.alpha == pytest.approx(2.0)
        assert not report.origin_artifact
        assert report.note == ""

    def test_two_dimensions(self):
        assert pt_mode_analysis(2, 3, 1.5).alpha == pytest.approx(0.5)

    def test_potential(self):
        assert pt_mode_analysis(4, 1, 2.0).potential is not None
        assert pt_mode_analysis(4, 1, -0.5).potential is None

    def test_serialization(self):
        data = pt_mode_analysis(3, 2, 0.25).to_dict()
        assert data["regime"] == "friedrichs_distinguished"
        assert data["alpha"] == pytest.approx(2.0)

    def test_rejects_negative_l(self):
        with pytest.raises(KgpropValidationError):
            pt_mode_analysis(3, -1, 1.0)
