"""
Tests for pairs of involutions on finite-dimensional Krein spaces.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import linalg

from kgprop.errors import (
    DomainError,
    KgpropValidationError,
    NotComplementary,
    NotInvolution,
    OnePlusKSingular,
    PreconditionFailed,
)
from kgprop.krein import (
    admissible_check,
    alpha_vacuum_coefficients,
    angular_operators,
    bogoliubov_mode_coeffs,
    is_maximal,
    k_positivity,
    kato_projections,
    lemma_bound_check,
    q_adjoint,
    random_admissible_pair,
    uniform_positivity,
    upsilon,
)
from kgprop.models.krein import Involution, KreinSpaceFD

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def boost_pair(b):
    """S1 = J and its conjugate by a boost of rapidity b on C^{1,1}."""
    space = KreinSpaceFD.canonical(1, 1)
    ch, sh = math.cosh(2 * b), math.sinh(2 * b)
    s1 = Involution(np.diag([1.0, -1.0]))
    s2 = Involution(np.array([[ch, -sh], [sh, -ch]]))
    return space, s1, s2


def norm(a):
    return float(np.linalg.norm(a, 2))


def hermitian_involution(rng, plus, minus):
    n = plus + minus
    v, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    s = v @ np.diag([1.0] * plus + [-1.0] * minus) @ v.conj().T
    return v, 0.5 * (s + s.conj().T)


def tilted_projection(rng, v, plus, eps):
    """Orthogonal projection onto a small tilt of the +1 eigenspace towards the -1 eigenspace."""
    n = v.shape[0]
    x = rng.standard_normal((n - plus, plus)) + 1j * rng.standard_normal((n - plus, plus))
    x /= norm(x)
    w = linalg.orth(v[:, :plus] + eps * v[:, plus:] @ x)
    return w, w @ w.conj().T


class TestKreinSpace:
    """Tests for the Krein space and involution types."""

    def test_canonical_signature(self):
        space = KreinSpaceFD.canonical(2, 3)
        assert space.n == 5
        assert space.signature == (2, 3)

    def test_non_hermitian_rejected(self):
        with pytest.raises(KgpropValidationError):
            KreinSpaceFD(np.array([[1.0, 2.0], [0.0, -1.0]]))

    def test_degenerate_rejected(self):
        with pytest.raises(KgpropValidationError):
            KreinSpaceFD(np.diag([1.0, 0.0]))

    def test_not_involution(self):
        with pytest.raises(NotInvolution) as exc_info:
            Involution(np.diag([1.0, 2.0]))
        assert exc_info.value.residual == pytest.approx(3.0)
        assert exc_info.value.is_validation

    def test_projections(self):
        s = Involution(np.diag([1.0, -1.0, 1.0]))
        assert np.allclose(s.plus, np.diag([1.0, 0.0, 1.0]))
        assert np.allclose(s.minus, np.diag([0.0, 1.0, 0.0]))
        assert s.rank_plus == 2

    def test_from_subspaces(self):
        s = Involution.from_subspaces([[1.0], [1.0]], [[1.0], [-1.0]])
        assert np.allclose(s.S, SWAP)


class TestAdmissibleCheck:
    """Tests for admissibility of involutions."""

    def test_swap_form_with_itself(self):
        report = admissible_check(KreinSpaceFD(SWAP), SWAP)
        assert report.admissible
        assert report.witness == pytest.approx(1.0)

    def test_swap_form_with_diagonal(self):
        report = admissible_check(KreinSpaceFD(SWAP), np.diag([1.0, -1.0]))
        assert not report.admissible
        assert report.witness == pytest.approx(0.0, abs=1e-14)

    def test_random_conjugates_are_admissible(self):
        rng = np.random.default_rng(3)
        for n in (2, 4, 6):
            space, s1, s2 = random_admissible_pair(n, rng=rng)
            assert admissible_check(space, s1)
            assert admissible_check(space, s2)

    def test_negated_is_not_admissible(self):
        space, s1, _ = random_admissible_pair(4, rng=np.random.default_rng(5))
        report = admissible_check(space, s1.negated())
        assert not report.admissible
        assert report.witness < 0

    def test_plain_matrix_must_be_involution(self):
        with pytest.raises(NotInvolution):
            admissible_check(KreinSpaceFD(SWAP), np.eye(2) * 2.0)


class TestUpsilon:
    """Tests for Upsilon = (S1 + S2)^2 / 4."""

    def test_equal_involutions(self):
        _, s1, _ = boost_pair(0.4)
        assert np.allclose(upsilon(s1, s1), np.eye(2))

    def test_opposite_involutions(self):
        _, s1, _ = boost_pair(0.4)
        assert np.allclose(upsilon(s1, s1.negated()), 0.0)

    def test_boost(self):
        _, s1, s2 = boost_pair(0.7)
        assert np.allclose(upsilon(s1, s2), math.cosh(0.7) ** 2 * np.eye(2))

    def test_commutes_with_projections(self):
        _, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(11))
        ups = upsilon(s1, s2)
        for p in (s1.plus, s1.minus, s2.plus, s2.minus):
            assert norm(ups @ p - p @ ups) < 1e-10 * norm(ups)

    def test_dimension_mismatch(self):
        with pytest.raises(KgpropValidationError):
            upsilon(np.eye(2), np.eye(3))


class TestKatoProjections:
    """Tests for the complementary projection quad."""

    def test_equal_involutions(self):
        _, s1, _ = boost_pair(0.3)
        quad = kato_projections(s1, s1)
        assert np.allclose(quad.L12p, s1.plus)
        assert np.allclose(quad.L21m, s1.minus)

    def test_boost_quad(self):
        b = 0.6
        _, s1, s2 = boost_pair(b)
        quad = kato_projections(s1, s2)
        assert quad.max_residual < 1e-12
        assert np.allclose(quad.L12p, [[1.0, -math.tanh(b)], [0.0, 0.0]])
        assert np.allclose(quad.L21p, [[1.0, 0.0], [math.tanh(b), 0.0]])

    def test_range_and_kernel(self):
        _, s1, s2 = random_admissible_pair(5, rng=np.random.default_rng(2))
        quad = kato_projections(s1, s2)
        assert norm(s1.minus @ quad.L12p) < 1e-9
        assert norm(quad.L12p @ s2.minus) < 1e-9
        assert norm(s2.minus @ quad.L21p) < 1e-9
        assert norm(quad.L21p @ s1.minus) < 1e-9

    def test_opposite_involutions_not_complementary(self):
        _, s1, _ = boost_pair(0.2)
        with pytest.raises(NotComplementary) as exc_info:
            kato_projections(s1, s1.negated())
        assert exc_info.value.is_numerical

    def test_matches_block_formulas(self):
        space, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(8))
        quad = kato_projections(s1, s2)
        pair = angular_operators(s1, s2, space)
        for name, block in pair.quad_blocks().items():
            assert norm(pair.to_full(block) - getattr(quad, name)) < 1e-9

    def test_complementary_subspaces(self):
        """Lambda12+ is the projection onto ran P1+ along ran P2-."""
        rng = np.random.default_rng(21)
        _, s1, s2 = random_admissible_pair(7, rng=rng)
        quad = kato_projections(s1, s2)
        direct = Involution.from_subspaces(linalg.orth(s1.plus), linalg.orth(s2.minus))
        assert norm(direct.plus - quad.L12p) < 1e-9


class TestAngularOperators:
    """Tests for the angular operators c, d."""

    def test_equal_involutions(self):
        space, s1, _ = boost_pair(0.3)
        pair = angular_operators(s1, s1, space)
        assert pair.c_norm == pytest.approx(0.0, abs=1e-14)
        assert pair.d_norm == pytest.approx(0.0, abs=1e-14)

    def test_boost(self):
        b = 0.9
        space, s1, s2 = boost_pair(b)
        pair = angular_operators(s1, s2, space)
        assert pair.c_norm == pytest.approx(math.tanh(b), rel=1e-12)
        assert pair.d_norm == pytest.approx(math.tanh(b), rel=1e-12)
        assert pair.reconstruction_residual < 1e-12

    def test_upsilon_block(self):
        space, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(4))
        pair = angular_operators(s1, s2, space)
        assert norm(pair.to_full(pair.upsilon_block()) - upsilon(s1, s2)) < 1e-9

    def test_reconstructed_projections(self):
        space, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(6))
        pair = angular_operators(s1, s2, space)
        assert norm(pair.to_full(pair.p2_plus_block()) - s2.plus) < 1e-9
        assert norm(pair.to_full(pair.p2_minus_block()) - s2.minus) < 1e-9
        assert norm(pair.to_full(pair.s2_block()) - s2.S) < 1e-9 * norm(s2.S)

    def test_one_plus_k_singular(self):
        _, s1, _ = boost_pair(0.5)
        with pytest.raises(OnePlusKSingular):
            angular_operators(s1, s1.negated())


class TestQAdjoint:
    """Tests for the adjoint with respect to the Krein form."""

    def test_identity(self):
        space, s1, _ = random_admissible_pair(4, rng=np.random.default_rng(1))
        assert np.allclose(q_adjoint(space, s1, np.eye(4)), np.eye(4))

    def test_defining_identity(self):
        rng = np.random.default_rng(9)
        space, s1, _ = random_admissible_pair(5, rng=rng)
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        adj = q_adjoint(space, s1, a)
        for i in range(5):
            for j in range(5):
                v, w = np.eye(5)[:, i], np.eye(5)[:, j]
                assert space.form(adj @ v, w) == pytest.approx(space.form(v, a @ w), abs=1e-10)

    def test_twice_is_identity(self):
        rng = np.random.default_rng(10)
        space, s1, _ = random_admissible_pair(5, rng=rng)
        a = rng.standard_normal((5, 5))
        assert np.allclose(q_adjoint(space, s1, q_adjoint(space, s1, a)), a)

    def test_projection_adjoints(self):
        space, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(12))
        quad = kato_projections(s1, s2)
        assert norm(q_adjoint(space, s1, quad.L12p) - quad.L21p) < 1e-9
        assert norm(q_adjoint(space, s1, quad.L12m) - quad.L21m) < 1e-9

    def test_inadmissible_reference(self):
        with pytest.raises(PreconditionFailed):
            q_adjoint(KreinSpaceFD(SWAP), np.diag([1.0, -1.0]), np.eye(2))


class TestLemmaBound:
    """Tests for the inverse bound of S(1 - P) + PS."""

    def test_aligned(self):
        rng = np.random.default_rng(0)
        _, s = hermitian_involution(rng, 2, 2)
        p = 0.5 * (np.eye(4) + s)
        p = 0.5 * (p + p.conj().T)
        report = lemma_bound_check(p, s, 1.0)
        assert report.bound_ok
        assert report.inv_norm == pytest.approx(1.0, rel=1e-10)
        assert report.bound == 1.0

    def test_random_instance(self):
        rng = np.random.default_rng(14)
        v, s = hermitian_involution(rng, 3, 3)
        w, p = tilted_projection(rng, v, 3, 0.3)
        gap = float(np.linalg.eigvalsh(w.conj().T @ s @ w)[0])
        assert 0 < gap < 1
        report = lemma_bound_check(p, s, gap * (1 - 1e-9))
        assert report.bound_ok
        assert report.inv_norm <= report.bound

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(15)
        v, s = hermitian_involution(rng, 3, 3)
        w, p = tilted_projection(rng, v, 3, 0.5)
        gap = float(np.linalg.eigvalsh(w.conj().T @ s @ w)[0])
        bounds = []
        for frac in (0.25, 0.5, 0.999):
            report = lemma_bound_check(p, s, gap * frac)
            assert report.bound_ok
            bounds.append(report.bound)
        assert bounds[0] > bounds[1] > bounds[2]
        with pytest.raises(PreconditionFailed):
            lemma_bound_check(p, s, min(1.0, gap * 1.01))

    def test_alpha_range(self):
        with pytest.raises(PreconditionFailed):
            lemma_bound_check(np.eye(2), np.eye(2), 0.0)

    def test_non_orthogonal_projection(self):
        with pytest.raises(PreconditionFailed):
            lemma_bound_check(np.array([[1.0, 1.0], [0.0, 0.0]]), np.diag([1.0, -1.0]), 0.5)


class TestBogoliubov:
    """Tests for pseudounitarity of mode transformations."""

    def test_identity(self):
        report = bogoliubov_mode_coeffs(np.ones(4), np.zeros((4, 4)))
        assert report.max_residual == 0.0
        assert report.is_valid()

    def test_diagonal(self):
        r = np.array([0.1, 0.7, 1.3])
        n = np.cosh(r) * np.exp(1j * np.array([0.2, -1.0, 2.5]))
        m = np.sinh(r) * np.exp(1j * np.array([1.1, 0.4, -0.3]))
        assert bogoliubov_mode_coeffs(n, np.diag(m)).is_valid(1e-12)

    def test_wrong_normalization(self):
        report = bogoliubov_mode_coeffs(np.array([1.5, 1.5]), np.diag([0.5, 0.5]))
        assert not report.is_valid()
        assert report.normalization == pytest.approx(1.0)

    def test_shape_mismatch(self):
        with pytest.raises(KgpropValidationError):
            bogoliubov_mode_coeffs(np.ones(3), np.zeros((2, 2)))

    @pytest.mark.parametrize("alpha,beta", [(0.3, -0.2), (0.5j, 0.4 - 0.1j), (-0.9, 0.95)])
    def test_alpha_vacua(self, alpha, beta):
        coeffs = alpha_vacuum_coefficients(alpha, beta)
        assert coeffs.pseudounitarity_residual < 1e-12
        modes = 5
        report = bogoliubov_mode_coeffs(np.full(modes, coeffs.n), coeffs.m * np.eye(modes))
        assert report.is_valid(1e-10)

    def test_same_vacuum(self):
        coeffs = alpha_vacuum_coefficients(0.4 + 0.2j, 0.4 + 0.2j)
        assert coeffs.n == pytest.approx(1.0)
        assert coeffs.m == pytest.approx(0.0)

    def test_vacuum_domain(self):
        with pytest.raises(DomainError):
            alpha_vacuum_coefficients(1.0, 0.0)


class TestPositivity:
    """Tests for positivity of K and uniform definiteness of subspaces."""

    def test_k_positive(self):
        space, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(17))
        assert k_positivity(space, s1, s2) > 0

    def test_own_subspace_constant(self):
        space, s1, _ = random_admissible_pair(5, rng=np.random.default_rng(18))
        plus = linalg.orth(s1.plus)
        assert uniform_positivity(space, plus, s1) == pytest.approx(1.0, rel=1e-9)
        assert is_maximal(space, plus)

    def test_other_reference(self):
        space, s1, s2 = random_admissible_pair(6, rng=np.random.default_rng(19))
        plus, minus = linalg.orth(s1.plus), linalg.orth(s1.minus)
        assert 0 < uniform_positivity(space, plus, s2) <= 1.0 + 1e-12
        assert 0 < uniform_positivity(space, minus, s2, sign=-1) <= 1.0 + 1e-12
        assert is_maximal(space, minus, sign=-1)

    def test_indefinite_subspace(self):
        space, s1, _ = random_admissible_pair(4, rng=np.random.default_rng(20))
        assert uniform_positivity(space, np.eye(4), s1) < 0


@pytest.mark.slow
class TestRandomPairs:
    """Randomized checks over admissible pairs."""

    @settings(max_examples=100)
    @given(n=st.integers(min_value=2, max_value=8), seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_pair_identities(self, n, seed):
        space, s1, s2 = random_admissible_pair(n, rng=np.random.default_rng(seed))
        scale = norm(s1.S) * norm(s2.S)

        quad = kato_projections(s1, s2)
        assert quad.max_residual < 1e-8 * scale**2

        factored = (s1.plus + s2.minus) @ (s2.plus + s1.minus)
        assert norm(upsilon(s1, s2) - factored) < 1e-9 * scale

        assert k_positivity(space, s1, s2) > 0

        pair = angular_operators(s1, s2, space)
        assert pair.c_norm < 1.0
        assert pair.d_norm < 1.0
        assert pair.reconstruction_residual < 1e-9 * scale
        assert norm(pair.to_full(pair.s2_block()) - s2.S) < 1e-8 * scale

    @given(n=st.integers(min_value=2, max_value=8), seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_subspaces_complementary(self, n, seed):
        space, s1, s2 = random_admissible_pair(n, rng=np.random.default_rng(seed))
        plus, minus = linalg.orth(s1.plus), linalg.orth(s2.minus)
        assert uniform_positivity(space, plus, s1) > 0
        assert uniform_positivity(space, minus, s2, sign=-1) > 0
        assert uniform_positivity(space, minus, s1, sign=-1) > 0
        assert is_maximal(space, plus) and is_maximal(space, minus, sign=-1)
        quad = kato_projections(s1, s2)
        direct = Involution.from_subspaces(plus, minus)
        assert norm(direct.plus - quad.L12p) < 1e-8 * norm(quad.L12p)
