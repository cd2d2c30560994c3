"""
Finite-dimensional Krein spaces, involutions and the projections built from them.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from kgprop.errors import KgpropValidationError, NotInvolution

# S^2 = 1 is enforced to this tolerance when an involution is constructed
INVOLUTION_TOL = 1e-8


def _matrix(value: Any, name: str) -> np.ndarray:
    arr = np.array(value, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise KgpropValidationError(f"{name} must be a square matrix, got shape {arr.shape}", field=name)
    return arr


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True, eq=False)
class KreinSpaceFD:
    """
    C^n with the nondegenerate Hermitian form <v|Q w>.

    Attributes:
        Q: The Hermitian form matrix.
    """

    Q: np.ndarray

    def __post_init__(self) -> None:
        q = _matrix(self.Q, "Q")
        if np.linalg.norm(q - q.conj().T) > 1e-12 * max(1.0, np.linalg.norm(q)):
            raise KgpropValidationError("Q must be Hermitian", field="Q")
        sv = np.linalg.svd(q, compute_uv=False)
        if sv[-1] <= 1e-12 * sv[0]:
            raise KgpropValidationError("Q must be invertible", field="Q")
        object.__setattr__(self, "Q", hermitian_part(q))

    @classmethod
    def canonical(cls, p: int, q: int) -> "KreinSpaceFD":
        """The form diag(1_p, -1_q)."""
        if p < 0 or q < 0 or p + q == 0:
            raise KgpropValidationError("signature must be non-negative and non-empty", field="signature")
        return cls(np.diag([1.0] * p + [-1.0] * q).astype(complex))

    @property
    def n(self) -> int:
        return int(self.Q.shape[0])

    @property
    def signature(self) -> Tuple[int, int]:
        eig = np.linalg.eigvalsh(self.Q)
        return int(np.sum(eig > 0)), int(np.sum(eig < 0))

    def form(self, v: np.ndarray, w: np.ndarray) -> complex:
        """<v|Q w>, antilinear in v."""
        return complex(np.vdot(v, self.Q @ w))

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "Q_re": self.Q.real.tolist(), "Q_im": self.Q.imag.tolist()}


@dataclass(frozen=True, eq=False)
class Involution:
    """
    A matrix with S^2 = 1 and its spectral projections (1 +- S)/2.

    Attributes:
        S: The involution.
    """

    S: np.ndarray
    residual: float = field(default=0.0, init=False)

    def __post_init__(self) -> None:
        s = _matrix(self.S, "S")
        res = float(np.linalg.norm(s @ s - np.eye(s.shape[0]), 2))
        if res > INVOLUTION_TOL * max(1.0, np.linalg.norm(s, 2) ** 2):
            raise NotInvolution(f"S^2 differs from the identity by {res:.3e}", residual=res)
        object.__setattr__(self, "S", s)
        object.__setattr__(self, "residual", res)

    @classmethod
    def from_projection(cls, P: Any) -> "Involution":
        """S = 2P - 1 for an idempotent P."""
        p = _matrix(P, "P")
        return cls(2.0 * p - np.eye(p.shape[0]))

    @classmethod
    def from_subspaces(cls, plus_basis: Any, minus_basis: Any) -> "Involution":
        """
        The involution with the given +1 and -1 eigenspaces.

        Args:
            plus_basis: Columns spanning the +1 eigenspace.
            minus_basis: Columns spanning the -1 eigenspace; together with plus_basis they
                must span the whole space.
        """
        vp = np.atleast_2d(np.array(plus_basis, dtype=complex))
        vm = np.atleast_2d(np.array(minus_basis, dtype=complex))
        basis = np.hstack([vp, vm])
        if basis.shape[0] != basis.shape[1]:
            raise KgpropValidationError("subspaces must be complementary", field="basis")
        signs = np.diag([1.0] * vp.shape[1] + [-1.0] * vm.shape[1])
        return cls(basis @ signs @ np.linalg.inv(basis))

    @property
    def n(self) -> int:
        return int(self.S.shape[0])

    @property
    def plus(self) -> np.ndarray:
        return 0.5 * (np.eye(self.n) + self.S)

    @property
    def minus(self) -> np.ndarray:
        return 0.5 * (np.eye(self.n) - self.S)

    @property
    def rank_plus(self) -> int:
        return int(round(np.trace(self.plus).real))

    def negated(self) -> "Involution":
        return Involution(-self.S)


@dataclass(frozen=True)
class AdmissibilityReport:
    """
    Outcome of an admissibility check.

    Attributes:
        admissible: S preserves the form and QS is positive definite.
        witness: Smallest eigenvalue of the Hermitian part of QS.
        form_residual: Norm of S^dagger Q S - Q.
    """

    admissible: bool
    witness: float
    form_residual: float

    def __bool__(self) -> bool:
        return self.admissible

    def to_dict(self) -> Dict[str, Any]:
        return {"admissible": self.admissible, "witness": self.witness, "form_residual": self.form_residual}


@dataclass(frozen=True, eq=False)
class ProjectionQuad:
    """
    The two pairs of complementary projections of a pair of involutions S1, S2.

    Attributes:
        L12p: Projection onto ran P1+ along ran P2-.
        L12m: Projection onto ran P2- along ran P1+.
        L21p: Projection onto ran P2+ along ran P1-.
        L21m: Projection onto ran P1- along ran P2+.
        condition: Condition number of Upsilon.
    """

    L12p: np.ndarray
    L12m: np.ndarray
    L21p: np.ndarray
    L21m: np.ndarray
    condition: float = 1.0

    def residuals(self) -> Dict[str, float]:
        """Idempotency and completeness residuals (2-norms)."""
        one = np.eye(self.L12p.shape[0])
        out = {}
        for name in ("L12p", "L12m", "L21p", "L21m"):
            m = getattr(self, name)
            out[f"{name}_idempotent"] = float(np.linalg.norm(m @ m - m, 2))
        out["sum12"] = float(np.linalg.norm(self.L12p + self.L12m - one, 2))
        out["sum21"] = float(np.linalg.norm(self.L21p + self.L21m - one, 2))
        return out

    @property
    def max_residual(self) -> float:
        return max(self.residuals().values())


@dataclass(frozen=True, eq=False)
class AngularPair:
    """
    Angular operators of S2 relative to S1.

    Blocks are written in the basis `basis`, whose first `rank` columns span ran P1+ and
    whose remaining columns span ran P1-.

    Attributes:
        c: Map ran P1- -> ran P1+, shape (rank, n - rank).
        d: Map ran P1+ -> ran P1-, shape (n - rank, rank).
        basis: The adapted basis.
        rank: Dimension of ran P1+.
        reconstruction_residual: Relative mismatch between K rebuilt from c, d and S2 S1.
    """

    c: np.ndarray
    d: np.ndarray
    basis: np.ndarray
    rank: int
    reconstruction_residual: float = 0.0

    @property
    def c_norm(self) -> float:
        return float(np.linalg.norm(self.c, 2)) if self.c.size else 0.0

    @property
    def d_norm(self) -> float:
        return float(np.linalg.norm(self.d, 2)) if self.d.size else 0.0

    def _inverses(self) -> Tuple[np.ndarray, np.ndarray]:
        p, q = self.c.shape
        a = np.linalg.inv(np.eye(p) - self.c @ self.d)
        b = np.linalg.inv(np.eye(q) - self.d @ self.c)
        return a, b

    def to_full(self, block: np.ndarray) -> np.ndarray:
        """Map a block matrix in the adapted basis back to the standard basis."""
        return self.basis @ block @ np.linalg.inv(self.basis)

    def to_block(self, matrix: np.ndarray) -> np.ndarray:
        return np.linalg.inv(self.basis) @ matrix @ self.basis

    def upsilon_block(self) -> np.ndarray:
        a, b = self._inverses()
        p, q = self.c.shape
        out = np.zeros((p + q, p + q), dtype=complex)
        out[:p, :p] = a
        out[p:, p:] = b
        return out

    def k_block(self) -> np.ndarray:
        """K = S2 S1 rebuilt from c and d."""
        a, b = self._inverses()
        p, q = self.c.shape
        cd, dc = self.c @ self.d, self.d @ self.c
        return np.block(
            [
                [(np.eye(p) + cd) @ a, -2.0 * self.c @ b],
                [-2.0 * self.d @ a, (np.eye(q) + dc) @ b],
            ]
        )

    def s2_block(self) -> np.ndarray:
        """S2 rebuilt from c and d."""
        a, b = self._inverses()
        p, q = self.c.shape
        cd, dc = self.c @ self.d, self.d @ self.c
        return np.block(
            [
                [(np.eye(p) + cd) @ a, 2.0 * self.c @ b],
                [-2.0 * self.d @ a, -(np.eye(q) + dc) @ b],
            ]
        )

    def p2_plus_block(self) -> np.ndarray:
        a, b = self._inverses()
        return np.block([[a, self.c @ b], [-self.d @ a, -self.d @ self.c @ b]])

    def p2_minus_block(self) -> np.ndarray:
        a, b = self._inverses()
        return np.block([[-self.c @ self.d @ a, -self.c @ b], [self.d @ a, b]])

    def quad_blocks(self) -> Dict[str, np.ndarray]:
        """Lambda projections in block form."""
        p, q = self.c.shape
        zpp, zqq = np.zeros((p, p)), np.zeros((q, q))
        zpq, zqp = np.zeros((p, q)), np.zeros((q, p))
        ip, iq = np.eye(p), np.eye(q)
        return {
            "L12p": np.block([[ip, self.c], [zqp, zqq]]),
            "L12m": np.block([[zpp, -self.c], [zqp, iq]]),
            "L21p": np.block([[ip, zpq], [-self.d, zqq]]),
            "L21m": np.block([[zpp, zpq], [self.d, iq]]),
        }


@dataclass(frozen=True)
class LemmaReport:
    """
    Inverse bound for T = S(1 - P) + PS.

    Attributes:
        bound_ok: Whether ||T^-1|| <= bound.
        inv_norm: ||T^-1||.
        bound: 1 / (1 - sqrt(1 - alpha^2)).
        alpha: The positivity constant used.
    """

    bound_ok: bool
    inv_norm: float
    bound: float
    alpha: float

    def as_tuple(self) -> Tuple[bool, float]:
        return self.bound_ok, self.inv_norm


@dataclass(frozen=True)
class BogoliubovReport:
    """
    Residuals of the pseudounitarity conditions for a mode transformation.

    Attributes:
        intertwining: max |N(k') Lam(k, k') - Lam(k', k) N(k)|.
        normalization: max |sum_p conj(Lam(k, p)) Lam(k', p) - (|N(k)|^2 - 1) delta(k, k')|.
    """

    intertwining: float
    normalization: float

    def is_valid(self, tol: float = 1e-10) -> bool:
        return self.intertwining <= tol and self.normalization <= tol

    @property
    def max_residual(self) -> float:
        return max(self.intertwining, self.normalization)

    def to_dict(self) -> Dict[str, Any]:
        return {"intertwining": self.intertwining, "normalization": self.normalization}


@dataclass(frozen=True)
class VacuumCoefficients:
    """N and M relating the modes of two alpha vacua."""

    n: complex
    m: complex

    @property
    def pseudounitarity_residual(self) -> float:
        return abs(abs(self.n) ** 2 - abs(self.m) ** 2 - 1.0)

    def as_tuple(self) -> Tuple[complex, complex]:
        return self.n, self.m

