"""
Mode-truncated Klein-Gordon dynamics: static models and time-dependent generator families.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np

from kgprop.errors import KgpropValidationError
from kgprop.models.krein import KreinSpaceFD

MatrixFunction = Callable[[float], np.ndarray]
MatrixSource = Union[np.ndarray, MatrixFunction, Any]


def _square(value: Any, name: str) -> np.ndarray:
    arr = np.atleast_2d(np.array(value, dtype=complex))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise KgpropValidationError(f"{name} must be a square matrix, got shape {arr.shape}", field=name)
    return arr


def _lapse(value: Optional[Any], n: int) -> np.ndarray:
    if value is None:
        return np.ones(n)
    lapse = np.atleast_1d(np.asarray(value, dtype=float))
    if lapse.shape != (n,):
        raise KgpropValidationError(f"lapse must have {n} entries, got {lapse.shape}", field="lapse")
    if np.any(lapse <= 0):
        raise KgpropValidationError("lapse must be positive", field="lapse")
    return lapse


def _as_function(value: MatrixSource, name: str) -> MatrixFunction:
    if callable(value):
        return lambda t: _square(value(t), name)
    const = _square(value, name)
    return lambda t: const


def charge_form(n: int) -> np.ndarray:
    """Q = [[0, 1], [1, 0]] on Cauchy data of n modes."""
    one, zero = np.eye(n), np.zeros((n, n))
    return np.block([[zero, one], [one, zero]]).astype(complex)


@dataclass(frozen=True, eq=False)
class StaticModel:
    """
    Static Klein-Gordon operator d^2/dt^2 + L with a lapse weight.

    Attributes:
        L: Hermitian spatial operator.
        lapse: Positive weight per mode (defaults to 1).
    """

    L: np.ndarray
    lapse: Optional[np.ndarray] = None
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        L = _square(self.L, "L")
        if np.linalg.norm(L - L.conj().T) > 1e-12 * max(1.0, np.linalg.norm(L)):
            raise KgpropValidationError("L must be Hermitian", field="L")
        L = 0.5 * (L + L.conj().T)
        values, vectors = np.linalg.eigh(L)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "lapse", _lapse(self.lapse, L.shape[0]))
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "eigenvectors", vectors)

    @classmethod
    def diagonal(cls, values: Any, lapse: Optional[Any] = None) -> "StaticModel":
        return cls(np.diag(np.asarray(values, dtype=float)), lapse)

    @property
    def n(self) -> int:
        return int(self.L.shape[0])

    @property
    def is_stable(self) -> bool:
        """L positive definite."""
        return bool(self.eigenvalues[0] > 0)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """lapse * f(L) * lapse for the eigenvalue-wise function values."""
        u = self.eigenvectors
        mat = (u * values[None, :]) @ u.conj().T
        assert self.lapse is not None
        return self.lapse[:, None] * mat * self.lapse[None, :]

    def to_family(self) -> "DynamicsFamily":
        return DynamicsFamily.from_blocks(self.L, lapse=self.lapse)

    def to_dict(self) -> Dict[str, Any]:
        assert self.lapse is not None
        return {"L": self.L.real.tolist(), "lapse": self.lapse.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StaticModel":
        if "L" not in data:
            raise KgpropValidationError("static model needs 'L'", field="L")
        return cls(np.asarray(data["L"], dtype=float), data.get("lapse"))


@dataclass(frozen=True, eq=False)
class DynamicsFamily:
    """
    A generator family B(t) = [[W(t), 1], [L(t), W(t)^dagger]] on Cauchy data.

    B is declared constant, equal to B_- and B_+, before t_minus and after t_plus.

    Attributes:
        generator: t -> B(t), a 2n x 2n matrix.
        t_minus: Anchor time of the in region.
        t_plus: Anchor time of the out region.
        lapse: Positive weight per mode for the Green-function level.
        constant: B does not depend on t.
        label: Free-form description.
    """

    generator: MatrixFunction
    t_minus: float = 0.0
    t_plus: float = 0.0
    lapse: Optional[np.ndarray] = None
    constant: bool = False
    label: str = ""
    B_minus: np.ndarray = field(init=False, repr=False)
    B_plus: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.t_plus < self.t_minus:
            raise KgpropValidationError("t_minus must not exceed t_plus", field="t_minus")
        b_minus = _square(self.generator(self.t_minus), "B")
        b_plus = _square(self.generator(self.t_plus), "B")
        size = b_minus.shape[0]
        if size % 2 or b_plus.shape != b_minus.shape:
            raise KgpropValidationError("B must be 2n x 2n", field="B")
        object.__setattr__(self, "B_minus", b_minus)
        object.__setattr__(self, "B_plus", b_plus)
        object.__setattr__(self, "lapse", _lapse(self.lapse, size // 2))
        Q = charge_form(size // 2)
        for t in {self.t_minus, 0.5 * (self.t_minus + self.t_plus), self.t_plus}:
            H = Q @ self.at(t)
            if np.linalg.norm(H - H.conj().T) > 1e-10 * max(1.0, np.linalg.norm(H)):
                raise KgpropValidationError(f"QB(t) is not Hermitian at t={t:g}", field="B")

    @classmethod
    def from_blocks(
        cls,
        L: MatrixSource,
        W: Optional[MatrixSource] = None,
        t_minus: float = 0.0,
        t_plus: float = 0.0,
        lapse: Optional[Any] = None,
        label: str = "",
    ) -> "DynamicsFamily":
        """
        Build B(t) from L(t) and W(t); each may be a matrix or a function of t.

        With constant L and W the family is marked constant.
        """
        const = not callable(L) and (W is None or not callable(W))
        l_fn = _as_function(L, "L")
        n = l_fn(t_minus).shape[0]
        w_fn = _as_function(np.zeros((n, n)) if W is None else W, "W")
        one = np.eye(n)

        def generator(t: float) -> np.ndarray:
            w = w_fn(t)
            return np.block([[w, one], [l_fn(t), w.conj().T]])

        return cls(generator, t_minus, t_plus, lapse, const, label)

    @property
    def n(self) -> int:
        return int(self.B_minus.shape[0] // 2)

    @property
    def Q(self) -> np.ndarray:
        return charge_form(self.n)

    @property
    def space(self) -> KreinSpaceFD:
        return KreinSpaceFD(self.Q)

    def at(self, t: float) -> np.ndarray:
        """B(t), frozen to B_-/B_+ outside the anchors."""
        if self.constant:
            return self.B_minus
        if t <= self.t_minus:
            return self.B_minus
        if t >= self.t_plus:
            return self.B_plus
        return _square(self.generator(t), "B")

    def weight(self, block: np.ndarray) -> np.ndarray:
        """lapse * block * lapse."""
        assert self.lapse is not None
        return self.lapse[:, None] * block * self.lapse[None, :]

    def block12(self, matrix: np.ndarray) -> np.ndarray:
        n = self.n
        return matrix[:n, n:]


@dataclass(frozen=True, eq=False)
class AsymptoticProjections:
    """
    Spectral projections of B_+ and B_- onto positive and negative frequencies.

    Attributes:
        plus_pos: Out particle projection.
        plus_neg: Out antiparticle projection.
        minus_pos: In particle projection.
        minus_neg: In antiparticle projection.
    """

    plus_pos: np.ndarray
    plus_neg: np.ndarray
    minus_pos: np.ndarray
    minus_neg: np.ndarray

    @property
    def S_plus(self) -> np.ndarray:
        return self.plus_pos - self.plus_neg

    @property
    def S_minus(self) -> np.ndarray:
        return self.minus_pos - self.minus_neg

    def conjugated(self, forward: np.ndarray, backward: np.ndarray, plus: bool) -> Tuple[np.ndarray, np.ndarray]:
        """R Pi R^-1 for the out (plus=True) or in pair."""
        pos, neg = (self.plus_pos, self.plus_neg) if plus else (self.minus_pos, self.minus_neg)
        return forward @ pos @ backward, forward @ neg @ backward

    def as_tuple(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.plus_pos, self.plus_neg, self.minus_pos, self.minus_neg


@dataclass(frozen=True, eq=False)
class TwoStateKernels:
    """
    Green-function level kernels built from the in and out vacua at (t, s).

    Attributes:
        feynman: In-out Feynman propagator.
        anti_feynman: Out-in anti-Feynman propagator.
        pos_out_in: Positive frequency bisolution from Pi_{+-}^{(+)}.
        neg_out_in: Negative frequency bisolution from Pi_{+-}^{(-)}.
        pos_in_out: Positive frequency bisolution from Pi_{-+}^{(+)}.
        neg_in_out: Negative frequency bisolution from Pi_{-+}^{(-)}.
        ret: Forward Green function.
        adv: Backward Green function.
        pj: Pauli-Jordan bisolution.
    """

    feynman: np.ndarray
    anti_feynman: np.ndarray
    pos_out_in: np.ndarray
    neg_out_in: np.ndarray
    pos_in_out: np.ndarray
    neg_in_out: np.ndarray
    ret: np.ndarray
    adv: np.ndarray
    pj: np.ndarray

    def identity_residuals(self) -> Dict[str, float]:
        """Max-abs residuals of the identities linking the kernels."""

        def res(a: np.ndarray) -> float:
            return float(np.max(np.abs(a)))

        return {
            "feynman_pos": res(self.feynman - (1j * self.pos_out_in + self.adv)),
            "feynman_neg": res(self.feynman - (1j * self.neg_out_in + self.ret)),
            "anti_feynman_pos": res(self.anti_feynman - (-1j * self.pos_in_out + self.ret)),
            "anti_feynman_neg": res(self.anti_feynman - (-1j * self.neg_in_out + self.adv)),
            "difference": res(self.feynman - self.anti_feynman - 1j * (self.pos_out_in + self.neg_in_out)),
            "pauli_jordan": res(self.pj - (self.ret - self.adv)),
        }


@dataclass(frozen=True, eq=False)
class BogoliubovMap:
    """
    In-to-out map of KG-normalized positive frequency modes: X = V_out^+ N + V_out^- M.

    Attributes:
        N: Particle-to-particle block.
        M: Particle-to-antiparticle block.
    """

    N: np.ndarray
    M: np.ndarray

    @property
    def pseudounitarity_residual(self) -> float:
        """||N^dagger N - M^dagger M - 1||."""
        gram = self.N.conj().T @ self.N - self.M.conj().T @ self.M
        return float(np.linalg.norm(gram - np.eye(gram.shape[0]), 2))

    @property
    def particle_numbers(self) -> np.ndarray:
        """Diagonal of M^dagger M, the out antiparticle content of each in mode."""
        return np.real(np.diag(self.M.conj().T @ self.M))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N_re": self.N.real.tolist(),
            "N_im": self.N.imag.tolist(),
            "M_re": self.M.real.tolist(),
            "M_im": self.M.imag.tolist(),
            "pseudounitarity_residual": self.pseudounitarity_residual,
        }
