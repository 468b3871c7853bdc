"""Bloch-vector algebra for qubit estimation models.

A qubit state is written rho = (I + s.sigma)/2 with s a real 3-vector,
|s| < 1 for mixed states.  A two-parameter model is specified locally by
the triple (s, d1s, d2s) = (s, ds/dtheta^1, ds/dtheta^2).  Everything in this
module is elementary 3-vector/3x3-matrix calculus on that data:

* ``Q = I + |s><s| / (1 - s^2)`` and its inverse ``I - |s><s|``, the
  symmetric metric factor relating derivatives to SLD Bloch vectors,
* ``F a = s x a``, the antisymmetric cross-product matrix,
* ``Q~ = (I - iF)/(1 - s^2)`` and its inverse ``Q^{-1} + iF``, the
  Hermitian metric factor for RLD Bloch vectors,
* SLD / RLD Bloch vectors ``l_i = Q d_i s`` and ``l~_i = Q~ d_i s``,
* ``gamma_i = <s, l_i>``, the radial components that detect D-invariance,
* ``l_perp = d1s x d2s``, the direction orthogonal to the tangent plane.

Inner products are conjugate-linear in the first argument.  All functions
are pure; none mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModelError, DomainError, PureStateError

__all__ = [
    "PURE_SHELL_TOL",
    "DERIVATIVE_INDEPENDENCE_RTOL",
    "BlochModelPoint",
    "BlochModelPoint3",
    "inner",
    "q_matrix",
    "q_inverse",
    "f_matrix",
    "q_tilde",
    "q_tilde_inverse",
    "sld_bloch_vectors",
    "rld_bloch_vectors",
    "gamma_vector",
    "ell_perp",
]

# |s| >= 1 - PURE_SHELL_TOL counts as pure: (1-s^2)^{-1} is no longer trusted.
PURE_SHELL_TOL = 1e-12

# |d1s x d2s| below this fraction of |d1s||d2s| counts as linearly dependent.
DERIVATIVE_INDEPENDENCE_RTOL = 1e-10


def _as_real_vec3(value, name: str) -> np.ndarray:
    vec = np.asarray(value, dtype=float)
    if vec.shape != (3,):
        raise DomainError(f"{name} must be a real 3-vector, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise DomainError(f"{name} has non-finite components: {vec}")
    return vec


def inner(a, b) -> complex:
    """Standard inner product on C^3, conjugate-linear in the first slot."""
    a = np.asarray(a)
    b = np.asarray(b)
    return complex(np.vdot(a, b))


@dataclass(frozen=True)
class BlochModelPoint:
    """A two-parameter qubit model evaluated at one parameter point.

    ``s`` is the Bloch vector, ``d1s`` and ``d2s`` its partial derivatives.
    Construction accepts |s| <= 1 (the pure shell is needed by the limit
    operations); operations that require strict mixedness guard themselves
    via :meth:`require_mixed`.
    """

    s: np.ndarray
    d1s: np.ndarray
    d2s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _as_real_vec3(self.s, "s"))
        object.__setattr__(self, "d1s", _as_real_vec3(self.d1s, "d1s"))
        object.__setattr__(self, "d2s", _as_real_vec3(self.d2s, "d2s"))
        if self.s_squared > 1.0 + 1e-9:
            raise DomainError(f"|s| = {np.linalg.norm(self.s):.6g} lies outside the Bloch ball")

    @property
    def s_squared(self) -> float:
        return float(self.s @ self.s)

    @property
    def is_mixed(self) -> bool:
        return self.s_squared < (1.0 - PURE_SHELL_TOL) ** 2

    def require_mixed(self) -> None:
        if not self.is_mixed:
            raise PureStateError(
                f"operation requires |s| < 1 - {PURE_SHELL_TOL:g}, got |s| = "
                f"{np.linalg.norm(self.s):.12g}"
            )

    def derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        return self.d1s, self.d2s


@dataclass(frozen=True)
class BlochModelPoint3:
    """A three-parameter qubit model point (used by the D-invariant bound)."""

    s: np.ndarray
    d1s: np.ndarray
    d2s: np.ndarray
    d3s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _as_real_vec3(self.s, "s"))
        for name in ("d1s", "d2s", "d3s"):
            object.__setattr__(self, name, _as_real_vec3(getattr(self, name), name))
        if self.s_squared > 1.0 + 1e-9:
            raise DomainError(f"|s| = {np.linalg.norm(self.s):.6g} lies outside the Bloch ball")
        derivs = np.column_stack([self.d1s, self.d2s, self.d3s])
        scale = np.prod([np.linalg.norm(d) for d in derivs.T])
        if scale == 0.0 or abs(np.linalg.det(derivs)) < DERIVATIVE_INDEPENDENCE_RTOL * scale:
            raise DegenerateModelError("the three derivative vectors are linearly dependent")

    @property
    def s_squared(self) -> float:
        return float(self.s @ self.s)

    def require_mixed(self) -> None:
        if self.s_squared >= (1.0 - PURE_SHELL_TOL) ** 2:
            raise PureStateError("three-parameter bound requires a strictly mixed state")


def q_matrix(m: BlochModelPoint) -> np.ndarray:
    """Q = I + |s><s|/(1 - s^2); real positive with eigenvalues {1, 1, 1/(1-s^2)}."""
    m.require_mixed()
    s = m.s
    return np.eye(3) + np.outer(s, s) / (1.0 - m.s_squared)


def q_inverse(m: BlochModelPoint) -> np.ndarray:
    """Inverse of Q: I - |s><s|."""
    m.require_mixed()
    return np.eye(3) - np.outer(m.s, m.s)


def f_matrix(m: BlochModelPoint) -> np.ndarray:
    """Real antisymmetric matrix acting as F a = s x a."""
    s1, s2, s3 = m.s
    return np.array(
        [
            [0.0, -s3, s2],
            [s3, 0.0, -s1],
            [-s2, s1, 0.0],
        ]
    )


def q_tilde(m: BlochModelPoint) -> np.ndarray:
    """Q~ = (I - iF)/(1 - s^2); Hermitian positive definite."""
    m.require_mixed()
    return (np.eye(3) - 1j * f_matrix(m)) / (1.0 - m.s_squared)


def q_tilde_inverse(m: BlochModelPoint) -> np.ndarray:
    """Inverse of Q~: Q^{-1} + iF."""
    m.require_mixed()
    return q_inverse(m) + 1j * f_matrix(m)


def sld_bloch_vectors(m: BlochModelPoint) -> tuple[np.ndarray, np.ndarray]:
    """SLD Bloch vectors l_i = Q d_i s (real)."""
    q = q_matrix(m)
    return q @ m.d1s, q @ m.d2s


def rld_bloch_vectors(m: BlochModelPoint) -> tuple[np.ndarray, np.ndarray]:
    """RLD Bloch vectors l~_i = Q~ d_i s (complex in general)."""
    qt = q_tilde(m)
    return qt @ m.d1s, qt @ m.d2s


def gamma_vector(m: BlochModelPoint) -> np.ndarray:
    """gamma_i = <s, l_i> = <s, d_i s>/(1 - s^2), the radial SLD components."""
    m.require_mixed()
    denom = 1.0 - m.s_squared
    return np.array([float(m.s @ m.d1s), float(m.s @ m.d2s)]) / denom


def ell_perp(m: BlochModelPoint) -> np.ndarray:
    """l_perp = d1s x d2s, orthogonal to both derivatives.

    Raises :class:`DegenerateModelError` when the derivatives are parallel
    beyond ``DERIVATIVE_INDEPENDENCE_RTOL``.
    """
    perp = np.cross(m.d1s, m.d2s)
    scale = np.linalg.norm(m.d1s) * np.linalg.norm(m.d2s)
    if scale == 0.0 or np.linalg.norm(perp) < DERIVATIVE_INDEPENDENCE_RTOL * scale:
        raise DegenerateModelError("d1s and d2s are linearly dependent")
    return perp
