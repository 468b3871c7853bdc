"""SLD and RLD Fisher information in Bloch form.

For a mixed two-parameter qubit point the Fisher matrices are the bilinear
forms of the derivatives under the metric factors of :mod:`holevo2q.bloch`:

    G_ij  = <d_i s, Q d_j s>          (real symmetric, SLD)
    G~_ij = <d_i s, Q~ d_j s>         (Hermitian, RLD)

Dual Bloch vectors carry the inverse-metric index: l^i = sum_j (G^-1)_ji l_j
and analogously for the RLD side, so that <l^i, Q^-1 l_j> = delta^i_j.  The
Z matrix collects the RLD-type pairings of the SLD duals,

    z^ij = <l^i, Q~^-1 l^j> = (G^-1)_ij + i <l^i, F l^j>,

whose real part is exactly G^-1 and whose imaginary part equals Im G~^-1.

Everything a bound computation needs is cached in a :class:`FisherBundle`;
the individual operations are also exposed for direct use and testing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import (
    BlochModelPoint,
    ell_perp,
    gamma_vector,
    q_inverse,
    q_matrix,
    q_tilde,
    q_tilde_inverse,
    rld_bloch_vectors,
    sld_bloch_vectors,
)
from .errors import DegenerateModelError, PureStateError, SingularMatrixError

__all__ = [
    "FisherBundle",
    "fisher_bundle",
    "invert_2x2",
    "sld_fisher",
    "rld_fisher",
    "dual_vectors",
    "rld_dual_vectors",
    "z_matrix",
    "DeterminantIdentityResiduals",
    "fisher_determinant_identities",
    "one_param_bound",
]

# Reject 2x2 inversion when |det| < SINGULAR_RTOL * ||M||_F^2.
SINGULAR_RTOL = 1e-14


def invert_2x2(mat: np.ndarray, exc: type[Exception] = DegenerateModelError) -> np.ndarray:
    """Closed-form adjugate inversion of a 2x2 matrix (real or complex)."""
    m = np.asarray(mat)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    norm_sq = float(np.sum(np.abs(m) ** 2))
    if abs(det) < SINGULAR_RTOL * norm_sq or norm_sq == 0.0:
        raise exc(f"2x2 matrix is singular beyond tolerance (det = {det:.3e})")
    adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])
    return adj / det


def _bilinear(u: np.ndarray, mat: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.conj(u) @ (mat @ v))


def sld_fisher(m: BlochModelPoint) -> np.ndarray:
    """SLD Fisher matrix G_ij = <d_i s, Q d_j s>; symmetric positive definite."""
    q = q_matrix(m)
    d1, d2 = m.derivatives()
    g = np.array(
        [
            [float(d1 @ q @ d1), float(d1 @ q @ d2)],
            [float(d2 @ q @ d1), float(d2 @ q @ d2)],
        ]
    )
    det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
    if g[0, 0] <= 0.0 or det <= SINGULAR_RTOL * float(np.sum(g**2)):
        raise DegenerateModelError("SLD Fisher matrix is singular; derivatives degenerate")
    return g


def rld_fisher(m: BlochModelPoint) -> np.ndarray:
    """RLD Fisher matrix G~_ij = <d_i s, Q~ d_j s>; Hermitian positive definite."""
    qt = q_tilde(m)
    d1, d2 = m.derivatives()
    return np.array(
        [
            [_bilinear(d1, qt, d1), _bilinear(d1, qt, d2)],
            [_bilinear(d2, qt, d1), _bilinear(d2, qt, d2)],
        ]
    )


def dual_vectors(m: BlochModelPoint) -> tuple[np.ndarray, np.ndarray]:
    """SLD dual Bloch vectors l^i = sum_j (G^-1)_ji l_j (real)."""
    g_inv = invert_2x2(sld_fisher(m))
    l1, l2 = sld_bloch_vectors(m)
    dual1 = g_inv[0, 0] * l1 + g_inv[1, 0] * l2
    dual2 = g_inv[0, 1] * l1 + g_inv[1, 1] * l2
    return dual1, dual2


def rld_dual_vectors(m: BlochModelPoint) -> tuple[np.ndarray, np.ndarray]:
    """RLD dual Bloch vectors l~^i = sum_j (G~^-1)_ji l~_j (complex)."""
    gt_inv = invert_2x2(rld_fisher(m))
    lt1, lt2 = rld_bloch_vectors(m)
    rdual1 = gt_inv[0, 0] * lt1 + gt_inv[1, 0] * lt2
    rdual2 = gt_inv[0, 1] * lt1 + gt_inv[1, 1] * lt2
    return rdual1, rdual2


def z_matrix(m: BlochModelPoint) -> np.ndarray:
    """Hermitian Z with z^ij = <l^i, Q~^-1 l^j> on the SLD duals."""
    qt_inv = q_tilde_inverse(m)
    dual1, dual2 = dual_vectors(m)
    return np.array(
        [
            [_bilinear(dual1, qt_inv, dual1), _bilinear(dual1, qt_inv, dual2)],
            [_bilinear(dual2, qt_inv, dual1), _bilinear(dual2, qt_inv, dual2)],
        ]
    )


@dataclass(frozen=True)
class FisherBundle:
    """All Fisher-level data for one mixed model point.

    Fields mirror the operations above; ``point`` keeps the source data so
    bound computations can reach the raw geometry (l_perp, 1 - s^2, ...).
    """

    point: BlochModelPoint
    g: np.ndarray            # SLD Fisher, real symmetric (2, 2)
    g_inv: np.ndarray
    g_tilde: np.ndarray      # RLD Fisher, Hermitian (2, 2)
    g_tilde_inv: np.ndarray
    z: np.ndarray            # Hermitian (2, 2)
    dual1: np.ndarray        # SLD dual Bloch vectors, real (3,)
    dual2: np.ndarray
    rdual1: np.ndarray       # RLD dual Bloch vectors, complex (3,)
    rdual2: np.ndarray
    gamma: np.ndarray        # radial components, real (2,)

    @property
    def one_minus_s_sq(self) -> float:
        return 1.0 - self.point.s_squared

    @property
    def ell_perp(self) -> np.ndarray:
        return ell_perp(self.point)

    @property
    def perp_quadratic(self) -> float:
        """<l_perp, Q^-1 l_perp>, the coefficient of the reduced quadratic."""
        perp = self.ell_perp
        return float(perp @ q_inverse(self.point) @ perp)

    @property
    def im_z12(self) -> float:
        """Im z^12 = <l^1, F l^2>, the single imaginary degree of freedom."""
        return float(self.z[0, 1].imag)


def fisher_bundle(m: BlochModelPoint) -> FisherBundle:
    """Compute every Fisher-level quantity for a mixed model point at once."""
    m.require_mixed()
    q = q_matrix(m)
    qt_inv = q_tilde_inverse(m)
    d1, d2 = m.derivatives()
    l1, l2 = q @ d1, q @ d2

    g = sld_fisher(m)
    g_inv = invert_2x2(g)
    g_tilde = rld_fisher(m)
    g_tilde_inv = invert_2x2(g_tilde)

    dual1 = g_inv[0, 0] * l1 + g_inv[1, 0] * l2
    dual2 = g_inv[0, 1] * l1 + g_inv[1, 1] * l2
    lt1, lt2 = rld_bloch_vectors(m)
    rdual1 = g_tilde_inv[0, 0] * lt1 + g_tilde_inv[1, 0] * lt2
    rdual2 = g_tilde_inv[0, 1] * lt1 + g_tilde_inv[1, 1] * lt2

    z = np.array(
        [
            [_bilinear(dual1, qt_inv, dual1), _bilinear(dual1, qt_inv, dual2)],
            [_bilinear(dual2, qt_inv, dual1), _bilinear(dual2, qt_inv, dual2)],
        ]
    )
    gamma = gamma_vector(m)
    return FisherBundle(
        point=m,
        g=g,
        g_inv=g_inv,
        g_tilde=g_tilde,
        g_tilde_inv=g_tilde_inv,
        z=z,
        dual1=dual1,
        dual2=dual2,
        rdual1=rdual1,
        rdual2=rdual2,
        gamma=gamma,
    )


@dataclass(frozen=True)
class DeterminantIdentityResiduals:
    """Relative residuals of the three closed-form identities linking the
    reduced quadratic coefficient, the determinants, the TrAbs terms and the
    gap C^Z - C^R.  All three vanish for exact arithmetic."""

    quadratic_vs_determinants: float
    trabs_consistency: float
    gamma_gap: float

    def max_residual(self) -> float:
        return max(self.quadratic_vs_determinants, self.trabs_consistency, self.gamma_gap)


def fisher_determinant_identities(m: BlochModelPoint, weight) -> DeterminantIdentityResiduals:
    """Evaluate the three structural identities at a mixed point.

    1. <l_perp, Q^-1 l_perp> = (1-s^2) det G = (1-s^2)^2 det G~
    2. 2 sqrt(det W) |<l^1, F l^2>| = TrAbs(W Im G~^-1) = TrAbs(W Im Z)
    3. (gamma | W^-1 gamma) = det(W^-1 G)/(1-s^2) * (C^Z - C^R)

    ``weight`` is a :class:`holevo2q.bounds.WeightMatrix`.  Imported lazily
    to keep the module dependency order one-way.
    """
    from .bounds import WeightMatrix, bound_rld, bound_z, trabs

    if not isinstance(weight, WeightMatrix):
        weight = WeightMatrix.from_matrix(np.asarray(weight, dtype=float))

    fb = fisher_bundle(m)
    one_minus = fb.one_minus_s_sq

    lhs1 = fb.perp_quadratic
    det_g = float(np.linalg.det(fb.g))
    det_gt = float(np.linalg.det(fb.g_tilde).real)
    mid1 = one_minus * det_g
    rhs1 = one_minus**2 * det_gt
    scale1 = max(abs(lhs1), abs(mid1), abs(rhs1), 1e-300)
    res1 = max(abs(lhs1 - mid1), abs(mid1 - rhs1)) / scale1

    w = weight.matrix
    lhs2 = 2.0 * np.sqrt(weight.det) * abs(fb.im_z12)
    mid2 = trabs(w, fb.g_tilde_inv.imag)
    rhs2 = trabs(w, fb.z.imag)
    scale2 = max(abs(lhs2), abs(mid2), abs(rhs2), 1.0)
    res2 = max(abs(lhs2 - mid2), abs(mid2 - rhs2)) / scale2

    w_inv = invert_2x2(w, exc=SingularMatrixError)
    lhs3 = float(fb.gamma @ w_inv @ fb.gamma)
    gap = bound_z(fb, weight) - bound_rld(fb, weight)
    rhs3 = det_g / weight.det / one_minus * gap
    scale3 = max(abs(lhs3), abs(rhs3), 1.0)
    res3 = abs(lhs3 - rhs3) / scale3

    return DeterminantIdentityResiduals(res1, res2, res3)


def one_param_bound(s, ds) -> float:
    """Holevo bound of a one-parameter model: 1/g with g = <ds, Q ds>.

    For a single parameter the bound coincides with the SLD Cramer-Rao bound.
    """
    point = BlochModelPoint(s=s, d1s=ds, d2s=ds)
    point.require_mixed()
    ds = np.asarray(ds, dtype=float)
    if np.linalg.norm(ds) == 0.0:
        raise DegenerateModelError("derivative vector vanishes")
    g = float(ds @ q_matrix(point) @ ds)
    if g <= 0.0:
        raise PureStateError("SLD Fisher information is not positive")
    return 1.0 / g
