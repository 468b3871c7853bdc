"""Independent verification paths at the density-matrix level.

Nothing here reuses the closed-form identities of :mod:`holevo2q.fisher` or
:mod:`holevo2q.bounds` beyond elementary definitions; the point of this
module is to validate those formulas from scratch:

* logarithmic-derivative operators solved directly from their defining
  operator equations (eigenbasis solve for the symmetric one, rho^-1 d rho
  for the right one),
* Fisher / Z matrices as operator traces,
* the commutation superoperator from its defining inner-product relation,
  solved as a 4x4 real linear system in the Pauli basis,
* the Holevo function on explicit Hermitian observable pairs,
* brute-force minimizations of the Holevo function (a 2-d reduced search
  and a 6-d constrained search through a generic null-space
  parametrization), and a grid oracle for the piecewise quadratic/absolute
  minimum.

Minimizations use a coarse grid followed by Nelder-Mead refinement; the
objective is convex, so the refined grid minimum is the global one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize as _nm_minimize

from .bloch import BlochModelPoint
from .bounds import WeightMatrix, trabs
from .errors import (
    DegenerateModelError,
    FeasibilityError,
    PureStateError,
    SingularMatrixError,
)
from .fisher import dual_vectors, invert_2x2

__all__ = [
    "PAULI",
    "DensityPoint",
    "HermitianPair",
    "density_point",
    "sld_operators",
    "rld_operators",
    "dual_operators",
    "operator_fisher",
    "bloch_coefficients",
    "commutation_operator",
    "sld_inner",
    "rld_inner",
    "holevo_function",
    "pair_from_bloch_vectors",
    "minimize_holevo_2d",
    "minimize_holevo_6d",
    "grid_min_quadratic_abs",
]

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (_SX, _SY, _SZ)
_ID2 = np.eye(2, dtype=complex)

MIN_EIGENVALUE = 1e-12


def _herm(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


@dataclass(frozen=True)
class DensityPoint:
    """2x2 density matrix with its two parameter derivatives."""

    rho: np.ndarray
    drho1: np.ndarray
    drho2: np.ndarray

    def __post_init__(self):
        for name in ("rho", "drho1", "drho2"):
            mat = np.asarray(getattr(self, name), dtype=complex)
            if mat.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2")
            if np.abs(mat - mat.conj().T).max() > 1e-12 * (1.0 + np.abs(mat).max()):
                raise ValueError(f"{name} must be Hermitian")
            object.__setattr__(self, name, mat)
        if abs(np.trace(self.rho) - 1.0) > 1e-12:
            raise ValueError("rho must have unit trace")
        for name in ("drho1", "drho2"):
            if abs(np.trace(getattr(self, name))) > 1e-12:
                raise ValueError(f"{name} must be traceless")
        if np.linalg.eigvalsh(self.rho).min() < MIN_EIGENVALUE:
            raise PureStateError("rho is not strictly positive")

    def derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        return self.drho1, self.drho2


@dataclass(frozen=True)
class HermitianPair:
    """Candidate observable pair for the Holevo function."""

    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        for name in ("x1", "x2"):
            mat = np.asarray(getattr(self, name), dtype=complex)
            if mat.shape != (2, 2) or np.abs(mat - mat.conj().T).max() > 1e-10 * (
                1.0 + np.abs(mat).max()
            ):
                raise ValueError(f"{name} must be a Hermitian 2x2 matrix")
            object.__setattr__(self, name, mat)

    def operators(self) -> tuple[np.ndarray, np.ndarray]:
        return self.x1, self.x2


def density_point(m: BlochModelPoint) -> DensityPoint:
    """rho = (I + s.sigma)/2 and its derivatives from a Bloch model point."""
    s, (d1, d2) = m.s, m.derivatives()
    rho = 0.5 * (_ID2 + sum(s[k] * PAULI[k] for k in range(3)))
    dr1 = 0.5 * sum(d1[k] * PAULI[k] for k in range(3))
    dr2 = 0.5 * sum(d2[k] * PAULI[k] for k in range(3))
    return DensityPoint(rho=rho, drho1=dr1, drho2=dr2)


def sld_operators(dp: DensityPoint) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian L_i solving d_i rho = (rho L_i + L_i rho)/2.

    Solved in the eigenbasis of rho: L_jk = 2 (d rho)_jk / (p_j + p_k).
    """
    evals, evecs = np.linalg.eigh(dp.rho)
    if evals.min() < MIN_EIGENVALUE:
        raise PureStateError("rho eigenvalue below tolerance; SLD solve unstable")
    denom = evals[:, None] + evals[None, :]
    out = []
    for drho in dp.derivatives():
        d_in_basis = evecs.conj().T @ drho @ evecs
        l_in_basis = 2.0 * d_in_basis / denom
        out.append(_herm(evecs @ l_in_basis @ evecs.conj().T))
    return out[0], out[1]


def rld_operators(dp: DensityPoint) -> tuple[np.ndarray, np.ndarray]:
    """L~_i = rho^-1 d_i rho solving d_i rho = rho L~_i (non-Hermitian)."""
    rho_inv = np.linalg.inv(dp.rho)
    return rho_inv @ dp.drho1, rho_inv @ dp.drho2


def sld_inner(rho: np.ndarray, x: np.ndarray, y: np.ndarray) -> complex:
    """Symmetrized inner product tr(rho (y x^dagger + x^dagger y))/2.

    Real for Hermitian arguments; the sesquilinear extension (conjugate
    linear in ``x``) is what the mixed relations with the commutation
    superoperator use.
    """
    return complex(0.5 * np.trace(rho @ (y @ x.conj().T + x.conj().T @ y)))


def rld_inner(rho: np.ndarray, x: np.ndarray, y: np.ndarray) -> complex:
    """Right inner product tr(rho y x^dagger)."""
    return complex(np.trace(rho @ y @ x.conj().T))


def operator_fisher(dp: DensityPoint):
    """(G, G~, Z) as operator traces; the cross-check for the Bloch route.

    G_ij  = tr(rho (L_i L_j + L_j L_i))/2
    G~_ij = tr(rho L~_j L~_i^dagger)
    z^ij  = tr(rho L^j L^i) on the SLD duals L^i = sum_j (G^-1)_ji L_j.
    """
    l1, l2 = sld_operators(dp)
    lt1, lt2 = rld_operators(dp)
    rho = dp.rho
    slds = (l1, l2)
    g = np.array(
        [[sld_inner(rho, a, b).real for b in slds] for a in slds]
    )
    rlds = (lt1, lt2)
    gt = np.array(
        [[rld_inner(rho, a, b) for b in rlds] for a in rlds]
    )
    g_inv = invert_2x2(g)
    du1 = g_inv[0, 0] * l1 + g_inv[1, 0] * l2
    du2 = g_inv[0, 1] * l1 + g_inv[1, 1] * l2
    duals = (du1, du2)
    z = np.array(
        [[np.trace(rho @ duals[j] @ duals[i]) for j in range(2)] for i in range(2)]
    )
    return g, gt, z


def dual_operators(dp: DensityPoint) -> tuple[np.ndarray, np.ndarray]:
    """SLD dual operators L^i = sum_j (G^-1)_ji L_j."""
    l1, l2 = sld_operators(dp)
    g = np.array(
        [
            [sld_inner(dp.rho, l1, l1).real, sld_inner(dp.rho, l1, l2).real],
            [sld_inner(dp.rho, l2, l1).real, sld_inner(dp.rho, l2, l2).real],
        ]
    )
    g_inv = invert_2x2(g)
    return g_inv[0, 0] * l1 + g_inv[1, 0] * l2, g_inv[0, 1] * l1 + g_inv[1, 1] * l2


def bloch_coefficients(op: np.ndarray) -> tuple[complex, np.ndarray]:
    """Expansion op = a I + v.sigma; returns (a, v) with v the sigma part."""
    a = complex(np.trace(op)) / 2.0
    v = np.array([complex(np.trace(op @ PAULI[k])) / 2.0 for k in range(3)])
    return a, v


def commutation_operator(dp: DensityPoint, x: np.ndarray) -> np.ndarray:
    """Superoperator value D(x) defined by <Y, D(X)>_rho = tr(rho [X, Y])/(2i)
    for all Hermitian Y, solved in the basis {I, sx, sy, sz}.

    The sign convention is pinned by the consistency relations it must
    satisfy: (I + iD)(L~_i) = L_i and <X, Y>+ = <X, (I + iD)(Y)>.  In the
    eigenbasis of rho the solution is D_jk = i (p_k - p_j)/(p_j + p_k) X_jk.
    Complex-linear extension: non-Hermitian x is split into Hermitian parts.
    """
    x = np.asarray(x, dtype=complex)
    if np.abs(x - x.conj().T).max() > 1e-12 * (1.0 + np.abs(x).max()):
        xh = _herm(x)
        xa = _herm(-1j * (x - xh))  # x = xh + i xa with both Hermitian
        return commutation_operator(dp, xh) + 1j * commutation_operator(dp, xa)

    basis = (_ID2,) + PAULI
    rho = dp.rho
    gram = np.array(
        [[sld_inner(rho, a, b).real for b in basis] for a in basis]
    )
    rhs = np.array(
        [float((np.trace(rho @ (x @ a - a @ x)) / 2.0j).real) for a in basis]
    )
    try:
        coeffs = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("Pauli-basis Gram matrix is singular") from exc
    return sum(coeffs[k] * basis[k] for k in range(4))


def _feasibility_residual(dp: DensityPoint, pair: HermitianPair) -> float:
    res = 0.0
    for x in pair.operators():
        res = max(res, abs(np.trace(dp.rho @ x)))
    for i, drho in enumerate(dp.derivatives()):
        for j, x in enumerate(pair.operators()):
            target = 1.0 if i == j else 0.0
            res = max(res, abs(np.trace(drho @ x) - target))
    return float(res)


def holevo_function(dp: DensityPoint, pair: HermitianPair, w) -> float:
    """Tr(W Re Z[X]) + TrAbs(W Im Z[X]) with Z[X]_ij = tr(rho X^j X^i).

    Raises :class:`FeasibilityError` when the observables violate the
    local-unbiasedness constraints beyond 1e-8.
    """
    weight = w if isinstance(w, WeightMatrix) else WeightMatrix.from_matrix(w)
    residual = _feasibility_residual(dp, pair)
    if residual > 1e-8:
        raise FeasibilityError(
            f"observable pair violates unbiasedness constraints by {residual:.3e}"
        )
    return _holevo_value(dp.rho, pair.x1, pair.x2, weight)


def _holevo_value(rho: np.ndarray, x1: np.ndarray, x2: np.ndarray, weight: WeightMatrix) -> float:
    xs = (x1, x2)
    z = np.array(
        [[np.trace(rho @ xs[j] @ xs[i]) for j in range(2)] for i in range(2)]
    )
    return float(np.trace(weight.matrix @ z.real) + trabs(weight, _antisym(z.imag)))


def _antisym(mat: np.ndarray) -> np.ndarray:
    # Z[X] is Hermitian, so Im Z is antisymmetric up to rounding; symmetrize
    # the rounding away before TrAbs.
    return 0.5 * (mat - mat.T)


def pair_from_bloch_vectors(m: BlochModelPoint, x1, x2) -> HermitianPair:
    """Observables X^i = -<s, x^i> I + x^i . sigma for real 3-vectors x^i."""
    ops = []
    for vec in (x1, x2):
        v = np.asarray(vec, dtype=float)
        op = -float(m.s @ v) * _ID2 + sum(v[k] * PAULI[k] for k in range(3))
        ops.append(op)
    return HermitianPair(x1=ops[0], x2=ops[1])


def _nelder_mead(fun, x0: np.ndarray, scale: float) -> tuple[float, np.ndarray]:
    """Two-stage Nelder-Mead refinement with a restart from the first result."""
    best_x = np.asarray(x0, dtype=float)
    best_f = fun(best_x)
    for _ in range(2):
        result = _nm_minimize(
            fun,
            best_x,
            method="Nelder-Mead",
            options={
                "xatol": 1e-10,
                "fatol": 1e-13 * (1.0 + abs(best_f)),
                "maxfev": 10**5,
                "initial_simplex": _initial_simplex(best_x, scale),
            },
        )
        if result.fun < best_f:
            best_f = float(result.fun)
            best_x = np.asarray(result.x)
        scale = max(1e-6 * scale, 1e-8)
    return best_f, best_x


def _initial_simplex(center: np.ndarray, scale: float) -> np.ndarray:
    dim = center.size
    simplex = np.tile(center, (dim + 1, 1))
    for k in range(dim):
        simplex[k + 1, k] += scale
    return simplex


def _grid_then_refine(
    fun, radius: float, grid_points: int, batch_fun=None
) -> tuple[float, np.ndarray]:
    """Coarse grid scan (optionally batched) followed by simplex refinement."""
    axis = np.linspace(-radius, radius, grid_points)
    xi1 = np.repeat(axis, grid_points)
    xi2 = np.tile(axis, grid_points)
    if batch_fun is not None:
        values = batch_fun(xi1, xi2)
        idx = int(np.argmin(values))
        best_x = np.array([xi1[idx], xi2[idx]])
    else:
        best_f, best_x = np.inf, np.zeros(2)
        for a, b in zip(xi1, xi2):
            value = fun(np.array([a, b]))
            if value < best_f:
                best_f, best_x = value, np.array([a, b])
    step = 2.0 * radius / (grid_points - 1)
    return _nelder_mead(fun, best_x, step)


def minimize_holevo_2d(m: BlochModelPoint, w) -> tuple[float, np.ndarray]:
    """Brute-force Holevo bound via the unconstrained 2-d reduction.

    Candidate Bloch vectors x^i = l^i + xi_i l_perp stay feasible for every
    xi (checked explicitly); the objective is evaluated from raw geometry,

        h(x1, x2) = sum_ij w_ij <x^i, Q^-1 x^j> + 2 sqrt(det W) |<x^1, F x^2>|,

    and minimized by grid search plus Nelder-Mead.  Returns (value, xi*).
    """
    weight = w if isinstance(w, WeightMatrix) else WeightMatrix.from_matrix(w)
    m.require_mixed()
    d1, d2 = m.derivatives()
    dual1, dual2 = dual_vectors(m)
    perp = np.cross(d1, d2)

    # Independent feasibility check of the affine parametrization.
    constraints = np.array(
        [
            [dual1 @ d1 - 1.0, dual1 @ d2, perp @ d1, perp @ d2],
            [dual2 @ d1, dual2 @ d2 - 1.0, 0.0, 0.0],
        ]
    )
    if np.abs(constraints).max() > 1e-9:
        raise DegenerateModelError("reduced parametrization violates the constraints")

    s = m.s
    q_inv = np.eye(3) - np.outer(s, s)
    wm = weight.matrix
    sqrt_det_w = np.sqrt(weight.det)

    def objective(xi: np.ndarray) -> float:
        x1 = dual1 + xi[0] * perp
        x2 = dual2 + xi[1] * perp
        xs = (x1, x2)
        quad = sum(
            wm[i, j] * float(xs[i] @ q_inv @ xs[j]) for i in range(2) for j in range(2)
        )
        cross_term = float(x1 @ np.cross(s, x2))
        return quad + 2.0 * sqrt_det_w * abs(cross_term)

    def batch_objective(xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        x1 = dual1[None, :] + xi1[:, None] * perp[None, :]
        x2 = dual2[None, :] + xi2[:, None] * perp[None, :]
        q11 = np.einsum("ni,ij,nj->n", x1, q_inv, x1)
        q12 = np.einsum("ni,ij,nj->n", x1, q_inv, x2)
        q22 = np.einsum("ni,ij,nj->n", x2, q_inv, x2)
        cross = np.einsum("ni,ni->n", x1, np.cross(np.broadcast_to(s, x2.shape), x2))
        return (
            wm[0, 0] * q11
            + 2.0 * wm[0, 1] * q12
            + wm[1, 1] * q22
            + 2.0 * sqrt_det_w * np.abs(cross)
        )

    radius = _search_radius_2d(m, weight, perp, q_inv)
    return _grid_then_refine(objective, radius, 81, batch_fun=batch_objective)


def _search_radius_2d(m, weight, perp, q_inv) -> float:
    """Box radius 10 (alpha + |c| + 1) / lambda_min(A) of the reduced problem."""
    from .bounds import _reduction_coefficients  # local import to avoid cycle
    from .fisher import fisher_bundle

    fb = fisher_bundle(m)
    a, b, c = _reduction_coefficients(fb, weight)
    lam_min = float(np.linalg.eigvalsh(a).min())
    a_inv = invert_2x2(a, exc=SingularMatrixError)
    alpha = float(b @ a_inv @ b)
    return 10.0 * (alpha + abs(c) + 1.0) / max(lam_min, 1e-12)


def minimize_holevo_6d(dp: DensityPoint, w) -> float:
    """Brute-force Holevo bound through a generic affine parametrization.

    The four unbiasedness constraints on (x^1, x^2) in R^6 are solved by
    least squares; the remaining two directions come from the SVD null
    space.  The objective is the operator-trace Holevo function, so this
    route shares nothing with the closed Bloch-side formulas.
    """
    weight = w if isinstance(w, WeightMatrix) else WeightMatrix.from_matrix(w)
    # Recover the Bloch data from the operators themselves.
    _, s = bloch_coefficients(dp.rho)
    s = 2.0 * s.real  # rho = (I + s.sigma)/2
    d_vecs = []
    for drho in dp.derivatives():
        _, v = bloch_coefficients(drho)
        d_vecs.append(2.0 * v.real)
    d1, d2 = d_vecs

    constraint = np.zeros((4, 6))
    constraint[0, 0:3] = d1
    constraint[1, 0:3] = d2
    constraint[2, 3:6] = d1
    constraint[3, 3:6] = d2
    target = np.array([1.0, 0.0, 0.0, 1.0])

    x0, *_ = np.linalg.lstsq(constraint, target, rcond=None)
    _, svals, vt = np.linalg.svd(constraint)
    rank = int(np.sum(svals > 1e-10 * svals.max()))
    if rank != 4:
        raise DegenerateModelError("constraint matrix is rank deficient")
    null_basis = vt[4:].T  # (6, 2)

    rho = dp.rho
    sigma = np.stack(PAULI)
    wm = weight.matrix
    sqrt_det_w = np.sqrt(weight.det)

    def objective(t: np.ndarray) -> float:
        x = x0 + null_basis @ t
        op1 = -float(s @ x[0:3]) * _ID2 + sum(x[k] * PAULI[k] for k in range(3))
        op2 = -float(s @ x[3:6]) * _ID2 + sum(x[3 + k] * PAULI[k] for k in range(3))
        return _holevo_value(rho, op1, op2, weight)

    def batch_objective(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
        # Same operator traces as ``objective``, batched over grid cells.
        x = x0[None, :] + t1[:, None] * null_basis[:, 0] + t2[:, None] * null_basis[:, 1]
        op1 = (
            -(x[:, 0:3] @ s)[:, None, None] * _ID2
            + np.einsum("nk,kab->nab", x[:, 0:3], sigma)
        )
        op2 = (
            -(x[:, 3:6] @ s)[:, None, None] * _ID2
            + np.einsum("nk,kab->nab", x[:, 3:6], sigma)
        )
        z11 = np.einsum("ab,nbc,nca->n", rho, op1, op1)
        z22 = np.einsum("ab,nbc,nca->n", rho, op2, op2)
        z12 = np.einsum("ab,nbc,nca->n", rho, op2, op1)  # tr(rho X^2 X^1)
        return (
            wm[0, 0] * z11.real
            + 2.0 * wm[0, 1] * z12.real
            + wm[1, 1] * z22.real
            + 2.0 * sqrt_det_w * np.abs(z12.imag)
        )

    radius = _adaptive_radius(objective)
    value, _ = _grid_then_refine(objective, radius, 41, batch_fun=batch_objective)
    return value


def _adaptive_radius(objective, start: float = 1.0) -> float:
    """Grow the search box until the ring values exceed the center (convexity)."""
    center = objective(np.zeros(2))
    radius = start
    angles = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
    for _ in range(60):
        ring = min(
            objective(radius * np.array([np.cos(a), np.sin(a)])) for a in angles
        )
        if ring > center + 1.0:
            return radius
        radius *= 2.0
    return radius


def grid_min_quadratic_abs(a, b, c: float) -> float:
    """Grid + refinement oracle for min (xi|A xi) + 2|(b|xi) + c|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    def objective(xi: np.ndarray) -> float:
        return float(xi @ a @ xi) + 2.0 * abs(float(b @ xi) + c)

    def batch_objective(xi1: np.ndarray, xi2: np.ndarray) -> np.ndarray:
        quad = (
            a[0, 0] * xi1**2 + 2.0 * a[0, 1] * xi1 * xi2 + a[1, 1] * xi2**2
        )
        return quad + 2.0 * np.abs(b[0] * xi1 + b[1] * xi2 + c)

    lam_min = float(np.linalg.eigvalsh(a).min())
    if lam_min <= 0.0:
        raise SingularMatrixError("quadratic coefficient matrix must be positive definite")
    a_inv = invert_2x2(a, exc=SingularMatrixError)
    alpha = float(b @ a_inv @ b)
    radius = 10.0 * (alpha + abs(c) + 1.0) / lam_min
    value, _ = _grid_then_refine(objective, radius, 201, batch_fun=batch_objective)
    return value
