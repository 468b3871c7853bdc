"""Oracle-versus-closed-form verification suite.

``run_verification`` draws seeded random model points and weights, evaluates
every structural identity through both the Bloch-vector closed forms and the
density-matrix oracle, and reports the worst residual per check against a
fixed tolerance.  The suite is what ``holevo2q verify`` runs and what the
acceptance tests call.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bloch import ell_perp, f_matrix, q_inverse, rld_bloch_vectors, sld_bloch_vectors
from .bounds import bound_z, holevo_bound
from .fisher import fisher_bundle, fisher_determinant_identities, invert_2x2
from .oracle import (
    commutation_operator,
    density_point,
    dual_operators,
    minimize_holevo_2d,
    minimize_holevo_6d,
    operator_fisher,
    rld_operators,
    sld_inner,
    sld_operators,
)
from .sampling import random_generic_pair, random_model_point, random_weight

__all__ = ["CheckRow", "VerificationReport", "run_verification"]


@dataclass
class CheckRow:
    name: str
    tolerance: float
    value: float
    witness: str = ""

    @property
    def ok(self) -> bool:
        return self.value <= self.tolerance


@dataclass
class VerificationReport:
    seed: int
    count: int
    rows: list[CheckRow] = field(default_factory=list)
    branch_counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.rows)

    def table(self) -> str:
        width = max(len(row.name) for row in self.rows)
        lines = [
            f"verification suite: seed={self.seed} count={self.count}",
            f"{'check'.ljust(width)}  {'max residual':>14}  {'tolerance':>10}  status",
        ]
        for row in self.rows:
            status = "ok" if row.ok else "FAIL"
            lines.append(
                f"{row.name.ljust(width)}  {row.value:14.3e}  {row.tolerance:10.1e}  {status}"
            )
        if self.branch_counts:
            counts = ", ".join(f"{k}: {v}" for k, v in sorted(self.branch_counts.items()))
            lines.append(f"branches: {counts}")
        return "\n".join(lines)


class _Tracker:
    """Collects the worst residual per check plus the instance that hit it."""

    def __init__(self):
        self.values: dict[str, float] = {}
        self.witnesses: dict[str, str] = {}

    def note(self, name: str, value: float, witness: str = "") -> None:
        value = float(value)
        if value > self.values.get(name, -np.inf):
            self.values[name] = value
            self.witnesses[name] = witness

    def row(self, name: str, tolerance: float) -> CheckRow:
        return CheckRow(
            name=name,
            tolerance=tolerance,
            value=self.values.get(name, 0.0),
            witness=self.witnesses.get(name, ""),
        )


def _describe(m) -> str:
    return (
        f"s={np.array2string(m.s, precision=10)} "
        f"d1s={np.array2string(m.d1s, precision=10)} "
        f"d2s={np.array2string(m.d2s, precision=10)}"
    )


def run_verification(
    seed: int = 42, count: int = 200, inject_failure: bool = False
) -> VerificationReport:
    """Run every cross-path check on ``count`` random instances."""
    rng = np.random.default_rng(seed)
    track = _Tracker()

    for _ in range(count):
        m = random_model_point(rng)
        witness = _describe(m)
        fb = fisher_bundle(m)
        dp = density_point(m)
        rho = dp.rho

        # Defining operator equations.
        l_ops = sld_operators(dp)
        lt_ops = rld_operators(dp)
        for i, drho in enumerate(dp.derivatives()):
            sym = 0.5 * (rho @ l_ops[i] + l_ops[i] @ rho)
            track.note("sld_defining_equation", np.abs(drho - sym).max(), witness)
            track.note(
                "rld_defining_equation", np.abs(drho - rho @ lt_ops[i]).max(), witness
            )

        # Cross-path Fisher equality (entrywise, relative to matrix scale).
        g_op, gt_op, z_op = operator_fisher(dp)
        track.note(
            "cross_path_sld_fisher",
            np.abs(g_op - fb.g).max() / max(1.0, np.abs(fb.g).max()),
            witness,
        )
        track.note(
            "cross_path_rld_fisher",
            np.abs(gt_op - fb.g_tilde).max() / max(1.0, np.abs(fb.g_tilde).max()),
            witness,
        )
        track.note(
            "cross_path_z_matrix",
            np.abs(z_op - fb.z).max() / max(1.0, np.abs(fb.z).max()),
            witness,
        )

        # Structural identities.
        w = random_weight(rng)
        ids = fisher_determinant_identities(m, w)
        track.note("identity_quadratic_determinant", ids.quadratic_vs_determinants, witness)
        track.note("identity_trabs_forms", ids.trabs_consistency, witness)
        track.note("identity_gamma_gap", ids.gamma_gap, witness)
        track.note(
            "im_z_equals_im_rld_inverse",
            np.abs(fb.z.imag - fb.g_tilde_inv.imag).max(),
            witness,
        )
        diff = fb.g_inv - fb.g_tilde_inv.real
        evals = np.linalg.eigvalsh(diff)
        scale = max(float(np.abs(fb.g_inv).max()), 1.0)
        track.note(
            "rank_one_law", max(abs(evals[0]), max(0.0, -evals[1])) / scale, witness
        )
        f = f_matrix(m)
        l1, l2 = sld_bloch_vectors(m)
        lt1, lt2 = rld_bloch_vectors(m)
        track.note(
            "sld_rld_vector_consistency",
            max(
                np.abs((np.eye(3) + 1j * f) @ lt1 - l1).max(),
                np.abs((np.eye(3) + 1j * f) @ lt2 - l2).max(),
            ),
            witness,
        )
        qi = q_inverse(m)
        orth = max(
            abs(float(fb.dual1 @ qi @ l1) - 1.0),
            abs(float(fb.dual1 @ qi @ l2)),
            abs(float(fb.dual2 @ qi @ l1)),
            abs(float(fb.dual2 @ qi @ l2) - 1.0),
        )
        track.note("dual_orthogonality", orth, witness)
        perp = ell_perp(m)
        one_minus = fb.one_minus_s_sq
        track.note(
            "perp_gamma_relations",
            max(
                abs(float(perp @ f @ fb.dual2) - one_minus * fb.gamma[0]),
                abs(float(perp @ f @ fb.dual1) + one_minus * fb.gamma[1]),
            ),
            witness,
        )
        detg = float(np.linalg.det(fb.g))
        detgt = float(np.linalg.det(fb.g_tilde).real)
        track.note(
            "determinant_chain", abs(one_minus * detgt - detg) / abs(detg), witness
        )

        # Commutation-operator relations.
        duals = dual_operators(dp)
        g_inv = invert_2x2(g_op)
        gt_inv = invert_2x2(gt_op)
        rduals = (
            gt_inv[0, 0] * lt_ops[0] + gt_inv[1, 0] * lt_ops[1],
            gt_inv[0, 1] * lt_ops[0] + gt_inv[1, 1] * lt_ops[1],
        )
        for i in range(2):
            recon = lt_ops[i] + 1j * commutation_operator(dp, lt_ops[i])
            track.note(
                "commutation_reconstruction", np.abs(recon - l_ops[i]).max(), witness
            )
            d_dual = commutation_operator(dp, duals[i])
            for j in range(2):
                track.note(
                    "commutation_sld_pairing",
                    abs(sld_inner(rho, duals[j], d_dual) - z_op[j, i].imag),
                    witness,
                )
                track.note(
                    "commutation_mixed_pairing",
                    abs(
                        sld_inner(rho, rduals[j], d_dual)
                        - (-1j) * (gt_inv[j, i] - g_inv[j, i])
                    ),
                    witness,
                )

        # Bound inequalities.
        report = holevo_bound(fb, w)
        slack_scale = 1e-10 * abs(report.c_z)
        violation = max(
            report.c_h - report.c_z - slack_scale,
            report.c_s - report.c_h - slack_scale,
            report.c_r - report.c_h - slack_scale,
            0.0,
        )
        track.note("bound_inequality_chain", violation, witness)

    # Closed form versus brute-force minimization, on fresh generic pairs.
    branch_counts: dict[str, int] = {}
    for _ in range(count):
        m, w = random_generic_pair(rng)
        witness = _describe(m)
        fb = fisher_bundle(m)
        report = holevo_bound(fb, w)
        branch_counts[report.branch.value] = branch_counts.get(report.branch.value, 0) + 1
        value_2d, _ = minimize_holevo_2d(m, w)
        track.note(
            "holevo_vs_reduced_search",
            abs(value_2d - report.c_h) / abs(report.c_h),
            witness,
        )
        value_6d = minimize_holevo_6d(density_point(m), w)
        track.note(
            "holevo_vs_constrained_search",
            abs(value_6d - report.c_h) / abs(report.c_h),
            witness,
        )
        track.note(
            "z_bound_from_duals",
            abs(bound_z(fb, w) - _holevo_at_duals(m, w)) / abs(report.c_z),
            witness,
        )

    tolerances = {
        "sld_defining_equation": 1e-12,
        "rld_defining_equation": 1e-12,
        "cross_path_sld_fisher": 1e-10,
        "cross_path_rld_fisher": 1e-10,
        "cross_path_z_matrix": 1e-10,
        "identity_quadratic_determinant": 1e-10,
        "identity_trabs_forms": 1e-10,
        "identity_gamma_gap": 1e-10,
        "im_z_equals_im_rld_inverse": 1e-12,
        "rank_one_law": 1e-10,
        "sld_rld_vector_consistency": 1e-12,
        "dual_orthogonality": 1e-10,
        "perp_gamma_relations": 1e-10,
        "determinant_chain": 1e-10,
        "commutation_reconstruction": 1e-10,
        "commutation_sld_pairing": 1e-10,
        "commutation_mixed_pairing": 1e-10,
        "bound_inequality_chain": 0.0,
        "holevo_vs_reduced_search": 1e-8,
        "holevo_vs_constrained_search": 1e-8,
        "z_bound_from_duals": 1e-10,
    }
    if inject_failure:
        tolerances["cross_path_sld_fisher"] = 0.0

    report = VerificationReport(seed=seed, count=count, branch_counts=branch_counts)
    for name, tol in tolerances.items():
        report.rows.append(track.row(name, tol))
    return report


def _holevo_at_duals(m, w) -> float:
    """Holevo function at the feasible point given by the dual vectors;
    equals the D-invariant bound by construction."""
    from .oracle import holevo_function, pair_from_bloch_vectors

    fb = fisher_bundle(m)
    dp = density_point(m)
    pair = pair_from_bloch_vectors(m, fb.dual1, fb.dual2)
    return holevo_function(dp, pair, w)
