"""Verification-suite surface: report structure, thresholds, failure hook."""

from holevo2q.verify import run_verification


def test_small_run_all_checks_pass():
    report = run_verification(seed=123, count=8)
    assert report.passed
    names = {row.name for row in report.rows}
    expected = {
        "sld_defining_equation",
        "rld_defining_equation",
        "cross_path_sld_fisher",
        "cross_path_rld_fisher",
        "cross_path_z_matrix",
        "identity_quadratic_determinant",
        "identity_trabs_forms",
        "identity_gamma_gap",
        "im_z_equals_im_rld_inverse",
        "rank_one_law",
        "sld_rld_vector_consistency",
        "dual_orthogonality",
        "perp_gamma_relations",
        "determinant_chain",
        "commutation_reconstruction",
        "commutation_sld_pairing",
        "commutation_mixed_pairing",
        "bound_inequality_chain",
        "holevo_vs_reduced_search",
        "holevo_vs_constrained_search",
        "z_bound_from_duals",
    }
    assert names == expected
    text = report.table()
    assert "check" in text and "ok" in text and "branches:" in text


def test_reproducible_for_fixed_seed():
    a = run_verification(seed=9, count=5)
    b = run_verification(seed=9, count=5)
    assert [(r.name, r.value) for r in a.rows] == [(r.name, r.value) for r in b.rows]


def test_injected_failure_reports_witness():
    report = run_verification(seed=9, count=3, inject_failure=True)
    assert not report.passed
    failing = [row for row in report.rows if not row.ok]
    assert failing and all(row.name == "cross_path_sld_fisher" for row in failing)
    assert failing[0].witness  # reproduction data for the worst instance
