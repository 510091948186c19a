import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wignerlab import covariance as cov
from wignerlab import criteria as cr
from wignerlab import linalg, states
from wignerlab.criteria import Decision
from wignerlab.exceptions import ConsistencyError, InvalidInputError
from wignerlab.phase_space import SIGMA_X, SIGMA_Y, SIGMA_Z, wigner_of, wigner_values

from conftest import table_to_grid

SQ3 = math.sqrt(3)
ENT, SEP, INC = Decision.ENTANGLED, Decision.SEPARABLE, Decision.INCONCLUSIVE
seeds = st.integers(0, 2**32 - 1)

# an entangled, full-rank state whose grids W and W^T2 are both nonnegative
# (rounded to 3 decimals, renormalized below)
DUAL_COUNTEREXAMPLE_RE = [
    [0.286, 0.013, 0.092, 0.03],
    [0.013, 0.273, 0.028, -0.14],
    [0.092, 0.028, 0.289, -0.093],
    [0.03, -0.14, -0.093, 0.153],
]
DUAL_COUNTEREXAMPLE_IM = [
    [0, -0.08, 0.027, 0.079],
    [0.08, 0, 0.008, 0.079],
    [-0.027, -0.008, 0, 0.031],
    [-0.079, -0.079, -0.031, 0],
]


def coherent_product():
    return states.product(states.coherent((1 + 1j) / (1 - SQ3)), states.basis_state("0"))


def bloch(n):
    return 0.5 * (np.eye(2) + n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z)


def test_werner_pt_grid_table():
    for x in (0.0, 0.2, 1 / 3, 0.8, 1.0):
        a, b = (1 - x) / 16, (1 + 3 * x) / 16
        expected = table_to_grid([[a, a, a, a], [a, b, b, a], [a, b, b, a], [a, a, a, a]])
        pair = cr.wigner_pt(states.werner(x))
        np.testing.assert_allclose(pair.w_pt.values, expected, atol=1e-12)


@given(seeds)
def test_tau_matches_direct_pt(seed):
    rho = states.random_mixed(np.random.default_rng(seed))
    pair = cr.wigner_pt(rho)
    direct = wigner_values(linalg.partial_transpose_second(rho.mat))
    np.testing.assert_allclose(pair.w_pt.values, direct, atol=1e-14)
    np.testing.assert_allclose(pair.w.values - pair.tau, direct, atol=1e-14)


def test_negativity_examples():
    assert cr.negativity_criterion(wigner_of(states.bell("psi_minus"))).decision is ENT
    v = cr.negativity_criterion(wigner_of(coherent_product()))
    assert v.decision is INC
    assert abs(v.margin) < 1e-12
    assert cr.negativity_criterion(np.full(16, 1 / 16)).decision is INC
    with pytest.raises(InvalidInputError):
        cr.negativity_criterion(np.full(4, 0.25))


def test_negativity_bound_crossed_by_product_state():
    # single-qubit grids reach (1+sqrt3)/4, not 1/2, so products go down to -1/8
    n = np.ones(3) / SQ3
    rho = states.product(bloch(-n), bloch(n))
    assert math.isclose(wigner_of(rho).min(), -1 / 8, abs_tol=1e-15)
    assert cr.ppt_oracle(rho).decision is SEP
    assert cr.negativity_criterion(wigner_of(rho)).decision is ENT


@pytest.mark.parametrize("kind", states.BELL_KINDS)
def test_ppt_oracle_bell(kind):
    v = cr.ppt_oracle(states.bell(kind))
    assert v.decision is ENT
    assert math.isclose(v.margin, -0.5, abs_tol=1e-12)


def test_ppt_oracle_werner():
    assert cr.ppt_oracle(states.werner(0.2)).decision is SEP
    assert cr.ppt_oracle(states.werner(0.5)).decision is ENT
    assert abs(cr.ppt_oracle(states.werner(1 / 3)).margin) < 1e-10


def test_ppt_oracle_separable_samples(rng):
    for rho in states.random_separable(rng, size=200):
        assert cr.ppt_oracle(rho).decision is SEP


@pytest.mark.parametrize("x", [0.0, 1 / 3, 1.0, 0.25, 0.6])
def test_witness_phi_plus_on_werner(x):
    value = cr.witness_overlap(states.werner(x), states.bell("phi_plus"))
    assert math.isclose(value, (1 - 3 * x) / 16, abs_tol=1e-12)


def test_witness_rejects_invalid():
    bad = np.zeros(16)
    bad[0] = 1.0
    with pytest.raises(InvalidInputError):
        cr.witness_overlap(states.werner(1), bad)


@given(seeds)
def test_witness_sign_law_for_ppt_states(seed):
    rng = np.random.default_rng(seed)
    rho = states.random_separable(rng)
    pair = cr.wigner_pt(rho)
    for w in states.random_pure(rng, size=20):
        assert cr.witness_overlap(pair, w) >= -1e-10


def test_dual_nonnegativity_examples():
    assert cr.dual_nonnegativity(states.werner(0.3)).decision is SEP
    assert cr.dual_nonnegativity(states.werner(0.5)).decision is INC
    assert cr.dual_nonnegativity(coherent_product()).decision is INC
    assert cr.dual_nonnegativity(states.maximally_mixed()).decision is SEP


def test_dual_nonnegativity_counterexample():
    m = np.array(DUAL_COUNTEREXAMPLE_RE) + 1j * np.array(DUAL_COUNTEREXAMPLE_IM)
    rho = states.DensityMatrix(m / np.trace(m).real)
    pair = cr.wigner_pt(rho)
    assert pair.w.min() > 0 and pair.w_pt.min() > 0
    assert cr.ppt_oracle(rho).decision is ENT
    assert cr.dual_nonnegativity(rho).decision is SEP


def test_lur_examples():
    phi = cov.covariance_two(states.bell("phi_plus"))
    assert cr.lur_trace(phi).decision is INC
    assert math.isclose(cr.lur_trace(phi).margin, -1.0, abs_tol=1e-12)
    singlet = cov.covariance_two(states.bell("psi_minus"))
    assert cr.lur_trace(singlet).decision is ENT
    for kind in states.BELL_KINDS:
        v = cr.lur_generalized(cov.covariance_two(states.bell(kind)))
        assert v.decision is ENT
        assert math.isclose(v.margin, 0.5, abs_tol=1e-12)
    prod = cov.covariance_two(states.product(states.basis_state("0"), states.coherent(0.4j)))
    assert cr.lur_generalized(prod).decision is INC
    assert math.isclose(cr.lur_generalized(cov.covariance_two(states.werner(0.5))).margin, 0.125)
    with pytest.raises(InvalidInputError):
        cr.lur_trace(np.eye(6))


def test_lur_trace_only_singlet_among_bell_states():
    hits = [k for k in states.BELL_KINDS
            if cr.lur_trace(cov.covariance_two(states.bell(k))).decision is ENT]
    assert hits == ["psi_minus"]


def test_gup_single_examples():
    r = cr.gup_single(states.maximally_mixed(2))
    np.testing.assert_allclose(r.matrix, np.eye(3) / 4, atol=1e-15)
    assert math.isclose(r.min_eigenvalue, 0.25)
    assert abs(cr.gup_single(states.basis_state("0")).min_eigenvalue) < 1e-10


@given(seeds)
def test_gup_psd_for_states(seed):
    rng = np.random.default_rng(seed)
    assert cr.gup_two(states.random_mixed(rng)).is_psd
    assert cr.gup_two(states.random_pure(rng)).is_psd
    assert cr.gup_single(states.random_mixed(rng, dim=2)).is_psd


def test_gup_two_maximally_mixed():
    r = cr.gup_two(states.maximally_mixed())
    assert math.isclose(r.min_eigenvalue, 0.25)


@pytest.mark.parametrize("x", [0.0, 0.2, 1 / 3, 0.8, 1.0])
def test_gup_pt_werner_table(x):
    m = np.eye(6) / 4
    m[:3, 3:] = m[3:, :3] = np.diag([-x, x, -x]) / 4
    pt = linalg.partial_transpose_second(states.werner(x).mat)
    np.testing.assert_allclose(cr.gup_matrices(pt), m, atol=1e-12)
    np.testing.assert_allclose(cr.gup_two(states.werner(x)).matrix, cov.covariance_two(states.werner(x)).V, atol=1e-12)
    assert cr.gup_pt(states.werner(x)).decision is INC


def test_gup_pt_product_and_singlet():
    assert cr.gup_pt(states.product(states.coherent(0.2), states.basis_state("1"))).decision is INC
    assert cr.gup_pt(states.bell("psi_minus")).decision is INC


def test_run_all_werner():
    r = cr.run_all(states.werner(0.9))
    assert r.oracle.decision is ENT
    assert r.by_name("lur_generalized").decision is ENT
    assert r.by_name("dual_nonnegativity").decision is INC
    r = cr.run_all(states.werner(0.2))
    assert r.oracle.decision is SEP
    assert r.by_name("dual_nonnegativity").decision is SEP
    assert all(v.decision is INC for v in r.verdicts if v.criterion != "dual_nonnegativity")


def test_run_all_raises_on_contradiction():
    m = np.array(DUAL_COUNTEREXAMPLE_RE) + 1j * np.array(DUAL_COUNTEREXAMPLE_IM)
    with pytest.raises(ConsistencyError) as err:
        cr.run_all(m / np.trace(m).real)
    names = [v.criterion for v in err.value.verdicts]
    assert names == ["dual_nonnegativity", "ppt_oracle"]


@given(seeds)
def test_batch_agrees_with_single_state(seed):
    stack = states.random_mixed(np.random.default_rng(seed), size=3)
    out = cr.evaluate_batch(stack)
    for i, rho in enumerate(stack):
        report = cr.run_all(rho, check=False)
        for v in report:
            assert out[v.criterion][i] == v.decision.value
            assert math.isclose(out[f"{v.criterion}_margin"][i], v.margin, abs_tol=1e-12)


def test_verdict_serialization():
    d = cr.ppt_oracle(states.werner(0.5)).as_dict()
    assert d["decision"] == "entangled" and d["criterion"] == "ppt_oracle"
    assert str(Decision.INCONCLUSIVE) == "Inconclusive"


def test_negative_tolerance_rejected():
    with pytest.raises(InvalidInputError):
        cr.ppt_oracle(states.werner(0.5), tol=-1)
