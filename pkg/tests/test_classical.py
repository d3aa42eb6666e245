import numpy as np
import pytest

from cp2q import classical as cl
from cp2q import irreps
from cp2q.qarith import qparam_float


def test_samples_are_special_unitary():
    for seed in (0, 1, 17):
        rep = cl.check_group_sample(cl.sample_su3(seed))
        assert rep["passed"], (seed, rep)


def test_sampling_deterministic():
    assert np.array_equal(cl.sample_su3(5), cl.sample_su3(5))


def test_identity_sample_chart3():
    g = cl.sample_su3(0)
    z = g[2, :]
    assert cl.active_charts(z) == [3]
    assert np.linalg.det(cl.comparison_matrix(g, 3)) == pytest.approx(-1.0)


def test_transition_identities_random_sample():
    rep = cl.transition_check(cl.sample_su3(7), tol=1e-10)
    assert rep["passed"], rep


def test_row_orthogonality_is_unitarity():
    g = cl.sample_su3(3)
    z = g[2, :]
    for j in (1, 2):
        assert abs(np.sum(z.conj() * g[j - 1, :])) < 1e-13


def test_sample_battery():
    rep = cl.run_sample_battery(samples=30, seed=2, tol=1e-10)
    assert rep["passed"], rep


def test_projector_properties_at_samples():
    for seed in (1, 9):
        p = cl.projector_of(cl.sample_su3(seed)[2, :])
        assert np.abs(p @ p - p).max() < 1e-12
        assert np.abs(p - p.conj().T).max() < 1e-12
        assert abs(np.trace(p) - 1.0) < 1e-12


def test_comparison_matrix_invertible_on_active_charts():
    for seed in (3, 4, 5):
        g = cl.sample_su3(seed)
        z = g[2, :]
        for j in cl.active_charts(z):
            det = np.linalg.det(cl.comparison_matrix(g, j))
            assert abs(det - (-1.0) ** j * z[j - 1].conjugate() ** 3) < 1e-12
            assert abs(det) > 1e-4


@pytest.mark.parametrize("obs,name", [((1, 1), "p11"), ((1, 2), "p12")])
def test_dbar_local_identity(obs, name):
    for seed in (3, 8):
        g = cl.sample_su3(seed)
        for chart in cl.active_charts(g[2, :]):
            rep = cl.dbar_local_check(cl.p_entry(*obs), g, chart, h_step=1e-5, tol=1e-6)
            assert rep["passed"], (name, seed, chart, rep["residual"])


def test_dbar_local_constant_function():
    g = cl.sample_su3(3)
    chart = cl.active_charts(g[2, :])[0]
    rep = cl.dbar_local_check(lambda p: 1.0 + 0.0j, g, chart)
    assert rep["residual"] == 0.0


def test_dbar_local_step_diagnostics():
    g = cl.sample_su3(3)
    with pytest.raises(ValueError):
        cl.dbar_local_check(cl.p_entry(1, 1), g, 1, h_step=0.5)
    with pytest.raises(ValueError):
        cl.dbar_local_check(cl.p_entry(1, 1), g, 1, h_step=1e-12)


def test_inactive_chart_rejected():
    g = cl.sample_su3(0)  # z = (0,0,1): charts 1 and 2 inactive
    with pytest.raises(ValueError):
        cl.dbar_local_check(cl.p_entry(1, 1), g, 1)


def test_classical_rep_relations():
    rep = cl.classical_rep_check()
    assert rep["passed"], rep
    assert rep["max_residual"] == 0.0


def test_commutator_ef_gives_cartan():
    assert np.array_equal(cl.SIGMA_E1 @ cl.SIGMA_F1 - cl.SIGMA_F1 @ cl.SIGMA_E1, cl.SIGMA_H1)
    assert np.array_equal(cl.SIGMA_E2 @ cl.SIGMA_F2 - cl.SIGMA_F2 @ cl.SIGMA_E2, cl.SIGMA_H2)


def test_q_fundamental_approaches_classical():
    p = qparam_float(0.999)
    perm = [1, 2, 0]
    e1 = irreps.generator_matrix((0, 1), "E1", p)[np.ix_(perm, perm)]
    assert np.abs(e1 - cl.SIGMA_E1).max() < 1e-3
    k1 = irreps.generator_matrix((0, 1), "K1", p)[np.ix_(perm, perm)]
    assert np.abs(k1 - np.eye(3)).max() < 1e-3 + 0.001  # q^(+-1/2) near 1
