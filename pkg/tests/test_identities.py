import math

import pytest

from conevol.arrangement import arrangement, named_family
from conevol.cone import (
    cone_from_generators,
    cone_from_inequalities,
    face_lattice,
)
from conevol.identities import (
    rationalize_matrix,
    verify_crofton_probability,
    verify_euler,
    verify_face_alternation,
    verify_family_statdim,
    verify_finite_double_count,
    verify_gauss_bonnet,
    verify_generalized_sommerville,
    verify_generic_slice,
    verify_genfun_alternation,
    verify_hug_schneider,
    verify_kinematic,
    verify_klivans_swartz,
    verify_mcmullen_inverse,
    verify_polar_kinematic,
    verify_sommerville,
    verify_statdim_alternation,
    verify_statdim_consistency,
    verify_steiner_mgf,
    verify_transverse_duality,
    verify_zaslavsky,
)
from conevol.volumes import SampleConfig

ORTHANT2 = cone_from_generators([[1, 0], [0, 1]], [], 2)
ORTHANT3 = cone_from_generators([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [], 3)
SQUARE = cone_from_generators([[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]], [], 3)
HALF_NEG = cone_from_generators([[-1]], [], 1)
PLANE = cone_from_generators([], [[1, 0, 0], [0, 1, 0]], 3)
HALFPLANE = cone_from_inequalities([[0, -1]], 2)
CFG = SampleConfig(n_samples=25_000, seed=424)


def test_euler_reports():
    assert verify_euler(ORTHANT3).passed
    r = verify_euler(PLANE)
    assert r.passed and r.lhs == 1  # (-1)^2 subspace branch
    assert verify_euler(SQUARE).passed


def test_sommerville_half_line():
    # v_0 = 1/2; faces contribute v_0({0}) - v_0(C) = 1 - 1/2
    r = verify_sommerville(HALF_NEG, CFG)
    assert r.passed
    assert abs(r.lhs - 0.5) < 0.02 and abs(r.rhs - 0.5) < 0.02


def test_sommerville_lineality_short_circuit():
    r = verify_sommerville(HALFPLANE, CFG)
    assert r.passed and "lineality" in r.notes


def test_sommerville_orthant3():
    assert verify_sommerville(ORTHANT3, CFG).passed


def test_generalized_sommerville():
    fl = face_lattice(ORTHANT2)
    ray = next(f for f in fl.faces if f.dim == 1)
    r = verify_generalized_sommerville(ORTHANT2, ray, CFG)
    assert r.passed
    # LHS is -v_G(C) = -1/4 for the quarter-plane at a ray
    assert abs(r.lhs + 0.25) < 0.02
    zero = next(f for f in fl.faces if f.dim == 0)
    assert verify_generalized_sommerville(ORTHANT2, zero, CFG).passed
    with pytest.raises(ValueError):
        verify_generalized_sommerville(ORTHANT3, ray, CFG)


def test_face_alternation():
    r = verify_face_alternation(ORTHANT3, 1, CFG)
    assert r.passed and abs(r.lhs + 0.375) < 0.02  # (-1) 3/8
    assert verify_face_alternation(PLANE, 2, CFG).passed
    assert verify_face_alternation(cone_from_generators([[1, 0], [1, 1]], [], 2), 0, CFG).passed
    with pytest.raises(ValueError):
        verify_face_alternation(ORTHANT2, 5, CFG)


def test_gauss_bonnet():
    assert verify_gauss_bonnet(ORTHANT3, CFG).passed
    r = verify_gauss_bonnet(cone_from_generators([], [[1, 0, 0]], 3), CFG)
    assert r.passed and r.rhs == -1  # (-1)^1 subspace case
    assert verify_gauss_bonnet(SQUARE, CFG).passed


def test_statdim_alternation():
    r = verify_statdim_alternation(ORTHANT2, CFG)
    assert r.passed
    assert abs(r.lhs) < 0.05 and abs(r.rhs) < 0.05  # both sides are 0 here
    assert verify_statdim_alternation(PLANE, CFG).passed


def test_genfun_alternation():
    for t in (0.0, 0.5, 1.0):
        assert verify_genfun_alternation(ORTHANT2, t, CFG).passed
    assert verify_genfun_alternation(HALF_NEG, 0.5, CFG).passed


def test_steiner_mgf_subspace_exact_chi2():
    r = verify_steiner_mgf(PLANE, [-1.0, -0.5, 0.3], CFG)
    assert r.passed


def test_steiner_mgf_orthants():
    assert verify_steiner_mgf(ORTHANT2, [0.3], CFG).passed
    assert verify_steiner_mgf(ORTHANT3, [-1.0, -0.5, 0.3], CFG).passed


def test_steiner_mgf_domain_error():
    with pytest.raises(ValueError):
        verify_steiner_mgf(ORTHANT2, [float("inf")], CFG)


def test_statdim_consistency():
    assert verify_statdim_consistency(ORTHANT3, CFG).passed
    assert verify_statdim_consistency(HALFPLANE, CFG).passed


def test_mcmullen_inverse_exact_cones():
    r = verify_mcmullen_inverse(ORTHANT2, CFG)
    assert r.passed and r.residual_or_z == 0.0  # all angles exact
    assert verify_mcmullen_inverse(HALF_NEG, CFG).passed


def test_kinematic_orthant_pair():
    # oracle: conv(v(orthant2), v(orthant2)) at index 3 is
    # v_1 v_2 + v_2 v_1 = 2 * (1/2)(1/4) = 1/4
    v = [0.25, 0.5, 0.25]
    rhs = sum(v[i] * v[3 - i] for i in range(1, 3))
    assert rhs == 0.25
    r = verify_kinematic(ORTHANT2, ORTHANT2, 1, trials=96,
                         cfg=SampleConfig(n_samples=1024, seed=5))
    assert r.passed and abs(r.rhs - 0.25) < 1e-12


def test_kinematic_full_space_identity():
    full = cone_from_inequalities([], 2)
    r = verify_kinematic(full, ORTHANT2, 1, trials=48,
                         cfg=SampleConfig(n_samples=1024, seed=6))
    assert r.passed
    assert abs(r.rhs - 0.5) < 1e-12  # v_1(D) = 1/2


def test_kinematic_crofton_subspace_case():
    # L of codimension m: E[v_k(C ∩ QL)] = v_{k+m}(C)
    plane = cone_from_generators([], [[1, 0, 0], [0, 1, 0]], 3)  # m = 1
    r = verify_kinematic(ORTHANT3, plane, 1, trials=96,
                         cfg=SampleConfig(n_samples=1024, seed=7))
    assert r.passed and abs(r.rhs - 0.375) < 1e-12  # v_2 = 3/8
    line = cone_from_generators([], [[1, 1, 1]], 3)  # m = 2
    r = verify_kinematic(ORTHANT3, line, 1, trials=96,
                         cfg=SampleConfig(n_samples=1024, seed=7))
    assert r.passed and abs(r.rhs - 0.125) < 1e-12  # v_3 = 1/8


def test_polar_kinematic():
    ray = cone_from_generators([[1, 0]], [], 2)
    r = verify_polar_kinematic(ray, ray, 1, trials=96,
                               cfg=SampleConfig(n_samples=1024, seed=8))
    assert r.passed
    zero = cone_from_inequalities([[-1, 0], [0, -1], [1, 1]], 2)
    r = verify_polar_kinematic(zero, ORTHANT2, 1, trials=32,
                               cfg=SampleConfig(n_samples=1024, seed=9))
    assert r.passed  # {0} + QD = QD: E v_1 = v_1(D)


def test_crofton_orthant_vs_line():
    line = cone_from_generators([], [[1, 0]], 2)
    r = verify_crofton_probability(ORTHANT2, line, trials=30_000,
                                   cfg=SampleConfig(n_samples=1000, seed=10))
    assert r.passed and abs(r.rhs - 0.5) < 1e-12


def test_crofton_skip_two_subspaces():
    line3 = cone_from_generators([], [[0, 0, 1]], 3)
    r = verify_crofton_probability(PLANE, line3, 100, CFG)
    assert r.status == "skip"


def test_crofton_general_cone_pair():
    r = verify_crofton_probability(ORTHANT2, ORTHANT2, trials=600,
                                   cfg=SampleConfig(n_samples=1000, seed=11))
    assert r.passed


def test_transverse_duality_exact():
    # the upper wedge meets the orthant's relative interior
    wedge = cone_from_generators([[1, 1], [-1, 1]], [], 2)
    r = verify_transverse_duality(ORTHANT2, wedge)
    assert r.passed and "pairs checked" in r.notes
    assert int(r.lhs.split()[0]) > 0


def test_finite_double_count():
    cyclic4 = [tuple((i + s) % 4 for i in range(4)) for s in range(4)]
    assert verify_finite_double_count(4, {0, 1}, {0, 2}, cyclic4).passed
    assert verify_finite_double_count(4, set(range(4)), {1, 2}, cyclic4).passed
    assert verify_finite_double_count(4, set(), {1}, cyclic4).passed
    with pytest.raises(ValueError):
        verify_finite_double_count(4, {0}, {1}, [tuple(range(4))])


def test_zaslavsky_report():
    assert verify_zaslavsky(named_family("braid", 3)).passed
    assert verify_zaslavsky(arrangement([[1, 0], [0, 1], [1, 1]], 2)).passed


def test_klivans_swartz_small():
    cfg = SampleConfig(n_samples=25_000, seed=99)
    for j in (1, 2, 3):
        assert verify_klivans_swartz(named_family("braid", 3), j, cfg).passed
    r = verify_klivans_swartz(named_family("bc", 2), 2, cfg)
    assert r.passed and r.rhs == [3, 4, 1]
    # three concurrent lines, j = 1: six rays summing to (3, 3)
    r = verify_klivans_swartz(arrangement([[1, 0], [0, 1], [1, 1]], 2), 1, cfg)
    assert r.passed and r.rhs == [3, 3]


def test_generic_slice_braid4():
    for j in (2, 3, 4):
        assert verify_generic_slice(named_family("braid", 4), j, seed=3).passed
    with pytest.raises(ValueError):
        verify_generic_slice(named_family("braid", 3), 1)


def test_hug_schneider():
    assert verify_hug_schneider(3, 2, SampleConfig(n_samples=25_000, seed=12)).passed
    assert verify_hug_schneider(2, 2, SampleConfig(n_samples=25_000, seed=13)).passed


def test_family_statdim():
    assert verify_family_statdim("braid", 2, SampleConfig(n_samples=25_000, seed=14)).passed
    assert verify_family_statdim("bc", 1, SampleConfig(n_samples=25_000, seed=15)).passed


def test_rationalize_matrix_accuracy():
    import numpy as np

    rng = np.random.default_rng(0)
    from conevol.volumes import haar_rotation

    q = haar_rotation(3, rng)
    qm = rationalize_matrix(q)
    for i in range(3):
        for j in range(3):
            assert abs(float(qm[i][j]) - q[i, j]) <= 2 ** -40


def test_report_json_shape():
    r = verify_euler(ORTHANT2)
    obj = r.to_json()
    assert set(obj) == {
        "identity", "status", "lhs", "rhs", "residual_or_z",
        "n_samples", "n_trials", "seed", "notes",
    }


def test_steiner_mgf_t_zero_trivial():
    # s(0) = 0: both sides of the MGF comparison are identically 1
    r = verify_steiner_mgf(ORTHANT2, [0.0], CFG)
    assert r.passed and r.residual_or_z <= CFG.tolerance_sigmas
