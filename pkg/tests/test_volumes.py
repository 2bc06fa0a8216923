import math
from fractions import Fraction as F

import numpy as np
import pytest

from conevol.catalog import build_cones
from conevol.cone import (
    cone_from_generators,
    cone_from_inequalities,
    face_lattice,
    polar,
    product,
)
from conevol.exactlin import mat
from conevol.volumes import (
    AmbiguousProjection,
    IVExact,
    SampleConfig,
    estimate_iv,
    exact_iv,
    external_angle,
    grassmann_angles,
    haar_rotation,
    internal_angle,
    iv_polynomial,
    moreau_project,
    solid_angle,
    statdim_mc,
    statistical_dimension,
    tangent_cone,
)

ORTHANT2 = cone_from_generators([[1, 0], [0, 1]], [], 2)
ORTHANT3 = cone_from_generators([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [], 3)
HALFPLANE = cone_from_inequalities([[0, -1]], 2)
WEDGE45 = cone_from_generators([[1, 0], [1, 1]], [], 2)
SQUARE = cone_from_generators([[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]], [], 3)


def test_moreau_orthant_mixed_signs():
    fl = face_lattice(ORTHANT2)
    p, q, face = moreau_project(ORTHANT2, fl, [1.0, -1.0])
    assert np.allclose(p, [1, 0]) and np.allclose(q, [0, -1])
    assert face.dim == 1 and face.cone.generators == mat([[1, 0]])


def test_moreau_interior_point():
    fl = face_lattice(ORTHANT2)
    p, q, face = moreau_project(ORTHANT2, fl, [2.0, 3.0])
    assert np.allclose(p, [2, 3]) and np.allclose(q, [0, 0])
    assert face.cone == ORTHANT2


def test_moreau_halfplane():
    fl = face_lattice(HALFPLANE)
    p, q, face = moreau_project(HALFPLANE, fl, [3.0, -2.0])
    assert np.allclose(p, [3, 0]) and np.allclose(q, [0, -2])
    assert face.cone.is_subspace and face.dim == 1


def test_moreau_identity_properties():
    rng = np.random.default_rng(9)
    for c in (ORTHANT3, WEDGE45, HALFPLANE, SQUARE):
        fl = face_lattice(c)
        for x in rng.standard_normal((60, c.d)):
            p, q, _ = moreau_project(c, fl, x)
            assert np.linalg.norm(p + q - x) < 1e-9
            assert abs(float(np.dot(p, q))) < 1e-9
            # q is in the polar cone
            for g in c.generators:
                assert np.dot(q, [float(v) for v in g]) < 1e-9


def test_estimate_subspace_exact():
    plane = cone_from_generators([], [[1, 0, 0], [0, 1, 0]], 3)
    est = estimate_iv(plane, SampleConfig(n_samples=1500, seed=7))
    assert est.values == (0.0, 0.0, 1.0, 0.0)


def test_estimate_orthant3_binomial():
    est = estimate_iv(ORTHANT3, SampleConfig(n_samples=100_000, seed=11))
    for k in range(4):
        exact = math.comb(3, k) / 8
        assert abs(est.values[k] - exact) <= 4 * est.std_errors[k]
    assert sum(est.face_hit_counts) == est.n_samples
    assert sum(F(h, est.n_samples) for h in est.face_hit_counts) == 1


def test_estimate_planar_wedge():
    # arc measure: v2 = (pi/4)/(2 pi) = 1/8, v1 = 1/2, v0 = 3/8
    est = estimate_iv(WEDGE45, SampleConfig(n_samples=50_000, seed=3))
    for k, exact in enumerate((0.375, 0.5, 0.125)):
        assert abs(est.values[k] - exact) <= 4 * est.std_errors[k]


def test_estimate_deterministic_and_worker_split():
    a = estimate_iv(ORTHANT3, SampleConfig(n_samples=30_000, seed=5))
    b = estimate_iv(ORTHANT3, SampleConfig(n_samples=30_000, seed=5))
    assert a.values == b.values and a.face_hit_counts == b.face_hit_counts
    c = estimate_iv(ORTHANT3, SampleConfig(n_samples=30_000, seed=5, workers=3))
    assert c.values != a.values  # different substream split
    d = estimate_iv(ORTHANT3, SampleConfig(n_samples=30_000, seed=5, workers=3))
    assert c.values == d.values


def test_orthogonal_invariance_signed_permutation():
    # swap axes and negate z: an exact orthogonal image of the square cone
    perm = cone_from_generators(
        [[0, 1, 0], [1, 1, 0], [1, 1, -1], [0, 1, -1]], [], 3
    )
    e1 = estimate_iv(SQUARE, SampleConfig(n_samples=50_000, seed=21))
    e2 = estimate_iv(perm, SampleConfig(n_samples=50_000, seed=22))
    for k in range(4):
        se = math.hypot(e1.std_errors[k], e2.std_errors[k])
        assert abs(e1.values[k] - e2.values[k]) <= 4 * se


def test_polarity_reverses_estimates():
    e1 = estimate_iv(SQUARE, SampleConfig(n_samples=50_000, seed=23))
    e2 = estimate_iv(polar(SQUARE), SampleConfig(n_samples=50_000, seed=24))
    for k in range(4):
        se = math.hypot(e1.std_errors[k], e2.std_errors[3 - k])
        assert abs(e1.values[k] - e2.values[3 - k]) <= 4 * se


def test_product_rule_estimates():
    prod = product(WEDGE45, WEDGE45)
    ep = estimate_iv(prod, SampleConfig(n_samples=60_000, seed=25))
    ex = exact_iv(WEDGE45)
    conv = np.convolve([float(v) for v in ex.values], [float(v) for v in ex.values])
    for k in range(5):
        assert abs(ep.values[k] - conv[k]) <= 4 * ep.std_errors[k] + 1e-12


def test_self_dual_symmetry():
    # the rotated orthant (1,1),(1,-1) is self-dual: C = -C°
    c = cone_from_generators([[1, 1], [1, -1]], [], 2)
    neg_polar = cone_from_generators([[-x for x in g] for g in polar(c).generators], [], 2)
    assert neg_polar == c
    est = estimate_iv(c, SampleConfig(n_samples=50_000, seed=26))
    assert abs(est.values[0] - est.values[2]) <= 4 * math.hypot(
        est.std_errors[0], est.std_errors[2]
    )


def test_exact_iv_orthants():
    ex = exact_iv(cone_from_generators(np.eye(4, dtype=int).tolist(), [], 4))
    assert ex.values == tuple(F(math.comb(4, k), 16) for k in range(5))


def test_exact_iv_product_with_subspace():
    c = cone_from_generators([[1, 0, 0], [0, 1, 0]], [[0, 0, 1]], 3)
    ex = exact_iv(c)
    assert ex.values == (F(0), F(1, 4), F(1, 2), F(1, 4))


def test_exact_iv_polar_route():
    assert exact_iv(polar(ORTHANT3)).values == tuple(
        F(math.comb(3, k), 8) for k in range(4)
    )


def test_exact_iv_ray_and_unsupported():
    ray = cone_from_generators([[1, 1]], [], 2)
    assert exact_iv(ray).values == (F(1, 2), F(1, 2), F(0))
    assert exact_iv(SQUARE) is None  # no closed form is claimed


def test_exact_iv_sums_to_one():
    for name, c in build_cones():
        ex = exact_iv(c)
        if ex is None:
            continue
        total = sum(float(v) for v in ex.values)
        assert abs(total - 1.0) < 1e-12, name
        assert all(float(v) >= -1e-15 for v in ex.values), name


def test_iv_polynomial():
    line = cone_from_generators([], [[1, 0]], 2)
    assert iv_polynomial(exact_iv(line)) == (0, 1, 0)
    # orthant2: (1 + t)^2 / 4
    ex = exact_iv(ORTHANT2)
    assert iv_polynomial(ex) == (F(1, 4), F(1, 2), F(1, 4))
    # multiplicative under products
    w = exact_iv(WEDGE45)
    pw = exact_iv(product(WEDGE45, WEDGE45))
    conv = np.convolve([float(v) for v in w.values], [float(v) for v in w.values])
    assert np.allclose([float(v) for v in pw.values], conv)


def test_statistical_dimension():
    plane = cone_from_generators([], [[1, 0, 0], [0, 1, 0]], 3)
    assert statistical_dimension(exact_iv(plane)) == 2
    assert statistical_dimension(exact_iv(ORTHANT3)) == F(3, 2)
    assert statistical_dimension(exact_iv(HALFPLANE)) == F(3, 2)


def test_statdim_mc_agreement():
    val, se = statdim_mc(ORTHANT3, SampleConfig(n_samples=60_000, seed=5))
    assert abs(val - 1.5) <= 4 * se


def test_grassmann_angles():
    h = grassmann_angles(exact_iv(ORTHANT2))
    assert abs(2 * float(h[2]) - 0.5) < 1e-12  # random line hits the quadrant
    # 2-subspace in R^3 always meets a random plane nontrivially
    plane = cone_from_generators([], [[1, 0, 0], [0, 1, 0]], 3)
    h = grassmann_angles(exact_iv(plane))
    assert 2 * float(h[2]) == 2.0
    # for subspaces the Crofton reading does not apply (see verify_crofton)


def test_grassmann_monte_carlo_oracle():
    # P(random line hits the quadrant) by direct simulation
    rng = np.random.default_rng(31)
    u = rng.standard_normal((40_000, 2))
    hits = np.logical_or((u >= 0).all(axis=1), (u <= 0).all(axis=1)).mean()
    assert abs(hits - 0.5) <= 4 * math.sqrt(0.25 / 40_000)


def test_tangent_cone_and_angles():
    fl = face_lattice(ORTHANT2)
    xray = next(f for f in fl.faces if f.dim == 1 and f.cone.generators == mat([[1, 0]]))
    t = tangent_cone(ORTHANT2, xray)
    assert t == cone_from_inequalities([[0, -1]], 2)
    assert abs(solid_angle(HALFPLANE) - 0.5) < 1e-12
    # orthant3 at a ray: beta(0, F) gamma(F, C) = v_F(C) = 1/8
    fl3 = face_lattice(ORTHANT3)
    xray3 = next(f for f in fl3.faces
                 if f.dim == 1 and f.cone.generators == mat([[1, 0, 0]]))
    gamma = external_angle(xray3, ORTHANT3)
    sub = face_lattice(xray3.cone)
    beta0 = internal_angle(sub.faces[0], xray3.cone)
    assert abs(beta0 - 0.5) < 1e-12
    assert abs(gamma - 0.25) < 1e-12
    assert abs(beta0 * gamma - 0.125) < 1e-12
    # the three rays together give v_1 = 3/8
    assert abs(3 * beta0 * gamma - 0.375) < 1e-12


def test_angle_polarity_swap():
    # polarity exchanges internal and external angles of the dual pair:
    # beta(F, C) = gamma(C_diamond, F_diamond) with X_diamond = N_X C
    from conevol.cone import normal_face

    fl = face_lattice(ORTHANT3)
    for f in fl.faces:
        fd = normal_face(ORTHANT3, f)
        sub = face_lattice(fd.cone)
        zero = sub.faces[0]  # C_diamond is the zero face of the polar pair
        assert abs(internal_angle(f, ORTHANT3)
                   - external_angle(zero, fd.cone)) < 1e-12
        assert abs(external_angle(f, ORTHANT3)
                   - internal_angle(zero, fd.cone)) < 1e-12


def test_tangent_cone_wrong_parent():
    f = face_lattice(ORTHANT2).faces[0]
    with pytest.raises(ValueError):
        tangent_cone(ORTHANT3, f)


def test_haar_orthogonality():
    rng = np.random.default_rng(0)
    for _ in range(100):
        q = haar_rotation(6, rng)
        assert np.linalg.norm(q.T @ q - np.eye(6)) < 1e-10
        assert abs(abs(np.linalg.det(q)) - 1) < 1e-10


def test_haar_d1_signs():
    rng = np.random.default_rng(1)
    plus = sum(1 for _ in range(10_000) if haar_rotation(1, rng)[0, 0] > 0)
    assert abs(plus - 5000) <= 4 * 50


def test_haar_sphere_uniformity():
    # Qx is uniform on the sphere: coordinate means vanish
    rng = np.random.default_rng(2)
    x = np.array([1.0, 0.0, 0.0])
    n = 30_000
    acc = np.zeros(3)
    for _ in range(n):
        acc += haar_rotation(3, rng) @ x
    assert np.all(np.abs(acc / n) <= 4 * math.sqrt(1 / 3 / n))


def test_sample_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(n_samples=0)
    with pytest.raises(ValueError):
        SampleConfig(workers=0)


def test_moreau_bulk_invariant_100k():
    # p + q = x and <p, q> = 0 within 1e-9 for 1e5 samples per cone
    from conevol.volumes import _kernel_for

    rng = np.random.default_rng(40)
    for c in (ORTHANT3, SQUARE, HALFPLANE):
        kern = _kernel_for(c, face_lattice(c))
        g = rng.standard_normal((100_000, c.d))
        idx, pn2, ok, _ = kern.classify(g)
        assert ok.mean() > 0.999
        for j in set(idx[ok]):
            rows = g[ok][idx[ok] == j]
            q_basis = kern.bases[j]
            p = (rows @ q_basis) @ q_basis.T if q_basis.shape[1] else np.zeros_like(rows)
            q = rows - p
            # p + q = x identically; orthogonality within 1e-9 relative scale
            inner = np.abs(np.einsum("ij,ij->i", p, q))
            assert np.all(inner <= 1e-9 * np.maximum(np.einsum("ij,ij->i", rows, rows), 1.0))
