"""Gaussian geometry of polyhedral cones: Monte Carlo and closed forms.

This is the only floating-point layer.  A cone's face lattice is compiled
once into a projection kernel (orthonormal span bases, facet normals,
generators as float arrays); each standard Gaussian sample is then located
in the facial decomposition of space — the unique face F with the sample's
span-projection in relint(F) and the residual in the normal face — which
identifies the metric projection onto the cone and the face dimension to
tally.  Estimators are deterministic for a fixed (seed, workers): sample
counts are partitioned across worker substreams keyed by (seed, stream,
worker) and tallies merge by addition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cone import Cone, Face, FaceLattice, canonical_decomposition, face_lattice, polar
from .cone import cone_from_generators, cone_from_inequalities

REL_TOL = 1e-9  # relint slack relative to the sample norm


class AmbiguousProjection(RuntimeError):
    """Face identification failed; carries the two best margins."""

    def __init__(self, best: float, second: float):
        super().__init__(
            f"ambiguous face membership: best margin {best:.3e}, "
            f"second {second:.3e}"
        )
        self.best = best
        self.second = second


@dataclass(frozen=True)
class SampleConfig:
    n_samples: int = 100_000
    seed: int = 0
    workers: int = 1
    tolerance_sigmas: float = 4.0

    def __post_init__(self):
        if self.n_samples < 1 or self.workers < 1:
            raise ValueError("n_samples and workers must be positive")


@dataclass(frozen=True)
class IVEstimate:
    d: int
    values: tuple[float, ...]
    std_errors: tuple[float, ...]
    n_samples: int
    seed: int
    face_hit_counts: tuple[int, ...]
    face_dims: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "values": list(self.values),
            "std_errors": list(self.std_errors),
            "n_samples": self.n_samples,
            "seed": self.seed,
            "face_hit_counts": list(self.face_hit_counts),
        }


@dataclass(frozen=True)
class IVExact:
    d: int
    values: tuple  # Fractions where exact, floats for angle-derived entries
    provenance: str


def derive_seed(seed: int, *tags: int) -> int:
    """Stable 63-bit subseed from a base seed and integer tags."""
    ss = np.random.SeedSequence((int(seed),) + tuple(int(t) for t in tags))
    a, b = ss.generate_state(2)
    return int((int(a) << 31 ^ int(b)) & (2**63 - 1))


def _rng(seed: int, stream: int, worker: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((int(seed), stream, worker)))


class ProjectionKernel:
    """Float compilation of a face lattice for batched Moreau projection."""

    def __init__(self, c: Cone, lattice: FaceLattice):
        if lattice.cone != c:
            raise ValueError("lattice does not belong to this cone")
        self.cone = c
        self.lattice = lattice
        self.d = c.d
        gens = np.array(
            [[float(x) for x in g] for g in c.generators], dtype=float
        ).reshape(len(c.generators), c.d)
        norms = np.linalg.norm(gens, axis=1)
        self.gens_unit = gens / norms[:, None] if len(gens) else gens
        facets = np.array(
            [[float(x) for x in a] for a in c.inequalities], dtype=float
        ).reshape(len(c.inequalities), c.d)
        fnorms = np.linalg.norm(facets, axis=1)
        self.facets_unit = facets / fnorms[:, None] if len(facets) else facets
        self.face_dims = np.array([f.dim for f in lattice.faces], dtype=int)
        self.bases = []  # per-face orthonormal span basis, shape (d, k)
        self.outer = []  # per-face facet normals not active at the face
        self.outer_gens = []  # generators outside the face: the informative
        # constraints for q in N_F C (generators inside the face pair to 0)
        for f in lattice.faces:
            if f.dim == 0:
                q = np.zeros((c.d, 0))
            else:
                rows = np.array(
                    [[float(x) for x in row] for row in f.span.basis], dtype=float
                )
                q, _ = np.linalg.qr(rows.T)
            self.bases.append(q)
            out_idx = [i for i in range(len(c.inequalities)) if i not in f.active]
            self.outer.append(self.facets_unit[out_idx] if out_idx else None)
            gen_idx = [
                i for i in range(len(c.generators)) if not f.gen_mask >> i & 1
            ]
            self.outer_gens.append(self.gens_unit[gen_idx] if gen_idx else None)

    def classify(self, g: np.ndarray):
        """Locate each row of g in the facial decomposition.

        Returns (face_index, pnorm2, ok): ok is False where the margins do
        not separate a unique face beyond tolerance.
        """
        b = g.shape[0]
        nf = len(self.bases)
        tol = REL_TOL * np.maximum(np.linalg.norm(g, axis=1), 1.0)
        margins = np.empty((b, nf))
        pnorm2 = np.empty((b, nf))
        for j, q in enumerate(self.bases):
            if q.shape[1] == 0:
                p = np.zeros_like(g)
                pnorm2[:, j] = 0.0
            else:
                v = g @ q
                p = v @ q.T
                pnorm2[:, j] = np.einsum("ij,ij->i", v, v)
            out = self.outer[j]
            if out is None:
                s_rel = np.full(b, np.inf)
            else:
                s_rel = -np.max(p @ out.T, axis=1)
            ogens = self.outer_gens[j]
            if ogens is None:
                s_pol = np.full(b, np.inf)
            else:
                s_pol = -np.max((g - p) @ ogens.T, axis=1)
            margins[:, j] = np.minimum(s_rel, s_pol)
        best = np.argmax(margins, axis=1)
        m1 = margins[np.arange(b), best]
        if nf > 1:
            part = np.partition(margins, nf - 2, axis=1)
            m2 = part[:, nf - 2]
        else:
            m2 = np.full(b, -np.inf)
        ok = (m1 > tol) & (m2 < -tol)
        return best, pnorm2[np.arange(b), best], ok, (m1, m2)


def moreau_project(c: Cone, lattice: FaceLattice, x) -> tuple[np.ndarray, np.ndarray, Face]:
    """Moreau decomposition x = p + q with p in C, q in C°, p ⟂ q.

    Also identifies the unique face with p in its relative interior;
    raises AmbiguousProjection when the float margins cannot separate one.
    """
    kern = _kernel_for(c, lattice)
    x = np.asarray(x, dtype=float).reshape(1, -1)
    if x.shape[1] != c.d:
        raise ValueError("point dimension does not match the cone")
    idx, _, ok, (m1, m2) = kern.classify(x)
    if not ok[0]:
        raise AmbiguousProjection(float(m1[0]), float(m2[0]))
    q = kern.bases[idx[0]]
    p = (x @ q) @ q.T if q.shape[1] else np.zeros_like(x)
    return p[0], (x - p)[0], lattice.faces[idx[0]]


_kernel_cache: dict[Cone, ProjectionKernel] = {}


def _kernel_for(c: Cone, lattice: FaceLattice | None = None) -> ProjectionKernel:
    # the face lattice of a cone is deterministic, so a kernel cached for
    # an equal cone is valid whatever lattice object the caller holds
    kern = _kernel_cache.get(c)
    if kern is not None:
        return kern
    if lattice is None:
        lattice = face_lattice(c)
    kern = ProjectionKernel(c, lattice)
    if len(_kernel_cache) > 64:
        _kernel_cache.clear()
    _kernel_cache[c] = kern
    return kern


_BATCH = 16384


def _sample_faces(kern: ProjectionKernel, cfg: SampleConfig, stream: int):
    """Yield (face_index, pnorm2) arrays for cfg.n_samples accepted draws.

    Ambiguous draws are replaced by fresh draws from the same substream;
    raises if they exceed 0.1% of the budget.
    """
    n = cfg.n_samples
    per = [n // cfg.workers + (1 if w < n % cfg.workers else 0) for w in range(cfg.workers)]
    ambiguous = 0
    for w, n_w in enumerate(per):
        rng = _rng(cfg.seed, stream, w)
        need = n_w
        while need > 0:
            b = min(_BATCH, need)
            g = rng.standard_normal((b, kern.d))
            idx, pn2, ok, _ = kern.classify(g)
            n_ok = int(ok.sum())
            ambiguous += b - n_ok
            if ambiguous > 0.001 * n + 8:
                raise AmbiguousProjection(float("nan"), float("nan"))
            if n_ok:
                yield idx[ok], pn2[ok]
            need -= n_ok


def estimate_iv(c: Cone, cfg: SampleConfig, lattice: FaceLattice | None = None) -> IVEstimate:
    """Monte Carlo intrinsic volumes by tallying face dimensions of
    Gaussian projections; deterministic for fixed (seed, workers)."""
    kern = _kernel_for(c, lattice)
    counts = np.zeros(len(kern.face_dims), dtype=np.int64)
    for idx, _ in _sample_faces(kern, cfg, stream=0):
        counts += np.bincount(idx, minlength=len(counts))
    n = cfg.n_samples
    dim_counts = np.zeros(c.d + 1, dtype=np.int64)
    for j, dim in enumerate(kern.face_dims):
        dim_counts[dim] += counts[j]
    values = dim_counts / n
    ses = np.maximum(np.sqrt(values * (1.0 - values) / n), 1.0 / n)
    return IVEstimate(
        d=c.d,
        values=tuple(float(v) for v in values),
        std_errors=tuple(float(s) for s in ses),
        n_samples=n,
        seed=cfg.seed,
        face_hit_counts=tuple(int(x) for x in counts),
        face_dims=tuple(int(x) for x in kern.face_dims),
    )


def estimate_functionals(c: Cone, cfg: SampleConfig, funcs,
                         lattice: FaceLattice | None = None):
    """Means and standard errors of per-sample functionals f(face_dim, |p|^2).

    funcs maps names to vectorized callables; all functionals share the
    same sample stream, so differences of the returned means can be given
    exact per-sample standard errors by registering the difference itself.
    """
    kern = _kernel_for(c, lattice)
    sums = {k: 0.0 for k in funcs}
    sqs = {k: 0.0 for k in funcs}
    for idx, pn2 in _sample_faces(kern, cfg, stream=0):
        dims = kern.face_dims[idx]
        for k, fn in funcs.items():
            vals = fn(dims, pn2)
            sums[k] += float(vals.sum())
            sqs[k] += float((vals * vals).sum())
    n = cfg.n_samples
    out = {}
    for k in funcs:
        mean = sums[k] / n
        var = max(sqs[k] / n - mean * mean, 0.0)
        out[k] = (mean, max(math.sqrt(var / n), 1.0 / n))
    return out


# ---------------------------------------------------------------------------
# Closed forms


def exact_iv(c: Cone) -> IVExact | None:
    """Closed-form intrinsic volumes for recognized cone classes.

    Recognized: linear subspaces; cones with lineality (shift of the
    pointed part); coordinate-block products; orthants up to signed
    permutation; planar (2-dimensional pointed) cones by arc measure; and
    polars of recognized cones.  Returns None when unrecognized.
    """
    return _exact_iv(c, allow_polar=True)


def _exact_iv(c: Cone, allow_polar: bool) -> IVExact | None:
    if c.is_subspace:
        vals = [Fraction(0)] * (c.d + 1)
        vals[c.dim] = Fraction(1)
        return IVExact(c.d, tuple(vals), "subspace")
    if c.lineality_dim > 0:
        _, pointed = canonical_decomposition(c)
        sub = _exact_iv(pointed, allow_polar)
        if sub is None:
            return None
        vals = [Fraction(0)] * (c.d + 1)
        for k, v in enumerate(sub.values):
            if k + c.lineality_dim <= c.d and v != 0:
                vals[k + c.lineality_dim] = v
        return IVExact(c.d, tuple(vals), "product")
    blocks = _coordinate_blocks(c)
    if blocks is not None:
        acc = (Fraction(1),)
        for cols in blocks:
            factor = _restrict_to_coords(c, cols)
            sub = _exact_iv(factor, allow_polar)
            if sub is None:
                return None
            acc = _convolve(acc, sub.values)
        return IVExact(c.d, tuple(acc), "product")
    if _is_signed_perm_orthant(c):
        denom = Fraction(2) ** c.d
        vals = tuple(Fraction(math.comb(c.d, k)) / denom for k in range(c.d + 1))
        return IVExact(c.d, vals, "orthant")
    if c.dim == 1 and c.is_pointed:
        # single ray: the degenerate arc
        vals = [Fraction(0)] * (c.d + 1)
        vals[0] = Fraction(1, 2)
        vals[1] = Fraction(1, 2)
        return IVExact(c.d, tuple(vals), "planar-angle")
    if c.dim == 2 and c.is_pointed:
        g1, g2 = c.generators
        num = sum(float(a) * float(b) for a, b in zip(g1, g2))
        n1 = math.sqrt(sum(float(a) ** 2 for a in g1))
        n2 = math.sqrt(sum(float(a) ** 2 for a in g2))
        theta = math.acos(max(-1.0, min(1.0, num / (n1 * n2))))
        v2 = theta / (2 * math.pi)
        vals = [0.0] * (c.d + 1)
        vals[0] = 0.5 - v2
        vals[1] = 0.5
        vals[2] = v2
        return IVExact(c.d, tuple(vals), "planar-angle")
    if allow_polar:
        sub = _exact_iv(polar(c), allow_polar=False)
        if sub is not None:
            return IVExact(c.d, tuple(reversed(sub.values)), "polar")
    return None


def _coordinate_blocks(c: Cone):
    parent = list(range(c.d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for row in c.generators + c.lineality.basis:
        support = [i for i, x in enumerate(row) if x != 0]
        for a, b in zip(support, support[1:]):
            union(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(c.d):
        groups.setdefault(find(i), []).append(i)
    blocks = sorted(groups.values())
    if len(blocks) <= 1:
        return None
    return blocks


def _restrict_to_coords(c: Cone, cols) -> Cone:
    gens = [
        tuple(g[i] for i in cols)
        for g in c.generators
        if any(g[i] != 0 for i in cols)
    ]
    lin = [
        tuple(v[i] for i in cols)
        for v in c.lineality.basis
        if any(v[i] != 0 for i in cols)
    ]
    return cone_from_generators(gens, lin, len(cols))


def _convolve(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y == 0:
                continue
            out[i + j] = out[i + j] + x * y
    return tuple(out)


def _is_signed_perm_orthant(c: Cone) -> bool:
    if not c.is_pointed or c.dim != c.d or len(c.generators) != c.d:
        return False
    seen = set()
    for g in c.generators:
        support = [i for i, x in enumerate(g) if x != 0]
        if len(support) != 1 or abs(g[support[0]]) != 1:
            return False
        seen.add(support[0])
    return len(seen) == c.d


def iv_polynomial(v) -> tuple:
    """Coefficients (lowest degree first) of sum_k v_k t^k."""
    return tuple(v.values)


def statistical_dimension(v):
    """delta = sum_k k v_k; exact when the input is exact."""
    return sum(k * x for k, x in enumerate(v.values))


def statdim_functional_se(est: IVEstimate) -> float:
    """Delta-method SE of sum_k k vhat_k from one multinomial estimate."""
    mean = sum(k * x for k, x in enumerate(est.values))
    second = sum(k * k * x for k, x in enumerate(est.values))
    var = max(second - mean * mean, 0.0)
    return max(math.sqrt(var / est.n_samples), 1.0 / est.n_samples)


def statdim_mc(c: Cone, cfg: SampleConfig, lattice: FaceLattice | None = None):
    """Mean squared norm of the projection of a Gaussian vector onto C.

    Returns (estimate, standard error); drawn from a substream independent
    of estimate_iv so the two routes can be compared in quadrature.
    """
    kern = _kernel_for(c, lattice)
    total = 0.0
    total_sq = 0.0
    n = cfg.n_samples
    per = [n // cfg.workers + (1 if w < n % cfg.workers else 0) for w in range(cfg.workers)]
    for w, n_w in enumerate(per):
        rng = _rng(cfg.seed, 1, w)
        need = n_w
        while need > 0:
            b = min(_BATCH, need)
            g = rng.standard_normal((b, kern.d))
            idx, pn2, ok, _ = kern.classify(g)
            pn2 = pn2[ok]
            total += float(pn2.sum())
            total_sq += float((pn2 * pn2).sum())
            need -= int(ok.sum())
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, max(math.sqrt(var / n), 1.0 / n)


def grassmann_angles(v) -> tuple:
    """h_j = v_j + v_{j+2} + ...; a nonsingular linear image of v."""
    vals = list(v.values)
    d = len(vals) - 1
    return tuple(sum(vals[k] for k in range(j, d + 1, 2)) for j in range(d + 1))


# ---------------------------------------------------------------------------
# Angles


def tangent_cone(c: Cone, f: Face) -> Cone:
    """Drop the constraints of C not active on relint(F)."""
    if f.parent != c:
        raise ValueError("face does not belong to this cone")
    active = [c.inequalities[i] for i in sorted(f.active)]
    if not active and not c.equalities:
        return cone_from_inequalities([], c.d)
    return cone_from_inequalities(active, c.d, c.equalities)


def solid_angle(c: Cone, cfg: SampleConfig | None = None) -> float:
    val, _ = solid_angle_se(c, cfg)
    return val


def solid_angle_se(c: Cone, cfg: SampleConfig | None = None) -> tuple[float, float]:
    """alpha(C) = v_dim(C), exact when a closed form is recognized."""
    ex = exact_iv(c)
    if ex is not None:
        return float(ex.values[c.dim]), 0.0
    if cfg is None:
        raise ValueError("no closed form for this cone; a SampleConfig is required")
    est = estimate_iv(c, cfg)
    return est.values[c.dim], est.std_errors[c.dim]


def internal_angle(f: Face, c: Cone, cfg: SampleConfig | None = None) -> float:
    return internal_angle_se(f, c, cfg)[0]


def internal_angle_se(f: Face, c: Cone, cfg: SampleConfig | None = None):
    """beta(F, C) = alpha of the tangent cone of C at F."""
    return solid_angle_se(tangent_cone(c, f), cfg)


def external_angle(f: Face, c: Cone, cfg: SampleConfig | None = None) -> float:
    return external_angle_se(f, c, cfg)[0]


def external_angle_se(f: Face, c: Cone, cfg: SampleConfig | None = None):
    """gamma(F, C) = alpha of the normal face of C at F."""
    from .cone import normal_face

    return solid_angle_se(normal_face(c, f).cone, cfg)


# ---------------------------------------------------------------------------
# Haar rotations


def haar_rotation(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix.

    QR of a Gaussian matrix with the sign of R's diagonal pushed into Q;
    without the sign correction the distribution is not Haar.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    g = rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    s = np.sign(np.diag(r))
    s[s == 0] = 1.0
    q = q * s
    err = np.linalg.norm(q.T @ q - np.eye(d))
    if err > 1e-10:
        raise ArithmeticError(f"QR produced a non-orthogonal matrix (|QtQ-I|={err:.2e})")
    return q
