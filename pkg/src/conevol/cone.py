"""Polyhedral cones: dual representations, face lattices, polarity.

Cones are stored with both representations in canonical form:

* generators: the extreme rays, reduced modulo the lineality space
  (pivot coordinates of the lineality basis eliminated), scaled to
  primitive integer vectors and sorted;
* inequalities: the facet normals, which are exactly the extreme rays of
  the polar cone, canonicalized the same way modulo lin(C)^perp;
* equalities: the RREF basis of lin(C)^perp.

Equality of cones is therefore equality of canonical data.  Conversion
between the representations is done by the double description method,
processing one halfspace at a time; the combinatorial adjacency test is
applied modulo the current lineality space, which keeps the working cone
pointed in the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactlin import (
    Mat,
    Subspace,
    Vec,
    dot,
    is_zero,
    kernel,
    lp_strictly_feasible,
    mat,
    primitive,
    project_off,
    rref,
    subspace_from_rows,
    subspace_intersection,
    unit_vec,
    vadd,
    vec,
    vscale,
    zero_subspace,
)


class InvariantViolation(RuntimeError):
    """A structural identity that must hold by construction failed."""


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone {x : <a, x> <= 0 for a in inequalities, <e, x> = 0}."""

    d: int
    inequalities: Mat
    equalities: Mat
    generators: Mat
    lineality: Subspace
    dim: int
    lineality_dim: int

    @property
    def is_pointed(self) -> bool:
        return self.lineality_dim == 0

    @property
    def is_subspace(self) -> bool:
        return self.dim == self.lineality_dim

    @property
    def span(self) -> Subspace:
        return kernel(self.equalities, self.d)

    def contains(self, x) -> bool:
        x = vec(x)
        return all(dot(e, x) == 0 for e in self.equalities) and all(
            dot(a, x) <= 0 for a in self.inequalities
        )


@dataclass(frozen=True)
class Face:
    parent: Cone
    cone: Cone
    span: Subspace
    dim: int
    gen_mask: int
    active: frozenset[int]


@dataclass(frozen=True)
class FaceLattice:
    cone: Cone
    faces: tuple[Face, ...]
    f_vector: tuple[int, ...]
    leq_masks: tuple[int, ...]  # bit j of leq_masks[i] set iff faces[i] <= faces[j]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.leq_masks[i] >> j & 1)

    @property
    def euler_sum(self) -> int:
        return sum((-1) ** k * f for k, f in enumerate(self.f_vector))

    def face_of_cone(self, c: Cone) -> Face:
        for f in self.faces:
            if f.cone == c:
                return f
        raise ValueError("cone is not a face of the lattice")


def _canon_rays(rays, lin: Subspace) -> Mat:
    out = []
    seen = set()
    for r in rays:
        rr = primitive(lin.reduce(r))
        if not is_zero(rr) and rr not in seen:
            seen.add(rr)
            out.append(rr)
    return tuple(sorted(out))


def _dd(ineqs, eq_rows, d: int) -> tuple[Mat, Subspace]:
    """Double description: V-representation of {x : ineqs.x <= 0, eq_rows.x = 0}.

    Returns (extreme rays, lineality subspace), both canonicalized.
    """
    amb = kernel(eq_rows, d)
    if amb.dim == 0:
        return (), zero_subspace(d)
    basis = amb.basis
    m = amb.dim
    cons = []
    seen = set()
    for a in ineqs:
        ap = primitive(tuple(dot(row, a) for row in basis))
        if not is_zero(ap) and ap not in seen:
            seen.add(ap)
            cons.append(ap)

    lin_rows: list[Vec] = [unit_vec(i, m) for i in range(m)]
    rays: list[tuple[Vec, int]] = []  # (vector, zero-set bitmask over constraints)

    for t, a in enumerate(cons):
        hit = next((i for i, row in enumerate(lin_rows) if dot(a, row) != 0), None)
        if hit is not None:
            v0 = lin_rows[hit]
            if dot(a, v0) > 0:
                v0 = tuple(-x for x in v0)
            s0 = dot(a, v0)
            new_lin = []
            for i, row in enumerate(lin_rows):
                if i == hit:
                    continue
                s = dot(a, row)
                new_lin.append(vadd(row, vscale(v0, -s / s0)) if s != 0 else row)
            lin_rows = list(rref(new_lin))
            lin_sub = Subspace(m, tuple(lin_rows))
            new_rays = []
            for r, z in rays:
                s = dot(a, r)
                rr = vadd(r, vscale(v0, -s / s0)) if s != 0 else r
                new_rays.append((primitive(lin_sub.reduce(rr)), z | (1 << t)))
            new_rays.append((primitive(lin_sub.reduce(v0)), (1 << t) - 1))
            rays = new_rays
            continue
        # lineality is inside the hyperplane; split the pointed part
        plus, zero, minus = [], [], []
        for idx, (r, z) in enumerate(rays):
            s = dot(a, r)
            if s > 0:
                plus.append((idx, r, z, s))
            elif s < 0:
                minus.append((idx, r, z, s))
            else:
                zero.append((r, z | (1 << t)))
        if not plus:
            rays = [(r, z) for _, r, z, _ in minus] + zero
            continue
        kept = [(r, z) for _, r, z, _ in minus] + zero
        combos = []
        for ip, rp, zp, sp in plus:
            for im, rm, zm, sm in minus:
                common = zp & zm
                adjacent = True
                for i3, (_, z3) in enumerate(rays):
                    if i3 != ip and i3 != im and common & z3 == common:
                        adjacent = False
                        break
                if adjacent:
                    w = primitive(vadd(vscale(rm, sp), vscale(rp, -sm)))
                    combos.append((w, common | (1 << t)))
        seen_vecs = {r for r, _ in kept}
        for w, z in combos:
            if w not in seen_vecs:
                seen_vecs.add(w)
                kept.append((w, z))
        rays = kept

    lin_ambient = subspace_from_rows(
        [_lift(row, basis) for row in lin_rows], d
    )
    lifted = [_lift(r, basis) for r, _ in rays]
    return _canon_rays(lifted, lin_ambient), lin_ambient


def _lift(y: Vec, basis: Mat) -> Vec:
    """Map coordinates in a subspace basis back to ambient space."""
    out = [Fraction(0)] * len(basis[0])
    for yi, row in zip(y, basis):
        if yi != 0:
            out = [a + yi * b for a, b in zip(out, row)]
    return tuple(out)


def _from_vrep(rays, lin: Subspace, d: int) -> Cone:
    gens = _canon_rays(rays, lin)
    prays, plin = _dd(gens, lin.basis, d)
    return Cone(
        d=d,
        inequalities=prays,
        equalities=plin.basis,
        generators=gens,
        lineality=lin,
        dim=d - plin.dim,
        lineality_dim=lin.dim,
    )


def cone_from_inequalities(normals, d: int, equalities=()) -> Cone:
    """Cone {x : <a, x> <= 0 for all a} via double description."""
    normals = mat(normals)
    eqs = mat(equalities)
    for a in normals:
        if len(a) != d:
            raise ValueError("normal length does not match ambient dimension")
        if is_zero(a):
            raise ValueError("zero normal encodes no constraint")
    for e in eqs:
        if len(e) != d:
            raise ValueError("equality length does not match ambient dimension")
    rays, lin = _dd(normals, eqs, d)
    return _from_vrep(rays, lin, d)


def cone_from_generators(rays, lineality=(), d: int | None = None) -> Cone:
    """Cone generated by rays plus a lineality space; H-rep via the polar."""
    rays = mat(rays)
    lin_rows = mat(lineality)
    if d is None:
        raise ValueError("ambient dimension d is required")
    for r in rays + lin_rows:
        if len(r) != d:
            raise ValueError("vector length does not match ambient dimension")
    prays, plin = _dd(rays, lin_rows, d)  # V-rep of the polar cone
    rrays, rlin = _dd(prays, plin.basis, d)  # back to C = (C°)°
    return Cone(
        d=d,
        inequalities=prays,
        equalities=plin.basis,
        generators=rrays,
        lineality=rlin,
        dim=d - plin.dim,
        lineality_dim=rlin.dim,
    )


def subspace_cone(s: Subspace) -> Cone:
    return _from_vrep((), s, s.dim_ambient)


def polar(c: Cone) -> Cone:
    """Polar cone {x : <x, y> <= 0 for all y in C}.

    With canonical dual representations this is an exact swap of the two
    sides, which makes the involution property structural.
    """
    return Cone(
        d=c.d,
        inequalities=c.generators,
        equalities=c.lineality.basis,
        generators=c.inequalities,
        lineality=Subspace(c.d, c.equalities),
        dim=c.d - c.lineality_dim,
        lineality_dim=c.d - c.dim,
    )


def face_lattice(c: Cone) -> FaceLattice:
    """All faces of the cone, graded by dimension.

    Faces are intersections of facet-incidence sets of extreme rays: the
    meet-closure of the facet masks enumerates every face once, and each
    face is rebuilt from its extreme rays plus the shared lineality space.
    """
    gens = c.generators
    n = len(gens)
    facet_masks = []
    for a in c.inequalities:
        mask = 0
        for i, r in enumerate(gens):
            if dot(a, r) == 0:
                mask |= 1 << i
        facet_masks.append(mask)
    full = (1 << n) - 1
    masks = {full}
    frontier = [full]
    while frontier:
        m = frontier.pop()
        for fm in facet_masks:
            nm = m & fm
            if nm not in masks:
                masks.add(nm)
                frontier.append(nm)

    faces = []
    for msk in masks:
        sel = tuple(gens[i] for i in range(n) if msk >> i & 1)
        span = subspace_from_rows(sel + c.lineality.basis, c.d)
        active = frozenset(
            i for i, fm in enumerate(facet_masks) if msk & fm == msk
        )
        fcone = _from_vrep(sel, c.lineality, c.d)
        faces.append(Face(c, fcone, span, span.dim, msk, active))
    faces.sort(key=lambda f: (f.dim, f.cone.generators))
    fvec = [0] * (c.d + 1)
    for f in faces:
        fvec[f.dim] += 1
    leq = []
    for f in faces:
        bits = 0
        for j, g in enumerate(faces):
            if f.gen_mask & g.gen_mask == f.gen_mask:
                bits |= 1 << j
        leq.append(bits)
    return FaceLattice(c, tuple(faces), tuple(fvec), tuple(leq))


def normal_face(c: Cone, f: Face) -> Face:
    """The face C° ∩ lin(F)^perp of the polar cone, of dimension d - dim F."""
    if f.parent != c:
        raise ValueError("face does not belong to this cone")
    pl = face_lattice(polar(c))
    want = 0
    for i in sorted(f.active):
        want |= 1 << i
    # polar generators are exactly c.inequalities, in the same order
    for g in pl.faces:
        if g.gen_mask == want:
            return g
    raise InvariantViolation("active set does not select a polar face")


def canonical_decomposition(c: Cone) -> tuple[Subspace, Cone]:
    """Split C = L + C/L with L the lineality space and C/L pointed."""
    lin = c.lineality
    if lin.dim == 0:
        return lin, c
    proj = [project_off(lin.basis, g) for g in c.generators]
    return lin, cone_from_generators(proj, (), c.d)


def intersect(c: Cone, other: Cone) -> Cone:
    if c.d != other.d:
        raise ValueError("ambient dimensions differ")
    rays, lin = _dd(
        c.inequalities + other.inequalities,
        c.equalities + other.equalities,
        c.d,
    )
    return _from_vrep(rays, lin, c.d)


def minkowski_sum(c: Cone, other: Cone) -> Cone:
    if c.d != other.d:
        raise ValueError("ambient dimensions differ")
    return cone_from_generators(
        c.generators + other.generators,
        c.lineality.basis + other.lineality.basis,
        c.d,
    )


def product(c: Cone, other: Cone) -> Cone:
    """Direct product C x D in R^(d_C + d_D) (block coordinates)."""
    d = c.d + other.d
    pad_l = lambda v: v + (Fraction(0),) * other.d
    pad_r = lambda v: (Fraction(0),) * c.d + v
    gens = [pad_l(g) for g in c.generators] + [pad_r(g) for g in other.generators]
    lin = [pad_l(v) for v in c.lineality.basis] + [pad_r(v) for v in other.lineality.basis]
    return cone_from_generators(gens, lin, d)


def farkas_check(c: Cone, l: Subspace) -> bool:
    """Whether relint(C) and the subspace L are disjoint.

    Evaluates both sides of the Farkas equivalence and raises if they
    disagree.  The dual certificate is a properly separating functional:
    h in polar(C) ∩ L^perp that does not vanish on all of C.  (Without the
    properness requirement the dual side is vacuously nonzero whenever
    lin(C) + L is a proper subspace, e.g. for C = {0}.)
    """
    if l.dim_ambient != c.d:
        raise ValueError("ambient dimensions differ")
    # primal: does some x in lin(C) ∩ L satisfy every facet strictly?
    s = subspace_intersection(c.span, l)
    if not c.inequalities:
        primal_empty = False  # C is a subspace; 0 lies in relint(C) ∩ L
    elif s.dim == 0:
        primal_empty = True
    else:
        strict = [tuple(-dot(row, a) for row in s.basis) for a in c.inequalities]
        primal_empty = not lp_strictly_feasible(strict, s.dim)
    dual_cone = intersect(polar(c), subspace_cone(orthogonal_complement_of(l)))
    # lineality of the dual cone always sits inside lin(C)^perp; only a
    # generator outside lin(C)^perp certifies proper separation
    lin_c_perp = Subspace(c.d, c.equalities)
    dual_nontrivial = any(
        not lin_c_perp.contains(g) for g in dual_cone.generators
    )
    if primal_empty != dual_nontrivial:
        raise InvariantViolation(
            f"Farkas sides disagree: primal_empty={primal_empty}, "
            f"dual_nontrivial={dual_nontrivial}"
        )
    return primal_empty


def orthogonal_complement_of(s: Subspace) -> Subspace:
    return kernel(s.basis, s.dim_ambient)


def transverse(f: Face, g: Face) -> bool:
    """Whether two faces intersect transversely (relints meet, dims add)."""
    if f.parent.d != g.parent.d:
        raise ValueError("ambient dimensions differ")
    d = f.parent.d
    s = subspace_intersection(f.span, g.span)
    if f.dim + g.dim - d != s.dim:
        return False
    strict = []
    for cone in (f.cone, g.cone):
        for a in cone.inequalities:
            strict.append(tuple(-dot(row, a) for row in s.basis))
    if s.dim == 0:
        return not strict  # only subspaces have 0 in their relative interior
    return lp_strictly_feasible(strict, s.dim)


# ---------------------------------------------------------------------------
# JSON wire format


def rational_to_json(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(rows: Mat):
    return [[rational_to_json(x) for x in row] for row in rows]


def cone_to_json(c: Cone) -> dict:
    """Canonical H-representation; parsing it back reproduces the cone."""
    return {
        "d": c.d,
        "inequalities": matrix_to_json(c.inequalities),
        "equalities": matrix_to_json(c.equalities),
    }


def cone_from_json(obj: dict) -> Cone:
    """Build a cone from its JSON form; exactly one representation given."""
    if "d" not in obj:
        raise ValueError("cone JSON requires the ambient dimension 'd'")
    d = int(obj["d"])
    has_h = "inequalities" in obj or "equalities" in obj
    has_v = "generators" in obj or "lineality" in obj
    if has_h == has_v:
        raise ValueError("give exactly one of the H- or V-representation")
    if has_h:
        return cone_from_inequalities(
            mat(obj.get("inequalities", [])), d, mat(obj.get("equalities", []))
        )
    return cone_from_generators(
        mat(obj.get("generators", [])), mat(obj.get("lineality", [])), d
    )
