"""Fans and toric computations: normal fans, smoothness/completeness,
Hodge numbers of smooth complete toric varieties, divisor polytopes and
Cartier data, projective-bundle fans, semiample contractions, Fano tests.

Sign convention: a divisor D = sum a_rho D_rho has polytope
``{m : <m, rho> >= -a_rho}`` and support function ``psi(u) = min_{m in
Delta_D} <m, u>``, so the Cartier datum m_sigma of a nef divisor is the
vertex of Delta_D selected by sigma and satisfies <m_sigma, rho> = -a_rho
on the rays of sigma.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .errors import ConsistencyError, DomainError, InputError, SmoothnessError
from .intlin import (
    canon_vec,
    det,
    dot,
    invert_unimodular,
    is_integral,
    matrix_rank,
    primitivize,
    saturated_span_basis,
    solve_linear,
)
from .lattice import (
    cone_hrep,
    convex_hull,
    is_reflexive,
    maximal_boundary_triangulation,
    polar_dual,
)


# ---------------------------------------------------------------------------
# fans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fan:
    """A fan given by primitive rays (lex-sorted) and maximal cones as
    ray-index tuples.  Lower-dimensional cones are derived on demand."""

    ambient_dim: int
    rays: tuple
    max_cones: tuple

    def cone_rays(self, cone):
        return tuple(self.rays[i] for i in cone)

    @property
    def n_rays(self):
        return len(self.rays)

    def __repr__(self):
        return (f"Fan(dim={self.ambient_dim}, rays={len(self.rays)}, "
                f"max_cones={len(self.max_cones)})")


@dataclass(frozen=True)
class ToricDivisor:
    """Torus-invariant divisor sum a_rho D_rho; coefficients follow the
    fan's canonical ray order."""

    fan: Fan
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.fan.rays):
            raise InputError("divisor needs one coefficient per ray")


@dataclass(frozen=True)
class CartierData:
    """Per-maximal-cone linear functionals m_sigma representing a divisor's
    support function: <m_sigma, rho> = -a_rho on the rays of sigma."""

    divisor: ToricDivisor
    per_cone: tuple  # aligned with divisor.fan.max_cones


def make_fan(rays, max_cones, ambient_dim=None):
    """Canonicalize: rays lex-sorted and primitive, cones as sorted index
    tuples, cone list sorted and deduplicated."""
    rays = [canon_vec(r) for r in rays]
    if not rays:
        raise InputError("a fan needs at least one ray")
    d = len(rays[0])
    if ambient_dim is not None and ambient_dim != d:
        raise InputError("ray/ambient dimension mismatch")
    if any(len(r) != d for r in rays):
        raise InputError("rays of mixed dimension")
    for r in rays:
        if not is_integral(r) or primitivize(r) != r:
            raise InputError(f"ray {r} is not a primitive integer vector")
    if len(set(rays)) != len(rays):
        raise InputError("duplicate rays")
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    relabel = {old: new for new, old in enumerate(order)}
    sorted_rays = tuple(rays[i] for i in order)
    cones = sorted({tuple(sorted(relabel[i] for i in cone)) for cone in max_cones})
    for cone in cones:
        if any(i < 0 or i >= len(sorted_rays) for i in cone):
            raise InputError("cone refers to a missing ray")
    return Fan(d, sorted_rays, tuple(cones))


def fan_to_json(fan):
    return json.dumps({"dim": fan.ambient_dim,
                       "rays": [list(r) for r in fan.rays],
                       "max_cones": [list(c) for c in fan.max_cones]},
                      sort_keys=True)


def fan_from_json(text):
    try:
        doc = json.loads(text)
        return make_fan([tuple(int(x) for x in r) for r in doc["rays"]],
                        [tuple(c) for c in doc["max_cones"]],
                        ambient_dim=doc["dim"])
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad fan JSON: {exc}") from exc


def normal_fan(polytope):
    """Normal fan: one ray per facet inner normal, one maximal cone per
    vertex (spanned by the normals of its facets).  For a reflexive
    polytope this is the face fan of the polar dual."""
    if polytope.dim != polytope.ambient_dim:
        raise DomainError("normal fan needs a full-dimensional polytope")
    rays = [normal for normal, _ in polytope.facets]
    cones = []
    for v in polytope.vertices:
        cones.append(tuple(i for i, (n, c) in enumerate(polytope.facets)
                           if dot(v, n) == -c))
    return make_fan(rays, cones)


def face_fan(polytope):
    """Face fan of a reflexive polytope: cones over its facets, with all
    boundary lattice points that happen to be vertices as rays."""
    if not is_reflexive(polytope):
        raise DomainError("face fan implemented for reflexive polytopes")
    rays = list(polytope.vertices)
    index = {r: i for i, r in enumerate(rays)}
    cones = [tuple(index[v] for v in polytope.vertices if dot(v, n) == -c)
             for n, c in polytope.facets]
    return make_fan(rays, cones)


# ---------------------------------------------------------------------------
# fan predicates
# ---------------------------------------------------------------------------

def is_simplicial(fan):
    for cone in fan.max_cones:
        gens = fan.cone_rays(cone)
        if matrix_rank(gens) != len(gens):
            return False
    return True


def _cone_extends_to_basis(gens):
    """True iff the generators are part of a Z-basis of the ambient lattice:
    linearly independent and with unimodular coordinates in the saturated
    lattice of their span."""
    k = len(gens)
    if matrix_rank(gens) != k:
        return False
    basis = saturated_span_basis(gens)
    rows = [[basis[j][i] for j in range(k)] for i in range(len(gens[0]))]
    coords = []
    for g in gens:
        y = solve_linear(rows, g)
        if y is None or not is_integral(y):
            return False
        coords.append([int(x) for x in y])
    return abs(det(coords)) == 1


def is_smooth(fan):
    return all(_cone_extends_to_basis(fan.cone_rays(c)) for c in fan.max_cones)


def _cone_facet_data(fan, cone):
    """Facets of a maximal cone: list of (inner normal, frozenset of the
    cone's ray indices lying on the facet)."""
    gens = fan.cone_rays(cone)
    ineqs, _ = cone_hrep(gens)
    out = []
    for n in ineqs:
        on = frozenset(i for i in cone if dot(fan.rays[i], n) == 0)
        out.append((n, on))
    return out


def is_complete(fan):
    """Exact completeness test: full-dimensional maximal cones, every ridge
    shared by exactly two of them, and a deterministic sample of directions
    covered by the fan's support."""
    n = fan.ambient_dim
    facet_normals = {}
    ridge_tally = {}
    for cone in fan.max_cones:
        gens = fan.cone_rays(cone)
        if matrix_rank(gens) != n:
            return False
        data = _cone_facet_data(fan, cone)
        facet_normals[cone] = [normal for normal, _ in data]
        for _, ridge in data:
            ridge_tally[ridge] = ridge_tally.get(ridge, 0) + 1
    if any(count != 2 for count in ridge_tally.values()):
        return False

    def covered(v):
        return any(all(dot(v, h) >= 0 for h in facet_normals[cone])
                   for cone in fan.max_cones)

    samples = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        samples.append(e)
        samples.append(tuple(-x for x in e))
    samples.extend(fan.rays)
    for r, s in combinations(fan.rays, 2):
        v = tuple(a + b for a, b in zip(r, s))
        if any(x != 0 for x in v):
            samples.append(v)
    return all(covered(v) for v in samples)


def fan_cones_by_dim(fan):
    """All cones of a simplicial fan, keyed by dimension, as frozensets of
    ray indices (the empty set is the trivial cone)."""
    if not is_simplicial(fan):
        raise InputError("cone enumeration implemented for simplicial fans")
    cones = {k: set() for k in range(fan.ambient_dim + 1)}
    for cone in fan.max_cones:
        for k in range(len(cone) + 1):
            for sub in combinations(cone, k):
                cones[k].add(frozenset(sub))
    return cones


def fan_validate(fan):
    """Deep structural validation used by the test-suite: strongly convex
    maximal cones and pairwise intersections that are faces of both."""
    for cone in fan.max_cones:
        gens = fan.cone_rays(cone)
        ineqs, _ = cone_hrep(gens)
        for g in gens:
            if all(dot(g, h) == 0 for h in ineqs):
                raise ConsistencyError("maximal cone is not strongly convex")
    for c1, c2 in combinations(fan.max_cones, 2):
        common = sorted(set(c1) & set(c2))
        for cone in (c1, c2):
            data = _cone_facet_data(fan, cone)
            active = [n for n, on in data if set(common) <= on]
            face = [i for i in cone
                    if all(dot(fan.rays[i], n) == 0 for n in active)]
            if sorted(face) != common:
                raise ConsistencyError(
                    f"cones {c1} and {c2} do not meet in a common face")
    return True


# ---------------------------------------------------------------------------
# MPCP desingularization and Hodge numbers
# ---------------------------------------------------------------------------

def mpcp_fan(polytope):
    """Maximal projective crepant partial desingularization of the toric
    variety of a reflexive polytope: the normal fan refined by all nonzero
    lattice points of the polar dual, via the maximal boundary
    triangulation.  Returns (fan, unimodular_flag)."""
    if not is_reflexive(polytope):
        raise DomainError("mpcp_fan needs a reflexive polytope")
    dual = polar_dual(polytope)
    tri = maximal_boundary_triangulation(dual)
    rays = tri.uses_points[1:]
    cones = [tuple(i - 1 for i in simplex if i != 0) for simplex in tri.simplices]
    return make_fan(rays, cones), tri.unimodular


def hodge_numbers_smooth_toric(fan):
    """Hodge numbers h^{p,p} of a smooth complete toric variety from its
    cone counts: h_p = sum_{i>=p} (-1)^{i-p} C(i,p) #Sigma(n-i); all
    off-diagonal Hodge numbers vanish and chi equals the number of maximal
    cones."""
    if not is_smooth(fan):
        raise SmoothnessError("hodge numbers need a smooth fan")
    if not is_complete(fan):
        raise InputError("hodge numbers need a complete fan")
    n = fan.ambient_dim
    counts = {k: len(v) for k, v in fan_cones_by_dim(fan).items()}
    h = []
    for p in range(n + 1):
        h.append(sum((-1) ** (i - p) * comb(i, p) * counts[n - i]
                     for i in range(p, n + 1)))
    chi = len(fan.max_cones)
    if sum(h) != chi:
        raise ConsistencyError("h-vector does not sum to the Euler characteristic")
    return tuple(h), chi


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------

def divisor_polytope(divisor):
    """Section polytope {m : <m, rho> >= -a_rho}, with the irredundant
    V-representation computed exactly.  Raises DomainError when unbounded."""
    fan = divisor.fan
    n = fan.ambient_dim
    hull_of_rays = convex_hull(fan.rays)
    if hull_of_rays.dim != n or any(c <= 0 for _, c in hull_of_rays.facets):
        raise DomainError("divisor polytope is unbounded (rays do not span)")

    ineqs = list(zip(fan.rays, divisor.coeffs))

    def feasible(m):
        return all(dot(m, rho) >= -a for rho, a in ineqs)

    candidates = set()
    complete_fast = True
    for cone in fan.max_cones:
        rows = [fan.rays[i] for i in cone]
        rhs = [-divisor.coeffs[i] for i in cone]
        m = solve_linear(rows, rhs)
        if m is None or not feasible(m):
            complete_fast = False
            break
        candidates.add(m)
    if not complete_fast:
        candidates = set()
        for subset in combinations(range(len(ineqs)), n):
            rows = [fan.rays[i] for i in subset]
            if matrix_rank(rows) != n:
                continue
            m = solve_linear(rows, [-divisor.coeffs[i] for i in subset])
            if m is not None and feasible(m):
                candidates.add(m)
    return convex_hull(sorted(candidates))


def divisor_from_polytope(fan, polytope):
    """The nef divisor on the fan whose section polytope is the given one:
    a_rho = -min_{m in P} <m, rho>."""
    coeffs = tuple(max(-dot(v, rho) for v in polytope.vertices)
                   for rho in fan.rays)
    return ToricDivisor(fan, coeffs)


def cartier_data(divisor):
    """Solve <m_sigma, rho> = -a_rho on every maximal cone.  Raises
    DomainError when no integral solution exists (non-Cartier)."""
    fan = divisor.fan
    per_cone = []
    for cone in fan.max_cones:
        rows = [fan.rays[i] for i in cone]
        rhs = [-divisor.coeffs[i] for i in cone]
        m = solve_linear(rows, rhs)
        if m is None:
            raise DomainError(f"divisor is not Cartier on cone {cone}")
        if matrix_rank(rows) < fan.ambient_dim:
            raise DomainError("Cartier data needs full-dimensional maximal cones")
        if not is_integral(m):
            raise DomainError(f"divisor is not Cartier on cone {cone}")
        per_cone.append(tuple(int(x) for x in m))
    return CartierData(divisor, tuple(per_cone))


def is_nef(divisor):
    """Nef = convex Cartier data: every m_sigma satisfies every ray
    inequality of the divisor polytope."""
    try:
        data = cartier_data(divisor)
    except DomainError:
        return False
    fan = divisor.fan
    return all(dot(m, rho) >= -a
               for m in data.per_cone
               for rho, a in zip(fan.rays, divisor.coeffs))


def is_ample(divisor):
    """Ample = strictly convex Cartier data: strict inequalities on all
    rays outside each cone."""
    try:
        data = cartier_data(divisor)
    except DomainError:
        return False
    fan = divisor.fan
    for cone, m in zip(fan.max_cones, data.per_cone):
        for i, (rho, a) in enumerate(zip(fan.rays, divisor.coeffs)):
            if i in cone:
                if dot(m, rho) != -a:
                    return False
            elif dot(m, rho) <= -a:
                return False
    return True


def anticanonical(fan):
    return ToricDivisor(fan, tuple(1 for _ in fan.rays))


def is_fano(fan):
    """True iff -K = sum D_rho is Cartier with strictly convex support
    function (Gorenstein Fano)."""
    if not is_complete(fan):
        raise InputError("is_fano needs a complete fan")
    return is_ample(anticanonical(fan))


# ---------------------------------------------------------------------------
# projective bundle P(L + C) and its contraction
# ---------------------------------------------------------------------------

def projective_bundle_fan(fan, bundle_divisor):
    """Fan of the P^1-bundle compactifying the line bundle of a nonnegative
    divisor: rays (rho_j, a_j), e_inf = (0,..,0,1), e_0 = (0,..,0,-1), and
    per maximal cone tau the two liftings tau_0, tau_inf."""
    if bundle_divisor.fan != fan:
        raise InputError("divisor lives on a different fan")
    if any(a < 0 for a in bundle_divisor.coeffs):
        raise InputError("projective bundle fan needs nonnegative coefficients")
    if not (is_smooth(fan) and is_complete(fan)):
        raise SmoothnessError("projective bundle construction assumes a smooth complete base")
    lifted = [r + (a,) for r, a in zip(fan.rays, bundle_divisor.coeffs)]
    e_inf = tuple(0 for _ in range(fan.ambient_dim)) + (1,)
    e_zero = tuple(0 for _ in range(fan.ambient_dim)) + (-1,)
    rays = lifted + [e_inf, e_zero]
    idx_inf = len(lifted)
    idx_zero = len(lifted) + 1
    cones = []
    for cone in fan.max_cones:
        cones.append(tuple(cone) + (idx_zero,))
        cones.append(tuple(cone) + (idx_inf,))
    return make_fan(rays, cones)


def bundle_nef_divisor(bundle_fan, base_fan, bundle_divisor):
    """H = D_{e_inf} + sum a_j D_{rho_j-bar} on the bundle fan."""
    n = base_fan.ambient_dim
    e_inf = tuple(0 for _ in range(n)) + (1,)
    lifted = {r + (a,): a for r, a in zip(base_fan.rays, bundle_divisor.coeffs)}
    coeffs = []
    for ray in bundle_fan.rays:
        if ray == e_inf:
            coeffs.append(1)
        else:
            coeffs.append(lifted.get(ray, 0))
    return ToricDivisor(bundle_fan, tuple(coeffs))


def semiample_contraction(fan, divisor):
    """Fan obtained by merging maximal cones that share a Cartier datum of
    a nef divisor with full-dimensional polytope; equals the normal fan of
    the divisor polytope."""
    data = cartier_data(divisor)
    if not is_nef(divisor):
        raise DomainError("semiample contraction needs a nef divisor")
    polytope = divisor_polytope(divisor)
    if polytope.dim != fan.ambient_dim:
        raise DomainError("divisor polytope is not full-dimensional")
    contracted = normal_fan(polytope)
    ray_set = set(contracted.rays)
    if not ray_set <= set(fan.rays):
        raise ConsistencyError("contracted fan has rays outside the original fan")
    vertex_set = set(polytope.vertices)
    for cone, m in zip(fan.max_cones, data.per_cone):
        if m not in vertex_set:
            raise ConsistencyError("Cartier datum is not a vertex of the polytope")
        for i in cone:
            if dot(m, fan.rays[i]) != -divisor.coeffs[i]:
                raise ConsistencyError("cone not contained in its merged cone")
    return contracted


# ---------------------------------------------------------------------------
# linear equivalence and the Calabi-Yau test
# ---------------------------------------------------------------------------

def linear_equivalence_witness(d1, d2):
    """The m in M with coeffs(D2) - coeffs(D1) = <m, rho> on all rays, or
    None when the divisors are not linearly equivalent."""
    if d1.fan != d2.fan:
        raise InputError("divisors live on different fans")
    fan = d1.fan
    diff = [b - a for a, b in zip(d1.coeffs, d2.coeffs)]
    m = solve_linear(list(fan.rays), diff)
    if m is None or not is_integral(m):
        return None
    if any(dot(m, rho) != d for rho, d in zip(fan.rays, diff)):
        return None
    return tuple(int(x) for x in m)


def linearly_equivalent(d1, d2):
    return linear_equivalence_witness(d1, d2) is not None


def is_calabi_yau_cover(fan, bundle_divisor, r):
    """True iff (r-1) * a is linearly equivalent to sum_rho D_rho, the
    condition for the r-fold cyclic cover branched in |r*a| to have trivial
    canonical sheaf."""
    if r < 2:
        raise InputError("cyclic cover degree must be at least 2")
    scaled = ToricDivisor(fan, tuple((r - 1) * a for a in bundle_divisor.coeffs))
    return linearly_equivalent(scaled, anticanonical(fan))


# ---------------------------------------------------------------------------
# GL(Z) normal form (optional comparison helper)
# ---------------------------------------------------------------------------

def gl_canonical_form(fan):
    """A canonical representative of a smooth complete fan under GL(Z):
    minimize the (rays, cones) pair over coordinate changes sending some
    maximal cone to the standard positive orthant."""
    n = fan.ambient_dim
    best = None
    from itertools import permutations
    for cone in fan.max_cones:
        if len(cone) != n:
            continue
        for perm in permutations(cone):
            rows = [fan.rays[i] for i in perm]
            if abs(det(rows)) != 1:
                continue
            inv = invert_unimodular(rows)
            new_rays = [tuple(sum(r[i] * inv[i][j] for i in range(n))
                              for j in range(n)) for r in fan.rays]
            candidate = make_fan(new_rays, fan.max_cones)
            key = (candidate.rays, candidate.max_cones)
            if best is None or key < best:
                best = key
    if best is None:
        raise DomainError("GL(Z) normal form implemented for smooth fans")
    return best
