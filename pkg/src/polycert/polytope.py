"""Global and local Newton polyhedra over exact rational arithmetic.

The global polytope of a polynomial is the convex hull of its support
together with the origin; the local polyhedron is the hull of the support
plus the nonnegative orthant.  Both are computed exactly at desk scale by
enumerating candidate facet hyperplanes through subsets of the generating
points, which is robust for the small lattice point sets this toolkit
targets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from polycert.polynomial import (
    Exponent,
    Polynomial,
    PolynomialError,
    PolynomialSystem,
)

MAX_DIMENSION = 8
MAX_HULL_POINTS = 64


class PolytopeError(ValueError):
    """Raised for unsupported or malformed polytope inputs."""


# -- exact rational linear algebra ------------------------------------------


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def _rank(rows: list[list[Fraction]]) -> int:
    return len(_rref(rows)[0])


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    reduced, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve a nonsingular square rational system by elimination."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise PolytopeError("singular system in exact solve")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = Fraction(1) / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[c])]
    return [row[n] for row in aug]


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and divide by the coordinate gcd."""
    fracs = [Fraction(v) for v in vec]
    denom_lcm = 1
    for v in fracs:
        denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        raise PolytopeError("zero vector has no primitive form")
    return tuple(v // g for v in ints)


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


# -- exact hull of integer exponent points -----------------------------------


@dataclass(frozen=True)
class HullFace:
    """A face of an exponent hull, stored by its vertex set."""

    vertices: frozenset[Exponent]
    facet_indices: frozenset[int]
    dim: int


class ExponentHull:
    """Exact convex hull of a finite set of integer exponent points.

    Facets are inequalities ``<normal, x> <= offset``; when the hull is not
    full-dimensional the affine-hull equalities are included as paired
    opposite inequalities, so every supporting-vector computation can work
    with one flat facet list.
    """

    def __init__(self, points: Iterable[Exponent]):
        pts = sorted({tuple(int(e) for e in p) for p in points})
        if not pts:
            raise PolytopeError("hull of an empty point set")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise PolytopeError("hull points disagree on dimension")
        if n > MAX_DIMENSION:
            raise PolytopeError(f"dimension {n} exceeds the desk-scale cap {MAX_DIMENSION}")
        if len(pts) > MAX_HULL_POINTS:
            raise PolytopeError(
                f"{len(pts)} hull points exceed the desk-scale cap {MAX_HULL_POINTS}"
            )
        self.ambient_dim = n
        self.points = tuple(pts)
        self._build()

    # construction -----------------------------------------------------------

    def _build(self):
        n = self.ambient_dim
        pts = self.points
        base = pts[0]
        diffs = [[Fraction(p[i] - base[i]) for i in range(n)] for p in pts[1:]]
        reduced, pivots = _rref(diffs)
        d = len(reduced)
        self.dim = d

        # affine-hull equalities, emitted as opposite inequality pairs
        eq_normals: list[tuple[int, ...]] = []
        if d < n:
            for vec in _nullspace(diffs if diffs else [[Fraction(0)] * n], n):
                eq_normals.append(_primitive(vec))
        self._equality_normals = tuple(eq_normals)

        facets: dict[tuple[tuple[int, ...], int], frozenset[Exponent]] = {}
        if d >= 1:
            # direction basis in reduced form; its pivot columns are exactly a
            # coordinate subset on which the basis is invertible
            basis_rows = reduced  # d x n, row space = direction space
            cols = pivots
            # t-coordinates: solve B_R t = (p - base)_R with B columns = basis rows
            b_r = [[basis_rows[j][i] for j in range(d)] for i in cols]  # d x d
            tcoords = []
            for p in pts:
                rhs = [Fraction(p[i] - base[i]) for i in cols]
                tcoords.append(_solve_square(b_r, rhs))

            for subset in itertools.combinations(range(len(pts)), d):
                t0 = tcoords[subset[0]]
                rows = [
                    [tcoords[j][k] - t0[k] for k in range(d)] for j in subset[1:]
                ]
                null = _nullspace(rows if rows else [[Fraction(0)] * d], d)
                if len(null) != 1:
                    continue  # affinely dependent subset or not a hyperplane
                u = null[0]
                beta = _dot(u, t0)
                side = 0
                ok = True
                for t in tcoords:
                    val = _dot(u, t) - beta
                    if val > 0:
                        if side < 0:
                            ok = False
                            break
                        side = 1
                    elif val < 0:
                        if side > 0:
                            ok = False
                            break
                        side = -1
                if not ok:
                    continue
                if side > 0:
                    u = [-v for v in u]
                    beta = -beta
                on_face = frozenset(
                    pts[j] for j, t in enumerate(tcoords) if _dot(u, t) == beta
                )
                # lift to ambient coordinates supported on the pivot columns
                bt = [[basis_rows[j][i] for i in cols] for j in range(d)]  # B_R^T
                w_r = _solve_square(bt, u)
                w_full = [Fraction(0)] * n
                for i, c in enumerate(cols):
                    w_full[c] = w_r[i]
                w = _primitive(w_full)
                ref = next(iter(on_face))
                offset = int(_dot(w, ref))
                # orientation: all points satisfy <w, p> <= offset
                if any(_dot(w, p) > offset for p in pts):
                    w = tuple(-v for v in w)
                    offset = -offset
                facets.setdefault((w, offset), on_face)

        facet_list: list[tuple[tuple[int, ...], int]] = list(facets)
        facet_members: list[frozenset[Exponent]] = [facets[k] for k in facet_list]
        for v in eq_normals:
            c = int(_dot(v, base))
            facet_list.append((v, c))
            facet_members.append(frozenset(pts))
            facet_list.append((tuple(-x for x in v), -c))
            facet_members.append(frozenset(pts))
        self.facets = tuple(facet_list)
        self._facet_members = tuple(facet_members)
        self._num_proper_facets = len(facets)

        # vertices: points whose containing proper-facet normals span the
        # direction space (plus equality normals for lower-dimensional hulls)
        verts = []
        for p in pts:
            if d == 0:
                verts.append(p)
                continue
            normals = [
                [Fraction(x) for x in self.facets[i][0]]
                for i in range(self._num_proper_facets)
                if p in self._facet_members[i]
            ]
            normals += [[Fraction(x) for x in v] for v in eq_normals]
            if _rank(normals) == n:
                verts.append(p)
        self.vertices = frozenset(verts)
        self._faces: tuple[HullFace, ...] | None = None

    # queries ------------------------------------------------------------------

    def support_value(self, w: Sequence) -> Fraction:
        return max(_dot(w, p) for p in self.points)

    def face_points(self, w: Sequence) -> frozenset[Exponent]:
        """Generating points attaining max <w, .> over the hull."""
        best = self.support_value(w)
        return frozenset(p for p in self.points if _dot(w, p) == best)

    def face_vertex_set(self, w: Sequence) -> frozenset[Exponent]:
        best = max(_dot(w, p) for p in self.vertices)
        return frozenset(p for p in self.vertices if _dot(w, p) == best)

    def faces(self) -> tuple[HullFace, ...]:
        """All nonempty faces, each as its vertex set (intersection closure)."""
        if self._faces is not None:
            return self._faces
        seeds = [frozenset(self.vertices)]
        for i in range(self._num_proper_facets):
            seeds.append(self._facet_members[i] & self.vertices)
        seen: set[frozenset[Exponent]] = set()
        queue = [s for s in seeds if s]
        while queue:
            face = queue.pop()
            if face in seen:
                continue
            seen.add(face)
            for i in range(self._num_proper_facets):
                inter = face & self._facet_members[i]
                if inter and inter not in seen:
                    queue.append(inter)
        out = []
        for vs in sorted(seen, key=lambda s: (len(s), sorted(s))):
            containing = frozenset(
                i
                for i in range(self._num_proper_facets)
                if vs <= self._facet_members[i]
            )
            base = next(iter(vs))
            rows = [[Fraction(a - b) for a, b in zip(p, base)] for p in vs]
            out.append(HullFace(vs, containing, _rank(rows)))
        self._faces = tuple(out)
        return self._faces

    def normal_generators(self, face: HullFace) -> list[tuple[int, ...]]:
        """Generators of the face's normal cone: outer normals of containing
        facets plus both signs of every affine-hull equality normal."""
        gens = [self.facets[i][0] for i in face.facet_indices]
        for v in self._equality_normals:
            gens.append(v)
            gens.append(tuple(-x for x in v))
        return gens

    def supporting_vector(
        self, face: HullFace, require_positive_coordinate: bool = False
    ) -> tuple[int, ...] | None:
        """An integer vector exposing exactly this face, or None.

        With ``require_positive_coordinate`` the vector additionally has some
        strictly positive entry (max_i w_i > 0); boosting a generator with a
        positive entry keeps the vector in the cone's relative interior.
        """
        gens = self.normal_generators(face)
        if not gens:
            return None  # the improper face of a full-dimensional hull
        w = [sum(g[i] for g in gens) for i in range(self.ambient_dim)]
        if not require_positive_coordinate:
            return tuple(w) if any(w) else None
        if max(w) > 0:
            return tuple(w)
        booster = next((g for g in gens if max(g) > 0), None)
        if booster is None:
            return None
        k = booster.index(max(booster))
        # smallest integer multiple pushing coordinate k strictly positive
        t = 2 + max(0, -w[k]) // booster[k]
        w = [a + t * b for a, b in zip(w, booster)]
        if max(w) <= 0:
            return None
        return tuple(w)

    def contains(self, point: Sequence) -> bool:
        return all(_dot(w, point) <= c for w, c in self.facets)


# -- global Newton polytope ---------------------------------------------------


@dataclass(frozen=True)
class GlobalNewtonPolytope:
    """Convex hull of a support set together with the origin."""

    ambient_dim: int
    vertices: frozenset[Exponent]
    facet_inequalities: tuple[tuple[tuple[int, ...], int], ...]
    generating_support: frozenset[Exponent]
    convenient: bool
    max_total_degree: int
    hull: ExponentHull

    def contains(self, point: Sequence) -> bool:
        return self.hull.contains(point)

    def face_vertex_set(self, w: Sequence) -> frozenset[Exponent]:
        return self.hull.face_vertex_set(w)

    def support_value(self, w: Sequence) -> Fraction:
        return self.hull.support_value(w)


def _support_of(f: Polynomial | PolynomialSystem) -> tuple[int, frozenset[Exponent]]:
    if isinstance(f, Polynomial):
        if f.is_zero():
            raise PolytopeError("the zero polynomial has no Newton polytope")
        return f.num_vars, f.support()
    supp: set[Exponent] = set()
    for comp in f:
        supp |= comp.support()
    if not supp:
        raise PolytopeError("the zero system has no Newton polytope")
    return f.num_vars, frozenset(supp)


def is_convenient_support(n: int, supp: frozenset[Exponent]) -> bool:
    """True when every coordinate axis carries a pure power of the support.

    Because exponents are nonnegative, the hull of supp + {0} meets axis k
    away from the origin exactly when some support point is a positive
    multiple of e_k.
    """
    for k in range(n):
        if not any(p[k] > 0 and all(p[j] == 0 for j in range(n) if j != k) for p in supp):
            return False
    return True


def global_newton_polytope(f: Polynomial | PolynomialSystem) -> GlobalNewtonPolytope:
    """Hull of the support and the origin, with convenience flag and degree cap."""
    n, supp = _support_of(f)
    origin = (0,) * n
    hull = ExponentHull(set(supp) | {origin})
    m = max(sum(p) for p in hull.vertices)
    return GlobalNewtonPolytope(
        ambient_dim=n,
        vertices=hull.vertices,
        facet_inequalities=hull.facets,
        generating_support=supp,
        convenient=is_convenient_support(n, supp),
        max_total_degree=m,
        hull=hull,
    )


def coordinate_image(gamma: GlobalNewtonPolytope, axes: Iterable[int]) -> GlobalNewtonPolytope:
    """Project the slice {x_i = 0, i in axes} onto the surviving coordinates.

    ``axes`` uses 1-based indices.  For hulls of nonnegative points the slice
    is generated by the generating points lying on it, so no new vertices can
    appear.
    """
    axes_set = {int(i) for i in axes}
    n = gamma.ambient_dim
    if any(i < 1 or i > n for i in axes_set):
        raise PolytopeError(f"axis indices must lie in 1..{n}")
    if len(axes_set) >= n:
        raise PolytopeError("cannot project away every coordinate")
    if not axes_set:
        return gamma
    keep = [i for i in range(n) if (i + 1) not in axes_set]
    drop = [i - 1 for i in sorted(axes_set)]
    sliced = {
        tuple(p[i] for i in keep)
        for p in gamma.generating_support
        if all(p[i] == 0 for i in drop)
    }
    hull = ExponentHull(sliced | {(0,) * len(keep)})
    m = max(sum(p) for p in hull.vertices)
    return GlobalNewtonPolytope(
        ambient_dim=len(keep),
        vertices=hull.vertices,
        facet_inequalities=hull.facets,
        generating_support=frozenset(sliced),
        convenient=is_convenient_support(len(keep), frozenset(sliced)),
        max_total_degree=m,
        hull=hull,
    )


# -- face data ----------------------------------------------------------------


@dataclass(frozen=True)
class FaceData:
    """A supported face: the supporting vector, its value, and the exponents
    attaining it."""

    supporting_vector: tuple[Fraction, ...]
    value: Fraction
    face_exponents: frozenset[Exponent]


def face_support(
    f: Polynomial, w: Sequence, over_polytope: bool = False
) -> FaceData:
    """Max value and attaining exponents of <w, .>.

    By default the maximum runs over the support of f; with ``over_polytope``
    it runs over the full Newton polytope at infinity (which adjoins the
    origin), so the value is clamped at zero.
    """
    if f.is_zero():
        raise PolytopeError("the zero polynomial has no supported faces")
    if len(w) != f.num_vars:
        raise PolynomialError("supporting vector has the wrong length")
    wf = tuple(Fraction(x) for x in w)
    domain = set(f.support())
    if over_polytope:
        domain.add((0,) * f.num_vars)
    best = max(_dot(wf, p) for p in domain)
    face = frozenset(p for p in domain if _dot(wf, p) == best)
    return FaceData(wf, best, face)


# -- local Newton polyhedron ----------------------------------------------------


@dataclass(frozen=True)
class LocalNewtonPolytope:
    """Hull of a support set plus the nonnegative orthant.

    ``facet_normals`` are primitive nonnegative integer vectors v with integer
    offsets c such that <v, x> >= c holds on the polyhedron, one per facet.
    """

    ambient_dim: int
    generators: frozenset[Exponent]
    facet_normals: tuple[tuple[tuple[int, ...], int], ...]

    def min_value(self, v: Sequence) -> Fraction:
        if any(Fraction(x) < 0 for x in v):
            raise PolytopeError("local supporting vectors must be nonnegative")
        return min(_dot(v, p) for p in self.generators)

    def face_generators(self, v: Sequence) -> frozenset[Exponent]:
        best = self.min_value(v)
        return frozenset(p for p in self.generators if _dot(v, p) == best)

    def face_is_compact(self, vs: Sequence[Sequence]) -> bool:
        """A face cut out by the vectors in vs is compact iff its recession
        cone {d >= 0 : <v, d> = 0 for all v} is trivial."""
        n = self.ambient_dim
        return all(any(Fraction(v[i]) > 0 for v in vs) for i in range(n))

    def primitive_normals(self) -> tuple[tuple[int, ...], ...]:
        return tuple(v for v, _ in self.facet_normals)


def _minimal_points(points: Iterable[Exponent]) -> list[Exponent]:
    """Drop coordinate-wise dominated points; the orthant hull is unchanged."""
    pts = sorted(points)
    keep: list[Exponent] = []
    for p in pts:
        if not any(all(q[i] <= p[i] for i in range(len(p))) for q in keep):
            keep = [q for q in keep if not all(p[i] <= q[i] for i in range(len(p)))]
            keep.append(p)
    return sorted(keep)


def local_newton_polytope(f: Polynomial) -> LocalNewtonPolytope:
    """Facet description of supp(f) + R^n_+, with primitive facet normals.

    Dominated support points are dropped up front: they generate the same
    polyhedron and only inflate the facet enumeration.
    """
    if f.is_zero():
        raise PolytopeError("the zero polynomial has no local Newton polyhedron")
    n = f.num_vars
    if n > MAX_DIMENSION:
        raise PolytopeError(f"dimension {n} exceeds the desk-scale cap {MAX_DIMENSION}")
    pts = _minimal_points(f.support())
    if len(pts) > 80:
        raise PolytopeError(
            f"{len(pts)} generating points exceed the desk-scale cap 80"
        )
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]

    facets: dict[tuple[tuple[int, ...], int], None] = {}
    for t_size in range(1, n + 1):
        r_size = n - t_size
        for t_subset in itertools.combinations(range(len(pts)), t_size):
            base = pts[t_subset[0]]
            point_rows = [
                [Fraction(pts[j][i] - base[i]) for i in range(n)]
                for j in t_subset[1:]
            ]
            for r_subset in itertools.combinations(range(n), r_size):
                rows = point_rows + [
                    [Fraction(x) for x in rays[i]] for i in r_subset
                ]
                null = _nullspace(rows if rows else [[Fraction(0)] * n], n)
                if len(null) != 1:
                    continue
                v = null[0]
                ref = _dot(v, base)
                sides = [_dot(v, p) - ref for p in pts]
                if any(s > 0 for s in sides) and any(s < 0 for s in sides):
                    continue
                if any(s < 0 for s in sides):
                    v = [-x for x in v]
                if any(x < 0 for x in v):
                    continue  # not a supporting direction of supp + R^n_+
                vp = _primitive(v)
                offset = min(int(_dot(vp, p)) for p in pts)
                # facet check: attaining points plus zero-coordinate rays must
                # span an (n-1)-dimensional face
                attain = [p for p in pts if _dot(vp, p) == offset]
                span = [
                    [Fraction(p[i] - attain[0][i]) for i in range(n)] for p in attain[1:]
                ]
                span += [
                    [Fraction(x) for x in rays[i]] for i in range(n) if vp[i] == 0
                ]
                if _rank(span) == n - 1:
                    facets.setdefault((vp, offset))
    ordered = tuple(sorted(facets))
    return LocalNewtonPolytope(n, frozenset(pts), ordered)


def local_polytope_is_convenient(local: LocalNewtonPolytope) -> bool:
    """A local polyhedron is convenient when it meets every coordinate axis."""
    n = local.ambient_dim
    for k in range(n):
        if not any(
            p[k] > 0 and all(p[j] == 0 for j in range(n) if j != k)
            for p in local.generators
        ):
            return False
    return True


# -- transform from a convenient global polytope to a local one -----------------


@dataclass(frozen=True)
class GTransformData:
    """Local-polyhedron data derived from a convenient global polytope.

    ``vertex_sum`` is the sum of the vertex monomials (including the constant
    for the origin vertex); ``radialized`` multiplies each of its terms by a
    power of |x|^2 so every term reaches total degree 2*degree_cap - |alpha|;
    ``support_vectors`` pair each primitive facet normal v of the local
    polyhedron with the derived global supporting vector 2*min_i(v_i)*(1,..,1) - v.
    """

    vertex_sum: Polynomial
    degree_cap: int
    radialized: Polynomial
    local_polytope: LocalNewtonPolytope
    support_vectors: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def w_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(w for _, w in self.support_vectors)


def radialize(h: Polynomial, degree_cap: int) -> Polynomial:
    """Multiply each term of h by |x|^(2*(degree_cap - |alpha|)) exactly."""
    n = h.num_vars
    if any(sum(e) > degree_cap for e in h.support()):
        raise PolytopeError("degree cap below the degree of the input polynomial")
    norm_sq = Polynomial(n, {tuple(2 if j == i else 0 for j in range(n)): 1 for i in range(n)})
    out = Polynomial.zero(n)
    for expo, coeff in h.terms.items():
        out = out + Polynomial.monomial(n, expo, coeff) * norm_sq ** (degree_cap - sum(expo))
    return out


def derived_support_vector(v: Sequence[int]) -> tuple[int, ...]:
    """Map a local facet normal v to the global vector 2*min_i(v_i)*(1,...,1) - v."""
    m = min(v)
    return tuple(2 * m - x for x in v)


def g_transform_data(gamma: GlobalNewtonPolytope) -> GTransformData:
    """Build the convenient local polyhedron attached to a convenient global one."""
    if not gamma.convenient:
        raise PolytopeError("the transform needs a convenient global polytope")
    n = gamma.ambient_dim
    vertex_sum = Polynomial(n, {v: 1 for v in gamma.vertices})
    cap = gamma.max_total_degree
    radialized = radialize(vertex_sum, cap)
    local = local_newton_polytope(radialized)
    pairs = tuple(
        (v, derived_support_vector(v)) for v in local.primitive_normals()
    )
    return GTransformData(vertex_sum, cap, radialized, local, pairs)
