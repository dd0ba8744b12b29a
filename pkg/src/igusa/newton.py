"""Newton polyhedra of polynomials vanishing at the origin.

The Newton polyhedron of f is the convex hull of supp(f) + R_{>=0}^n.
Because its recession cone is the whole positive orthant, every facet
has a unique primitive inward normal with natural coordinates, and the
facet data (normal a, weight m = min a.omega over the support, meet
set) determines everything else:

* faces are the nonempty intersections of facets, each recovered
  exactly from its support points and its coordinate recession rays;
* the first meet locus F(a) of a weight vector a is the face where the
  linear form a.x attains its minimum over the polyhedron;
* the cone of a face tau is spanned (strictly positively) by the
  normals of the facets containing tau, and those cones together with
  the origin partition the weight orthant.

``decompose_simplicial`` splits a cone into simplicial cells spanned by
subsets of its generators so that every lattice point of the input lies
in exactly one cell.  Cells come from a regular triangulation with
symbolic heights eps^i (deterministic in generator order); for a closed
input the cells are half-open with shared walls assigned to the
earliest cell, and for a strictly open input the decomposition lists
the open faces of the triangulation interior to the cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import _linalg
from ._linalg import Eps
from .mpoly import Monomial, Polynomial

IntVec = Tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _unit(n: int, i: int) -> IntVec:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _affine_dim(points: Sequence[IntVec], rays: Sequence[IntVec]) -> int:
    """Dimension of conv(points) + cone(rays); points is nonempty."""
    base = points[0]
    rows = [tuple(p - q for p, q in zip(pt, base)) for pt in points[1:]]
    rows.extend(rays)
    if not rows:
        return 0
    return _linalg.rank(rows)


@dataclass(frozen=True)
class Facet:
    """A codimension-1 face: primitive normal, weight, and meet set."""

    normal: IntVec
    m: int
    meet_support: FrozenSet[Monomial]

    @property
    def rays(self) -> FrozenSet[int]:
        """Indices of coordinate rays lying in the facet."""
        return frozenset(i for i, a in enumerate(self.normal) if a == 0)


@dataclass(frozen=True)
class Face:
    """A face of the polyhedron, keyed by support points and rays.

    The improper face (the whole polyhedron) has containing_facets = ()
    and carries the full support.
    """

    meet_support: FrozenSet[Monomial]
    rays: FrozenSet[int]
    containing_facets: Tuple[int, ...]
    dim: int

    @property
    def is_improper(self) -> bool:
        return not self.containing_facets


@dataclass(frozen=True)
class Cone:
    """A rational cone spanned by generators with per-generator openness.

    ``strict[i]`` True means the coefficient of generators[i] is
    required to be > 0; False allows >= 0.  A face cone is strictly
    spanned (all True); its closure is all False.
    """

    generators: Tuple[IntVec, ...]
    strict: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.generators) != len(self.strict):
            raise ValueError("one openness flag per generator")
        if not self.generators:
            raise ValueError("cone needs at least one generator")
        n = len(self.generators[0])
        for g in self.generators:
            if len(g) != n:
                raise ValueError("mixed generator dimensions")
            if all(x == 0 for x in g):
                raise ValueError("zero generator")

    @property
    def dim(self) -> int:
        return _linalg.rank(self.generators)

    @property
    def ambient_dim(self) -> int:
        return len(self.generators[0])

    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    def is_simple(self) -> bool:
        """Simplicial with generators extendable to a lattice basis.

        True iff the gcd of the maximal minors of the generator matrix
        is 1.  Detection is provided for completeness; nothing in the
        pipeline branches on it.
        """
        if not self.is_simplicial():
            return False
        k = len(self.generators)
        n = self.ambient_dim
        g = 0
        for cols in itertools.combinations(range(n), k):
            sub = [[row[c] for c in cols] for row in self.generators]
            g = gcd(g, abs(_int_det(sub)))
        return g == 1

    def contains_lattice_point(self, v: Sequence[int]) -> bool:
        """Exact membership test for simplicial cones.

        Solves for the generator coefficients; for non-simplicial cones
        use ``cone_contains`` (H-representation) instead.
        """
        if not self.is_simplicial():
            raise ValueError("membership by coefficients needs a simplicial cone")
        cols = list(zip(*self.generators))
        lam = _linalg.solve(cols, [Fraction(x) for x in v])
        if lam is None:
            return False
        # solve() may have used a least-structured solution; verify
        recon = [sum(l * g[i] for l, g in zip(lam, self.generators)) for i in range(self.ambient_dim)]
        if any(r != x for r, x in zip(recon, v)):
            return False
        for coeff, strict in zip(lam, self.strict):
            if strict and not coeff > 0:
                return False
            if not strict and not coeff >= 0:
                return False
        return True


def _int_det(rows) -> int:
    n = len(rows)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    assert det.denominator == 1
    return int(det)


class NewtonPolyhedron:
    """Facets, faces, and weight data of conv(supp(f) + orthant)."""

    def __init__(self, variables: Tuple[str, ...], support: FrozenSet[Monomial],
                 facets: List[Facet], faces: List[Face]):
        self.variables = variables
        self.support = support
        self.facets = facets
        self.faces = faces
        self.n = len(variables)
        self._face_by_key: Dict[Tuple[FrozenSet[Monomial], FrozenSet[int]], Face] = {
            (f.meet_support, f.rays): f for f in faces
        }

    # -- weights -------------------------------------------------------

    def m_of(self, a: Sequence[int]) -> int:
        """min of a.omega over the support; a must have natural entries."""
        a = tuple(int(x) for x in a)
        if len(a) != self.n:
            raise ValueError(f"weight arity {len(a)} != {self.n}")
        if any(x < 0 for x in a):
            raise ValueError("weights must be naturals")
        return min(_dot(a, omega) for omega in self.support)

    def first_meet_locus(self, a: Sequence[int]) -> Face:
        """The face where a.x is minimal over the polyhedron.

        a = 0 gives the improper face.
        """
        a = tuple(int(x) for x in a)
        if len(a) != self.n:
            raise ValueError(f"weight arity {len(a)} != {self.n}")
        if any(x < 0 for x in a):
            raise ValueError("weights must be naturals")
        if all(x == 0 for x in a):
            return next(f for f in self.faces if f.is_improper)
        m = self.m_of(a)
        meet = frozenset(w for w in self.support if _dot(a, w) == m)
        rays = frozenset(i for i, x in enumerate(a) if x == 0)
        face = self._face_by_key.get((meet, rays))
        if face is None:
            raise AssertionError(
                f"face lattice is missing the meet locus of {a}; "
                "this indicates a facet enumeration bug"
            )
        return face

    # -- faces ----------------------------------------------------------

    def face_polynomial(self, f: Polynomial, face: Face) -> Polynomial:
        """The subsum of f supported on the face's meet set."""
        if f.support() != self.support or f.variables != self.variables:
            raise ValueError("polynomial does not match this polyhedron")
        return Polynomial(
            f.variables,
            {e: c for e, c in f.terms.items() if e in face.meet_support},
        )

    def cone_of_face(self, face: Face) -> Cone:
        """Strictly positive span of the normals of the facets containing
        the face; defined for proper faces only."""
        if face.is_improper:
            raise ValueError("the improper face has no cone")
        gens = tuple(self.facets[i].normal for i in face.containing_facets)
        return Cone(gens, (True,) * len(gens))

    def proper_faces(self) -> List[Face]:
        return [f for f in self.faces if not f.is_improper]

    # -- serialization ----------------------------------------------------

    def as_dict(self) -> dict:
        support_order = sorted(self.support)
        return {
            "facets": [
                {"normal": list(ft.normal), "m": ft.m} for ft in self.facets
            ],
            "faces": [
                {
                    "support": [list(w) for w in sorted(f.meet_support)],
                    "facets": list(f.containing_facets),
                    "dim": f.dim,
                }
                for f in self.faces
            ],
            "support": [list(w) for w in support_order],
        }


_MAX_VARS = 4
_MAX_SUPPORT = 30


def build_polyhedron(f: Polynomial) -> NewtonPolyhedron:
    """Construct the Newton polyhedron of f.

    f must be nonzero, vanish at the origin, and stay within the desk
    scale bounds (<= 4 variables, <= 30 support monomials): candidate
    facet normals are enumerated from subsets of support points plus
    coordinate rays, which is quadratic-ish in those bounds.
    """
    if f.is_zero():
        raise ValueError("zero polynomial has no Newton polyhedron")
    if f.constant_term() != 0:
        raise ValueError("f(0) must be 0 (no constant term)")
    n = f.nvars
    if n > _MAX_VARS:
        raise ValueError(f"too many variables ({n} > {_MAX_VARS})")
    support = sorted(f.support())
    if len(support) > _MAX_SUPPORT:
        raise ValueError(f"support too large ({len(support)} > {_MAX_SUPPORT})")

    facets: List[Facet] = []
    seen = set()
    units = [_unit(n, i) for i in range(n)]

    # A facet normal is orthogonal to n-1 independent directions, each a
    # difference of support points on the facet or a coordinate ray in it.
    for k in range(1, n + 1):
        ray_count = n - k
        if ray_count < 0:
            continue
        for pts in itertools.combinations(support, k):
            base = pts[0]
            diffs = [tuple(p - q for p, q in zip(pt, base)) for pt in pts[1:]]
            for rays in itertools.combinations(range(n), ray_count):
                rows = diffs + [units[i] for i in rays]
                if len(rows) != n - 1:
                    continue
                ns = _linalg.nullspace(rows, n)
                if len(ns) != 1:
                    continue
                a = _linalg.primitive_integer_vector(ns[0])
                if any(x < 0 for x in a):
                    continue  # primitive form is sign-normalised; mixed signs die here
                if a in seen:
                    continue
                m = min(_dot(a, w) for w in support)
                meet = frozenset(w for w in support if _dot(a, w) == m)
                ray_set = [units[i] for i, x in enumerate(a) if x == 0]
                if _affine_dim(sorted(meet), ray_set) != n - 1:
                    continue
                seen.add(a)
                facets.append(Facet(a, m, meet))

    facets.sort(key=lambda ft: ft.normal)
    faces = _face_lattice(support, facets, n)
    return NewtonPolyhedron(f.variables, frozenset(support), facets, faces)


def _face_lattice(support: List[Monomial], facets: List[Facet], n: int) -> List[Face]:
    """All faces as intersections of facets, plus the improper face."""
    units = [_unit(n, i) for i in range(n)]

    def close(meet: FrozenSet[Monomial], rays: FrozenSet[int]) -> Tuple:
        containing = tuple(
            i
            for i, ft in enumerate(facets)
            if meet <= ft.meet_support and rays <= ft.rays
        )
        return containing

    # key -> (meet, rays); seed with facets, close under intersection
    items: Dict[Tuple[FrozenSet[Monomial], FrozenSet[int]], None] = {}
    queue = [(ft.meet_support, ft.rays) for ft in facets]
    for key in queue:
        items[key] = None
    while queue:
        meet, rays = queue.pop()
        for ft in facets:
            m2 = meet & ft.meet_support
            r2 = rays & ft.rays
            if not m2:
                continue
            key = (m2, r2)
            if key not in items:
                items[key] = None
                queue.append(key)

    faces = []
    for meet, rays in items:
        containing = close(meet, rays)
        dim = _affine_dim(sorted(meet), [units[i] for i in rays])
        faces.append(Face(meet, rays, containing, dim))
    # the polyhedron itself: full support, all rays, no facet constraints
    faces.append(Face(frozenset(support), frozenset(range(n)), (), n))
    faces.sort(key=lambda f: (f.dim, sorted(f.meet_support)))
    return faces


# -- cone geometry ------------------------------------------------------


def _cone_hrep(generators: Sequence[IntVec]):
    """Facet inequalities of the closed cone, in span coordinates.

    Returns (span_basis, facet_normals) where membership of v means
    v in span and h.v_span >= 0 for every h.  Valid for pointed cones,
    which all cones here are (generators live in the positive orthant).
    """
    gens = [tuple(g) for g in generators]
    r = _linalg.rank(gens)
    basis = []
    for g in gens:
        if _linalg.rank(basis + [g]) > len(basis):
            basis.append(g)
        if len(basis) == r:
            break

    def span_coords(v):
        cols = list(zip(*basis))
        sol = _linalg.solve(cols, [Fraction(x) for x in v])
        if sol is None:
            return None
        recon = [
            sum(s * b[i] for s, b in zip(sol, basis)) for i in range(len(v))
        ]
        if any(a != Fraction(x) for a, x in zip(recon, v)):
            return None
        return sol

    coords = [span_coords(g) for g in gens]
    assert all(c is not None for c in coords)
    if r == 1:
        # single ray: "facet" is the origin; use the ray functional itself
        h = [c[0] for c in coords if c[0] != 0][0]
        sign = 1 if h > 0 else -1
        return basis, [(Fraction(sign),)], span_coords
    normals = []
    seen = set()
    for subset in itertools.combinations(range(len(gens)), r - 1):
        rows = [coords[i] for i in subset]
        ns = _linalg.nullspace(rows, r)
        if len(ns) != 1:
            continue
        h = _linalg.primitive_integer_vector(ns[0])
        sides = [sum(hx * cx for hx, cx in zip(h, c)) for c in coords]
        if all(s >= 0 for s in sides):
            pass
        elif all(s <= 0 for s in sides):
            h = tuple(-x for x in h)
            sides = [-s for s in sides]
        else:
            continue
        tight = [gens[i] for i, s in enumerate(sides) if s == 0]
        if tight and _linalg.rank(tight) == r - 1 and h not in seen:
            seen.add(h)
            normals.append(h)
    return basis, normals, span_coords


def cone_contains(cone: Cone, v: Sequence[int], closure: bool = False) -> bool:
    """Membership of a lattice point in the cone (or its closure).

    Uses the H-representation of the closed span and checks strictness
    against the relative interior.  For a cone with mixed flags this is
    only correct when all flags agree; the decomposition below never
    produces mixed non-simplicial cones.
    """
    if cone.is_simplicial() and not closure:
        return cone.contains_lattice_point(v)
    strict = any(cone.strict) and not closure
    if strict and not all(cone.strict):
        raise ValueError("mixed openness on a non-simplicial cone")
    basis, normals, span_coords = _cone_hrep(cone.generators)
    c = span_coords(v)
    if c is None:
        return False
    for h in normals:
        s = sum(hx * cx for hx, cx in zip(h, c))
        if strict:
            if not s > 0:
                return False
        else:
            if not s >= 0:
                return False
    return True


def _triangulate(generators: Sequence[IntVec]) -> List[Tuple[int, ...]]:
    """Regular triangulation with heights eps^(i+1) in generator order.

    Returns index tuples of the full-dimensional simplicial cells.  The
    symbolic heights rule out ties, so the result is deterministic and
    genuinely a triangulation for every input.
    """
    gens = [tuple(g) for g in generators]
    r = _linalg.rank(gens)
    basis = []
    for g in gens:
        if _linalg.rank(basis + [g]) > len(basis):
            basis.append(g)
        if len(basis) == r:
            break
    cols = list(zip(*basis))

    def span_coords(v):
        sol = _linalg.solve(cols, [Fraction(x) for x in v])
        recon = [sum(s * b[i] for s, b in zip(sol, basis)) for i in range(len(v))]
        assert all(a == Fraction(x) for a, x in zip(recon, v)), "generator outside span"
        return sol

    coords = [span_coords(g) for g in gens]
    heights = [Eps.power(i + 1) for i in range(len(gens))]
    cells = []
    for subset in itertools.combinations(range(len(gens)), r):
        rows = [coords[i] for i in subset]
        if _linalg.rank(rows) != r:
            continue
        # psi has one Eps value per span coordinate: psi . g_i = h_i on subset
        psi = _linalg.solve(rows, [heights[i] for i in subset])
        if psi is None:
            continue
        ok = True
        for j in range(len(gens)):
            if j in subset:
                continue
            val = Eps()
            for pk, ck in zip(psi, coords[j]):
                val = val + pk * ck
            if not val < heights[j]:
                ok = False
                break
        if ok:
            cells.append(subset)
    cells.sort()
    return cells


def decompose_simplicial(cone: Cone) -> List[Cone]:
    """Partition a cone into simplicial cells on generator subsets.

    For an all-closed input the cells are half-open simplicial cones of
    full rank whose disjoint union is the closed cone, shared walls
    going to the earliest cell.  For an all-strict input the cells are
    the open faces of the triangulation interior to the cone (mixed
    dimensions, all strict).  Mixed input flags are not supported.

    Every lattice point of the input cone lies in exactly one output
    cell; that is the tested contract.
    """
    if all(cone.strict):
        open_input = True
    elif not any(cone.strict):
        open_input = False
    else:
        raise ValueError("mixed openness flags on the input cone")

    gens = list(cone.generators)
    cells = _triangulate(gens)
    if not cells:
        raise AssertionError("triangulation produced no cells")

    if not open_input:
        return _half_open_cells(gens, cells)

    # open input: collect faces of the complex interior to the cone
    faces = set()
    for cell in cells:
        for k in range(1, len(cell) + 1):
            for sub in itertools.combinations(cell, k):
                faces.add(sub)
    out = []
    for sub in sorted(faces, key=lambda s: (len(s), s)):
        interior_pt = [
            sum(gens[i][c] for i in sub) for c in range(len(gens[0]))
        ]
        if _relint_contains(gens, interior_pt):
            out.append(Cone(tuple(gens[i] for i in sub), (True,) * len(sub)))
    return out


def _relint_contains(gens: Sequence[IntVec], v: Sequence[int]) -> bool:
    basis, normals, span_coords = _cone_hrep(gens)
    c = span_coords(v)
    if c is None:
        return False
    return all(sum(hx * cx for hx, cx in zip(h, c)) > 0 for h in normals)


def _half_open_cells(gens: List[IntVec], cells: List[Tuple[int, ...]]) -> List[Cone]:
    """Assign shared walls of a triangulation to the earliest cell.

    Uses a symbolically perturbed interior point w of the first cell:
    for each cell, a generator's wall is excluded (coefficient forced
    > 0) exactly when w lies on the wall's negative side.
    """
    r = len(cells[0])
    basis = [gens[i] for i in cells[0]]
    cols = list(zip(*basis))

    def span_coords(v):
        sol = _linalg.solve(cols, [Fraction(x) for x in v])
        recon = [sum(s * b[i] for s, b in zip(sol, basis)) for i in range(len(v))]
        assert all(a == Fraction(x) for a, x in zip(recon, v))
        return sol

    # w = sum eps^i * (i-th generator of the first cell), in span coords
    w = [Eps() for _ in range(r)]
    for i, gi in enumerate(cells[0]):
        c = span_coords(gens[gi])
        for k in range(r):
            w[k] = w[k] + c[k] * Eps.power(i)

    out = []
    for cell in cells:
        mat = [span_coords(gens[i]) for i in cell]
        mu = _linalg.solve([list(row) for row in zip(*mat)], w)
        assert mu is not None
        flags = []
        for m in mu:
            s = m.sign()
            assert s != 0, "perturbed point on a wall; should be impossible"
            flags.append(s < 0)
        out.append(Cone(tuple(gens[i] for i in cell), tuple(flags)))
    return out
