"""Shared helpers for the test suite.

Everything here is deliberately independent of the library's own linear
algebra so that geometric checks cross-verify rather than echo the
implementation.
"""

from fractions import Fraction
from typing import List, Sequence, Tuple

from igusa.mpoly import Polynomial, from_terms


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by Gaussian elimination over Q."""
    mat: List[List[Fraction]] = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    col = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col]
        mat[rank] = [x / inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [x - factor * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def affine_dim(points: Sequence[Tuple[int, ...]]) -> int:
    """Dimension of the affine hull of a point set (-1 for empty)."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    diffs = [[x - b for x, b in zip(p, base)] for p in pts[1:]]
    return exact_rank(diffs)


def random_sparse_poly(
    rng,
    nvars: int,
    max_terms: int = 4,
    max_exp: int = 6,
    coeff_bound: int = 9,
    origin_vanishing: bool = True,
) -> Polynomial:
    """A random nonzero polynomial with sparse support.

    With origin_vanishing, the constant term is excluded so the result
    is admissible for Newton-polyhedron construction downstream.
    """
    names = ("x", "y", "z", "w")[:nvars]
    nterms = rng.randint(1, max_terms)
    pairs = []
    seen = set()
    while len(pairs) < nterms:
        exps = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        if origin_vanishing and all(e == 0 for e in exps):
            continue
        if exps in seen:
            continue
        seen.add(exps)
        coeff = 0
        while coeff == 0:
            coeff = rng.randint(-coeff_bound, coeff_bound)
        pairs.append((exps, coeff))
    return from_terms(names, pairs)


def poly_in_box(facets, bound: int, n: int):
    """Lattice points of {x >= 0 : a.x >= m for all facets} with coords <= bound."""
    import itertools

    out = []
    for pt in itertools.product(range(bound + 1), repeat=n):
        if all(sum(a * w for a, w in zip(f.normal, pt)) >= f.m for f in facets):
            out.append(pt)
    return out
