"""Brute-force p-adic point counting and end-to-end denominator checks.

The ground truth in this package: count solutions of f = 0 mod p^m by
breadth-first lifting (survivors mod p^m expand to their p^n children
mod p^(m+1)), optionally restricted to a valuation-cone domain, convert
the counts to the measure series of Z(f; s), and verify that the series
satisfies the linear recurrence forced by a claimed factored
denominator, recovering the numerator polynomial.

Everything here is deliberately dumb: no Hensel block lifting, no
smooth-point shortcuts.  That independence is what makes the
cross-checks against the stationary-phase evaluator and the predicted
denominators meaningful.

Counting is exact; the only concession to cost is an explicit node
budget (a node is one survivor expanded by one level).  Exceeding it
returns the completed prefix with a truncation marker rather than an
error.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import tsden
from .mpoly import Polynomial, direct_sum
from .newton import Face, NewtonPolyhedron
from .numeric import PrimeSpec
from .ratfun import (
    PowerSeries,
    RationalZeta,
    recover_numerator,
    reduce_factors,
)

DEFAULT_BUDGET = 10**8
_CAND_CHUNK = 1 << 20  # candidate rows evaluated per numpy block


class BudgetExceeded(RuntimeError):
    """The node budget stopped counting before the requested depth."""


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("IGUSA_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# valuation-cone domains


@dataclass(frozen=True)
class ConeDomainSpec:
    """A subset A of N^n of valuation vectors, with decidable membership.

    ``member`` receives an exact valuation vector (a tuple of naturals).
    During counting, vectors are truncated at the working level m
    (a coordinate divisible by p^m reports m); ``decided_out`` receives
    the truncated vector together with a per-coordinate flag marking
    truncation ("the true valuation is >= this") and may return True
    when no completion of the vector can lie in A, allowing the search
    to drop the branch.  The default rule only prunes fully determined
    vectors outside A, which is always sound.
    """

    name: str
    dim: int
    member: Callable[[Tuple[int, ...]], bool]
    decided_out: Optional[Callable[[Tuple[int, ...], Tuple[bool, ...]], bool]] = None

    def is_out_forever(self, vals: Tuple[int, ...], capped: Tuple[bool, ...]) -> bool:
        if self.decided_out is not None and self.decided_out(vals, capped):
            return True
        return not any(capped) and not self.member(vals)

    @classmethod
    def zero_cone(cls, dim: int) -> "ConeDomainSpec":
        """A = {0}: all coordinates are units."""
        return cls(
            name="zero",
            dim=dim,
            member=lambda vals: all(v == 0 for v in vals),
            # any coordinate with valuation >= 1 (truncated or not) is fatal
            decided_out=lambda vals, capped: any(v >= 1 for v in vals),
        )

    @classmethod
    def face_cone(
        cls, polyhedron: NewtonPolyhedron, face: Face, name: Optional[str] = None
    ) -> "ConeDomainSpec":
        """A = the cone of weight vectors whose first meet locus is `face`."""
        label = name if name is not None else f"cone{sorted(face.meet_support)}"
        return cls(
            name=label,
            dim=polyhedron.n,
            member=lambda vals: polyhedron.first_meet_locus(vals) == face,
        )

    @classmethod
    def from_generators(
        cls,
        generators: Sequence[Sequence[int]],
        bounds: Sequence[int],
        name: str = "generated",
    ) -> "ConeDomainSpec":
        """A = all sums c_i * g_i with 0 <= c_i <= bounds[i] (finite set)."""
        gens = [tuple(int(c) for c in g) for g in generators]
        if not gens:
            raise ValueError("need at least one generator")
        dim = len(gens[0])
        if any(len(g) != dim for g in gens) or len(bounds) != len(gens):
            raise ValueError("generator/bound arity mismatch")
        points = set()
        for combo in itertools.product(*[range(b + 1) for b in bounds]):
            points.add(
                tuple(sum(c * g[i] for c, g in zip(combo, gens)) for i in range(dim))
            )
        frozen = frozenset(points)
        return cls(name=name, dim=dim, member=lambda vals: tuple(vals) in frozen)

    @classmethod
    def product(cls, left: "ConeDomainSpec", right: "ConeDomainSpec") -> "ConeDomainSpec":
        """A = left x right on split valuation vectors."""
        d = left.dim

        def member(vals):
            return left.member(tuple(vals[:d])) and right.member(tuple(vals[d:]))

        def decided_out(vals, capped):
            return left.is_out_forever(
                tuple(vals[:d]), tuple(capped[:d])
            ) or right.is_out_forever(tuple(vals[d:]), tuple(capped[d:]))

        return cls(
            name=f"{left.name} x {right.name}",
            dim=left.dim + right.dim,
            member=member,
            decided_out=decided_out,
        )


# ---------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class CountSeries:
    """N_m = #{x mod p^m : f(x) = 0 mod p^m (and x's valuation class in A)}."""

    f: Polynomial
    p: PrimeSpec
    dim: int
    counts: Tuple[int, ...]  # counts[m-1] = N_m
    n0: int  # N_0: 1 unrestricted; domain membership of the all-zero class otherwise
    requested_depth: int
    truncated: bool
    nodes_expanded: int
    domain_name: Optional[str] = None

    @property
    def depth(self) -> int:
        return len(self.counts)

    def N(self, m: int) -> int:
        if m == 0:
            return self.n0
        if not 1 <= m <= self.depth:
            raise IndexError(f"N_{m} not computed (depth {self.depth})")
        return self.counts[m - 1]

    def as_dict(self) -> dict:
        return {
            "f": str(self.f),
            "p": self.p.p,
            "dim": self.dim,
            "counts": list(self.counts),
            "requested_depth": self.requested_depth,
            "truncated": self.truncated,
            "nodes_expanded": self.nodes_expanded,
            "domain": self.domain_name,
        }


def _pow_mod_np(arr: np.ndarray, e: int, modulus: int) -> np.ndarray:
    if e == 1:
        return arr % modulus
    if e == 2:
        a = arr % modulus
        return a * a % modulus
    result = None
    base = arr % modulus
    while e:
        if e & 1:
            result = base.copy() if result is None else result * base % modulus
        e >>= 1
        if e:
            base = base * base % modulus
    return result if result is not None else np.ones_like(arr)


def _eval_mod_np(f: Polynomial, pts: np.ndarray, modulus: int) -> np.ndarray:
    acc = np.zeros(pts.shape[0], dtype=np.int64)
    for exps, coeff in f.terms.items():
        term = np.full(pts.shape[0], coeff % modulus, dtype=np.int64)
        for i, e in enumerate(exps):
            if e:
                term = term * _pow_mod_np(pts[:, i], e, modulus) % modulus
        acc = (acc + term) % modulus
    return acc


def _expand_level_np(f: Polynomial, surv: np.ndarray, p: int, m: int) -> np.ndarray:
    n = surv.shape[1]
    modulus = p ** (m + 1)
    step = p**m
    offsets = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    rows = max(1, _CAND_CHUNK // len(offsets))
    starts = range(0, surv.shape[0], rows)

    def work(start: int) -> np.ndarray:
        block = surv[start : start + rows]
        cand = (block[:, None, :] + step * offsets[None, :, :]).reshape(-1, n)
        return cand[_eval_mod_np(f, cand, modulus) == 0]

    threads = _thread_count()
    if threads > 1 and len(starts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = list(pool.map(work, starts))
    else:
        pieces = [work(s) for s in starts]
    pieces = [x for x in pieces if x.size]
    if not pieces:
        return np.empty((0, n), dtype=np.int64)
    return np.concatenate(pieces, axis=0)


def _eval_mod_py(f: Polynomial, point: Tuple[int, ...], modulus: int) -> int:
    acc = 0
    for exps, coeff in f.terms.items():
        term = coeff % modulus
        for x, e in zip(point, exps):
            if e:
                term = term * pow(x, e, modulus) % modulus
        acc = (acc + term) % modulus
    return acc


def _expand_level_py(
    f: Polynomial, surv: List[Tuple[int, ...]], p: int, m: int
) -> List[Tuple[int, ...]]:
    modulus = p ** (m + 1)
    step = p**m
    out = []
    for point in surv:
        for offset in itertools.product(range(p), repeat=len(point)):
            child = tuple(a + step * o for a, o in zip(point, offset))
            if _eval_mod_py(f, child, modulus) == 0:
                out.append(child)
    return out


def _truncated_valuations(
    point: Tuple[int, ...], p: int, level: int
) -> Tuple[Tuple[int, ...], Tuple[bool, ...]]:
    vals = []
    capped = []
    for x in point:
        if x == 0:
            vals.append(level)
            capped.append(True)
        else:
            v = 0
            while x % p == 0:
                x //= p
                v += 1
            vals.append(v)
            capped.append(False)
    return tuple(vals), tuple(capped)


def count_mod(
    f: Polynomial,
    p: PrimeSpec,
    depth: int,
    domain: Optional[ConeDomainSpec] = None,
    budget: int = DEFAULT_BUDGET,
) -> CountSeries:
    """Exact N_m for m = 1..depth by breadth-first lifting.

    With a domain, N_m counts only survivors whose truncated valuation
    vector (coordinates divisible by p^m report m) belongs to A, and
    branches that can never re-enter A are pruned.  The node budget
    counts survivors expanded by one level; when the next level would
    exceed it the series is returned truncated.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = f.nvars
    if n < 1:
        raise ValueError("need at least one variable")
    if domain is not None and domain.dim != n:
        raise ValueError(f"domain dimension {domain.dim} != variable count {n}")

    counts: List[int] = []
    nodes = 0
    truncated = False
    surv_np: Optional[np.ndarray] = None
    surv_py: Optional[List[Tuple[int, ...]]] = None
    if domain is None:
        surv_np = np.zeros((1, n), dtype=np.int64)
    else:
        surv_py = [(0,) * n]

    for m in range(depth):
        size = surv_np.shape[0] if surv_np is not None else len(surv_py)
        if nodes + size > budget:
            truncated = True
            break
        nodes += size
        modulus = p.p ** (m + 1)
        if surv_np is not None and modulus * modulus >= 2**63:
            # int64 products would overflow; fall back to exact big ints
            surv_py = [tuple(int(c) for c in row) for row in surv_np]
            surv_np = None
        if surv_np is not None:
            surv_np = _expand_level_np(f, surv_np, p.p, m)
            counts.append(int(surv_np.shape[0]))
        else:
            surv_py = _expand_level_py(f, surv_py, p.p, m)
            if domain is not None:
                in_domain = 0
                kept = []
                for point in surv_py:
                    vals, capped = _truncated_valuations(point, p.p, m + 1)
                    if domain.member(vals):
                        in_domain += 1
                    if not domain.is_out_forever(vals, capped):
                        kept.append(point)
                counts.append(in_domain)
                surv_py = kept
            else:
                counts.append(len(surv_py))

    n0 = 1 if domain is None else int(bool(domain.member((0,) * n)))
    return CountSeries(
        f=f,
        p=p,
        dim=n,
        counts=tuple(counts),
        n0=n0,
        requested_depth=depth,
        truncated=truncated,
        nodes_expanded=nodes,
        domain_name=None if domain is None else domain.name,
    )


def measure_series(counts: CountSeries) -> PowerSeries:
    """coefficient of t^m = N_m q^(-mn) - N_(m+1) q^(-(m+1)n), m < depth.

    This is the Haar volume of {x : v(f(x)) = m} (intersected with the
    domain when the counts are restricted); the last usable index is
    depth - 1.
    """
    q = counts.p.q
    n = counts.dim
    coeffs = [
        Fraction(counts.N(m), q ** (m * n))
        - Fraction(counts.N(m + 1), q ** ((m + 1) * n))
        for m in range(counts.depth)
    ]
    return PowerSeries(tuple(coeffs))


# ---------------------------------------------------------------------------
# end-to-end verification


@dataclass(frozen=True)
class VerificationReport:
    """Everything verify_theorem saw, pass or fail."""

    ok: bool
    p: int
    depth: int
    max_deg: int
    factors: Tuple[Tuple[int, int], ...]
    candidate_poles: Tuple[Fraction, ...]
    counts: CountSeries
    series: PowerSeries
    numerator: Optional[Tuple[Fraction, ...]]
    residuals: Tuple[Tuple[int, Fraction], ...]
    cancelled_factors: Tuple[Tuple[int, int], ...]
    surviving_factors: Tuple[Tuple[int, int], ...]
    surviving_poles: Tuple[Fraction, ...]
    noncrit_warnings: Tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "p": self.p,
            "depth": self.depth,
            "max_deg": self.max_deg,
            "factors": [list(f) for f in self.factors],
            "candidate_poles": [str(x) for x in self.candidate_poles],
            "counts": list(self.counts.counts),
            "series": [str(c) for c in self.series.coefficients],
            "numerator": None
            if self.numerator is None
            else [str(c) for c in self.numerator],
            "residuals": [[m, str(c)] for m, c in self.residuals],
            "cancelled_factors": [list(f) for f in self.cancelled_factors],
            "poles_surviving": [str(x) for x in self.surviving_poles],
            "noncrit_warnings": list(self.noncrit_warnings),
        }


def verify_theorem(
    f: Polynomial,
    g: Polynomial,
    p: PrimeSpec,
    depth: Optional[int] = None,
    max_deg: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    check_mode: Optional[str] = None,
) -> VerificationReport:
    """Check the predicted denominator of Z(f(+)g; s) against true counts.

    Pipeline: predicted factors (1 - q^-A t^B) for the direct sum, exact
    measure series to `depth`, numerator recovery demanding that every
    series coefficient of degree in (max_deg, depth-1] vanish after
    multiplying by the denominator, then factor-by-factor cancellation
    to report which candidate poles survive.

    Defaults: max_deg = depth - 3 when depth is given (two residual
    checks), else max_deg = sum of t-powers and depth = max_deg + that
    sum + 2.  A failed recovery is returned as a report with ok=False
    and the nonzero residuals — a falsification candidate, not an
    exception.  A truncated count (budget) raises BudgetExceeded.
    """
    den = tsden.denominator(f, g, check_mode=check_mode)
    factors = tuple(den.factors())
    total_b = sum(b for _, b in factors)
    if max_deg is None:
        max_deg = depth - 3 if depth is not None else total_b
    if depth is None:
        depth = total_b + max_deg + 2
    if max_deg < 0 or depth < 2:
        raise ValueError(f"unusable window: depth={depth}, max_deg={max_deg}")

    h = direct_sum(f, g)
    counts = count_mod(h, p, depth, budget=budget)
    if counts.truncated:
        raise BudgetExceeded(
            f"count of {h} truncated at depth {counts.depth}/{depth} "
            f"after {counts.nodes_expanded} nodes (budget {budget})"
        )
    series = measure_series(counts)
    recovery = recover_numerator(series, factors, p.q, max_deg)
    candidate_poles = tuple(sorted(den.candidate_poles().poles))
    if not recovery.ok:
        return VerificationReport(
            ok=False,
            p=p.p,
            depth=depth,
            max_deg=max_deg,
            factors=factors,
            candidate_poles=candidate_poles,
            counts=counts,
            series=series,
            numerator=None,
            residuals=recovery.residuals,
            cancelled_factors=(),
            surviving_factors=factors,
            surviving_poles=candidate_poles,
            noncrit_warnings=tuple(den.noncrit_warnings),
        )
    zeta = RationalZeta(recovery.numerator, factors, p.q)
    reduction = reduce_factors(zeta)
    return VerificationReport(
        ok=True,
        p=p.p,
        depth=depth,
        max_deg=max_deg,
        factors=factors,
        candidate_poles=candidate_poles,
        counts=counts,
        series=series,
        numerator=recovery.numerator,
        residuals=(),
        cancelled_factors=reduction.cancelled,
        surviving_factors=reduction.surviving,
        surviving_poles=reduction.surviving_poles(),
        noncrit_warnings=tuple(den.noncrit_warnings),
    )
