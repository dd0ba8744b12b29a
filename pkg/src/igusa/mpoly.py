"""Sparse multivariate polynomials with integer coefficients.

A monomial is an exponent tuple (one natural number per variable); a
polynomial is a map from monomials to nonzero integer coefficients
together with an ordered tuple of variable names.  Terms are kept in
graded lexicographic order for printing and hashing, so equal
polynomials have equal canonical forms.

The transforms used by the stationary-phase recursion live here:

* ``shift_scale``: rewrite f(P + p x) as p^e * g(x) with g of p-unit
  content, returning (e, g);
* ``monomial_scale``: rewrite f(p^{k_1} x_1, ..., p^{k_n} x_n) the same
  way.

Both are exact identities over the integers, tested by re-expansion.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Tuple, Union

from .numeric import INFINITE, ModResidue, p_valuation, valuation_min

Monomial = Tuple[int, ...]

_MAX_EXPONENT = 10**6


def _term_sort_key(exps: Monomial):
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial over Z."""

    __slots__ = ("variables", "terms", "_key")

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, int]):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names: {variables}")
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError(
                    f"monomial arity {len(exps)} != {len(variables)} variables"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if any(e > _MAX_EXPONENT for e in exps):
                raise OverflowError(f"exponent over limit {_MAX_EXPONENT} in {exps}")
            if not isinstance(coeff, int):
                raise TypeError(f"integer coefficients only, got {type(coeff).__name__}")
            if coeff != 0:
                clean[exps] = clean.get(exps, 0) + coeff
                if clean[exps] == 0:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", dict(clean))
        key = (variables, tuple(sorted(clean.items(), key=lambda kv: _term_sort_key(kv[0]))))
        object.__setattr__(self, "_key", key)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries ------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def content(self) -> int:
        g = 0
        for c in self.terms.values():
            g = gcd(g, abs(c))
        return g

    def canonical_key(self):
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    # -- arithmetic ---------------------------------------------------

    def _check_vars(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise ValueError(
                f"variable mismatch: {self.variables} vs {other.variables}"
            )

    def __add__(self, other):
        if isinstance(other, int):
            other = constant(self.variables, other)
        self._check_vars(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            terms[exps] = terms.get(exps, 0) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(
                self.variables, {e: c * other for e, c in self.terms.items()}
            )
        self._check_vars(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- evaluation and calculus --------------------------------------

    def evaluate(self, point: Sequence[Union[int, Fraction, ModResidue]]):
        """Evaluate at a point of ints, Fractions, or ModResidues."""
        if len(point) != self.nvars:
            raise ValueError(f"point arity {len(point)} != {self.nvars}")
        if point and isinstance(point[0], ModResidue):
            zero = ModResidue(0, point[0].prime, point[0].level)
        else:
            zero = 0
        acc = zero
        for exps, coeff in self.terms.items():
            term = coeff
            for x, e in zip(point, exps):
                if e:
                    term = term * x**e
            acc = acc + term
        return acc

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable i."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        out = {}
        for exps, coeff in self.terms.items():
            if exps[i] == 0:
                continue
            e = list(exps)
            c = coeff * e[i]
            e[i] -= 1
            out[tuple(e)] = out.get(tuple(e), 0) + c
        return Polynomial(self.variables, out)

    def partials(self) -> Tuple["Polynomial", ...]:
        return tuple(self.partial(i) for i in range(self.nvars))

    def reduce_mod_p(self, p: int) -> "Polynomial":
        """Coefficients reduced into [0, p)."""
        return Polynomial(self.variables, {e: c % p for e, c in self.terms.items()})

    # -- printing -----------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda kv: _term_sort_key(kv[0]), reverse=True)
        pieces = []
        for idx, (exps, coeff) in enumerate(ordered):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e > 0
            )
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append((" + " if coeff > 0 else " - ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({self})"


def constant(variables: Sequence[str], c: int) -> Polynomial:
    return Polynomial(variables, {(0,) * len(variables): c})


def variable(variables: Sequence[str], name: str) -> Polynomial:
    idx = list(variables).index(name)
    exps = [0] * len(variables)
    exps[idx] = 1
    return Polynomial(variables, {tuple(exps): 1})


def from_terms(variables: Sequence[str], pairs: Iterable[Tuple[Monomial, int]]) -> Polynomial:
    terms: dict = {}
    for exps, c in pairs:
        exps = tuple(exps)
        terms[exps] = terms.get(exps, 0) + c
    return Polynomial(variables, terms)


def direct_sum(f: Polynomial, g: Polynomial) -> Polynomial:
    """f(x) + g(y) on the disjoint union of the two variable sets.

    Variable names must not collide; that is the caller's namespace
    guarantee, and a collision is an error rather than a rename.
    """
    shared = set(f.variables) & set(g.variables)
    if shared:
        raise ValueError(f"variable collision in direct sum: {sorted(shared)}")
    variables = f.variables + g.variables
    pad_g = (0,) * g.nvars
    pad_f = (0,) * f.nvars
    terms: dict = {}
    for exps, c in f.terms.items():
        terms[exps + pad_g] = terms.get(exps + pad_g, 0) + c
    for exps, c in g.terms.items():
        terms[pad_f + exps] = terms.get(pad_f + exps, 0) + c
    return Polynomial(variables, terms)


def _min_coeff_valuation(f: Polynomial, p: int):
    return valuation_min(p_valuation(c, p) for c in f.terms.values())


def shift_scale(f: Polynomial, point: Sequence[int], p: int) -> Tuple[int, Polynomial]:
    """Write f(P + p x) = p^e * g(x) with g of p-unit content.

    P must be an integer point and f nonzero.  Returns (e, g).
    """
    if f.is_zero():
        raise ValueError("shift_scale of the zero polynomial")
    if len(point) != f.nvars:
        raise ValueError(f"point arity {len(point)} != {f.nvars}")
    point = [int(x) for x in point]
    # powers[i][j] = (P_i + p*x_i)^j, built incrementally
    linears = [
        constant(f.variables, point[i]) + p * variable(f.variables, f.variables[i])
        for i in range(f.nvars)
    ]
    max_e = [0] * f.nvars
    for exps in f.terms:
        for i, e in enumerate(exps):
            max_e[i] = max(max_e[i], e)
    powers = []
    for i in range(f.nvars):
        row = [constant(f.variables, 1)]
        for _ in range(max_e[i]):
            row.append(row[-1] * linears[i])
        powers.append(row)
    acc = constant(f.variables, 0)
    for exps, coeff in f.terms.items():
        term = constant(f.variables, coeff)
        for i, e in enumerate(exps):
            if e:
                term = term * powers[i][e]
        acc = acc + term
    e = _min_coeff_valuation(acc, p)
    assert e is not INFINITE  # substitution is invertible over Q
    scale = p**e
    g = Polynomial(f.variables, {m: c // scale for m, c in acc.terms.items()})
    return e, g


def monomial_scale(f: Polynomial, k: Sequence[int], p: int) -> Tuple[int, Polynomial]:
    """Write f(p^{k_1} x_1, ..., p^{k_n} x_n) = p^e * g(x), unit content.

    The exponents k must be naturals.  When k lies in the closed cone of
    a face and f has p-unit content, e equals the face weight there.
    """
    if f.is_zero():
        raise ValueError("monomial_scale of the zero polynomial")
    if len(k) != f.nvars:
        raise ValueError(f"weight arity {len(k)} != {f.nvars}")
    k = [int(x) for x in k]
    if any(x < 0 for x in k):
        raise ValueError("weights must be naturals")
    shifted = {}
    vals = []
    for exps, coeff in f.terms.items():
        w = sum(a * b for a, b in zip(k, exps))
        vals.append(p_valuation(coeff, p) + w)
        shifted[exps] = (coeff, w)
    e = valuation_min(vals)
    # e <= v(coeff) + w for every term, so the division is exact
    terms = {exps: coeff * p**w // p**e for exps, (coeff, w) in shifted.items()}
    g = Polynomial(f.variables, terms)
    return e, g
