"""Rational maps P^r --> P^N given by linear systems of degree-d forms.

The graph of the map has bigraded coordinate ring whose (a, b) piece is
[I^b]_{a+bd}, I the ideal of the forms.  Its dimension is read off directly
as the span of m * f_{j1} ... f_{jb} in the polynomial ring, so the Rees
algebra is never presented.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import CriteriaDisagreement, NegativeExceptionalDegree
from .gring import (DEFAULT_PRIME, WHOLE, MultigradedRing, PieceCache, SubspacePiece,
                    polynomial_ring, span)
from .hilbert import DEFAULT_CONFIG, FitConfig, FittedPolynomial, detect_stabilization, leading_coeffs
from .multiplicity import rel_mixed_mult
from .poly import Poly


class LinearSystem:
    """A linear system of degree-d forms on P^r = Proj k[names]."""

    def __init__(self, names: Sequence[str], degree: int, forms: Sequence[Poly],
                 prime: int = DEFAULT_PRIME):
        self.names = tuple(names)
        self.degree = int(degree)
        self.forms = tuple(forms)
        self.prime = prime
        if self.degree < 1:
            raise ValueError("the degree of a linear system must be at least 1")
        ring = self.ring
        for f in self.forms:
            if f.nvars != len(self.names):
                raise ValueError("form lives in a different polynomial ring")
            deg = ring.degree_of(f)
            if deg is not None and deg != (self.degree,):
                raise ValueError(f"{f.format(self.names)} is not a form of degree {self.degree}")
        if self.piece.is_zero():
            raise ValueError("a linear system needs a nonzero form")

    @cached_property
    def ring(self) -> MultigradedRing:
        return polynomial_ring(self.names, prime=self.prime)

    @property
    def r(self) -> int:
        return len(self.names) - 1

    @cached_property
    def piece(self) -> SubspacePiece:
        """span(forms) inside k[x]_d."""
        return span(self.ring, list(self.forms), (self.degree,))

    @cached_property
    def cache(self) -> PieceCache:
        return PieceCache(self.ring)

    def with_prime(self, prime: int) -> LinearSystem:
        return LinearSystem(self.names, self.degree, self.forms, prime)

    def __repr__(self):
        return f"LinearSystem(d={self.degree}, forms={len(self.forms)}, r={self.r})"


def rees_piece(sys: LinearSystem, a: int, b: int) -> int:
    """dim [I^b]_{a+bd}."""
    if a < 0 or b < 0:
        raise ValueError("rees_piece needs a, b >= 0")
    return sys.cache.power((sys.piece,), (b,), WHOLE, (a,)).dim


@dataclass
class GraphDegrees:
    gamma: dict[tuple[int, int], int]
    proj_degrees: list[int]
    exceptional: dict[tuple[int, int], int]
    fit: FittedPolynomial | None = field(default=None, repr=False)


def _graph_fit(sys: LinearSystem, config: FitConfig) -> FittedPolynomial:
    return detect_stabilization(lambda n: rees_piece(sys, n[0], n[1]), 2, sys.r, config)


def graph_multidegrees(sys: LinearSystem, config: FitConfig = DEFAULT_CONFIG) -> dict:
    """deg^{(n1,n2)} of the graph for n1 + n2 = r."""
    return leading_coeffs(_graph_fit(sys, config), sys.r)


def projective_degrees(sys: LinearSystem, config: FitConfig = DEFAULT_CONFIG,
                       gamma: dict | None = None) -> list[int]:
    gamma = graph_multidegrees(sys, config) if gamma is None else gamma
    r = sys.r
    return [gamma[(r - i, i)] for i in range(r + 1)]


def exceptional_multidegrees(sys: LinearSystem, config: FitConfig = DEFAULT_CONFIG,
                             gamma: dict | None = None) -> dict[tuple[int, int], int]:
    """Multidegrees of the exceptional divisor from those of the graph."""
    gamma = graph_multidegrees(sys, config) if gamma is None else gamma
    d, r = sys.degree, sys.r
    out = {}
    for n1 in range(r - 1, -1, -1):
        n2 = r - 1 - n1
        val = d * gamma[(n1 + 1, n2)] - gamma[(n1, n2 + 1)]
        if val < 0:
            raise NegativeExceptionalDegree(f"deg^({n1},{n2})(E) = {val} < 0")
        out[(n1, n2)] = val
    return out


def graph_degrees(sys: LinearSystem, config: FitConfig = DEFAULT_CONFIG) -> GraphDegrees:
    fit = _graph_fit(sys, config)
    gamma = leading_coeffs(fit, sys.r)
    if gamma[(sys.r, 0)] != 1:
        raise NegativeExceptionalDegree(f"deg^({sys.r},0) of the graph is {gamma[(sys.r, 0)]}, not 1")
    return GraphDegrees(gamma, projective_degrees(sys, gamma=gamma),
                        exceptional_multidegrees(sys, gamma=gamma), fit)


class GraphPair:
    """The bigraded inclusion A in B attached to two nested linear systems.

    [B]_{(a,b)} = [I_2^b]_{a+bd}, [A]_{(1,0)} = all linear forms and
    [A]_{(0,1)} = the forms of the smaller system, so
    [A]_u [B]_w = D_1^{u_2} D_2^{w_2} k[x]_{u_1+w_1}.
    """

    grading_rank = 2

    def __init__(self, small: LinearSystem, big: LinearSystem):
        self.small = small
        self.big = big
        self.cache = big.cache

    @property
    def r(self) -> int:
        return self.big.r

    def lambda_ab(self, t, n) -> int:
        top = rees_piece(self.big, n[0], n[1])
        u2 = n[1] - t[1] + 1
        if n[0] - t[0] + 1 < 0 or u2 < 0:
            return top
        low = self.cache.power((self.small.piece, self.big.piece), (u2, t[1] - 1), WHOLE, (n[0],))
        return top - low.dim


@dataclass
class Comparison:
    finite_birational: bool
    same_projective_degrees: bool
    same_exceptional: bool
    relative: dict
    small: GraphDegrees
    big: GraphDegrees

    def as_dict(self) -> dict:
        return {"a_finite_birational": self.finite_birational,
                "b_projective_degrees": self.same_projective_degrees,
                "c_exceptional_multidegrees": self.same_exceptional}


def compare_linear_systems(d1: LinearSystem, d2: LinearSystem,
                           config: FitConfig = DEFAULT_CONFIG) -> Comparison:
    """Decide whether the graph of d2 maps finitely and birationally onto that of d1, three ways."""
    if d1.names != d2.names or d1.degree != d2.degree or d1.prime != d2.prime:
        raise ValueError("linear systems must share ambient variables, degree and prime")
    if not d2.piece.contains(span(d2.ring, list(d1.forms), (d1.degree,))):
        raise ValueError("the first system is not contained in the second")
    g1, g2 = graph_degrees(d1, config), graph_degrees(d2, config)
    rel = rel_mixed_mult(GraphPair(d1, d2), (1, 1), config)
    a = all(v == 0 for v in rel.values())
    b = g1.proj_degrees == g2.proj_degrees
    c = g1.exceptional == g2.exceptional
    if not (a == b == c):
        raise CriteriaDisagreement(f"routes disagree: (a)={a}, (b)={b}, (c)={c}")
    return Comparison(a, b, c, rel, g1, g2)
