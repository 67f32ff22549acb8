"""Brute-force second opinion on graded-piece dimensions.

Deliberately naive and independent of the main engine: polynomials are plain
dicts, monomials are ordered lexicographically, every generating set is
materialized from scratch (no memoization), and ranks come from fraction-free
elimination on sparse rows modulo a separate prime.  The only thing shared
with :mod:`relmult.gring` is the tuple-of-ints multidegree convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import SizeBoundExceeded

ORACLE_PRIME = 65521
SIZE_BOUND = 12


@dataclass(frozen=True)
class RingData:
    """Plain description of k[names]/(relations): dict polynomials, tuple degrees."""

    degrees: tuple
    relations: tuple = ()

    @classmethod
    def of(cls, ring) -> RingData:
        rels = tuple(tuple(sorted(r.items())) for r in ring.relations)
        return cls(tuple(tuple(d) for d in ring.degrees), rels)


@dataclass(frozen=True)
class PieceQuery:
    """H_1^{n_1}...H_q^{n_q} [M]_v as seeds (lists of dict polys), exponents, module and v.

    ``module`` is ``"whole"``, ``"ideal"`` or ``"quotient"``; for quotients the
    dimension asked for is that of the preimage in [B]_deg, that is
    products plus [J]_deg.
    """

    seeds: tuple
    exponents: tuple
    module: str
    module_gens: tuple
    v: tuple


def _deg_of_exps(exps, degrees):
    p = len(degrees[0])
    return tuple(sum(e * d[j] for e, d in zip(exps, degrees)) for j in range(p))


def _monomials(degrees, target):
    """Exponent vectors of weighted degree target, in lexicographic order (largest first)."""
    n = len(degrees)
    out = []

    def go(i, rest, acc):
        if i == n:
            if all(x == 0 for x in rest):
                out.append(tuple(acc))
            return
        d = degrees[i]
        top = min([r // x for r, x in zip(rest, d) if x > 0] or [0])
        for k in range(top, -1, -1):
            go(i + 1, [r - k * x for r, x in zip(rest, d)], acc + [k])

    if any(x < 0 for x in target):
        return []
    go(0, list(target), [])
    return out


def _mul(f, g, prime):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = (out.get(e, 0) + c1 * c2) % prime
    return {e: c for e, c in out.items() if c}


def _poly_degree(f, degrees):
    degs = {_deg_of_exps(e, degrees) for e in f}
    if len(degs) != 1:
        return None
    return degs.pop()


class _Eliminator:
    """Incremental fraction-free row reduction mod p on sparse dict rows."""

    def __init__(self, order, prime):
        self.col = {m: i for i, m in enumerate(order)}
        self.prime = prime
        self.pivots: dict[int, dict[int, int]] = {}

    def add(self, poly) -> bool:
        p = self.prime
        row = {}
        for e, c in poly.items():
            c %= p
            if c:
                j = self.col[e]
                row[j] = (row.get(j, 0) + c) % p
        row = {j: c for j, c in row.items() if c}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                self.pivots[lead] = row
                return True
            a, b = piv[lead], row[lead]
            new = {j: c * a % p for j, c in row.items()}
            for j, c in piv.items():
                new[j] = (new.get(j, 0) - b * c) % p
            row = {j: c for j, c in new.items() if c}
        return False

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _products(seeds, exponents, prime, nvars):
    """Every product of n_i elements drawn (with repetition) from seed i."""
    one = {(0,) * nvars: 1}
    choices = []
    for gens, k in zip(seeds, exponents):
        choices.append([g for g in itertools.combinations_with_replacement(range(len(gens)), k)])
    for pick in itertools.product(*choices):
        f = one
        for gens, idx in zip(seeds, pick):
            for i in idx:
                f = _mul(f, gens[i], prime)
        if f:
            yield f


def oracle_dim(ring: RingData, query: PieceQuery | None, deg, prime: int = ORACLE_PRIME,
               bound: int = SIZE_BOUND) -> int:
    """Dimension of a piece of B, or of [B]_deg itself when query is None."""
    deg = tuple(int(x) for x in deg)
    if sum(deg) > bound:
        raise SizeBoundExceeded(f"|{deg}| = {sum(deg)} exceeds the oracle bound {bound}")
    degrees = ring.degrees
    nvars = len(degrees)
    mons = _monomials(degrees, deg)
    if not mons:
        return 0
    rels = [{e: c % prime for e, c in rel if c % prime} for rel in ring.relations]
    rels = [r for r in rels if r]
    elim = _Eliminator(mons, prime)
    for rel in rels:
        rdeg = _poly_degree(rel, degrees)
        for m in _monomials(degrees, tuple(a - b for a, b in zip(deg, rdeg))):
            elim.add(_mul(rel, {m: 1}, prime))
    base = elim.rank
    if query is None:
        return len(mons) - base
    seeds = [[{e: c % prime for e, c in g if c % prime} for g in gens] for gens in query.seeds]
    seeds = [[g for g in gens if g] for gens in seeds]
    if query.module == "ideal":
        bottoms = []
        for g in query.module_gens:
            g = {e: c % prime for e, c in g if c % prime}
            if not g:
                continue
            gdeg = _poly_degree(g, degrees)
            for m in _monomials(degrees, tuple(a - b for a, b in zip(query.v, gdeg))):
                bottoms.append(_mul(g, {m: 1}, prime))
    else:
        bottoms = [{m: 1} for m in _monomials(degrees, query.v)]
    for f in _products(seeds, query.exponents, prime, nvars):
        for b in bottoms:
            elim.add(_mul(f, b, prime))
    if query.module == "quotient":
        for g in query.module_gens:
            g = {e: c % prime for e, c in g if c % prime}
            if not g:
                continue
            gdeg = _poly_degree(g, degrees)
            for m in _monomials(degrees, tuple(a - b for a, b in zip(deg, gdeg))):
                elim.add(_mul(g, {m: 1}, prime))
    return elim.rank - base


@dataclass
class Mismatch:
    what: str
    degree: tuple
    engine: int
    oracle: int

    def as_dict(self) -> dict:
        return {"what": self.what, "degree": list(self.degree),
                "engine": self.engine, "oracle": self.oracle}


@dataclass
class CrossCheckReport:
    mismatches: list[Mismatch] = field(default_factory=list)
    checked: int = 0
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def merge(self, other: CrossCheckReport) -> CrossCheckReport:
        return CrossCheckReport(self.mismatches + other.mismatches,
                                self.checked + other.checked, self.skipped + other.skipped)

    def as_dict(self) -> dict:
        return {"mismatches": [m.as_dict() for m in self.mismatches],
                "checked": self.checked, "skipped": self.skipped}


def _dict_poly(poly):
    return tuple(sorted(poly.items()))


def cross_check(ring, caches=(), prime: int = ORACLE_PRIME, bound: int = SIZE_BOUND) -> CrossCheckReport:
    """Replay every piece dimension the engine recorded for ``ring`` and ``caches``.

    ``caches`` are :class:`relmult.gring.PieceCache` objects; their entries are
    translated into plain queries here and nowhere else.
    """
    data = RingData.of(ring)
    report = CrossCheckReport()

    def check(what, deg, engine_value, query):
        if sum(deg) > bound:
            report.skipped += 1
            return
        got = oracle_dim(data, query, deg, prime, bound)
        report.checked += 1
        if got != engine_value:
            report.mismatches.append(Mismatch(what, tuple(deg), engine_value, got))

    for deg in ring.engine.degrees_seen():
        if any(x < 0 for x in deg):
            continue
        check("piece", deg, ring.engine.dim(deg), None)
    for cache in caches:
        for (H, n, M, v), piece in sorted(cache.entries.items(), key=lambda kv: repr(kv[0][1:])):
            if any(x < 0 for x in v):
                continue
            seeds = tuple(tuple(_dict_poly(g) for g in h.spanning_polys()) for h in H)
            query = PieceQuery(seeds, n, M.kind, tuple(_dict_poly(g) for g in M.generators), v)
            label = f"power n={n} v={v} module={M.kind}"
            check(label, piece.degree, piece.dim, query)
    return report
