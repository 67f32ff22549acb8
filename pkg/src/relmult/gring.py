"""Multigraded rings over GF(p) and the degreewise linear-algebra engine.

A ring is ``k[x_1..x_m] / (relations)`` with every variable carrying a
multidegree in N^p.  Each graded piece [B]_v is coordinatized by its standard
monomials: the monomials of degree v that are not leading terms of the ideal
piece [I]_v under graded reverse lexicographic order.  Subspaces of [B]_v are
stored as reduced row-echelon matrices over those coordinates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .errors import InhomogeneousInput, NegativeExponent, RingMismatch
from .poly import Exponent, Poly, grevlex_key, monomial_degree

DEFAULT_PRIME = 32003

Multidegree = tuple[int, ...]


def mdeg(values: Iterable[int]) -> Multidegree:
    return tuple(int(v) for v in values)


def madd(a: Sequence[int], b: Sequence[int]) -> Multidegree:
    return tuple(x + y for x, y in zip(a, b))


def msub(a: Sequence[int], b: Sequence[int]) -> Multidegree:
    return tuple(x - y for x, y in zip(a, b))


def mscale(k: int, a: Sequence[int]) -> Multidegree:
    return tuple(k * x for x in a)


def mgeq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise comparison a >= b."""
    return all(x >= y for x, y in zip(a, b))


def weight(a: Sequence[int]) -> int:
    return sum(a)


def unit(i: int, p: int) -> Multidegree:
    return tuple(1 if j == i else 0 for j in range(p))


@dataclass(frozen=True)
class MultigradedRing:
    """``k[names] / (relations)`` over GF(prime) with per-variable multidegrees.

    The ring is immutable; its graded-piece caches live on a private engine
    created on first use.
    """

    names: tuple[str, ...]
    degrees: tuple[Multidegree, ...]
    relations: tuple[Poly, ...] = ()
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(mdeg(d) for d in self.degrees))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "prime", gf.check_prime(self.prime))
        if not self.names:
            raise ValueError("a ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if len(self.degrees) != len(self.names):
            raise ValueError("one multidegree per variable is required")
        p = len(self.degrees[0])
        if p < 1:
            raise ValueError("grading rank must be at least 1")
        for name, d in zip(self.names, self.degrees):
            if len(d) != p:
                raise ValueError(f"variable {name} has a degree of the wrong length")
            if any(x < 0 for x in d) or sum(d) < 1:
                raise ValueError(f"variable {name} must have a nonnegative degree of weight >= 1")
        for rel in self.relations:
            if rel.nvars != len(self.names):
                raise ValueError("relation lives in a different polynomial ring")
            self.degree_of(rel)

    @property
    def grading_rank(self) -> int:
        return len(self.degrees[0])

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def is_standard(self) -> bool:
        """Every variable sits in some elementary degree e_i."""
        return all(sum(d) == 1 for d in self.degrees)

    def degree_of(self, poly: Poly) -> Multidegree | None:
        """The multidegree of a homogeneous polynomial; None for zero."""
        degs = poly.multidegrees(self.degrees)
        if len(degs) > 1:
            raise InhomogeneousInput(
                f"{poly.format(self.names)} mixes degrees {sorted(degs)}")
        return next(iter(degs)) if degs else None

    def var(self, name: str) -> Poly:
        return Poly.var(self.names.index(name), self.nvars)

    def gens(self) -> tuple[Poly, ...]:
        return tuple(Poly.var(i, self.nvars) for i in range(self.nvars))

    def with_prime(self, prime: int) -> MultigradedRing:
        return MultigradedRing(self.names, self.degrees, self.relations, prime)

    @cached_property
    def engine(self) -> PieceEngine:
        return PieceEngine(self)


def polynomial_ring(names: Sequence[str], degrees: Sequence[Sequence[int]] | None = None,
                    prime: int = DEFAULT_PRIME) -> MultigradedRing:
    """A polynomial ring; standard N-grading when ``degrees`` is omitted."""
    if degrees is None:
        degrees = [(1,)] * len(names)
    return MultigradedRing(tuple(names), tuple(mdeg(d) for d in degrees), (), prime)


class _Reduction:
    """Normal-form data for one degree: standard monomials and the map onto them."""

    def __init__(self, monomials, index, pivots, ideal_rows, monomial_ideal: bool, p: int):
        self.monomials = monomials
        self.index = index
        self.ideal_rows = ideal_rows
        self.pivots = pivots
        pivot_set = set(pivots)
        self.std_cols = np.array([j for j in range(len(monomials)) if j not in pivot_set],
                                 dtype=np.int64)
        self.std = tuple(monomials[j] for j in self.std_cols)
        self.std_index = {m: i for i, m in enumerate(self.std)}
        self.dim = len(self.std)
        n = len(monomials)
        # pos[j]: coordinate of ambient monomial j when it is standard, else -1
        self.pos = np.full(n, -1, dtype=np.int64)
        self.pos[self.std_cols] = np.arange(self.dim, dtype=np.int64)
        self.monomial_ideal = monomial_ideal
        if monomial_ideal or not pivots:
            self.nf = None
        else:
            # NF(e_m) is the unit vector for standard m and -R[i, std] for pivot m of row i
            nf = np.zeros((n, self.dim), dtype=np.int64)
            nf[self.std_cols, np.arange(self.dim)] = 1
            nf[np.array(pivots)] = (-ideal_rows[:, self.std_cols]) % p
            self.nf = nf

    def reduce_ambient(self, vecs: np.ndarray, p: int) -> np.ndarray:
        """Normal forms of row vectors written over the ambient monomials."""
        if self.nf is None:
            return vecs[:, self.std_cols] % p
        return (vecs % p) @ self.nf % p


class PieceEngine:
    """Per-ring caches: monomial lists, ideal pieces, normal forms, shift tables."""

    def __init__(self, ring: MultigradedRing):
        self.ring = ring
        self.p = ring.prime
        self._monomials: dict[Multidegree, tuple[Exponent, ...]] = {}
        self._reductions: dict[Multidegree, _Reduction] = {}
        self._shifts: dict[tuple[Exponent, Multidegree], np.ndarray] = {}
        rels = [r.reduce(self.p) for r in ring.relations]
        self.relations = [(ring.degree_of(r), r) for r in rels if not r.is_zero()]
        self.monomial_ideal = all(len(r) == 1 for _, r in self.relations)

    def monomials(self, deg: Multidegree) -> tuple[Exponent, ...]:
        deg = mdeg(deg)
        hit = self._monomials.get(deg)
        if hit is not None:
            return hit
        if any(d < 0 for d in deg):
            mons: tuple[Exponent, ...] = ()
        else:
            mons = tuple(sorted(_enumerate(self.ring.degrees, deg), key=grevlex_key, reverse=True))
        self._monomials[deg] = mons
        return mons

    def reduction(self, deg: Multidegree) -> _Reduction:
        deg = mdeg(deg)
        hit = self._reductions.get(deg)
        if hit is not None:
            return hit
        mons = self.monomials(deg)
        index = {m: j for j, m in enumerate(mons)}
        if self.monomial_ideal:
            gens = [next(iter(r.items()))[0] for _, r in self.relations]
            pivots = [j for j, m in enumerate(mons)
                      if any(all(a >= b for a, b in zip(m, g)) for g in gens)]
            rows = np.zeros((len(pivots), len(mons)), dtype=np.int64)
            rows[np.arange(len(pivots)), pivots] = 1
        else:
            rows, pivots = gf.rref(self._ideal_generators(deg, mons, index), self.p)
        red = _Reduction(mons, index, pivots, rows, self.monomial_ideal, self.p)
        self._reductions[deg] = red
        return red

    def _ideal_generators(self, deg, mons, index) -> np.ndarray:
        blocks = []
        for rdeg, rel in self.relations:
            shift = msub(deg, rdeg)
            multipliers = self.monomials(shift)
            if not multipliers:
                continue
            block = np.zeros((len(multipliers), len(mons)), dtype=np.int64)
            rows = np.arange(len(multipliers))
            for exps, coef in rel.items():
                cols = np.fromiter((index[madd(m, exps)] for m in multipliers),
                                   dtype=np.int64, count=len(multipliers))
                block[rows, cols] = (block[rows, cols] + coef) % self.p
            blocks.append(block)
        if not blocks:
            return np.zeros((0, len(mons)), dtype=np.int64)
        return np.vstack(blocks)

    def dim(self, deg: Multidegree) -> int:
        return self.reduction(deg).dim

    def shift(self, mono: Exponent, deg: Multidegree) -> np.ndarray:
        """Ambient indices in degree deg+deg(mono) of mono*s for each standard s of degree deg."""
        key = (mono, deg)
        hit = self._shifts.get(key)
        if hit is not None:
            return hit
        src = self.reduction(deg)
        target = madd(deg, monomial_degree(mono, self.ring.degrees))
        tindex = self.reduction(target).index
        arr = np.fromiter((tindex[madd(s, mono)] for s in src.std), dtype=np.int64,
                          count=src.dim)
        self._shifts[key] = arr
        return arr

    def multiply_rows(self, W: np.ndarray, deg: Multidegree, h: np.ndarray,
                      hdeg: Multidegree) -> np.ndarray:
        """Rows of W (over [B]_deg) times the element h of [B]_hdeg."""
        p = self.p
        target = madd(deg, hdeg)
        tred = self.reduction(target)
        hstd = self.reduction(hdeg).std
        out = np.zeros((W.shape[0], tred.dim), dtype=np.int64)
        if W.shape[0] == 0 or tred.dim == 0:
            return out
        for j in np.flatnonzero(h):
            c = int(h[j])
            idx = self.shift(hstd[j], deg)
            if tred.nf is None:
                tgt = tred.pos[idx]
                keep = tgt >= 0
                out[:, tgt[keep]] = (out[:, tgt[keep]] + c * W[:, keep]) % p
            else:
                out = (out + c * ((W @ tred.nf[idx]) % p)) % p
        return out

    def normal_form_vector(self, poly: Poly, deg: Multidegree) -> np.ndarray:
        red = self.reduction(deg)
        vec = np.zeros((1, len(red.monomials)), dtype=np.int64)
        for exps, coef in poly.items():
            vec[0, red.index[exps]] = coef % self.p
        return red.reduce_ambient(vec, self.p)[0]

    def lift(self, row: np.ndarray, deg: Multidegree) -> Poly:
        std = self.reduction(deg).std
        return Poly({std[j]: int(row[j]) for j in np.flatnonzero(row)}, self.ring.nvars)

    def degrees_seen(self) -> list[Multidegree]:
        return sorted(self._reductions)


def _enumerate(var_degrees, deg):
    """All exponent vectors whose weighted degree equals deg (any order)."""
    n = len(var_degrees)
    out: list[Exponent] = []
    exps = [0] * n

    def rec(i, remaining):
        if i == n:
            if not any(remaining):
                out.append(tuple(exps))
            return
        d = var_degrees[i]
        kmax = min((r // x for r, x in zip(remaining, d) if x > 0), default=0)
        for k in range(kmax, -1, -1):
            exps[i] = k
            rec(i + 1, tuple(r - k * x for r, x in zip(remaining, d)))
        exps[i] = 0

    rec(0, tuple(deg))
    return out


def enum_monomials(ring: MultigradedRing, deg: Sequence[int]) -> list[Exponent]:
    """Monomials of multidegree deg, grevlex-descending; empty when deg has a negative entry."""
    return list(ring.engine.monomials(mdeg(deg)))


@dataclass(eq=False)
class SubspacePiece:
    """A subspace of one graded piece, stored as an RREF matrix over GF(p).

    ``ambient`` is ``"quotient"`` for subspaces of [B]_degree (coordinates on
    the standard monomials) and ``"polynomial"`` for subspaces of the
    polynomial ring's piece (coordinates on all monomials).  ``generators``
    remembers user-supplied spanning polynomials when there are any.
    """

    ring: MultigradedRing
    degree: Multidegree
    rows: np.ndarray
    ambient: str = "quotient"
    generators: tuple[Poly, ...] | None = field(default=None)

    def __post_init__(self):
        self.degree = mdeg(self.degree)
        self.rows.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(self.rows.shape[0])

    @property
    def basis(self) -> tuple[Exponent, ...]:
        red = self.ring.engine.reduction(self.degree)
        return red.std if self.ambient == "quotient" else red.monomials

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, other: SubspacePiece) -> bool:
        _check_same(self, other)
        if self.degree != other.degree:
            return other.is_zero()
        return gf.row_space_contains(self.rows, other.rows, self.ring.prime)

    def spanning_polys(self) -> tuple[Poly, ...]:
        if self.generators is not None:
            return self.generators
        eng = self.ring.engine
        return tuple(eng.lift(r, self.degree) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, SubspacePiece):
            return NotImplemented
        return (self.ring == other.ring and self.degree == other.degree
                and self.ambient == other.ambient
                and self.rows.shape == other.rows.shape
                and bool(np.array_equal(self.rows, other.rows)))

    def __hash__(self):
        return hash((self.degree, self.ambient, self.rows.shape, self.rows.tobytes()))

    def __repr__(self):
        return f"SubspacePiece(degree={self.degree}, dim={self.dim}, ambient={self.ambient!r})"


def _check_same(U: SubspacePiece, V: SubspacePiece):
    if U.ring != V.ring:
        raise RingMismatch("pieces belong to different rings")
    if U.ambient != V.ambient:
        raise RingMismatch("cannot combine quotient and polynomial pieces")


def _piece(ring, deg, mat, generators=None) -> SubspacePiece:
    rows, _ = gf.rref(mat, ring.prime)
    return SubspacePiece(ring, deg, rows, "quotient", generators)


def ideal_piece(ring: MultigradedRing, deg: Sequence[int]) -> SubspacePiece:
    """[I]_deg inside the polynomial ring's degree piece (all-monomial coordinates)."""
    deg = mdeg(deg)
    red = ring.engine.reduction(deg)
    return SubspacePiece(ring, deg, red.ideal_rows.copy(), "polynomial")


def quotient_basis(ring: MultigradedRing, deg: Sequence[int]) -> list[Exponent]:
    return list(ring.engine.reduction(mdeg(deg)).std)


def piece_dim(ring: MultigradedRing, deg: Sequence[int]) -> int:
    """dim [B]_deg."""
    return ring.engine.dim(mdeg(deg))


def normal_form(ring: MultigradedRing, poly: Poly, deg: Sequence[int] | None = None) -> np.ndarray:
    """Coordinates of the class of poly in [B]_deg over quotient_basis(ring, deg).

    ``deg`` is only needed for the zero polynomial; otherwise it is read off
    the (required homogeneous) input and checked against ``deg`` if given.
    """
    pdeg = ring.degree_of(poly)
    if pdeg is None:
        if deg is None:
            raise InhomogeneousInput("the zero polynomial needs an explicit degree")
        return np.zeros(ring.engine.dim(mdeg(deg)), dtype=np.int64)
    if deg is not None and mdeg(deg) != pdeg:
        raise InhomogeneousInput(f"polynomial has degree {pdeg}, not {tuple(deg)}")
    return ring.engine.normal_form_vector(poly, pdeg)


def full_piece(ring: MultigradedRing, deg: Sequence[int]) -> SubspacePiece:
    deg = mdeg(deg)
    n = ring.engine.dim(deg)
    return SubspacePiece(ring, deg, np.eye(n, dtype=np.int64), "quotient")


def zero_piece(ring: MultigradedRing, deg: Sequence[int]) -> SubspacePiece:
    deg = mdeg(deg)
    n = ring.engine.dim(deg)
    return SubspacePiece(ring, deg, np.zeros((0, n), dtype=np.int64), "quotient")


def span(ring: MultigradedRing, polys: Sequence[Poly], deg: Sequence[int] | None = None) -> SubspacePiece:
    """The subspace of [B]_deg spanned by homogeneous polynomials of one degree."""
    degs = {ring.degree_of(f) for f in polys} - {None}
    if deg is not None:
        degs.add(mdeg(deg))
    if len(degs) != 1:
        raise InhomogeneousInput(f"generators must share one degree, got {sorted(degs)}")
    d = degs.pop()
    n = ring.engine.dim(d)
    if not polys:
        return zero_piece(ring, d)
    mat = np.array([normal_form(ring, f, d) for f in polys], dtype=np.int64).reshape(len(polys), n)
    return _piece(ring, d, mat, tuple(polys))


def piece_sum(U: SubspacePiece, V: SubspacePiece) -> SubspacePiece:
    _check_same(U, V)
    if U.degree != V.degree:
        raise ValueError("cannot add pieces of different degrees")
    return _piece(U.ring, U.degree, np.vstack([U.rows, V.rows]))


def subspace_product(U: SubspacePiece, V: SubspacePiece) -> SubspacePiece:
    """Span of all products u*v inside [B]_{deg U + deg V}."""
    _check_same(U, V)
    if U.ambient != "quotient":
        raise RingMismatch("products are formed in the quotient ring")
    ring = U.ring
    eng = ring.engine
    deg = madd(U.degree, V.degree)
    if U.dim == 0 or V.dim == 0:
        return zero_piece(ring, deg)
    big, small = (U, V) if U.dim >= V.dim else (V, U)
    blocks = [eng.multiply_rows(big.rows, big.degree, h, small.degree) for h in small.rows]
    return _piece(ring, deg, np.vstack(blocks))


@dataclass(frozen=True)
class ModuleSpec:
    """A graded B-module: the ring itself, an ideal (gens), or B/(gens)."""

    kind: str = "whole"
    generators: tuple[Poly, ...] = ()

    def __post_init__(self):
        if self.kind not in ("whole", "ideal", "quotient"):
            raise ValueError(f"unknown module kind {self.kind!r}")
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.kind == "whole" and self.generators:
            raise ValueError("the whole ring takes no generators")

    @classmethod
    def whole(cls) -> ModuleSpec:
        return cls("whole")

    @classmethod
    def ideal(cls, gens: Sequence[Poly]) -> ModuleSpec:
        return cls("ideal", tuple(gens))

    @classmethod
    def quotient(cls, gens: Sequence[Poly]) -> ModuleSpec:
        return cls("quotient", tuple(gens))


WHOLE = ModuleSpec.whole()


def ideal_span(ring: MultigradedRing, gens: Sequence[Poly], deg: Sequence[int]) -> SubspacePiece:
    """[J]_deg for J generated by homogeneous gens, inside [B]_deg."""
    deg = mdeg(deg)
    out = zero_piece(ring, deg)
    for g in gens:
        gdeg = ring.degree_of(g)
        if gdeg is None:
            continue
        rest = msub(deg, gdeg)
        if any(x < 0 for x in rest):
            continue
        out = piece_sum(out, subspace_product(full_piece(ring, rest), span(ring, [g])))
    return out


def module_top(ring: MultigradedRing, M: ModuleSpec, deg: Sequence[int]) -> SubspacePiece:
    """The piece whose dimension is dim [M]_deg (quotients: the preimage is all of [B]_deg).

    For ``quotient`` modules every subspace is represented by its preimage in
    [B]_deg, so dim [M]_deg = dim(top) - dim([J]_deg) and differences of
    preimage dimensions equal differences of module dimensions.
    """
    if M.kind == "ideal":
        return ideal_span(ring, M.generators, deg)
    return full_piece(ring, deg)


def module_dim(ring: MultigradedRing, M: ModuleSpec, deg: Sequence[int]) -> int:
    if M.kind == "whole":
        return piece_dim(ring, deg)
    if M.kind == "ideal":
        return ideal_span(ring, M.generators, deg).dim
    return piece_dim(ring, deg) - ideal_span(ring, M.generators, deg).dim


class PieceCache:
    """Memo of H_1^{n_1}...H_q^{n_q}[M]_v keyed by (seeds, exponents, module, v).

    One cache per problem; ``entries`` is what the oracle replays.
    """

    def __init__(self, ring: MultigradedRing):
        self.ring = ring
        self.entries: dict[tuple, SubspacePiece] = {}

    def clear(self):
        self.entries.clear()

    def power(self, H: Sequence[SubspacePiece], exponents: Sequence[int],
              M: ModuleSpec, v: Sequence[int]) -> SubspacePiece:
        H = tuple(H)
        n = mdeg(exponents)
        v = mdeg(v)
        if len(n) != len(H):
            raise ValueError("one exponent per seed is required")
        if any(x < 0 for x in n):
            raise NegativeExponent(f"exponents {n} must be nonnegative")
        for h in H:
            if h.ring != self.ring:
                raise RingMismatch("seed from another ring")
        key = (H, n, M, v)
        hit = self.entries.get(key)
        if hit is not None:
            return hit
        if M.kind == "quotient":
            base = self.power(H, n, WHOLE, v)
            piece = piece_sum(base, ideal_span(self.ring, M.generators, base.degree))
            self.entries[key] = piece
            return piece
        # walk down to a cached (or trivial) exponent, then multiply back up
        chain = []
        cur = n
        while (H, cur, M, v) not in self.entries and any(cur):
            i = next(j for j, x in enumerate(cur) if x > 0)
            chain.append((cur, i))
            cur = tuple(x - (1 if j == i else 0) for j, x in enumerate(cur))
        piece = self.entries.get((H, cur, M, v))
        if piece is None:
            if any(x < 0 for x in v):
                piece = zero_piece(self.ring, v)
            else:
                piece = module_top(self.ring, M, v)
            self.entries[(H, cur, M, v)] = piece
        for exps, i in reversed(chain):
            piece = subspace_product(H[i], piece)
            self.entries[(H, exps, M, v)] = piece
        return piece


def power_piece(H: Sequence[SubspacePiece], exponents: Sequence[int], M: ModuleSpec,
                v: Sequence[int], cache: PieceCache | None = None) -> SubspacePiece:
    """H_1^{n_1}...H_q^{n_q} [M]_v as a subspace of the piece of degree v + sum n_i deg(H_i)."""
    if cache is None:
        if not H:
            raise ValueError("without seeds pass an explicit cache")
        cache = PieceCache(H[0].ring)
    return cache.power(H, exponents, M, v)


def box(origin: Sequence[int], extent: Sequence[int]) -> Iterable[Multidegree]:
    """Lattice points of [origin, origin + extent) in lexicographic order."""
    return itertools.product(*(range(o, o + e) for o, e in zip(origin, extent)))
