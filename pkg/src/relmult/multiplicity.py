"""Relative mixed multiplicities, mixed Buchsbaum-Rim and j#-multiplicities.

All three length functions reduce to dimensions of subspaces of the form
H_1^{n_1}...H_q^{n_q}[M]_v, computed by :class:`relmult.gring.PieceCache`:

* lambda_AB(t; n)      = dim [B]_n - dim [A]_{n-t+1}[B]_{t-1}
* lambda_KT(v, n)      = dim [M]_{v + sum n_i d_i} - dim H^n [M]_v
* lambda_sharp(t; v,n) = dim H^n [B]_v - dim H^{v+n-t} [B]_t

Since A is standard it is generated by the H_i = [A]_{e_i}, so
[A]_u [B]_w = H^u [B]_w.  Multiplicities are the normalized top-degree
coefficients of the certified eventual polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Protocol, Sequence

from .errors import ContainmentViolation, NoStabilization, StabilizationMismatch
from .gring import (WHOLE, ModuleSpec, MultigradedRing, PieceCache, SubspacePiece,
                    full_piece, madd, mdeg, module_dim, module_top, msub, piece_dim,
                    span, unit)
from .hilbert import (DEFAULT_CONFIG, FitConfig, FittedPolynomial, compositions,
                      detect_stabilization, leading_coeffs, proj_dim)
from .poly import Poly

ESCALATION = (1, 2, 4, 8)

EQUIDIMENSIONAL_NOTE = (
    "converse directions assume B/(0:B_++^inf) equidimensional (user-asserted); "
    "catenarity is automatic for quotients of polynomial rings over a field")


class GradedPair(Protocol):
    """What the relative-multiplicity routines need from an inclusion A in B."""

    grading_rank: int

    @property
    def r(self) -> int: ...

    def lambda_ab(self, t: tuple[int, ...], n: tuple[int, ...]) -> int: ...


class ProblemSpec:
    """An inclusion A in B with B presented by a ring and A generated by H_i in [B]_{e_i}."""

    def __init__(self, ring: MultigradedRing, H: Sequence[SubspacePiece],
                 config: FitConfig = DEFAULT_CONFIG):
        if not ring.is_standard:
            raise ValueError("relative multiplicities need a standard N^p-grading")
        p = ring.grading_rank
        H = tuple(H)
        if len(H) != p:
            raise ValueError(f"expected {p} generating subspaces, got {len(H)}")
        for i, h in enumerate(H):
            if h.ring != ring or h.ambient != "quotient":
                raise ValueError(f"H{i + 1} is not a subspace of this ring")
            if h.degree != unit(i, p):
                raise ValueError(f"H{i + 1} must live in degree {unit(i, p)}, not {h.degree}")
            if h.is_zero():
                raise ValueError(f"H{i + 1} is zero")
        self.ring = ring
        self.H = H
        self.config = config
        self.cache = PieceCache(ring)
        self._fits: dict[tuple, FittedPolynomial] = {}

    @classmethod
    def from_generators(cls, ring: MultigradedRing, gens: Sequence[Sequence[Poly]],
                        config: FitConfig = DEFAULT_CONFIG) -> ProblemSpec:
        p = ring.grading_rank
        H = [span(ring, list(g), unit(i, p)) for i, g in enumerate(gens)]
        return cls(ring, H, config)

    @classmethod
    def whole(cls, ring: MultigradedRing, config: FitConfig = DEFAULT_CONFIG) -> ProblemSpec:
        """The case A = B."""
        p = ring.grading_rank
        return cls(ring, [full_piece(ring, unit(i, p)) for i in range(p)], config)

    @property
    def grading_rank(self) -> int:
        return self.ring.grading_rank

    @cached_property
    def r(self) -> int:
        return proj_dim(self.ring, self.config)

    def lambda_ab(self, t, n) -> int:
        return lambda_AB(self, t, n)

    def with_prime(self, prime: int) -> ProblemSpec:
        ring = self.ring.with_prime(prime)
        gens = [h.spanning_polys() for h in self.H]
        return ProblemSpec.from_generators(ring, gens, self.config)

    def fit(self, key: tuple, make) -> FittedPolynomial:
        hit = self._fits.get(key)
        if hit is None:
            hit = self._fits[key] = make()
        return hit


def lambda_AB(spec: ProblemSpec, t: Sequence[int], n: Sequence[int]) -> int:
    """dim [B]_n - dim([A]_{n-t+1} [B]_{t-1}); [A]_u is zero when u has a negative entry."""
    t, n = mdeg(t), mdeg(n)
    if any(x < 1 for x in t):
        raise ValueError("t must be a positive tuple")
    top = piece_dim(spec.ring, n)
    u = tuple(a - b + 1 for a, b in zip(n, t))
    if any(x < 0 for x in u):
        return top
    low = spec.cache.power(spec.H, u, WHOLE, tuple(x - 1 for x in t))
    return top - low.dim


def lambda_KT(ring: MultigradedRing, M: ModuleSpec, Hlist: Sequence[SubspacePiece],
              v: Sequence[int], n: Sequence[int], cache: PieceCache | None = None) -> int:
    """dim [M]_{v + sum n_i d_i} - dim(H_1^{n_1}...H_q^{n_q}[M]_v)."""
    cache = cache if cache is not None else PieceCache(ring)
    low = cache.power(tuple(Hlist), mdeg(n), M, mdeg(v))
    return module_top(ring, M, low.degree).dim - low.dim


def lambda_sharp(spec: ProblemSpec, t: Sequence[int], v: Sequence[int], n: Sequence[int],
                 check: bool = True) -> int:
    """dim(H^n [B]_v) - dim(H^{v+n-t} [B]_t) for v >= t."""
    t, v, n = mdeg(t), mdeg(v), mdeg(n)
    if any(a < b for a, b in zip(v, t)):
        raise ValueError(f"lambda_sharp needs v >= t, got v={v}, t={t}")
    num = spec.cache.power(spec.H, n, WHOLE, v)
    den = spec.cache.power(spec.H, msub(madd(v, n), t), WHOLE, t)
    if check and not num.contains(den):
        raise ContainmentViolation(f"H^{msub(madd(v, n), t)}[B]_{t} not inside H^{n}[B]_{v}")
    return num.dim - den.dim


def _split(values: dict, p: int) -> dict:
    return {(k[:p], k[p:]): v for k, v in values.items()}


def fit_lambda_AB(pair: GradedPair, t: Sequence[int],
                  config: FitConfig = DEFAULT_CONFIG) -> FittedPolynomial:
    t = mdeg(t)
    if any(x < 1 for x in t):
        raise ValueError("t must be a positive tuple")
    make = lambda: detect_stabilization(lambda n: pair.lambda_ab(t, n), pair.grading_rank,
                                        pair.r, config, floor=t)
    if isinstance(pair, ProblemSpec):
        return pair.fit(("AB", t, config), make)
    return make()


def rel_mixed_mult(pair: GradedPair, t: Sequence[int],
                   config: FitConfig = DEFAULT_CONFIG) -> dict[tuple[int, ...], int]:
    """e_t(beta; A, B) for every |beta| = r."""
    return leading_coeffs(fit_lambda_AB(pair, t, config), pair.r)


def module_proj_dim(ring: MultigradedRing, M: ModuleSpec,
                    config: FitConfig = DEFAULT_CONFIG) -> int:
    """dim Supp of the sheaf of M: total degree of the Hilbert polynomial of M."""
    if M.kind == "whole":
        return proj_dim(ring, config)
    p = ring.grading_rank
    bound = max(ring.nvars - p, 0)
    fit = detect_stabilization(lambda n: module_dim(ring, M, n), p, bound, config)
    return fit.total_degree


def fit_lambda_KT(ring: MultigradedRing, M: ModuleSpec, Hlist: Sequence[SubspacePiece],
                  r: int, config: FitConfig = DEFAULT_CONFIG,
                  cache: PieceCache | None = None) -> FittedPolynomial:
    cache = cache if cache is not None else PieceCache(ring)
    p, q = ring.grading_rank, len(Hlist)
    fn = lambda pt: lambda_KT(ring, M, Hlist, pt[:p], pt[p:], cache)
    return detect_stabilization(fn, p + q, r, config)


def buchsbaum_rim(ring: MultigradedRing, M: ModuleSpec, Hlist: Sequence[SubspacePiece],
                  dlist: Sequence[Sequence[int]] | None = None,
                  config: FitConfig = DEFAULT_CONFIG, cache: PieceCache | None = None,
                  r: int | None = None):
    """Mixed Buchsbaum-Rim multiplicities of M with respect to H_1..H_q.

    Returns ``(mixed, br)`` where ``mixed[(alpha, beta)]`` is e(alpha, beta) for
    |alpha|+|beta| = r and ``br[beta] = mixed[(0, beta)]``.
    """
    Hlist = tuple(Hlist)
    if dlist is not None:
        if [mdeg(d) for d in dlist] != [h.degree for h in Hlist]:
            raise ValueError("dlist does not match the seed degrees")
    if any(h.is_zero() for h in Hlist):
        raise ValueError("every H_i must be nonzero")
    if r is None:
        r = module_proj_dim(ring, M, config)
    fit = fit_lambda_KT(ring, M, Hlist, r, config, cache)
    return _br_from_fit(fit, ring.grading_rank, r)


def _br_from_fit(fit: FittedPolynomial, p: int, r: int):
    mixed = _split(leading_coeffs(fit, r), p)
    zero = (0,) * p
    br = {beta: val for (alpha, beta), val in mixed.items() if alpha == zero}
    return mixed, br


def spec_buchsbaum_rim(spec: ProblemSpec, config: FitConfig = DEFAULT_CONFIG):
    """buchsbaum_rim of B with respect to [A]_{e_1},...,[A]_{e_p}."""
    fit = spec.fit(("KT", config), lambda: fit_lambda_KT(spec.ring, WHOLE, spec.H, spec.r,
                                                          config, spec.cache))
    return _br_from_fit(fit, spec.grading_rank, spec.r)


def fit_lambda_sharp(spec: ProblemSpec, t: Sequence[int],
                     config: FitConfig = DEFAULT_CONFIG) -> FittedPolynomial:
    t = mdeg(t)
    if any(x < 0 for x in t):
        raise ValueError("t must be nonnegative")
    p = spec.grading_rank
    fn = lambda pt: lambda_sharp(spec, t, pt[:p], pt[p:])
    return spec.fit(("sharp", t, config),
                    lambda: detect_stabilization(fn, 2 * p, spec.r, config,
                                                 floor=t + (0,) * p))


def j_sharp(spec: ProblemSpec, t: Sequence[int], config: FitConfig = DEFAULT_CONFIG):
    """j#_{alpha,beta} at parameter t, keyed by (alpha, beta)."""
    return _split(leading_coeffs(fit_lambda_sharp(spec, t, config), spec.r),
                  spec.grading_rank)


@dataclass
class StableValue:
    values: dict[tuple[int, ...], int]
    schedule: list[tuple[tuple[int, ...], dict]] = field(default_factory=list)


def stable_value(spec: ProblemSpec, config: FitConfig = DEFAULT_CONFIG) -> StableValue:
    """br_beta plus the escalating-t trail that confirms it."""
    _, br = spec_buchsbaum_rim(spec, config)
    p = spec.grading_rank
    trail = []
    prev = None
    for k in ESCALATION:
        t = (k,) * p
        cur = rel_mixed_mult(spec, t, config)
        trail.append((t, cur))
        if prev is not None and cur == prev and cur == br:
            return StableValue(br, trail)
        prev = cur
    raise StabilizationMismatch(
        f"e_t did not settle on the Buchsbaum-Rim value {br} by t = {trail[-1][0]}: "
        + "; ".join(f"t={t}: {v}" for t, v in trail))


def e_infinity(spec: ProblemSpec, config: FitConfig = DEFAULT_CONFIG) -> dict[tuple[int, ...], int]:
    """The stable value e_inf(beta; A, B), cross-checked against escalating t."""
    return stable_value(spec, config).values


def decomposition_check(spec: ProblemSpec, t: Sequence[int], beta: Sequence[int],
                        config: FitConfig = DEFAULT_CONFIG) -> bool:
    """Whether e_t(beta) == br_beta + j#_{0,beta}(t - 1) exactly."""
    t, beta = mdeg(t), mdeg(beta)
    if sum(beta) != spec.r:
        raise ValueError(f"|beta| must equal r = {spec.r}")
    e_t = rel_mixed_mult(spec, t, config)[beta]
    _, br = spec_buchsbaum_rim(spec, config)
    zero = (0,) * spec.grading_rank
    js = j_sharp(spec, tuple(x - 1 for x in t), config)[(zero, beta)]
    return e_t == br[beta] + js


def segre_scalar(values: dict[tuple[int, ...], int], r: int) -> int:
    """sum over |beta| = r of r!/beta! * value(beta)."""
    total = 0
    for beta, val in values.items():
        total += math.factorial(r) // math.prod(math.factorial(b) for b in beta) * val
    return total


@dataclass
class Verdicts:
    finite: bool | None
    finite_birational: bool | None
    r: int
    e: dict | None = None
    e_infinity: dict | None = None
    segre_e: int | None = None
    segre_e_infinity: int | None = None
    note: str = EQUIDIMENSIONAL_NOTE
    failures: list[str] = field(default_factory=list)
    certificates: list[FittedPolynomial] = field(default_factory=list)

    def as_dict(self) -> dict:
        def show(x):
            return "undetermined" if x is None else x
        return {"finite": show(self.finite), "finiteBirational": show(self.finite_birational)}


def criteria(spec: ProblemSpec, config: FitConfig = DEFAULT_CONFIG) -> Verdicts:
    """Finiteness and birationality of MultiProj(B) -> MultiProj(A) from vanishing tests.

    A fit that never stabilizes leaves the matching verdict ``None``
    (undetermined) and records why in ``failures``.
    """
    r = spec.r
    out = Verdicts(None, None, r)
    try:
        fit = fit_lambda_AB(spec, (1,) * spec.grading_rank, config)
        out.certificates.append(fit)
        out.e = leading_coeffs(fit, r)
        out.segre_e = segre_scalar(out.e, r)
        out.finite_birational = all(v == 0 for v in out.e.values())
    except NoStabilization as exc:
        out.failures.append(f"e: {exc}")
    try:
        out.e_infinity = e_infinity(spec, config)
        out.segre_e_infinity = segre_scalar(out.e_infinity, r)
        out.finite = all(v == 0 for v in out.e_infinity.values())
    except NoStabilization as exc:
        out.failures.append(f"e_infinity: {exc}")
    return out


def suv_relative_mult(spec: ProblemSpec, t: int, config: FitConfig = DEFAULT_CONFIG) -> int:
    """Single-graded e_t(A, B) = e_t(dim B - 1; A, B).

    Over a field the B_+-torsion of B has finite length, so dim B - 1 equals
    r whenever MultiProj(B) is nonempty.
    """
    if spec.grading_rank != 1:
        raise ValueError("the single-graded relative multiplicity needs p = 1")
    if spec.r < 0:
        return 0
    return rel_mixed_mult(spec, (int(t),), config)[(spec.r,)]


def mixed_mult(ring: MultigradedRing, M: ModuleSpec = WHOLE,
               config: FitConfig = DEFAULT_CONFIG, r: int | None = None) -> dict:
    """Mixed multiplicities e(beta; M); over a field these are the j_beta(M)."""
    p = ring.grading_rank
    bound = max(ring.nvars - p, 0)
    fit = detect_stabilization(lambda n: module_dim(ring, M, n), p, bound, config)
    if r is None:
        r = fit.total_degree
    return leading_coeffs(fit, r)


@dataclass
class MultiplicityReport:
    r: int
    t: tuple[int, ...]
    rel_mixed: dict
    br: dict
    j_sharp: dict
    e_infinity: dict
    fit_certificates: list[FittedPolynomial]

    def decomposition_holds(self) -> bool:
        zero = (0,) * len(self.t)
        return all(self.rel_mixed[b] == self.br[b] + self.j_sharp[(zero, b)]
                   for b in compositions(self.r, len(self.t)))


def multiplicity_report(spec: ProblemSpec, t: Sequence[int],
                        config: FitConfig = DEFAULT_CONFIG) -> MultiplicityReport:
    t = mdeg(t)
    rel = rel_mixed_mult(spec, t, config)
    _, br = spec_buchsbaum_rim(spec, config)
    js = j_sharp(spec, tuple(x - 1 for x in t), config)
    einf = e_infinity(spec, config)
    fits = [fit_lambda_AB(spec, t, config), spec.fit(("KT", config), None),
            fit_lambda_sharp(spec, tuple(x - 1 for x in t), config)]
    return MultiplicityReport(spec.r, t, rel, br, js, einf, fits)
