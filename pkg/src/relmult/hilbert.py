"""Eventual polynomials of numerical functions on multidegree grids.

Values are tabulated on a box, interpolated exactly by iterated forward
differences, and the fit is certified on a shell of extra points.  There is
no effective bound for "n >> 0", so stabilization is detected heuristically
by moving the window outward until the shell check passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import (NegativeLeadingCoefficient, NoStabilization,
                     NonIntegralLeadingCoefficient, WindowTooSmall)
from .gring import MultigradedRing, box, mdeg, piece_dim


@dataclass(frozen=True)
class FitConfig:
    initial_origin: int = 1
    max_origin: int = 64
    validation_shell: int = 2
    far_probes: bool = True


DEFAULT_CONFIG = FitConfig()


@dataclass
class NumericalTable:
    origin: tuple[int, ...]
    extent: tuple[int, ...]
    values: np.ndarray

    @property
    def arity(self) -> int:
        return len(self.origin)

    def __getitem__(self, point: Sequence[int]) -> int:
        idx = tuple(x - o for x, o in zip(point, self.origin))
        return int(self.values[idx])

    def sub(self, extent: Sequence[int]) -> NumericalTable:
        """The table restricted to [origin, origin + extent)."""
        sl = tuple(slice(0, e) for e in extent)
        return NumericalTable(self.origin, tuple(extent), self.values[sl])


def eval_grid(fn: Callable[[tuple[int, ...]], int], origin: Sequence[int],
              extent: Sequence[int]) -> NumericalTable:
    """Tabulate fn on the box [origin, origin + extent)."""
    origin, extent = mdeg(origin), mdeg(extent)
    if any(e < 1 for e in extent):
        raise ValueError("every axis needs extent >= 1")
    values = np.empty(extent, dtype=object)
    for point in box(origin, extent):
        idx = tuple(x - o for x, o in zip(point, origin))
        values[idx] = int(fn(point))
    return NumericalTable(origin, extent, values)


@dataclass
class FittedPolynomial:
    """Exact polynomial with rational coefficients plus the evidence behind it."""

    arity: int
    coefficients: dict[tuple[int, ...], Fraction]
    window: tuple[tuple[int, ...], tuple[int, ...]]
    certificate: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def total_degree(self) -> int:
        """Max |exponent| over nonzero coefficients; -1 for the zero polynomial."""
        return max((sum(e) for e in self.coefficients), default=-1)

    def __call__(self, point: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for exps, c in self.coefficients.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= x ** e
            total += term
        return total

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.coefficients.get(tuple(exps), Fraction(0))

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"n{i + 1}" for i in range(self.arity)] if self.arity > 1 else ["n"]
        if not self.coefficients:
            return "0"
        parts = []
        for exps in sorted(self.coefficients, key=lambda e: (sum(e), e), reverse=True):
            c = self.coefficients[exps]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _binomial_basis(origin: int, degree: int) -> np.ndarray:
    """conv[j, e]: coefficient of x^e in binomial(x - origin, j)."""
    conv = np.empty((degree + 1, degree + 1), dtype=object)
    conv[:] = Fraction(0)
    poly = [Fraction(1)]
    for j in range(degree + 1):
        scale = Fraction(1, math.factorial(j))
        for e, c in enumerate(poly):
            conv[j, e] = c * scale
        # multiply by (x - origin - j)
        shift = -(origin + j)
        nxt = [Fraction(0)] * (len(poly) + 1)
        for e, c in enumerate(poly):
            nxt[e + 1] += c
            nxt[e] += c * shift
        poly = nxt
    return conv


def fit_polynomial(table: NumericalTable, max_total_degree: int) -> FittedPolynomial:
    """Interpolate the (max_total_degree+1)^k corner of the table by forward differences."""
    D = max_total_degree
    k = table.arity
    if D < 0:
        return FittedPolynomial(k, {}, (table.origin, (0,) * k))
    if any(e < D + 1 for e in table.extent):
        raise WindowTooSmall(f"extent {table.extent} too small for degree {D}")
    window = table.sub((D + 1,) * k)
    diffs = np.array(window.values, dtype=object)
    for axis in range(k):
        layers = [np.take(diffs, [0], axis=axis)]
        cur = diffs
        for _ in range(D):
            cur = np.diff(cur, axis=axis)
            layers.append(np.take(cur, [0], axis=axis))
        diffs = np.concatenate(layers, axis=axis)
    coef = diffs.astype(object)
    for axis in range(k):
        conv = _binomial_basis(table.origin[axis], D)
        coef = np.moveaxis(np.moveaxis(coef, axis, -1) @ conv, -1, axis)
    coefficients = {}
    for exps in np.ndindex(*coef.shape):
        c = Fraction(coef[exps])
        if c:
            coefficients[tuple(int(e) for e in exps)] = c
    return FittedPolynomial(k, coefficients, (table.origin, window.extent))


def detect_stabilization(fn: Callable[[tuple[int, ...]], int], arity: int,
                         max_total_degree: int, config: FitConfig = DEFAULT_CONFIG,
                         floor: Sequence[int] | None = None) -> FittedPolynomial:
    """Fit fn on a window far enough out that it agrees with a polynomial.

    The window starts at n0*(1,...,1) (raised to ``floor`` componentwise), is
    validated on ``config.validation_shell`` extra layers along every axis,
    and n0 doubles on failure until it exceeds ``config.max_origin``.  With
    ``config.far_probes`` the fit must also match fn at one point per axis
    twice as far out, which catches transients longer than the window.
    """
    D = max_total_degree
    n0 = config.initial_origin
    if floor is None:
        floor = (0,) * arity
    shell = config.validation_shell
    while True:
        origin = tuple(max(n0, f) for f in floor)
        if D < 0:
            extent = (1 + shell,) * arity
            table = eval_grid(fn, origin, extent)
            fit = FittedPolynomial(arity, {}, (origin, (0,) * arity))
            pts = list(box(origin, extent))
            if all(table[pt] == 0 for pt in pts):
                fit.certificate = pts
                return fit
        else:
            extent = (D + 1 + shell,) * arity
            table = eval_grid(fn, origin, extent)
            fit = fit_polynomial(table, D)
            if (fit.total_degree <= D and _validate(fit, table, D)
                    and (not config.far_probes or _probe(fit, fn, origin, extent))):
                return fit
        if n0 == 0:
            n0 = 1
        else:
            n0 *= 2
        if n0 > config.max_origin:
            raise NoStabilization(
                f"no polynomial of total degree <= {D} fits before origin {config.max_origin}",
                last_origin=n0 // 2)


def _validate(fit: FittedPolynomial, table: NumericalTable, D: int) -> bool:
    checked = []
    for point in box(table.origin, table.extent):
        inside = all(x - o <= D for x, o in zip(point, table.origin))
        if inside:
            continue
        if fit(point) != table[point]:
            return False
        checked.append(point)
    fit.certificate = checked
    return True


def _probe(fit: FittedPolynomial, fn, origin, extent) -> bool:
    """Check the fit at origin + 2*extent along each axis.

    The diagonal is skipped on purpose: pushing every coordinate out at once
    makes the graded pieces far larger than anything inside the window.
    """
    k = len(origin)
    points = []
    for i in range(k):
        points.append(tuple(o + (2 * e if j == i else 0) for j, (o, e) in enumerate(zip(origin, extent))))
    for pt in dict.fromkeys(points):
        if fit(pt) != fn(pt):
            return False
        fit.certificate.append(pt)
    return True


def leading_coeffs(poly: FittedPolynomial, r: int) -> dict[tuple[int, ...], int]:
    """beta! * coefficient(beta) for every |beta| = r; these must be nonnegative integers."""
    if r < 0:
        return {}
    if poly.total_degree > r:
        raise ValueError(f"fitted degree {poly.total_degree} exceeds r = {r}")
    out = {}
    for beta in compositions(r, poly.arity):
        value = poly.coefficient(beta) * math.prod(math.factorial(b) for b in beta)
        if value.denominator != 1:
            raise NonIntegralLeadingCoefficient(f"coefficient at {beta} is {value}")
        if value < 0:
            raise NegativeLeadingCoefficient(f"coefficient at {beta} is {value}")
        out[beta] = int(value)
    return out


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All beta in N^parts with |beta| = total, in descending lexicographic order."""
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def hilbert_fit(ring: MultigradedRing, config: FitConfig = DEFAULT_CONFIG) -> FittedPolynomial:
    """Certified Hilbert polynomial of n -> dim [B]_n."""
    p = ring.grading_rank
    bound = max(ring.nvars - p, 0)
    return detect_stabilization(lambda n: piece_dim(ring, n), p, bound, config)


def proj_dim(ring: MultigradedRing, config: FitConfig = DEFAULT_CONFIG) -> int:
    """dim MultiProj(B): total degree of the Hilbert polynomial (-1 when empty)."""
    if not ring.is_standard:
        raise ValueError("proj_dim needs a standard grading")
    return hilbert_fit(ring, config).total_degree
