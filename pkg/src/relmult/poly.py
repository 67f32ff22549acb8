"""Sparse multivariate polynomials with integer coefficients.

Coefficients are kept as plain Python integers; reduction modulo the working
prime happens inside the linear-algebra engine, so the same polynomial can be
reused over several primes.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def grevlex_key(exps: Exponent) -> tuple:
    """Sort key for graded reverse lexicographic order (use with ``reverse=True``)."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


class Poly:
    """Immutable sparse polynomial in a fixed number of variables."""

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = (),
                 nvars: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exponent, int] = {}
        for exps, coef in items:
            exps = tuple(int(e) for e in exps)
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if nvars is None:
                nvars = len(exps)
            elif len(exps) != nvars:
                raise ValueError("exponent length does not match the number of variables")
            c = clean.get(exps, 0) + int(coef)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        if nvars is None:
            raise ValueError("cannot infer the number of variables of an empty polynomial")
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> Poly:
        return cls({}, nvars)

    @classmethod
    def const(cls, c: int, nvars: int) -> Poly:
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> Poly:
        exps = [0] * nvars
        exps[i] = 1
        return cls({tuple(exps): 1}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: int = 1) -> Poly:
        return cls({tuple(exps): coef}, len(exps))

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self._terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return Poly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(terms, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Poly(terms, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.nvars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def reduce(self, prime: int) -> Poly:
        """Coefficients reduced into [0, prime); terms vanishing mod prime are dropped."""
        return Poly({e: c % prime for e, c in self._terms.items()}, self.nvars)

    def multidegrees(self, var_degrees: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
        out = set()
        for exps in self._terms:
            out.add(_weigh(exps, var_degrees))
        return out

    def format(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, coef in self.sorted_terms():
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coef)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if coef < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Poly({self.format(names)!r})"


def _weigh(exps: Sequence[int], var_degrees: Sequence[Sequence[int]]) -> tuple[int, ...]:
    p = len(var_degrees[0]) if var_degrees else 0
    deg = [0] * p
    for e, d in zip(exps, var_degrees):
        if e:
            for j in range(p):
                deg[j] += e * d[j]
    return tuple(deg)


def monomial_degree(exps: Sequence[int], var_degrees: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Multidegree of a monomial: sum of exponent times variable degree."""
    return _weigh(exps, var_degrees)
