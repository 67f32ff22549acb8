"""Line-oriented problem documents.

One statement per line, ``#`` starts a comment::

    prime 32003
    grading 2
    vars x1:(1,0) x2:(1,0) y1:(0,1) y2:(0,1)
    rel x1*y2 - x2*y1
    H1 = x1, x2
    H2 = y1
    module M = ideal(x1, y1)
    system D = x1*y1, x2*y2
    cmd criteria
    cmd relmult t=(2,1)

Degrees are tuples ``(a,b)`` or a bare integer when the grading has rank 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import InhomogeneousRelation, ParseError, UndeclaredName
from ..gring import DEFAULT_PRIME, ModuleSpec, MultigradedRing, unit
from ..poly import Poly

VERBS = ("relmult", "br", "jsharp", "einf", "criteria", "decomp", "suv", "projdim",
         "hilbert", "mapdeg", "compare")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")


@dataclass
class Command:
    verb: str
    params: tuple[tuple[str, object], ...] = ()
    line: int = 0

    def get(self, key, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def __eq__(self, other):
        if not isinstance(other, Command):
            return NotImplemented
        return self.verb == other.verb and self.params == other.params


@dataclass
class ProblemDocument:
    prime: int | None = None
    grading: int = 1
    variables: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    relations: list[Poly] = field(default_factory=list)
    H: dict[int, list[Poly]] = field(default_factory=dict)
    modules: dict[str, ModuleSpec] = field(default_factory=dict)
    systems: dict[str, list[Poly]] = field(default_factory=dict)
    commands: list[Command] = field(default_factory=list)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    def ring(self, prime: int | None = None) -> MultigradedRing:
        prime = prime or self.prime or DEFAULT_PRIME
        return MultigradedRing(self.names, tuple(d for _, d in self.variables),
                               tuple(self.relations), prime)

    def seeds(self) -> list[list[Poly]] | None:
        """H_1..H_p in order, or None when no H is declared (the case A = B)."""
        if not self.H:
            return None
        return [self.H[i] for i in range(1, self.grading + 1)]


class _Cursor:
    def __init__(self, text: str, line: int, offset: int = 0):
        self.text = text
        self.line = line
        self.pos = offset

    def error(self, message, cls=ParseError):
        return cls(self.line, self.pos + 1, message)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def match(self, pattern: re.Pattern, what: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()


class _PolyParser:
    """expr := term (('+'|'-') term)*; term := factor ('*' factor)*; factor := '-' factor | atom ('^' int)?"""

    def __init__(self, cur: _Cursor, names: tuple[str, ...]):
        self.cur = cur
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    def expr(self) -> Poly:
        out = self.term()
        while self.cur.peek() in ("+", "-"):
            op = self.cur.peek()
            self.cur.pos += 1
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Poly:
        out = self.factor()
        while self.cur.peek() == "*":
            self.cur.pos += 1
            out = out * self.factor()
        return out

    def factor(self) -> Poly:
        if self.cur.peek() == "-":
            self.cur.pos += 1
            return -self.factor()
        base = self.atom()
        if self.cur.peek() == "^":
            self.cur.pos += 1
            base = base ** int(self.cur.match(_INT, "an exponent"))
        return base

    def atom(self) -> Poly:
        ch = self.cur.peek()
        n = len(self.names)
        if ch == "(":
            self.cur.pos += 1
            out = self.expr()
            self.cur.expect(")")
            return out
        if ch.isdigit():
            return Poly.const(int(self.cur.match(_INT, "an integer")), n)
        if ch and (ch.isalpha() or ch == "_"):
            start = self.cur.pos
            name = self.cur.match(_NAME, "a name")
            if name not in self.index:
                self.cur.pos = start
                raise self.cur.error(f"undeclared variable {name!r}", UndeclaredName)
            return Poly.var(self.index[name], n)
        raise self.cur.error("expected a number, a variable or '('")


def _parse_tuple(cur: _Cursor, p: int) -> tuple[int, ...]:
    if cur.peek() == "(":
        cur.pos += 1
        vals = [int(cur.match(_INT, "an integer"))]
        while cur.peek() == ",":
            cur.pos += 1
            vals.append(int(cur.match(_INT, "an integer")))
        cur.expect(")")
    else:
        vals = [int(cur.match(_INT, "an integer or a tuple"))]
    if p and len(vals) != p:
        raise cur.error(f"expected a tuple of length {p}")
    return tuple(vals)


def _poly_list(cur: _Cursor, names, stop: str = "") -> list[Poly]:
    parser = _PolyParser(cur, names)
    out = [parser.expr()]
    while cur.peek() == ",":
        cur.pos += 1
        out.append(parser.expr())
    if stop:
        cur.expect(stop)
    if not cur.at_end():
        raise cur.error("unexpected trailing text")
    return out


def parse_problem(text: str) -> ProblemDocument:
    """Parse a problem document; every failure is a :class:`ParseError` with a position."""
    doc = ProblemDocument()
    seen_any = False
    ring_cache: dict = {}

    def ring_for(cur):
        if not doc.variables:
            raise cur.error("declare variables with 'vars' first", UndeclaredName)
        key = len(doc.variables)
        if ring_cache.get("key") != key:
            ring_cache["key"] = key
            ring_cache["ring"] = MultigradedRing(doc.names, tuple(d for _, d in doc.variables))
        return ring_cache["ring"]

    def homogeneous(cur, ring, poly, start):
        degs = poly.multidegrees(ring.degrees)
        if len(degs) > 1:
            cur.pos = start
            raise cur.error(f"polynomial mixes degrees {sorted(degs)}", InhomogeneousRelation)
        return next(iter(degs)) if degs else None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        cur = _Cursor(body, lineno)
        if cur.at_end():
            continue
        seen_any = True
        word = cur.match(_NAME, "a statement keyword")
        if word == "prime":
            doc.prime = int(cur.match(_INT, "a prime"))
            try:
                MultigradedRing(("x",), ((1,),), (), doc.prime)
            except ValueError as exc:
                raise ParseError(lineno, 1, str(exc)) from None
        elif word == "grading":
            if doc.variables:
                raise cur.error("'grading' must come before 'vars'")
            doc.grading = int(cur.match(_INT, "the grading rank"))
            if doc.grading < 1:
                raise cur.error("grading rank must be at least 1")
        elif word == "vars":
            while not cur.at_end():
                start = cur.pos
                name = cur.match(_NAME, "a variable name")
                if name in doc.names:
                    cur.pos = start
                    raise cur.error(f"variable {name!r} declared twice")
                cur.expect(":")
                deg = _parse_tuple(cur, doc.grading)
                if any(d < 0 for d in deg) or sum(deg) < 1:
                    raise cur.error(f"variable {name!r} needs a nonzero nonnegative degree")
                doc.variables.append((name, deg))
        elif word == "rel":
            ring = ring_for(cur)
            cur.skip()
            start = cur.pos
            poly = _PolyParser(cur, ring.names).expr()
            if not cur.at_end():
                raise cur.error("unexpected trailing text")
            homogeneous(cur, ring, poly, start)
            doc.relations.append(poly)
        elif re.fullmatch(r"H\d+", word):
            i = int(word[1:])
            if not 1 <= i <= doc.grading:
                raise cur.error(f"H index must lie in 1..{doc.grading}")
            if i in doc.H:
                raise cur.error(f"{word} declared twice")
            ring = ring_for(cur)
            cur.expect("=")
            cur.skip()
            start = cur.pos
            polys = _poly_list(cur, ring.names)
            for f in polys:
                deg = homogeneous(cur, ring, f, start)
                if deg is not None and deg != unit(i - 1, doc.grading):
                    cur.pos = start
                    raise cur.error(f"{word} must consist of forms of degree {unit(i - 1, doc.grading)}")
            doc.H[i] = polys
        elif word == "module":
            ring = ring_for(cur)
            name = cur.match(_NAME, "a module name")
            cur.expect("=")
            kind = cur.match(_NAME, "'ideal' or 'quotient'")
            if kind not in ("ideal", "quotient"):
                raise cur.error("modules are ideal(...) or quotient(...)")
            cur.expect("(")
            cur.skip()
            start = cur.pos
            polys = _poly_list(cur, ring.names, stop=")")
            for f in polys:
                homogeneous(cur, ring, f, start)
            doc.modules[name] = ModuleSpec(kind, tuple(polys))
        elif word == "system":
            ring = ring_for(cur)
            name = cur.match(_NAME, "a system name")
            cur.expect("=")
            cur.skip()
            start = cur.pos
            polys = _poly_list(cur, ring.names)
            degs = {homogeneous(cur, ring, f, start) for f in polys} - {None}
            if len(degs) != 1:
                cur.pos = start
                raise cur.error("a linear system needs nonzero forms of one degree",
                                InhomogeneousRelation)
            doc.systems[name] = polys
        elif word == "cmd":
            verb = cur.match(_NAME, "a command verb")
            if verb not in VERBS:
                raise cur.error(f"unknown command {verb!r}; expected one of {', '.join(VERBS)}")
            params = []
            while not cur.at_end():
                key = cur.match(_NAME, "key=value")
                cur.expect("=")
                if cur.peek() == "(" or cur.peek().isdigit():
                    value = _parse_tuple(cur, 0)
                else:
                    value = cur.match(_NAME, "a value")
                params.append((key, value))
            doc.commands.append(Command(verb, tuple(params), lineno))
        else:
            raise ParseError(lineno, 1, f"unknown statement {word!r}")
    if not seen_any:
        raise ParseError(1, 1, "empty document")
    if not doc.variables:
        raise ParseError(1, 1, "no variables declared")
    missing = [i for i in range(1, doc.grading + 1) if i not in doc.H]
    if doc.H and missing:
        raise ParseError(1, 1, f"H{missing[0]} is missing; declare all of H1..H{doc.grading} or none")
    return doc


def _fmt_tuple(t, p) -> str:
    if p == 1 and len(t) == 1:
        return str(t[0])
    return "(" + ",".join(str(x) for x in t) + ")"


def format_problem(doc: ProblemDocument) -> str:
    """Canonical text for a document; ``parse_problem(format_problem(d)) == d``."""
    names = doc.names
    p = doc.grading
    lines = []
    if doc.prime is not None:
        lines.append(f"prime {doc.prime}")
    lines.append(f"grading {p}")
    lines.append("vars " + " ".join(f"{n}:{_fmt_tuple(d, p)}" for n, d in doc.variables))
    for rel in doc.relations:
        lines.append(f"rel {rel.format(names)}")
    for i in sorted(doc.H):
        lines.append(f"H{i} = " + ", ".join(f.format(names) for f in doc.H[i]))
    for name, M in doc.modules.items():
        gens = ", ".join(f.format(names) for f in M.generators)
        lines.append(f"module {name} = {M.kind}({gens})")
    for name, forms in doc.systems.items():
        lines.append(f"system {name} = " + ", ".join(f.format(names) for f in forms))
    for c in doc.commands:
        parts = [f"cmd {c.verb}"]
        for k, v in c.params:
            parts.append(f"{k}={_fmt_tuple(v, 0) if isinstance(v, tuple) else v}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
