"""Command dispatch for parsed documents and JSON report assembly."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

from ..errors import ParseError, UndeclaredName
from ..gring import DEFAULT_PRIME, WHOLE, ModuleSpec, PieceCache, module_dim
from ..hilbert import (DEFAULT_CONFIG, FitConfig, FittedPolynomial, compositions,
                       detect_stabilization, hilbert_fit)
from ..maps import LinearSystem, compare_linear_systems, graph_degrees
from ..multiplicity import (EQUIDIMENSIONAL_NOTE, ProblemSpec, buchsbaum_rim, criteria,
                            decomposition_check, fit_lambda_AB, fit_lambda_sharp,
                            module_proj_dim, rel_mixed_mult, spec_buchsbaum_rim,
                            j_sharp, stable_value, suv_relative_mult)
from ..oracle import ORACLE_PRIME, SIZE_BOUND, CrossCheckReport, cross_check
from .dsl import Command, ProblemDocument

SCHEMA = 1


@dataclass(frozen=True)
class RunFlags:
    prime: int | None = None
    second_prime: int | None = None
    max_origin: int | None = None
    oracle: bool = False
    oracle_prime: int = ORACLE_PRIME
    oracle_bound: int = SIZE_BOUND


def key(beta) -> str:
    return "(" + ",".join(str(b) for b in beta) + ")"


def pair_key(alpha, beta) -> str:
    return "(" + ",".join(str(a) for a in alpha) + ";" + ",".join(str(b) for b in beta) + ")"


def certificate(fit: FittedPolynomial | None) -> dict | None:
    if fit is None:
        return None
    origin, extent = fit.window
    return {"origin": list(origin), "extent": list(extent),
            "validated_points": len(fit.certificate)}


class Session:
    """Everything one run at one prime needs: the ring, the spec, linear systems."""

    def __init__(self, doc: ProblemDocument, prime: int, config: FitConfig):
        self.doc = doc
        self.prime = prime
        self.config = config
        self.ring = doc.ring(prime)
        self._systems: dict[str, LinearSystem] = {}
        self._module_caches = []

    @cached_property
    def spec(self) -> ProblemSpec:
        seeds = self.doc.seeds()
        if seeds is None:
            return ProblemSpec.whole(self.ring, self.config)
        return ProblemSpec.from_generators(self.ring, seeds, self.config)

    def system(self, cmd: Command, param: str) -> LinearSystem:
        name = cmd.get(param)
        if name is None:
            raise ParseError(cmd.line, 1, f"'{cmd.verb}' needs {param}=<system>")
        if name not in self.doc.systems:
            raise UndeclaredName(cmd.line, 1, f"undeclared system {name!r}")
        if name not in self._systems:
            if self.doc.grading != 1 or self.doc.relations:
                raise ParseError(cmd.line, 1, "linear systems live on a polynomial ring with grading 1")
            forms = self.doc.systems[name]
            deg = self.ring.degree_of(next(f for f in forms if not f.is_zero()))[0]
            self._systems[name] = LinearSystem(self.doc.names, deg, forms, self.prime)
        return self._systems[name]

    def module(self, cmd: Command) -> ModuleSpec:
        name = cmd.get("module")
        if name is None:
            return WHOLE
        if name not in self.doc.modules:
            raise UndeclaredName(cmd.line, 1, f"undeclared module {name!r}")
        return self.doc.modules[name]

    def cross_check(self, prime: int, bound: int) -> CrossCheckReport:
        report = cross_check(self.ring, [self.spec.cache] + self._module_caches, prime, bound)
        for sys in self._systems.values():
            report = report.merge(cross_check(sys.ring, [sys.cache], prime, bound))
        return report


def _config(cmd: Command, flags: RunFlags) -> FitConfig:
    cfg = DEFAULT_CONFIG
    for name, field_name in (("origin", "initial_origin"), ("max_origin", "max_origin"),
                             ("shell", "validation_shell")):
        val = cmd.get(name)
        if val is not None:
            if not isinstance(val, tuple) or len(val) != 1:
                raise ParseError(cmd.line, 1, f"{name} must be an integer")
            cfg = replace(cfg, **{field_name: val[0]})
    if flags.max_origin is not None:
        cfg = replace(cfg, max_origin=flags.max_origin)
    return cfg


def _tuple_param(cmd: Command, name: str, p: int, default):
    val = cmd.get(name, default)
    if val is None:
        return None
    if not isinstance(val, tuple):
        raise ParseError(cmd.line, 1, f"{name} must be a tuple")
    if len(val) == 1 and p > 1:
        val = val * p
    if len(val) != p:
        raise ParseError(cmd.line, 1, f"{name} must have length {p}")
    return val


def run_command(session: Session, cmd: Command, flags: RunFlags) -> dict:
    cfg = _config(cmd, flags)
    ring = session.ring
    p = ring.grading_rank
    out = {"command": cmd.verb, "prime": session.prime, "r": None, "t": None,
           "multiplicities": {}, "verdicts": None, "certificate": None}
    verb = cmd.verb
    if verb in ("relmult", "br", "jsharp", "einf", "criteria", "decomp", "suv"):
        spec = session.spec
        spec.config = cfg
        out["r"] = spec.r
    if verb == "relmult":
        t = _tuple_param(cmd, "t", p, (1,) * p)
        fit = fit_lambda_AB(spec, t, cfg)
        out["t"] = list(t)
        out["multiplicities"] = {key(b): v for b, v in rel_mixed_mult(spec, t, cfg).items()}
        out["certificate"] = certificate(fit)
    elif verb == "br":
        M = session.module(cmd)
        if M is WHOLE:
            mixed, br = spec_buchsbaum_rim(spec, cfg)
            fit = spec.fit(("KT", cfg), None)
        else:
            cache = PieceCache(ring)
            session._module_caches.append(cache)
            r = module_proj_dim(ring, M, cfg)
            out["r"] = r
            mixed, br = buchsbaum_rim(ring, M, spec.H, config=cfg, cache=cache, r=r)
            fit = None
        out["multiplicities"] = {key(b): v for b, v in br.items()}
        out["mixed"] = {pair_key(a, b): v for (a, b), v in mixed.items()}
        out["certificate"] = certificate(fit)
    elif verb == "jsharp":
        t = _tuple_param(cmd, "t", p, (0,) * p)
        out["t"] = list(t)
        out["multiplicities"] = {pair_key(a, b): v for (a, b), v in j_sharp(spec, t, cfg).items()}
        out["certificate"] = certificate(fit_lambda_sharp(spec, t, cfg))
    elif verb == "einf":
        sv = stable_value(spec, cfg)
        out["multiplicities"] = {key(b): v for b, v in sv.values.items()}
        out["schedule"] = [{"t": list(t), "values": {key(b): v for b, v in vals.items()}}
                           for t, vals in sv.schedule]
        out["certificate"] = certificate(spec.fit(("KT", cfg), None))
    elif verb == "criteria":
        v = criteria(spec, cfg)
        out["t"] = [1] * p
        out["verdicts"] = v.as_dict()
        out["multiplicities"] = {key(b): x for b, x in (v.e or {}).items()}
        out["e_infinity"] = None if v.e_infinity is None else {
            key(b): x for b, x in v.e_infinity.items()}
        out["segre"] = {"e": v.segre_e, "e_infinity": v.segre_e_infinity}
        out["assumption"] = EQUIDIMENSIONAL_NOTE
        if v.failures:
            out["failures"] = v.failures
        out["certificate"] = certificate(v.certificates[0] if v.certificates else None)
    elif verb == "decomp":
        t = _tuple_param(cmd, "t", p, (1,) * p)
        out["t"] = list(t)
        beta = cmd.get("beta")
        betas = [beta] if beta is not None else compositions(spec.r, p)
        checks = {key(b): decomposition_check(spec, t, b, cfg) for b in betas}
        out["decomposition"] = checks
        out["multiplicities"] = {key(b): v for b, v in rel_mixed_mult(spec, t, cfg).items()}
        out["verdicts"] = {"holds": all(checks.values())}
        out["certificate"] = certificate(fit_lambda_AB(spec, t, cfg))
    elif verb == "suv":
        t = _tuple_param(cmd, "t", p, (1,) * p)
        if p != 1:
            raise ParseError(cmd.line, 1, "'suv' needs grading 1")
        out["t"] = list(t)
        out["value"] = suv_relative_mult(spec, t[0], cfg)
        out["multiplicities"] = {key((spec.r,)): out["value"]} if spec.r >= 0 else {}
        if spec.r >= 0:
            out["certificate"] = certificate(fit_lambda_AB(spec, t, cfg))
    elif verb in ("projdim", "hilbert"):
        M = session.module(cmd)
        if M is WHOLE:
            fit = hilbert_fit(ring, cfg)
        else:
            fit = detect_stabilization(lambda n: module_dim(ring, M, n), p,
                                       max(ring.nvars - p, 0), cfg)
        out["r"] = fit.total_degree
        if verb == "hilbert":
            names = ["n"] if p == 1 else [f"n{i + 1}" for i in range(p)]
            out["hilbert_polynomial"] = fit.format(names)
            out["coefficients"] = {key(e): str(c) for e, c in sorted(fit.coefficients.items())}
        out["certificate"] = certificate(fit)
    elif verb == "mapdeg":
        sys = session.system(cmd, "system")
        g = graph_degrees(sys, cfg)
        out["r"] = sys.r
        out["projective_degrees"] = g.proj_degrees
        out["multiplicities"] = {key(b): v for b, v in g.gamma.items()}
        out["exceptional"] = {key(b): v for b, v in g.exceptional.items()}
        out["certificate"] = certificate(g.fit)
    elif verb == "compare":
        small = session.system(cmd, "small")
        big = session.system(cmd, "big")
        c = compare_linear_systems(small, big, cfg)
        out["r"] = big.r
        out["t"] = [1, 1]
        out["verdicts"] = c.as_dict()
        out["multiplicities"] = {key(b): v for b, v in c.relative.items()}
        out["projective_degrees"] = {"small": c.small.proj_degrees, "big": c.big.proj_degrees}
        out["exceptional"] = {"small": {key(b): v for b, v in c.small.exceptional.items()},
                              "big": {key(b): v for b, v in c.big.exceptional.items()}}
    return out


def run_session(doc: ProblemDocument, prime: int, flags: RunFlags) -> tuple[list[dict], Session]:
    session = Session(doc, prime, DEFAULT_CONFIG)
    commands = doc.commands or [Command("criteria")]
    return [run_command(session, c, flags) for c in commands], session


def _strip_prime(result: dict) -> dict:
    return {k: v for k, v in result.items() if k != "prime"}


def run(doc: ProblemDocument, flags: RunFlags = RunFlags()) -> dict:
    """Execute every command of a document and assemble the JSON report.

    A document with one command yields that command's result object at the
    top level; several commands yield ``{"results": [...]}``.  The report
    gains ``mismatches`` (plus oracle and second-prime details) whenever a
    cross-check was requested.
    """
    prime = flags.prime or doc.prime or DEFAULT_PRIME
    results, session = run_session(doc, prime, flags)
    report: dict = dict(results[0]) if len(results) == 1 else {"results": results}
    report["schema"] = SCHEMA
    if not (flags.oracle or flags.second_prime):
        return report
    mismatches = []
    if flags.oracle:
        rep = session.cross_check(flags.oracle_prime, flags.oracle_bound)
        report["oracle"] = {str(prime): {"checked": rep.checked, "skipped": rep.skipped}}
        mismatches += [dict(m.as_dict(), prime=prime) for m in rep.mismatches]
    if flags.second_prime:
        second, session2 = run_session(doc, flags.second_prime, flags)
        for a, b in zip(results, second):
            if _strip_prime(a) != _strip_prime(b):
                mismatches.append({"what": f"second-prime result of '{a['command']}'",
                                   "prime": flags.second_prime,
                                   "engine": _strip_prime(a), "oracle": _strip_prime(b)})
        if flags.oracle:
            rep = session2.cross_check(flags.oracle_prime, flags.oracle_bound)
            report["oracle"][str(flags.second_prime)] = {"checked": rep.checked,
                                                         "skipped": rep.skipped}
            mismatches += [dict(m.as_dict(), prime=flags.second_prime) for m in rep.mismatches]
        report["second_prime"] = flags.second_prime
    report["mismatches"] = mismatches
    return report
