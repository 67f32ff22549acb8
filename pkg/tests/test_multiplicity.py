from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relmult import multiplicity as mm
from relmult.errors import ContainmentViolation, NoStabilization, StabilizationMismatch
from relmult.gring import ModuleSpec, MultigradedRing, full_piece, polynomial_ring, span
from relmult.multiplicity import (ProblemSpec, buchsbaum_rim, criteria, decomposition_check,
                                  e_infinity, j_sharp, lambda_AB, lambda_KT, lambda_sharp,
                                  mixed_mult, multiplicity_report, rel_mixed_mult, segre_scalar,
                                  spec_buchsbaum_rim, suv_relative_mult)
from relmult.poly import Poly

from specgen import random_monomial_spec

ZERO2 = {(2, 0): 0, (1, 1): 0, (0, 2): 0}


@pytest.fixture(scope="module")
def whole_spec(ex_ring):
    return ProblemSpec.whole(ex_ring)


@pytest.fixture(scope="module")
def plane():
    return polynomial_ring(["x", "y"])


def test_spec_validation(plane):
    x, y = plane.gens()
    with pytest.raises(ValueError):
        ProblemSpec.from_generators(plane, [[Poly.zero(2)]])
    with pytest.raises(ValueError):
        ProblemSpec(plane, [])
    weighted = polynomial_ring(["x", "y"], [(1,), (2,)])
    with pytest.raises(ValueError):
        ProblemSpec.whole(weighted)


def test_lambda_ab_whole(whole_spec):
    for t in [(1, 1), (2, 1)]:
        for n in [(2, 2), (3, 4)]:
            assert lambda_AB(whole_spec, t, n) == 0


def test_lambda_ab_line(line_spec):
    assert [lambda_AB(line_spec, (1,), (n,)) for n in range(1, 6)] == [1, 2, 3, 4, 5]
    assert [lambda_AB(line_spec, (2,), (n,)) for n in range(2, 6)] == [1, 2, 3, 4]


def test_lambda_ab_below_t_uses_zero_convention(line_spec):
    # [A]_{n-t+1} = 0 when n < t - 1 so the whole piece survives
    assert lambda_AB(line_spec, (4,), (2,)) == 3


def test_lambda_kt_examples(plane, line_spec):
    x, y = plane.gens()
    H = [span(plane, [x])]
    for v, n in itertools.product(range(3), range(4)):
        assert lambda_KT(plane, mm.WHOLE, H, (v,), (n,)) == n
        assert lambda_KT(plane, ModuleSpec.ideal([x]), H, (v,), (n,)) == n
        assert lambda_KT(plane, mm.WHOLE, [full_piece(plane, (1,))], (v,), (n,)) == 0


def test_lambda_sharp_examples(line_spec, whole_spec):
    for v, n in itertools.product(range(4), range(4)):
        assert lambda_sharp(line_spec, (0,), (v,), (n,)) == v
        assert lambda_sharp(line_spec, (v,), (v,), (n,)) == 0
    assert lambda_sharp(whole_spec, (1, 0), (2, 1), (1, 1)) == 0


def test_lambda_sharp_requires_v_at_least_t(line_spec):
    with pytest.raises(ValueError):
        lambda_sharp(line_spec, (2,), (1,), (0,))


def test_lambda_sharp_containment_guard(line_spec, monkeypatch):
    monkeypatch.setattr(mm.SubspacePiece, "contains", lambda self, other: False)
    with pytest.raises(ContainmentViolation):
        lambda_sharp(line_spec, (0,), (3,), (1,))


def test_rel_mixed_mult_examples(ex_spec, whole_spec, line_spec):
    assert rel_mixed_mult(ex_spec, (1, 1)) == ZERO2
    assert rel_mixed_mult(whole_spec, (1, 1)) == ZERO2
    assert rel_mixed_mult(line_spec, (1,)) == {(1,): 1}


def test_buchsbaum_rim_examples(ex_spec, plane, line_spec):
    mixed, br = buchsbaum_rim(plane, mm.WHOLE, line_spec.H)
    assert br == {(1,): 1}
    assert mixed[((1,), (0,))] == 0
    mixed, br = buchsbaum_rim(plane, mm.WHOLE, [full_piece(plane, (1,))])
    assert set(mixed.values()) == {0}
    assert spec_buchsbaum_rim(ex_spec)[1] == ZERO2


def test_buchsbaum_rim_ideal_module(plane):
    x, y = plane.gens()
    mixed, br = buchsbaum_rim(plane, ModuleSpec.ideal([x]), [span(plane, [x])])
    assert br == {(1,): 1}


def test_buchsbaum_rim_dlist_checked(plane, line_spec):
    with pytest.raises(ValueError):
        buchsbaum_rim(plane, mm.WHOLE, line_spec.H, dlist=[(2,)])


def test_j_sharp_examples(line_spec, whole_spec):
    assert j_sharp(line_spec, (0,)) == {((1,), (0,)): 1, ((0,), (1,)): 0}
    assert set(j_sharp(whole_spec, (0, 0)).values()) == {0}


def test_e_infinity_examples(line_spec, whole_spec, ex_spec):
    assert e_infinity(line_spec) == {(1,): 1}
    assert e_infinity(whole_spec) == ZERO2
    assert e_infinity(ex_spec) == ZERO2


def test_e_infinity_mismatch(line_spec, monkeypatch):
    monkeypatch.setattr(mm, "rel_mixed_mult", lambda spec, t, config=None: {(1,): 7})
    with pytest.raises(StabilizationMismatch):
        e_infinity(line_spec)


def test_e_infinity_schedule_double_line(double_line_spec):
    # e_1 = 1 while e_t = 0 from t = 2 on, matching br only after one escalation
    sv = mm.stable_value(double_line_spec)
    assert sv.values == {(0,): 0}
    assert [t for t, _ in sv.schedule] == [(1,), (2,), (4,)]


def test_decomposition_examples(line_spec, whole_spec, double_line_spec):
    assert decomposition_check(line_spec, (1,), (1,))
    assert decomposition_check(whole_spec, (1, 1), (1, 1))
    assert decomposition_check(double_line_spec, (1,), (0,))
    with pytest.raises(ValueError):
        decomposition_check(line_spec, (1,), (2,))


def test_criteria_examples(ex_spec, line_spec, whole_spec, double_line_spec):
    v = criteria(ex_spec)
    assert (v.finite, v.finite_birational) == (True, True)
    assert v.segre_e == 0 and v.segre_e_infinity == 0
    v = criteria(line_spec)
    assert (v.finite, v.finite_birational) == (False, False)
    assert v.as_dict() == {"finite": False, "finiteBirational": False}
    v = criteria(whole_spec)
    assert (v.finite, v.finite_birational) == (True, True)
    v = criteria(double_line_spec)
    assert (v.finite, v.finite_birational) == (True, False)
    assert v.certificates and v.note


def test_criteria_undetermined(line_spec, monkeypatch):
    def boom(*args, **kwargs):
        raise NoStabilization("forced", last_origin=64)

    spec = ProblemSpec(line_spec.ring, line_spec.H)
    spec.r  # computed before the fitter is disabled
    monkeypatch.setattr(mm, "detect_stabilization", boom)
    v = criteria(spec)
    assert v.finite is None and v.finite_birational is None
    assert v.as_dict() == {"finite": "undetermined", "finiteBirational": "undetermined"}
    assert len(v.failures) == 2


def test_criteria_empty_scheme():
    P = polynomial_ring(["x"])
    (x,) = P.gens()
    R = MultigradedRing(("x",), ((1,),), (x * x,))
    v = criteria(ProblemSpec.from_generators(R, [[x]]))
    assert v.r == -1 and v.finite and v.finite_birational


def test_segre_scalar():
    assert segre_scalar({(2, 0): 1, (1, 1): 1, (0, 2): 0}, 2) == 1 + 2
    assert segre_scalar({}, 2) == 0


def test_suv_examples(line_spec, plane, double_line_spec):
    assert suv_relative_mult(line_spec, 1) == 1
    assert suv_relative_mult(ProblemSpec.whole(plane), 1) == 0
    x, y = plane.gens()
    assert suv_relative_mult(ProblemSpec.from_generators(plane, [[x, y]]), 1) == 0
    assert suv_relative_mult(double_line_spec, 1) == 1
    assert suv_relative_mult(double_line_spec, 2) == 0


def test_suv_needs_single_grading(ex_spec):
    with pytest.raises(ValueError):
        suv_relative_mult(ex_spec, 1)


def test_mixed_mult_additive_on_exact_sequence():
    R = polynomial_ring(["x", "y", "z"])
    x, y, z = R.gens()
    whole = mixed_mult(R)
    sub = mixed_mult(R, ModuleSpec.ideal([x * y]), r=2)
    quo = mixed_mult(R, ModuleSpec.quotient([x * y]), r=2)
    assert whole == {(2,): 1}
    assert {b: sub[b] + quo[b] for b in whole} == whole
    # the quotient k[x,y,z]/(xy) has degree 2 in dimension 1
    assert mixed_mult(R, ModuleSpec.quotient([x * y])) == {(1,): 2}


def test_mixed_mult_union_of_two_points():
    # Proj k[x,y]/(x*y) is two reduced points, one from each coordinate line
    P = polynomial_ring(["x", "y"])
    x, y = P.gens()
    R = MultigradedRing(("x", "y"), ((1,), (1,)), (x * y,))
    assert mixed_mult(R) == {(0,): 2}


def test_multiplicity_report(double_line_spec):
    rep = multiplicity_report(double_line_spec, (1,))
    assert rep.rel_mixed == {(0,): 1} and rep.br == {(0,): 0}
    assert rep.j_sharp[((0,), (0,))] == 1
    assert rep.decomposition_holds()
    assert len(rep.fit_certificates) == 3


@settings(max_examples=15, deadline=None)
@given(st.integers(1000, 1100))
def test_random_spec_nonincreasing_and_degree_bound(seed):
    spec = random_monomial_spec(seed)
    p = spec.grading_rank
    fits = {t: mm.fit_lambda_AB(spec, t) for t in itertools.product((1, 2), repeat=p)}
    for fit in fits.values():
        assert fit.total_degree <= spec.r
    vals = {t: rel_mixed_mult(spec, t) for t in fits}
    for t, tp in itertools.product(fits, fits):
        if all(a <= b for a, b in zip(t, tp)):
            assert all(vals[tp][b] <= vals[t][b] for b in vals[t])


@settings(max_examples=10, deadline=None)
@given(st.integers(2000, 2100))
def test_random_spec_j_sharp_monotone(seed):
    spec = random_monomial_spec(seed)
    p = spec.grading_rank
    lo, hi = j_sharp(spec, (1,) * p), j_sharp(spec, (2,) * p)
    assert all(hi[k] <= lo[k] for k in lo)
