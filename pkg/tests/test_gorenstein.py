import numpy as np
import pytest

from homres.approx import add
from homres.fixtures import socle_inclusion, top_projection
from homres.gorenstein import (
    INF,
    CompleteResolution,
    Window,
    complete_window,
    contractible_inner,
    contractible_window,
    g_membership,
    prop_4_7_check,
    product_window,
    self_orthogonality,
    thm_4_1_collapse,
    thm_4_6_summand,
    verify_complete_resolution,
)
from homres.modcat import are_isomorphic, identity, zero_map
from homres.resolve import HypothesisViolation, ShortExactSeq, build_proper_resolution
from homres.serialize import load_default


@pytest.fixture(scope="module")
def ws():
    return load_default()


def test_window_of_simple_over_dual_numbers(fx):
    cr = complete_window(add(fx.REG1), fx.K1, 3)
    assert cr.ok
    assert cr.label == "complete-to-depth-3"
    assert cr.window.dims() == [2] * 8
    assert cr.depth == 3


def test_contractible_window_is_complete(fx):
    cr = verify_complete_resolution(add(fx.REG1), contractible_window(fx.REG1), fx.REG1)
    assert cr.ok and cr.depth == INF and cr.label == "complete"


def test_refuted_window_names_the_failing_certificate(fx):
    # the identity window on K1 has a term outside add(REG1)
    cr = verify_complete_resolution(add(fx.REG1), contractible_window(fx.K1), fx.K1)
    assert not cr.ok
    assert cr.label.startswith("refuted: in_C")
    # pivot mismatch
    cr = verify_complete_resolution(add(fx.REG1), contractible_window(fx.REG1), fx.K1)
    assert cr.failure[0] == "pivot"


def test_non_composable_window_is_rejected(fx):
    with pytest.raises(ValueError):
        verify_complete_resolution(add(fx.REG1), Window([identity(fx.K1), identity(fx.REG1)], 0), fx.K1)


def test_self_orthogonality(fx):
    assert self_orthogonality(add(fx.REG1), 3)
    o = self_orthogonality(add(fx.K1), 3)
    assert not o and o.counterexample == ("K1", "K1", 1, 1)
    assert self_orthogonality(add(fx.REGA2), 2)


def test_g_membership_verdicts(fx):
    assert g_membership(add(fx.REG1), fx.K1, 3).verified
    # SA has no monomorphism into a projective, so the window cannot be built
    v = g_membership(add(fx.REGA2), fx.SA, 2)
    assert v.verdict == "refuted" and v.witness == ("from", 1, 1)
    assert g_membership(add(fx.REGA2), fx.PA, 2).verified
    # add(K1) is not self-orthogonal, so a failure stays inconclusive
    v = g_membership(add(fx.K1), fx.REG1, 2)
    assert v.verdict == "inconclusive"


def test_collapse_on_the_fixture_window(ws, fx):
    C = ws.subcategory("add(REG1)")
    outer = ws.sequence("outer")
    assert outer.ok and outer.depth == INF
    inner = [ws.sequence(n) for n in ("W_K1", "W_K1K1", "W_K1K1", "W_K1")]
    cr = thm_4_1_collapse(C, outer, inner)
    assert cr.ok and cr.depth >= 2
    assert are_isomorphic(cr.pivot, outer.pivot)
    again = thm_4_1_collapse(C, cr, contractible_inner(C, cr))
    assert again.ok and again.depth >= 2


def test_collapse_checks_inner_windows(ws):
    C = ws.subcategory("add(REG1)")
    outer = ws.sequence("outer")
    inner = [ws.sequence(n) for n in ("W_K1", "W_K1K1", "W_K1K1")]
    with pytest.raises(ValueError):
        thm_4_1_collapse(C, outer, inner)
    bad = verify_complete_resolution(C, contractible_window(outer.pivot), outer.pivot)
    with pytest.raises(HypothesisViolation):
        thm_4_1_collapse(C, outer, [bad] * 4)


def test_summand_windows_follow_the_cumulative_pattern(ws):
    C = ws.subcategory("add(REG1)")
    w = ws.sequence("W_K1REG1")
    for name, target in (("e_K1", "K1"), ("e_REG1", "REG1")):
        e = ws.morphism(name)
        cr = thm_4_6_summand(C, w, e)
        assert cr.ok
        assert are_isomorphic(cr.pivot, ws.module(target))
        dims = cr.left.dims()
        cum = [sum(w.left.term(i).dim for i in range(k + 1)) for k in range(len(dims))]
        assert dims == cum


def test_summand_of_identity_and_zero(ws):
    C = ws.subcategory("add(REG1)")
    w = ws.sequence("W_K1")
    assert thm_4_6_summand(C, w, identity(w.pivot)) is w
    z = thm_4_6_summand(C, w, zero_map(w.pivot, w.pivot))
    assert z.pivot.dim == 0 and z.ok


def test_product_window_projectors(fx):
    C = add(fx.REG1)
    parts = [complete_window(C, fx.K1, 2), complete_window(C, fx.REG1, 2)]
    cr, proj = product_window(C, parts)
    assert cr.ok
    s = sum(p.matrix for p in proj) % 2
    assert np.array_equal(s, identity(cr.pivot).matrix)


def test_two_out_of_three(fx):
    C = add(fx.REG1)
    soc, top = socle_inclusion(fx), top_projection(fx)
    ses = ShortExactSeq(soc, top)
    wk = complete_window(C, fx.K1, 2)
    out = prop_4_7_check(C, ses, "5", {"X": wk, "Z": wk})
    assert out.term == "Y" and out.verdict == "verified"
    out = prop_4_7_check(C, ses, "1", {"Y": build_proper_resolution(C, fx.REG1, 2),
                                       "Z": build_proper_resolution(C, fx.K1, 2)})
    assert out.term == "X" and out
    with pytest.raises(ValueError):
        prop_4_7_check(C, ses, "9", {})


def test_complete_resolution_is_not_a_plain_bool_when_refuted(fx):
    cr = verify_complete_resolution(add(fx.REG1), contractible_window(fx.K1), fx.K1)
    assert isinstance(cr, CompleteResolution) and not bool(cr)
