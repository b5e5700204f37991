import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cases
from homres.approx import add, ext_dims
from homres.dimension import (
    GenCogenPair,
    GorensteinClass,
    MissingWitness,
    c_dim_report,
    codim_report,
    contains,
    cor_5_12_sequences,
    gdim_report,
    g_codim_report,
    prop_5_1_rebuild,
    sequence_exact,
    thm_5_3_swap,
    thm_5_5_cowitness,
    thm_5_5_witness,
)
from homres.fixtures import load, multiplication_by_x, socle_inclusion, top_projection
from homres.modcat import Module, kernel, zero_map
from homres.resolve import HypothesisViolation, build_proper_resolution

FX = load()
L1_PAIR = GenCogenPair(add(FX.K1, FX.REG1), add(FX.REG1), add(FX.REG1))


def four_term():
    return [socle_inclusion(FX), multiplication_by_x(FX), top_projection(FX)]


def test_sequence_exact_pads_with_zeros():
    assert sequence_exact(four_term())
    assert not sequence_exact([multiplication_by_x(FX), top_projection(FX)])


def test_rebuild_on_both_sides():
    for side in ("gen", "cogen"):
        r = prop_5_1_rebuild(L1_PAIR, four_term(), side)
        assert r.ok, r.memberships
        assert [f.source.dim for f in r.maps] == [1, 2, 2]


def test_rebuild_needs_exact_input():
    bad = [socle_inclusion(FX), zero_map(FX.REG1, FX.REG1), top_projection(FX)]
    with pytest.raises(HypothesisViolation):
        prop_5_1_rebuild(L1_PAIR, bad)


def test_swap_both_sides_on_the_four_term_sequence():
    cog = thm_5_3_swap(L1_PAIR, four_term(), "cogen")
    assert cog.ok and all(k.startswith("I_") or k == "X in C" for k in cog.memberships)
    gen = thm_5_3_swap(L1_PAIR, four_term(), "gen")
    assert gen.ok
    assert gen.connecting.verdict and cog.connecting.verdict


def test_missing_witness_without_auto():
    pair = GenCogenPair(add(FX.K1, FX.REG1), add(FX.REG1), add(FX.REG1), auto=False)
    with pytest.raises(MissingWitness):
        pair.gen_witness(FX.K1)


@pytest.mark.parametrize("t", [0, 1, 2])
def test_mixed_witness_places_the_class_term_at_t(t):
    pair = GenCogenPair(add(FX.K1, FX.REG1), add(FX.REG1), add(FX.REG1))
    w = thm_5_5_witness(pair, FX.K1, 2, t)
    assert w.ok
    assert len(w.terms) == 3


def test_mixed_witness_rejects_t_out_of_range():
    with pytest.raises(ValueError):
        thm_5_5_witness(L1_PAIR, FX.K1, 2, 3)
    with pytest.raises(ValueError):
        thm_5_5_witness(L1_PAIR, FX.K1, 2, -1)


def test_mixed_witness_at_n_zero():
    w = thm_5_5_witness(L1_PAIR, FX.K1, 0, 0)
    assert w.ok and [t.dim for t in w.terms] == [1]


def test_cowitness():
    w = thm_5_5_cowitness(L1_PAIR, FX.K1, 1, 0)
    assert w.ok


def test_gorenstein_class_membership():
    G = GorensteinClass(add(FX.REGA2), 2)
    assert contains(G, FX.PA) and contains(G, FX.SB)
    assert not contains(G, FX.SA)
    assert contains(G, Module.zero(FX.A2))


def test_c_dim_report_text():
    r = c_dim_report(add(FX.REG1), FX.K1, 5)
    assert r.lower == 1 and r.upper is None
    assert r.render().splitlines()[:3] == [
        "C-dim of K1 in add(REG1)",
        "  lower: 1",
        "  upper: unknown beyond 5",
    ]
    assert r.as_dict()["upper"] is None


def test_c_dim_of_simple_on_path_algebra():
    r = c_dim_report(add(FX.REGA2), FX.SA, 4)
    assert r.value == 1 and r.ext_lower == 1
    assert r.witness.dims() == [2, 1]


def test_codim_against_projectives_of_the_path_algebra():
    # SB is projective; SA has no nonzero map into a projective
    assert codim_report(add(FX.REGA2), FX.SB, 3).value == 0
    r = codim_report(add(FX.REGA2), FX.SA, 3)
    assert r.upper == float("inf") and "monomorphism into" in r.notes[0]


def test_gdim_over_self_injective_algebra_is_zero():
    for m in cases.POOLS["LAMBDA1"][:10]:
        assert gdim_report(add(FX.REG1), m, 3).value == 0


def test_g_codim_of_projectives():
    assert g_codim_report(add(FX.REGA2), FX.SB, 3).value == 0
    assert g_codim_report(add(FX.REGA2), FX.PA, 3).value == 0


def test_gdim_candidate_is_the_ext_supremum():
    for m in cases.POOLS["A2"]:
        r = gdim_report(add(FX.REGA2), m, 3)
        dims = ext_dims(m, FX.REGA2, 3).dims
        top = max([i for i in range(1, 4) if dims[i]], default=0)
        assert r.values["ext"] == top
        assert r.agree


def test_precover_by_gorenstein_objects():
    X = add(FX.REGA2)
    rep = gdim_report(X, FX.SA, 3)
    out = cor_5_12_sequences(X, FX.SA, rep, [FX.SB, FX.PA])
    assert out.precover
    f = out.approx_ses
    assert [f.f.source.dim, f.f.target.dim, f.g.target.dim] == [1, 2, 1]
    assert out.embed_ses.verdict


def test_precover_needs_a_finite_dimension():
    rep = c_dim_report(add(FX.REG1), FX.K1, 2)
    with pytest.raises(HypothesisViolation):
        cor_5_12_sequences(add(FX.REG1), FX.K1, rep, [FX.K1])


@settings(max_examples=30)
@given(st.integers(0, 2**31))
def test_swap_on_random_sequences(seed):
    rng = np.random.default_rng(seed)
    seq = random_swap_input(rng)
    for side in ("cogen", "gen"):
        s = thm_5_3_swap(L1_PAIR, seq, side)
        assert s.ok, (side, s.memberships)


def random_swap_input(rng):
    """``0 -> A -> C_{n-1} -> ... -> C_0 -> M -> 0`` cut from a proper resolution over LAMBDA1."""
    pool = cases.POOLS["LAMBDA1"]
    while True:
        m = pool[rng.integers(len(pool))]
        n = int(rng.integers(1, 4))
        res = build_proper_resolution(L1_PAIR.C, m, n, verify=False)
        if len(res.terms) < n:
            continue
        _, inc = kernel(res.maps[n - 1])
        return [inc] + list(reversed(res.maps[:n]))
