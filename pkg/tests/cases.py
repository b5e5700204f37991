"""Random valid inputs for the four resolution constructions.

A case is a short exact sequence built from a random monomorphism plus the
proper (co)resolutions the chosen construction needs. Everything is driven by
a seeded ``numpy`` generator so failures replay.
"""
from dataclasses import dataclass

from homres.approx import Subcategory, add, is_in_add
from homres.fixtures import all_a2_modules, all_truncated_modules, load
from homres.modcat import HomSpace, Module, Morphism, cokernel
from homres.resolve import (
    YES,
    Obstruction,
    build_coproper_coresolution,
    build_proper_resolution,
    shape_matches,
    thm_3_2_construct,
    thm_3_4_construct,
    thm_3_6_construct,
    thm_3_8_construct,
    _ses_hom_exact,
    _ses_strong,
)

FX = load()

POOLS = {
    "LAMBDA1": [m for d in (1, 2, 3) for m in all_truncated_modules(FX.LAMBDA1, d)],
    "LAMBDA2": [m for d in (1, 2) for m in all_truncated_modules(FX.LAMBDA2, d)] + [FX.REG2],
    "A2": [m for d in (1, 2, 3) for m in all_a2_modules(FX.A2, d)],
}

SUBCATEGORIES = {
    "LAMBDA1": [add(FX.REG1), add(FX.K1, FX.REG1)],
    "LAMBDA2": [add(FX.REG2), add(FX.REG2, FX.S2), add(FX.REG2, FX.U2)],
    "A2": [add(FX.REGA2), add(FX.SA, FX.PA)],
}

KINDS = ("resolve-left", "coresolve-right", "resolve-right", "coresolve-left")


def random_mono(rng, pool, attempts=60):
    """A random monomorphism ``A -> B`` between pool modules, ``A`` nonzero."""
    for _ in range(attempts):
        a = pool[rng.integers(len(pool))]
        b = pool[rng.integers(len(pool))]
        if a.dim > b.dim:
            continue
        hs = HomSpace(a, b)
        if hs.dim == 0:
            continue
        f = hs.element(rng.integers(0, a.p, hs.dim))
        if f.is_mono():
            return f
    return None


def random_ses(rng, pool):
    f = random_mono(rng, pool)
    if f is None:
        return None
    _, g = cokernel(f)
    return f, g


@dataclass
class Case:
    kind: str
    C: Subcategory
    f: Morphism
    g: Morphism
    inputs: tuple
    length: int


def random_case(rng, kind=None, algebra=None):
    """Draw until the required approximations are epic (or monic)."""
    while True:
        alg = algebra or ["LAMBDA1", "LAMBDA2", "A2"][rng.integers(3)]
        k = kind or KINDS[rng.integers(4)]
        C = SUBCATEGORIES[alg][rng.integers(len(SUBCATEGORIES[alg]))]
        ses = random_ses(rng, POOLS[alg])
        if ses is None:
            continue
        f, g = ses
        length = int(rng.integers(2, 5))
        try:
            if k == "resolve-left":
                ins = (build_proper_resolution(C, f.target, length), build_proper_resolution(C, g.target, length))
            elif k == "resolve-right":
                ins = (build_proper_resolution(C, f.target, length), build_proper_resolution(C, f.source, length))
            elif k == "coresolve-right":
                ins = (build_coproper_coresolution(C, f.target, length),
                       build_coproper_coresolution(C, f.source, length))
            else:
                ins = (build_coproper_coresolution(C, f.target, length),
                       build_coproper_coresolution(C, g.target, length))
        except Obstruction:
            continue
        return Case(k, C, f, g, ins, length)


CONSTRUCT = {
    "resolve-left": thm_3_2_construct,
    "coresolve-right": thm_3_4_construct,
    "resolve-right": thm_3_6_construct,
    "coresolve-left": thm_3_8_construct,
}


def run_case(case):
    return CONSTRUCT[case.kind](case.C, case.f, case.g, *case.inputs)


def _part(case, tag, i):
    names = {"res0": 0, "cores0": 0, "res1": 1, "cores1": 1}
    res = case.inputs[names[tag]]
    if i < len(res.terms):
        return res.terms[i]
    if res.truncated:
        return None
    return Module.zero(res.target.algebra)


def check_shapes(case, con) -> str:
    """Empty string when every degree matches its direct-sum pattern."""
    out = con.resolution
    for i, summ in enumerate(out.extras["summands"]):
        if summ is None:
            continue
        parts = [_part(case, tag, j) for tag, j in summ]
        if any(p is None for p in parts):
            continue
        if not shape_matches(out.terms[i], parts):
            return f"degree {i} does not match {summ}"
    if con.bridge is not None:
        from homres.modcat import short_exact_verdict
        v = short_exact_verdict(con.bridge.f, con.bridge.g)
        if not v:
            return "bridge sequence is not exact: " + v.reason
    return ""


def hypotheses(case, con) -> dict:
    """Which conclusions the construction's hypotheses license, from certificates only."""
    a, b = case.inputs
    C = case.C
    both = lambda key: a.flags[key] == YES and b.flags[key] == YES  # noqa: E731
    if case.kind in ("resolve-left", "coresolve-right"):
        # the new degree-0 term must lie in add(T), which add(T) does not guarantee
        closed = bool(is_in_add(C, con.resolution.terms[0]))
        return {
            "dual_exact": both("dual_exact"),
            "proper": closed and both("proper"),
            "strongly_proper": closed and both("strongly_proper"),
        }
    side = "from" if case.kind == "resolve-right" else "into"
    other = "into" if side == "from" else "from"
    return {
        "dual_exact": both("dual_exact") and _ses_hom_exact(C, case.f, case.g, other),
        "proper": _ses_hom_exact(C, case.f, case.g, side) and both("proper"),
        "strongly_proper": _ses_strong(C, case.f, case.g, side) and both("strongly_proper"),
    }


def check_certificates(case, con) -> str:
    """Proper output exactly when licensed; dual exactness and strongness whenever licensed."""
    out = con.resolution
    hyp = hypotheses(case, con)
    got = {k: out.flags[k] == YES for k in hyp}
    if got["proper"] != hyp["proper"]:
        return f"proper is {got['proper']} but the hypotheses say {hyp['proper']}"
    for k in ("dual_exact", "strongly_proper"):
        if hyp[k] and not got[k]:
            return f"{k} licensed but not verified"
    return ""
