"""Augmented (co)resolutions and the zig-zag constructions built from them.

Conventions. A resolution of ``M`` stores ``terms = [C_0, ..., C_n]`` and
``maps = [C_0 -> M, C_1 -> C_0, ..., C_n -> C_{n-1}]``; a coresolution stores
``maps = [M -> C^0, C^0 -> C^1, ...]``. ``truncated`` means the kernel (resp.
cokernel) at the far end is not known to vanish; otherwise the window is the
whole (finite) resolution and every later term is zero.

The constructions follow the proofs: a pullback (or pushout) against the
augmentation, then a tower of horseshoe steps. Each step takes a short exact
sequence ``0 -> A -f-> A' -g-> A'' -> 0`` together with maps ``alpha: L -> A``
and ``beta: R -> A''``, lifts ``beta`` to ``h: R -> A'`` and uses
``(f alpha, h): L + R -> A'``; its kernel ``W`` sits in the next short exact
sequence ``0 -> ker(alpha) -> W -> ker(beta) -> 0``. The coresolution versions
are obtained by applying ``D = Hom_k(-, k)`` and running the resolution
versions over the opposite algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .approx import (
    Subcategory,
    is_hom_from_C_exact,
    is_hom_into_C_exact,
    is_in_add,
    is_strongly_exact,
    reduced_right_approx,
)
from .modcat import (
    Module,
    Morphism,
    Verdict,
    direct_sum,
    dual,
    dual_map,
    identity,
    image,
    is_exact,
    kernel,
    lift,
    short_exact_verdict,
    zero_map,
)

YES, NO, UNCHECKED = "verified-yes", "verified-no", "unchecked"
FLAG_KEYS = ("exact", "in_C", "main_exact", "dual_exact", "strong_main", "proper", "strongly_proper")
INF = float("inf")


class HypothesisViolation(Exception):
    def __init__(self, certificate: str, detail: str = "", step: int | None = None):
        self.certificate = certificate
        self.detail = detail
        self.step = step
        where = f" (step {step})" if step is not None else ""
        super().__init__(f"hypothesis violated: {certificate}{where}{': ' + detail if detail else ''}")


class Obstruction(Exception):
    def __init__(self, step: int, detail: str = ""):
        self.step = step
        self.detail = detail
        super().__init__(f"approximation at step {step} is not {detail or 'epic'}")


def _flag(ok: bool) -> str:
    return YES if ok else NO


@dataclass(eq=False)
class AugmentedResolution:
    target: Module
    terms: list[Module]
    maps: list[Morphism]
    direction: str = "resolution"
    truncated: bool = True
    labels: list[str] | None = None
    flags: dict = field(default_factory=lambda: {k: UNCHECKED for k in FLAG_KEYS})
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.labels is None:
            sym = "C_" if self.direction == "resolution" else "C^"
            self.labels = [f"{sym}{i}" for i in range(len(self.terms))]
        self._zero = None

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def top(self):
        """Highest degree that is known: the length, or infinity for a finite resolution."""
        return self.length if self.truncated else INF

    def zero(self) -> Module:
        if self._zero is None:
            self._zero = Module.zero(self.target.algebra)
        return self._zero

    def term(self, i: int) -> Module:
        if i < len(self.terms):
            return self.terms[i]
        if self.truncated:
            raise IndexError(f"degree {i} lies beyond a truncated window of length {self.length}")
        return self.zero()

    def map(self, i: int) -> Morphism:
        """Augmentation for ``i = 0``, otherwise the differential out of (or into) degree ``i``."""
        if i < len(self.maps):
            return self.maps[i]
        if self.truncated:
            raise IndexError(f"map {i} lies beyond a truncated window of length {self.length}")
        prev = self.target if i == 0 else self.term(i - 1)
        if self.direction == "resolution":
            return zero_map(self.term(i), prev)
        return zero_map(prev, self.term(i))

    def sequence(self) -> list[Morphism]:
        """Maps in left-to-right order, padded with zero objects at the exact ends."""
        z = self.zero()
        if self.direction == "resolution":
            seq = list(reversed(self.maps)) + [zero_map(self.target, z)]
            if not self.truncated and self.terms:
                seq.insert(0, zero_map(z, self.terms[-1]))
            return seq
        seq = [zero_map(z, self.target)] + list(self.maps)
        if not self.truncated and self.terms:
            seq.append(zero_map(self.terms[-1], z))
        return seq

    def core_maps(self) -> list[Morphism]:
        if self.direction == "resolution":
            return list(reversed(self.maps))
        return list(self.maps)

    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]

    @property
    def proper(self) -> bool:
        return self.flags["proper"] == YES

    @property
    def strongly_proper(self) -> bool:
        return self.flags["strongly_proper"] == YES

    def summary(self) -> dict:
        return {
            "direction": self.direction,
            "target_dim": self.target.dim,
            "dims": self.dims(),
            "labels": list(self.labels),
            "truncated": self.truncated,
            "flags": dict(self.flags),
        }


@dataclass
class ShortExactSeq:
    f: Morphism
    g: Morphism
    verdict: Verdict | None = None

    def __post_init__(self):
        if self.verdict is None:
            self.verdict = short_exact_verdict(self.f, self.g)

    @property
    def left(self):
        return self.f.source

    @property
    def middle(self):
        return self.f.target

    @property
    def right(self):
        return self.g.target

    def sequence(self) -> list[Morphism]:
        z = Module.zero(self.f.source.algebra)
        return [zero_map(z, self.f.source), self.f, self.g, zero_map(self.g.target, z)]


# ---------------------------------------------------------------- verification


def verify_resolution(res: AugmentedResolution, C: Subcategory) -> AugmentedResolution:
    """Recompute every flag of ``res`` from scratch; returns ``res``."""
    seq = res.sequence()
    verdicts = {}
    verdicts["exact"] = is_exact(seq)
    verdicts["in_C"] = Verdict(True)
    for i, t in enumerate(res.terms):
        if not is_in_add(C, t):
            verdicts["in_C"] = Verdict(False, f"term {res.labels[i]} is not in {C.name}", i)
            break
    from_c = is_hom_from_C_exact(C, seq)
    into_c = is_hom_into_C_exact(C, seq)
    if res.direction == "resolution":
        verdicts["main_exact"], verdicts["dual_exact"] = from_c, into_c
        side = "from"
    else:
        verdicts["main_exact"], verdicts["dual_exact"] = into_c, from_c
        side = "into"
    if verdicts["exact"]:
        verdicts["strong_main"] = is_strongly_exact(C, res.core_maps(), side)
    else:
        verdicts["strong_main"] = Verdict(False, "not exact")
    for k in ("exact", "in_C", "main_exact", "dual_exact", "strong_main"):
        res.flags[k] = _flag(bool(verdicts[k]))
    proper = bool(verdicts["exact"]) and bool(verdicts["in_C"]) and bool(verdicts["main_exact"])
    res.flags["proper"] = _flag(proper)
    res.flags["strongly_proper"] = _flag(proper and bool(verdicts["strong_main"]))
    res.extras["verdicts"] = verdicts
    res.extras["verified_against"] = C.name
    return res


def _ensure(res: AugmentedResolution, C: Subcategory, keys, name: str):
    if any(res.flags[k] == UNCHECKED for k in keys) or res.extras.get("verified_against") != C.name:
        verify_resolution(res, C)
    for k in keys:
        if res.flags[k] != YES:
            raise HypothesisViolation(f"{name} {k.replace('_', '-')}")


def dual_resolution(res: AugmentedResolution) -> AugmentedResolution:
    """Apply ``D``: a resolution over the algebra becomes a coresolution over its opposite.

    ``D`` is an exact duality, so each flag carries over to its mirror image.
    """
    direction = "coresolution" if res.direction == "resolution" else "resolution"
    flip = {"C_": "C^", "C^": "C_"}
    labels = [flip.get(l[:2], l[:2]) + l[2:] if l[:2] in flip else l for l in res.labels]
    out = AugmentedResolution(
        target=dual(res.target),
        terms=[dual(t) for t in res.terms],
        maps=[dual_map(f) for f in res.maps],
        direction=direction,
        truncated=res.truncated,
        labels=labels,
        flags=dict(res.flags),
    )
    for key in ("summands", "shape"):
        if key in res.extras:
            out.extras[key] = res.extras[key]
    if "verified_against" in res.extras:
        out.extras["verified_against"] = "D(" + res.extras["verified_against"] + ")"
    return out


# ---------------------------------------------------------------- builders


def build_proper_resolution(C: Subcategory, m: Module, length: int, verify: bool = True) -> AugmentedResolution:
    """Iterate epic precovers on successive kernels, ``length + 1`` terms at most.

    A kernel that already lies in ``add(T)`` is covered by its identity, which
    ends the resolution.
    """
    terms, maps = [], []
    cur, inc = m, identity(m)
    finished = False
    for i in range(length + 1):
        if cur.dim == 0 and i > 0:
            finished = True
            break
        if is_in_add(C, cur):
            src, a = cur, identity(cur)
        else:
            ap = reduced_right_approx(C, cur)
            if not ap.epic:
                raise Obstruction(i, "epic")
            src, a = ap.map.source, ap.map
        terms.append(src)
        maps.append(inc @ a)
        cur, inc = kernel(a)
    if not finished:
        finished = cur.dim == 0
    res = AugmentedResolution(m, terms, maps, "resolution", truncated=not finished)
    if verify:
        verify_resolution(res, C)
    return res


def build_coproper_coresolution(C: Subcategory, m: Module, length: int, verify: bool = True) -> AugmentedResolution:
    """Dual of :func:`build_proper_resolution` via preenvelopes on successive cokernels."""
    res = dual_resolution(build_proper_resolution(C.dual(), dual(m), length, verify=False))
    res.flags = {k: UNCHECKED for k in FLAG_KEYS}
    if verify:
        verify_resolution(res, C)
    return res


def factor_through_mono(phi: Morphism, inc: Morphism) -> Morphism:
    """The unique ``psi`` with ``inc @ psi == phi`` for a monomorphism ``inc``."""
    p = phi.p
    if inc.source.dim == 0:
        if phi.matrix.any():
            raise ValueError("map does not factor through the zero submodule")
        return zero_map(phi.source, inc.source)
    psi = la.matmul(la.left_inverse(inc.matrix, p), phi.matrix, p)
    if not np.array_equal(la.matmul(inc.matrix, psi, p), phi.matrix):
        raise ValueError("map does not factor through the given monomorphism")
    return Morphism(phi.source, inc.source, psi)


def factor_through_epi(phi: Morphism, q: Morphism) -> Morphism:
    """The unique ``psi`` with ``psi @ q == phi`` for an epimorphism ``q``."""
    d = factor_through_mono(dual_map(phi), dual_map(q))
    return Morphism(q.target, phi.target, d.matrix.T.copy())


def shift(res: AugmentedResolution) -> AugmentedResolution:
    """The resolution of ``K_1 = ker(augmentation)`` formed by degrees ``>= 1``."""
    if res.direction != "resolution":
        raise ValueError("shift expects a resolution")
    aug = res.map(0)
    k, inc = kernel(aug, name=f"K({res.target.name})")
    if len(res.terms) > 1:
        first = factor_through_mono(res.maps[1], inc)
        maps = [first] + res.maps[2:]
        terms = res.terms[1:]
    else:
        terms, maps = [], []
    out = AugmentedResolution(k, terms, maps, "resolution", truncated=res.truncated,
                              labels=res.labels[1:])
    out.extras["inclusion"] = inc
    if "summands" in res.extras:
        out.extras["summands"] = res.extras["summands"][1:]
    return out


def horseshoe_fill(f: Morphism, g: Morphism, alpha: Morphism, alpha2: Morphism,
                   h: Morphism | None = None, side: str = "cover"):
    """One horseshoe step on ``0 -> A -f-> A' -g-> A'' -> 0``.

    ``side="cover"``: ``alpha: C -> A``, ``alpha2: C'' -> A''`` and a lift
    ``h: C'' -> A'`` with ``g h = alpha2`` (found when not given). Returns the
    direct sum, ``alpha' = (f alpha, h)`` and the two commuting-square checks.

    ``side="envelope"``: ``alpha: A -> D``, ``alpha2: A'' -> D''`` and
    ``h: A' -> D`` with ``h f = alpha``; returns ``beta' = (h; alpha2 g)``.
    """
    p = f.p
    if side == "cover":
        if h is None:
            h = lift(g, alpha2)
            if h is None:
                raise HypothesisViolation("lift", "no h with g h = alpha''")
        elif not np.array_equal(la.matmul(g.matrix, h.matrix, p), alpha2.matrix):
            raise HypothesisViolation("lift", "g h != alpha''")
        ds = direct_sum([alpha.source, alpha2.source])
        mid = Morphism(ds.module, f.target, np.concatenate([(f @ alpha).matrix, h.matrix], axis=1))
        left_ok = np.array_equal((mid @ ds.injections[0]).matrix, (f @ alpha).matrix)
        right_ok = np.array_equal((g @ mid).matrix, (alpha2 @ ds.projections[1]).matrix)
        return ds, mid, left_ok and right_ok
    if side == "envelope":
        if h is None:
            from .modcat import extend
            h = extend(f, alpha)
            if h is None:
                raise HypothesisViolation("extension", "no k with k f = beta")
        elif not np.array_equal(la.matmul(h.matrix, f.matrix, p), alpha.matrix):
            raise HypothesisViolation("extension", "k f != beta")
        ds = direct_sum([alpha.target, alpha2.target])
        mid = Morphism(f.target, ds.module, np.concatenate([h.matrix, (alpha2 @ g).matrix], axis=0))
        left_ok = np.array_equal((mid @ f).matrix, (ds.injections[0] @ alpha).matrix)
        right_ok = np.array_equal((ds.projections[1] @ mid).matrix, (alpha2 @ g).matrix)
        return ds, mid, left_ok and right_ok
    raise ValueError(f"unknown side {side!r}")


@dataclass
class Tower:
    terms: list[Module]
    sums: list
    maps: list[Morphism]  # maps[0]: first sum -> A', maps[i]: sum_i -> sum_{i-1}
    W: list[Module]        # W[i] = kernel of maps[i] (as a module)
    W_ses: list[tuple[Morphism, Morphism]]
    summands: list[tuple]


def horseshoe_tower(f: Morphism, g: Morphism, left: AugmentedResolution, right: AugmentedResolution,
                    top: int, tags=("L", "R")) -> Tower:
    """Degrees ``0..top`` of the horseshoe resolution of ``A'`` (middle of ``f, g``)."""
    alpha, beta = left.map(0), right.map(0)
    fi, gi = f, g
    terms, sums, maps, Ws, Wses, summ = [], [], [], [], [], []
    prev_inc = None
    for i in range(top + 1):
        lt, rt = left.term(i), right.term(i)
        h = lift(gi, beta)
        if h is None:
            raise HypothesisViolation("lift", "the column is not Hom-exact for this term", step=i)
        ds = direct_sum([lt, rt], name=f"{lt.name}+{rt.name}")
        mid = Morphism(ds.module, fi.target, np.concatenate([(fi @ alpha).matrix, h.matrix], axis=1))
        terms.append(ds.module)
        sums.append(ds)
        summ.append(((tags[0], i), (tags[1], i)))
        maps.append(mid if prev_inc is None else prev_inc @ mid)
        w, inc_w = kernel(mid, name=f"W{i + 1}")
        kl, inc_l = kernel(alpha)
        kr, inc_r = kernel(beta)
        f_next = factor_through_mono(ds.injections[0] @ inc_l, inc_w)
        g_next = factor_through_mono(ds.projections[1] @ inc_w, inc_r)
        Ws.append(w)
        Wses.append((f_next, g_next))
        if i < top:
            alpha = factor_through_mono(left.map(i + 1), inc_l)
            beta = factor_through_mono(right.map(i + 1), inc_r)
            fi, gi = f_next, g_next
            prev_inc = inc_w
    return Tower(terms, sums, maps, Ws, Wses, summ)


def _finite_top(*tops_and_lengths):
    """Top degree for a tower: the least known top, or the longest window when all are finite."""
    tops = [t for t, _ in tops_and_lengths]
    t = min(tops)
    if t == INF:
        t = max(n for _, n in tops_and_lengths)
    return int(t)


def _check_ses(f: Morphism, g: Morphism, name="ses"):
    v = short_exact_verdict(f, g)
    if not v:
        raise HypothesisViolation(f"{name} exact", v.reason)


def _ses_hom_exact(C: Subcategory, f: Morphism, g: Morphism, side: str) -> bool:
    z = Module.zero(f.source.algebra)
    seq = [zero_map(z, f.source), f, g, zero_map(g.target, z)]
    if side == "from":
        return bool(is_hom_from_C_exact(C, seq))
    return bool(is_hom_into_C_exact(C, seq))


def _ses_strong(C: Subcategory, f: Morphism, g: Morphism, side: str) -> bool:
    """Strong Hom-exactness of a short exact sequence: Hom-exact plus Ext^1 vanishing."""
    if not _ses_hom_exact(C, f, g, side):
        return False
    return bool(is_strongly_exact(C, [f, g], "from" if side == "from" else "into"))


# ---------------------------------------------------------------- the four constructions


@dataclass
class Construction:
    resolution: AugmentedResolution
    bridge: ShortExactSeq | None = None
    aux: list[Morphism] | None = None
    predicted: dict = field(default_factory=dict)


def _require(res, C, keys, name, want):
    _ensure(res, C, keys, name)
    if "proper" in want:
        _ensure(res, C, ("proper",), name)
    if "strong" in want:
        _ensure(res, C, ("strongly_proper",), name)


def thm_3_2_construct(C: Subcategory, f: Morphism, pi: Morphism, res0: AugmentedResolution,
                      res1: AugmentedResolution, verify: bool = True, want=()) -> Construction:
    """Resolution of ``X`` from ``0 -> X -f-> X^0 -pi-> X^1 -> 0``.

    ``res0`` must be a C-resolution of ``X^0`` and ``res1`` a Hom(C,-)-exact
    resolution of ``X^1``. Degree ``i >= 1`` of the output is
    ``C^1_{i+1} + C^0_i``; degree 0 is the pullback ``C`` of the first horseshoe
    map along ``X -> M``; the bridge is ``0 -> C -> C^1_1 + C^0_0 -> C^1_0 -> 0``.
    """
    _check_ses(f, pi)
    if res0.target is not pi.source or res1.target is not pi.target:
        raise ValueError("resolutions do not match the short exact sequence")
    _require(res0, C, ("exact", "in_C"), "res0", want)
    _require(res1, C, ("exact", "main_exact"), "res1", want)
    x, x0, x1 = f.source, f.target, pi.target
    eps1 = res1.map(0)
    c01 = res1.term(0)
    ds = direct_sum([x0, c01])
    m, inc_m = kernel(Morphism(ds.module, x1, np.concatenate([pi.matrix, (-eps1.matrix) % f.p], axis=1)),
                      name="M")
    p1 = ds.projections[0] @ inc_m
    p2 = ds.projections[1] @ inc_m
    sh = shift(res1)
    f_col = factor_through_mono(ds.injections[1] @ sh.extras["inclusion"], inc_m)
    top = _finite_top((res0.top, len(res0.terms) - 1), (sh.top, len(sh.terms) - 1))
    if top < 0:
        raise HypothesisViolation("res1 length", "res1 needs at least two terms")
    tower = horseshoe_tower(f_col, p1, sh, res0, top, tags=("res1+1", "res0"))
    iota = factor_through_mono(ds.injections[0] @ f, inc_m)
    # C = preimage of X under the first horseshoe map
    mid0 = tower.terms[0]
    big = direct_sum([mid0, x])
    cmod, inc_c = kernel(Morphism(big.module, m, np.concatenate([tower.maps[0].matrix,
                                                                 (-iota.matrix) % f.p], axis=1)), name="C")
    c1 = big.projections[0] @ inc_c
    c2 = big.projections[1] @ inc_c
    terms = [cmod] + tower.terms[1:]
    maps = [c2]
    if top >= 1:
        maps.append(factor_through_mono(tower.maps[1], c1))
        maps.extend(tower.maps[2:])
    last_w = tower.W[-1]
    labels = ["C"] + [f"C1_{i + 1}+C0_{i}" for i in range(1, top + 1)]
    out = AugmentedResolution(x, terms, maps, "resolution", truncated=last_w.dim > 0, labels=labels)
    out.extras["summands"] = [None] + [[("res1", i + 1), ("res0", i)] for i in range(1, top + 1)]
    out.extras["W"] = tower.W
    out.extras["W_ses"] = tower.W_ses
    out.extras["pullback"] = m
    bridge = ShortExactSeq(c1, p2 @ tower.maps[0])
    predicted = {
        "dual_exact": res0.flags["dual_exact"] == YES and res1.flags["dual_exact"] == YES,
        "proper_inputs": res0.flags["proper"] == YES and res1.flags["proper"] == YES,
        "strong_inputs": res0.flags["strongly_proper"] == YES and res1.flags["strongly_proper"] == YES,
    }
    if verify:
        verify_resolution(out, C)
    return Construction(out, bridge, None, predicted)


def thm_3_6_construct(C: Subcategory, iota: Morphism, pi: Morphism, res0: AugmentedResolution,
                      res1: AugmentedResolution, verify: bool = True, want=()) -> Construction:
    """Resolution of ``X`` from ``0 -> X_1 -iota-> X_0 -pi-> X -> 0``.

    ``res0`` must be a Hom(C,-)-exact resolution of ``X_0`` and ``res1`` a
    C-resolution of ``X_1``. Degree 0 of the output is ``C_0^0`` and degree
    ``i >= 1`` is ``C_0^i + C_1^{i-1}``.
    """
    _check_ses(iota, pi)
    if res0.target is not iota.target or res1.target is not iota.source:
        raise ValueError("resolutions do not match the short exact sequence")
    _require(res0, C, ("exact", "main_exact"), "res0", want)
    _require(res1, C, ("exact", "in_C"), "res1", want)
    if "proper" in want and not _ses_hom_exact(C, iota, pi, "from"):
        raise HypothesisViolation("ses Hom(C,-)-exact")
    if "strong" in want and not _ses_strong(C, iota, pi, "from"):
        raise HypothesisViolation("ses strongly Hom(C,-)-exact")
    x1, x = iota.source, pi.target
    eps0 = res0.map(0)
    aug = pi @ eps0
    w1, inc_w1 = kernel(aug, name="W1")
    w1_to_x1 = Morphism(w1, x1, la.matmul(la.left_inverse(iota.matrix, iota.p), (eps0 @ inc_w1).matrix, iota.p)
                        if x1.dim else la.zeros(0, w1.dim, iota.p))
    if not np.array_equal((iota @ w1_to_x1).matrix, (eps0 @ inc_w1).matrix):
        raise RuntimeError("W1 does not map into X_1")
    sh = shift(res0)
    f_col = factor_through_mono(sh.extras["inclusion"], inc_w1)
    top = _finite_top((sh.top, len(sh.terms) - 1), (res1.top, len(res1.terms) - 1))
    terms = [res0.term(0)]
    maps = [aug]
    labels = ["C0_0"]
    summands = [[("res0", 0)]]
    Ws, Wses = [w1], [(f_col, w1_to_x1)]
    last_w = w1
    if top >= 0:
        tower = horseshoe_tower(f_col, w1_to_x1, sh, res1, top, tags=("res0+1", "res1"))
        terms += tower.terms
        maps.append(inc_w1 @ tower.maps[0])
        maps += tower.maps[1:]
        labels += [f"C0_{i + 1}+C1_{i}" for i in range(top + 1)]
        summands += [[("res0", i + 1), ("res1", i)] for i in range(top + 1)]
        Ws += tower.W
        Wses += tower.W_ses
        last_w = tower.W[-1]
    out = AugmentedResolution(x, terms, maps, "resolution", truncated=last_w.dim > 0, labels=labels)
    out.extras.update(summands=summands, W=Ws, W_ses=Wses)
    ses_from = _ses_hom_exact(C, iota, pi, "from")
    predicted = {
        "dual_exact": (res0.flags["dual_exact"] == YES and res1.flags["dual_exact"] == YES
                       and _ses_hom_exact(C, iota, pi, "into")),
        "in_C": res0.flags["in_C"] == YES,
        "proper": ses_from and res0.flags["proper"] == YES and res1.flags["proper"] == YES,
        "strongly_proper": (_ses_strong(C, iota, pi, "from") and res0.flags["strongly_proper"] == YES
                            and res1.flags["strongly_proper"] == YES),
    }
    if verify:
        verify_resolution(out, C)
    return Construction(out, None, None, predicted)


def _dual_construction(con: Construction, C: Subcategory, verify: bool) -> Construction:
    res = dual_resolution(con.resolution)
    res.flags = {k: UNCHECKED for k in FLAG_KEYS}
    src = con.resolution.extras
    if "W" in src:
        res.extras["W"] = [dual(w) for w in src["W"]]
        res.extras["W_ses"] = [(dual_map(b), dual_map(a)) for a, b in src["W_ses"]]
    bridge = None
    if con.bridge is not None:
        bridge = ShortExactSeq(dual_map(con.bridge.g), dual_map(con.bridge.f))
    aux = None
    if con.aux is not None:
        aux = [dual_map(a) for a in reversed(con.aux)]
    if verify:
        verify_resolution(res, C)
    return Construction(res, bridge, aux, dict(con.predicted))


def thm_3_4_construct(C: Subcategory, iota: Morphism, pi: Morphism, cores0: AugmentedResolution,
                      cores1: AugmentedResolution, verify: bool = True, want=()) -> Construction:
    """Coresolution of ``Y`` from ``0 -> Y_1 -iota-> Y_0 -pi-> Y -> 0``.

    ``cores0`` must be a C-coresolution of ``Y_0`` and ``cores1`` a
    Hom(-,C)-exact coresolution of ``Y_1``. Degree ``i >= 1`` of the output is
    ``C_0^i + C_1^{i+1}``; the bridge is ``0 -> C_1^0 -> C_0^0 + C_1^1 -> C -> 0``.
    """
    _check_ses(iota, pi)
    if cores0.target is not iota.target or cores1.target is not iota.source:
        raise ValueError("coresolutions do not match the short exact sequence")
    _require(cores0, C, ("exact", "in_C"), "cores0", want)
    _require(cores1, C, ("exact", "main_exact"), "cores1", want)
    d0, d1 = dual_resolution(cores0), dual_resolution(cores1)
    con = thm_3_2_construct(C.dual(), dual_map(pi), dual_map(iota), d0, d1, verify=False)
    out = _dual_construction(con, C, verify)
    out.resolution.labels = ["C"] + [f"C0^{i}+C1^{i + 1}" for i in range(1, len(out.resolution.terms))]
    out.resolution.extras["summands"] = [None] + [[("cores1", i + 1), ("cores0", i)]
                                                  for i in range(1, len(out.resolution.terms))]
    out.predicted = {
        "dual_exact": cores0.flags["dual_exact"] == YES and cores1.flags["dual_exact"] == YES,
        "proper_inputs": cores0.flags["proper"] == YES and cores1.flags["proper"] == YES,
        "strong_inputs": cores0.flags["strongly_proper"] == YES and cores1.flags["strongly_proper"] == YES,
    }
    return out


def thm_3_8_construct(C: Subcategory, iota: Morphism, pi: Morphism, cores0: AugmentedResolution,
                      cores1: AugmentedResolution, verify: bool = True, want=()) -> Construction:
    """Coresolution of ``Y`` from ``0 -> Y -iota-> Y^0 -pi-> Y^1 -> 0``.

    ``cores0`` must be a Hom(-,C)-exact coresolution of ``Y^0`` and ``cores1``
    a C-coresolution of ``Y^1``. Degree 0 is ``C_0^0`` and degree ``i >= 1`` is
    ``C_{i-1}^1 + C_i^0``.
    """
    _check_ses(iota, pi)
    if cores0.target is not iota.target or cores1.target is not pi.target:
        raise ValueError("coresolutions do not match the short exact sequence")
    _require(cores0, C, ("exact", "main_exact"), "cores0", want)
    _require(cores1, C, ("exact", "in_C"), "cores1", want)
    if "proper" in want and not _ses_hom_exact(C, iota, pi, "into"):
        raise HypothesisViolation("ses Hom(-,C)-exact")
    if "strong" in want and not _ses_strong(C, iota, pi, "into"):
        raise HypothesisViolation("ses strongly Hom(-,C)-exact")
    d0, d1 = dual_resolution(cores0), dual_resolution(cores1)
    con = thm_3_6_construct(C.dual(), dual_map(pi), dual_map(iota), d0, d1, verify=False)
    out = _dual_construction(con, C, verify)
    n = len(out.resolution.terms)
    out.resolution.labels = ["C0^0"] + [f"C1^{i - 1}+C0^{i}" for i in range(1, n)]
    out.resolution.extras["summands"] = [[("cores0", 0)]] + [[("cores0", i), ("cores1", i - 1)] for i in range(1, n)]
    ses_into = _ses_hom_exact(C, iota, pi, "into")
    out.predicted = {
        "dual_exact": (cores0.flags["dual_exact"] == YES and cores1.flags["dual_exact"] == YES
                       and _ses_hom_exact(C, iota, pi, "from")),
        "in_C": cores0.flags["in_C"] == YES,
        "proper": ses_into and cores0.flags["proper"] == YES and cores1.flags["proper"] == YES,
        "strongly_proper": (_ses_strong(C, iota, pi, "into") and cores0.flags["strongly_proper"] == YES
                            and cores1.flags["strongly_proper"] == YES),
    }
    return out


# ---------------------------------------------------------------- iterated forms


def _image_or_self(x: Morphism):
    """``(Z, X -> Z epi, Z -> target mono)``; ``Z`` is the source itself when ``x`` is mono."""
    if x.is_mono():
        return x.source, identity(x.source), x
    z, epi, inc = image(x, name=f"Im({x.source.name})")
    return z, epi, inc


def _copy(res: AugmentedResolution, **changes) -> AugmentedResolution:
    out = AugmentedResolution(res.target, list(res.terms), list(res.maps), res.direction, res.truncated,
                              list(res.labels), dict(res.flags), dict(res.extras))
    for k, v in changes.items():
        if k == "summands":
            out.extras["summands"] = v
        else:
            setattr(out, k, v)
    return out


def _compose_augmentation(res: AugmentedResolution, q: Morphism) -> AugmentedResolution:
    """Degree 0 of ``res`` followed by the epimorphism ``q`` out of its target.

    An isomorphism ``q`` keeps the whole resolution; otherwise only degree 0
    survives, since the kernel grows.
    """
    if q.source is not res.target:
        raise ValueError("augmentation mismatch")
    if q.is_iso():
        return _copy(res, target=q.target, maps=[q @ res.maps[0]] + res.maps[1:] if res.maps else [],
                     flags={k: UNCHECKED for k in FLAG_KEYS})
    return AugmentedResolution(q.target, res.terms[:1], [q @ res.maps[0]], "resolution", truncated=True,
                               labels=res.labels[:1])


def _iterate_37(C, maps, resolutions, verify, want, step=0):
    """Maps ``X_n -> ... -> X_0 -> X`` (left to right), resolutions of ``X_j``."""
    n = len(maps) - 1
    if n == 0:
        res = _compose_augmentation(resolutions[0], maps[0])
        res.extras["summands"] = [[(step, i)] for i in range(len(res.terms))]
        return res
    x1_map, x0_map = maps[-2], maps[-1]
    z, epi, inc = _image_or_self(x1_map)
    if n == 1 and z is x1_map.source:
        res_z = _copy(resolutions[1], summands=[[(step + 1, i)] for i in range(len(resolutions[1].terms))])
    else:
        res_z = _iterate_37(C, maps[:-2] + [epi], resolutions[1:], False, want, step + 1)
    try:
        con = thm_3_6_construct(C, inc, x0_map, resolutions[0], res_z, verify=False, want=want)
    except HypothesisViolation as exc:
        raise HypothesisViolation(exc.certificate, exc.detail, step=step) from exc
    out = con.resolution
    zs = res_z.extras.get("summands")
    summ = [[(step, 0)]]
    for i in range(1, len(out.terms)):
        part = zs[i - 1] if zs and i - 1 < len(zs) and zs[i - 1] is not None else [("Z", i - 1)]
        summ.append([(step, i)] + list(part))
    out.extras["summands"] = summ
    return out


def _iterate_33(C, maps, resolutions, verify, want, step=0):
    """Maps ``X -> X^0 -> X^1 -> ... -> X^n`` with ``0`` at both ends; returns (res, aux)."""
    n = len(maps) - 1
    if n < 1:
        raise ValueError("the iterated kernel-side construction needs at least two maps")
    if n == 1:
        try:
            con = thm_3_2_construct(C, maps[0], maps[1], resolutions[0], resolutions[1], verify=False, want=want)
        except HypothesisViolation as exc:
            raise HypothesisViolation(exc.certificate, exc.detail, step=step) from exc
        out = con.resolution
        out.extras["summands"] = [None] + [[(step + 1, i + 1), (step, i)] for i in range(1, len(out.terms))]
        aux = [con.bridge.f, con.bridge.g]
        return out, aux
    z, epi, inc = _image_or_self(maps[1])
    if epi.target is not z:
        raise RuntimeError("image factorisation mismatch")
    res_z, aux_z = _iterate_33(C, [inc] + maps[2:], resolutions[1:], False, want, step + 1)
    try:
        con = thm_3_2_construct(C, maps[0], epi, resolutions[0], res_z, verify=False, want=want)
    except HypothesisViolation as exc:
        raise HypothesisViolation(exc.certificate, exc.detail, step=step) from exc
    out = con.resolution
    zs = res_z.extras.get("summands")
    summ = [None]
    for i in range(1, len(out.terms)):
        part = zs[i + 1] if zs and i + 1 < len(zs) and zs[i + 1] is not None else [("Z", i + 1)]
        summ.append(list(part) + [(step, i)])
    out.extras["summands"] = summ
    aux = [con.bridge.f, aux_z[0] @ con.bridge.g] + aux_z[1:]
    return out, aux


ITERATE_MODES = {
    "resolve-right-iterated": "3.7",
    "resolve-left-iterated": "3.3",
    "coresolve-left-iterated": "3.9",
    "coresolve-right-iterated": "3.5",
}


def iterate_construct(mode: str, C: Subcategory, maps: list[Morphism], resolutions: list[AugmentedResolution],
                      verify: bool = True, want=()) -> Construction:
    """Iterated constructions along a long exact sequence.

    ``"3.7"``: ``maps`` are ``X_n -> ... -> X_0 -> X`` and ``resolutions[j]``
    resolves ``X_j``; degree ``k`` of the output is ``sum_i C_i^{k-i}``.
    ``"3.3"``: ``maps`` are ``X -> X^0 -> ... -> X^n`` (exact with zeros at both
    ends); returns the resolution of ``X`` and the auxiliary sequence starting
    at its degree-0 term. ``"3.9"`` and ``"3.5"`` are the coresolution duals.
    Summand bookkeeping in ``extras["summands"]`` lists ``(j, i)`` pairs meaning
    degree ``i`` of ``resolutions[j]``. The descriptive names in
    ``ITERATE_MODES`` are accepted as well.
    """
    mode = ITERATE_MODES.get(mode, mode)
    if mode == "3.7":
        out = _iterate_37(C, maps, resolutions, verify, want)
        if verify:
            verify_resolution(out, C)
        return Construction(out)
    if mode == "3.3":
        out, aux = _iterate_33(C, maps, resolutions, verify, want)
        if verify:
            verify_resolution(out, C)
        return Construction(out, None, aux)
    if mode == "3.9":
        dmaps = [dual_map(f) for f in reversed(maps)]
        dres = [dual_resolution(r) for r in resolutions]
        out = _iterate_37(C.dual(), dmaps, dres, False, want)
        con = _dual_construction(Construction(out), C, verify)
        con.resolution.extras["summands"] = out.extras["summands"]
        return con
    if mode == "3.5":
        dmaps = [dual_map(f) for f in reversed(maps)]
        dres = [dual_resolution(r) for r in resolutions]
        out, aux = _iterate_33(C.dual(), dmaps, dres, False, want)
        con = _dual_construction(Construction(out, None, aux), C, verify)
        con.resolution.extras["summands"] = out.extras["summands"]
        return con
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- shape checks


def flat_sum(parts: list[Module]) -> Module:
    if not parts:
        raise ValueError("empty summand list")
    if len(parts) == 1:
        return parts[0]
    return direct_sum(parts).module


def shape_matches(term: Module, parts: list[Module]) -> bool:
    """``term`` is isomorphic to the direct sum of ``parts`` (exact block match first)."""
    from .modcat import find_isomorphism

    nonzero = [p for p in parts if p.dim]
    if not nonzero:
        return term.dim == 0
    flat = flat_sum(nonzero)
    if flat.action.shape == term.action.shape and np.array_equal(flat.action, term.action):
        return True
    return find_isomorphism(term, flat) is not None


# ---------------------------------------------------------------- middle terms and sums


def horseshoe_resolution(C: Subcategory, f: Morphism, g: Morphism, res_a: AugmentedResolution,
                         res_c: AugmentedResolution, verify: bool = True) -> AugmentedResolution:
    """Resolution of the middle term of ``0 -> A -f-> B -g-> C -> 0`` with terms ``L_i + R_i``."""
    _check_ses(f, g)
    if res_a.target is not f.source or res_c.target is not g.target:
        raise ValueError("resolutions do not match the short exact sequence")
    top = _finite_top((res_a.top, len(res_a.terms) - 1), (res_c.top, len(res_c.terms) - 1))
    if top < 0:
        raise HypothesisViolation("length", "both resolutions are empty")
    tower = horseshoe_tower(f, g, res_a, res_c, top, tags=("left", "right"))
    out = AugmentedResolution(f.target, tower.terms, tower.maps, "resolution",
                              truncated=tower.W[-1].dim > 0,
                              labels=[f"L_{i}+R_{i}" for i in range(top + 1)])
    out.extras.update(summands=[[("left", i), ("right", i)] for i in range(top + 1)],
                      W=tower.W, W_ses=tower.W_ses)
    if verify:
        verify_resolution(out, C)
    return out


def horseshoe_coresolution(C: Subcategory, f: Morphism, g: Morphism, cores_a: AugmentedResolution,
                           cores_c: AugmentedResolution, verify: bool = True) -> AugmentedResolution:
    """Coresolution of the middle term, obtained by dualising :func:`horseshoe_resolution`."""
    res = horseshoe_resolution(C.dual(), dual_map(g), dual_map(f), dual_resolution(cores_c),
                               dual_resolution(cores_a), verify=False)
    out = dual_resolution(res)
    out.flags = {k: UNCHECKED for k in FLAG_KEYS}
    out.extras["summands"] = [[("left", i), ("right", i)] for i in range(len(out.terms))]
    if verify:
        verify_resolution(out, C)
    return out


def _block_diagonal(mats, p):
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = la.zeros(rows, cols, p)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def resolution_sum(parts: list[AugmentedResolution], target: Module | None = None) -> AugmentedResolution:
    """Degreewise direct sum of (co)resolutions sharing a direction.

    The window length is the shortest truncated one, or the longest when all
    are finite. ``target`` may supply an existing direct sum object for the
    targets (its action must equal the block-diagonal sum).
    """
    direction = parts[0].direction
    if any(r.direction != direction for r in parts):
        raise ValueError("cannot add a resolution to a coresolution")
    tgt = direct_sum([r.target for r in parts]).module
    if target is not None:
        if not np.array_equal(target.action, tgt.action):
            raise ValueError("target is not the block sum of the given targets")
        tgt = target
    top = _finite_top(*[(r.top, len(r.terms) - 1) for r in parts])
    p = tgt.p
    terms, maps = [], []
    for i in range(top + 1):
        terms.append(direct_sum([r.term(i) for r in parts]).module)
        mats = [r.map(i).matrix for r in parts]
        src, dst = (terms[i], tgt if i == 0 else terms[i - 1])
        if direction == "coresolution":
            src, dst = dst, src
        maps.append(Morphism(src, dst, _block_diagonal(mats, p)))
    truncated = any(r.truncated and len(r.terms) - 1 <= top for r in parts)
    return AugmentedResolution(tgt, terms, maps, direction, truncated=truncated)
