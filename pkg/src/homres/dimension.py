"""Syzygy swapping along generators and cogenerators, and dimension reports.

Exact sequences are passed as lists of maps in left-to-right order, without
the zero objects at the ends: ``0 -> A -> C_1 -> C_0 -> M -> 0`` is
``[A -> C_1, C_1 -> C_0, C_0 -> M]``.

Membership in the ambient class ``C`` is either ``add(T)`` (a
:class:`Subcategory`) or the Gorenstein class of some ``add(T)``
(:class:`GorensteinClass`, tested to a fixed depth). "Closed under extensions"
is never assumed globally: each object produced by an extension in a chase is
tested for membership on the spot.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .approx import (
    Subcategory,
    ext1,
    ext_dims,
    is_in_add,
    reduced_left_approx,
    reduced_right_approx,
)
from .gorenstein import Orthogonality, g_membership, self_orthogonality
from .modcat import (
    Module,
    Morphism,
    Verdict,
    cokernel,
    dual,
    dual_map,
    identity,
    image,
    is_exact,
    kernel,
    pullback,
    pushout,
    zero_map,
)
from .resolve import (
    INF,
    AugmentedResolution,
    HypothesisViolation,
    Obstruction,
    ShortExactSeq,
    build_proper_resolution,
    dual_resolution,
)


class MissingWitness(Exception):
    def __init__(self, module: Module, side: str, detail: str = ""):
        self.module = module
        self.side = side
        super().__init__(f"no {side} witness for {module.name or 'module'}" + (f": {detail}" if detail else ""))


# ---------------------------------------------------------------- membership oracles


@dataclass(eq=False)
class GorensteinClass:
    """Modules verified to have a complete ``X``-resolution to a fixed depth."""

    X: Subcategory
    depth: int = 3
    _seen: list = field(default_factory=list)

    @property
    def name(self) -> str:
        return f"G({self.X.name})"

    def contains(self, m: Module) -> bool:
        if m.dim == 0:
            return True
        for obj, ans in self._seen:
            if obj is m:
                return ans
        ans = g_membership(self.X, m, self.depth).verified
        self._seen.append((m, ans))
        return ans

    def dual(self) -> "GorensteinClass":
        return GorensteinClass(self.X.dual(), self.depth)


def contains(C, m: Module) -> bool:
    if m.dim == 0:
        return True
    if isinstance(C, Subcategory):
        return bool(is_in_add(C, m))
    return C.contains(m)


def _dual_class(C):
    return C.dual()


# ---------------------------------------------------------------- sequence helpers


def _zero(alg):
    return Module.zero(alg)


def sequence_exact(maps: list[Morphism]) -> Verdict:
    """Exactness of ``0 -> ... -> 0`` built from ``maps`` (zero ends added)."""
    alg = maps[0].source.algebra
    z = _zero(alg)
    seq = [zero_map(z, maps[0].source)] + list(maps) + [zero_map(maps[-1].target, z)]
    return is_exact(seq)


def pullback_factor(p1: Morphism, p2: Morphism, u: Morphism, v: Morphism) -> Morphism:
    """The map ``h`` into a pullback with ``p1 h = u`` and ``p2 h = v``."""
    p = p1.p
    stacked = np.concatenate([p1.matrix, p2.matrix], axis=0)
    rhs = np.concatenate([u.matrix, v.matrix], axis=0)
    if p1.source.dim == 0:
        if rhs.any():
            raise ValueError("maps do not factor through the pullback")
        return zero_map(u.source, p1.source)
    h = la.matmul(la.left_inverse(stacked, p), rhs, p)
    if not np.array_equal(la.matmul(stacked, h, p), rhs % p):
        raise ValueError("maps do not factor through the pullback")
    return Morphism(u.source, p1.source, h)


def pushout_factor(q1: Morphism, q2: Morphism, u: Morphism, v: Morphism) -> Morphism:
    """The map ``h`` out of a pushout with ``h q1 = u`` and ``h q2 = v``."""
    d = pullback_factor(dual_map(q1), dual_map(q2), dual_map(u), dual_map(v))
    return Morphism(q1.target, u.target, d.matrix.T.copy())


def _dual_seq(maps: list[Morphism]) -> list[Morphism]:
    return [dual_map(f) for f in reversed(maps)]


# ---------------------------------------------------------------- generator / cogenerator pairs


@dataclass(eq=False)
class GenCogenPair:
    """Ambient class ``C`` with a generator ``gen`` and a cogenerator ``cogen``.

    Explicit witnesses may be supplied as short exact sequences; otherwise
    (``auto=True``) they are produced from approximations and checked.
    """

    C: object
    gen: Subcategory
    cogen: Subcategory
    gen_witnesses: list = field(default_factory=list)
    cogen_witnesses: list = field(default_factory=list)
    auto: bool = True

    @property
    def name(self) -> str:
        return self.C.name

    def gen_witness(self, m: Module) -> ShortExactSeq:
        """``0 -> C' -> P -> m -> 0`` with ``P`` in ``gen`` and ``C'`` in ``C``."""
        for w in self.gen_witnesses:
            if w.g.target is m:
                return w
        if not self.auto:
            raise MissingWitness(m, "generator")
        if m.dim == 0 or is_in_add(self.gen, m):
            return ShortExactSeq(zero_map(_zero(m.algebra), m), identity(m))
        ap = reduced_right_approx(self.gen, m)
        if not ap.epic:
            raise MissingWitness(m, "generator", "no epimorphism from the generator")
        k, inc = kernel(ap.map, name=f"K({m.name})")
        if not contains(self.C, k):
            raise MissingWitness(m, "generator", "kernel leaves the class")
        return ShortExactSeq(inc, ap.map)

    def cogen_witness(self, m: Module) -> ShortExactSeq:
        """``0 -> m -> I -> C' -> 0`` with ``I`` in ``cogen`` and ``C'`` in ``C``."""
        for w in self.cogen_witnesses:
            if w.f.source is m:
                return w
        if not self.auto:
            raise MissingWitness(m, "cogenerator")
        if m.dim == 0 or is_in_add(self.cogen, m):
            return ShortExactSeq(identity(m), zero_map(m, _zero(m.algebra)))
        ap = reduced_left_approx(self.cogen, m)
        if not ap.monic:
            raise MissingWitness(m, "cogenerator", "no monomorphism into the cogenerator")
        q, proj = cokernel(ap.map, name=f"Q({m.name})")
        if not contains(self.C, q):
            raise MissingWitness(m, "cogenerator", "cokernel leaves the class")
        return ShortExactSeq(ap.map, proj)

    def dual(self) -> "GenCogenPair":
        gw = [ShortExactSeq(dual_map(w.g), dual_map(w.f)) for w in self.cogen_witnesses]
        cw = [ShortExactSeq(dual_map(w.g), dual_map(w.f)) for w in self.gen_witnesses]
        return GenCogenPair(_dual_class(self.C), self.cogen.dual(), self.gen.dual(), gw, cw, self.auto)


# ---------------------------------------------------------------- rebuilding four-term sequences


@dataclass
class Rebuild:
    maps: list[Morphism]
    side: str
    exact: Verdict
    memberships: dict

    @property
    def ok(self) -> bool:
        return bool(self.exact) and all(self.memberships.values())

    def __bool__(self):
        return self.ok


def _check_in(C, m: Module, what: str):
    if not contains(C, m):
        raise HypothesisViolation(what, f"{m.name or 'module'} (dim {m.dim}) is not in {C.name}")


def _rebuild_gen(pair: GenCogenPair, a: Morphism, f: Morphism, c: Morphism) -> list[Morphism]:
    c0 = f.target
    w = pair.gen_witness(c0)
    im, f_epi, f_inc = image(f)
    n, n1, n2 = pullback(w.g, f_inc, name="N")
    c1p, q1, q2 = pullback(f_epi, n2, name="C1'")
    a_new = pullback_factor(q1, q2, a, zero_map(a.source, n))
    return [a_new, n1 @ q2, c @ w.g]


def prop_5_1_rebuild(pair: GenCogenPair, seq: list[Morphism], side: str = "gen") -> Rebuild:
    """Replace ``C_0`` by a generator (or ``C_1`` by a cogenerator) in ``0 -> A -> C_1 -> C_0 -> M -> 0``.

    Generator side: pull the witness ``0 -> C_0' -> P_0 -> C_0 -> 0`` back
    along ``Im f -> C_0`` and then along ``C_1 -> Im f``, giving
    ``0 -> A -> C_1' -> P_0 -> M -> 0``. The cogenerator side is the dual
    construction with pushouts, giving ``0 -> A -> I_1 -> C_0' -> M -> 0``.
    """
    if len(seq) != 3:
        raise ValueError("expected three maps A -> C_1 -> C_0 -> M")
    a, f, c = seq
    v = sequence_exact(seq)
    if not v:
        raise HypothesisViolation("input exact", v.reason, v.position)
    _check_in(pair.C, f.source, "C_1 in C")
    _check_in(pair.C, f.target, "C_0 in C")
    if side == "gen":
        maps = _rebuild_gen(pair, a, f, c)
        new_c = maps[1].source
        members = {"C_1' in C": contains(pair.C, new_c), "P_0 in gen": contains(pair.gen, maps[1].target)}
        if not members["C_1' in C"]:
            raise HypothesisViolation("closed under extensions", f"C_1' (dim {new_c.dim}) is not in {pair.C.name}")
    elif side == "cogen":
        dpair = pair.dual()
        dmaps = _rebuild_gen(dpair, *_dual_seq(seq))
        maps = _dual_seq(dmaps)
        new_c = maps[1].target
        members = {"I_1 in cogen": contains(pair.cogen, maps[1].source), "C_0' in C": contains(pair.C, new_c)}
        if not members["C_0' in C"]:
            raise HypothesisViolation("closed under extensions", f"C_0' (dim {new_c.dim}) is not in {pair.C.name}")
    else:
        raise ValueError(f"unknown side {side!r}")
    return Rebuild(maps, side, sequence_exact(maps), members)


# ---------------------------------------------------------------- syzygy swap


@dataclass
class Swap:
    sequence: list[Morphism]
    connecting: ShortExactSeq
    side: str
    exact: Verdict
    memberships: dict

    @property
    def ok(self) -> bool:
        return bool(self.exact) and bool(self.connecting.verdict) and all(self.memberships.values())

    def __bool__(self):
        return self.ok


def _swap_cogen(pair: GenCogenPair, maps: list[Morphism]):
    n = len(maps) - 1
    if n == 1:
        a, c0 = maps
        w = pair.cogen_witness(c0.source)
        nmod, q1, q2 = pushout(w.f, c0, name="N")
        to_x = pushout_factor(q1, q2, w.g, zero_map(c0.target, w.g.target))
        return [w.f @ a, q1], ShortExactSeq(q2, to_x)
    a, c_top, c_next = maps[0], maps[1], maps[2]
    k, e, inc_k = image(c_next, name="K")
    r = prop_5_1_rebuild(pair, [a, c_top, e], "cogen")
    a_new, f_new, c_new = r.maps
    ap, ep, inc_ap = image(f_new, name="A'")
    sub, ses = _swap_cogen(pair, [inc_ap, inc_k @ c_new] + maps[3:])
    return [a_new, sub[0] @ ep] + sub[1:], ses


def thm_5_3_swap(pair: GenCogenPair, seq: list[Morphism], side: str = "cogen") -> Swap:
    """Swap the middle terms of ``0 -> A -> C_{n-1} -> ... -> C_0 -> M -> 0``.

    ``side="cogen"`` returns ``0 -> A -> I_{n-1} -> ... -> I_0 -> N -> 0`` with
    every ``I_i`` in the cogenerator, plus ``0 -> M -> N -> X -> 0`` with ``X``
    in ``C``. ``side="gen"`` returns ``0 -> B -> P_{n-1} -> ... -> P_0 -> M -> 0``
    plus ``0 -> Y -> B -> A -> 0``.
    """
    if len(seq) < 2:
        raise ValueError("need at least A -> C_0 -> M")
    v = sequence_exact(seq)
    if not v:
        raise HypothesisViolation("input exact", v.reason, v.position)
    for f in seq[1:]:
        _check_in(pair.C, f.source, "middle terms in C")
    if side == "cogen":
        out, ses = _swap_cogen(pair, seq)
        middles = [f.target for f in out[:-1]]
        members = {f"I_{len(middles) - 1 - i} in cogen": contains(pair.cogen, t) for i, t in enumerate(middles)}
        members["X in C"] = contains(pair.C, ses.g.target)
    elif side == "gen":
        dout, dses = _swap_cogen(pair.dual(), _dual_seq(seq))
        out = _dual_seq(dout)
        ses = ShortExactSeq(dual_map(dses.g), dual_map(dses.f))
        middles = [f.source for f in out[1:]]
        members = {f"P_{len(middles) - 1 - i} in gen": contains(pair.gen, t) for i, t in enumerate(middles)}
        members["Y in C"] = contains(pair.C, ses.f.source)
    else:
        raise ValueError(f"unknown side {side!r}")
    return Swap(out, ses, side, sequence_exact(out), members)


# ---------------------------------------------------------------- mixed witnesses


@dataclass
class Witness:
    maps: list[Morphism]  # X_n -> X_{n-1}, ..., X_0 -> M
    t: int
    exact: Verdict
    memberships: dict

    @property
    def terms(self) -> list[Module]:
        """``[X_n, ..., X_0]``."""
        return [f.source for f in self.maps]

    @property
    def ok(self) -> bool:
        return bool(self.exact) and all(self.memberships.values())

    def __bool__(self):
        return self.ok


def _pad(maps: list[Morphism], n: int) -> list[Morphism]:
    """Prefix zero objects so that ``maps`` describes ``n + 1`` terms."""
    if len(maps) > n + 1:
        raise ValueError(f"sequence longer than {n}")
    if len(maps) == n + 1:
        return list(maps)
    alg = maps[0].source.algebra
    z = _zero(alg)
    out = [zero_map(z, maps[0].source)]
    while len(out) + len(maps) < n + 1:
        out.insert(0, zero_map(z, z))
    return out + list(maps)


def resolution_witness(pair: GenCogenPair, m: Module, n: int) -> list[Morphism]:
    """A sequence ``0 -> C_n -> ... -> C_0 -> m -> 0`` with terms in ``C``, if one is found.

    For ``add(T)`` this is the proper resolution; for a Gorenstein class it is
    the ``X``-resolution cut at degree ``n`` with its kernel as the last term.
    """
    C = pair.C
    if isinstance(C, Subcategory):
        res = build_proper_resolution(C, m, n, verify=False)
        if res.truncated:
            raise ValueError(f"no C-resolution of length {n} found for {m.name}")
        return _pad(list(reversed(res.maps)), n)
    res = build_proper_resolution(C.X, m, max(n - 1, 0), verify=False)
    maps = list(reversed(res.maps))
    if res.truncated and n >= 1:
        k, inc = kernel(maps[0])
        if not contains(C, k):
            raise ValueError(f"the {n}-th syzygy of {m.name} is not in {C.name}")
        maps = [inc] + maps
    elif res.truncated and n == 0:
        if not contains(C, m):
            raise ValueError(f"{m.name} is not in {C.name}")
        maps = [identity(m)]
    return _pad(maps, n)


def _witness(pair: GenCogenPair, maps: list[Morphism], t: int) -> list[Morphism]:
    n = len(maps) - 1
    if n == 0:
        return list(maps)
    if n == 1:
        c1, c0 = maps
        z = _zero(c1.source.algebra)
        seq = [zero_map(z, c1.source), c1, c0]
        r = prop_5_1_rebuild(pair, seq, "gen" if t == 1 else "cogen")
        return r.maps[1:]
    if t >= 1:
        a, e2, inc_a = image(maps[-3], name="A")
        r = prop_5_1_rebuild(pair, [inc_a, maps[-2], maps[-1]], "gen")
        a_new, f_new, c_new = r.maps
        nmod, q, inc_n = image(f_new, name="N")
        sub = _witness(pair, maps[:-3] + [a_new @ e2, q], t - 1)
        return sub[:-1] + [inc_n @ sub[-1], c_new]
    b, e1, inc_b = image(maps[-2], name="B")
    sub = _witness(pair, maps[:-2] + [e1], 0)
    x2_map, y = sub[-2], sub[-1]
    k, e, inc_k = image(x2_map, name="K")
    r = prop_5_1_rebuild(pair, [inc_k, inc_b @ y, maps[-1]], "cogen")
    a_new, f_new, c_new = r.maps
    return sub[:-2] + [a_new @ e, f_new, c_new]


def thm_5_5_witness(pair: GenCogenPair, m: Module, n: int, t: int, witness: list[Morphism] | None = None) -> Witness:
    """``0 -> X_n -> ... -> X_0 -> m -> 0`` with ``X_t`` in ``C`` and the rest in the generator-cogenerator.

    ``witness`` is a length-``n`` C-resolution given as maps; by default one
    is produced by :func:`resolution_witness`.
    """
    if not 0 <= t <= n:
        raise ValueError(f"t = {t} is outside 0..{n}")
    if witness is None:
        witness = resolution_witness(pair, m, n)
    if len(witness) != n + 1 or witness[-1].target is not m:
        raise ValueError("witness does not describe a length-n resolution of m")
    v = sequence_exact(witness)
    if not v:
        raise HypothesisViolation("witness exact", v.reason, v.position)
    maps = _witness(pair, witness, t)
    terms = [f.source for f in maps]
    members = {}
    for idx, x in enumerate(terms):
        i = n - idx
        if i == t:
            members[f"X_{i} in C"] = contains(pair.C, x)
        else:
            members[f"X_{i} in X"] = contains(pair.gen, x) or contains(pair.cogen, x)
    return Witness(maps, t, sequence_exact(maps), members)


def thm_5_5_cowitness(pair: GenCogenPair, m: Module, n: int, t: int) -> Witness:
    """Dual form ``0 -> m -> X^0 -> ... -> X^n -> 0`` via ``D``."""
    dpair = pair.dual()
    w = thm_5_5_witness(dpair, dual(m), n, t)
    maps = _dual_seq(w.maps)
    terms = [f.target for f in maps]
    members = {}
    for i, x in enumerate(terms):
        if i == t:
            members[f"X^{i} in C"] = contains(pair.C, x)
        else:
            members[f"X^{i} in X"] = contains(pair.gen, x) or contains(pair.cogen, x)
    return Witness(maps, t, sequence_exact(maps), members)


# ---------------------------------------------------------------- reports


@dataclass
class DimensionReport:
    module: str
    subcategory: str
    kind: str
    bound: int
    lower: float
    upper: float | None  # None: unknown beyond the bound
    ext_lower: int = 0
    witness: AugmentedResolution | None = None
    values: dict = field(default_factory=dict)
    agree: bool = True
    notes: list = field(default_factory=list)

    @property
    def value(self):
        if self.upper is not None and self.lower == self.upper:
            return self.upper
        return None

    def _fmt(self, v):
        if v is None:
            return f"unknown beyond {self.bound}"
        if v == INF:
            return "infinite"
        return str(int(v))

    def render(self) -> str:
        lines = [f"{self.kind} of {self.module} in {self.subcategory}",
                 f"  lower: {self._fmt(self.lower)}",
                 f"  upper: {self._fmt(self.upper)}"]
        if self.value is not None:
            lines.append(f"  value: {self._fmt(self.value)}")
        if self.ext_lower:
            lines.append(f"  ext lower: {self.ext_lower}")
        for k, v in sorted(self.values.items()):
            lines.append(f"  {k}: {self._fmt(v)}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        def enc(v):
            if v is None:
                return None
            return "inf" if v == INF else int(v)

        return {
            "module": self.module,
            "subcategory": self.subcategory,
            "kind": self.kind,
            "bound": self.bound,
            "lower": enc(self.lower),
            "upper": enc(self.upper),
            "ext_lower": self.ext_lower,
            "value": enc(self.value),
            "values": {k: enc(v) for k, v in sorted(self.values.items())},
            "agree": self.agree,
            "notes": list(self.notes),
            "witness_dims": self.witness.dims() if self.witness is not None else [],
        }


def _ext_sup(m: Module, t: Module, bound: int) -> int:
    dims = ext_dims(m, t, bound).dims
    top = 0
    for i in range(1, bound + 1):
        if dims[i]:
            top = i
    return top


def c_dim_report(C: Subcategory, m: Module, bound: int, orthogonal: Orthogonality | None = None) -> DimensionReport:
    """Bounds on the ``C``-dimension of ``m``.

    Upper: length of a proper resolution that ends within ``bound``. Lower:
    0 or 1 from membership, raised to the top nonvanishing ``Ext^i(m, T)`` when
    ``C`` is self-orthogonal.
    """
    name = m.name or "M"
    if m.dim == 0:
        return DimensionReport(name, C.name, "C-dim", bound, 0, 0)
    notes = []
    witness = None
    try:
        res = build_proper_resolution(C, m, bound)
        upper = None if res.truncated else len(res.terms) - 1
        witness = res
        if upper is None:
            notes.append(f"proper resolution does not end within {bound} steps")
    except Obstruction as exc:
        upper = INF
        notes.append(f"no epimorphism from add(T) (step {exc.step})")
    lower = 0 if is_in_add(C, m) else 1
    if upper == INF:
        lower = INF
    ext_lower = 0
    if orthogonal is None:
        orthogonal = self_orthogonality(C, bound)
    if orthogonal and upper != INF:
        ext_lower = _ext_sup(m, C.T, bound)
        lower = max(lower, ext_lower)
    elif not orthogonal:
        notes.append("C is not self-orthogonal; no Ext lower bound")
    return DimensionReport(name, C.name, "C-dim", bound, lower, upper, ext_lower, witness, notes=notes)


def codim_report(C: Subcategory, m: Module, bound: int) -> DimensionReport:
    """Dual of :func:`c_dim_report`, computed over the opposite algebra."""
    r = c_dim_report(C.dual(), dual(m), bound)
    r.module = m.name or "M"
    r.subcategory = C.name
    r.kind = "C-codim"
    if r.witness is not None:
        r.witness = dual_resolution(r.witness)
    r.notes = [n.replace("epimorphism from", "monomorphism into").replace("resolution", "coresolution")
               for n in r.notes]
    return r


def gdim_report(X: Subcategory, m: Module, bound: int, orthogonal: Orthogonality | None = None,
                depth: int = 3) -> DimensionReport:
    """Gorenstein dimension relative to a self-orthogonal ``X``.

    The candidate is the top degree ``1 <= i <= bound`` with
    ``Ext^i(m, T) != 0`` (0 if none), valid under the caller's assertion that
    the Gorenstein dimension is finite. It is cross-checked against the
    ``X``-dimension upper bound and against membership of the candidate-th
    syzygy in the Gorenstein class.
    """
    name = m.name or "M"
    if orthogonal is None:
        orthogonal = self_orthogonality(X, bound + 1)
    notes = ["finite Gorenstein dimension asserted by caller"]
    if m.dim == 0:
        return DimensionReport(name, X.name, "G-dim", bound, 0, 0, values={"ext": 0, "witness": 0}, notes=notes)
    if not orthogonal:
        notes.append(f"{X.name} is not self-orthogonal: {orthogonal.counterexample}")
        return DimensionReport(name, X.name, "G-dim", bound, 0, None, notes=notes, agree=False)
    cand = _ext_sup(m, X.T, bound)
    if cand == bound:
        notes.append("Ext is nonzero at the bound; the candidate may be too small")
    values = {"ext": cand}
    xr = c_dim_report(X, m, bound, orthogonal)
    if xr.upper is not None and xr.upper != INF:
        values["x_dim"] = xr.upper
    if cand == 0:
        syz = m
    else:
        res = build_proper_resolution(X, m, cand - 1, verify=False)
        syz = kernel(res.maps[-1])[0] if res.truncated else _zero(m.algebra)
    gm = g_membership(X, syz, depth)
    if gm.verified:
        values["witness"] = cand
    else:
        notes.append(f"syzygy {cand} not verified in G({X.name}): {gm.verdict}")
    agree = len(set(values.values())) == 1
    if not agree:
        notes.append("disagreement between " + ", ".join(f"{k}={v}" for k, v in sorted(values.items())))
    upper = cand if gm.verified else values.get("x_dim")
    return DimensionReport(name, X.name, "G-dim", bound, cand, upper, cand, xr.witness, values, agree, notes)


def g_codim_report(X: Subcategory, m: Module, bound: int, depth: int = 3) -> DimensionReport:
    r = gdim_report(X.dual(), dual(m), bound, depth=depth)
    r.module, r.subcategory, r.kind = m.name or "M", X.name, "G-codim"
    if r.witness is not None:
        r.witness = dual_resolution(r.witness)
    return r


# ---------------------------------------------------------------- approximation by Gorenstein objects


@dataclass
class GPrecover:
    approx_ses: ShortExactSeq  # 0 -> N -> G -> M -> 0
    embed_ses: ShortExactSeq   # 0 -> M -> N' -> G' -> 0
    n: int
    ext_checks: dict
    n_dim: float | None
    n_prime_dim: float | None

    @property
    def precover(self) -> bool:
        return all(v == 0 for v in self.ext_checks.values())


def cor_5_12_sequences(X: Subcategory, m: Module, report: DimensionReport, g_objects: list[Module],
                       depth: int = 3, bound: int = 4) -> GPrecover:
    """``0 -> N -> G -> M -> 0`` and ``0 -> M -> N' -> G' -> 0`` from a finite Gorenstein dimension.

    The first sequence comes from the mixed witness with the Gorenstein term
    in degree 0; its precover property is checked as ``Ext^1(G', N) = 0`` for
    every ``G'`` in ``g_objects``. The second comes from the cogenerator swap
    applied to a Gorenstein resolution of length ``n`` with ``A = 0``.
    """
    n = report.value
    if n is None or n == INF:
        raise HypothesisViolation("finite Gorenstein dimension", report.render())
    n = int(n)
    G = GorensteinClass(X, depth)
    pair = GenCogenPair(G, X, X)
    if n == 0:
        z = _zero(m.algebra)
        approx = ShortExactSeq(zero_map(z, m), identity(m))
    else:
        w = thm_5_5_witness(pair, m, n, 0)
        if not w:
            raise HypothesisViolation("mixed witness", str(w.memberships))
        g0 = w.maps[-1]
        nmod, inc = kernel(g0, name="N")
        approx = ShortExactSeq(inc, g0)
    gres = resolution_witness(pair, m, n)
    z = _zero(m.algebra)
    swap = thm_5_3_swap(pair, [zero_map(z, gres[0].source)] + gres, "cogen")
    embed = swap.connecting
    checks = {g.name: ext1(g, approx.f.source) for g in g_objects}
    n_dim = c_dim_report(X, approx.f.source, bound).upper
    np_dim = c_dim_report(X, embed.f.target, bound).upper
    return GPrecover(approx, embed, n, checks, n_dim, np_dim)
