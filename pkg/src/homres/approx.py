"""Subcategories ``add(T)``, approximations, Hom-exactness and Ext.

Hom-exactness against ``add(T)`` is tested against ``T`` alone: ``Hom(-, -)``
is additive, so a sequence stays exact under ``Hom(T', -)`` for every direct
summand ``T'`` of a power of ``T`` as soon as it does under ``Hom(T, -)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .modcat import (
    HomSpace,
    Module,
    Morphism,
    Verdict,
    PASS,
    direct_sum,
    dual,
    decompose,
    dual_map,
    find_isomorphism,
    hom_dim,
    identity,
    image,
    is_exact,
    kernel,
    lift,
    zero_map,
)


@dataclass(eq=False)
class Subcategory:
    name: str
    generators: list[Module]
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a subcategory needs at least one generator")
        alg = self.generators[0].algebra
        for g in self.generators:
            if not g.algebra.same_as(alg):
                raise ValueError(f"generator {g.name} lives over a different algebra")

    @property
    def algebra(self):
        return self.generators[0].algebra

    @property
    def T(self) -> Module:
        t = self._cache.get("T")
        if t is None:
            if len(self.generators) == 1:
                t = self.generators[0]
            else:
                t = direct_sum(self.generators, name="+".join(g.name for g in self.generators)).module
            self._cache["T"] = t
        return t

    @property
    def indecomposables(self) -> list[Module]:
        """Pairwise non-isomorphic indecomposable summands of the generators.

        A generator that is already indecomposable is used as is, so its name
        and identity are kept.
        """
        out = self._cache.get("indec")
        if out is None:
            out = []
            for g in self.generators:
                parts = decompose(g)
                mods = [g] if len(parts) == 1 else [s.module for s in parts]
                for s in mods:
                    if not any(s.dim == o.dim and find_isomorphism(s, o) for o in out):
                        out.append(s)
            self._cache["indec"] = out
        return out

    def dual(self) -> "Subcategory":
        d = self._cache.get("dual")
        if d is None:
            d = Subcategory(f"D({self.name})", [dual(g) for g in self.generators])
            d._cache["dual"] = self
            self._cache["dual"] = d
        return d

    def __repr__(self):
        return f"Subcategory({self.name})"


def add(*generators: Module, name: str | None = None) -> Subcategory:
    return Subcategory(name or "add(" + ",".join(g.name for g in generators) + ")", list(generators))


def _power(m: Module, r: int) -> Module:
    if r == 0:
        return Module.zero(m.algebra)
    if r == 1:
        return m
    return direct_sum([m] * r, name=f"{m.name}^{r}").module


@dataclass
class Approximation:
    map: Morphism
    epic: bool = False
    monic: bool = False
    summands: list = field(default_factory=list)


def right_approx(C: Subcategory, m: Module) -> Approximation:
    """The evaluation map ``T^r -> m`` with ``r = dim Hom(T, m)``."""
    hs = HomSpace(C.T, m)
    r = hs.dim
    src = _power(C.T, r)
    if r:
        mat = np.concatenate(list(hs.matrices()), axis=1)
    else:
        mat = la.zeros(m.dim, 0, m.p)
    f = Morphism(src, m, mat)
    return Approximation(f, epic=f.is_epi(), summands=[C.T] * r)


def left_approx(C: Subcategory, m: Module) -> Approximation:
    """The coevaluation map ``m -> T^s`` with ``s = dim Hom(m, T)``."""
    hs = HomSpace(m, C.T)
    s = hs.dim
    tgt = _power(C.T, s)
    if s:
        mat = np.concatenate(list(hs.matrices()), axis=0)
    else:
        mat = la.zeros(0, m.dim, m.p)
    f = Morphism(m, tgt, mat)
    return Approximation(f, monic=f.is_mono(), summands=[C.T] * s)


def _hom_coords(t: Module, m: Module, maps: np.ndarray) -> np.ndarray:
    """Columns: the maps ``t -> m`` written as images of the generators of ``t``."""
    g = t.presentation().generators
    if maps.shape[0] == 0:
        return la.zeros(g.shape[1] * m.dim, 0, m.p)
    imgs = np.einsum("hxy,yj->hjx", maps, g) % m.p
    return imgs.reshape(maps.shape[0], -1).T.copy()


def reduced_right_approx(C: Subcategory, m: Module) -> Approximation:
    """An epic-or-not precover built from as few generator maps as needed.

    Candidate maps ``G -> m`` (``G`` an indecomposable summand of a
    generator) are taken in a fixed order and kept when they enlarge the image
    of ``Hom(T, source) -> Hom(T, m)``; the map is a precover once that image
    is all of ``Hom(T, m)``.
    """
    t = C.T
    p = m.p
    target_dim = HomSpace(t, m).dim
    pieces = C.indecomposables
    cands = []
    for gi, g in enumerate(pieces):
        for phi in HomSpace(g, m).matrices():
            ht = HomSpace(t, g).matrices()
            comp = np.einsum("xy,hyz->hxz", phi, ht) % p if len(ht) else np.zeros((0, m.dim, t.dim), dtype=np.int64)
            cols = _hom_coords(t, m, comp)
            cands.append((gi, phi, cols, la.rank(cols, p) if cols.shape[1] else 0))
    # stable order: larger contribution first, then generator and basis order
    order = sorted(range(len(cands)), key=lambda i: -cands[i][3])
    span = la.zeros(t.presentation().k * m.dim, 0, p)
    rank = 0
    chosen = []
    for i in order:
        if rank == target_dim:
            break
        gi, phi, cols, _ = cands[i]
        if cols.shape[1] == 0:
            continue
        trial = np.concatenate([span, cols], axis=1)
        r = la.rank(trial, p)
        if r > rank:
            chosen.append(i)
            span = la.column_basis(trial, p)
            rank = r
    chosen.sort()
    gens = [pieces[cands[i][0]] for i in chosen]
    if gens:
        src = direct_sum(gens, name="+".join(g.name for g in gens)).module if len(gens) > 1 else gens[0]
        mat = np.concatenate([cands[i][1] for i in chosen], axis=1)
    else:
        src = Module.zero(m.algebra)
        mat = la.zeros(m.dim, 0, p)
    f = Morphism(src, m, mat)
    return Approximation(f, epic=f.is_epi(), summands=gens)


def reduced_left_approx(C: Subcategory, m: Module) -> Approximation:
    """Dual of :func:`reduced_right_approx`, computed over the opposite algebra."""
    a = reduced_right_approx(C.dual(), dual(m))
    f = a.map
    tgt = dual(f.source)
    g = Morphism(m, tgt, f.matrix.T.copy())
    return Approximation(g, monic=g.is_mono(), summands=[dual(s) for s in a.summands])


@dataclass
class Membership:
    member: bool
    section: Morphism | None = None
    approximation: Morphism | None = None

    def __bool__(self):
        return self.member


def is_in_add(C: Subcategory, m: Module) -> Membership:
    """``m`` lies in ``add(T)`` iff a precover of ``m`` splits; the witness is the splitting."""
    key = ("add", id(C))
    hit = m._cache.get(key)
    if hit is not None and hit[0] is C:
        return hit[1]
    if m.dim == 0:
        res = Membership(True, zero_map(m, m), identity(m))
    else:
        approx = reduced_right_approx(C, m)
        if not approx.epic:
            res = Membership(False, None, approx.map)
        else:
            s = lift(approx.map, identity(m))
            res = Membership(s is not None, s, approx.map)
    m._cache[key] = (C, res)
    return res


# ---------------------------------------------------------------- Hom-exactness


def _hom_from_rank(t: Module, f: Morphism) -> tuple[int, int]:
    """``(dim Hom(t, source), rank of f_* on it)``."""
    hs = HomSpace(t, f.source)
    if hs.dim == 0:
        return 0, 0
    k = t.presentation().k
    pushed = la.matmul(np.kron(la.identity(k, f.p), f.matrix) % f.p, hs.coords, f.p)
    return hs.dim, la.rank(pushed, f.p)


def is_hom_from_C_exact(C: Subcategory, maps: list[Morphism], positions=None) -> Verdict:
    """Exactness of ``Hom(T, -)`` applied to the sequence, at interior positions."""
    v = is_exact(maps, positions)
    if not v:
        return Verdict(False, "sequence is not exact: " + v.reason, v.position, v.detail)
    t = C.T
    interior = range(1, len(maps)) if positions is None else sorted(positions)
    for i in interior:
        f, g = maps[i - 1], maps[i]
        _, rf = _hom_from_rank(t, f)
        h, rg = _hom_from_rank(t, g)
        if h - rg != rf:
            return Verdict(False, f"Hom(T,-) not exact at position {i}", i,
                           {"image_dim": rf, "kernel_dim": h - rg})
    return PASS


def _dual_sequence(maps: list[Morphism]) -> list[Morphism]:
    return [dual_map(f) for f in reversed(maps)]


def is_hom_into_C_exact(C: Subcategory, maps: list[Morphism], positions=None) -> Verdict:
    """Exactness of ``Hom(-, T)``; computed as ``Hom(DT, D-)`` over the opposite algebra."""
    m = len(maps)
    dpos = None if positions is None else [m - i for i in positions]
    v = is_hom_from_C_exact(C.dual(), _dual_sequence(maps), dpos)
    if v:
        return PASS
    pos = None if v.position is None else m - v.position
    reason = v.reason.replace("Hom(T,-)", "Hom(-,T)")
    reason = reason.rsplit("position", 1)[0] + f"position {pos}" if pos is not None else reason
    return Verdict(False, reason, pos, v.detail)


# ---------------------------------------------------------------- Ext


@dataclass
class ExtTable:
    source: Module
    target: Module
    dims: tuple[int, ...]


def _free_resolution(m: Module, length: int) -> list[tuple[int, np.ndarray]]:
    """Generator counts and differentials of a free resolution of ``m``.

    Entry ``i`` is ``(k_i, c_i)`` where column ``j`` of ``c_i`` is the image of
    the ``j``-th free generator of ``P_i`` in ``P_{i-1} = Lambda^{k_{i-1}}``
    (for ``i = 0`` the image in ``m`` itself).
    """
    cache = m._cache.setdefault("freeres", {"steps": [], "kernel": None})
    steps = cache["steps"]
    alg = m.algebra
    while len(steps) <= length:
        if not steps:
            cur = m
        else:
            cur = cache["kernel"]
        pres = cur.presentation()
        if not steps:
            steps.append((pres.k, pres.generators.copy()))
        else:
            inc = cache["inc"]
            steps.append((pres.k, la.matmul(inc, pres.generators, m.p)))
        free = alg.free_module(pres.k)
        ker, incm = kernel(Morphism(free, cur, pres.cover))
        cache["kernel"] = ker
        cache["inc"] = incm.matrix
    return steps[: length + 1]


def _cochain(n: Module, k_prev: int, k_cur: int, c: np.ndarray, d: int) -> np.ndarray:
    """``Hom(P_{i-1}, n) -> Hom(P_i, n)`` in generator-image coordinates."""
    if k_prev == 0 or k_cur == 0 or n.dim == 0:
        return la.zeros(k_cur * n.dim, k_prev * n.dim, n.p)
    cc = c.reshape(k_prev, d, k_cur)
    out = np.einsum("lbj,bxy->jxly", cc, n.action).reshape(k_cur * n.dim, k_prev * n.dim)
    return out % n.p


def ext_dims(m: Module, n: Module, upto: int) -> ExtTable:
    """``dim Ext^i(m, n)`` for ``i = 0..upto`` from a free resolution of ``m``."""
    if not m.algebra.same_as(n.algebra):
        raise ValueError("Ext between modules over different algebras")
    steps = _free_resolution(m, upto + 1)
    d = m.algebra.dim
    p = m.p
    ranks = [0]
    for i in range(1, upto + 2):
        k_prev, k_cur = steps[i - 1][0], steps[i][0]
        mat = _cochain(n, k_prev, k_cur, steps[i][1], d)
        ranks.append(la.rank(mat, p) if mat.size else 0)
    dims = []
    for i in range(upto + 1):
        cochains = steps[i][0] * n.dim
        dims.append(cochains - ranks[i + 1] - ranks[i])
    return ExtTable(m, n, tuple(dims))


def ext1(m: Module, n: Module) -> int:
    return ext_dims(m, n, 1).dims[1]


def ext1_into(m: Module, t: Module) -> int:
    """``dim Ext^1(m, t)`` computed as ``Ext^1(Dt, Dm)`` so the resolution of ``t`` is reused."""
    return ext1(dual(t), dual(m))


# ---------------------------------------------------------------- strong exactness


def is_strongly_exact(C: Subcategory, maps: list[Morphism], side: str = "from") -> Verdict:
    """Ext^1 vanishing on the interior kernels of an augmented (co)resolution.

    For ``side="from"`` the maps are ``X_n -> ... -> X_0 -> M`` (in that order)
    and the kernels are ``K_i = Im(X_i -> X_{i-1})`` for ``i >= 1``; the test is
    ``Ext^1(T, K_i) = 0``. For ``side="into"`` the maps are
    ``M -> X^0 -> ... -> X^n``, the kernels are ``K^i = Im(X^{i-1} -> X^i)``
    and the test is ``Ext^1(K^i, T) = 0``.
    """
    v = is_exact(maps)
    if not v:
        return Verdict(False, "sequence is not exact: " + v.reason, v.position, v.detail)
    t = C.T
    if side == "from":
        diffs = maps[:-1]  # X_n -> X_{n-1}, ..., X_1 -> X_0
        for i, d in enumerate(reversed(diffs), start=1):
            k, _, _ = image(d)
            e = ext1(t, k)
            if e:
                return Verdict(False, f"Ext^1(T, K_{i}) has dimension {e}", i, {"ext1": e})
        return PASS
    if side == "into":
        diffs = maps[1:]  # X^0 -> X^1, ...
        for i, d in enumerate(diffs, start=1):
            k, _, _ = image(d)
            e = ext1_into(k, t)
            if e:
                return Verdict(False, f"Ext^1(K^{i}, T) has dimension {e}", i, {"ext1": e})
        return PASS
    raise ValueError(f"unknown side {side!r}")


def hom_dim_T(C: Subcategory, m: Module) -> int:
    return hom_dim(C.T, m)
