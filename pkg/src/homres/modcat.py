"""Finite-dimensional modules over a finite-dimensional algebra over GF(p).

An algebra is given by structure constants ``mult[i, j, k]`` meaning
``e_i e_j = sum_k mult[i, j, k] e_k``. A left module of dimension ``n`` is a
stack of ``d`` matrices ``action[i]`` (each ``n x n``) for the basis elements.
A morphism ``M -> N`` is a ``dim N x dim M`` matrix commuting with the actions.

Hom spaces are computed from a presentation of the source: a generating set
``m_1..m_k`` gives a surjection ``Lambda^k -> M`` and a morphism out of ``M`` is
the same thing as a choice of images ``w_j`` killing the relations. This keeps
the linear systems at size ``k * dim N`` instead of ``dim M * dim N``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la


@dataclass
class Verdict:
    """Outcome of a check: ``ok`` plus a reason and optional location."""

    ok: bool
    reason: str = ""
    position: int | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def as_dict(self):
        out = {"ok": self.ok}
        if self.reason:
            out["reason"] = self.reason
        if self.position is not None:
            out["position"] = self.position
        if self.detail:
            out["detail"] = self.detail
        return out


PASS = Verdict(True)


# ---------------------------------------------------------------- algebras


def _paths(vertices, arrows):
    """All paths of an acyclic quiver, vertices first, then by length."""
    out = [("v", v) for v in vertices]
    layer = [((a,), arrows[a][0], arrows[a][1]) for a in range(len(arrows))]
    while layer:
        out.extend(("p", path) for path, _, _ in layer)
        nxt = []
        for path, s, t in layer:
            for a, (s2, t2) in enumerate(arrows):
                if s2 == t:
                    nxt.append((path + (a,), s, t2))
        if len(out) > 512:
            raise ValueError("quiver has too many paths (is it acyclic?)")
        layer = nxt
    return out


@dataclass(eq=False)
class Algebra:
    name: str
    p: int
    mult: np.ndarray
    unit: np.ndarray
    basis_names: list[str] = None
    presentation: dict | None = None
    radical: np.ndarray | None = field(default=None, repr=False)
    _opposite: "Algebra | None" = field(default=None, repr=False)

    def __post_init__(self):
        self.mult = np.asarray(self.mult, dtype=np.int64) % self.p
        d = self.mult.shape[0]
        self.unit = np.asarray(self.unit, dtype=np.int64).reshape(-1) % self.p
        if self.basis_names is None:
            self.basis_names = [f"e{i}" for i in range(d)]

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def left_mult(self) -> np.ndarray:
        """``L[i]`` is the matrix of left multiplication by ``e_i`` on the algebra."""
        # (e_i e_j)_k = mult[i, j, k], so column j of L[i] is mult[i, j, :]
        return np.transpose(self.mult, (0, 2, 1)).copy()

    def product(self, a, b) -> np.ndarray:
        a = np.asarray(a) % self.p
        b = np.asarray(b) % self.p
        return np.einsum("i,j,ijk->k", a, b, self.mult) % self.p

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            op = Algebra(
                name=self.name + "^op",
                p=self.p,
                mult=np.transpose(self.mult, (1, 0, 2)).copy(),
                unit=self.unit.copy(),
                basis_names=list(self.basis_names),
                presentation=None,
                radical=self.radical,
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    def regular_module(self) -> "Module":
        return Module(self, self.left_mult(), name=self.name)

    def free_module(self, k: int) -> "Module":
        if k == 0:
            return Module.zero(self)
        return direct_sum([self.regular_module()] * k).module

    def same_as(self, other: "Algebra") -> bool:
        return self is other or (
            self.p == other.p
            and self.mult.shape == other.mult.shape
            and np.array_equal(self.mult, other.mult)
            and np.array_equal(self.unit, other.unit)
        )


def truncated_polynomial(p: int, degree: int, name: str | None = None) -> Algebra:
    """GF(p)[x]/(x^degree) on the basis 1, x, ..., x^(degree-1)."""
    d = degree
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            if i + j < d:
                mult[i, j, i + j] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[0] = 1
    names = ["1"] + ["x" if i == 1 else f"x^{i}" for i in range(1, d)]
    rad = np.eye(d, dtype=np.int64)[:, 1:]
    return Algebra(name or f"GF({p})[x]/(x^{d})", p, mult, unit, names,
                   {"kind": "truncated_polynomial", "degree": d}, rad)


def path_algebra(p: int, vertices: list[str], arrows: list[tuple[str, str, str]],
                 name: str | None = None) -> Algebra:
    """Path algebra of an acyclic quiver, acting on left modules.

    ``arrows`` holds ``(label, source, target)``. Paths compose right to left:
    for ``a: u -> v`` we have ``e_v a = a = a e_u``.
    """
    vidx = {v: i for i, v in enumerate(vertices)}
    arr = [(vidx[s], vidx[t]) for _, s, t in arrows]
    basis = _paths(list(range(len(vertices))), arr)
    index = {b: i for i, b in enumerate(basis)}
    d = len(basis)

    def ends(b):
        if b[0] == "v":
            return b[1], b[1]
        path = b[1]
        return arr[path[0]][0], arr[path[-1]][1]

    mult = np.zeros((d, d, d), dtype=np.int64)
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            si, ti = ends(bi)
            sj, tj = ends(bj)
            # bi * bj means "first bj, then bi"
            if tj != si:
                continue
            if bi[0] == "v":
                mult[i, j, j] = 1
            elif bj[0] == "v":
                mult[i, j, i] = 1
            else:
                mult[i, j, index[("p", bj[1] + bi[1])]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[: len(vertices)] = 1

    def label(b):
        if b[0] == "v":
            return "e_" + vertices[b[1]]
        return "".join(arrows[a][0] for a in reversed(b[1]))

    names = [label(b) for b in basis]
    rad = np.eye(d, dtype=np.int64)[:, len(vertices):]
    pres = {"kind": "path_algebra", "vertices": list(vertices),
            "arrows": [list(a) for a in arrows]}
    return Algebra(name or "path algebra", p, mult, unit, names, pres, rad)


def algebra_from_presentation(p: int, pres: dict, name: str) -> Algebra:
    kind = pres.get("kind")
    if kind == "truncated_polynomial":
        return truncated_polynomial(p, int(pres["degree"]), name)
    if kind == "path_algebra":
        return path_algebra(p, list(pres["vertices"]), [tuple(a) for a in pres["arrows"]], name)
    raise ValueError(f"unknown presentation kind {kind!r}")


def validate_algebra(alg: Algebra) -> Verdict:
    p, d = alg.p, alg.dim
    if not la.is_prime(p) or p >= la.MAX_PRIME:
        return Verdict(False, f"modulus {p} is not a prime below 2^31")
    if alg.mult.shape != (d, d, d) or alg.unit.shape != (d,):
        return Verdict(False, "structure constants or unit have the wrong shape")
    names = alg.basis_names
    # (e_i e_j) e_k  vs  e_i (e_j e_k)
    lhs = np.einsum("ijm,mkl->ijkl", alg.mult, alg.mult) % p
    rhs = np.einsum("jkm,iml->ijkl", alg.mult, alg.mult) % p
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j, k, _ = (int(v) for v in bad[0])
        return Verdict(False, f"associativity fails on ({names[i]}, {names[j]}, {names[k]})",
                       detail={"triple": [i, j, k]})
    eye = np.eye(d, dtype=np.int64)
    left = np.einsum("i,ijk->jk", alg.unit, alg.mult) % p
    right = np.einsum("j,ijk->ik", alg.unit, alg.mult) % p
    for side, m in (("left", left), ("right", right)):
        bad = np.argwhere(m != eye)
        if bad.size:
            j = int(bad[0][0])
            return Verdict(False, f"unit is not a {side} identity on {names[j]}",
                           detail={"basis": j})
    if alg.presentation is not None:
        try:
            ref = algebra_from_presentation(p, alg.presentation, alg.name)
        except (KeyError, ValueError) as exc:
            return Verdict(False, f"bad presentation: {exc}")
        if ref.mult.shape != alg.mult.shape:
            return Verdict(False, "dimension differs from the declared presentation")
        bad = np.argwhere(ref.mult != alg.mult)
        if bad.size:
            i, j, _ = (int(v) for v in bad[0])
            return Verdict(False, f"multiplication table differs from the declared presentation at "
                                  f"({names[i]}, {names[j]})", detail={"pair": [i, j]})
        if not np.array_equal(ref.unit, alg.unit):
            return Verdict(False, "unit differs from the declared presentation")
    return PASS


# ---------------------------------------------------------------- modules


@dataclass
class Presentation:
    generators: np.ndarray  # n x k
    cover: np.ndarray       # n x (k d), the surjection Lambda^k -> M
    section: np.ndarray     # (k d) x n, a linear right inverse of cover
    relations: np.ndarray   # (k d) x r, basis of the kernel of cover

    @property
    def k(self):
        return self.generators.shape[1]


@dataclass(eq=False)
class Module:
    algebra: Algebra
    action: np.ndarray
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        a = np.asarray(self.action, dtype=np.int64)
        if a.size == 0:
            a = a.reshape(self.algebra.dim, 0, 0)
        self.action = a % self.algebra.p

    @staticmethod
    def zero(alg: Algebra, name: str = "0") -> "Module":
        return Module(alg, np.zeros((alg.dim, 0, 0), dtype=np.int64), name)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, a) -> np.ndarray:
        return np.einsum("i,ixy->xy", np.asarray(a) % self.p, self.action) % self.p

    def __repr__(self):
        return f"Module({self.name or '?'}, dim={self.dim})"

    # presentation ---------------------------------------------------
    def presentation(self) -> Presentation:
        pres = self._cache.get("pres")
        if pres is None:
            pres = _presentation(self)
            self._cache["pres"] = pres
        return pres

    def radical(self) -> np.ndarray | None:
        rad = self.algebra.radical
        if rad is None:
            return None
        p = self.p
        if self.dim == 0 or rad.shape[1] == 0:
            return la.zeros(self.dim, 0, p)
        mats = [self.act(rad[:, c]) for c in range(rad.shape[1])]
        return la.column_basis(np.concatenate(mats, axis=1), p)


def _submodule_span(m: Module, vectors: np.ndarray) -> np.ndarray:
    """Basis of the submodule generated by the given columns."""
    p = m.p
    if vectors.shape[1] == 0:
        return vectors
    blocks = np.einsum("ixy,yk->xik", m.action, vectors).reshape(m.dim, -1) % p
    return la.column_basis(blocks, p)


def _presentation(m: Module) -> Presentation:
    p, n, d = m.p, m.dim, m.algebra.dim
    rad = m.radical()
    span = rad if rad is not None else la.zeros(n, 0, p)
    gens = []
    current = la.rank(span, p) if span.shape[1] else 0
    eye = la.identity(n, p)
    for j in range(n):
        if current == n:
            break
        trial = np.concatenate([span, eye[:, j:j + 1]], axis=1)
        r = la.rank(trial, p)
        if r > current:
            gens.append(j)
            if rad is None:
                span = _submodule_span(m, np.concatenate([span, eye[:, j:j + 1]], axis=1))
                current = span.shape[1]
            else:
                span = trial
                current = r
    g = eye[:, gens] if gens else la.zeros(n, 0, p)
    cover = np.einsum("bxy,yj->xjb", m.action, g).reshape(n, len(gens) * d) % p
    if la.rank(cover, p) != n:
        raise RuntimeError(f"generating set for {m!r} does not generate")
    # a linear right inverse: pick pivot columns of cover
    cols = list(la.rref(cover, p).pivots)
    sub = cover[:, cols]
    inv = la.inverse(sub, p) if n else la.zeros(0, 0, p)
    section = la.zeros(len(gens) * d, n, p)
    section[cols] = inv
    relations = la.kernel_basis(cover, p) if n else la.identity(len(gens) * d, p)
    return Presentation(g, cover, section, relations)


def validate_module(m: Module) -> Verdict:
    alg, p, n = m.algebra, m.p, m.dim
    if m.action.shape != (alg.dim, n, n):
        return Verdict(False, f"expected {alg.dim} action matrices of size {n}x{n}")
    names = alg.basis_names
    lhs = np.einsum("ixy,jyz->ijxz", m.action, m.action) % p
    rhs = np.einsum("ijk,kxz->ijxz", alg.mult, m.action) % p
    bad = np.argwhere((lhs != rhs).any(axis=(2, 3)))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        return Verdict(False, f"action does not respect the product on the pair ({names[i]}, {names[j]})",
                       detail={"pair": [i, j]})
    if not np.array_equal(m.act(alg.unit), la.identity(n, p)):
        return Verdict(False, "the unit does not act as the identity")
    return PASS


@dataclass(eq=False)
class Morphism:
    source: Module
    target: Module
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64).reshape(self.target.dim, self.source.dim) % self.source.p

    @property
    def p(self):
        return self.source.p

    def __matmul__(self, other: "Morphism") -> "Morphism":
        if other.target is not self.source:
            raise ValueError(f"cannot compose {other!r} with {self!r}")
        return Morphism(other.source, self.target, la.matmul(self.matrix, other.matrix, self.p))

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, (self.matrix + other.matrix) % self.p)

    def scale(self, c: int) -> "Morphism":
        return Morphism(self.source, self.target, (self.matrix * c) % self.p)

    def __neg__(self):
        return self.scale(-1)

    def rank(self) -> int:
        return la.rank(self.matrix, self.p)

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def is_mono(self) -> bool:
        return self.rank() == self.source.dim

    def is_epi(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_mono()

    def __repr__(self):
        return f"Morphism({self.source.name or '?'} -> {self.target.name or '?'})"


def identity(m: Module) -> Morphism:
    return Morphism(m, m, la.identity(m.dim, m.p))


def zero_map(a: Module, b: Module) -> Morphism:
    return Morphism(a, b, la.zeros(b.dim, a.dim, a.p))


def validate_morphism(f: Morphism) -> Verdict:
    if not f.source.algebra.same_as(f.target.algebra):
        return Verdict(False, "source and target live over different algebras")
    p = f.p
    lhs = np.einsum("xy,iyz->ixz", f.matrix, f.source.action) % p
    rhs = np.einsum("ixy,yz->ixz", f.target.action, f.matrix) % p
    bad = np.flatnonzero((lhs != rhs).any(axis=(1, 2)))
    if bad.size:
        name = f.source.algebra.basis_names[int(bad[0])]
        return Verdict(False, f"matrix does not commute with the action of {name}",
                       detail={"basis": int(bad[0])})
    return PASS


def validate(x) -> Verdict:
    if isinstance(x, Algebra):
        return validate_algebra(x)
    if isinstance(x, Module):
        return validate_module(x)
    if isinstance(x, Morphism):
        return validate_morphism(x)
    raise TypeError(f"cannot validate {type(x).__name__}")


# ---------------------------------------------------------------- Hom


def _relation_system(pres: Presentation, n: Module, d: int) -> np.ndarray:
    """Linear constraints on generator images ``w`` (ordered (j, y))."""
    k = pres.k
    if k * n.dim == 0:
        return la.zeros(0, k * n.dim, n.p)
    rels = pres.relations.T.reshape(-1, k, d)
    sysm = np.einsum("rjb,bxy->rxjy", rels, n.action).reshape(rels.shape[0] * n.dim, k * n.dim)
    return sysm % n.p


def _images_to_matrices(pres: Presentation, n: Module, w: np.ndarray, d: int) -> np.ndarray:
    """Generator images (columns of ``w``) to morphism matrices, shape (h, dim N, dim M)."""
    k, p = pres.k, n.p
    h = w.shape[1]
    wk = w.T.reshape(h, k, n.dim)
    psi = np.einsum("bxy,hjy->hxjb", n.action, wk).reshape(h, n.dim, k * d) % p
    return np.einsum("hxc,cm->hxm", psi, pres.section) % p


class HomSpace:
    """``Hom(M, N)`` as the solution space of the relation system."""

    def __init__(self, m: Module, n: Module):
        if not m.algebra.same_as(n.algebra):
            raise ValueError("Hom between modules over different algebras")
        self.source, self.target = m, n
        self.pres = m.presentation()
        d = m.algebra.dim
        self.system = _relation_system(self.pres, n, d)
        if self.pres.k * n.dim == 0:
            self.coords = la.zeros(0, 0, m.p)
        elif self.system.shape[0] == 0:
            self.coords = la.identity(self.pres.k * n.dim, m.p)
        else:
            self.coords = la.kernel_basis(self.system, m.p)

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def matrices(self) -> np.ndarray:
        m, n = self.source, self.target
        if self.dim == 0:
            return np.zeros((0, n.dim, m.dim), dtype=np.int64)
        return _images_to_matrices(self.pres, n, self.coords, m.algebra.dim)

    def basis(self) -> list[Morphism]:
        return [Morphism(self.source, self.target, a) for a in self.matrices()]

    def element(self, coeffs) -> Morphism:
        c = np.asarray(coeffs, dtype=np.int64).reshape(-1, 1) % self.source.p
        w = la.matmul(self.coords, c, self.source.p)
        mat = _images_to_matrices(self.pres, self.target, w, self.source.algebra.dim)[0]
        return Morphism(self.source, self.target, mat)


def hom_basis(m: Module, n: Module) -> list[Morphism]:
    return HomSpace(m, n).basis()


def hom_dim(m: Module, n: Module) -> int:
    key = ("hom", id(n))
    hit = m._cache.get(key)
    if hit is not None and hit[0] is n:
        return hit[1]
    h = HomSpace(m, n).dim
    m._cache[key] = (n, h)
    return h


def lift(g: Morphism, alpha: Morphism) -> Morphism | None:
    """A morphism ``h`` with ``g @ h == alpha``, or ``None`` when none exists.

    Among the solutions the one with every free coordinate zero is returned,
    so the answer is a deterministic function of the inputs.
    """
    if alpha.target is not g.target:
        raise ValueError("lift: alpha and g must share a target")
    m, b = alpha.source, g.source
    p = m.p
    pres = m.presentation()
    d = m.algebra.dim
    k = pres.k
    if k == 0:
        return zero_map(m, b)
    rel = _relation_system(pres, b, d)
    # g applied to each generator image: block diagonal
    gblock = np.kron(la.identity(k, p), g.matrix) % p
    rhs_top = la.zeros(rel.shape[0], 1, p)
    rhs_bot = la.vec(la.matmul(alpha.matrix, pres.generators, p)).reshape(-1, 1)
    a = np.concatenate([rel, gblock], axis=0)
    bvec = np.concatenate([rhs_top, rhs_bot], axis=0)
    if a.shape[1] == 0:
        return zero_map(m, b) if not alpha.matrix.any() else None
    x = la.solve_particular(a, bvec, p)
    if x is None:
        return None
    mat = _images_to_matrices(pres, b, x, d)[0]
    h = Morphism(m, b, mat)
    assert np.array_equal(la.matmul(g.matrix, h.matrix, p), alpha.matrix)
    return h


def extend(f: Morphism, beta: Morphism) -> Morphism | None:
    """A morphism ``k`` with ``k @ f == beta`` (dual of :func:`lift`)."""
    if beta.source is not f.source:
        raise ValueError("extend: beta and f must share a source")
    kd = lift(dual_map(f), dual_map(beta))
    if kd is None:
        return None
    return Morphism(f.target, beta.target, kd.matrix.T.copy())


# ---------------------------------------------------------------- abelian structure


def _sub_action(m: Module, basis: np.ndarray) -> np.ndarray:
    p = m.p
    left = la.left_inverse(basis, p)
    return np.einsum("ax,ixy,yb->iab", left, m.action, basis) % p


def submodule(m: Module, basis: np.ndarray, name: str = "") -> tuple[Module, Morphism]:
    """Module on the columns of ``basis`` (assumed stable) with its inclusion."""
    k = basis.shape[1]
    if k == 0:
        z = Module.zero(m.algebra, name or "0")
        return z, zero_map(z, m)
    sub = Module(m.algebra, _sub_action(m, basis), name)
    return sub, Morphism(sub, m, basis)


def kernel(f: Morphism, name: str = "") -> tuple[Module, Morphism]:
    m = f.source
    if f.target.dim == 0:
        return m, identity(m)
    basis = la.kernel_basis(f.matrix, f.p)
    return submodule(m, basis, name or f"ker({f.source.name})")


def image(f: Morphism, name: str = "") -> tuple[Module, Morphism, Morphism]:
    """``(I, epi, inc)`` with ``f = inc @ epi``."""
    p = f.p
    basis = la.column_basis(f.matrix, p)
    if basis.shape[1] == f.target.dim:
        return f.target, f, identity(f.target)
    im, inc = submodule(f.target, basis, name or f"im({f.source.name})")
    epi = Morphism(f.source, im, la.matmul(la.left_inverse(basis, p), f.matrix, p) if basis.shape[1] else
                   la.zeros(0, f.source.dim, p))
    return im, epi, inc


def cokernel(f: Morphism, name: str = "") -> tuple[Module, Morphism]:
    n, p = f.target, f.p
    if f.source.dim == 0 or not f.matrix.any():
        return n, identity(n)
    basis = la.column_basis(f.matrix, p)
    comp = la.complement_indices(basis, p)
    r = basis.shape[1]
    if not comp:
        q = Module.zero(n.algebra, name or "0")
        return q, zero_map(n, q)
    e = la.identity(n.dim, p)[:, comp]
    change = la.inverse(np.concatenate([basis, e], axis=1), p)
    proj = change[r:]
    act = np.einsum("ax,ixy,yb->iab", proj, n.action, e) % p
    q = Module(n.algebra, act, name or f"coker({f.target.name})")
    return q, Morphism(n, q, proj)


@dataclass
class DirectSum:
    module: Module
    injections: list[Morphism]
    projections: list[Morphism]


def direct_sum(ms: list[Module], name: str = "") -> DirectSum:
    if not ms:
        raise ValueError("direct_sum of an empty list")
    alg = ms[0].algebra
    for m in ms:
        if not m.algebra.same_as(alg):
            raise ValueError("direct_sum over different algebras")
    p = alg.p
    total = sum(m.dim for m in ms)
    act = np.zeros((alg.dim, total, total), dtype=np.int64)
    off = 0
    for m in ms:
        act[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    s = Module(alg, act, name or "+".join(m.name or "?" for m in ms))
    inj, proj = [], []
    off = 0
    for m in ms:
        e = la.zeros(total, m.dim, p)
        e[off:off + m.dim] = la.identity(m.dim, p)
        inj.append(Morphism(m, s, e))
        proj.append(Morphism(s, m, e.T.copy()))
        off += m.dim
    return DirectSum(s, inj, proj)


def block_map(rows: list[list[Morphism]], sources: list[Module], targets: list[Module],
              source: Module, target: Module) -> Morphism:
    """Assemble a morphism between direct sums from its blocks (``None`` = zero)."""
    p = source.p
    mat = la.zeros(target.dim, source.dim, p)
    r0 = 0
    for i, t in enumerate(targets):
        c0 = 0
        for j, s in enumerate(sources):
            blk = rows[i][j]
            if blk is not None:
                mat[r0:r0 + t.dim, c0:c0 + s.dim] = blk.matrix
            c0 += s.dim
        r0 += t.dim
    return Morphism(source, target, mat)


def pullback(f: Morphism, g: Morphism, name: str = "") -> tuple[Module, Morphism, Morphism]:
    """Pullback of ``f: X -> Y`` and ``g: N -> Y`` as the kernel of ``(f, -g)``."""
    if f.target is not g.target:
        raise ValueError("pullback needs a common target")
    x, nn = f.source, g.source
    ds = direct_sum([x, nn])
    fg = Morphism(ds.module, f.target, np.concatenate([f.matrix, (-g.matrix) % f.p], axis=1))
    pb, inc = kernel(fg, name or "pullback")
    return pb, ds.projections[0] @ inc, ds.projections[1] @ inc


def pushout(f1: Morphism, g1: Morphism, name: str = "") -> tuple[Module, Morphism, Morphism]:
    """Pushout of ``f1: M -> N`` and ``g1: M -> X`` as the cokernel of ``(f1, -g1)^T``."""
    if f1.source is not g1.source:
        raise ValueError("pushout needs a common source")
    nn, x = f1.target, g1.target
    ds = direct_sum([nn, x])
    fg = Morphism(f1.source, ds.module, np.concatenate([f1.matrix, (-g1.matrix) % f1.p], axis=0))
    q, proj = cokernel(fg, name or "pushout")
    return q, proj @ ds.injections[0], proj @ ds.injections[1]


def is_exact(maps: list[Morphism], positions=None) -> Verdict:
    """Exactness of ``O_0 -> O_1 -> ... -> O_m`` at interior objects.

    ``maps[i]`` goes from ``O_i`` to ``O_{i+1}``; positions are object indices
    ``1..m-1``. A failure names the first inexact position together with the
    dimension of the incoming image and of the outgoing kernel.
    """
    for a, b in zip(maps, maps[1:]):
        if a.target is not b.source:
            return Verdict(False, "maps are not composable")
    m = len(maps)
    interior = range(1, m) if positions is None else sorted(positions)
    for i in interior:
        f, g = maps[i - 1], maps[i]
        p = f.p
        comp = la.matmul(g.matrix, f.matrix, p)
        rf = f.rank()
        kg = f.target.dim - g.rank()
        if comp.any() or rf != kg:
            return Verdict(False, f"not exact at position {i}", position=i,
                           detail={"image_dim": rf, "kernel_dim": kg,
                                   "composite_zero": not comp.any()})
    return PASS


def short_exact_verdict(f: Morphism, g: Morphism) -> Verdict:
    """``0 -> A -f-> B -g-> C -> 0``; positions 1, 2, 3 are A, B, C."""
    if not f.is_mono():
        return Verdict(False, "not exact at position 1", position=1,
                       detail={"image_dim": 0, "kernel_dim": f.source.dim - f.rank()})
    v = is_exact([f, g])
    if not v:
        return Verdict(False, "not exact at position 2", position=2, detail=v.detail)
    if not g.is_epi():
        return Verdict(False, "not exact at position 3", position=3,
                       detail={"image_dim": g.rank(), "kernel_dim": g.target.dim})
    return PASS


def free_cover(m: Module) -> Morphism:
    """``Lambda^(dim m) -> m`` sending the i-th free generator to the i-th basis vector."""
    alg, p, n = m.algebra, m.p, m.dim
    free = alg.free_module(n)
    d = alg.dim
    mat = np.einsum("bxy,yj->xjb", m.action, la.identity(n, p)).reshape(n, n * d) % p
    return Morphism(free, m, mat)


def minimal_cover(m: Module) -> Morphism:
    """``Lambda^k -> m`` on the generating set of the cached presentation."""
    pres = m.presentation()
    free = m.algebra.free_module(pres.k)
    return Morphism(free, m, pres.cover)


def split_summand(m: Module, e: Morphism, name: str = "") -> tuple[Module, Morphism, Morphism]:
    """Split off ``Im(e)`` for an idempotent endomorphism ``e``."""
    if e.source is not m or e.target is not m:
        raise ValueError("split_summand needs an endomorphism of m")
    p = m.p
    if not np.array_equal(la.matmul(e.matrix, e.matrix, p), e.matrix):
        raise ValueError("split_summand: e is not idempotent")
    s, retraction, section = image(e, name or f"im({m.name})")
    if s is m:
        return m, identity(m), identity(m)
    return s, section, retraction


# ---------------------------------------------------------------- isomorphism


@dataclass
class IsoCertificate:
    forward: Morphism
    inverse: Morphism


def find_isomorphism(a: Module, b: Module, seed: int = 0, trials: int = 400) -> IsoCertificate | None:
    if a is b:
        return IsoCertificate(identity(a), identity(a))
    if a.dim != b.dim or not a.algebra.same_as(b.algebra):
        return None
    if a.dim == 0:
        return IsoCertificate(zero_map(a, b), zero_map(b, a))
    hs = HomSpace(a, b)
    if hs.dim == 0 or hom_dim(b, a) != hs.dim or hom_dim(a, a) != hs.dim:
        return None
    p = a.p
    mats = hs.matrices()
    h = hs.dim

    def accept(mat):
        if la.rank(mat, p) == a.dim:
            fwd = Morphism(a, b, mat)
            inv = Morphism(b, a, la.inverse(mat, p))
            return IsoCertificate(fwd, inv)
        return None

    if p ** h <= 4096:
        for coeffs in itertools.product(range(p), repeat=h):
            if not any(coeffs):
                continue
            mat = np.tensordot(np.array(coeffs, dtype=np.int64), mats, axes=1) % p
            cert = accept(mat)
            if cert:
                return cert
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = np.array([rng.randrange(p) for _ in range(h)], dtype=np.int64)
        cert = accept(np.tensordot(coeffs, mats, axes=1) % p)
        if cert:
            return cert
    return None


def are_isomorphic(a: Module, b: Module) -> bool:
    return find_isomorphism(a, b) is not None


@dataclass
class Summand:
    module: Module
    section: Morphism     # summand -> m
    retraction: Morphism  # m -> summand
    certified: bool       # End(summand) was searched exhaustively


def _fitting_idempotent(m: Module, seed: int, trials: int):
    """An idempotent ``e != 0, 1`` from the Fitting decomposition of some endomorphism.

    Returns ``(e, exhaustive)``; ``e`` is None when no endomorphism is
    neither nilpotent nor invertible among those tried.
    """
    p, n = m.p, m.dim
    mats = HomSpace(m, m).matrices()
    h = len(mats)

    def attempt(coeffs):
        phi = np.tensordot(np.asarray(coeffs, dtype=np.int64), mats, axes=1) % p
        psi = la.identity(n, p)
        for _ in range(n):
            psi = la.matmul(psi, phi, p)
        r = la.rank(psi, p)
        if r in (0, n):
            return None
        im = la.column_basis(psi, p)
        ker = la.kernel_basis(psi, p)
        basis = np.concatenate([im, ker], axis=1)
        proj = la.identity(n, p)
        proj[r:, r:] = 0
        return la.matmul(la.matmul(basis, proj, p), la.inverse(basis, p), p)

    if p ** h <= 4096:
        for coeffs in itertools.product(range(p), repeat=h):
            e = attempt(coeffs)
            if e is not None:
                return e, True
        return None, True
    rng = random.Random(seed)
    for _ in range(trials):
        e = attempt([rng.randrange(p) for _ in range(h)])
        if e is not None:
            return e, False
    return None, False


def decompose(m: Module, seed: int = 0, trials: int = 400) -> list[Summand]:
    """Split ``m`` into summands with local endomorphism rings.

    A summand is certified indecomposable when all of its endomorphisms were
    enumerated; otherwise the search was random and may have missed a split.
    """
    if m.dim == 0:
        return []
    e, exhaustive = _fitting_idempotent(m, seed, trials)
    if e is None:
        return [Summand(m, identity(m), identity(m), exhaustive)]
    out = []
    for k, idem in enumerate([e, (la.identity(m.dim, m.p) - e) % m.p]):
        s, sec, ret = split_summand(m, Morphism(m, m, idem), name=f"{m.name}.{k}")
        for part in decompose(s, seed, trials):
            out.append(Summand(part.module, sec @ part.section, part.retraction @ ret, part.certified))
    return out


# ---------------------------------------------------------------- duality


def dual(m: Module) -> Module:
    """``D(m) = Hom_k(m, k)`` as a left module over the opposite algebra."""
    hit = m._cache.get("dual")
    if hit is not None:
        return hit
    op = m.algebra.opposite()
    act = np.transpose(m.action, (0, 2, 1)).copy()
    dm = Module(op, act, f"D({m.name})")
    dm._cache["dual"] = m
    m._cache["dual"] = dm
    return dm


def dual_map(f: Morphism) -> Morphism:
    return Morphism(dual(f.target), dual(f.source), f.matrix.T.copy())
