"""Small algebras and modules used throughout the tests and the CLI.

``LAMBDA1 = GF(2)[x]/(x^2)``, ``LAMBDA2 = GF(3)[x]/(x^3)`` and ``A2``, the path
algebra of ``a -> b`` over GF(2). Each call builds fresh objects, so callers
that need identity-based sharing should hold on to the returned values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .modcat import Algebra, Module, Morphism, path_algebra, truncated_polynomial


def polynomial_module(alg: Algebra, x: np.ndarray, name: str = "") -> Module:
    """Module over ``GF(p)[x]/(x^n)`` on which ``x`` acts by the nilpotent matrix ``x``."""
    p = alg.p
    x = np.asarray(x, dtype=np.int64) % p
    n = x.shape[0]
    powers = [la.identity(n, p)]
    for _ in range(1, alg.dim):
        powers.append(la.matmul(powers[-1], x, p))
    return Module(alg, np.stack(powers), name)


def representation(alg: Algebra, dims: dict[str, int], arrows: dict[str, np.ndarray],
                   name: str = "") -> Module:
    """Module over a path algebra from vector space dimensions and arrow matrices.

    Vertex spaces are stacked in the order of the quiver's vertex list. Each
    arrow matrix has shape ``dims[target] x dims[source]``.
    """
    pres = alg.presentation
    if not pres or pres.get("kind") != "path_algebra":
        raise ValueError("representation() needs a path algebra")
    verts = pres["vertices"]
    arr = pres["arrows"]
    p = alg.p
    off, o = {}, 0
    for v in verts:
        off[v] = o
        o += dims.get(v, 0)
    n = o
    label_to = {a[0]: a for a in arr}
    big = {}
    for lab, s, t in arr:
        mat = la.zeros(n, n, p)
        blk = np.asarray(arrows.get(lab, np.zeros((dims.get(t, 0), dims.get(s, 0)))), dtype=np.int64)
        mat[off[t]:off[t] + dims.get(t, 0), off[s]:off[s] + dims.get(s, 0)] = blk.reshape(dims.get(t, 0), dims.get(s, 0))
        big[lab] = mat % p
    action = np.zeros((alg.dim, n, n), dtype=np.int64)
    for i, bname in enumerate(alg.basis_names):
        if bname.startswith("e_") and bname[2:] in off:
            v = bname[2:]
            action[i, off[v]:off[v] + dims.get(v, 0), off[v]:off[v] + dims.get(v, 0)] = np.eye(dims.get(v, 0), dtype=np.int64)
        else:
            # a path is written right to left, e.g. "ba" means first a then b
            mat = la.identity(n, p)
            for lab in _split_path(bname, label_to):
                mat = la.matmul(big[lab], mat, p)
            action[i] = mat
    return Module(alg, action, name)


def _split_path(word: str, labels: dict) -> list[str]:
    # labels are matched greedily from the right; the result is in traversal order
    out = []
    rest = word
    while rest:
        for lab in sorted(labels, key=len, reverse=True):
            if rest.endswith(lab):
                out.append(lab)
                rest = rest[: -len(lab)]
                break
        else:
            raise ValueError(f"cannot parse path {word!r}")
    return out


@dataclass
class Fixtures:
    LAMBDA1: Algebra
    K1: Module
    REG1: Module
    LAMBDA2: Algebra
    S2: Module
    U2: Module
    REG2: Module
    A2: Algebra
    SA: Module
    SB: Module
    PA: Module
    REGA2: Module

    def modules(self) -> dict[str, Module]:
        return {k: v for k, v in vars(self).items() if isinstance(v, Module)}

    def algebras(self) -> dict[str, Algebra]:
        return {k: v for k, v in vars(self).items() if isinstance(v, Algebra)}


def load() -> Fixtures:
    l1 = truncated_polynomial(2, 2, "LAMBDA1")
    k1 = polynomial_module(l1, [[0]], "K1")
    reg1 = Module(l1, l1.left_mult(), "REG1")
    l2 = truncated_polynomial(3, 3, "LAMBDA2")
    s2 = polynomial_module(l2, [[0]], "S2")
    u2 = polynomial_module(l2, [[0, 0], [1, 0]], "U2")
    reg2 = Module(l2, l2.left_mult(), "REG2")
    a2 = path_algebra(2, ["a", "b"], [("arr", "a", "b")], "A2")
    sa = representation(a2, {"a": 1, "b": 0}, {}, "SA")
    sb = representation(a2, {"a": 0, "b": 1}, {}, "SB")
    pa = representation(a2, {"a": 1, "b": 1}, {"arr": [[1]]}, "PA")
    rega2 = Module(a2, a2.left_mult(), "REGA2")
    return Fixtures(l1, k1, reg1, l2, s2, u2, reg2, a2, sa, sb, pa, rega2)


def socle_inclusion(fx: Fixtures) -> Morphism:
    """``K1 -> REG1`` onto the socle ``span{x}``."""
    return Morphism(fx.K1, fx.REG1, [[0], [1]])


def top_projection(fx: Fixtures) -> Morphism:
    """``REG1 -> K1`` killing ``x``."""
    return Morphism(fx.REG1, fx.K1, [[1, 0]])


def multiplication_by_x(fx: Fixtures) -> Morphism:
    return Morphism(fx.REG1, fx.REG1, [[0, 0], [1, 0]])


# ---------------------------------------------------------------- enumeration


def all_truncated_modules(alg: Algebra, dim: int):
    """Every module structure on ``GF(p)^dim`` over a truncated polynomial algebra."""
    p = alg.p
    n = alg.dim
    for entries in itertools.product(range(p), repeat=dim * dim):
        x = np.array(entries, dtype=np.int64).reshape(dim, dim)
        power = la.identity(dim, p)
        for _ in range(n):
            power = la.matmul(power, x, p)
        if power.any():
            continue
        yield polynomial_module(alg, x, f"N{''.join(map(str, entries))}" if dim else "0")


def all_a2_modules(alg: Algebra, dim: int):
    """Every representation of ``a -> b`` with total dimension ``dim``."""
    p = alg.p
    for da in range(dim + 1):
        db = dim - da
        for entries in itertools.product(range(p), repeat=da * db):
            mat = np.array(entries, dtype=np.int64).reshape(db, da)
            tag = "".join(map(str, entries))
            yield representation(alg, {"a": da, "b": db}, {"arr": mat}, f"R{da}{db}_{tag}")
