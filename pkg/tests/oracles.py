"""Brute-force reference counts that share no code with the library.

Only the raw action arrays and structure constants are read.
"""
import itertools

import numpy as np


def _all_matrices(rows, cols, p):
    for entries in itertools.product(range(p), repeat=rows * cols):
        yield np.array(entries, dtype=np.int64).reshape(rows, cols)


def hom_count(act_m, act_n, p):
    """``|Hom(M, N)|`` by testing every linear map."""
    d, m, _ = act_m.shape
    n = act_n.shape[1]
    count = 0
    for h in _all_matrices(n, m, p):
        if all(np.array_equal((h @ act_m[i]) % p, (act_n[i] @ h) % p) for i in range(d)):
            count += 1
    return count


def hom_dim(act_m, act_n, p):
    return _log(hom_count(act_m, act_n, p), p)


def _log(count, p):
    k = 0
    while count > 1:
        assert count % p == 0
        count //= p
        k += 1
    return k


def ext1_dim(mult, unit, act_m, act_n, p):
    """``dim Ext^1(M, N)`` as log_p of the number of extension classes.

    An extension ``0 -> N -> E -> M -> 0`` is the action
    ``[[N(a), c(a)], [0, M(a)]]`` on ``N + M``; it is a module exactly when
    ``c`` is a cocycle, and two cocycles give equivalent extensions exactly
    when they differ by ``a -> N(a) h - h M(a)``. Every ``c`` is enumerated.
    """
    d, m, _ = act_m.shape
    n = act_n.shape[1]
    if m * n == 0:
        return 0
    cocycles = set()
    for entries in itertools.product(range(p), repeat=d * n * m):
        c = np.array(entries, dtype=np.int64).reshape(d, n, m)
        if (np.tensordot(unit, c, axes=1) % p).any():
            continue
        ok = True
        for i in range(d):
            for j in range(d):
                lhs = np.tensordot(mult[i, j], c, axes=1) % p
                rhs = (act_n[i] @ c[j] + c[i] @ act_m[j]) % p
                if not np.array_equal(lhs, rhs):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            cocycles.add(c.tobytes())
    boundaries = set()
    for h in _all_matrices(n, m, p):
        b = np.stack([(act_n[i] @ h - h @ act_m[i]) % p for i in range(d)])
        boundaries.add(b.tobytes())
    assert len(cocycles) % len(boundaries) == 0
    return _log(len(cocycles) // len(boundaries), p)
