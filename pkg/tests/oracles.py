"""Slow, independent reference computations used as test oracles.

Nothing here touches ``modcx.linalg`` or the syzygy tree: elimination is a
plain row reduction, monomial actions are rebuilt from the variable matrices,
and resolutions are computed stage by stage inside explicit free modules.
"""

from __future__ import annotations

import numpy as np


def row_reduce(a, p: int) -> tuple[np.ndarray, list[int]]:
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        s = r + int(nz[0])
        m[[r, s]] = m[[s, r]]
        m[r] = (m[r] * pow(int(m[r, c]), p - 2, p)) % p
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(row_reduce(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    m, piv = row_reduce(a, p)
    free = [c for c in range(cols) if c not in piv]
    out = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, c in enumerate(piv):
            out[c, k] = (-m[i, f]) % p
    return out


def monomial_ops(algebra, actions, n: int) -> list[np.ndarray]:
    """Action of every basis monomial, as products of powers of the variable actions."""
    p = algebra.p
    out = []
    for e in algebra.basis:
        op = np.eye(n, dtype=np.int64)
        for j, k in enumerate(e):
            for _ in range(k):
                op = (op @ actions[j]) % p
        out.append(op)
    return out


def regular_ops(algebra) -> list[np.ndarray]:
    return monomial_ops(algebra, algebra.var_actions, algebra.dim)


def _complement(span: np.ndarray, vectors: np.ndarray, p: int) -> list[int]:
    """Greedy choice of columns of ``vectors`` independent modulo ``span``."""
    chosen: list[int] = []
    cur = span
    r = rank(cur, p) if cur.size else 0
    for c in range(vectors.shape[1]):
        trial = np.concatenate([cur, vectors[:, c : c + 1]], axis=1) if cur.size else vectors[:, c : c + 1]
        rr = rank(trial, p)
        if rr > r:
            chosen.append(c)
            cur, r = trial, rr
    return chosen


def naive_resolution(module, steps: int):
    """Betti numbers and R-matrix differentials of a minimal resolution of ``module``.

    Works in one free module at a time: the kernel of each cover is a
    subspace of ``R^b`` and its minimal generators are picked modulo ``m``
    times it.  Returns ``(betti, diffs)`` with ``diffs[i]`` of shape
    ``(b_i, b_{i+1}, l(R))``.
    """
    A = module.algebra
    p = A.p
    ell = A.dim
    reg = regular_ops(A)
    rad_idx = [j for j in range(ell) if j != A.unit_index]

    # stage 0: generators of the module itself
    ops = monomial_ops(A, module.actions, module.dim)
    n = module.dim
    if n == 0:
        return [0] * (steps + 1), []
    basis = np.eye(n, dtype=np.int64)
    rad = np.concatenate([ops[j] for j in rad_idx], axis=1) if rad_idx else np.zeros((n, 0), dtype=np.int64)
    gens = basis[:, _complement(rad, basis, p)]
    cover = np.concatenate([np.stack([ops[j] @ gens[:, g] % p for j in range(ell)], axis=1) for g in range(gens.shape[1])], axis=1)
    betti = [gens.shape[1]]
    diffs = []
    kernel = nullspace(cover, p)
    rank_free = gens.shape[1]
    for _ in range(steps):
        if kernel.shape[1] == 0:
            diffs.append(np.zeros((rank_free, 0, ell), dtype=np.int64))
            betti.append(0)
            rank_free = 0
            kernel = np.zeros((0, 0), dtype=np.int64)
            continue

        def act(j, vecs, b=rank_free):
            return np.concatenate([reg[j] @ vecs[g * ell : (g + 1) * ell] % p for g in range(b)], axis=0)

        mk = np.concatenate([act(j, kernel) for j in rad_idx], axis=1)
        g = kernel[:, _complement(mk, kernel, p)]
        t = g.shape[1]
        d = np.zeros((rank_free, t, ell), dtype=np.int64)
        for c in range(t):
            d[:, c, :] = g[:, c].reshape(rank_free, ell)
        diffs.append(d)
        betti.append(t)
        # cover R^t -> R^rank_free sending (generator c, monomial j) to j * g_c
        cov = np.concatenate([np.stack([act(j, g[:, c : c + 1])[:, 0] for j in range(ell)], axis=1) for c in range(t)], axis=1)
        kernel = nullspace(cov, p)
        rank_free = t
    return betti, diffs


def entry_op(target_ops: list[np.ndarray], r: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros_like(target_ops[0])
    for j, c in enumerate(r):
        if c:
            out = (out + int(c) * target_ops[j]) % p
    return out


def hom_matrix(d: np.ndarray, target_ops, n: int, p: int) -> np.ndarray:
    """``Hom(d, N) : N^{rows} -> N^{cols}`` for an R-matrix ``d``."""
    rows, cols, _ = d.shape
    out = np.zeros((cols * n, rows * n), dtype=np.int64)
    for h in range(rows):
        for g in range(cols):
            out[g * n : (g + 1) * n, h * n : (h + 1) * n] = entry_op(target_ops, d[h, g], p)
    return out


def tensor_matrix(d: np.ndarray, target_ops, n: int, p: int) -> np.ndarray:
    """``d (x) N : N^{cols} -> N^{rows}``."""
    rows, cols, _ = d.shape
    out = np.zeros((rows * n, cols * n), dtype=np.int64)
    for h in range(rows):
        for g in range(cols):
            out[h * n : (h + 1) * n, g * n : (g + 1) * n] = entry_op(target_ops, d[h, g], p)
    return out


def naive_ext_tor(M, N, steps: int) -> tuple[list[int], list[int]]:
    """Lengths of ``Ext^i(M, N)`` and ``Tor_i(M, N)`` for ``i <= steps`` from explicit complexes."""
    p = M.p
    betti, diffs = naive_resolution(M, steps + 1)
    n = N.dim
    ops = monomial_ops(N.algebra, N.actions, n)
    hom = [hom_matrix(d, ops, n, p) for d in diffs]
    ten = [tensor_matrix(d, ops, n, p) for d in diffs]
    ext, tor = [], []
    for i in range(steps + 1):
        size = betti[i] * n
        out_rank = rank(hom[i], p) if hom[i].size else 0
        in_rank = rank(hom[i - 1], p) if i >= 1 and hom[i - 1].size else 0
        ext.append(size - out_rank - in_rank)
        down = rank(ten[i - 1], p) if i >= 1 and ten[i - 1].size else 0
        up = rank(ten[i], p) if ten[i].size else 0
        tor.append(size - down - up)
    return ext, tor
