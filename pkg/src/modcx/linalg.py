"""Dense exact linear algebra over a prime field GF(p).

Matrices are numpy ``int64`` arrays whose entries are residues in ``[0, p)``.
Every routine takes the modulus explicitly and returns fresh arrays; inputs
are never modified.  Products are formed in ``float64`` when that is exact
(``inner * (p - 1)**2 < 2**53``) so that BLAS does the heavy lifting.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 101

_FLOAT_EXACT = 2.0**53


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def as_matrix(a, p: int) -> np.ndarray:
    """Coerce ``a`` to a reduced 2-D int64 array."""
    arr = np.array(a, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if arr.size else arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product ``a @ b`` reduced mod ``p``."""
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    inner = a.shape[1]
    if inner == 0:
        return zeros(a.shape[0], b.shape[1])
    if inner * float(p - 1) ** 2 < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(prod).astype(np.int64) % p
    out = (a.astype(object) @ b.astype(object)) % p
    return out.astype(np.int64)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the strictly increasing pivot columns.

    Small inputs use first-nonzero pivoting column by column.  Larger ones are
    processed in column panels whose updates are single matrix products; the
    reduced form is unique, so both paths agree exactly.
    """
    m = as_matrix(a, p).copy()
    rows, cols = m.shape
    if rows * cols <= _BLOCK_THRESHOLD or cols <= _PANEL or not _exact(_PANEL, p):
        return _rref_unblocked(m, p)
    return _rref_blocked(m, p)


_PANEL = 48
_BLOCK_THRESHOLD = 96 * 96


def _exact(inner: int, p: int) -> bool:
    return inner * float(p - 1) ** 2 < _FLOAT_EXACT


def _rref_unblocked(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        piv = int(m[r, c])
        if piv != 1:
            m[r, c:] = (m[r, c:] * inv_mod(piv, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit, c:] = (m[hit, c:] - np.outer(col[hit], m[r, c:])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def _rref_blocked(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    c = 0
    while c < cols and r < rows:
        w = min(_PANEL, cols - c)
        panel = m[r:, c : c + w]
        _, pc = _rref_unblocked(panel.copy(), p)
        k = len(pc)
        if k == 0:
            c += w
            continue
        pc_abs = [c + j for j in pc]
        # k rows at or below r that are independent on the pivot columns
        _, sel = _rref_unblocked(panel[:, pc].T.copy(), p)
        sel = [r + i for i in sel]
        tgt = list(range(r, r + k))
        sel_set, tgt_set = set(sel), set(tgt)
        displaced = [i for i in tgt if i not in sel_set]
        holes = [i for i in sel if i not in tgt_set]
        m[tgt + holes] = m[sel + displaced]
        g = m[:, pc_abs]
        target = np.zeros_like(g)
        target[r : r + k] = np.eye(k, dtype=np.int64)
        sq = np.concatenate([g[r : r + k], np.eye(k, dtype=np.int64)], axis=1)
        inv = _rref_unblocked(sq, p)[0][:, k:]
        y = matmul((target - g) % p, inv, p)
        upd = y.astype(np.float64) @ m[r : r + k, c:].astype(np.float64)
        m[:, c:] += upd.astype(np.int64)
        m[:, c:] %= p
        pivots.extend(pc_abs)
        r += k
        c += w
    return m, pivots


def rank(a, p: int) -> int:
    m = as_matrix(a, p)
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(rref(m, p)[1])


def kernel_basis(a, p: int) -> np.ndarray:
    """Columns spanning ``{v : a @ v = 0}``.

    The basis is the standard one read off the rref: the column belonging to
    free variable ``f`` has a 1 in row ``f`` and 0 in every other free row.
    """
    return kernel_with_free(a, p)[0]


def kernel_with_free(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Kernel basis ``k`` together with the free rows, where ``k[free, :] = I``."""
    m = as_matrix(a, p)
    cols = m.shape[1]
    red, pivots = rref(m, p)
    piv_set = set(pivots)
    free = [c for c in range(cols) if c not in piv_set]
    k = zeros(cols, len(free))
    if not free:
        return k, free
    k[free, range(len(free))] = 1
    if pivots:
        k[pivots, :] = (-red[: len(pivots)][:, free]) % p
    return k, free


def solve(a, b, p: int):
    """Some ``x`` with ``a @ x = b``, or ``None`` if ``b`` is not in the column space."""
    m = as_matrix(a, p)
    vec = np.array(b, dtype=np.int64).reshape(-1) % p
    if vec.shape[0] != m.shape[0]:
        raise DimensionError(
            f"right-hand side has length {vec.shape[0]}, matrix has {m.shape[0]} rows"
        )
    aug = np.concatenate([m, vec.reshape(-1, 1)], axis=1)
    red, pivots = rref(aug, p)
    cols = m.shape[1]
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, cols]
    return x


def colspace(a, p: int) -> np.ndarray:
    """Canonical basis (reduced echelon, as columns) of the column space."""
    return echelon_basis(a, p)[0]


def independent_columns(a, p: int) -> list[int]:
    """Indices of the greedy left-to-right maximal independent set of columns."""
    m = as_matrix(a, p)
    if m.shape[1] == 0:
        return []
    return rref(m, p)[1]


def subspace_sum(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    return colspace(np.concatenate([u, v], axis=1), p)


def subspace_intersection(u, v, p: int) -> np.ndarray:
    """Basis of the intersection of the column spans of ``u`` and ``v``."""
    u = as_matrix(u, p)
    v = as_matrix(v, p)
    if u.shape[0] != v.shape[0]:
        raise DimensionError("subspaces live in different ambient dimensions")
    if u.shape[1] == 0 or v.shape[1] == 0:
        return zeros(u.shape[0], 0)
    ker = kernel_basis(np.concatenate([u, (-v) % p], axis=1), p)
    return colspace(matmul(u, ker[: u.shape[1]], p), p)


def inverse(a, p: int) -> np.ndarray:
    m = as_matrix(a, p)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionError("only square matrices can be inverted")
    red, pivots = rref(np.concatenate([m, identity(n)], axis=1), p)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular mod p")
    return red[:, n:].copy()


def echelon_basis(v: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Column basis ``b`` of span(v) with ``b[rows, :] = I`` for the returned rows.

    Coordinates of a vector ``w`` in the span are then simply ``w[rows]``.
    """
    m = as_matrix(v, p)
    if m.shape[1] == 0:
        return zeros(m.shape[0], 0), []
    red, rows = rref(m.T, p)
    return red[: len(rows)].T.copy(), rows


def power(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = identity(a.shape[0])
    base = a % p
    while e:
        if e & 1:
            result = matmul(result, base, p)
        e >>= 1
        if e:
            base = matmul(base, base, p)
    return result
