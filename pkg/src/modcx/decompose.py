"""Direct sum splitting and isomorphism tests for small modules.

Everything here is an optimization for the resolution engine: a missed
splitting or a missed isomorphism only costs sharing, never correctness.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .modules import ModuleRep, restrict_with_basis

# Hom spaces are solved for when (dimension * generators) stays below this.
DEFAULT_HOM_LIMIT = 256


def section(module: ModuleRep, gens=None) -> np.ndarray:
    """A k-linear right inverse of the cover map, shaped ``(nu, l(R), dim)``."""
    p = module.p
    g = module.gens if gens is None else gens
    cov = module.cover_map(g)
    piv = la.independent_columns(cov, p)
    if len(piv) != module.dim:
        raise ValueError("generators do not span the module")
    sig = la.zeros(cov.shape[1], module.dim)
    sig[piv, :] = la.inverse(cov[:, piv], p)
    return sig.reshape(g.shape[1], module.algebra.dim, module.dim)


def hom_basis(src: ModuleRep, tgt: ModuleRep) -> np.ndarray:
    """Basis of ``Hom_R(src, tgt)`` as an array of k-matrices, shape ``(k, dim tgt, dim src)``.

    A homomorphism is determined by the images ``V`` of the generators of
    ``src``; the unknowns are the entries of ``V`` and the equations say the
    induced map commutes with every variable action.
    """
    p = src.p
    ns, nt = src.dim, tgt.dim
    if ns == 0 or nt == 0:
        return la.zeros(0, nt * ns).reshape(0, nt, ns)
    sig = section(src)
    # phi(V)[a, b] = sum over (c, g) of T[a, b, c, g] * V[c, g]
    t = np.einsum("mac,gmb->abcg", tgt.mono_ops, sig) % p
    q = nt * sig.shape[0]
    t = t.reshape(nt, ns, q)
    blocks = []
    for a_src, a_tgt in zip(src.actions, tgt.actions):
        c = np.einsum("abq,bd->adq", t, a_src) - np.einsum("ab,bdq->adq", a_tgt, t)
        blocks.append(c.reshape(nt * ns, q) % p)
    if not blocks:
        ker = la.identity(q)
    else:
        ker = _sketched_kernel(np.concatenate(blocks, axis=0), p)
    return np.einsum("abq,qk->kab", t, ker) % p


def _sketched_kernel(system: np.ndarray, p: int) -> np.ndarray:
    rows, cols = system.shape
    if rows <= 2 * cols + 32:
        return la.kernel_basis(system, p)
    # a random row compression keeps the kernel with overwhelming probability
    rng = np.random.default_rng(rows * 7919 + cols)
    sketch = rng.integers(0, p, size=(cols + 16, rows), dtype=np.int64)
    ker = la.kernel_basis(la.matmul(sketch, system, p), p)
    if ker.shape[1] and la.matmul(system, ker, p).any():
        return la.kernel_basis(system, p)
    return ker


def random_hom(basis: np.ndarray, rng: np.random.Generator, p: int) -> np.ndarray:
    coeffs = rng.integers(0, p, size=basis.shape[0])
    return np.tensordot(coeffs, basis, axes=(0, 0)) % p


def find_isomorphism(src: ModuleRep, tgt: ModuleRep, tries: int = 8, seed: int = 0):
    """An invertible R-linear map ``src -> tgt`` as a k-matrix, or ``None``."""
    if src.dim != tgt.dim:
        return None
    p = src.p
    basis = hom_basis(src, tgt)
    if basis.shape[0] == 0:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        phi = random_hom(basis, rng, p)
        if la.rank(phi, p) == src.dim:
            return phi
    return None


def split_simple(module: ModuleRep) -> tuple[list[np.ndarray], np.ndarray]:
    """Split off every summand isomorphic to k.

    Returns the one-dimensional summands and a stable complement.  A socle
    vector outside ``mM`` spans a summand, and any subspace containing
    ``mM`` is stable.
    """
    p = module.p
    n = module.dim
    soc, rad = module.socle, module.radical
    inter = la.subspace_intersection(soc, rad, p)
    t = inter.shape[1]
    picked = [c - t for c in la.independent_columns(np.concatenate([inter, soc], axis=1), p) if c >= t]
    if not picked:
        return [], la.identity(n)
    simple = soc[:, picked]
    base = np.concatenate([rad, simple], axis=1)
    b = base.shape[1]
    extra = [c - b for c in la.independent_columns(np.concatenate([base, la.identity(n)], axis=1), p) if c >= b]
    rest = np.concatenate([rad, la.identity(n)[:, extra]], axis=1)
    return [simple[:, [j]] for j in range(len(picked))], rest


def fitting_split(module: ModuleRep, rng: np.random.Generator, tries: int = 4):
    """Split ``module`` as ``ker f^n + im f^n`` for a random endomorphism ``f``.

    Returns the two bases or ``None`` when no splitting turned up.
    """
    p = module.p
    n, nu = module.dim, module.nu
    basis = hom_basis(module, module)
    if basis.shape[0] <= 1:
        return None
    gens = module.minimal_generators(module.gens)
    frame = np.concatenate([gens, module.radical], axis=1)
    frame_inv = la.inverse(frame, p)
    for _ in range(tries):
        phi = random_hom(basis, rng, p)
        # eigenvalues of phi all occur on the top M/mM
        top = la.matmul(frame_inv, la.matmul(phi, gens, p), p)[:nu]
        for lam in range(p):
            shifted = (top - lam * la.identity(nu)) % p
            if la.rank(shifted, p) == nu:
                continue
            psi = la.power((phi - lam * la.identity(n)) % p, n, p)
            r = la.rank(psi, p)
            if 0 < r < n:
                return la.kernel_basis(psi, p), la.colspace(psi, p)
            break
    return None


def decompose(module: ModuleRep, hom_limit: int = DEFAULT_HOM_LIMIT, seed: int = 0) -> list[np.ndarray]:
    """Bases, in module coordinates, of a direct sum decomposition.

    Summands isomorphic to k are always found.  Other splittings are searched
    for only while ``dim * nu <= hom_limit``; cyclic modules are indecomposable.
    """
    rng = np.random.default_rng(seed)
    return _decompose(module, hom_limit, rng)


def _decompose(module: ModuleRep, hom_limit: int, rng) -> list[np.ndarray]:
    p = module.p
    n = module.dim
    if n == 0:
        return []
    if module.nu <= 1:
        return [la.identity(n)]
    simple, rest = split_simple(module)
    if simple:
        out = list(simple)
        if rest.shape[1]:
            sub, b, _ = restrict_with_basis(module, rest)
            out += [la.matmul(b, piece, p) for piece in _decompose(sub, hom_limit, rng)]
        return out
    if n * module.nu > hom_limit:
        return [la.identity(n)]
    parts = fitting_split(module, rng)
    if parts is None:
        return [la.identity(n)]
    out = []
    for part in parts:
        sub, b, _ = restrict_with_basis(module, part)
        out += [la.matmul(b, piece, p) for piece in _decompose(sub, hom_limit, rng)]
    return out
