"""Truncated Ext and Tor tables computed on the syzygy tree.

For a node X with differential d : F_1 -> F_0 and children C (so that
Omega X is the sum of the children), the degree 0 and 1 groups come from the
blocks of ``Hom(d, N)`` and ``d (x) N``; in higher degrees

    Ext^i(X, N) = sum over C of Ext^{i-1}(C, N)    and likewise for Tor,

which holds for lengths and for minimal generator counts alike.  Ext^i needs
the differential leaving degree i, so an Ext table is one degree shorter
than the Betti table that the budget allows.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import linalg as la
from .modules import ModuleRep, matlis_dual, residue_field
from .resolution import (
    DEFAULT_MAX_DIM,
    DEFAULT_STEPS,
    BudgetExceeded,
    SyzygyNode,
    minimal_free_resolution,
)


class HomologyError(ValueError):
    pass


@dataclass
class HomologyTable:
    """Lengths and generator counts of Ext^i(M, N) or Tor_i(M, N) for i = 0..reached."""

    kind: str
    source: str
    target: str
    steps: int
    lengths: list[int]
    gens: list[int]
    stop_reason: str = ""

    @property
    def reached(self) -> int:
        return len(self.lengths) - 1

    @property
    def complete(self) -> bool:
        return self.reached >= self.steps

    def to_dict(self) -> dict:
        d = asdict(self)
        d["reached"] = self.reached
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self) -> str:
        tag = self.kind.lower()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", f"{tag}_length", f"{tag}_gens"])
        for i, (l, g) in enumerate(zip(self.lengths, self.gens)):
            w.writerow([i, l, g])
        return buf.getvalue()


# -- block helpers -----------------------------------------------------------


def _entry_ops(node: SyzygyNode, target: ModuleRep) -> np.ndarray:
    """``op_N(d[i, c])`` for every entry, shaped ``(nu, b1, n, n)``."""
    d = node.d1
    nu, b1, ell = d.shape
    n = target.dim
    flat = la.matmul(d.reshape(nu * b1, ell), target.mono_ops.reshape(ell, n * n), target.p)
    return flat.reshape(nu, b1, n, n)


def hom_block(node: SyzygyNode, target: ModuleRep) -> np.ndarray:
    """``Hom(d, N) : N^nu -> N^b1``."""
    ops = _entry_ops(node, target)
    nu, b1, n, _ = ops.shape
    return ops.transpose(1, 2, 0, 3).reshape(b1 * n, nu * n)


def tensor_block(node: SyzygyNode, target: ModuleRep) -> np.ndarray:
    """``d (x) N : N^b1 -> N^nu``."""
    ops = _entry_ops(node, target)
    nu, b1, n, _ = ops.shape
    return ops.transpose(0, 2, 1, 3).reshape(nu * n, b1 * n)


def radical_of(vectors: np.ndarray, target: ModuleRep) -> np.ndarray:
    """Spanning set of ``m V`` for columns ``V`` in ``N^r`` (blockwise actions)."""
    n = target.dim
    k = vectors.shape[1]
    if k == 0 or n == 0:
        return la.zeros(vectors.shape[0], 0)
    r = vectors.shape[0] // n
    stacked = vectors.reshape(r, n, k).transpose(1, 0, 2).reshape(n, r * k)
    parts = []
    for a in target.actions:
        img = la.matmul(a, stacked, target.p).reshape(n, r, k).transpose(1, 0, 2).reshape(r * n, k)
        parts.append(img)
    if not parts:
        return la.zeros(vectors.shape[0], 0)
    return np.concatenate(parts, axis=1)


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = la.zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


class _Memo:
    """Per (node, target) cache of the blocks and of per-degree results."""

    def __init__(self, node: SyzygyNode, target: ModuleRep):
        self.node = node
        self.target = target
        self.ext: dict[int, tuple[int, int]] = {}
        self.tor: dict[int, tuple[int, int]] = {}
        self._hom_kernel = None
        self._hom_rank = None
        self._tor_rank = None
        self._tor_image = None

    def hom_kernel(self) -> np.ndarray:
        if self._hom_kernel is None:
            block = hom_block(self.node, self.target)
            self._hom_kernel = la.kernel_basis(block, self.target.p)
            self._hom_rank = block.shape[1] - self._hom_kernel.shape[1]
        return self._hom_kernel

    def tor_image(self) -> np.ndarray:
        if self._tor_image is None:
            self._tor_image = la.colspace(tensor_block(self.node, self.target), self.target.p)
        return self._tor_image


class HomologyEngine:
    """Computes Ext and Tor against fixed targets, sharing work across sources."""

    def __init__(self, max_dim: int = DEFAULT_MAX_DIM):
        self.max_dim = max_dim
        self._memo: dict[tuple[int, int], _Memo] = {}
        self._keep: dict[int, object] = {}

    def memo(self, node: SyzygyNode, target: ModuleRep) -> _Memo:
        key = (id(node), id(target))
        m = self._memo.get(key)
        if m is None:
            node.expand(self.max_dim)
            rows = node.d1.shape[1] * target.dim
            cols = node.nu * target.dim
            if max(rows, cols) > self.max_dim:
                raise BudgetExceeded(max(rows, cols), self.max_dim, "Hom block")
            m = _Memo(node, target)
            self._memo[key] = m
            self._keep[id(node)] = node
            self._keep[id(target)] = target
        return m

    # -- Ext ---------------------------------------------------------------

    def ext(self, node: SyzygyNode, target: ModuleRep, i: int) -> tuple[int, int]:
        """``(length, nu)`` of ``Ext^i(node, target)``."""
        m = self.memo(node, target)
        if i in m.ext:
            return m.ext[i]
        p = target.p
        if target.dim == 0:
            val = (0, 0)
        elif i == 0:
            k0 = m.hom_kernel()
            val = (k0.shape[1], k0.shape[1] - la.rank(radical_of(k0, target), p))
        elif i == 1:
            val = self._ext1(m)
        else:
            length = gens = 0
            for child in node.children:
                l, g = self.ext(child, target, i - 1)
                length += l
                gens += g
            val = (length, gens)
        m.ext[i] = val
        return val

    def _ext1(self, m: _Memo) -> tuple[int, int]:
        node, target = m.node, m.target
        p = target.p
        m.hom_kernel()
        image = hom_block(node, target)
        kernels = [self.memo(c, target).hom_kernel() for c in node.children]
        if not kernels:
            return (0, 0)
        k1 = block_diag(kernels)
        if k1.shape[1] == 0:
            return (0, 0)
        length = k1.shape[1] - m._hom_rank
        rad = radical_of(k1, target)
        top = k1.shape[1] - la.rank(np.concatenate([rad, image], axis=1), p)
        return (length, top)

    # -- Tor ---------------------------------------------------------------

    def tor(self, node: SyzygyNode, target: ModuleRep, i: int) -> tuple[int, int]:
        """``(length, nu)`` of ``Tor_i(node, target)``."""
        m = self.memo(node, target)
        if i in m.tor:
            return m.tor[i]
        p = target.p
        if target.dim == 0:
            val = (0, 0)
        elif i == 0:
            img = m.tor_image()
            total = node.nu * target.dim
            rad = block_diag([target.radical] * node.nu) if node.nu else la.zeros(0, 0)
            val = (total - img.shape[1], total - la.rank(np.concatenate([img, rad], axis=1), p))
        elif i == 1:
            val = self._tor1(m)
        else:
            length = gens = 0
            for child in node.children:
                l, g = self.tor(child, target, i - 1)
                length += l
                gens += g
            val = (length, gens)
        m.tor[i] = val
        return val

    def _tor1(self, m: _Memo) -> tuple[int, int]:
        node, target = m.node, m.target
        p = target.p
        if not node.children:
            return (0, 0)
        z1 = la.kernel_basis(tensor_block(node, target), p)
        if z1.shape[1] == 0:
            return (0, 0)
        b1 = block_diag([self.memo(c, target).tor_image() for c in node.children])
        length = z1.shape[1] - b1.shape[1]
        rad = radical_of(z1, target)
        top = z1.shape[1] - la.rank(np.concatenate([rad, b1], axis=1), p)
        return (length, top)

    # -- tables ------------------------------------------------------------

    def table(self, kind: str, source: ModuleRep, target: ModuleRep, steps: int) -> HomologyTable:
        if source.algebra is not target.algebra:
            raise HomologyError("modules live over different algebras")
        res = minimal_free_resolution(source, steps, self.max_dim)
        fn = self.ext if kind == "Ext" else self.tor
        lengths: list[int] = []
        gens: list[int] = []
        reason = res.stop_reason
        for i in range(steps + 1):
            if i > res.reached:
                break
            try:
                l, g = fn(res.root, target, i)
            except BudgetExceeded as exc:
                reason = str(exc)
                break
            lengths.append(l)
            gens.append(g)
        return HomologyTable(kind, source.name, target.name, steps, lengths, gens, reason)


_DEFAULT_ENGINES: dict[int, HomologyEngine] = {}


def engine_for(max_dim: int = DEFAULT_MAX_DIM) -> HomologyEngine:
    eng = _DEFAULT_ENGINES.get(max_dim)
    if eng is None:
        eng = _DEFAULT_ENGINES[max_dim] = HomologyEngine(max_dim)
    return eng


def ext_table(M: ModuleRep, N: ModuleRep, steps: int = DEFAULT_STEPS, max_dim: int = DEFAULT_MAX_DIM) -> HomologyTable:
    return engine_for(max_dim).table("Ext", M, N, steps)


def tor_table(M: ModuleRep, N: ModuleRep, steps: int = DEFAULT_STEPS, max_dim: int = DEFAULT_MAX_DIM) -> HomologyTable:
    return engine_for(max_dim).table("Tor", M, N, steps)


def bass_numbers(M: ModuleRep, steps: int = DEFAULT_STEPS, max_dim: int = DEFAULT_MAX_DIM) -> list[int]:
    """``mu^i(M) = l(Ext^i(k, M))``."""
    return ext_table(residue_field(M.algebra), M, steps, max_dim).lengths


def dual_tor_table(M: ModuleRep, N: ModuleRep, steps: int = DEFAULT_STEPS, max_dim: int = DEFAULT_MAX_DIM) -> HomologyTable:
    """``Tor_i(M, N^v)``, whose lengths must match ``Ext^i(M, N)``."""
    return tor_table(M, matlis_dual(N), steps, max_dim)
