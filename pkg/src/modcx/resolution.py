"""Truncated minimal free resolutions.

A resolution is stored as a tree of syzygy nodes.  Expanding a node covers its
module by a free module on a minimal generating set, takes the kernel, splits
the kernel into summands and files each summand in a per-algebra registry, so
that isomorphic summands (k above all) are resolved once.  The node's
differential ``d1`` maps the free module on the children's generators onto
that kernel.  Betti numbers, Ext and Tor are additive over the children.

Coordinates on a free module ``R^t`` are ordered ``(generator, basis monomial)``.
A differential is stored as an array ``(rows, cols, l(R))`` of ring elements.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .algebra import ArtinAlgebra
from .decompose import DEFAULT_HOM_LIMIT, decompose, find_isomorphism
from .modules import ModuleRep, annihilator_ideal, direct_sum, restrict_with_basis, zero_module

DEFAULT_STEPS = 20
# Largest k-dimension of any linear system the engine will set up.
DEFAULT_MAX_DIM = 2400


class ResolutionError(RuntimeError):
    pass


class BudgetExceeded(ResolutionError):
    """A requested computation needs a linear system larger than the budget."""

    def __init__(self, needed: int, budget: int, what: str = "syzygy"):
        super().__init__(f"{what} needs dimension {needed}, budget is {budget}")
        self.needed = needed
        self.budget = budget


def ring_matrix_to_k(algebra: ArtinAlgebra, d: np.ndarray) -> np.ndarray:
    """k-matrix of an R-matrix ``d`` of shape ``(rows, cols, l(R))``."""
    rows, cols, ell = d.shape
    k = np.einsum("icm,mab->iacb", d, algebra.mono_ops) % algebra.p
    return k.reshape(rows * ell, cols * ell)


def apply_free_action(algebra: ArtinAlgebra, j: int, vecs: np.ndarray, rank: int) -> np.ndarray:
    """Multiply columns of ``R^rank`` coordinates by the j-th variable."""
    ell = algebra.dim
    v = vecs.reshape(rank, ell, -1)
    out = np.einsum("ab,gbd->gad", algebra.var_actions[j], v) % algebra.p
    return out.reshape(rank * ell, -1)


def _socle_equations(algebra: ArtinAlgebra) -> np.ndarray:
    """Independent rows cutting ``Soc R`` out of ``R``."""
    eq = algebra.__dict__.get("_socle_equations")
    if eq is None:
        stacked = np.concatenate(algebra.var_actions, axis=0) if algebra.nvars else la.zeros(0, algebra.dim)
        eq = la.colspace(stacked.T, algebra.p).T.copy()
        algebra.__dict__["_socle_equations"] = eq
    return eq


def _syzygy_socle(algebra: ArtinAlgebra, kern: np.ndarray, rank: int) -> np.ndarray:
    """``Soc(Omega) = Omega ∩ Soc(R^rank)`` in the coordinates of ``kern``.

    This solves a system with ``rank * (l(R) - r)`` rows instead of one with
    ``nvars * dim Omega`` rows; both have the same kernel, and the kernel basis
    read off the rref depends only on the kernel.
    """
    p = algebra.p
    ell = algebra.dim
    d = kern.shape[1]
    if d == 0:
        return la.zeros(0, 0)
    eq = _socle_equations(algebra)
    blocks = kern.reshape(rank, ell, d).transpose(1, 0, 2).reshape(ell, rank * d)
    system = la.matmul(eq, blocks, p).reshape(eq.shape[0], rank, d).transpose(1, 0, 2)
    return la.kernel_basis(system.reshape(-1, d), p)


class SyzygyNode:
    """One module in the syzygy tree, with a fixed minimal generating set."""

    def __init__(self, uid: int, module: ModuleRep | None, gens: np.ndarray | None, nu: int):
        self.uid = uid
        self.module = module
        self.gens = gens
        self.nu = nu
        self.d1: np.ndarray | None = None
        self.children: list[SyzygyNode] | None = None
        self.registry: SyzygyRegistry | None = None

    @property
    def expanded(self) -> bool:
        return self.children is not None

    def expand(self, max_dim: int = DEFAULT_MAX_DIM) -> None:
        if self.children is not None:
            return
        if self.module is None or self.registry is None:
            raise ResolutionError(f"node {self.uid} has no module to resolve")
        module = self.module
        algebra = module.algebra
        p = algebra.p
        ell = algebra.dim
        nu = self.nu
        if nu * ell > max_dim:
            raise BudgetExceeded(nu * ell, max_dim)
        cover = module.cover_map(self.gens)
        kern, free = la.kernel_with_free(cover, p)
        acts = [apply_free_action(algebra, j, kern, nu)[free, :] for j in range(algebra.nvars)]
        omega = ModuleRep(algebra, acts, None, check=False)
        omega.__dict__["socle"] = _syzygy_socle(algebra, kern, nu)
        cols = []
        children = []
        pieces = decompose(omega, self.registry.hom_limit)
        for piece in pieces:
            if len(pieces) == 1:
                sub, b = omega, la.identity(omega.dim)
            else:
                sub, b, _ = restrict_with_basis(omega, piece)
            node, g = self.registry.intern(sub)
            cols.append(la.matmul(kern, la.matmul(b, g, p), p))
            children.append(node)
        d = np.concatenate(cols, axis=1) if cols else la.zeros(nu * ell, 0)
        self.d1 = d.reshape(nu, ell, -1).transpose(0, 2, 1).copy()
        self.children = children

    def __repr__(self):
        dim = self.module.dim if self.module is not None else "?"
        return f"<SyzygyNode {self.uid}: length {dim}, nu {self.nu}>"


class SyzygyRegistry:
    """Interns syzygy summands up to isomorphism for one algebra.

    Cyclic modules are keyed exactly by their annihilator.  Other modules are
    bucketed by numerical invariants and matched by an explicit isomorphism
    when the Hom computation is small enough.
    """

    def __init__(self, algebra: ArtinAlgebra, hom_limit: int = DEFAULT_HOM_LIMIT):
        self.algebra = algebra
        self.hom_limit = hom_limit
        self.nodes: list[SyzygyNode] = []
        self._cyclic: dict[bytes, SyzygyNode] = {}
        self._buckets: dict[tuple, list[SyzygyNode]] = defaultdict(list)

    def new_node(self, module: ModuleRep | None, gens, nu: int) -> SyzygyNode:
        node = SyzygyNode(len(self.nodes), module, gens, nu)
        node.registry = self
        self.nodes.append(node)
        return node

    def _signature(self, module: ModuleRep) -> tuple:
        p = module.p
        ann = annihilator_ideal(self.algebra, module).basis
        ranks = tuple(la.rank(a, p) for a in module.actions)
        return (module.invariants(), ranks, ann.shape, ann.tobytes())

    def intern(self, module: ModuleRep) -> tuple[SyzygyNode, np.ndarray]:
        """The registered node for ``module`` and its generators moved into ``module``."""
        if module.nu == 1:
            ann = annihilator_ideal(self.algebra, module).basis
            key = ann.tobytes() + bytes(str(ann.shape), "ascii")
            node = self._cyclic.get(key)
            if node is None:
                node = self.new_node(module, module.gens, 1)
                self._cyclic[key] = node
                return node, module.gens
            # any generator of a cyclic module has the same annihilator
            return node, module.gens
        if module.dim * module.nu > self.hom_limit:
            # too large to match; resolve it on its own
            return self.new_node(module, module.gens, module.nu), module.gens
        bucket = self._buckets[self._signature(module)]
        for cand in bucket:
            phi = find_isomorphism(cand.module, module)
            if phi is not None:
                return cand, la.matmul(phi, cand.gens, module.p)
        node = self.new_node(module, module.gens, module.nu)
        bucket.append(node)
        return node, module.gens


def registry_for(algebra: ArtinAlgebra) -> SyzygyRegistry:
    reg = algebra.__dict__.get("_syzygy_registry")
    if reg is None:
        reg = SyzygyRegistry(algebra)
        algebra.__dict__["_syzygy_registry"] = reg
    return reg


def levels(root: SyzygyNode, depth: int, max_dim: int = DEFAULT_MAX_DIM):
    """Yield ``(i, {uid: (node, multiplicity)})`` for i = 0..depth, expanding as needed.

    A node over budget raises :class:`BudgetExceeded`; every level yielded
    before that is complete.
    """
    level = {root.uid: (root, 1)}
    for i in range(depth + 1):
        yield i, level
        if i == depth:
            return
        nxt: dict[int, tuple[SyzygyNode, int]] = {}
        for node, mult in level.values():
            node.expand(max_dim)
            for child in node.children:
                _, m = nxt.get(child.uid, (child, 0))
                nxt[child.uid] = (child, m + mult)
        level = nxt


@dataclass
class FreeResolution:
    """A minimal free resolution of ``module`` computed through degree ``reached``.

    ``steps`` is the requested truncation; ``reached < steps`` means the
    budget stopped the computation and ``betti`` has ``reached + 1`` entries.
    """

    module: ModuleRep | None
    steps: int
    root: SyzygyNode
    betti: list[int]
    reached: int
    max_dim: int = DEFAULT_MAX_DIM
    stop_reason: str = ""
    hand_built: bool = field(default=False, repr=False)

    @property
    def complete(self) -> bool:
        return self.reached >= self.steps

    def level(self, i: int) -> dict[int, tuple[SyzygyNode, int]]:
        if i > self.reached:
            raise ResolutionError(f"degree {i} beyond the computed range 0..{self.reached}")
        for j, lev in levels(self.root, i, self.max_dim):
            if j == i:
                return lev
        raise AssertionError("unreachable")

    def summands(self, i: int) -> list[SyzygyNode]:
        """The nodes whose direct sum is the i-th syzygy, in differential order."""
        out = [self.root]
        for _ in range(i):
            nxt = []
            for node in out:
                node.expand(self.max_dim)
                nxt.extend(node.children)
            out = nxt
        return out

    def differential(self, i: int, limit: int = 20000) -> np.ndarray:
        """``d_i : F_i -> F_{i-1}`` as an R-matrix of shape ``(b_{i-1}, b_i, l(R))``."""
        if not 1 <= i <= self.reached:
            raise ResolutionError(f"differential {i} outside 1..{self.reached}")
        rows, cols = self.betti[i - 1], self.betti[i]
        if rows * cols > limit:
            raise BudgetExceeded(rows * cols, limit, "differential")
        ell = self.root_algebra.dim
        out = np.zeros((rows, cols, ell), dtype=np.int64)
        r = c = 0
        for node in self.summands(i - 1):
            node.expand(self.max_dim)
            d = node.d1
            out[r : r + d.shape[0], c : c + d.shape[1]] = d
            r += d.shape[0]
            c += d.shape[1]
        return out

    @property
    def root_algebra(self) -> ArtinAlgebra:
        if self.module is not None:
            return self.module.algebra
        return self.root.registry.algebra

    @classmethod
    def from_differentials(cls, module: ModuleRep, diffs: list, gens=None) -> "FreeResolution":
        """Wrap hand-supplied differentials ``d_1..d_n`` (R-matrices) for verification.

        ``d_1`` must be written against ``gens`` (default: the module's generators).
        """
        algebra = module.algebra
        reg = SyzygyRegistry(algebra)
        g = module.gens if gens is None else np.asarray(gens, dtype=np.int64) % algebra.p
        root = reg.new_node(module, g, g.shape[1])
        node = root
        betti = [g.shape[1]]
        for d in diffs:
            d = np.asarray(d, dtype=np.int64) % algebra.p
            if d.ndim != 3 or d.shape[0] != node.nu or d.shape[2] != algebra.dim:
                raise ResolutionError(f"differential of shape {d.shape} does not fit rank {node.nu}")
            child = reg.new_node(None, None, d.shape[1])
            node.d1 = d
            node.children = [child]
            betti.append(d.shape[1])
            node = child
        return cls(module, len(diffs), root, betti, len(diffs), hand_built=True)


def minimal_free_resolution(
    module: ModuleRep, steps: int = DEFAULT_STEPS, max_dim: int = DEFAULT_MAX_DIM
) -> FreeResolution:
    """Resolve ``module`` through degree ``steps`` or until the budget runs out."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    reg = registry_for(module.algebra)
    root = module.__dict__.get("_syzygy_root")
    if root is None or root.registry is not reg:
        gens = module.minimal_generators(module.gens)
        root = reg.new_node(module, gens, gens.shape[1])
        module.__dict__["_syzygy_root"] = root
    betti: list[int] = []
    reason = ""
    it = levels(root, steps, max_dim)
    while True:
        try:
            _, lev = next(it)
        except StopIteration:
            break
        except BudgetExceeded as exc:
            reason = str(exc)
            break
        betti.append(sum(node.nu * mult for node, mult in lev.values()))
    return FreeResolution(module, steps, root, betti, len(betti) - 1, max_dim, reason)


def betti(module: ModuleRep, steps: int = DEFAULT_STEPS, max_dim: int = DEFAULT_MAX_DIM) -> list[int]:
    return minimal_free_resolution(module, steps, max_dim).betti


def syzygy(module: ModuleRep, j: int, max_dim: int = DEFAULT_MAX_DIM) -> ModuleRep:
    """The j-th syzygy as one module, assembled from the summands of the tree."""
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return module
    res = minimal_free_resolution(module, j, max_dim)
    if res.reached < j:
        raise BudgetExceeded(res.max_dim + 1, res.max_dim, f"syzygy {j}")
    total = sum(node.module.dim * mult for node, mult in res.level(j).values())
    if total > max_dim:
        raise BudgetExceeded(total, max_dim, f"syzygy {j}")
    parts = [node.module for node in res.summands(j)]
    if not parts:
        return zero_module(module.algebra)
    return direct_sum(*parts, name=f"Omega^{j}({module.name})" if module.name else "")


@dataclass
class ResolutionVerdict:
    ok: bool
    failure: str = ""
    degree: int | None = None
    nodes_checked: int = 0

    def __bool__(self):
        return self.ok


def _distinct_nodes(res: FreeResolution) -> list[tuple[int, SyzygyNode]]:
    """Each distinct node with the smallest degree at which it occurs."""
    seen: set[int] = set()
    out = []
    frontier = [res.root]
    for depth in range(res.reached):
        nxt = []
        for node in frontier:
            if node.uid in seen:
                continue
            seen.add(node.uid)
            if node.d1 is None:
                node.expand(res.max_dim)
            out.append((depth, node))
            nxt.extend(node.children)
        frontier = nxt
    return out


def verify_resolution(res: FreeResolution) -> ResolutionVerdict:
    """Check minimality, the complex property, exactness and ``b_0 = nu(M)``, in that order.

    Each distinct node is checked once, at the smallest degree where it occurs;
    at degree i the node's differential is ``d_{i+1}``.
    """
    algebra = res.root_algebra
    p = algebra.p
    ell = algebra.dim
    module = res.module
    nodes = _distinct_nodes(res)

    for depth, node in nodes:
        if node.d1[:, :, algebra.unit_index].any():
            return ResolutionVerdict(False, f"d_{depth + 1} has an entry outside m", depth + 1)

    root = res.root
    if module is not None and res.reached >= 1:
        cover = module.cover_map(root.gens)
        k1 = ring_matrix_to_k(algebra, root.d1)
        if la.rank(cover, p) != module.dim:
            return ResolutionVerdict(False, "cover map F_0 -> M is not onto", 0)
        if la.matmul(cover, k1, p).any():
            return ResolutionVerdict(False, "composite F_1 -> F_0 -> M is nonzero", 0)
        if la.rank(k1, p) != root.nu * ell - module.dim:
            return ResolutionVerdict(False, "not exact at F_0", 0)

    for depth, node in nodes:
        if depth + 1 >= res.reached:
            continue
        kd = ring_matrix_to_k(algebra, node.d1)
        col = 0
        image_rank = 0
        for child in node.children:
            if child.d1 is None:
                child.expand(res.max_dim)
            kc = ring_matrix_to_k(algebra, child.d1)
            block = kd[:, col * ell : (col + child.nu) * ell]
            if la.matmul(block, kc, p).any():
                return ResolutionVerdict(False, f"d_{depth + 1} d_{depth + 2} is nonzero", depth + 1)
            image_rank += la.rank(kc, p)
            col += child.nu
        kernel_dim = kd.shape[1] - la.rank(kd, p)
        if kernel_dim != image_rank:
            return ResolutionVerdict(
                False, f"not exact at F_{depth + 1}: kernel {kernel_dim}, image {image_rank}", depth + 1
            )

    if module is not None and root.nu != module.nu:
        return ResolutionVerdict(False, f"b_0 = {root.nu} but nu(M) = {module.nu}", 0)
    return ResolutionVerdict(True, nodes_checked=len(nodes))


__all__ = [
    "BudgetExceeded",
    "DEFAULT_MAX_DIM",
    "DEFAULT_STEPS",
    "FreeResolution",
    "ResolutionError",
    "ResolutionVerdict",
    "SyzygyNode",
    "SyzygyRegistry",
    "betti",
    "minimal_free_resolution",
    "registry_for",
    "ring_matrix_to_k",
    "syzygy",
    "verify_resolution",
]
