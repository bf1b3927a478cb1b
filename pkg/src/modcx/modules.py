"""Finitely generated modules over an ArtinAlgebra, realized as k-spaces with actions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .algebra import ArtinAlgebra, IdealSubspace, monomial_operators, stable_closure
from .polynomial import Poly


class ModuleError(ValueError):
    pass


@dataclass
class ModulePresentation:
    """``coker(R^s -> R^t)``: each row of ``relations`` is one relation among ``ngens`` generators.

    Entries may be ring-element vectors, polynomial strings or polynomial dicts.
    """

    name: str
    ngens: int
    relations: list = field(default_factory=list)

    def canonical(self, algebra: ArtinAlgebra) -> dict:
        rows = [[algebra.format_element(algebra.element(e)) for e in row] for row in self.relations]
        return {"gens": self.ngens, "relations": rows}


class ModuleRep:
    """A module as a k-space of dimension ``dim`` with one action matrix per variable.

    ``gens`` holds generator images as columns; when omitted a minimal generating
    set is chosen from the standard basis.
    """

    def __init__(self, algebra: ArtinAlgebra, actions, gens=None, name: str = "", check: bool = True):
        self.algebra = algebra
        self.p = algebra.p
        acts = [np.array(a, dtype=np.int64) % self.p for a in actions]
        if len(acts) != algebra.nvars:
            raise ModuleError(f"expected {algebra.nvars} action matrices, got {len(acts)}")
        if acts:
            n = acts[0].shape[0] if acts[0].ndim == 2 else 0
        else:
            n = 0 if gens is None else np.asarray(gens).shape[0]
        acts = [a.reshape(n, n) for a in acts]
        for a in acts:
            a.setflags(write=False)
        self.actions: list[np.ndarray] = acts
        self.dim = n
        self.name = name
        if check:
            self._check_compatible()
        if gens is None:
            # unit vectors off the pivot rows of mM complete it to a basis
            piv = set(self._radical_echelon[1])
            gens = la.identity(n)[:, [i for i in range(n) if i not in piv]]
        else:
            gens = np.asarray(gens, dtype=np.int64).reshape(n, -1) % self.p
            span = stable_closure(self.actions, gens, self.p)
            if span.shape[1] != n:
                raise ModuleError("generator images do not span the module")
        gens.setflags(write=False)
        self.gens = gens

    # -- validation ------------------------------------------------------

    def _check_compatible(self):
        p = self.p
        for a, b in itertools.combinations(self.actions, 2):
            if not np.array_equal(la.matmul(a, b, p), la.matmul(b, a, p)):
                raise ModuleError("module actions do not commute")
        for f in self.algebra.relations:
            if evaluate_polynomial(f, self.actions, self.dim, p).any():
                raise ModuleError("module actions do not satisfy the ring relations")
        cap = self.algebra.cap
        for e in itertools.combinations_with_replacement(range(self.algebra.nvars), cap):
            op = la.identity(self.dim)
            for j in e:
                op = la.matmul(self.actions[j], op, p)
            if op.any():
                raise ModuleError("module actions are not nilpotent of the required order")

    # -- basic structure -------------------------------------------------

    @cached_property
    def mono_ops(self) -> np.ndarray:
        return monomial_operators(self.algebra, self.actions, self.dim)

    def op(self, a) -> np.ndarray:
        """Matrix of multiplication by the ring element ``a``."""
        a = self.algebra.element(a)
        if self.dim == 0:
            return la.zeros(0, 0)
        return np.tensordot(a, self.mono_ops, axes=(0, 0)) % self.p

    @cached_property
    def _radical_echelon(self) -> tuple[np.ndarray, list[int]]:
        if self.dim == 0 or not self.actions:
            return la.zeros(self.dim, 0), []
        return la.echelon_basis(np.concatenate(self.actions, axis=1), self.p)

    @property
    def radical(self) -> np.ndarray:
        """Basis of ``mM`` in reduced echelon form."""
        return self._radical_echelon[0]

    @cached_property
    def socle(self) -> np.ndarray:
        """Basis of ``Soc M``."""
        if not self.actions:
            return la.identity(self.dim)
        return la.kernel_basis(np.concatenate(self.actions, axis=0), self.p)

    @property
    def length(self) -> int:
        return self.dim

    @cached_property
    def nu(self) -> int:
        return self.dim - self.radical.shape[1]

    @property
    def ngens(self) -> int:
        return self.gens.shape[1]

    @cached_property
    def radical_ladder(self) -> list[int]:
        """``[l(M), l(mM), l(m^2 M), ...]`` ending with the first zero."""
        p = self.p
        out = [self.dim]
        current = la.identity(self.dim)
        while current.shape[1]:
            if not self.actions:
                current = la.zeros(self.dim, 0)
            else:
                current = la.colspace(
                    np.concatenate([la.matmul(a, current, p) for a in self.actions], axis=1), p
                )
            out.append(current.shape[1])
        return out

    def _greedy_generators(self, candidates: np.ndarray) -> list[int]:
        rad = self.radical
        cols = la.independent_columns(np.concatenate([rad, candidates], axis=1), self.p)
        return [c - rad.shape[1] for c in cols if c >= rad.shape[1]]

    def minimal_generators(self, preferred=None) -> np.ndarray:
        """Columns lifting a basis of ``M/mM``, drawn from ``preferred`` first."""
        cands = [la.identity(self.dim)]
        if preferred is not None and np.asarray(preferred).size:
            cands.insert(0, np.asarray(preferred, dtype=np.int64).reshape(self.dim, -1) % self.p)
        cand = np.concatenate(cands, axis=1)
        return cand[:, self._greedy_generators(cand)]

    def cover_map(self, gens=None) -> np.ndarray:
        """k-matrix of ``R^t -> M`` sending the t-th basis vector to the t-th generator.

        Free-module coordinates are ordered ``(generator, basis monomial)``.
        """
        g = self.gens if gens is None else gens
        ell = self.algebra.dim
        if self.dim == 0:
            return la.zeros(0, g.shape[1] * ell)
        n = self.dim
        prod = la.matmul(self.mono_ops.reshape(ell * n, n), g, self.p).reshape(ell, n, g.shape[1])
        return prod.transpose(1, 2, 0).reshape(n, g.shape[1] * ell).copy()

    def is_zero(self) -> bool:
        return self.dim == 0

    def invariants(self) -> tuple:
        return (self.dim, self.nu, self.socle.shape[1], tuple(self.radical_ladder))

    def __repr__(self):
        label = self.name or "ModuleRep"
        return f"<{label}: length {self.dim}, nu {self.nu}>"


def evaluate_polynomial(f: Poly, actions, n: int, p: int) -> np.ndarray:
    out = la.zeros(n, n)
    for e, c in f.items():
        op = la.identity(n)
        for j, k in enumerate(e):
            for _ in range(k):
                op = la.matmul(actions[j], op, p)
        out = (out + c * op) % p
    return out


@dataclass(eq=False)
class Submodule:
    parent: ModuleRep
    basis: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def as_module(self, name: str = "") -> ModuleRep:
        return restrict(self.parent, self.basis, name=name)


# -- free modules and constructions ---------------------------------------


def free_actions(algebra: ArtinAlgebra, rank: int) -> list[np.ndarray]:
    """Actions on ``R^rank`` with coordinates ordered ``(generator, monomial)``."""
    eye = la.identity(rank)
    return [np.kron(eye, a) for a in algebra.var_actions]


def free_module(algebra: ArtinAlgebra, rank: int = 1, name: str = "") -> ModuleRep:
    ell = algebra.dim
    gens = la.zeros(rank * ell, rank)
    for g in range(rank):
        gens[g * ell + algebra.unit_index, g] = 1
    return ModuleRep(algebra, free_actions(algebra, rank), gens, name=name or f"R^{rank}", check=False)


def residue_field(algebra: ArtinAlgebra) -> ModuleRep:
    return ModuleRep(algebra, [la.zeros(1, 1) for _ in range(algebra.nvars)], la.identity(1), name="k", check=False)


def zero_module(algebra: ArtinAlgebra) -> ModuleRep:
    return ModuleRep(algebra, [la.zeros(0, 0) for _ in range(algebra.nvars)], la.zeros(0, 0), name="0", check=False)


def restrict(module: ModuleRep, basis: np.ndarray, name: str = "") -> ModuleRep:
    """The submodule spanned by the stable subspace ``basis`` as a module in its own right."""
    p = module.p
    b, rows = la.echelon_basis(basis, p)
    acts = [la.matmul(a, b, p)[rows, :] for a in module.actions]
    if len(rows) == 0:
        acts = [la.zeros(0, 0) for _ in module.actions]
    return ModuleRep(module.algebra, acts, None, name=name, check=False)


def restrict_with_basis(module: ModuleRep, basis: np.ndarray):
    """Like :func:`restrict` but also returns the echelon basis used for coordinates."""
    p = module.p
    b, rows = la.echelon_basis(basis, p)
    acts = [la.matmul(a, b, p)[rows, :] for a in module.actions]
    if len(rows) == 0:
        acts = [la.zeros(0, 0) for _ in module.actions]
    return ModuleRep(module.algebra, acts, None, check=False), b, rows


def quotient(module: ModuleRep, sub: np.ndarray, name: str = "") -> tuple[ModuleRep, np.ndarray]:
    """``M / S`` for a stable subspace ``S``; returns the module and the projection matrix."""
    p = module.p
    n = module.dim
    if sub.shape[1]:
        red, pivots = la.rref(sub.T, p)
        red = red[: len(pivots)]
    else:
        red, pivots = la.zeros(0, n), []
    piv_set = set(pivots)
    keep = [c for c in range(n) if c not in piv_set]
    proj = la.identity(n)[keep, :]
    if pivots:
        proj = (proj - la.matmul(red[:, keep].T, la.identity(n)[pivots, :], p)) % p
    lift = la.identity(n)[:, keep]
    acts = [la.matmul(la.matmul(proj, a, p), lift, p) for a in module.actions]
    gens = la.matmul(proj, module.gens, p)
    q = ModuleRep(module.algebra, acts, gens if len(keep) else la.zeros(0, 0), name=name, check=False)
    return q, proj


def realize(algebra: ArtinAlgebra, pres: ModulePresentation) -> ModuleRep:
    """``coker(R^s -> R^t)`` realized as a quotient of the free k-space ``R^t``."""
    t = pres.ngens
    ell = algebra.dim
    p = algebra.p
    free = free_module(algebra, t)
    rows = []
    for r, row in enumerate(pres.relations):
        if len(row) != t:
            raise ModuleError(f"relation {r} has {len(row)} entries, expected {t}")
        v = np.zeros(t * ell, dtype=np.int64)
        for g, entry in enumerate(row):
            try:
                v[g * ell : (g + 1) * ell] = algebra.element(entry)
            except ValueError as exc:
                raise ModuleError(f"relation {r}, entry {g}: {exc}") from exc
        rows.append(v.reshape(-1, 1))
    start = np.concatenate(rows, axis=1) if rows else la.zeros(t * ell, 0)
    sub = stable_closure(free.actions, start, p)
    q, _ = quotient(free, sub, name=pres.name)
    return q


def length(module: ModuleRep) -> int:
    return module.dim


def min_gens(module: ModuleRep) -> int:
    return module.nu


def radical_submodule(module: ModuleRep) -> Submodule:
    return Submodule(module, module.radical)


def socle_submodule(module: ModuleRep) -> Submodule:
    return Submodule(module, module.socle)


def matlis_dual(module: ModuleRep, name: str = "") -> ModuleRep:
    """``Hom_k(M, k)`` with transposed actions."""
    acts = [a.T.copy() for a in module.actions]
    label = name or (f"{module.name}^v" if module.name else "")
    return ModuleRep(module.algebra, acts, None, name=label, check=False)


def injective_hull(algebra: ArtinAlgebra) -> ModuleRep:
    """``E = R^v``, the injective envelope of the residue field."""
    return matlis_dual(free_module(algebra, 1), name="E")


def direct_sum(*modules: ModuleRep, name: str = "") -> ModuleRep:
    if not modules:
        raise ModuleError("direct_sum needs at least one summand")
    algebra = modules[0].algebra
    for m in modules:
        if m.algebra is not algebra:
            raise ModuleError("summands live over different algebras")
    sizes = [m.dim for m in modules]
    n = sum(sizes)
    acts = []
    for j in range(algebra.nvars):
        a = la.zeros(n, n)
        off = 0
        for m in modules:
            a[off : off + m.dim, off : off + m.dim] = m.actions[j]
            off += m.dim
        acts.append(a)
    gens = la.zeros(n, sum(m.ngens for m in modules))
    off = col = 0
    for m in modules:
        gens[off : off + m.dim, col : col + m.ngens] = m.gens
        off += m.dim
        col += m.ngens
    return ModuleRep(algebra, acts, gens, name=name, check=False)


def annihilator_ideal(algebra: ArtinAlgebra, sub: Submodule | ModuleRep) -> IdealSubspace:
    """``{a in R : a S = 0}``."""
    if isinstance(sub, ModuleRep):
        sub = Submodule(sub, la.identity(sub.dim))
    p = algebra.p
    parent = sub.parent
    if sub.dim == 0:
        return IdealSubspace(algebra, la.identity(algebra.dim))
    # column m of the system: (monomial m) applied to the subspace basis
    n, ell = parent.dim, algebra.dim
    prod = la.matmul(parent.mono_ops.reshape(ell * n, n), sub.basis, p).reshape(ell, n * sub.dim)
    system = prod.T
    return IdealSubspace(algebra, la.colspace(la.kernel_basis(system, p), p))


def radical_annihilator(module: ModuleRep) -> IdealSubspace:
    """The largest ideal ``I`` with ``(I m) N = 0``, namely ``ann(mN)``."""
    return annihilator_ideal(module.algebra, radical_submodule(module))


def is_free(module: ModuleRep) -> bool:
    ell = module.algebra.dim
    if module.dim != module.nu * ell:
        return False
    gens = module.minimal_generators()
    return la.rank(module.cover_map(gens), module.p) == module.nu * ell


def is_injective(module: ModuleRep) -> bool:
    return is_free(matlis_dual(module))


def loewy_annihilated(module: ModuleRep, j: int) -> bool:
    """True when ``m^j M = 0``."""
    ladder = module.radical_ladder
    return j >= len(ladder) - 1 or ladder[j] == 0
