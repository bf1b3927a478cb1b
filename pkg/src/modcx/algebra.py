"""Finite-dimensional local algebras ``k[x_1..x_n] / (I + m^cap)`` over GF(p)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg as la
from .polynomial import Poly, format_monomial, parse_polynomial


class AlgebraError(ValueError):
    pass


class CapTooSmallError(AlgebraError):
    """The truncation degree does not lie above the nilpotency index."""

    def __init__(self, cap: int, dim_cap: int, dim_next: int, saturating_cap: int | None):
        hint = (
            f"; smallest saturating cap is {saturating_cap}"
            if saturating_cap is not None
            else "; no saturating cap found nearby (is the quotient artinian?)"
        )
        super().__init__(
            f"cap too small: saturation fails at degree {cap} "
            f"(dim {dim_cap} at cap {cap} vs {dim_next} at cap {cap + 1}){hint}"
        )
        self.cap = cap
        self.failing_degree = cap
        self.saturating_cap = saturating_cap


@dataclass(frozen=True)
class AlgebraSpec:
    variables: tuple[str, ...]
    relations: tuple[str, ...]
    cap: int
    prime: int = la.DEFAULT_PRIME
    name: str = ""
    ci_codim: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.cap < 1:
            raise AlgebraError("cap must be a positive integer")
        if len(set(self.variables)) != len(self.variables):
            raise AlgebraError("variable names must be distinct")
        if not la.is_prime(self.prime):
            raise AlgebraError(f"{self.prime} is not prime")

    def canonical(self) -> dict:
        return {
            "field": self.prime,
            "vars": list(self.variables),
            "relations": list(self.relations),
            "cap": self.cap,
        }


def _monomials(nvars: int, below: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree < ``below``, highest degree first."""
    out = [
        e
        for e in itertools.product(range(below), repeat=nvars)
        if sum(e) < below
    ]
    out.sort(key=lambda e: (-sum(e), tuple(-x for x in e)))
    return out


def _quotient_data(nvars: int, relations: list[Poly], cap: int, p: int):
    monos = _monomials(nvars, cap)
    col = {e: i for i, e in enumerate(monos)}
    rows = []
    for f in relations:
        for m in monos:
            v = np.zeros(len(monos), dtype=np.int64)
            for e, c in f.items():
                prod = tuple(a + b for a, b in zip(e, m))
                if sum(prod) < cap:
                    v[col[prod]] = (v[col[prod]] + c) % p
            if v.any():
                rows.append(v)
    if rows:
        red, pivots = la.rref(np.array(rows), p)
        red = red[: len(pivots)]
    else:
        red, pivots = la.zeros(0, len(monos)), []
    return monos, red, pivots


class ArtinAlgebra:
    """A local artinian algebra given by a monomial basis and multiplication matrices.

    ``var_actions[j]`` is multiplication by the j-th variable on the basis;
    ``mono_ops[m]`` is multiplication by the m-th basis monomial.
    """

    def __init__(self, spec: AlgebraSpec, polys: list[Poly]):
        self.spec = spec
        self.p = spec.prime
        self.variables = list(spec.variables)
        self.nvars = len(self.variables)
        self.cap = spec.cap
        self.relations = polys
        self.ci_codim = spec.ci_codim
        self.name = spec.name

        p = self.p
        monos, red, pivots = _quotient_data(self.nvars, polys, self.cap, p)
        piv_set = set(pivots)
        free = [i for i in range(len(monos)) if i not in piv_set]
        basis = [monos[i] for i in free]
        basis.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
        self.basis: list[tuple[int, ...]] = basis
        self.dim = len(basis)
        index = {e: i for i, e in enumerate(basis)}
        self._index = index

        # normal forms of every monomial of degree < cap
        nf: dict[tuple[int, ...], np.ndarray] = {}
        for i, e in enumerate(monos):
            v = np.zeros(self.dim, dtype=np.int64)
            if e in index:
                v[index[e]] = 1
            else:
                row = red[pivots.index(i)]
                for j in free:
                    if row[j]:
                        v[index[monos[j]]] = (-row[j]) % p
            nf[e] = v
        self._nf = nf
        if self.dim and basis[0] != (0,) * self.nvars:
            raise AlgebraError("relations must have zero constant term")
        self.unit_index = 0

        acts = []
        for j in range(self.nvars):
            a = la.zeros(self.dim, self.dim)
            for c, e in enumerate(basis):
                shifted = list(e)
                shifted[j] += 1
                a[:, c] = self._nf_monomial(tuple(shifted))
            a.setflags(write=False)
            acts.append(a)
        self.var_actions: list[np.ndarray] = acts
        self._check_actions()

    def _nf_monomial(self, e: tuple[int, ...]) -> np.ndarray:
        if sum(e) >= self.cap:
            return np.zeros(self.dim, dtype=np.int64)
        return self._nf[e].copy()

    def _check_actions(self):
        p = self.p
        for a, b in itertools.combinations(self.var_actions, 2):
            if not np.array_equal(la.matmul(a, b, p), la.matmul(b, a, p)):
                raise AlgebraError("internal consistency error: variable actions do not commute")

    # -- elements ---------------------------------------------------------

    def normal_form(self, poly: Poly | str) -> np.ndarray:
        """Coefficient vector of the image of ``poly`` in the basis."""
        if isinstance(poly, str):
            poly = parse_polynomial(poly, self.variables)
        v = np.zeros(self.dim, dtype=np.int64)
        for e, c in poly.items():
            if len(e) != self.nvars:
                raise AlgebraError("polynomial has the wrong number of variables")
            v = (v + c * self._nf_monomial(e)) % self.p
        return v

    def element(self, x) -> np.ndarray:
        if isinstance(x, (str, dict)):
            return self.normal_form(x)
        v = np.asarray(x, dtype=np.int64).reshape(-1) % self.p
        if v.shape[0] != self.dim:
            raise AlgebraError(f"element has length {v.shape[0]}, algebra has dimension {self.dim}")
        return v

    def unit(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        if self.dim:
            v[self.unit_index] = 1
        return v

    @cached_property
    def mono_ops(self) -> np.ndarray:
        """Stack of left-multiplication matrices, one per basis monomial."""
        return monomial_operators(self, self.var_actions, self.dim)

    def mult_matrix(self, a) -> np.ndarray:
        a = self.element(a)
        return np.tensordot(a, self.mono_ops, axes=(0, 0)) % self.p

    def ring_mul(self, a, b) -> np.ndarray:
        return la.matmul(self.mult_matrix(a), self.element(b).reshape(-1, 1), self.p).reshape(-1)

    def in_maximal_ideal(self, a) -> bool:
        return self.dim > 0 and int(self.element(a)[self.unit_index]) == 0

    def monomial_name(self, i: int) -> str:
        return format_monomial(self.basis[i], self.variables)

    def format_element(self, a) -> str:
        a = self.element(a)
        terms = []
        for i in np.flatnonzero(a):
            c = int(a[i])
            mono = self.monomial_name(int(i))
            if mono == "1":
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    # -- ideals and invariants -------------------------------------------

    def ideal(self, basis: np.ndarray) -> IdealSubspace:
        return IdealSubspace(self, la.colspace(basis, self.p))

    @cached_property
    def maximal_ideal(self) -> IdealSubspace:
        b = la.identity(self.dim)[:, [i for i in range(self.dim) if i != self.unit_index]]
        return IdealSubspace(self, la.colspace(b, self.p))

    def radical_power(self, j: int) -> IdealSubspace:
        if j < 0:
            raise ValueError("j must be non-negative")
        return self._radical_powers[min(j, len(self._radical_powers) - 1)]

    @cached_property
    def _radical_powers(self) -> list[IdealSubspace]:
        p = self.p
        powers = [IdealSubspace(self, la.identity(self.dim))]
        if self.dim == 0:
            return powers
        current = self.maximal_ideal
        powers.append(current)
        while current.dim:
            imgs = [la.matmul(a, current.basis, p) for a in self.var_actions]
            nxt = la.colspace(np.concatenate(imgs, axis=1), p) if imgs else la.zeros(self.dim, 0)
            current = IdealSubspace(self, nxt)
            powers.append(current)
        return powers

    @cached_property
    def m_power_lengths(self) -> list[int]:
        """``[l(m^0), l(m^1), ...]`` ending with the first zero."""
        return [I.dim for I in self._radical_powers]

    @cached_property
    def loewy_length(self) -> int:
        """Least ``j`` with ``m^j = 0``."""
        return self.m_power_lengths.index(0)

    @cached_property
    def edim(self) -> int:
        lens = self.m_power_lengths
        return lens[1] - (lens[2] if len(lens) > 2 else 0) if len(lens) > 1 else 0

    @cached_property
    def socle(self) -> IdealSubspace:
        if not self.var_actions:
            return IdealSubspace(self, la.identity(self.dim))
        stacked = np.concatenate(self.var_actions, axis=0)
        return IdealSubspace(self, la.colspace(la.kernel_basis(stacked, self.p), self.p))

    @property
    def length(self) -> int:
        return self.dim

    @property
    def socle_length(self) -> int:
        return self.socle.dim

    @property
    def is_gorenstein(self) -> bool:
        return self.socle_length == 1

    @property
    def is_field(self) -> bool:
        return self.dim == 1

    def ideal_closure(self, gens) -> IdealSubspace:
        """Smallest ideal containing ``gens``."""
        vecs = [self.element(g).reshape(-1, 1) for g in gens]
        start = np.concatenate(vecs, axis=1) if vecs else la.zeros(self.dim, 0)
        return IdealSubspace(self, stable_closure(self.var_actions, start, self.p))

    def class_tags(self) -> list[str]:
        lens = self.m_power_lengths
        r, l = self.socle_length, self.dim
        tags = []
        if self.is_gorenstein:
            tags.append("gorenstein")
        if self.ci_codim is not None:
            tags.append("ci")
        if len(lens) <= 3 and self.dim > 1:
            tags.append("m2-zero")
        if len(lens) == 4:
            tags.append("m3-zero")
        if 2 * r > l:
            tags.append("2r>l")
        if 2 * r > l - 2:
            tags.append("2r>l-2")
        return tags

    def summary(self) -> dict:
        return {
            "name": self.name,
            "field": self.p,
            "vars": self.variables,
            "length": self.dim,
            "edim": self.edim,
            "m_power_lengths": self.m_power_lengths,
            "socle_length": self.socle_length,
            "gorenstein": self.is_gorenstein,
            "ci_codim": self.ci_codim,
            "tags": self.class_tags(),
            "basis": [self.monomial_name(i) for i in range(self.dim)],
        }

    def __repr__(self):
        label = self.name or "ArtinAlgebra"
        return f"<{label}: dim {self.dim} over GF({self.p}) in {','.join(self.variables)}>"


@dataclass(eq=False)
class IdealSubspace:
    algebra: ArtinAlgebra
    basis: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def colength(self) -> int:
        """``l(R/I)``."""
        return self.algebra.dim - self.dim

    def contains(self, a) -> bool:
        v = self.algebra.element(a).reshape(-1, 1)
        p = self.algebra.p
        return la.rank(np.concatenate([self.basis, v], axis=1), p) == self.dim


def stable_closure(ops, start: np.ndarray, p: int) -> np.ndarray:
    """Smallest subspace containing ``start`` and stable under every operator in ``ops``."""
    current = la.colspace(start, p)
    while True:
        imgs = [current] + [la.matmul(a, current, p) for a in ops]
        nxt = la.colspace(np.concatenate(imgs, axis=1), p)
        if nxt.shape[1] == current.shape[1]:
            return nxt
        current = nxt


def monomial_operators(algebra: ArtinAlgebra, actions, n: int) -> np.ndarray:
    """Operators of the basis monomials of ``algebra`` given variable ``actions``.

    Returns an array of shape ``(dim R, n, n)``.
    """
    p = algebra.p
    powers: dict[tuple[int, int], np.ndarray] = {}

    def pw(j: int, e: int) -> np.ndarray:
        if (j, e) not in powers:
            powers[(j, e)] = la.identity(n) if e == 0 else la.matmul(actions[j], pw(j, e - 1), p)
        return powers[(j, e)]

    out = np.zeros((algebra.dim, n, n), dtype=np.int64)
    for m, e in enumerate(algebra.basis):
        op = la.identity(n)
        for j, k in enumerate(e):
            if k:
                op = la.matmul(pw(j, k), op, p)
        out[m] = op
    return out


def _dimension_at(nvars: int, polys: list[Poly], cap: int, p: int) -> int:
    monos, _, pivots = _quotient_data(nvars, polys, cap, p)
    return len(monos) - len(pivots)


def build_algebra(spec: AlgebraSpec, check_saturation: bool = True) -> ArtinAlgebra:
    """Build ``k[x]/(I + m^cap)``, certifying that ``m^cap`` already lies in ``I``."""
    polys = []
    for text in spec.relations:
        f = parse_polynomial(text, list(spec.variables)) if isinstance(text, str) else dict(text)
        f = {e: c % spec.prime for e, c in f.items() if c % spec.prime}
        if f.get((0,) * len(spec.variables)):
            raise AlgebraError(f"relation {text!r} has a nonzero constant term")
        polys.append(f)
    if check_saturation:
        n = len(spec.variables)
        d0 = _dimension_at(n, polys, spec.cap, spec.prime)
        d1 = _dimension_at(n, polys, spec.cap + 1, spec.prime)
        if d0 != d1:
            found = None
            prev = d1
            for c in range(spec.cap + 1, spec.cap + 16):
                nxt = _dimension_at(n, polys, c + 1, spec.prime)
                if nxt == prev:
                    found = c
                    break
                prev = nxt
            raise CapTooSmallError(spec.cap, d0, d1, found)
    return ArtinAlgebra(spec, polys)
