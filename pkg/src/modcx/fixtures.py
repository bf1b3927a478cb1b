"""Named fixture rings and seeded random modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import AlgebraSpec, ArtinAlgebra, build_algebra
from .modules import ModulePresentation


class FixtureError(KeyError):
    pass


@dataclass(frozen=True)
class FixtureMeta:
    length: int
    socle_length: int
    gorenstein: bool
    tags: tuple[str, ...]
    ci_codim: int | None = None
    note: str = ""


@dataclass(frozen=True)
class Fixture:
    spec: AlgebraSpec
    meta: FixtureMeta
    description: str = ""


_VARS = ("x", "y", "z", "w")


def _m2(e: int) -> Fixture:
    v = _VARS[:e]
    rels = tuple(f"{a}*{b}" for i, a in enumerate(v) for b in v[i:])
    r = e
    tags = ["m2-zero"]
    if 2 * r > e + 1:
        tags.append("2r>l")
    if 2 * r > e - 1:
        tags.append("2r>l-2")
    gor = e == 1
    if gor:
        tags[:0] = ["gorenstein", "ci"]
    return Fixture(
        AlgebraSpec(v, rels, 2, name=f"m2_e{e}", ci_codim=1 if e == 1 else None),
        FixtureMeta(e + 1, r, gor, tuple(tags), 1 if e == 1 else None),
        f"k[{','.join(v)}]/m^2",
    )


def _power(n: int, name: str) -> Fixture:
    tags = ["gorenstein", "ci"]
    if n == 2:
        tags.append("m2-zero")
    elif n == 3:
        tags.append("m3-zero")
    if 2 > n:
        tags.append("2r>l")
    if 2 > n - 2:
        tags.append("2r>l-2")
    return Fixture(
        AlgebraSpec(("x",), (f"x^{n}",), n, name=name, ci_codim=1),
        FixtureMeta(n, 1, True, tuple(tags), 1),
        f"k[x]/(x^{n})",
    )


def _catalog() -> dict[str, Fixture]:
    cat: dict[str, Fixture] = {}
    for n, name in [(2, "dual_numbers"), (3, "x_cubed"), (4, "x_fourth"), (5, "x_fifth")]:
        cat[name] = _power(n, name)
    for e in range(1, 5):
        cat[f"m2_e{e}"] = _m2(e)
    cat["ci_x2y2"] = Fixture(
        AlgebraSpec(("x", "y"), ("x^2", "y^2"), 3, name="ci_x2y2", ci_codim=2),
        FixtureMeta(4, 1, True, ("gorenstein", "ci", "m3-zero"), 2),
        "k[x,y]/(x^2,y^2)",
    )
    cat["gor_m3"] = Fixture(
        AlgebraSpec(("x", "y", "z"), ("x*y", "x*z", "y*z", "x^2-y^2", "y^2-z^2"), 3, name="gor_m3"),
        FixtureMeta(5, 1, True, ("gorenstein", "m3-zero")),
        "k[x,y,z]/(xy,xz,yz,x^2-y^2,y^2-z^2), Gorenstein and not a complete intersection",
    )
    cat["nongor_m3"] = Fixture(
        AlgebraSpec(("x", "y"), ("x^2", "x*y", "y^3"), 3, name="nongor_m3"),
        FixtureMeta(4, 2, False, ("m3-zero", "2r>l-2")),
        "k[x,y]/(x^2,xy,y^3)",
    )
    return cat


CATALOG: dict[str, Fixture] = _catalog()

# Slots for rings whose presentations must come from user files.
RESERVED = {
    "js_aar": "ring failing the uniform Auslander condition; load its presentation from a file",
    "js_sharp": "sharpness example at 2r = l - 2; load its presentation from a file",
}


def catalog_names() -> list[str]:
    return sorted(CATALOG)


def builtin_ring(name: str, prime: int = la.DEFAULT_PRIME) -> tuple[ArtinAlgebra, FixtureMeta]:
    """Build a catalog ring and re-verify its recorded invariants."""
    if name in RESERVED:
        raise FixtureError(f"{name!r} is a reserved slot: {RESERVED[name]}")
    if name not in CATALOG:
        raise FixtureError(f"unknown ring {name!r}; known: {', '.join(catalog_names())}")
    fx = CATALOG[name]
    spec = fx.spec
    if prime != spec.prime:
        spec = AlgebraSpec(spec.variables, spec.relations, spec.cap, prime, spec.name, spec.ci_codim)
    algebra = build_algebra(spec)
    meta = fx.meta
    found = (algebra.dim, algebra.socle_length, algebra.is_gorenstein, tuple(algebra.class_tags()))
    expected = (meta.length, meta.socle_length, meta.gorenstein, meta.tags)
    if found != expected:
        raise AssertionError(f"fixture {name} metadata mismatch: recorded {expected}, computed {found}")
    return algebra, meta


def random_element_of_m(algebra: ArtinAlgebra, rng: np.random.Generator, density: float = 0.5) -> np.ndarray:
    """A random element of the maximal ideal with roughly ``density`` of its coordinates set."""
    p = algebra.p
    v = np.zeros(algebra.dim, dtype=np.int64)
    idx = [i for i in range(algebra.dim) if i != algebra.unit_index]
    for i in idx:
        if rng.random() < density:
            v[i] = rng.integers(1, p)
    return v


def random_module(
    algebra: ArtinAlgebra,
    seed: int,
    gens: int | None = None,
    rels: int | None = None,
    max_gens: int = 4,
    max_rels: int = 6,
) -> ModulePresentation:
    """A presentation with entries in the maximal ideal, determined by ``seed``.

    ``gens``/``rels`` fix the shape; otherwise it is drawn within the bounds.
    Entries lie in m, so the presentation is minimal and ``nu = gens``.
    """
    if max_gens < 1 or max_rels < 0:
        raise ValueError("bounds must be positive")
    rng = np.random.default_rng(seed)
    t = gens if gens is not None else int(rng.integers(1, max_gens + 1))
    s = rels if rels is not None else int(rng.integers(0, max_rels + 1))
    if t < 1:
        raise ValueError("a random module needs at least one generator")
    rows = []
    for _ in range(s):
        density = float(rng.choice([0.3, 0.6, 1.0]))
        row = []
        for _ in range(t):
            if rng.random() < 0.35:
                row.append(np.zeros(algebra.dim, dtype=np.int64))
            else:
                row.append(random_element_of_m(algebra, rng, density))
        rows.append(row)
    return ModulePresentation(f"rand{seed}", t, rows)
