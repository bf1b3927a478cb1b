"""Quotient algebras: normal forms, invariants and input validation."""

import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from modcx import AlgebraSpec, build_algebra, builtin_ring, catalog_names
from modcx.algebra import AlgebraError, CapTooSmallError
from modcx.polynomial import PolynomialSyntaxError, parse_polynomial

from conftest import ring


def groebner_hilbert(spec):
    """Hilbert function of k[x]/(I + m^cap) from a Groebner basis of I + m^cap."""
    gens = sympy.symbols(spec.variables)
    rels = [sympy.sympify(r.replace("^", "**"), locals=dict(zip(spec.variables, gens))) for r in spec.relations]
    rels += [sympy.Mul(*[g**k for g, k in zip(gens, e)]) for e in _monos(len(gens), spec.cap)]
    G = sympy.groebner(rels, *gens, modulus=spec.prime, order="grevlex")
    leads = [sympy.Poly(g, *gens).monoms(order="grevlex")[0] for g in G.exprs]
    hilb = [0] * spec.cap
    for d in range(spec.cap):
        for e in _monos(len(gens), d):
            if not any(all(a >= b for a, b in zip(e, lead)) for lead in leads):
                hilb[d] += 1
    return hilb


def _monos(n, d):
    for c in itertools.combinations_with_replacement(range(n), d):
        yield tuple(c.count(i) for i in range(n))


@pytest.mark.parametrize("name", catalog_names())
def test_hilbert_function_against_groebner(name):
    A = ring(name)
    lens = A.m_power_lengths
    graded = [a - b for a, b in zip(lens, lens[1:])]
    hilb = groebner_hilbert(A.spec)
    while hilb and hilb[-1] == 0:
        hilb.pop()
    assert graded == hilb
    assert A.dim == sum(hilb)


@pytest.mark.parametrize(
    "name,length,socle,tags",
    [
        ("m2_e2", 3, 2, ["m2-zero", "2r>l", "2r>l-2"]),
        ("x_cubed", 3, 1, ["gorenstein", "ci", "m3-zero", "2r>l-2"]),
        ("ci_x2y2", 4, 1, ["gorenstein", "ci", "m3-zero"]),
        ("gor_m3", 5, 1, ["gorenstein", "m3-zero"]),
        ("nongor_m3", 4, 2, ["m3-zero", "2r>l-2"]),
    ],
)
def test_fixture_invariants(name, length, socle, tags):
    A = ring(name)
    assert (A.dim, A.socle_length, A.class_tags()) == (length, socle, tags)
    assert A.is_gorenstein == (socle == 1)


def test_gor_m3_relations_reduce():
    A = ring("gor_m3")
    assert np.array_equal(A.normal_form("x^2"), A.normal_form("z^2"))
    assert not A.normal_form("x*y").any()
    assert not A.normal_form("x^3").any()
    assert A.loewy_length == 3
    assert A.edim == 3


@given(st.sampled_from(["ci_x2y2", "gor_m3", "nongor_m3", "m2_e3"]), st.data())
def test_multiplication_is_commutative_and_associative(name, data):
    A = ring(name)
    elems = [np.array(data.draw(st.lists(st.integers(0, 100), min_size=A.dim, max_size=A.dim))) for _ in range(3)]
    a, b, c = elems
    assert np.array_equal(A.ring_mul(a, b), A.ring_mul(b, a))
    assert np.array_equal(A.ring_mul(A.ring_mul(a, b), c), A.ring_mul(a, A.ring_mul(b, c)))
    assert np.array_equal(A.ring_mul(A.unit(), a), a % 101)


def test_socle_is_annihilated_by_variables():
    for name in catalog_names():
        A = ring(name)
        for act in A.var_actions:
            assert not (act @ A.socle.basis % A.p).any()


def test_cap_too_small_names_degree():
    spec = AlgebraSpec(("x",), ("x^4",), 3)
    with pytest.raises(CapTooSmallError) as exc:
        build_algebra(spec)
    assert exc.value.failing_degree == 3
    assert exc.value.saturating_cap == 4
    assert "degree 3" in str(exc.value)


def test_non_artinian_has_no_saturating_cap():
    with pytest.raises(CapTooSmallError) as exc:
        build_algebra(AlgebraSpec(("x", "y"), ("x^2",), 4))
    assert exc.value.saturating_cap is None


def test_constant_term_rejected():
    with pytest.raises(AlgebraError):
        build_algebra(AlgebraSpec(("x",), ("x^2 + 1",), 3))


def test_bad_spec():
    with pytest.raises(AlgebraError):
        AlgebraSpec(("x", "x"), (), 2)
    with pytest.raises(AlgebraError):
        AlgebraSpec(("x",), ("x^2",), 2, prime=100)


@pytest.mark.parametrize("text", ["x^", "x**2", "2*", "x + * y", "q^2", "(x"])
def test_parse_errors(text):
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial(text, ["x", "y"])


def test_parse_polynomial_terms():
    f = parse_polynomial("3*x^2*y - y*x*x + 4", ["x", "y"])
    assert f == {(2, 1): 2, (0, 0): 4}


def test_prime_override():
    A, _ = builtin_ring("ci_x2y2", 7)
    assert A.p == 7 and A.dim == 4


def test_ideal_closure_and_summary():
    A = ring("m2_e2")
    I = A.ideal_closure(["x"])
    assert I.dim == 1 and I.colength == 2
    assert A.summary()["basis"] == ["1", "x", "y"]
