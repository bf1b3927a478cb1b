"""Growth classification of integer sequences and of module pairs."""

import pytest
from hypothesis import assume, given, settings, strategies as st

from families import family
from modcx import classify, cx_mod, cx_pair, detect_recurrence, free_module, px_mod, random_module, realize, residue_field
from modcx.growth import ClassMismatch, GrowthError, combine, pair_class, same_class

from conftest import ring


def cls(seq):
    return str(classify(seq))


@pytest.mark.parametrize(
    "seq,expected",
    [
        ([0] * 20, "Zero"),
        ([5] + [0] * 19, "Zero"),
        (list(range(1, 21)), "Polynomial(2)"),
        ([7] * 20, "Polynomial(1)"),
        ([2**i for i in range(20)], "Infinite"),
        ([i * i for i in range(20)], "Polynomial(3)"),
        ([(i + 1) ** 3 for i in range(20)], "Polynomial(4)"),
        ([1, 3] * 10, "Polynomial(1)"),
    ],
)
def test_basic_classes(seq, expected):
    assert cls(seq) == expected


def test_detect_recurrence_examples():
    m = detect_recurrence([2**i for i in range(10)])
    assert (m.order, m.coeffs) == (1, (2,))
    m = detect_recurrence([1] * 10)
    assert (m.order, m.coeffs) == (1, (1,))
    m = detect_recurrence(list(range(1, 13)))
    assert (m.order, m.coeffs) == (2, (2, -1))


def test_recurrence_reproduces_its_input():
    seq = [1, 3, 8, 21, 55, 144, 377, 987, 2584, 6765, 17711, 46368]
    m = detect_recurrence(seq)
    assert m.coeffs == (3, -1) and m.holds_on(seq)
    assert m.extend(seq[:5], 12) == seq


def test_recurrence_after_irregular_prefix():
    seq = [9, 4] + [2**i for i in range(12)]
    m = detect_recurrence(seq)
    assert m.order == 1 and m.start >= 1


def test_no_recurrence_in_short_noise():
    assert detect_recurrence([3, 1, 4, 1, 5, 9, 2, 6]) is None


def test_negative_rejected():
    with pytest.raises(GrowthError):
        classify([1, -1, 2])


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_recurrence_families(seed):
    seq, expected, desc = family(seed)
    got = classify(seq)
    assert same_class(got, expected), (desc, seq, got)
    if expected.tag != "Zero":
        assert got.evidence["recurrence"]["order"] <= 4


@given(st.integers(0, 10**9), st.integers(1, 50))
def test_scale_invariance(seed, c):
    seq, _, _ = family(seed)
    assert same_class(classify([c * v for v in seq]), classify(seq))


@given(st.integers(0, 10**9), st.integers(0, 3))
def test_shift_invariance(seed, k):
    seq, expected, _ = family(seed, length=25)
    assume(expected.tag != "Zero" or k < 2)
    assert same_class(classify(seq[k:]), classify(seq))


@settings(max_examples=150)
@given(st.integers(0, 10**9), st.integers(0, 6), st.integers(0, 6))
def test_sum_transform(seed, a, b):
    assume(a + b > 0)
    seq, _, _ = family(seed, length=22)
    if a == 0:
        # b * x_i on a sequence one term shorter
        assert same_class(classify(combine(seq, a, b)), classify(seq[:-1]))
    else:
        assert same_class(classify(combine(seq, a, b)), classify(seq))


@settings(max_examples=150)
@given(st.integers(0, 10**9), st.integers(2, 7), st.data())
def test_diff_transform(seed, a, data):
    b = data.draw(st.integers(1, a - 1))
    seq, _, _ = family(seed, length=22)
    try:
        out = combine(seq, a, b, "diff")
    except GrowthError:
        assume(False)
    assert same_class(classify(out), classify(seq))


@given(st.integers(0, 10**9))
def test_difference_lowers_degree_by_one(seed):
    seq, expected, _ = family(seed)
    assume(expected.tag == "Polynomial" and expected.degree >= 2)
    diff = [b - a for a, b in zip(seq, seq[1:])]
    assume(all(v >= 0 for v in diff))
    got = classify(diff)
    assert got.tag == "Polynomial" and got.degree >= expected.degree - 1


def test_combine_examples():
    assert combine([2**i for i in range(6)], 1, 1) == [3 * 2**i for i in range(5)]
    assert combine(list(range(8)), 2, 1, "diff") == [i + 2 for i in range(7)]
    assert combine([4] * 5, 2, 1, "diff") == [4] * 4
    with pytest.raises(GrowthError):
        combine([1, 2], 1, 2, "diff")
    with pytest.raises(GrowthError):
        combine([5, 0, 5], 3, 1, "diff")


def test_heuristic_is_cautious():
    # floor(1.7^i) has no short integer recurrence but clearly grows geometrically
    seq = [int(1.7**i) for i in range(24)]
    got = classify(seq)
    assert got.tag in ("Infinite", "Inconclusive")
    assert got.evidence["recurrence"] is None or got.tag == "Infinite"


def test_evidence_is_serializable():
    import json

    d = classify([2**i for i in range(15)]).to_dict()
    assert json.loads(json.dumps(d))["class"] == "Infinite"


def test_pair_class_mismatch():
    with pytest.raises(ClassMismatch):
        pair_class([2**i for i in range(15)], [1] * 15, 6, "x")
    got = pair_class([2**i for i in range(15)], [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9], 6, "x")
    assert got.evidence["sequence"] in ("length", "nu")


def test_module_complexities():
    assert str(cx_mod(residue_field(ring("x_cubed")), 30)) == "Polynomial(1)"
    assert str(cx_mod(residue_field(ring("m2_e2")), 15)) == "Infinite"
    assert str(cx_mod(residue_field(ring("ci_x2y2")), 20)) == "Polynomial(2)"
    A = ring("nongor_m3")
    N = realize(A, random_module(A, 5))
    assert str(cx_pair(free_module(A), N, 10)) == "Zero"
    assert str(px_mod(free_module(ring("ci_x2y2")), 10)) == "Zero"
