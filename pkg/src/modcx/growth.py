"""Growth classes of non-negative integer sequences.

The complexity of a sequence is the least b with x_i <= a*i^(b-1) for large
i.  A finite prefix cannot certify it, so the classifier looks for an exact
integer linear recurrence on a tail of the data, extends it, and reads the
class off the extension.  Without a recurrence it answers only in clear-cut
cases and otherwise says Inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .homology import ext_table
from .modules import residue_field
from .resolution import DEFAULT_MAX_DIM, DEFAULT_STEPS, minimal_free_resolution

GUARD = 4
DEFAULT_MAX_ORDER = 6
HORIZON = 1000
EPSILON = Fraction(1, 16)
TAIL = 200
MAX_PERIOD = 12
HEURISTIC_MAX_DEGREE = 4


class GrowthError(ValueError):
    pass


class ClassMismatch(RuntimeError):
    """The nu- and length-sequences of one table classify differently."""

    def __init__(self, message: str, lengths: list[int], gens: list[int]):
        super().__init__(message)
        self.lengths = lengths
        self.gens = gens


@dataclass(frozen=True)
class GrowthClass:
    tag: str
    degree: int | None = None
    evidence: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def conclusive(self) -> bool:
        return self.tag != "Inconclusive"

    @property
    def rank(self) -> float | None:
        """Zero < Polynomial(1) < Polynomial(2) < ... < Infinite; None if undecided."""
        if self.tag == "Zero":
            return 0
        if self.tag == "Polynomial":
            return self.degree
        if self.tag == "Infinite":
            return math.inf
        return None

    def __str__(self):
        return f"Polynomial({self.degree})" if self.tag == "Polynomial" else self.tag

    def to_dict(self) -> dict:
        return {"class": str(self), "evidence": self.evidence}


ZERO = GrowthClass("Zero")
INFINITE = GrowthClass("Infinite")


def polynomial(d: int, **evidence) -> GrowthClass:
    return GrowthClass("Polynomial", d, evidence)


@dataclass(frozen=True)
class RecurrenceModel:
    """``x_i = sum_j coeffs[j-1] * x_{i-j}`` for every i >= start + order."""

    order: int
    coeffs: tuple[int, ...]
    start: int

    def extend(self, seq: list[int], length: int) -> list[int]:
        out = [int(v) for v in seq]
        while len(out) < length:
            out.append(sum(c * out[-1 - j] for j, c in enumerate(self.coeffs)))
        return out

    def holds_on(self, seq: list[int]) -> bool:
        m = self.order
        return all(
            seq[i] == sum(c * seq[i - 1 - j] for j, c in enumerate(self.coeffs))
            for i in range(self.start + m, len(seq))
        )


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of an overdetermined rational system, or None."""
    m = len(rows[0])
    a = [r[:] + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    for c in range(m):
        sel = next((i for i in range(piv_row, len(a)) if a[i][c] != 0), None)
        if sel is None:
            return None
        a[piv_row], a[sel] = a[sel], a[piv_row]
        inv = 1 / a[piv_row][c]
        a[piv_row] = [v * inv for v in a[piv_row]]
        for i in range(len(a)):
            if i != piv_row and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[piv_row])]
        piv_row += 1
    if any(a[i][m] != 0 for i in range(piv_row, len(a))):
        return None
    return [a[i][m] for i in range(m)]


def detect_recurrence(seq, max_order: int = DEFAULT_MAX_ORDER) -> RecurrenceModel | None:
    """Minimal-order integer recurrence holding on some tail of ``seq``.

    Order m at tail start s is accepted only when the m unknowns are pinned
    down uniquely and at least ``GUARD`` further equations also hold.  When
    the sequence is too short for ``max_order`` the order bound shrinks to
    what the data can support.
    """
    x = [int(v) for v in seq]
    n = len(x)
    top = min(max_order, (n - GUARD) // 2)
    for m in range(1, top + 1):
        for s in range(0, n - 2 * m - GUARD + 1):
            rows = [[Fraction(x[i - j]) for j in range(1, m + 1)] for i in range(s + m, n)]
            rhs = [Fraction(x[i]) for i in range(s + m, n)]
            sol = _solve_exact(rows, rhs)
            if sol is None:
                continue
            if any(c.denominator != 1 for c in sol):
                continue
            return RecurrenceModel(m, tuple(int(c) for c in sol), s)
    return None


def _eventually_zero(x: list[int]) -> bool:
    run = 0
    for v in reversed(x):
        if v:
            break
        run += 1
    return run == len(x) or run >= GUARD


def _difference_degree(sub: list[int], max_d: int) -> int | None:
    """Smallest d >= 1 with the d-th difference of ``sub`` identically zero."""
    cur = sub
    for d in range(1, max_d + 1):
        cur = [b - a for a, b in zip(cur, cur[1:])]
        if len(cur) < GUARD:
            return None
        if not any(cur):
            return d
    return None


def _polynomial_test(ext: list[int], max_d: int):
    """Period and degree when every residue class of the tail is polynomial."""
    for q in range(1, MAX_PERIOD + 1):
        tail = ext[-(TAIL * q) :] if len(ext) >= TAIL * q else ext[len(ext) // 2 :]
        degrees = []
        for r in range(q):
            d = _difference_degree(tail[r::q], max_d)
            if d is None:
                break
            degrees.append(d)
        else:
            if not any(tail):
                return q, 0
            return q, max(degrees)
    return None


def _geometric_test(ext: list[int], eps: Fraction = EPSILON) -> bool:
    """Every window maximum exceeds the previous one by a factor ``1 + eps``."""
    w = MAX_PERIOD
    tail = ext[-(TAIL + w) :]
    blocks = [max(tail[i : i + w]) for i in range(0, len(tail) - w + 1, w)]
    if len(blocks) < 3 or blocks[0] <= 0:
        return False
    return all(b * eps.denominator >= a * (eps.denominator + eps.numerator) for a, b in zip(blocks, blocks[1:]))


def classify(seq, max_order: int = DEFAULT_MAX_ORDER) -> GrowthClass:
    """Growth class of a non-negative integer sequence."""
    x = [int(v) for v in seq]
    if any(v < 0 for v in x):
        raise GrowthError("growth classes are defined for non-negative sequences")
    base = {"terms": len(x)}
    if x and _eventually_zero(x):
        return GrowthClass("Zero", None, {**base, "rule": "eventually zero"})
    model = detect_recurrence(x, max_order)
    if model is not None:
        ext = model.extend(x, HORIZON)
        ev = {
            **base,
            "recurrence": {"order": model.order, "coeffs": list(model.coeffs), "start": model.start},
            "horizon": HORIZON,
        }
        if not any(ext[-TAIL:]):
            return GrowthClass("Zero", None, {**ev, "rule": "recurrence tail vanishes"})
        poly = _polynomial_test(ext, model.order + 1)
        if poly is not None:
            q, d = poly
            if d == 0:
                return GrowthClass("Zero", None, {**ev, "rule": "recurrence tail vanishes"})
            return GrowthClass("Polynomial", d, {**ev, "rule": "finite differences", "period": q})
        if _geometric_test(ext):
            return GrowthClass("Infinite", None, {**ev, "rule": "geometric growth"})
        return GrowthClass("Inconclusive", None, {**ev, "rule": "recurrence without decisive growth"})
    return _heuristic(x, base)


def _heuristic(x: list[int], base: dict) -> GrowthClass:
    """Decide only clear-cut cases when no recurrence fits."""
    ev = {**base, "recurrence": None}
    half = x[len(x) // 2 :]
    if len(half) >= GUARD + 2 and all(v > 0 for v in half):
        ratios = [b / a for a, b in zip(half, half[1:])]
        ev["min_ratio"] = round(min(ratios), 6)
        if min(ratios) >= 1.5:
            return GrowthClass("Infinite", None, {**ev, "rule": "heuristic ratio"})
        idx = [i + len(x) - len(half) + 1 for i in range(len(half))]
        pts = [(math.log(i), math.log(v)) for i, v in zip(idx, half)]
        mx = sum(p[0] for p in pts) / len(pts)
        my = sum(p[1] for p in pts) / len(pts)
        sxx = sum((p[0] - mx) ** 2 for p in pts)
        slope = sum((p[0] - mx) * (p[1] - my) for p in pts) / sxx
        ev["loglog_slope"] = round(slope, 6)
        d = round(slope) + 1
        monotone = all(b >= a for a, b in zip(half, half[1:]))
        if 1 <= d <= HEURISTIC_MAX_DEGREE and abs(slope - (d - 1)) < 0.05 and monotone and max(ratios) < 1.5:
            return GrowthClass("Polynomial", d, {**ev, "rule": "heuristic log-log slope"})
    return GrowthClass("Inconclusive", None, {**ev, "rule": "no recurrence, thresholds not decisive"})


def same_class(a: GrowthClass, b: GrowthClass) -> bool:
    return a.tag == b.tag and a.degree == b.degree


def combine(seq, a: int, b: int, mode: str = "sum") -> list[int]:
    """``a*x_{i+1} + b*x_i`` (sum) or ``a*x_{i+1} - b*x_i`` (diff)."""
    x = [int(v) for v in seq]
    if mode == "sum":
        return [a * u + b * v for v, u in zip(x, x[1:])]
    if mode == "diff":
        if not a > b > 0:
            raise GrowthError("diff mode needs a > b > 0")
        out = [a * u - b * v for v, u in zip(x, x[1:])]
        if any(v < 0 for v in out):
            raise GrowthError("diff mode produced a negative term")
        return out
    raise GrowthError(f"unknown mode {mode!r}")


# -- module-level complexities -------------------------------------------------


def pair_class(lengths: list[int], gens: list[int], max_order: int, label: str) -> GrowthClass:
    """Class of ``gens``; the class of ``lengths`` must agree when both are decided."""
    by_nu = classify(gens, max_order)
    by_len = classify(lengths, max_order)
    if by_nu.conclusive and by_len.conclusive and not same_class(by_nu, by_len):
        raise ClassMismatch(f"{label}: nu-sequence is {by_nu} but length-sequence is {by_len}", lengths, gens)
    if not by_nu.conclusive and by_len.conclusive:
        # the two sequences have the same complexity, so either one decides
        return GrowthClass(by_len.tag, by_len.degree, {**by_len.evidence, "sequence": "length"})
    return GrowthClass(by_nu.tag, by_nu.degree, {**by_nu.evidence, "sequence": "nu"})


def cx_pair(M, N, steps: int | None = None, max_dim: int | None = None, max_order: int = DEFAULT_MAX_ORDER) -> GrowthClass:
    """Complexity of ``nu(Ext^i(M, N))``, cross-checked against the lengths."""
    t = ext_table(M, N, steps or DEFAULT_STEPS, max_dim or DEFAULT_MAX_DIM)
    return pair_class(t.lengths, t.gens, max_order, f"cx({M.name},{N.name})")


def cx_mod(M, steps: int | None = None, max_dim: int | None = None, max_order: int = DEFAULT_MAX_ORDER) -> GrowthClass:
    """``cx M``, read off the Betti numbers (which equal ``nu(Ext^i(M, k))``)."""
    res = minimal_free_resolution(M, steps or DEFAULT_STEPS, max_dim or DEFAULT_MAX_DIM)
    return classify(res.betti, max_order)


def px_mod(N, steps: int | None = None, max_dim: int | None = None, max_order: int = DEFAULT_MAX_ORDER) -> GrowthClass:
    """``px N``, the complexity of the Bass numbers of ``N``."""
    return cx_pair(residue_field(N.algebra), N, steps, max_dim, max_order)
