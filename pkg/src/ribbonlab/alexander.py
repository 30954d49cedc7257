"""
Alexander polynomial of a presented complement group.

The free-derivative matrix of the presented group (one row per relation,
one column per generator, every generator sent to t) has entries in the
ring of integer Laurent polynomials.  The polynomial returned is the
greatest common divisor of its maximal proper minors, normalized so the
lowest exponent is zero and the constant term positive.  The gcd is taken
over the rationals and cleared to primitive integer form, making the
output bytes canonical.  It is invariant under every move in
``ribbonlab.moves``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .quandle import GroupPresentation, group_presentation
from .ribbon import RibbonData, component_count

__all__ = [
    "LaurentPolynomial",
    "alexander_polynomial",
    "abelianization_rank_check",
]


@dataclass(frozen=True)
class LaurentPolynomial:
    """Finitely supported integer coefficients, stored as sorted
    (exponent, coefficient) pairs with zeros dropped."""

    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, coeffs: dict[int, int]) -> "LaurentPolynomial":
        return cls(tuple(sorted((e, c) for e, c in coeffs.items() if c)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    @classmethod
    def zero(cls) -> "LaurentPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "LaurentPolynomial":
        return cls(((0, 1),))

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[0][0]

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[-1][0]

    def evaluate(self, value):
        return sum(c * value**e for e, c in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            if e == 0:
                body = str(abs(c))
            else:
                variable = "t" if e == 1 else f"t^{e}"
                body = variable if abs(c) == 1 else f"{abs(c)}*{variable}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


# Laurent arithmetic on plain {exponent: coefficient} dicts; the dataclass
# above is only the normalized value type handed to callers.


def _ladd(a, b, factor=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + factor * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _lmul(a, b):
    out: dict[int, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _fox_rows(pres: GroupPresentation) -> list[list[dict[int, int]]]:
    """Free-derivative rows with every generator sent to t.

    Walking the relator left to right: a positive letter g contributes
    t^p to column g and raises the running abelianized prefix p by one; a
    negative letter lowers p first and contributes -t^p.
    """
    rows = []
    for rel in pres.relations:
        row: list[dict[int, int]] = [{} for _ in range(pres.generators)]
        p = 0
        for x in rel.relator():
            col = row[abs(x) - 1]
            if x > 0:
                col[p] = col.get(p, 0) + 1
                if col[p] == 0:
                    del col[p]
                p += 1
            else:
                p -= 1
                col[p] = col.get(p, 0) - 1
                if col[p] == 0:
                    del col[p]
        rows.append(row)
    return rows


def _det(matrix: list[list[dict[int, int]]]) -> dict[int, int]:
    n = len(matrix)
    if n == 0:
        return {0: 1}
    memo: dict[tuple[int, ...], dict[int, int]] = {}

    def expand(cols: tuple[int, ...]) -> dict[int, int]:
        i = n - len(cols)
        if not cols:
            return {0: 1}
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total: dict[int, int] = {}
        for j, c in enumerate(cols):
            entry = matrix[i][c]
            if not entry:
                continue
            sub = expand(cols[:j] + cols[j + 1 :])
            if not sub:
                continue
            total = _ladd(total, _lmul(entry, sub), factor=1 if j % 2 == 0 else -1)
        memo[cols] = total
        return total

    return expand(tuple(range(n)))


def _dense(poly: dict[int, int]) -> list[int]:
    """Coefficient list with the power-of-t content stripped."""
    lo = min(poly)
    hi = max(poly)
    return [poly.get(e, 0) for e in range(lo, hi + 1)]


def _primitive(coeffs: list[Fraction]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    if not coeffs:
        return []
    lcm = 1
    for c in coeffs:
        d = c.denominator
        g = _gcd_int(lcm, d)
        lcm = lcm // g * d
    ints = [int(c * lcm) for c in coeffs]
    g = 0
    for v in ints:
        g = _gcd_int(g, abs(v))
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        if a[-1] == 0:
            a.pop()
            continue
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i in range(len(b)):
            a[shift + i] -= factor * b[i]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_gcd(a: list[int], b: list[int]) -> list[int]:
    fa = [Fraction(v) for v in a]
    fb = [Fraction(v) for v in b]
    while fb:
        fa, fb = fb, _poly_mod(fa, fb)
    return _primitive(fa)


def alexander_polynomial(data: RibbonData) -> LaurentPolynomial:
    """Normalized gcd of the maximal proper minors of the free-derivative
    matrix.  Raises on disconnected data; the single-base case is 1."""
    if component_count(data) != 1:
        raise ValueError("disconnected data has no Alexander polynomial")
    pres = group_presentation(data)
    n = pres.generators
    k = n - 1
    if k == 0:
        return LaurentPolynomial.one()
    rows = [row for row in _fox_rows(pres) if any(row)]
    if len(rows) < k:
        return LaurentPolynomial.zero()

    gcd: list[int] | None = None
    for row_pick in combinations(range(len(rows)), k):
        for col_pick in combinations(range(n), k):
            minor = _det([[rows[i][j] for j in col_pick] for i in row_pick])
            if not minor:
                continue
            d = _dense(minor)
            gcd = _poly_gcd(gcd, d) if gcd is not None else _poly_gcd(d, [])
            if len(gcd) == 1:
                return LaurentPolynomial.one()
    if gcd is None:
        return LaurentPolynomial.zero()
    if gcd and gcd[0] < 0:
        gcd = [-v for v in gcd]
    return LaurentPolynomial.from_dict({e: c for e, c in enumerate(gcd)})


def abelianization_rank_check(data: RibbonData) -> bool:
    """True when the integer matrix of abelianized relations (end minus
    start per handle) has rank one below the base count, the signature of
    an infinite cyclic abelianization."""
    if component_count(data) != 1:
        raise ValueError("disconnected data")
    n = data.base_count
    rows = []
    for h in data.handles:
        if h.start == h.end:
            continue
        row = [Fraction(0)] * n
        row[h.end - 1] = Fraction(1)
        row[h.start - 1] = Fraction(-1)
        rows.append(row)
    rank = 0
    for col in range(n):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                factor = rows[r][col] / lead
                for c in range(col, n):
                    rows[r][c] -= factor * rows[rank][c]
        rank += 1
    return rank == n - 1
