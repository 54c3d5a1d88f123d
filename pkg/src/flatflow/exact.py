"""Exact linear algebra over Q and over cyclotomic fields Q(zeta_N).

Used for signatures (congruence diagonalization), boundary-class solves,
and the exact rank of cocycle systems of circle-valued representations,
whose entries are integer combinations of roots of unity.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import NoSolution


# ---------------------------------------------------------------- rationals

def rational_rank(rows: list[list[Fraction]]) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    r0 = 0
    for c in range(cols):
        piv = next((r for r in range(r0, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[r0], m[piv] = m[piv], m[r0]
        pv = m[r0][c]
        for r in range(r0 + 1, len(m)):
            if m[r][c] != 0:
                f = m[r][c] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[r0])]
        r0 += 1
        rank += 1
        if r0 == len(m):
            break
    return rank


def rational_solve(rows: list[list[Fraction]], rhs: list[Fraction]):
    """A particular solution of (rows) x = rhs over Q, free variables set to
    zero; raises NoSolution when inconsistent."""
    m = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    nrows, ncols = len(m), (len(m[0]) - 1 if m else 0)
    pivots: list[int] = []
    r0 = 0
    for c in range(ncols):
        piv = next((r for r in range(r0, nrows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[r0], m[piv] = m[piv], m[r0]
        pv = m[r0][c]
        m[r0] = [v / pv for v in m[r0]]
        for r in range(nrows):
            if r != r0 and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[r0])]
        pivots.append(c)
        r0 += 1
        if r0 == nrows:
            break
    for r in range(r0, nrows):
        if m[r][ncols] != 0:
            raise NoSolution("linear system is inconsistent over Q")
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][ncols]
    return x


# --------------------------------------------------------------- cyclotomic

def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = num[:]
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    inv = 1 / den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] * inv
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert all(c == 0 for c in rem)
            poly = q
    return tuple(poly)


class CyclotomicField:
    """Q[x]/Phi_N(x); elements are coefficient tuples of length deg Phi_N."""

    def __init__(self, n: int):
        self.n = n
        self.modulus = list(cyclotomic_polynomial(n))
        self.degree = len(self.modulus) - 1

    def zero(self):
        return tuple([Fraction(0)] * self.degree)

    def root_power(self, k: int):
        """zeta_N^k reduced mod Phi_N."""
        k %= self.n
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[k] = Fraction(1)
        return self._reduce(coeffs)

    def from_integer_combination(self, combo: dict[int, int]):
        """sum_k c_k zeta^k for integer c."""
        if not combo:
            return self.zero()
        top = max(k % self.n for k in combo)
        coeffs = [Fraction(0)] * (top + 1)
        for k, c in combo.items():
            coeffs[k % self.n] += c
        return self._reduce(coeffs)

    def _reduce(self, coeffs: list[Fraction]):
        if len(coeffs) >= len(self.modulus):
            _, coeffs = _poly_divmod(coeffs, self.modulus)
        out = list(coeffs) + [Fraction(0)] * (self.degree - len(coeffs))
        return tuple(out[: self.degree])

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mul(self, a, b):
        prod = [Fraction(0)] * (2 * self.degree)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return self._reduce(prod)

    @staticmethod
    def is_zero(a) -> bool:
        return all(c == 0 for c in a)


def cyclotomic_rank(field: CyclotomicField, rows: list[list]) -> int:
    """Rank over Q(zeta_N) by fraction-free elimination (no inverses needed:
    row_j <- pivot*row_j - entry*row_i keeps entries in the ring, and the
    ring has no zero divisors since Phi_N is irreducible)."""
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    r0 = 0
    for c in range(ncols):
        piv = next((r for r in range(r0, len(m)) if not field.is_zero(m[r][c])), None)
        if piv is None:
            continue
        m[r0], m[piv] = m[piv], m[r0]
        pv = m[r0][c]
        for r in range(r0 + 1, len(m)):
            if not field.is_zero(m[r][c]):
                f = m[r][c]
                m[r] = [
                    field.sub(field.mul(pv, m[r][k]), field.mul(f, m[r0][k]))
                    for k in range(ncols)
                ]
        rank += 1
        r0 += 1
        if r0 == len(m):
            break
    return rank
