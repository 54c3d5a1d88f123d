"""Signatures: exact symmetric forms, Hermitian eigenvalue counts, cyclic
branched-cover eigenspace forms, equivariant signature sums, and local
fixed-point signatures.

Rational symmetric forms are diagonalized by exact congruence so integer
answers are exact; only genuinely complex Hermitian forms use floating
eigenvalues.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import (
    BorderlineEigenvalue,
    DimensionMismatch,
    InvalidParameters,
    NonRealResult,
    RangeError,
    SingularAngle,
)
from .exact import rational_solve

HERMITIAN_TOL = 1e-9


@dataclass(frozen=True)
class SymmetricForm:
    """Square symmetric matrix with exact rational entries."""

    entries: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "SymmetricForm":
        ent = tuple(tuple(Fraction(x) for x in row) for row in rows)
        n = len(ent)
        if any(len(row) != n for row in ent):
            raise DimensionMismatch("form must be square")
        for i in range(n):
            for j in range(n):
                if ent[i][j] != ent[j][i]:
                    raise InvalidParameters("form must be exactly symmetric")
        return SymmetricForm(ent)

    @property
    def dim(self) -> int:
        return len(self.entries)


def signature(form: SymmetricForm) -> int:
    """#positive - #negative eigenvalues, via exact congruence
    diagonalization (never floating point)."""
    n = form.dim
    m = [list(row) for row in form.entries]
    active = list(range(n))
    sig = 0
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(
                (
                    (i, j)
                    for i in active
                    for j in active
                    if i != j and m[i][j] != 0
                ),
                None,
            )
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # congruence e_i <- e_i + e_j puts 2 m[i][j] on the diagonal
            for c in range(n):
                m[i][c] += m[j][c]
            for r in range(n):
                m[r][i] += m[r][j]
            continue
        d = m[piv][piv]
        sig += 1 if d > 0 else -1
        active.remove(piv)
        for r in active:
            if m[r][piv] != 0:
                f = m[r][piv] / d
                for c in active:
                    m[r][c] -= f * m[piv][c]
                m[r][piv] = Fraction(0)
        for c in active:
            m[piv][c] = Fraction(0)
    return sig


def restrict_form(form: SymmetricForm, basis: Sequence[Sequence]) -> SymmetricForm:
    """Gram matrix B^T Q B of the form on the span of the basis vectors."""
    vecs = [[Fraction(x) for x in v] for v in basis]
    for v in vecs:
        if len(v) != form.dim:
            raise DimensionMismatch(
                f"basis vector has length {len(v)}, form has dim {form.dim}"
            )
    k = len(vecs)
    gram = [
        [
            sum(
                vecs[a][i] * form.entries[i][j] * vecs[b][j]
                for i in range(form.dim)
                for j in range(form.dim)
            )
            for b in range(k)
        ]
        for a in range(k)
    ]
    return SymmetricForm.from_rows(gram)


def solve_boundary_class(
    boundary: Sequence[Sequence[int]], target: Sequence
) -> list[Fraction]:
    """Rational x with x^T . boundary = target (rows of `boundary` are the
    2-handle boundaries in the meridian homology basis).  Raises NoSolution
    when the target class is not null-homologous."""
    rows = [[Fraction(x) for x in row] for row in boundary]
    t = [Fraction(x) for x in target]
    if rows and any(len(r) != len(t) for r in rows):
        raise DimensionMismatch("target length must match boundary columns")
    # x^T B = t  <=>  B^T x = t
    bt = [[rows[r][c] for r in range(len(rows))] for c in range(len(t))]
    return rational_solve(bt, t)


@dataclass(frozen=True)
class HermitianForm:
    """Square complex matrix, conjugate-symmetric within 1e-12."""

    matrix: np.ndarray

    @staticmethod
    def from_matrix(m) -> "HermitianForm":
        arr = np.asarray(m, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch("Hermitian form must be square")
        if arr.size and np.max(np.abs(arr - arr.conj().T)) > 1e-12:
            raise InvalidParameters("matrix is not conjugate-symmetric")
        return HermitianForm(arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Inertia:
    positive: int
    negative: int
    zero: int

    @property
    def signature(self) -> int:
        return self.positive - self.negative


def hermitian_inertia(form: HermitianForm, tol: float = HERMITIAN_TOL) -> Inertia:
    if form.dim == 0:
        return Inertia(0, 0, 0)
    ev = np.linalg.eigvalsh(form.matrix)
    borderline = [x for x in ev if tol < abs(x) < 10 * tol]
    if borderline:
        raise BorderlineEigenvalue(
            f"eigenvalues {borderline} lie in the ({tol}, {10 * tol}) band"
        )
    pos = int(np.sum(ev > tol))
    neg = int(np.sum(ev < -tol))
    return Inertia(pos, neg, form.dim - pos - neg)


def hermitian_signature(form: HermitianForm, tol: float = HERMITIAN_TOL) -> int:
    """#eigenvalues > tol minus #eigenvalues < -tol; near-zero eigenvalues
    count as zero (and are reported via hermitian_inertia)."""
    return hermitian_inertia(form, tol).signature


@dataclass(frozen=True)
class SeifertMatrix:
    """Square integer matrix (not symmetric in general)."""

    matrix: np.ndarray

    @staticmethod
    def from_rows(rows) -> "SeifertMatrix":
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch("Seifert matrix must be square")
        return SeifertMatrix(arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def cg_eigenspace_form(A: SeifertMatrix, m: int, r: int) -> HermitianForm:
    """(1 - exp(-2 pi i r/m)) A + (1 - exp(2 pi i r/m)) A^*, the intersection
    form on the zeta^r eigenspace of the m-fold cyclic branched cover."""
    if not 1 <= r <= m - 1:
        raise RangeError(f"eigenspace index r={r} outside [1, {m - 1}]")
    z = cmath.exp(-2j * math.pi * r / m)
    mat = (1 - z) * A.matrix + (1 - z.conjugate()) * A.matrix.T
    return HermitianForm.from_matrix(mat)


def g_signature_from_seifert(
    A: SeifertMatrix, m: int, s: int, sign_quotient: int, tol: float = HERMITIAN_TOL
) -> float:
    """Sign(quotient) + sum_r exp(2 pi i r s/m) Sign(Q|E_r); the imaginary
    part must vanish (conjugate eigenspaces have equal signature)."""
    if not 1 <= s <= m - 1:
        raise InvalidParameters(f"power s={s} outside [1, {m - 1}]")
    total = complex(sign_quotient)
    for r in range(1, m):
        sig = hermitian_signature(cg_eigenspace_form(A, m, r), tol)
        total += cmath.exp(2j * math.pi * r * s / m) * sig
    if abs(total.imag) > 1e-9:
        raise NonRealResult(f"imaginary residue {total.imag:.3e}")
    return total.real


def eigenspace_signature_from_cover(sign_total: int, sign_quotient: int) -> int:
    """Signature of the (-1)-weight part of a double cover: total minus the
    quotient signature (the transfer identifies the (+1)-part with the
    quotient)."""
    return sign_total - sign_quotient


def average_signature(
    m: int,
    sign_g: Mapping[int, float],
    character: Mapping[int, complex],
) -> float:
    """(1/m) sum_{n=0}^{m-1} Sign(g^n, cover) chi(g^n)."""
    missing = [n for n in range(m) if n not in sign_g or n not in character]
    if missing:
        raise InvalidParameters(f"sign_g/character missing powers {missing}")
    total = sum(complex(character[n]) * sign_g[n] for n in range(m)) / m
    if abs(total.imag) > 1e-9:
        raise NonRealResult(f"imaginary residue {total.imag:.3e}")
    return total.real


@dataclass(frozen=True)
class IsolatedFixedPoint:
    """g.(z, w) = (exp(i theta_1) z, exp(i theta_2) w), angles as rational
    turns in (0, 1)."""

    theta1_turns: Fraction
    theta2_turns: Fraction
    count: int = 1

    def __post_init__(self):
        for t in (self.theta1_turns, self.theta2_turns):
            if Fraction(t) % 1 == 0:
                raise SingularAngle("isolated fixed point with angle 0")
        object.__setattr__(self, "theta1_turns", Fraction(self.theta1_turns) % 1)
        object.__setattr__(self, "theta2_turns", Fraction(self.theta2_turns) % 1)


@dataclass(frozen=True)
class FixedSurface:
    """g.(z, w) = (z, exp(i psi) w) along a surface of self-intersection F.F."""

    self_intersection: int
    psi_turns: Fraction
    count: int = 1

    def __post_init__(self):
        if Fraction(self.psi_turns) % 1 == 0:
            raise SingularAngle("fixed surface with rotation angle 0")
        object.__setattr__(self, "psi_turns", Fraction(self.psi_turns) % 1)


FixedPointDatum = Union[IsolatedFixedPoint, FixedSurface]


def local_g_signature(data: Sequence[FixedPointDatum]) -> float:
    """Fixed-point formula for the g-signature:
    surfaces contribute F.F csc^2(psi/2), isolated points contribute
    -cot(theta_1/2) cot(theta_2/2); angles are 2 pi * turns."""
    total = 0.0
    for d in data:
        if isinstance(d, IsolatedFixedPoint):
            total -= (
                d.count
                / math.tan(math.pi * float(d.theta1_turns))
                / math.tan(math.pi * float(d.theta2_turns))
            )
        elif isinstance(d, FixedSurface):
            total += (
                d.count
                * d.self_intersection
                / math.sin(math.pi * float(d.psi_turns)) ** 2
            )
        else:
            raise InvalidParameters(f"bad fixed-point datum {d!r}")
    return total


def signature_defect(local: float, sign_g: float) -> float:
    """sigma(g) = L(g, W) - Sign(g, W); independent of the bounding W."""
    return local - sign_g
