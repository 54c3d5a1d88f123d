"""Twisted group cohomology from Fox derivatives.

The cocycle space Z^1 = {f: pi_1 -> su(2) | f(gh) = f(g) + Ad(rho(g)) f(h)}
is the kernel of the linear system whose (relator, generator) block is the
Ad-evaluated Fox derivative.  Circle-valued representations with rational
turns additionally get an exact rank: their system splits into a weight-0
integer block (rank over Q) and a weight-2 block with entries in Z[zeta_N]
(rank over the cyclotomic field), and the float and exact answers must
agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import (
    ComputationError,
    IllConditioned,
    InvalidInclusion,
    InvalidParameters,
)
from .exact import CyclotomicField, cyclotomic_rank, rational_rank
from .quaternions import ONE, ad, as_quaternion
from .reps import (
    Representation,
    RepresentationPath,
    RepClass,
    classify,
    evaluate_word,
    validate,
)
from .words import GroupPresentation, Word, abelianized_boundary, fox_derivative

RANK_CUTOFF = 1e-8        # singular values below cutoff * sigma_max are zero
RANK_CUTOFF_CHECK = 1e-6  # repeated at this cutoff; disagreement is an error

Coefficients = str  # "adjoint" | "real" | "weight2"


def _weight2_phase(rep: Representation, w: Word) -> complex:
    """Action of a word on the weight-2 line C j of a circle representation:
    multiplication by exp(2 i theta) for image exp(i theta)."""
    turns = _word_turns(rep, w)
    if turns is None:
        raise InvalidParameters(
            "weight-2 coefficients need a circle-valued representation "
            "with rational turns"
        )
    ang = 4.0 * math.pi * float(turns)
    return complex(math.cos(ang), math.sin(ang))


def _word_turns(rep: Representation, w: Word) -> Optional[Fraction]:
    turns = rep.circle_turns()
    if turns is None:
        return None
    total = Fraction(0)
    for g, e in w.letters:
        total += e * turns[g]
    return total


def _act_matrix(rep: Representation, w: Word, coefficients: Coefficients):
    if coefficients == "adjoint":
        return ad(evaluate_word(rep, w))
    if coefficients == "real":
        return np.array([[1.0]])
    if coefficients == "weight2":
        return np.array([[_weight2_phase(rep, w)]], dtype=complex)
    raise InvalidParameters(f"unknown coefficient system {coefficients!r}")


def block_dim(coefficients: Coefficients) -> int:
    return 3 if coefficients == "adjoint" else 1


@dataclass
class CocycleSystem:
    """The (blocks-of-relators) x (blocks-of-generators) linear system whose
    kernel is Z^1."""

    presentation: GroupPresentation
    rep: Representation
    coefficients: Coefficients
    matrix: np.ndarray  # (block*R) x (block*G)

    @property
    def block(self) -> int:
        return block_dim(self.coefficients)


def build_cocycle_system(
    pres: GroupPresentation,
    rep: Representation,
    coefficients: Coefficients = "adjoint",
) -> CocycleSystem:
    """Each relator r contributes the block row (Eval(dr/dg))_g."""
    bd = block_dim(coefficients)
    dtype = complex if coefficients == "weight2" else float
    R, G = len(pres.relators), len(pres.generators)
    M = np.zeros((bd * R, bd * G), dtype=dtype)
    for ri, r in enumerate(pres.relators):
        for gi, g in enumerate(pres.generators):
            blk = np.zeros((bd, bd), dtype=dtype)
            for c, prefix in fox_derivative(r, g).terms:
                blk += c * _act_matrix(rep, prefix, coefficients)
            M[bd * ri : bd * ri + bd, bd * gi : bd * gi + bd] = blk
    return CocycleSystem(pres, rep, coefficients, M)


def banded_rank(M: np.ndarray, what: str = "matrix") -> int:
    """SVD rank with the documented two-cutoff band."""
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    r1 = int(np.sum(s > RANK_CUTOFF * s[0]))
    r2 = int(np.sum(s > RANK_CUTOFF_CHECK * s[0]))
    if r1 != r2:
        raise IllConditioned(
            f"rank of {what} is ambiguous: {r2} at cutoff {RANK_CUTOFF_CHECK} "
            f"vs {r1} at {RANK_CUTOFF}; supply exact-path input"
        )
    return r1


def _nullspace(M: np.ndarray) -> np.ndarray:
    """Rows: an orthonormal basis of the kernel (banded cutoff)."""
    if M.size == 0:
        return np.eye(M.shape[1])
    u, s, vh = np.linalg.svd(M)
    rank = banded_rank(M)
    return vh[rank:]


def _exact_circle_rank(pres: GroupPresentation, rep: Representation) -> Optional[int]:
    """Exact real rank of the adjoint cocycle system of a one-circle
    representation: weight-0 integer block over Q plus twice the weight-2
    block over Q(zeta_N)."""
    turns = rep.circle_turns()
    if turns is None:
        return None
    r0 = rational_rank(
        [[Fraction(x) for x in row] for row in abelianized_boundary(pres)]
    )
    # weight-2 exponents: word w acts by zeta_N^{k}, k/N = 2 * turns(w) mod 1
    denoms = set()
    combos: list[list[dict[Word, int]]] = []
    for r in pres.relators:
        row = []
        for g in pres.generators:
            d = fox_derivative(r, g)
            row.append(d)
            for _, prefix in d.terms:
                denoms.add((2 * _word_turns_of(turns, prefix)) % 1)
        combos.append(row)
    N = 1
    for f in denoms:
        N = N * f.denominator // math.gcd(N, f.denominator)
    field = CyclotomicField(N)
    rows = []
    for ri, r in enumerate(pres.relators):
        row = []
        for gi, g in enumerate(pres.generators):
            combo: dict[int, int] = {}
            for c, prefix in combos[ri][gi].terms:
                frac = (2 * _word_turns_of(turns, prefix)) % 1
                k = int(frac * N)
                combo[k] = combo.get(k, 0) + c
            row.append(field.from_integer_combination(combo))
        rows.append(row)
    r2 = cyclotomic_rank(field, rows)
    return r0 + 2 * r2


def _word_turns_of(turns: Mapping[str, Fraction], w: Word) -> Fraction:
    return sum((e * turns[g] for g, e in w.letters), Fraction(0))


def dim_z1(pres: GroupPresentation, rep: Representation) -> int:
    """dim Z^1 = 3 * #generators - rank(cocycle system).

    For one-circle representations with rational turns the rank is computed
    exactly as well, and the two answers must agree.
    """
    system = build_cocycle_system(pres, rep)
    rank_f = banded_rank(system.matrix, "cocycle system")
    dim = 3 * len(pres.generators) - rank_f
    exact_rank = _exact_circle_rank(pres, rep)
    if exact_rank is not None and exact_rank != rank_f:
        raise IllConditioned(
            f"float rank {rank_f} disagrees with exact rank {exact_rank}"
        )
    return dim


@dataclass(frozen=True)
class CohomologySummary:
    dim_z1: int
    dim_h0: int
    dim_h1: int
    h: int
    rep_class: RepClass

    def __post_init__(self):
        if self.dim_h1 != self.dim_z1 - 3 + self.dim_h0:
            raise ComputationError("cohomology identity violated")
        if self.h != self.dim_h0 + self.dim_h1:
            raise ComputationError("h must equal dim H^0 + dim H^1")


def cohomology_summary(pres: GroupPresentation, rep: Representation) -> CohomologySummary:
    """dim H^0 from the central/abelian/irreducible trichotomy, dim H^1 from
    dim Z^1 - 3 + dim H^0, and h = dim H^0 + dim H^1."""
    cls = classify(rep)
    h0 = cls.dim_h0
    z1 = dim_z1(pres, rep)
    h1 = z1 - 3 + h0
    if h1 < 0:
        raise ComputationError(
            f"negative dim H^1 = {h1}; representation is inconsistent"
        )
    return CohomologySummary(z1, h0, h1, h0 + h1, cls)


# ------------------------------------------------------------- restriction

@dataclass(frozen=True)
class Inclusion:
    """A subgroup inclusion given by words for each sub-generator."""

    presentation: GroupPresentation
    images: Mapping[str, Word]  # sub-generator -> word in the ambient group


@dataclass(frozen=True)
class ExtraSource:
    """An additional cohomology source (a piece not contained in the big
    group), with its own representation and, per target, words expressing
    the target generators inside this piece (None = no map)."""

    presentation: GroupPresentation
    rep: Representation
    target_words: Sequence[Optional[Mapping[str, Word]]]


def _induced_rep(big_rep: Representation, inc: Inclusion) -> Representation:
    return Representation(
        {g: evaluate_word(big_rep, w) for g, w in inc.images.items()}
    )


def _cocycle_extend(fvals, word: Word, rep: Representation, coefficients):
    """Value of the cocycle on a word from its generator values:
    f(uv) = f(u) + act(u) f(v), f(g^-1) = -act(g^-1) f(g)."""
    bd = block_dim(coefficients)
    dtype = complex if coefficients == "weight2" else float
    total = np.zeros(bd, dtype=dtype)
    prefix = Word.identity()
    for g, e in word.letters:
        letter = Word(((g, e),))
        if e == 1:
            total = total + _act_matrix(rep, prefix, coefficients) @ fvals[g]
        else:
            total = total - _act_matrix(rep, prefix * letter, coefficients) @ fvals[g]
        prefix = prefix * letter
    return total


def _z1_basis(pres: GroupPresentation, rep: Representation, coefficients) -> np.ndarray:
    system = build_cocycle_system(pres, rep, coefficients)
    return _nullspace(system.matrix)  # rows are cocycles (stacked gen values)


def _coboundary_columns(pres: GroupPresentation, rep: Representation, coefficients):
    """Columns spanning B^1 in stacked-generator-value coordinates."""
    bd = block_dim(coefficients)
    dtype = complex if coefficients == "weight2" else float
    cols = []
    for b in range(bd):
        v = np.zeros(bd, dtype=dtype)
        v[b] = 1.0
        col = np.concatenate(
            [
                v - _act_matrix(rep, Word(((g, 1),)), coefficients) @ v
                for g in pres.generators
            ]
        )
        cols.append(col)
    if not cols:
        return np.zeros((bd * len(pres.generators), 0), dtype=dtype)
    return np.stack(cols, axis=1)


def restriction_cokernel(
    pres_big: GroupPresentation,
    rep: Representation,
    inclusions: Sequence[Inclusion],
    extra_sources: Sequence[ExtraSource] = (),
    coefficients: Coefficients = "adjoint",
    tol: float = 1e-8,
) -> int:
    """dim coker( Z^1(big) + sum Z^1(extra) -> sum_j H^1(sub_j) ).

    The restriction pulls a cocycle back along the stated word images and is
    taken modulo coboundaries of each target.
    """
    bd = block_dim(coefficients)
    targets = list(inclusions)
    target_reps = []
    for inc in targets:
        sub_rep = _induced_rep(rep, inc)
        rpt = validate(inc.presentation, sub_rep, tol=max(tol, 1e-9))
        if not rpt.passed:
            raise InvalidInclusion(
                f"induced representation violates sub-relators "
                f"(max deviation {rpt.max_deviation:.2e})"
            )
        target_reps.append(sub_rep)
    for src in extra_sources:
        if len(src.target_words) != len(targets):
            raise InvalidInclusion("extra source needs one entry per inclusion")
        rpt = validate(src.presentation, src.rep, tol=max(tol, 1e-9))
        if not rpt.passed:
            raise InvalidInclusion("extra-source representation is invalid")
        for tw, inc, trep in zip(src.target_words, targets, target_reps):
            if tw is None:
                continue
            for g in inc.presentation.generators:
                via_src = as_quaternion(evaluate_word(src.rep, tw[g]))
                via_big = as_quaternion(trep.image(g))
                if via_src.distance(via_big) > 1e-6:
                    raise InvalidInclusion(
                        f"target generator {g!r} has inconsistent images"
                    )

    target_dims = [bd * len(inc.presentation.generators) for inc in targets]
    offsets = np.concatenate([[0], np.cumsum(target_dims)])
    total = int(offsets[-1])
    dtype = complex if coefficients == "weight2" else float

    def restrict(fvals, source_rep, word_map, t_index):
        out = np.zeros(total, dtype=dtype)
        inc = targets[t_index]
        vals = [
            _cocycle_extend(fvals, word_map[g], source_rep, coefficients)
            for g in inc.presentation.generators
        ]
        out[offsets[t_index] : offsets[t_index + 1]] = np.concatenate(vals)
        return out

    image_cols = []
    sources = [(pres_big, rep, [inc.images for inc in targets])]
    for src in extra_sources:
        sources.append((src.presentation, src.rep, list(src.target_words)))
    for s_pres, s_rep, maps in sources:
        basis = _z1_basis(s_pres, s_rep, coefficients)
        for row in basis:
            fvals = {
                g: row[bd * i : bd * (i + 1)]
                for i, g in enumerate(s_pres.generators)
            }
            col = np.zeros(total, dtype=dtype)
            for ti, wm in enumerate(maps):
                if wm is not None:
                    col += restrict(fvals, s_rep, wm, ti)
            image_cols.append(col)

    cob_cols = []
    h1_total = 0
    for ti, (inc, trep) in enumerate(zip(targets, target_reps)):
        z1_t = _z1_basis(inc.presentation, trep, coefficients).shape[0]
        B = _coboundary_columns(inc.presentation, trep, coefficients)
        rank_b = banded_rank(B, "coboundaries") if B.size else 0
        h1_total += z1_t - rank_b
        for c in range(B.shape[1]):
            col = np.zeros(total, dtype=dtype)
            col[offsets[ti] : offsets[ti + 1]] = B[:, c]
            cob_cols.append(col)

    def col_rank(cols):
        if not cols:
            return 0
        return banded_rank(np.stack(cols, axis=1), "restriction map")

    rank_with = col_rank(image_cols + cob_cols)
    rank_b_all = col_rank(cob_cols)
    return h1_total - (rank_with - rank_b_all)


# ---------------------------------------------------------- path certificate

DEFAULT_SAMPLES = (
    Fraction(0),
    Fraction(1, 1000),
    Fraction(1, 100),
    Fraction(1, 10),
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(1),
)

RHO_CONSTANT = "rho-constant"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class PathCertificate:
    """Sampled cohomology dimensions along a representation path, with the
    verdict of the rho-constancy criterion.

    rho-constant requires either the jump pattern (dim H^0, dim H^1) =
    (1, h+1) at t = 0 and (0, h) at every sampled t > 0, or constant
    dimensions at every sample (the reducible-deformation variant).
    """

    samples: tuple[Fraction, ...]
    summaries: tuple[CohomologySummary, ...]
    verdict: str
    h: Optional[int]


def path_certificate(
    pres: GroupPresentation,
    path: RepresentationPath,
    samples: Sequence[Union[Fraction, float]] = DEFAULT_SAMPLES,
) -> PathCertificate:
    samples = tuple(Fraction(s) if not isinstance(s, Fraction) else s for s in samples)
    if Fraction(0) not in samples:
        raise InvalidParameters("samples must include t = 0")
    summaries = tuple(cohomology_summary(pres, path.at(t)) for t in samples)
    by_t = dict(zip(samples, summaries))
    s0 = by_t[Fraction(0)]
    positive = [s for t, s in zip(samples, summaries) if t > 0]

    verdict, h = NOT_APPLICABLE, None
    if positive:
        hs = {(s.dim_h0, s.dim_h1) for s in positive}
        if len(hs) == 1:
            h0p, h1p = next(iter(hs))
            if h0p == 0 and (s0.dim_h0, s0.dim_h1) == (1, h1p + 1):
                verdict, h = RHO_CONSTANT, h1p
    if verdict == NOT_APPLICABLE and len(set(summaries)) == 1:
        verdict, h = RHO_CONSTANT, s0.h
    return PathCertificate(samples, summaries, verdict, h)
