"""Words in free groups, finite presentations, and Fox free differential calculus."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import MalformedExponent, UnknownGenerator

Letter = tuple[str, int]  # (generator name, +1 or -1)


@dataclass(frozen=True)
class Word:
    """A word as an ordered tuple of (generator, +-1) letters.

    Words are stored as given (Fox derivatives of a literal relator match
    hand computation); free reduction is available on demand.
    """

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        for g, e in self.letters:
            if e not in (1, -1):
                raise MalformedExponent(f"letter exponent must be +-1, got {e}")

    @staticmethod
    def identity() -> "Word":
        return Word(())

    @staticmethod
    def from_syllables(syllables: Iterable[tuple[str, int]]) -> "Word":
        out: list[Letter] = []
        for g, e in syllables:
            out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return Word(tuple(out))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def reduced(self) -> "Word":
        out: list[Letter] = []
        for let in self.letters:
            if out and out[-1][0] == let[0] and out[-1][1] == -let[1]:
                out.pop()
            else:
                out.append(let)
        return Word(tuple(out))

    def is_identity(self) -> bool:
        return not self.reduced().letters

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.letters if g == gen)

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def syllables(self) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        for g, e in self.letters:
            if out and out[-1][0] == g:
                out[-1] = (g, out[-1][1] + e)
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append((g, e))
        return out

    def __str__(self) -> str:
        if not self.letters:
            return ""
        return " ".join(
            g if e == 1 else f"{g}^{e}" for g, e in self.syllables()
        )


@dataclass(frozen=True)
class GroupPresentation:
    """Generators (ordered) and relator words."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        seen = set()
        for g in self.generators:
            if g in seen:
                raise UnknownGenerator(f"duplicate generator {g!r}")
            seen.add(g)
        for r in self.relators:
            for g in r.generators():
                if g not in seen:
                    raise UnknownGenerator(f"relator uses undeclared generator {g!r}")

    @staticmethod
    def parse(generators: Sequence[str], relator_texts: Sequence[str], name: str = ""):
        gens = tuple(generators)
        stub = GroupPresentation(gens, (), name)
        rels = tuple(parse_word(t, stub) for t in relator_texts)
        return GroupPresentation(gens, rels, name)


_EXP_RE = re.compile(r"\^(-?\+?\d+)?")


def parse_word(text: str, pres: GroupPresentation) -> Word:
    """Parse generator names (longest match first) with optional ^<int>,
    separated by whitespace or juxtaposition."""
    names = sorted(pres.generators, key=len, reverse=True)
    syllables: list[tuple[str, int]] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        for name in names:
            if text.startswith(name, i):
                i += len(name)
                break
        else:
            raise UnknownGenerator(f"no generator matches {text[i:]!r} at offset {i}")
        exp = 1
        if i < n and text[i] == "^":
            m = _EXP_RE.match(text, i)
            if m is None or m.group(1) is None:
                raise MalformedExponent(f"malformed exponent at offset {i} in {text!r}")
            exp = int(m.group(1))
            i = m.end()
        if exp != 0:
            syllables.append((name, exp))
    return Word.from_syllables(syllables)


@dataclass(frozen=True)
class GroupRingElement:
    """Formal integer combination of words; freely-equal words are merged."""

    terms: tuple[tuple[int, Word], ...] = ()

    @staticmethod
    def build(raw: Iterable[tuple[int, Word]]) -> "GroupRingElement":
        acc: dict[tuple[Letter, ...], tuple[int, Word]] = {}
        for c, w in raw:
            key = w.reduced().letters
            if key in acc:
                c0, w0 = acc[key]
                acc[key] = (c0 + c, w0)
            else:
                acc[key] = (c, w)
        merged = tuple((c, w) for c, w in acc.values() if c != 0)
        return GroupRingElement(merged)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement.build(self.terms + other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> int:
        return sum(c for c, _ in self.terms)


def fox_derivative(w: Word, gen: str) -> GroupRingElement:
    """Fox free derivative d(w)/d(gen).

    Satisfies d(uv) = du + u dv, d(g)/dg = 1, d(g^-1)/dg = -g^-1.
    Computed on the literal word; cancelling letter pairs contribute zero
    after merging.
    """
    terms: list[tuple[int, Word]] = []
    prefix: list[Letter] = []
    for g, e in w.letters:
        if e == 1:
            if g == gen:
                terms.append((1, Word(tuple(prefix))))
            prefix.append((g, 1))
        else:
            prefix.append((g, -1))
            if g == gen:
                terms.append((-1, Word(tuple(prefix))))
    return GroupRingElement.build(terms)


def abelianized_boundary(pres: GroupPresentation) -> list[list[int]]:
    """Exponent-sum matrix, one row per relator, one column per generator.

    Equals the Fox-derivative system evaluated at the trivial representation.
    """
    return [[r.exponent_sum(g) for g in pres.generators] for r in pres.relators]
