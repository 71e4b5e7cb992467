"""Integer relations among per-triangle quantities.

A relation is an integer linear combination of monomials in the six values
of one quantity (inradius r, area K, semiperimeter s, circumradius R) that
vanishes identically on some family of configurations. Construction always
normalizes to a canonical form so that equal relations compare equal:
duplicate monomials merged, zero terms dropped, coefficients divided by
their gcd, terms sorted, and the leading coefficient made positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from mpmath import mpf

from .figure import FigureMetrics
from .precision import workbits

QUANTITY_CODES = ("r", "K", "s", "R")


@dataclass(frozen=True)
class Monomial:
    """Exponent vector over the six triangle indices; not identically zero."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if len(self.exponents) != 6:
            raise ValueError(f"expected six exponents, got {self.exponents}")
        if not any(self.exponents):
            raise ValueError("constant monomial is not allowed")

    @classmethod
    def single(cls, index: int, exponent: int = 1) -> "Monomial":
        """Monomial in one triangle's quantity; index is 1-based."""
        exps = [0] * 6
        exps[index - 1] = exponent
        return cls(tuple(exps))

    @property
    def sort_key(self):
        # Terms in triangle-index order, a positive exponent before a deeper
        # negative one, so r1 leads whenever it appears.
        return tuple((0, -e) if e else (1, 0) for e in self.exponents)

    def involves(self) -> frozenset[int]:
        return frozenset(i + 1 for i, e in enumerate(self.exponents) if e)

    def times(self, other: "Monomial") -> "Monomial":
        merged = tuple(x + y for x, y in zip(self.exponents, other.exponents))
        return Monomial(merged)

    def evaluate(self, values: Sequence[mpf]) -> mpf:
        out = mpf(1)
        for v, e in zip(values, self.exponents):
            if e:
                out *= v**e
        return out

    def format(self, symbol: str) -> str:
        parts = []
        for i, e in enumerate(self.exponents, start=1):
            if e == 0:
                continue
            parts.append(f"{symbol}{i}" if e == 1 else f"{symbol}{i}^{e}")
        return "*".join(parts)


@dataclass(frozen=True)
class Relation:
    """Canonical integer combination of monomials in one quantity."""

    quantity: str
    terms: tuple[tuple[int, Monomial], ...]

    def __post_init__(self):
        if self.quantity not in QUANTITY_CODES:
            raise ValueError(f"unknown quantity code: {self.quantity!r}")

    @classmethod
    def from_terms(cls, quantity: str, terms: Iterable[tuple[int, Monomial]]) -> "Relation":
        merged: dict[tuple[int, ...], int] = {}
        order: dict[tuple[int, ...], Monomial] = {}
        for coeff, mono in terms:
            merged[mono.exponents] = merged.get(mono.exponents, 0) + int(coeff)
            order[mono.exponents] = mono
        kept = [(c, order[e]) for e, c in merged.items() if c != 0]
        if len(kept) < 2:
            raise ValueError("a relation needs at least two surviving terms")
        g = math.gcd(*(abs(c) for c, _ in kept))
        kept = [(c // g, m) for c, m in kept]
        kept.sort(key=lambda t: t[1].sort_key)
        if kept[0][0] < 0:
            kept = [(-c, m) for c, m in kept]
        return cls(quantity=quantity, terms=tuple(kept))

    @classmethod
    def linear(cls, quantity: str, coefficients: Sequence[int], exponent: int = 1) -> "Relation":
        """Relation c1*q1^e + ... + c6*q6^e = 0 from a six-vector."""
        if len(coefficients) != 6:
            raise ValueError(f"expected six coefficients, got {coefficients}")
        terms = [
            (c, Monomial.single(i, exponent))
            for i, c in enumerate(coefficients, start=1)
            if c
        ]
        return cls.from_terms(quantity, terms)

    @property
    def coefficient_vector(self) -> tuple[int, ...] | None:
        """The six-vector view, if every term is a first-power singleton."""
        out = [0] * 6
        for c, m in self.terms:
            nonzero = [(i, e) for i, e in enumerate(m.exponents) if e]
            if len(nonzero) != 1 or nonzero[0][1] != 1:
                return None
            out[nonzero[0][0]] = c
        return tuple(out)

    def involves(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for _, m in self.terms:
            out |= m.involves()
        return out

    def scaled_by(self, mono: Monomial) -> "Relation":
        """Multiply every term by a monomial (clearing denominators etc.)."""
        return Relation.from_terms(
            self.quantity, [(c, m.times(mono)) for c, m in self.terms]
        )

    def evaluate(self, figure: FigureMetrics) -> tuple[mpf, mpf]:
        """(absolute residual, relative residual) at the figure's precision.

        The relative residual divides by the largest term magnitude, making
        the verdict invariant under rescaling of the whole figure when the
        relation is homogeneous.
        """
        with workbits(figure.precision_bits):
            values = figure.quantity(self.quantity)
            parts = [c * m.evaluate(values) for c, m in self.terms]
            residual = abs(sum(parts))
            scale = max(abs(p) for p in parts)
            return residual, residual / scale

    def __str__(self) -> str:
        chunks = []
        for c, m in self.terms:
            body = m.format(self.quantity)
            mag = abs(c)
            piece = body if mag == 1 else f"{mag}*{body}"
            if not chunks:
                chunks.append(piece if c > 0 else f"-{piece}")
            else:
                chunks.append(f"+ {piece}" if c > 0 else f"- {piece}")
        return " ".join(chunks) + " = 0"


def normalize_vector(coefficients: Sequence[int]) -> tuple[int, ...]:
    """Canonical form of a raw detector vector: gcd one, leading sign positive."""
    coeffs = [int(c) for c in coefficients]
    nonzero = [c for c in coeffs if c]
    if not nonzero:
        raise ValueError("zero vector has no canonical form")
    g = math.gcd(*(abs(c) for c in nonzero))
    coeffs = [c // g for c in coeffs]
    first = next(c for c in coeffs if c)
    if first < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)
