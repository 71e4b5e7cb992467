"""Integer-relation detection over high-precision real vectors.

Thin, defensive wrapper around mpmath's PSLQ. The wrapper enforces a
precision budget before searching, re-verifies any reported relation
directly against the input vector, and canonicalizes the coefficient signs,
so a returned candidate never depends on search internals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
from mpmath import mpf

from .errors import PrecisionTooLow, ZeroInput
from .precision import detect_digits, workbits
from .relations import normalize_vector

MAX_VECTOR_LENGTH = 16

# Fixed overhead plus per-entry coefficient head-room, in bits.
_BASE_BITS = 32
_GUARD_BITS = 96


def required_bits(length: int, max_coeff: int) -> int:
    return _BASE_BITS + length * math.ceil(math.log2(max_coeff)) + _GUARD_BITS


@dataclass(frozen=True)
class RelationCandidate:
    coefficients: tuple[int, ...]
    residual: mpf
    sup_norm: int

    def all_six_involved(self) -> bool:
        return all_six_involved(self.coefficients)


def all_six_involved(coefficients: Sequence[int]) -> bool:
    """True when a six-entry vector uses every triangle's quantity."""
    if len(coefficients) != 6:
        raise ValueError(f"expected a six-entry vector, got {len(coefficients)}")
    return all(c != 0 for c in coefficients)


def find_integer_relation(
    values: Sequence[mpf],
    max_coeff: int = 100,
    precision_bits: int = 256,
) -> Optional[RelationCandidate]:
    """Search for integers c with sum(c_i * values_i) = 0, sup-norm <= max_coeff.

    Returns None when no relation certifiable at this precision exists. The
    residual of any returned candidate is evaluated independently and must
    fall below 10^-detect_digits relative to the largest input.
    """
    n = len(values)
    if not 2 <= n <= MAX_VECTOR_LENGTH:
        raise ValueError(f"vector length must be 2..{MAX_VECTOR_LENGTH}, got {n}")
    if max_coeff < 1:
        raise ValueError(f"max_coeff must be positive, got {max_coeff}")
    needed = required_bits(n, max_coeff)
    if precision_bits < needed:
        raise PrecisionTooLow(
            f"need {needed} bits for length {n} with max_coeff {max_coeff}, "
            f"got {precision_bits}"
        )
    with workbits(precision_bits):
        xs = [mpmath.mpmathify(v) for v in values]
        if any(x == 0 for x in xs):
            raise ZeroInput("input vector contains an exact zero")
        tol = mpf(10) ** (-detect_digits(precision_bits))
        # pslq treats maxcoeff as a strict bound; shift by one so equality
        # with max_coeff is still reportable, then enforce <= ourselves.
        raw = mpmath.pslq(xs, tol=tol, maxcoeff=max_coeff + 1, maxsteps=1000 * n)
        if raw is None:
            return None
        coeffs = normalize_vector(raw)
        sup = max(abs(c) for c in coeffs)
        if sup > max_coeff:
            return None
        residual = abs(mpmath.fdot(coeffs, xs))
        if residual > tol * max(abs(x) for x in xs):
            return None
        return RelationCandidate(coefficients=coeffs, residual=residual, sup_norm=sup)
