"""Grid sweep, pairing, and one-parameter family confirmation.

The search method: walk angle quadruples over a degree grid, apply a basis
function f to the six inradii, and hunt for integer relations among
f(r1)..f(r6). Hits that involve all six triangles are logged. Hits sharing
one coefficient vector are then paired; each pair extends to an arithmetic
progression whose third quadruple suggests a one-parameter family, and the
family line is finally re-tested at high precision on deliberately
irrational parameter values between and beyond the seeds.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import CevianError, DegenerateSample
from .figure import ANGLE_GUARD_DEG, CevianConfig, build_from_angles, \
    build_from_angles_real, metrics
from .intrel import find_integer_relation
from .precision import detect_digits, real_to_str, workbits
from .relations import Monomial, Relation
from .store import FamilyCandidate, RecordLog, RelationRecord

# Confirmation samples keep this far inside the angle-positivity boundary.
CONFIRM_MARGIN_DEG = Fraction(1, 2)

# Extra precision for re-checking a raw sweep hit before it is logged.
RECHECK_EXTRA_BITS = 128

_PAIRS = tuple(itertools.combinations(range(6), 2))


class BasisFunction(enum.Enum):
    IDENTITY = "r"
    RECIPROCAL = "recip"
    SQUARE = "r2"
    RECIP_SQUARE = "recip2"
    RECIP_QUARTIC = "recip4"
    PAIR_PRODUCTS = "products"

    @classmethod
    def parse(cls, token: str) -> "BasisFunction":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown basis function: {token!r}") from None

    @property
    def vector_length(self) -> int:
        return 15 if self is BasisFunction.PAIR_PRODUCTS else 6

    @property
    def exponent(self) -> int:
        return {
            BasisFunction.IDENTITY: 1,
            BasisFunction.RECIPROCAL: -1,
            BasisFunction.SQUARE: 2,
            BasisFunction.RECIP_SQUARE: -2,
            BasisFunction.RECIP_QUARTIC: -4,
        }[self]

    def apply(self, inradii: Sequence[mpf]) -> tuple[mpf, ...]:
        """Basis values; round-off follows the ambient mpmath precision, so
        callers evaluate inside a workbits context."""
        if self is BasisFunction.PAIR_PRODUCTS:
            return tuple(inradii[i] * inradii[j] for i, j in _PAIRS)
        e = self.exponent
        return tuple(r**e for r in inradii)

    def involvement(self, coefficients: Sequence[int]) -> frozenset[int]:
        """1-based triangle indices touched by the nonzero coefficients."""
        if len(coefficients) != self.vector_length:
            raise ValueError(
                f"{self.value} expects {self.vector_length} coefficients, "
                f"got {len(coefficients)}"
            )
        touched = set()
        if self is BasisFunction.PAIR_PRODUCTS:
            for c, (i, j) in zip(coefficients, _PAIRS):
                if c:
                    touched.update((i + 1, j + 1))
        else:
            touched.update(i + 1 for i, c in enumerate(coefficients) if c)
        return frozenset(touched)

    def all_six(self, coefficients: Sequence[int]) -> bool:
        return len(self.involvement(coefficients)) == 6

    def to_relation(self, coefficients: Sequence[int]) -> Relation:
        """Human-readable relation for a coefficient vector on this basis."""
        if self is BasisFunction.PAIR_PRODUCTS:
            terms = []
            for c, (i, j) in zip(coefficients, _PAIRS):
                if c:
                    exps = [0] * 6
                    exps[i] += 1
                    exps[j] += 1
                    terms.append((c, Monomial(tuple(exps))))
            return Relation.from_terms("r", terms)
        return Relation.linear("r", coefficients, exponent=self.exponent)


@dataclass(frozen=True)
class GridSpec:
    """Rational-degree lattice of candidate quadruples."""

    step: Fraction
    ranges: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        step = Fraction(self.step)
        if step <= 0:
            raise ValueError(f"grid step must be positive: {step}")
        object.__setattr__(self, "step", step)
        fixed = tuple(
            (Fraction(lo), Fraction(hi)) for lo, hi in self.ranges
        )
        if len(fixed) != 4:
            raise ValueError("a grid needs four component ranges")
        object.__setattr__(self, "ranges", fixed)

    @classmethod
    def full(cls, step) -> "GridSpec":
        """Every positive multiple of step in each slot, sum permitting."""
        step = Fraction(step)
        return cls(step=step, ranges=tuple((step, Fraction(178)) for _ in range(4)))

    @classmethod
    def box(cls, center: Sequence, halfwidth, step) -> "GridSpec":
        step = Fraction(step)
        h = Fraction(halfwidth)
        ranges = []
        for x in center:
            x = Fraction(x)
            lo = max(x - h, ANGLE_GUARD_DEG)
            ranges.append((lo, x + h))
        return cls(step=step, ranges=tuple(ranges))

    def _axis(self, i: int) -> list[Fraction]:
        lo, hi = self.ranges[i]
        first = lo / self.step
        # first multiple of step at or above lo
        k = first.numerator // first.denominator
        if k * self.step < lo:
            k += 1
        out = []
        v = k * self.step
        while v <= hi:
            out.append(v)
            v += self.step
        return out

    def points(self) -> Iterator[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """Valid quadruples in ascending lexicographic order."""
        limit = 180 - ANGLE_GUARD_DEG
        axes = [self._axis(i) for i in range(4)]
        for a in axes[0]:
            for b in axes[1]:
                if a + b >= limit:
                    break
                for c in axes[2]:
                    if a + b + c >= limit:
                        break
                    for d in axes[3]:
                        if a + b + c + d > limit:
                            break
                        yield (a, b, c, d)

    def count(self) -> int:
        return sum(1 for _ in self.points())


@dataclass(frozen=True)
class SweepSummary:
    points_examined: int
    hits: int
    skipped: int


def _basis_values(quadruple, basis: BasisFunction, precision_bits: int):
    config = CevianConfig(*quadruple)
    figure = metrics(build_from_angles(config, precision_bits), precision_bits)
    with workbits(precision_bits):
        return basis.apply(figure.inradii)


def _detect_at(quadruple, basis: BasisFunction, precision_bits: int, max_coeff: int):
    """All-six relation candidate at one quadruple, or None."""
    values = _basis_values(quadruple, basis, precision_bits)
    candidate = find_integer_relation(values, max_coeff=max_coeff,
                                      precision_bits=precision_bits)
    if candidate is None or not basis.all_six(candidate.coefficients):
        return None
    return candidate


def _residual_at(quadruple, coefficients, basis: BasisFunction,
                 precision_bits: int) -> tuple[mpf, mpf]:
    """(absolute, relative) residual of a coefficient vector at a quadruple."""
    values = _basis_values(quadruple, basis, precision_bits)
    with workbits(precision_bits):
        parts = [c * v for c, v in zip(coefficients, values) if c]
        residual = abs(mpmath.fdot(coefficients, values))
        return residual, residual / max(abs(p) for p in parts)


def _examine_point(quadruple, basis: BasisFunction, precision_bits: int,
                   max_coeff: int) -> Optional[RelationRecord]:
    """Detection plus the higher-precision re-check, for one grid point.

    A raw hit must re-validate at extra precision before it is logged; a hit
    that fails gets one fresh search at the higher precision, which weeds out
    coincidental near-relations at the sweep precision.
    """
    candidate = _detect_at(quadruple, basis, precision_bits, max_coeff)
    recheck_bits = precision_bits + RECHECK_EXTRA_BITS
    if candidate is not None:
        _, relative = _residual_at(quadruple, candidate.coefficients, basis, recheck_bits)
        if relative > mpf(10) ** (-detect_digits(recheck_bits)):
            candidate = _detect_at(quadruple, basis, recheck_bits, max_coeff)
    if candidate is None:
        return None
    residual, relative = _residual_at(quadruple, candidate.coefficients, basis,
                                      precision_bits)
    if relative > mpf(10) ** (-detect_digits(precision_bits)):
        return None
    return RelationRecord(
        quadruple=tuple(quadruple),
        basis=basis.value,
        coefficients=candidate.coefficients,
        residual=real_to_str(residual, precision_bits),
        precision_bits=precision_bits,
    )


def _examine_chunk(args):
    chunk, basis_token, precision_bits, max_coeff = args
    basis = BasisFunction(basis_token)
    out = []
    for quadruple in chunk:
        skipped = False
        try:
            record = _examine_point(quadruple, basis, precision_bits, max_coeff)
        except CevianError:
            record, skipped = None, True
        out.append((record, skipped))
    return out


def _chunked(iterable, size):
    it = iter(iterable)
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield chunk


def sweep(grid: GridSpec, basis: BasisFunction, precision_bits: int,
          log: RecordLog, max_coeff: int = 100, jobs: int = 1,
          progress: Optional[Callable[[int, int, int], None]] = None,
          progress_every: int = 1000) -> SweepSummary:
    """Examine every grid point and append all-six hits to the log.

    Records are appended in grid order regardless of jobs, so reruns with
    identical flags produce byte-identical logs.
    """
    points_examined = hits = skipped = 0

    def consume(results, batch):
        nonlocal points_examined, hits, skipped
        for record, was_skipped in results:
            points_examined += 1
            if was_skipped:
                skipped += 1
            elif record is not None:
                batch.append(record)
                hits += 1
            if progress is not None and points_examined % progress_every == 0:
                log.append_many(batch)
                batch.clear()
                progress(points_examined, hits, skipped)

    batch: list[RelationRecord] = []
    if jobs > 1:
        chunk_args = (
            (chunk, basis.value, precision_bits, max_coeff)
            for chunk in _chunked(grid.points(), 200)
        )
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for results in pool.map(_examine_chunk, chunk_args):
                consume(results, batch)
    else:
        for chunk in _chunked(grid.points(), 200):
            consume(_examine_chunk((chunk, basis.value, precision_bits, max_coeff)),
                    batch)
    log.append_many(batch)
    return SweepSummary(points_examined=points_examined, hits=hits, skipped=skipped)


def pair_and_extrapolate(log: RecordLog) -> list[FamilyCandidate]:
    """Third quadruples completing arithmetic progressions of paired hits.

    Every ordered pair (lexicographic) of distinct quadruples sharing a
    coefficient vector extrapolates to q3 = 2*q2 - q1; pairs whose q3 leaves
    the valid domain are suppressed.
    """
    limit = 180 - ANGLE_GUARD_DEG
    candidates = []
    for (basis_token, coefficients), quadruples in sorted(
            log.group_by_coefficients().items()):
        for q1, q2 in itertools.combinations(quadruples, 2):
            q3 = tuple(2 * b - a for a, b in zip(q1, q2))
            if min(q3) < ANGLE_GUARD_DEG or sum(q3) > limit:
                continue
            candidates.append(FamilyCandidate(
                basis=basis_token, coefficients=coefficients,
                q1=q1, q2=q2, q3=q3, status="extrapolated",
            ))
    return candidates


def _confirm_interval(q1, direction) -> tuple[Fraction, Fraction]:
    """Clip the parameter range [-2, 3] to the valid angle domain."""
    lo, hi = Fraction(-2), Fraction(3)
    margin = CONFIRM_MARGIN_DEG
    constraints = [(q, d, margin, 1) for q, d in zip(q1, direction)]
    constraints.append((sum(q1), sum(direction), Fraction(180) - margin, -1))
    for base, slope, bound, sense in constraints:
        # sense +1 wants base + t*slope >= bound, -1 wants <= bound
        if slope == 0:
            if (base - bound) * sense < 0:
                return Fraction(1), Fraction(0)  # empty
            continue
        cut = (bound - base) / slope
        if (slope > 0) == (sense > 0):
            lo = max(lo, cut)
        else:
            hi = min(hi, cut)
    return lo, hi


def confirm_family(candidate: FamilyCandidate, high_precision_bits: int = 512,
                   sample_count: int = 5) -> FamilyCandidate:
    """Re-test a candidate's relation along its line at high precision.

    Sample parameters are spread over the clipped range [-2, 3] of
    t (with t=0 at q1 and t=1 at q2) and nudged by irrational offsets so no
    sample can coincide with a grid point. Confirmation requires every
    sample's relative residual below the detection tolerance at
    high_precision_bits.
    """
    basis = BasisFunction(candidate.basis)
    direction = tuple(b - a for a, b in zip(candidate.q1, candidate.q2))
    lo, hi = _confirm_interval(candidate.q1, direction)
    if hi <= lo:
        raise DegenerateSample(f"no valid parameter range for {candidate.q1}->{candidate.q2}")
    tolerance = mpf(10) ** (-detect_digits(high_precision_bits))
    samples = []
    confirmed = True
    attempts = 0
    k = 0
    with workbits(high_precision_bits):
        while len(samples) < sample_count and attempts < 5 * sample_count:
            attempts += 1
            pos = lo + (hi - lo) * Fraction(k + 1, sample_count + 1)
            if k >= sample_count:
                # fallback positions interleave the original spread
                pos = lo + (hi - lo) * Fraction(2 * (k - sample_count) + 1,
                                                2 * (sample_count + 1))
            offset = (mpf((hi - lo).numerator) / (hi - lo).denominator
                      / (997 * mp.pi * (k + 2)))
            t = mpf(pos.numerator) / pos.denominator + offset
            k += 1
            degs = [
                mpf(q.numerator) / q.denominator
                + t * (mpf(d.numerator) / d.denominator)
                for q, d in zip(candidate.q1, direction)
            ]
            try:
                figure = metrics(
                    build_from_angles_real(*degs, high_precision_bits),
                    high_precision_bits,
                )
            except CevianError:
                continue
            values = basis.apply(figure.inradii)
            parts = [c * v for c, v in zip(candidate.coefficients, values) if c]
            residual = abs(mpmath.fdot(candidate.coefficients, values))
            relative = residual / max(abs(p) for p in parts)
            samples.append((real_to_str(t, high_precision_bits),
                            real_to_str(relative, high_precision_bits)))
            if relative > tolerance:
                confirmed = False
    if not samples:
        raise DegenerateSample("every confirmation sample fell outside the domain")
    if len(samples) < sample_count:
        confirmed = False
    return replace(candidate,
                   status="confirmed" if confirmed else "refuted",
                   samples=tuple(samples))
