"""Executable catalog of known six-incircle identities.

Each entry couples one or more canonical relations with the predicate that
selects the configurations on which they vanish: a notable center together
with a shape rule, a single fixed angle quadruple, any interior point, or a
template whose source figure only survives as coefficients. Entries are
verified numerically on sampled instances, never proven.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .centers import NotableCenter, TriangleShape, center_config
from .errors import CenterNotInterior, UnsatisfiablePredicate
from .figure import CevianConfig, build_from_angles, build_from_angles_real, metrics
from .precision import detect_digits, to_radians, workbits
from .relations import Monomial, Relation

# Shapes and quadruples are sampled on this denominator grid so that angle
# sums stay exact.
_GRID_DENOM = 3600


@dataclass(frozen=True)
class EntryPredicate:
    """Where an entry's relations are claimed to hold."""

    kind: str  # "center" | "quadruple" | "any-interior" | "template"
    center: NotableCenter | None = None
    shape_rule: str = "any"  # "any" | "acute" | "fixed-b" | "fixed"
    fixed_angle_b: Fraction | None = None
    fixed_shape: tuple[Fraction, Fraction, Fraction] | None = None
    quadruple: tuple[Fraction, Fraction, Fraction, Fraction] | None = None

    def describe(self) -> str:
        if self.kind == "quadruple":
            return "quadruple=(%s)" % ",".join(str(x) for x in self.quadruple)
        if self.kind == "any-interior":
            return "any interior P"
        if self.kind == "template":
            return "one-parameter template; source angles not transcribed"
        bits = [f"P={self.center.value}"]
        if self.shape_rule == "acute":
            bits.append("acute shapes")
        elif self.shape_rule == "fixed-b":
            bits.append(f"angle B={self.fixed_angle_b}")
        elif self.shape_rule == "fixed":
            bits.append("shape=(%s)" % ",".join(str(x) for x in self.fixed_shape))
        else:
            bits.append("any shape")
        return ", ".join(bits)


@dataclass(frozen=True)
class CatalogEntry:
    entry_id: str
    relations: tuple[Relation, ...]
    predicate: EntryPredicate
    verifiable: bool = True
    informational: tuple[Relation, ...] = ()


@dataclass(frozen=True)
class VerificationReport:
    entry_id: str
    samples_tested: int
    max_relative_residual: mpf
    verdict: str  # "pass" | "fail" | "skipped"
    precision_bits: int
    notes: tuple[str, ...] = ()


def _center(center: NotableCenter, shape_rule: str = "any", *,
            angle_b: Fraction | None = None) -> EntryPredicate:
    return EntryPredicate(kind="center", center=center, shape_rule=shape_rule,
                          fixed_angle_b=angle_b)


def _fixed_shape_center(center: NotableCenter, shape) -> EntryPredicate:
    return EntryPredicate(kind="center", center=center, shape_rule="fixed",
                          fixed_shape=tuple(Fraction(x) for x in shape))


def _recip(coeffs) -> Relation:
    return Relation.linear("r", coeffs, exponent=-1)


def _alternating_product(quantity: str) -> Relation:
    return Relation.from_terms(quantity, [
        (1, Monomial((1, 0, 1, 0, 1, 0))),
        (-1, Monomial((0, 1, 0, 1, 0, 1))),
    ])


def _build_catalog() -> tuple[CatalogEntry, ...]:
    orthocenter = _center(NotableCenter.ORTHOCENTER, "acute")
    centroid = _center(NotableCenter.CENTROID)
    circumcenter = _center(NotableCenter.CIRCUMCENTER, "acute")
    incenter_60 = _center(NotableCenter.INCENTER, "fixed-b", angle_b=Fraction(60))
    incenter_120 = _center(NotableCenter.INCENTER, "fixed-b", angle_b=Fraction(120))
    # incenter of the 30-60-90 shape (angle B = 30, angle C = 60)
    right_incenter = _fixed_shape_center(NotableCenter.INCENTER, (90, 30, 60))

    area_equalities = tuple(
        Relation.from_terms("K", [(1, Monomial.single(i)), (-1, Monomial.single(i + 1))])
        for i in range(1, 6)
    )

    quotient_120 = Relation.from_terms("r", [
        (1, Monomial((1, 0, 0, 0, 0, 0))),
        (1, Monomial((0, 1, 0, 0, 0, 0))),
        (1, Monomial((0, 0, -1, 0, 1, 1))),
        (-1, Monomial((0, 0, 0, 0, 1, 0))),
        (-1, Monomial((0, 0, 0, 0, 0, 1))),
        (-1, Monomial((1, 1, 0, -1, 0, 0))),
    ])

    product_120 = Relation.from_terms("r", [
        (1, Monomial((1, 1, 1, 0, 0, 0))),
        (1, Monomial((0, 0, 1, 1, 1, 0))),
        (1, Monomial((0, 0, 1, 1, 0, 1))),
        (-1, Monomial((1, 0, 1, 1, 0, 0))),
        (-1, Monomial((0, 1, 1, 1, 0, 0))),
        (-1, Monomial((0, 0, 0, 1, 1, 1))),
    ])

    pair_products_369 = Relation.from_terms("r", [
        (2, Monomial((1, 0, 1, 0, 0, 0))),
        (3, Monomial((0, 1, 0, 1, 0, 0))),
        (9, Monomial((1, 0, 0, 0, 1, 0))),
        (9, Monomial((0, 1, 0, 0, 0, 1))),
        (-27, Monomial((0, 0, 1, 0, 1, 0))),
        (-1, Monomial((0, 0, 0, 1, 0, 1))),
    ])

    return (
        CatalogEntry("thm3.1", (_alternating_product("r"),), orthocenter),
        CatalogEntry("lemma4.1", area_equalities, centroid),
        CatalogEntry("lemma4.2", (Relation.linear("s", (1, -1, 1, -1, 1, -1)),), centroid),
        CatalogEntry("thm4.1", (_recip((1, -1, 1, -1, 1, -1)),), centroid),
        CatalogEntry("thm4.2", (_alternating_product("R"),), centroid),
        CatalogEntry("thm5.1", (_recip((1, -1, 1, -1, 1, -1)),), circumcenter),
        CatalogEntry(
            "thm5.2",
            (Relation.linear("R", (1, -1, 0, 0, 0, 0)),),
            circumcenter,
            informational=(
                Relation.linear("R", (0, 0, 1, -1, 0, 0)),
                Relation.linear("R", (0, 0, 0, 0, 1, -1)),
            ),
        ),
        CatalogEntry("thm6.1", (_recip((1, -1, -1, 1, 1, -1)),), incenter_60),
        CatalogEntry("thm6.2", (product_120,), incenter_120),
        CatalogEntry("thm6.2-quotient", (quotient_120,), incenter_120),
        CatalogEntry("thm6.3-quartic",
                     (Relation.linear("r", (2, -14, 8, 6, 5, -20), exponent=-4),),
                     right_incenter),
        CatalogEntry("thm6.3-quadratic",
                     (Relation.linear("r", (3, 3, -3, 3, -2, -3), exponent=-2),),
                     right_incenter),
        CatalogEntry("thm6.3-reciprocal",
                     (_recip((2, 2, -3, -2, 1, 1)),),
                     right_incenter),
        CatalogEntry("thm6.3-linear",
                     (Relation.linear("r", (3, -4, 5, 55, -75, 22)),),
                     right_incenter),
        CatalogEntry("thm6.3-products", (pair_products_369,), right_incenter),
        CatalogEntry(
            "thm7.1",
            (Relation.linear("r", (5, 6, -1, 1, -3, -15)),),
            EntryPredicate(kind="quadruple",
                           quadruple=(Fraction(10), Fraction(30), Fraction(80), Fraction(20))),
        ),
        CatalogEntry("thm7.2", (_recip((1, -1, 1, 1, -1, -1)),),
                     EntryPredicate(kind="template"), verifiable=False),
        CatalogEntry("thm7.3", (_recip((1, -1, -1, 1, -1, 1)),),
                     EntryPredicate(kind="template"), verifiable=False),
        CatalogEntry("thm7.4", (_alternating_product("K"),),
                     EntryPredicate(kind="any-interior")),
        CatalogEntry("thm7.5", (Relation.linear("K", (1, -1, 1, -1, 1, -1), exponent=-1),),
                     EntryPredicate(kind="any-interior")),
    )


_CATALOG: tuple[CatalogEntry, ...] | None = None


def catalog() -> tuple[CatalogEntry, ...]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build_catalog()
    return _CATALOG


def lookup(entry_id: str) -> CatalogEntry:
    for entry in catalog():
        if entry.entry_id == entry_id:
            return entry
    raise KeyError(entry_id)


def evaluate(relation: Relation, figure) -> tuple[mpf, mpf]:
    """(absolute, relative) residual of a relation on a figure's metrics."""
    return relation.evaluate(figure)


def _rand_fraction(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo * _GRID_DENOM, hi * _GRID_DENOM), _GRID_DENOM)


def sample_shape(rng: random.Random, rule: str = "any",
                 fixed_angle_b: Fraction | None = None) -> TriangleShape:
    """Random exact-rational shape satisfying the given rule."""
    if rule == "fixed-b":
        b = Fraction(fixed_angle_b)
        a = _rand_fraction(rng, 1, int(178 - b))
        return TriangleShape(a, b, 180 - a - b)
    while True:
        a = _rand_fraction(rng, 1, 178)
        b = _rand_fraction(rng, 1, 178)
        c = 180 - a - b
        if c < 1:
            continue
        if rule == "acute" and max(a, b, c) >= 89:
            continue
        return TriangleShape(a, b, c)


def sample_quadruple(rng: random.Random) -> CevianConfig:
    """Random exact-rational cevian quadruple, margins of 1 degree."""
    while True:
        parts = [_rand_fraction(rng, 1, 176) for _ in range(4)]
        if sum(parts) <= 179:
            return CevianConfig(*parts)


def exact_center_quadruple(shape: TriangleShape, center: NotableCenter):
    """Exact rational quadruple for centers with closed forms, else None."""
    A, B, C = shape.angles
    if center is NotableCenter.INCENTER:
        return (B / 2, B / 2, C / 2, C / 2)
    if center is NotableCenter.CIRCUMCENTER:
        if not shape.is_acute:
            raise CenterNotInterior("circumcenter requires an acute shape")
        return (90 - C, 90 - A, 90 - A, 90 - B)
    return None


def _figure_for_center(shape: TriangleShape, center: NotableCenter, precision_bits: int):
    exact = exact_center_quadruple(shape, center)
    if exact is not None:
        return build_from_angles(CevianConfig(*exact), precision_bits)
    degs = center_config(shape, center, precision_bits)
    return build_from_angles_real(*degs, precision_bits)


def _predicate_figures(entry: CatalogEntry, sample_count: int,
                       precision_bits: int, rng: random.Random):
    pred = entry.predicate
    if pred.kind == "quadruple":
        yield build_from_angles(CevianConfig(*pred.quadruple), precision_bits)
        return
    if pred.kind == "any-interior":
        for _ in range(sample_count):
            yield build_from_angles(sample_quadruple(rng), precision_bits)
        return
    if pred.kind == "center":
        if pred.shape_rule == "fixed":
            shape = TriangleShape(*pred.fixed_shape)
            try:
                yield _figure_for_center(shape, pred.center, precision_bits)
            except CenterNotInterior as exc:
                raise UnsatisfiablePredicate(str(exc)) from exc
            return
        if pred.center in (NotableCenter.ORTHOCENTER, NotableCenter.CIRCUMCENTER) \
                and pred.shape_rule not in ("acute",):
            raise UnsatisfiablePredicate(
                f"{pred.center.value} entries must restrict to acute shapes"
            )
        for _ in range(sample_count):
            shape = sample_shape(rng, pred.shape_rule, pred.fixed_angle_b)
            yield _figure_for_center(shape, pred.center, precision_bits)
        return
    raise UnsatisfiablePredicate(f"predicate kind {pred.kind!r} cannot be sampled")


def verify(entry: CatalogEntry, sample_count: int, precision_bits: int,
           rng_seed: int) -> VerificationReport:
    """Numerically test an entry's relations on freshly sampled instances."""
    if not entry.verifiable:
        return VerificationReport(
            entry_id=entry.entry_id, samples_tested=0,
            max_relative_residual=mpf(0), verdict="skipped",
            precision_bits=precision_bits,
            notes=(entry.predicate.describe(),),
        )
    rng = random.Random(rng_seed)
    tolerance = mpf(10) ** (-detect_digits(precision_bits))
    worst = mpf(0)
    info_worst = mpf(0)
    tested = 0
    for lengths in _predicate_figures(entry, sample_count, precision_bits, rng):
        figure = metrics(lengths, precision_bits)
        tested += 1
        for relation in entry.relations:
            _, relative = relation.evaluate(figure)
            worst = max(worst, relative)
        for relation in entry.informational:
            _, relative = relation.evaluate(figure)
            info_worst = max(info_worst, relative)
    notes = []
    if entry.informational:
        notes.append(
            "informational relations max relative residual: "
            + mp.nstr(info_worst, 6)
        )
    return VerificationReport(
        entry_id=entry.entry_id,
        samples_tested=tested,
        max_relative_residual=worst,
        verdict="pass" if worst <= tolerance else "fail",
        precision_bits=precision_bits,
        notes=tuple(notes),
    )


def check_circumcenter_lemma(shape: TriangleShape, precision_bits: int):
    """Residuals of the six cotangent identities R/r_i = cot + cot(half).

    The circumcenter quadruple is (alpha, beta, beta, gamma) with
    alpha = 90 - C, beta = 90 - A, gamma = 90 - B; each R/r_i equals the sum
    of a full cotangent and a half-angle cotangent in those three angles.
    """
    if not shape.is_acute:
        raise CenterNotInterior("circumcenter requires an acute shape")
    A, B, C = shape.angles
    quad = exact_center_quadruple(shape, NotableCenter.CIRCUMCENTER)
    with workbits(precision_bits):
        lengths = build_from_angles(CevianConfig(*quad), precision_bits)
        figure = metrics(lengths, precision_bits)
        alpha, beta, gamma = (to_radians(90 - C), to_radians(90 - A), to_radians(90 - B))
        big_r = mpf(1) / 2
        cot = mp.cot
        forms = (
            cot(alpha) + cot(beta / 2),
            cot(gamma) + cot(beta / 2),
            cot(beta) + cot(gamma / 2),
            cot(alpha) + cot(gamma / 2),
            cot(gamma) + cot(alpha / 2),
            cot(beta) + cot(alpha / 2),
        )
        return tuple(
            abs(big_r / r - form) / abs(form)
            for r, form in zip(figure.inradii, forms)
        )


def check_incenter_ratios(shape: TriangleShape, precision_bits: int):
    """Residuals of the incenter ratio formulas (eq1, u, v, w).

    With quarter angles a = A/4, b = B/4, c = C/4 and Ca = cot a, Cb = cot b,
    the ratios u = r6/r1, v = r2/r3, w = r4/r5 of the incenter figure reduce
    to rational expressions in Ca, Cb; eq1 is the mixed-cotangent form of u.
    """
    A, B, C = shape.angles
    quad = exact_center_quadruple(shape, NotableCenter.INCENTER)
    with workbits(precision_bits):
        lengths = build_from_angles(CevianConfig(*quad), precision_bits)
        figure = metrics(lengths, precision_bits)
        r = figure.inradii
        u, v, w = r[5] / r[0], r[1] / r[2], r[3] / r[4]
        a, b, c = (to_radians(A / 4), to_radians(B / 4), to_radians(C / 4))
        ca, cb = mp.cot(a), mp.cot(b)
        eq1_form = (mp.cot(b) + mp.cot(a + b)) / (mp.cot(b) + mp.cot(b + c))
        u_form = ((ca - 1) * (cb**2 + 2 * ca * cb - 1)
                  / ((ca + cb) * (1 + ca - cb + ca * cb)))
        v_form = ((cb - 1) * (cb * ca**2 - 2 * ca - cb)
                  / ((ca - 1) * (ca * cb**2 - 2 * cb - ca)))
        w_form = ((ca + cb) * (1 - ca + cb + ca * cb)
                  / ((cb - 1) * (ca**2 + 2 * ca * cb - 1)))
        return tuple(
            abs(meas - form) / abs(form)
            for meas, form in ((u, eq1_form), (u, u_form), (v, v_form), (w, w_form))
        )


SPECIAL_CHECK_IDS = ("lemma5.1", "eq1")


def run_special_check(check_id: str, sample_count: int, precision_bits: int,
                      rng_seed: int) -> VerificationReport:
    """Sampled verification for the cotangent and ratio checks."""
    if check_id not in SPECIAL_CHECK_IDS:
        raise KeyError(check_id)
    rng = random.Random(rng_seed)
    tolerance = mpf(10) ** (-detect_digits(precision_bits))
    worst = mpf(0)
    for _ in range(sample_count):
        if check_id == "lemma5.1":
            shape = sample_shape(rng, "acute")
            residuals = check_circumcenter_lemma(shape, precision_bits)
        else:
            shape = sample_shape(rng, "any")
            residuals = check_incenter_ratios(shape, precision_bits)
        worst = max(worst, max(residuals))
    return VerificationReport(
        entry_id=check_id,
        samples_tested=sample_count,
        max_relative_residual=worst,
        verdict="pass" if worst <= tolerance else "fail",
        precision_bits=precision_bits,
    )


def export_lines() -> list[str]:
    """Machine-readable dump, one relation per line, tab-separated fields."""
    lines = []
    for entry in catalog():
        for relation in entry.relations:
            terms = " ".join(
                "%d:[%s]" % (c, ",".join(str(e) for e in m.exponents))
                for c, m in relation.terms
            )
            lines.append("\t".join([
                entry.entry_id,
                relation.quantity,
                terms,
                entry.predicate.describe(),
                str(relation),
            ]))
    return lines
