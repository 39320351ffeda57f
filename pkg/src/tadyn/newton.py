"""Newton polygon root solving for polynomials over Puiseux series.

``puiseux_roots`` returns all finite-valuation roots of ``P(z)`` with
multiplicity: the polygon announces leading exponents, characteristic
(complex) polynomials give leading coefficients, simple branches are lifted
by ultrametric Newton iteration and multiple branches recurse after a Taylor
shift.  Multiplicities come from clustering the characteristic roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .config import DEFAULTS, Budgets, match_floor
from .errors import (
    BranchSeparationError,
    ClusterAmbiguity,
    MatchAmbiguity,
    MatchFailure,
)
from .polynomials import SeriesPoly
from .puiseux import (
    INF,
    Order,
    PuiseuxSeries,
    constant,
    monomial,
    ord_min,
    val_dist,
    zero as zero_series,
)
from .roots import aberth_roots, cluster_roots


@dataclass(frozen=True)
class PolygonSegment:
    """One edge of the lower hull: ``length`` roots of valuation ``-slope``."""

    slope: Fraction
    length: int
    start: tuple[int, Fraction]
    end: tuple[int, Fraction]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, Fraction], ...]
    segments: tuple[PolygonSegment, ...]
    zero_root_multiplicity: int

    def root_counts(self) -> list[tuple[Fraction, int]]:
        """(valuation, count) pairs announced by the segments."""
        return [(-seg.slope, seg.length) for seg in self.segments]


def newton_polygon(poly: SeriesPoly) -> NewtonPolygon:
    """Lower convex hull of ``(k, val(a_k))``.

    Coefficients that vanish to truncation contribute no point.  The hull is
    built with exact rational arithmetic; slopes strictly increase.
    """
    pts = [
        (k, c.val)
        for k, c in enumerate(poly.coeffs)
        if not c.is_zero
    ]
    if not pts:
        raise ValueError("polygon of the zero polynomial")
    k0 = pts[0][0]
    hull: list[tuple[int, Fraction]] = []
    for p in pts:
        while len(hull) >= 2 and (
            (hull[-1][1] - hull[-2][1]) * (p[0] - hull[-1][0])
            >= (p[1] - hull[-1][1]) * (hull[-1][0] - hull[-2][0])
        ):
            hull.pop()
        hull.append(p)
    segments = [
        PolygonSegment(
            slope=Fraction(b[1] - a[1], b[0] - a[0]),
            length=b[0] - a[0],
            start=a,
            end=b,
        )
        for a, b in zip(hull, hull[1:])
    ]
    return NewtonPolygon(tuple(hull), tuple(segments), k0)


@dataclass(frozen=True)
class PuiseuxRoot:
    series: PuiseuxSeries
    multiplicity: int


class _NeedsMoreOrder(Exception):
    """Internal: branches still coincide at the working order."""


def puiseux_roots(
    poly: SeriesPoly,
    precision: Fraction | int | None = None,
    budgets: Budgets = DEFAULTS,
) -> list[PuiseuxRoot]:
    """All finite-valuation roots of ``poly`` to the requested precision.

    Multiplicities sum to the number of roots announced by the polygon
    (zero roots included).  On branches that stay merged at the working
    order the precision is doubled once before giving up.
    """
    if poly.is_zero or poly.degree < 1:
        raise ValueError("root solving needs degree >= 1")
    precision = Fraction(budgets.working_order if precision is None else precision)
    try:
        roots = _roots_above(poly, None, precision, budgets)
    except _NeedsMoreOrder:
        try:
            roots = _roots_above(poly, None, precision * 2, budgets)
        except _NeedsMoreOrder as exc:
            raise BranchSeparationError(
                "branches coincide beyond twice the working order"
            ) from exc
    return sorted(
        roots,
        key=lambda r: (
            r.series.val if r.series.val != INF else Fraction(10**9),
            _lex_key(r.series),
        ),
    )


def _lex_key(s: PuiseuxSeries):
    return tuple((float(e), c.real, c.imag) for e, c in s.terms()[:4])


def _roots_above(
    poly: SeriesPoly,
    lo: Optional[Fraction],
    precision: Fraction,
    budgets: Budgets,
) -> list[PuiseuxRoot]:
    """Roots with valuation strictly above ``lo`` (all finite ones if None)."""
    out: list[PuiseuxRoot] = []
    coeffs = poly.coeffs
    k0 = 0
    while k0 < len(coeffs) and coeffs[k0].is_zero:
        k0 += 1
    if k0 == len(coeffs):
        raise ValueError("all coefficients vanish to truncation")
    if k0 > 0:
        exact = all(coeffs[j].order == INF for j in range(k0))
        out.append(
            PuiseuxRoot(zero_series(INF if exact else precision), k0)
        )
    if k0 == poly.degree:
        return out
    sliced = SeriesPoly(coeffs[k0:])
    polygon = newton_polygon(sliced)
    for seg in polygon.segments:
        mu = -seg.slope
        if lo is not None and mu <= lo:
            continue
        clusters = _characteristic_clusters(sliced, seg, budgets)
        for c, m in clusters:
            out.extend(_lift_branch(sliced, mu, c, m, precision, budgets))
    return out


def _lift_branch(
    poly: SeriesPoly,
    mu: Fraction,
    c: complex,
    m: int,
    precision: Fraction,
    budgets: Budgets,
) -> list[PuiseuxRoot]:
    """Branches of ``poly`` with leading term ``c * t**mu`` (cluster size m).

    Works in the normalized coordinate ``z = t**mu * u`` with the Gauss
    valuation divided out, which keeps coefficient magnitudes tame; the
    series in t of the attracting/repelling branch never enters Horner in
    absolute scale.
    """
    if mu >= precision:
        # cannot separate or extend inside the working window
        return [PuiseuxRoot(monomial(mu, c).truncate(precision), m)]
    vstar: Order = INF
    for k, a in enumerate(poly.coeffs):
        if not a.is_zero:
            vstar = ord_min(vstar, a.val + k * mu)
    scaled = SeriesPoly.from_coeffs(
        [a.shift_exp(k * mu - vstar) for k, a in enumerate(poly.coeffs)]
    )
    rel = precision - mu
    prefix = monomial(mu, 1)
    if m == 1:
        u = _newton_refine(scaled, constant(c), rel, budgets)
        return [PuiseuxRoot((prefix * u).truncate(precision), 1)]
    shifted = scaled.taylor_shift(constant(c))
    subs = _roots_above(shifted, Fraction(0), rel, budgets)
    found = sum(r.multiplicity for r in subs)
    if found != m:
        raise ClusterAmbiguity(
            f"cluster of multiplicity {m} resolved into {found} branch"
            " continuations; branches likely distinct below the floating"
            " noise floor"
        )
    return [
        PuiseuxRoot((prefix * (r.series + c)).truncate(precision), r.multiplicity)
        for r in subs
    ]


def _characteristic_clusters(
    poly: SeriesPoly, seg: PolygonSegment, budgets: Budgets
) -> list[tuple[complex, int]]:
    """Clustered nonzero roots of the segment's characteristic polynomial.

    An m-fold root computed in floats scatters over a radius of roughly
    eps**(1/m), so the cluster radius adapts to the worst case for the
    segment degree.  Over-merging is safe: a merged cluster of genuinely
    distinct branches re-separates during the shift recursion.
    """
    (k1, v1) = seg.start
    char = []
    for j in range(seg.length + 1):
        k = k1 + j
        c = poly.coeff(k)
        on_line = (not c.is_zero) and c.val == v1 + seg.slope * j
        char.append(c.leading_coeff if on_line else 0j)
    roots = aberth_roots(char, seed=budgets.seed)
    scale = max(1.0, float(max(abs(r) for r in roots)))
    noise = (1e-13 * scale) ** (1.0 / seg.length) if seg.length > 1 else 0.0
    eps = max(budgets.eps_cluster, noise)
    clusters = cluster_roots(roots, eps=eps, ambiguity_band=1.0)
    return [
        (c if m == 1 else _polish_center(char, c, m, eps), m) for c, m in clusters
    ]


def _polish_center(char: list[complex], center: complex, m: int, eps: float) -> complex:
    """Newton-polish an m-fold cluster center on the (m-1)-th derivative.

    The mean of an m-fold cluster carries the full eps**(1/m) scatter; the
    corresponding root of the (m-1)-th derivative is well-conditioned and
    recovers the center to full float accuracy.
    """
    d = [complex(c) for c in char]
    for _ in range(m - 1):
        d = [d[k] * k for k in range(1, len(d))]
    dd = [d[k] * k for k in range(1, len(d))]
    z = center
    for _ in range(40):
        num = _horner(d, z)
        den = _horner(dd, z)
        if den == 0:
            break
        step = num / den
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    if abs(z - center) <= 10 * eps:
        return z
    return center


def _horner(ascending: list[complex], z: complex) -> complex:
    acc = 0j
    for c in reversed(ascending):
        acc = acc * z + c
    return acc


def _newton_refine(
    poly: SeriesPoly,
    seed: PuiseuxSeries,
    precision: Fraction,
    budgets: Budgets,
) -> PuiseuxSeries:
    """Ultrametric Newton iteration from a simple-branch seed.

    Stops when the correction valuation reaches the precision, when the
    residual vanishes to truncation, or when the residual coefficients
    stagnate at the floating noise floor of the coefficient scale.
    """
    x = seed
    cut = precision + 2
    deriv_adjust: Order | None = None
    for it in range(80):
        value, deriv = poly.eval_with_derivative(x, order=cut)
        if value.is_zero:
            # residual vanished to truncation: exact to available order
            return x.truncate(ord_min(precision, value.order - (deriv.val if deriv.val != INF else 0)))
        if deriv.is_zero:
            raise _NeedsMoreOrder("derivative vanished to truncation during lifting")
        if deriv_adjust is None:
            deriv_adjust = max(Fraction(0), deriv.val) if deriv.val != INF else Fraction(0)
            cut = precision + deriv_adjust + 1
        delta = value / deriv
        if delta.is_zero:
            return x
        # converged when the correction no longer moves any coefficient
        # beyond its relative float noise floor (root tails grow like
        # radius**-k, so absolute thresholds are meaningless there)
        if it > 0 and all(
            abs(c) <= 1e-10 * (1.0 + abs(x.coeff_at(e))) for e, c in delta.terms()
        ):
            return x
        x = (x - delta).truncate(precision)
        if delta.val >= precision:
            return x
    raise _NeedsMoreOrder("Newton lifting failed to reach precision")


# -- orbit separation ------------------------------------------------------


def separate_orbits(
    items: Sequence,
    step: Callable,
    vdist: Callable | None = None,
    min_match: Fraction | None = None,
) -> list[list[int]]:
    """Partition indices into cycles of the permutation induced by ``step``.

    ``step`` must map the item set into itself up to valuation
    ``min_match``; ``vdist`` returns the valuation of the difference of two
    items (default: Puiseux series difference).  Ambiguous or missing
    matches raise.
    """
    if vdist is None:
        vdist = val_dist
    if min_match is None:
        min_match = match_floor(Fraction(DEFAULTS.working_order))
    n = len(items)
    perm = []
    for i in range(n):
        image = step(items[i])
        best_j, best_v, second_v = -1, None, None
        for j in range(n):
            v = vdist(image, items[j])
            if best_v is None or v > best_v:
                best_j, best_v, second_v = j, v, best_v
            elif second_v is None or v > second_v:
                second_v = v
        if best_v is None or best_v < min_match:
            raise MatchFailure(
                f"no image match for item {i}: best valuation {best_v}"
            )
        if second_v is not None and second_v >= min_match and second_v == best_v:
            raise MatchAmbiguity(
                f"two candidate images for item {i} at valuation {best_v}"
            )
        perm.append(best_j)
    if sorted(perm) != list(range(n)):
        raise MatchFailure("orbit step is not a permutation of the root set")
    seen = [False] * n
    orbits: list[list[int]] = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        orbits.append(cyc)
    return orbits
