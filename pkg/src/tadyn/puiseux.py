"""Truncated Puiseux series over the complex numbers.

A series is a finite sum of terms ``c * t**(e)`` with exact rational
exponents ``e`` and floating complex coefficients ``c``, plus a truncation
order: exponents below the order are exact, everything at or above it is
unknown.  The t-adic valuation of a series is its smallest exponent and the
associated norm is ``exp(-val)``, so smaller valuation means larger norm.

Exponents live on a lattice ``(shift + j) / ram`` which keeps arithmetic in
numpy while exponent bookkeeping stays exact.  Coefficients with modulus at
most ``eps0`` are dropped at construction so numeric noise can never fake a
valuation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf
from typing import Iterable, Sequence, Union

import numpy as np

from .config import DEFAULTS
from .errors import RamificationCapExceeded, ZeroDivisionSeries

# Truncation orders are Fractions or +infinity (exact series).
Order = Union[Fraction, float]
INF: float = inf

ExpLike = Union[int, Fraction]


def _as_frac(e: ExpLike) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


def ord_min(a: Order, b: Order) -> Order:
    if a is INF or a == INF:
        return b
    if b is INF or b == INF:
        return a
    return min(a, b)


def ord_add(a: Order, b: Order) -> Order:
    if a == INF or b == INF:
        return INF
    return a + b


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class PuiseuxSeries:
    """Immutable truncated Puiseux series.

    Do not call the constructor directly; use :func:`make_series`,
    :func:`from_terms` or the module helpers, which canonicalize.
    """

    ram: int
    shift: int
    coeffs: tuple[complex, ...]
    order: Order

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when no term survives tolerance (zero up to truncation)."""
        return not self.coeffs

    @property
    def val(self) -> Order:
        """t-adic valuation; +inf for the zero-to-truncation series."""
        if not self.coeffs:
            return INF
        return Fraction(self.shift, self.ram)

    @property
    def norm(self) -> float:
        v = self.val
        return 0.0 if v == INF else math.exp(-float(v))

    def terms(self) -> list[tuple[Fraction, complex]]:
        return [
            (Fraction(self.shift + j, self.ram), c)
            for j, c in enumerate(self.coeffs)
            if c != 0
        ]

    @property
    def leading(self) -> tuple[Fraction, complex]:
        if not self.coeffs:
            raise ZeroDivisionSeries("zero-to-truncation series has no leading term")
        return Fraction(self.shift, self.ram), self.coeffs[0]

    @property
    def leading_coeff(self) -> complex:
        return self.leading[1]

    def coeff_at(self, e: ExpLike) -> complex:
        e = _as_frac(e)
        j = e * self.ram - self.shift
        if j.denominator != 1 or j < 0 or j >= len(self.coeffs):
            return 0j
        return self.coeffs[int(j)]

    @property
    def constant_term(self) -> complex:
        return self.coeff_at(0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "PuiseuxSeries | complex | int | float") -> "PuiseuxSeries":
        other = _coerce(other)
        order = ord_min(self.order, other.order)
        if self.is_zero and other.is_zero:
            return make_series(1, 0, (), order)
        ram = _lcm(self.ram, other.ram)
        fa, fb = ram // self.ram, ram // other.ram
        sa, sb = self.shift * fa, other.shift * fb
        if not self.coeffs:
            return make_series(other.ram, other.shift, other.coeffs, order)
        if not other.coeffs:
            return make_series(self.ram, self.shift, self.coeffs, order)
        lo = min(sa, sb)
        hi = max(sa + (len(self.coeffs) - 1) * fa, sb + (len(other.coeffs) - 1) * fb)
        buf = np.zeros(hi - lo + 1, dtype=complex)
        buf[sa - lo : sa - lo + (len(self.coeffs) - 1) * fa + 1 : fa] += self.coeffs
        buf[sb - lo : sb - lo + (len(other.coeffs) - 1) * fb + 1 : fb] += other.coeffs
        return make_series(ram, lo, buf, order)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "PuiseuxSeries":
        return make_series(self.ram, self.shift, tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        return self.__add__(-_coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other: "PuiseuxSeries | complex | int | float") -> "PuiseuxSeries":
        other = _coerce(other)
        order = ord_min(ord_add(self.order, other.val), ord_add(other.order, self.val))
        if self.is_zero or other.is_zero:
            return make_series(1, 0, (), order)
        ram = _lcm(self.ram, other.ram)
        fa, fb = ram // self.ram, ram // other.ram
        a = _strided(self.coeffs, fa)
        b = _strided(other.coeffs, fb)
        prod = np.convolve(a, b)
        return make_series(ram, self.shift * fa + other.shift * fb, prod, order)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "PuiseuxSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, other):
        other = _coerce(other)
        return self * other.inverse()

    def scale(self, c: complex) -> "PuiseuxSeries":
        return make_series(self.ram, self.shift, tuple(x * c for x in self.coeffs), self.order)

    def shift_exp(self, e: ExpLike) -> "PuiseuxSeries":
        """Multiply by the monomial t**e."""
        e = _as_frac(e)
        ram = _lcm(self.ram, e.denominator)
        fa = ram // self.ram
        delta = int(e * ram)
        return make_series(
            ram, self.shift * fa + delta, _strided(self.coeffs, fa), ord_add(self.order, e)
        )

    def inverse(self, rel_order: ExpLike | None = None) -> "PuiseuxSeries":
        """Multiplicative inverse with ``self * inv = 1 + O(t**order)``.

        Exact monomials invert exactly; otherwise the relative precision of
        the input is kept (or ``rel_order``, default the working order, for
        exact inputs).
        """
        if self.is_zero:
            raise ZeroDivisionSeries("cannot invert a zero-to-truncation series")
        v = self.val
        if len(self.coeffs) == 1 and self.order == INF:
            return monomial(-v, 1 / self.coeffs[0])
        if self.order != INF:
            rel = self.order - v
        else:
            rel = _as_frac(rel_order if rel_order is not None else DEFAULTS.working_order)
        slots = max(1, math.ceil(rel * self.ram))
        a = np.zeros(slots, dtype=complex)
        known = min(slots, len(self.coeffs))
        a[:known] = self.coeffs[:known]
        b = np.zeros(slots, dtype=complex)
        b[0] = 1 / a[0]
        for n in range(1, slots):
            b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1]) / a[0]
        return make_series(self.ram, -self.shift, b, -v + rel)

    def truncate(self, order: Order) -> "PuiseuxSeries":
        order = order if order == INF else _as_frac(order)
        return make_series(self.ram, self.shift, self.coeffs, ord_min(self.order, order))

    # -- numerics ---------------------------------------------------------

    def eval_complex(self, t0: complex, branch: int = 0) -> tuple[complex, float]:
        """Value at ``t0`` on the given branch plus a truncation error bound.

        The branch selects the ``ram``-th root of ``t0``: principal root
        times ``exp(2*pi*i*branch/ram)``.  The error bound is
        ``|t0|**order`` (zero for exact series).
        """
        if t0 == 0:
            raise ValueError("evaluation requires t0 != 0")
        q = self.ram
        w = cmath.exp(
            (math.log(abs(t0)) + 1j * cmath.phase(t0)) / q + 2j * math.pi * branch / q
        )
        if not self.coeffs:
            value = 0j
        else:
            exps = np.arange(self.shift, self.shift + len(self.coeffs))
            value = complex(np.dot(np.asarray(self.coeffs), np.power(w, exps)))
        err = 0.0 if self.order == INF else abs(t0) ** float(self.order)
        return value, err

    # -- comparison and display ------------------------------------------

    def close_to(self, other: "PuiseuxSeries | complex", tol: float) -> bool:
        diff = self - _coerce(other)
        if diff.is_zero:
            return True
        return max(abs(c) for c in diff.coeffs) <= tol

    def max_coeff_diff(self, other: "PuiseuxSeries") -> float:
        diff = self - other
        if diff.is_zero:
            return 0.0
        return max(abs(c) for c in diff.coeffs)

    def render(self) -> str:
        """Round-trippable text: ``c*t^(p/q) + ...``, exponents increasing."""
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.terms():
            parts.append(_fmt_term(e, c))
        return " + ".join(parts)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        tail = "" if self.order == INF else f" + O(t^{self.order})"
        return f"<{self.render()}{tail}>"


def _strided(coeffs: Sequence[complex], f: int) -> np.ndarray:
    if f == 1:
        return np.asarray(coeffs, dtype=complex)
    out = np.zeros((len(coeffs) - 1) * f + 1, dtype=complex)
    out[::f] = coeffs
    return out


def _fmt_num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_term(e: Fraction, c: complex) -> str:
    re, im = c.real, c.imag
    if im == 0:
        coeff = _fmt_num(re)
    elif re == 0:
        coeff = f"{_fmt_num(im)}i"
    else:
        sign = "+" if im >= 0 else "-"
        coeff = f"({_fmt_num(re)}{sign}{_fmt_num(abs(im))}i)"
    if e == 0:
        return coeff
    if e == 1:
        tpart = "t"
    elif e.denominator == 1:
        tpart = f"t^{e.numerator}" if e >= 0 else f"t^({e.numerator})"
    else:
        tpart = f"t^({e.numerator}/{e.denominator})"
    return f"{coeff}*{tpart}"


def make_series(
    ram: int,
    shift: int,
    coeffs: Iterable[complex],
    order: Order = INF,
    eps0: float | None = None,
    cap: int | None = None,
) -> PuiseuxSeries:
    """Canonicalize lattice data into a series.

    Drops coefficients with modulus <= eps0, trims the lattice window,
    removes exponents at or past the truncation order, and reduces the
    lattice denominator.  Raises on denominators beyond the cap.
    """
    eps0 = DEFAULTS.eps0 if eps0 is None else eps0
    cap = DEFAULTS.ramification_cap if cap is None else cap
    arr = np.asarray(tuple(coeffs), dtype=complex)
    if arr.size:
        arr = np.where(np.abs(arr) <= eps0, 0, arr)
    if order != INF and arr.size:
        # keep exponents strictly below the order: (shift + j)/ram < order
        limit = _as_frac(order) * ram - shift
        arr = arr[: max(0, math.ceil(limit))]
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        return PuiseuxSeries(1, 0, (), order if order == INF else _as_frac(order))
    lo, hi = int(nz[0]), int(nz[-1])
    arr = arr[lo : hi + 1]
    shift += lo
    g = ram
    for j in np.flatnonzero(arr):
        g = gcd(g, shift + int(j))
        if g == 1:
            break
    if g > 1:
        # g divides shift (the leading position is nonzero), so the lattice
        # collapses by taking every g-th slot
        arr = arr[::g]
        ram //= g
        shift //= g
    if ram > cap:
        raise RamificationCapExceeded(f"ramification {ram} exceeds cap {cap}")
    return PuiseuxSeries(ram, shift, tuple(complex(c) for c in arr), order if order == INF else _as_frac(order))


def from_terms(
    terms: Iterable[tuple[ExpLike, complex]],
    order: Order = INF,
    eps0: float | None = None,
    cap: int | None = None,
) -> PuiseuxSeries:
    items = [(_as_frac(e), complex(c)) for e, c in terms]
    if not items:
        return make_series(1, 0, (), order, eps0=eps0, cap=cap)
    ram = 1
    for e, _ in items:
        ram = _lcm(ram, e.denominator)
    lo = min(int(e * ram) for e, _ in items)
    hi = max(int(e * ram) for e, _ in items)
    buf = np.zeros(hi - lo + 1, dtype=complex)
    for e, c in items:
        buf[int(e * ram) - lo] += c
    return make_series(ram, lo, buf, order, eps0=eps0, cap=cap)


def zero(order: Order = INF) -> PuiseuxSeries:
    return make_series(1, 0, (), order)


def one() -> PuiseuxSeries:
    return constant(1)


def constant(c: complex) -> PuiseuxSeries:
    return make_series(1, 0, (complex(c),), INF)


def monomial(e: ExpLike, c: complex = 1) -> PuiseuxSeries:
    e = _as_frac(e)
    return make_series(e.denominator, e.numerator, (complex(c),), INF)


def t_series() -> PuiseuxSeries:
    return monomial(1, 1)


def _coerce(x) -> PuiseuxSeries:
    if isinstance(x, PuiseuxSeries):
        return x
    if isinstance(x, (int, float, complex)):
        return constant(x)
    raise TypeError(f"cannot coerce {type(x)!r} to PuiseuxSeries")


def val(s: PuiseuxSeries) -> Order:
    """t-adic valuation of a series (module-level form of ``s.val``)."""
    return s.val


def val_dist(a: PuiseuxSeries, b: PuiseuxSeries) -> Order:
    """Valuation of the difference; +inf when equal to truncation."""
    return (a - b).val


def series_is_constant(s: PuiseuxSeries, value: complex, tol: float) -> bool:
    """True when ``s`` equals the constant ``value`` within ``tol`` on every
    computed coefficient."""
    return s.close_to(constant(value), tol)
