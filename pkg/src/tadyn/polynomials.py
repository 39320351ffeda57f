"""Polynomials in z whose coefficients are Puiseux series in t."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Callable, Iterable, Sequence

import numpy as np

from .puiseux import (
    INF,
    Order,
    PuiseuxSeries,
    _coerce,
    make_series,
    ord_add,
    ord_min,
    zero as zero_series,
)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True)
class SeriesPoly:
    """Polynomial ``sum a_k z**k`` with PuiseuxSeries coefficients.

    ``coeffs[k]`` is the coefficient of ``z**k``; the top entry is nonzero
    to truncation unless the polynomial is zero.
    """

    coeffs: tuple[PuiseuxSeries, ...]

    @staticmethod
    def from_coeffs(coeffs: Iterable[PuiseuxSeries | complex]) -> "SeriesPoly":
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        return SeriesPoly(tuple(cs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> PuiseuxSeries:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return zero_series()

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "SeriesPoly") -> "SeriesPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly.from_coeffs(
            [self.coeff(k) + other.coeff(k) for k in range(n)]
        )

    def __sub__(self, other: "SeriesPoly") -> "SeriesPoly":
        return self + (-other)

    def __neg__(self) -> "SeriesPoly":
        return SeriesPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "SeriesPoly") -> "SeriesPoly":
        if self.is_zero or other.is_zero:
            return SeriesPoly(())
        out: list[PuiseuxSeries] = [zero_series() for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                out[i + j] = out[i + j] + a * b
        return SeriesPoly.from_coeffs(out)

    def __pow__(self, k: int) -> "SeriesPoly":
        result = SeriesPoly.from_coeffs([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, s: PuiseuxSeries | complex) -> "SeriesPoly":
        s = _coerce(s)
        return SeriesPoly.from_coeffs([c * s for c in self.coeffs])

    def scale_arg(self, s: PuiseuxSeries | complex) -> "SeriesPoly":
        """P(s*z) as a polynomial in z."""
        s = _coerce(s)
        out = []
        power = _coerce(1)
        for k, c in enumerate(self.coeffs):
            out.append(c * power)
            power = power * s
        return SeriesPoly.from_coeffs(out)

    def derivative(self) -> "SeriesPoly":
        return SeriesPoly.from_coeffs(
            [c.scale(k) for k, c in enumerate(self.coeffs) if k >= 1]
        )

    def reversed_at(self, at_degree: int) -> "SeriesPoly":
        """``w**at_degree * P(1/w)`` as a polynomial in w."""
        if at_degree < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        padded = list(self.coeffs) + [zero_series()] * (at_degree - self.degree)
        return SeriesPoly.from_coeffs(padded[::-1])

    def taylor_shift(self, s: PuiseuxSeries) -> "SeriesPoly":
        """Coefficients of P(s + z) in z."""
        d = self.degree
        if d < 0:
            return self
        powers = [_coerce(1)]
        for _ in range(d):
            powers.append(powers[-1] * s)
        out: list[PuiseuxSeries] = [zero_series() for _ in range(d + 1)]
        for k, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j in range(k + 1):
                out[j] = out[j] + a * powers[k - j] * comb(k, j)
        return SeriesPoly.from_coeffs(out)

    # -- evaluation -------------------------------------------------------

    def eval(self, s: PuiseuxSeries, order: Order = INF) -> PuiseuxSeries:
        """P(s), truncated at ``order`` (absolute exponent)."""
        return _lattice_eval(self.coeffs, s, order)

    def eval_with_derivative(
        self, s: PuiseuxSeries, order: Order = INF
    ) -> tuple[PuiseuxSeries, PuiseuxSeries]:
        """(P(s), P'(s)); separate passes keep each truncation order exact."""
        return (
            _lattice_eval(self.coeffs, s, order),
            _lattice_eval(self.derivative().coeffs, s, order),
        )

    def gauss_val(self) -> Order:
        """Minimum coefficient valuation (valuation form of the Gauss norm)."""
        v: Order = INF
        for c in self.coeffs:
            v = ord_min(v, c.val)
        return v

    def map_coeffs(self, fn: Callable[[PuiseuxSeries], PuiseuxSeries]) -> "SeriesPoly":
        return SeriesPoly.from_coeffs([fn(c) for c in self.coeffs])

    def truncate(self, order: Order) -> "SeriesPoly":
        return SeriesPoly.from_coeffs([c.truncate(order) for c in self.coeffs])

    def render(self, var: str = "z") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c.is_zero:
                continue
            body = c.render()
            if "+" in body or k > 0 and body not in ("1",):
                body = f"({body})"
            if k == 0:
                parts.append(body)
            elif k == 1:
                parts.append(f"{body}*{var}" if body != "(1)" and body != "1" else var)
            else:
                parts.append(f"{body}*{var}^{k}" if body != "(1)" and body != "1" else f"{var}^{k}")
        return " + ".join(parts)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"<poly {self.render()}>"


# -- fast lattice evaluation ----------------------------------------------
#
# Horner evaluation dominates Newton lifting for large fixed equations, so
# the inner loop runs on numpy arrays over a common exponent lattice instead
# of repeated PuiseuxSeries construction.


def _mul_int(v: Order, k: int) -> Order:
    if k == 0:
        return Fraction(0)
    return INF if v == INF else v * k


def _lattice_eval(
    coeffs: Sequence[PuiseuxSeries],
    s: PuiseuxSeries,
    order: Order,
) -> PuiseuxSeries:
    if not coeffs:
        return zero_series(order)
    ram = s.ram if not s.is_zero else 1
    for c in coeffs:
        if not c.is_zero:
            ram = _lcm(ram, c.ram)
    sval = s.val
    # reachable order of P(s): per term c_k * s**k the order is
    # min(ord(c_k) + k*val(s), ord(s) + val(c_k) + (k-1)*val(s))
    cut_order = order
    for k, c in enumerate(coeffs):
        if c.order != INF:
            cut_order = ord_min(cut_order, ord_add(c.order, _mul_int(sval, k)))
        if k >= 1 and s.order != INF and not c.is_zero:
            cut_order = ord_min(
                cut_order, s.order + c.val + _mul_int(sval, k - 1)
            )
    # when val(s) < 0, a later multiplication by s moves exponents down, so
    # intermediate truncation keeps a slack window of the remaining steps
    neg = sval if sval != INF and sval < 0 else Fraction(0)

    def to_lat(x: PuiseuxSeries) -> tuple[int, np.ndarray]:
        if x.is_zero:
            return 0, np.zeros(0, dtype=complex)
        f = ram // x.ram
        arr = np.zeros((len(x.coeffs) - 1) * f + 1, dtype=complex)
        arr[::f] = x.coeffs
        return x.shift * f, arr

    def cut(shift: int, arr: np.ndarray, remaining: int) -> tuple[int, np.ndarray]:
        if cut_order == INF or not arr.size:
            return shift, arr
        limit = (cut_order - neg * remaining) * ram - shift
        n = max(0, math.ceil(limit))
        return shift, arr[:n]

    def ladd(a: tuple[int, np.ndarray], b: tuple[int, np.ndarray]) -> tuple[int, np.ndarray]:
        sa, va = a
        sb, vb = b
        if not va.size:
            return b
        if not vb.size:
            return a
        lo = min(sa, sb)
        hi = max(sa + va.size, sb + vb.size)
        buf = np.zeros(hi - lo, dtype=complex)
        buf[sa - lo : sa - lo + va.size] += va
        buf[sb - lo : sb - lo + vb.size] += vb
        return lo, buf

    def lmul(
        a: tuple[int, np.ndarray], b: tuple[int, np.ndarray], remaining: int
    ) -> tuple[int, np.ndarray]:
        sa, va = a
        sb, vb = b
        if not va.size or not vb.size:
            return 0, np.zeros(0, dtype=complex)
        return cut(sa + sb, np.convolve(va, vb), remaining)

    s_lat = to_lat(s)
    lat_coeffs = [to_lat(c) for c in coeffs]
    p = lat_coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        p = ladd(lmul(p, s_lat, k), lat_coeffs[k])
    sh, arr = p
    return make_series(ram, sh, arr, cut_order)
