"""Default budgets and tolerances, overridable per call and via the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction


@dataclass(frozen=True)
class Budgets:
    """Numeric budgets shared across modules.

    All solvers take an optional ``Budgets``; ``DEFAULTS`` applies otherwise.
    """

    # coefficients with modulus <= eps0 are dropped at series construction
    eps0: float = 1e-12
    # default working truncation order, in units of t-exponent
    working_order: int = 20
    # exponent denominators must stay <= this cap
    ramification_cap: int = 64
    # cluster radius for multiple characteristic roots
    eps_cluster: float = 1e-8
    # largest period solved by cycle scans
    n_max: int = 6
    # iterate degree budget: d**n must stay below this
    degree_budget: int = 5000
    # constant-term distance for the primitive-root (formal cycle) test
    formal_tol: float = 1e-6
    # simultaneous root-finder iteration budget
    root_iterations: int = 400
    # seed for all randomized numerics (root-finder restarts, grids)
    seed: int = 0

    def with_order(self, order: int) -> "Budgets":
        return replace(self, working_order=order)


DEFAULTS = Budgets()


def thread_count() -> int:
    """Worker count for parallel grid sampling; TADYN_THREADS overrides."""
    raw = os.environ.get("TADYN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def match_floor(precision: Fraction) -> Fraction:
    """Valuation floor below which orbit matches are rejected."""
    return precision / 2
