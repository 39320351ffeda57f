"""Simultaneous complex polynomial root finding (Aberth-Ehrlich).

All roots are found in one iteration without deflation; multiple roots are
recovered afterwards by clustering within ``eps_cluster``.  The iteration is
deterministic: initial points sit on a Cauchy-bound circle and restarts use a
seeded rotation.
"""

from __future__ import annotations

import numpy as np

from .config import DEFAULTS
from .errors import ClusterAmbiguity, RootFinderNonConvergence


def aberth_roots(
    coeffs,
    seed: int = 0,
    max_iter: int | None = None,
    tol: float = 1e-12,
) -> np.ndarray:
    """All complex roots of ``sum coeffs[k] * z**k`` (ascending order).

    Exact zeros at the origin are split off first; the rest run through the
    Aberth-Ehrlich simultaneous iteration on the monic-normalized polynomial.
    Stagnation triggers a seeded random-rotation restart before giving up.
    """
    max_iter = DEFAULTS.root_iterations if max_iter is None else max_iter
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or not np.any(c != 0):
        raise ValueError("zero polynomial has no well-defined root set")
    while c.size and c[-1] == 0:
        c = c[:-1]
    n_zero = 0
    while c.size > 1 and c[0] == 0:
        c = c[1:]
        n_zero += 1
    deg = c.size - 1
    zeros = np.zeros(n_zero, dtype=complex)
    if deg == 0:
        return zeros
    if deg == 1:
        return _sorted(np.concatenate([zeros, [-c[0] / c[1]]]))
    if deg == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = np.sqrt(complex(a1 * a1 - 4 * a2 * a0))
        # avoid cancellation: pick the larger-magnitude numerator first
        q = -(a1 + disc) / 2 if abs(a1 + disc) >= abs(a1 - disc) else -(a1 - disc) / 2
        r1 = q / a2
        r2 = a0 / q if q != 0 else 0j
        return _sorted(np.concatenate([zeros, [r1, r2]]))

    monic = c / c[-1]
    rng = np.random.default_rng(seed)
    desc = monic[::-1]
    ddesc = (desc[:-1] * np.arange(deg, 0, -1))
    absdesc = np.abs(desc)
    radii = _initial_radii(monic)
    eps_floor = 8 * np.finfo(float).eps

    offset = 0.376  # fixed phase so no initial point is a real root
    for attempt in range(4):
        angles = 2 * np.pi * (np.arange(deg) * (1 + 1 / deg) + offset) / deg
        z = radii * np.exp(1j * angles)
        if attempt > 0:
            z = z * np.exp(2j * np.pi * rng.random()) * (1 + 0.1 * attempt)
        best = np.inf
        stale = 0
        for _ in range(max_iter):
            pz = np.polyval(desc, z)
            dpz = np.polyval(ddesc, z)
            w = np.where(dpz != 0, pz / np.where(dpz == 0, 1, dpz), 0.1 + 0.1j)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv_sum = np.sum(1.0 / diff, axis=1) - 1.0
            denom = 1.0 - w * inv_sum
            denom = np.where(np.abs(denom) < 1e-30, 1e-30, denom)
            corr = w / denom
            z = z - corr
            m = float(np.max(np.abs(corr) / np.maximum(1.0, np.abs(z))))
            if m < tol:
                return _sorted(np.concatenate([zeros, z]))
            if m < best * 0.5:
                best = m
                stale = 0
            else:
                stale += 1
            if stale > 20:
                # residuals at the backward-stable evaluation noise floor
                # mean the configuration is as accurate as floats allow
                # (multiple roots and high degrees stall there)
                noise = eps_floor * np.polyval(absdesc, np.abs(z))
                if np.all(np.abs(np.polyval(desc, z)) <= np.maximum(noise, 1e-300)):
                    return _sorted(np.concatenate([zeros, z]))
            if stale > 80:
                break
    raise RootFinderNonConvergence(
        f"Aberth iteration failed for degree {deg} after restarts"
    )


def _initial_radii(monic: np.ndarray) -> np.ndarray:
    """Per-root starting radii from the log-coefficient convex hull.

    The lower hull of ``(k, -log|c_k|)`` plays the role of a Newton polygon
    for the archimedean absolute value: each edge of horizontal length L
    predicts L root moduli equal to exp(edge slope).
    """
    deg = monic.size - 1
    pts = [(k, -np.log(abs(monic[k]))) for k in range(monic.size) if monic[k] != 0]
    hull: list[tuple[int, float]] = []
    for p in pts:
        while len(hull) >= 2 and (
            (hull[-1][1] - hull[-2][1]) * (p[0] - hull[-1][0])
            >= (p[1] - hull[-1][1]) * (hull[-1][0] - hull[-2][0])
        ):
            hull.pop()
        hull.append(p)
    radii = np.empty(deg)
    pos = 0
    for (k1, v1), (k2, v2) in zip(hull, hull[1:]):
        r = float(np.exp((v1 - v2) / (k2 - k1)))
        r = min(max(r, 1e-12), 1e12)
        radii[pos : pos + (k2 - k1)] = r
        pos += k2 - k1
    if pos < deg:  # safety: fill any gap with the last radius
        radii[pos:] = radii[pos - 1] if pos else 1.0
    return radii


def _sorted(roots: np.ndarray) -> np.ndarray:
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def cluster_roots(
    roots,
    eps: float | None = None,
    ambiguity_band: float = 10.0,
) -> list[tuple[complex, int]]:
    """Group near-identical roots into (center, multiplicity) pairs.

    Roots within ``eps`` of each other merge (transitively).  A pair of
    distinct clusters separated by less than ``ambiguity_band * eps`` raises
    :class:`ClusterAmbiguity`, signalling the caller to raise precision.
    """
    eps = DEFAULTS.eps_cluster if eps is None else eps
    pts = list(np.asarray(roots, dtype=complex))
    if not pts:
        return []
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) <= eps:
                parent[find(i)] = find(j)

    groups: dict[int, list[complex]] = {}
    for i in range(len(pts)):
        groups.setdefault(find(i), []).append(pts[i])
    clusters = [
        (complex(np.mean(g)), len(g))
        for g in groups.values()
    ]
    clusters.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            gap = abs(clusters[i][0] - clusters[j][0])
            if eps < gap < ambiguity_band * eps:
                raise ClusterAmbiguity(
                    f"characteristic roots separated by {gap:.3e} fall in the"
                    f" ambiguity band ({eps:.1e}, {ambiguity_band * eps:.1e})"
                )
    return clusters
