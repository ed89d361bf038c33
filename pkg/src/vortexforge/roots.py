"""High-precision roots of exact polynomials and their symmetry structure."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from .exactpoly import Poly, _to_mp, poly_gcd

__all__ = [
    "RootSet", "SymmetryClassification", "find_roots", "classify_symmetry",
    "symmetrize", "ring_report", "kmeans_1d",
]


@dataclass(frozen=True)
class RootSet:
    roots: tuple
    error_radii: tuple
    source_degree: int
    precision_bits: int = 128

    def as_complex(self) -> np.ndarray:
        return np.array([complex(r) for r in self.roots])

    def radii_float(self) -> np.ndarray:
        return np.array([float(e) for e in self.error_radii])


@dataclass(frozen=True)
class SymmetryClassification:
    """Index pairs ``(i, j)`` with ``roots[i] = conj(roots[j])``, ``Im roots[i] > 0``."""

    conjugate_pairs: tuple
    real_indices: tuple


def _mp_coeffs(p: Poly):
    return [_to_mp(c) for c in p.coeffs]


def _horner2(cs, x):
    """``p(x)`` and ``p'(x)`` by a joint Horner pass (ascending coefficients)."""
    v = mpmath.mpc(0)
    dv = mpmath.mpc(0)
    for c in reversed(cs):
        dv = dv * x + v
        v = v * x + c
    return v, dv


def _initial_points(cs, deg):
    """Points on a circle about the root centroid, radius from the Fujiwara bound."""
    lc = cs[-1]
    center = -cs[-2] / (deg * lc) if deg >= 1 else mpmath.mpf(0)
    # Fujiwara bound on the shifted polynomial is overkill; use it unshifted
    bound = max(abs(cs[deg - i] / lc) ** (mpmath.mpf(1) / i) for i in range(1, deg + 1))
    radius = max(bound, mpmath.mpf("1e-3"))
    offset = mpmath.mpf("0.4")  # breaks real-axis symmetry of the start
    return [center + radius * mpmath.expjpi(2 * (k + offset) / deg)
            for k in range(deg)]


def _aberth(cs, deg, maxiter=1000):
    z = _initial_points(cs, deg)
    tol = mpmath.mpf(2) ** (-(mpmath.mp.prec - 8))
    for _ in range(maxiter):
        new = []
        worst = mpmath.mpf(0)
        for k in range(deg):
            v, dv = _horner2(cs, z[k])
            if v == 0:
                new.append(z[k])
                continue
            ratio = v / dv if dv != 0 else mpmath.mpc(1)
            s = mpmath.fsum(1 / (z[k] - z[j]) for j in range(deg) if j != k)
            w = ratio / (1 - ratio * s)
            new.append(z[k] - w)
            worst = max(worst, abs(w) / max(1, abs(z[k])))
        z = new  # sweep-synchronous update keeps the result order independent
        if worst < tol:
            break
    return z


def find_roots(p: Poly, precision_bits: int = 128, digits: int = 15,
               check_squarefree: bool = True) -> RootSet:
    """All roots of ``p`` via Aberth-Ehrlich iteration plus Newton refinement.

    Refinement starts at ``precision_bits`` and doubles until every Newton
    correction is below ``10**-(digits + 5)``. Each root carries the
    inclusion radius ``deg * (|p(x)| + eval_err) / |p'(x)|``.

    Raises
    ------
    ValueError
        If ``p`` is constant or has repeated roots.
    """
    deg = p.degree
    if deg < 1:
        raise ValueError("degree must be >= 1")
    if check_squarefree and p.is_rational() and poly_gcd(p, p.derivative()).degree > 0:
        raise ValueError("repeated roots: refuse")
    target = mpmath.mpf(10) ** (-(digits + 5))
    prec = max(precision_bits, 128)
    with mpmath.workprec(prec + 2 * deg):
        cs = _mp_coeffs(p)
        z = _aberth(cs, deg) if deg > 1 else [-cs[0] / cs[1]]
    while True:
        with mpmath.workprec(prec):
            cs = _mp_coeffs(p)
            z = [mpmath.mpc(x) for x in z]
            worst = mpmath.mpf(0)
            for _ in range(8):
                worst = mpmath.mpf(0)
                for k in range(deg):
                    v, dv = _horner2(cs, z[k])
                    step = v / dv
                    z[k] -= step
                    worst = max(worst, abs(step))
                if worst < target * mpmath.mpf(2) ** -16:
                    break
            if worst < target:
                radii = [_inclusion_radius(cs, x, deg) for x in z]
                break
        prec *= 2
        if prec > 1 << 16:
            raise ArithmeticError("root refinement did not converge")
    order = sorted(range(deg), key=lambda i: (float(z[i].real), float(z[i].imag)))
    return RootSet(tuple(z[i] for i in order), tuple(radii[i] for i in order), deg, prec)


def _inclusion_radius(cs, x, deg):
    # running error bound for Horner evaluation (Higham)
    v, dv = _horner2(cs, x)
    ax = abs(x)
    acc = mpmath.mpf(0)
    for c in reversed(cs):
        acc = acc * ax + abs(c)
    err = 2 * deg * acc * mpmath.eps
    if dv == 0:
        return mpmath.inf
    return deg * (abs(v) + err) / abs(dv)


def classify_symmetry(rs: RootSet, rel_tol: float = 1e-12) -> SymmetryClassification:
    """Split roots of a real polynomial into conjugate pairs and real roots.

    Roots are sorted by ``(Re, |Im|)`` and adjacent conjugates are paired.
    A root is real when ``|Im|`` is within its error radius plus
    ``rel_tol * (1 + |root|)``.

    Raises
    ------
    ValueError
        ``"symmetry violation"`` if some root has no conjugate partner.
    """
    zs = rs.as_complex()
    rad = rs.radii_float()
    tol = rad + rel_tol * (1 + np.abs(zs))
    order = sorted(range(len(zs)), key=lambda i: (round(zs[i].real, 9), abs(zs[i].imag), zs[i].imag))
    pairs, reals = [], []
    i = 0
    while i < len(order):
        a = order[i]
        if abs(zs[a].imag) <= tol[a]:
            reals.append(a)
            i += 1
            continue
        if i + 1 >= len(order):
            raise ValueError("symmetry violation")
        b = order[i + 1]
        if abs(zs[a] - np.conj(zs[b])) > tol[a] + tol[b]:
            raise ValueError("symmetry violation")
        up, down = (a, b) if zs[a].imag > 0 else (b, a)
        pairs.append((up, down))
        i += 2
    return SymmetryClassification(tuple(pairs), tuple(sorted(reals)))


def symmetrize(rs: RootSet, cls: SymmetryClassification | None = None) -> RootSet:
    """Reorder as ``(a_1, conj a_1, a_3, conj a_3, ..., real roots)`` and enforce symmetry.

    Pairs are averaged with their conjugates and real roots get ``Im = 0``.
    """
    cls = cls or classify_symmetry(rs)
    roots, radii = [], []
    for up, down in cls.conjugate_pairs:
        a, b = rs.roots[up], rs.roots[down]
        m = (a + mpmath.conj(b)) / 2
        roots += [m, mpmath.conj(m)]
        r = max(rs.error_radii[up], rs.error_radii[down])
        radii += [r, r]
    for i in cls.real_indices:
        roots.append(mpmath.mpc(rs.roots[i].real, 0))
        radii.append(rs.error_radii[i])
    return RootSet(tuple(roots), tuple(radii), rs.source_degree, rs.precision_bits)


def kmeans_1d(values, k: int):
    """Optimal 1-D k-means (dynamic programming over sorted values).

    Returns ``(centers, labels)`` with labels in the input order and clusters
    numbered by increasing center.
    """
    x = np.asarray(values, dtype=float)
    n = len(x)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= len(values)")
    order = np.argsort(x, kind="stable")
    s = x[order]
    c1 = np.concatenate([[0.0], np.cumsum(s)])
    c2 = np.concatenate([[0.0], np.cumsum(s * s)])

    def sse(i, j):  # cost of s[i:j]
        m = j - i
        t = c1[j] - c1[i]
        return max(c2[j] - c2[i] - t * t / m, 0.0)

    inf = float("inf")
    cost = np.full((k + 1, n + 1), inf)
    arg = np.zeros((k + 1, n + 1), dtype=int)
    cost[0, 0] = 0.0
    for c in range(1, k + 1):
        for j in range(c, n + 1):
            best, bi = inf, c - 1
            for i in range(c - 1, j):
                v = cost[c - 1, i] + sse(i, j)
                if v < best:
                    best, bi = v, i
            cost[c, j], arg[c, j] = best, bi
    bounds = [n]
    for c in range(k, 0, -1):
        bounds.append(arg[c, bounds[-1]])
    bounds = bounds[::-1]
    labels = np.empty(n, dtype=int)
    centers = []
    for c in range(k):
        i, j = bounds[c], bounds[c + 1]
        labels[order[i:j]] = c
        centers.append(float(s[i:j].mean()))
    return centers, labels


def ring_report(rs: RootSet, n: int) -> dict:
    """Cluster root moduli into ``n`` rings (descriptive, no pass/fail)."""
    mods = np.abs(rs.as_complex())
    k = min(n, len(mods))
    centers, labels = kmeans_1d(mods, k)
    spread, counts = [], []
    for c in range(k):
        m = mods[labels == c]
        counts.append(int(m.size))
        spread.append(float(m.max() - m.min()))
    return {
        "n": n,
        "centers": centers,
        "counts": counts,
        "spread": spread,
        "relative_spread": [s / c if c else 0.0 for s, c in zip(spread, centers)],
        "assignment": [int(v) for v in labels],
    }
