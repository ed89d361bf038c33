"""Degree-d Ginzburg-Landau vortex profile, its Jacobi fields and Fourier modes.

The profile solves ``S'' + S'/r - d^2 S/r^2 + S(1 - S^2) = 0`` with
``S(0) = 0`` and ``S(inf) = 1``. Linearizing ``Delta u + u(1 - |u|^2)`` at
``S e^{i theta}`` and writing the perturbation as
``e^{i theta}(alpha e^{i n theta} + conj(b) e^{-i n theta})`` (``d = 1``) gives

    a'' + a'/r - (n+1)^2 a/r^2 + (1 - 2S^2) a - S^2 b = 0,
    b'' + b'/r - (n-1)^2 b/r^2 + (1 - 2S^2) b - S^2 a = 0.

For ``n = 0`` the imaginary part decouples as
``c'' + c'/r - c/r^2 + (1 - S^2) c = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_bvp, solve_ivp
from scipy.interpolate import CubicHermiteSpline

__all__ = [
    "ProfileTable", "ModeSolution", "solve_profile", "shoot_kappa", "near_zero_check",
    "cutoff_profile", "jacobi_field_residual", "mode_classify", "projection_integral",
    "classify_growth", "far_field_slope", "smoothstep5", "phi_plus1_seed",
]

R0 = 1e-3  # inner radius where the regular series is imposed
SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ProfileTable:
    """Samples of ``S_d`` and ``S_d'`` on an increasing grid starting at ``r = 0``.

    ``tail`` selects the continuation past ``r_max``: ``"asymptotic"`` uses
    ``1 - d^2/(2 r^2)``, ``"one"`` uses the constant 1 (cutoff profiles).
    """

    d: int
    r_grid: np.ndarray
    S: np.ndarray
    S_prime: np.ndarray
    kappa: float
    r_max: float
    tail: str = "asymptotic"
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_spline", CubicHermiteSpline(self.r_grid, self.S, self.S_prime))

    def __call__(self, r):
        """``S(r)`` for any ``r >= 0`` (vectorized)."""
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        inside = r <= self.r_max
        out[inside] = self._spline(r[inside])
        ro = r[~inside]
        out[~inside] = 1.0 if self.tail == "one" else 1.0 - self.d ** 2 / (2 * ro ** 2)
        return out

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        out = np.empty_like(r)
        inside = r <= self.r_max
        out[inside] = self._spline(r[inside], 1)
        ro = r[~inside]
        out[~inside] = 0.0 if self.tail == "one" else self.d ** 2 / ro ** 3
        return out

    @property
    def h(self) -> float:
        return float(self.r_grid[1] - self.r_grid[0])


@dataclass(frozen=True)
class ModeSolution:
    n: int
    r: np.ndarray
    a: np.ndarray
    b: np.ndarray | None
    growth_class: str
    details: dict = field(default_factory=dict)


def _rhs(d):
    def f(r, y):
        S, Sp = y
        return [Sp, -Sp / r + d * d * S / r ** 2 - S * (1 - S * S)]
    return f


def _series(d, kappa, r):
    """``S`` and ``S'`` from ``kappa r^d (1 - r^2/(4(d+1)))``."""
    c = 1.0 / (4 * (d + 1))
    S = kappa * r ** d * (1 - c * r * r)
    Sp = kappa * (d * r ** (d - 1) * (1 - c * r * r) - 2 * c * r ** (d + 1))
    return S, Sp


def _shoot(d, kappa, r_end):
    """+1 if the trajectory overshoots 1, -1 if it turns down first, 0 otherwise."""
    def over(r, y):
        return y[0] - 1.0
    over.terminal = True

    def turn(r, y):
        return y[1]
    turn.terminal = True
    turn.direction = -1
    sol = solve_ivp(_rhs(d), (R0, r_end), _series(d, kappa, R0), method="DOP853",
                    rtol=1e-13, atol=1e-15, events=(over, turn))
    if sol.t_events[0].size:
        return 1, sol
    if sol.t_events[1].size:
        return -1, sol
    return 0, sol


def shoot_kappa(d: int = 1, r_end: float = 40.0, tol: float = 1e-13):
    """Bisection on the slope at the origin between collapse and blowup.

    Returns ``(kappa, r_valid, solution)`` where ``r_valid`` is the radius at
    which the final trajectory leaves the monotone band ``0 < S < 1``.
    """
    lo, hi = 0.05, 5.0
    if _shoot(d, lo, r_end)[0] != -1 or _shoot(d, hi, r_end)[0] != 1:
        raise RuntimeError("shooting bracket failure")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        s, _ = _shoot(d, mid, r_end)
        if s == 0:
            lo = hi = mid
            break
        if s > 0:
            hi = mid
        else:
            lo = mid
    kappa = 0.5 * (lo + hi)
    _, sol = _shoot(d, kappa, r_end)
    return kappa, float(sol.t[-1]), sol


def solve_profile(d: int = 1, r_max: float = 100.0, tol: float = 1e-10,
                  h: float = 0.01) -> ProfileTable:
    """Profile on ``[0, r_max]`` sampled with spacing ``h``.

    A shooting solution supplies the initial guess; a collocation BVP on
    ``[R0, r_max]`` then imposes regularity at ``R0`` and
    ``S(r_max) = 1 - d^2/(2 r_max^2)``. ``kappa`` is read off the BVP
    solution at ``R0`` through the regular series.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if r_max < 20:
        raise ValueError("r_max must be >= 20")
    if tol > 1e-8:
        raise ValueError("tol must be <= 1e-8")
    kappa0, r_valid, sol = shoot_kappa(d)
    r_cut = min(0.6 * r_valid, r_max)  # trust the shot well before it diverges
    mesh = np.concatenate([np.geomspace(R0, 1.0, 60)[:-1], np.arange(1.0, r_max, h * 10), [r_max]])
    mesh = np.unique(mesh)
    guess = np.empty((2, mesh.size))
    inner = mesh <= r_cut
    dense = solve_ivp(_rhs(d), (R0, r_cut), _series(d, kappa0, R0), method="DOP853",
                      rtol=1e-12, atol=1e-14, dense_output=True)
    guess[:, inner] = dense.sol(mesh[inner])
    ro = mesh[~inner]
    guess[0, ~inner] = 1 - d * d / (2 * ro ** 2)
    guess[1, ~inner] = d * d / ro ** 3
    c = 1.0 / (2 * (d + 1))
    s_inf = 1 - d * d / (2 * r_max ** 2)

    def bc(ya, yb):
        return np.array([R0 * ya[1] - (d - c * R0 * R0) * ya[0], yb[0] - s_inf])

    def fun(r, y):
        S, Sp = y
        return np.vstack([Sp, -Sp / r + d * d * S / r ** 2 - S * (1 - S * S)])

    res = solve_bvp(fun, bc, mesh, guess, tol=tol, max_nodes=500000)
    if not res.success:
        raise RuntimeError(f"profile BVP failed: {res.message}")
    grid = np.arange(0.0, r_max + 0.5 * h, h)
    grid[-1] = min(grid[-1], r_max)
    S = np.empty_like(grid)
    Sp = np.empty_like(grid)
    small = grid < R0
    S[~small], Sp[~small] = res.sol(grid[~small])
    kappa = float(res.sol(R0)[0] / (R0 ** d * (1 - R0 * R0 / (4 * (d + 1)))))
    S[small], Sp[small] = _series(d, kappa, grid[small])
    if d > 1:
        Sp[grid == 0] = 0.0
    return ProfileTable(d=d, r_grid=grid, S=S, S_prime=Sp, kappa=kappa, r_max=float(grid[-1]))


def near_zero_check(pt: ProfileTable, r_hi: float = 0.3, count: int = 6) -> dict:
    """Compare ``S/(kappa r) - 1`` with ``-r^2/8`` on ``(0, r_hi]``.

    The leftover should be ``O(r^4)``: the log-log slope of
    ``|S/(kappa r) - 1 + r^2/8|`` must be at least 3.5.
    """
    if pt.d != 1:
        raise ValueError("near-zero expansion checked for d = 1 only")
    r = r_hi / 2.0 ** np.arange(count)[::-1]
    ratio = pt(r) / (pt.kappa * r) - 1
    resid = np.abs(ratio + r * r / 8)
    slope = float(np.polyfit(np.log(r), np.log(np.maximum(resid, 1e-300)), 1)[0])
    coeff = float(np.polyfit(r * r, ratio, 2)[1])  # ratio ~ c2 r^2 + c4 r^4
    return {
        "slope": slope,
        "r2_coefficient": coeff,
        "max_deviation": float(resid.max()),
        "pass": bool(slope >= 3.5 and abs(coeff + 0.125) <= 0.05 * 0.125),
    }


def smoothstep5(x):
    """Quintic smoothstep ``10x^3 - 15x^4 + 6x^5`` clipped to ``[0, 1]``."""
    x = np.clip(x, 0.0, 1.0)
    return x ** 3 * (10 - 15 * x + 6 * x * x)


def _smoothstep5_prime(x):
    inside = (x > 0) & (x < 1)
    return np.where(inside, 30 * x * x * (1 - x) ** 2, 0.0)


def cutoff_profile(pt: ProfileTable, epsilon: float, C0: float) -> ProfileTable:
    """Blend ``S`` to exactly 1 on ``[C0/epsilon, C0/epsilon + 1]`` (C^2 quintic)."""
    r1 = C0 / epsilon
    if r1 + 1 > pt.r_max:
        raise ValueError("r_max too small for the requested cutoff")
    r = pt.r_grid
    s = smoothstep5(r - r1)
    ds = _smoothstep5_prime(r - r1)
    S = pt.S + (1 - pt.S) * s
    Sp = pt.S_prime * (1 - s) + (1 - pt.S) * ds
    S[r >= r1 + 1] = 1.0
    Sp[r >= r1 + 1] = 0.0
    return replace(pt, S=S, S_prime=Sp, tail="one")


def _mode_coeffs(pt: ProfileTable, r, n):
    S2 = pt(r) ** 2
    return S2, (n + 1) ** 2, (n - 1) ** 2


def jacobi_field_residual(pt: ProfileTable, which: str = "Phi0", r_lo: float = 0.5,
                          r_hi: float | None = None, zero: bool = False) -> float:
    """Max residual of a Jacobi field in its mode equations, by grid differences.

    ``Phi0 = iS`` enters the ``n = 0`` imaginary equation; ``PhiPlus1`` and
    ``PhiMinus1`` (``d_x`` and ``d_y`` of the vortex) enter the ``n = 1`` system
    with ``a = (S' - S/r)/2``, ``b = (S' + S/r)/2`` (times ``-i`` for ``PhiMinus1``).
    Second-order central differences on the table grid make the residual
    ``O(h^2)``.
    """
    if pt.d != 1:
        raise ValueError("Jacobi fields implemented for d = 1")
    r_hi = r_hi if r_hi is not None else 0.5 * pt.r_max
    r = pt.r_grid
    h = pt.h
    S, Sp = pt.S, pt.S_prime
    idx = np.nonzero((r >= r_lo) & (r <= r_hi))[0]
    idx = idx[(idx > 0) & (idx < len(r) - 1)]
    ri = r[idx]

    def d1(f):
        return (f[idx + 1] - f[idx - 1]) / (2 * h)

    def d2(f):
        return (f[idx + 1] - 2 * f[idx] + f[idx - 1]) / (h * h)

    S2 = S[idx] ** 2
    if which == "Phi0":
        c = np.zeros_like(S) if zero else S
        res = d2(c) + d1(c) / ri - c[idx] / ri ** 2 + (1 - S2) * c[idx]
        return float(np.abs(res).max())
    if which not in ("PhiPlus1", "PhiMinus1"):
        raise ValueError(f"unknown Jacobi field {which!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        Sr = np.where(r > 0, S / np.where(r > 0, r, 1), pt.kappa)
    a = 0.5 * (Sp - Sr)
    b = 0.5 * (Sp + Sr)
    if zero:
        a, b = np.zeros_like(a), np.zeros_like(b)
    scale = -1j if which == "PhiMinus1" else 1.0
    ra = d2(a) + d1(a) / ri - 4 * a[idx] / ri ** 2 + (1 - 2 * S2) * a[idx] - S2 * b[idx]
    rb = d2(b) + d1(b) / ri + (1 - 2 * S2) * b[idx] - S2 * a[idx]
    return float(max(np.abs(scale * ra).max(), np.abs(scale * rb).max()))


def _system(pt, n):
    def f(r, y):
        S2 = float(pt(np.array([r]))[0]) ** 2
        a, ap, b, bp = y
        return [ap, -ap / r + (n + 1) ** 2 * a / r ** 2 - (1 - 2 * S2) * a + S2 * b,
                bp, -bp / r + (n - 1) ** 2 * b / r ** 2 - (1 - 2 * S2) * b + S2 * a]
    return f


def _n0_imag(pt):
    def f(r, y):
        S2 = float(pt(np.array([r]))[0]) ** 2
        c, cp = y
        return [cp, -cp / r + c / r ** 2 - (1 - S2) * c]
    return f


def far_field_slope(r, w) -> float:
    """Least-squares slope of ``log|w|`` against ``log r``."""
    return float(np.polyfit(np.log(r), np.log(np.abs(w)), 1)[0])


def classify_growth(r, w) -> tuple[str, dict]:
    """Classify ``w(r)`` on an outer window as exponential, log, power or bounded.

    Exponential: the rate of ``log|w|`` in ``r`` is within 20% of sqrt(2).
    Log: ``c1 + c2 ln r`` fits to 1% with a visible ``c2`` term.
    Otherwise the log-log slope decides: at most 0.1 is bounded, else power.
    """
    r = np.asarray(r, dtype=float)
    w = np.asarray(w)
    absw = np.abs(w)
    rate = float(np.polyfit(r, np.log(absw), 1)[0])
    info = {"exp_rate": rate}
    if abs(rate - SQRT2) <= 0.2 * SQRT2:
        return "exponential", info
    X = np.vstack([np.ones_like(r), np.log(r)]).T
    coef, *_ = np.linalg.lstsq(X, w.real if not np.iscomplexobj(w) else w, rcond=None)
    fit = X @ coef
    rel = float(np.linalg.norm(fit - w) / np.linalg.norm(w))
    info.update(log_fit_residual=rel, c1=complex(coef[0]), c2=complex(coef[1]))
    spread = abs(coef[1]) * np.log(r[-1] / r[0])
    slope = far_field_slope(r, w)
    info["power_slope"] = slope
    if rel < 0.01 and spread > 0.05 * absw.max():
        return "log", info
    if slope <= 0.1:
        return "bounded", info
    return "power", info


def mode_classify(pt: ProfileTable, n: int, seed=None, r_start: float = 1.0,
                  r_end: float | None = None, inward: bool | None = None) -> ModeSolution:
    """Integrate a Fourier mode and classify its growth.

    ``n = 0`` integrates the imaginary equation outward (default seed
    ``(c, c') = (1, 0)`` at ``r_start``) and tests ``c1 + c2 ln r`` on
    ``[20, 100]``. ``n >= 1`` integrates the coupled system; with
    ``inward=True`` the near-origin power exponents of ``a`` and ``b`` are
    fitted on ``[2 R0, 0.02]`` and reported in ``details["exponents"]``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    opts = dict(method="DOP853", rtol=1e-11, atol=1e-13)
    if n == 0:
        r_end = r_end or min(100.0, pt.r_max)
        y0 = seed if seed is not None else (1.0, 0.0)
        rr = np.linspace(r_start, r_end, 2000)
        sol = solve_ivp(_n0_imag(pt), (r_start, r_end), y0, t_eval=rr, **opts)
        win = (rr >= 20) & (rr <= 100)
        cls, info = classify_growth(rr[win], sol.y[0][win])
        return ModeSolution(0, rr, sol.y[0], None, cls, info)
    if inward is None:
        inward = seed is None
    if seed is None:
        seed = (1.0, 0.3, 0.7, -0.2)
    if inward:
        r_stop = 2 * R0
        rr = np.geomspace(r_start, r_stop, 400)
        sol = solve_ivp(_system(pt, n), (r_start, r_stop), seed, t_eval=rr, **opts)
        a, b = sol.y[0], sol.y[2]
        win = rr <= 0.02
        ea = -far_field_slope(rr[win], a[win])
        eb = -far_field_slope(rr[win], b[win])
        info = {"exponents": sorted([ea, eb], reverse=True), "slope_a": -ea, "slope_b": -eb}
        return ModeSolution(n, rr, a, b, "power", info)
    r_end = r_end or 10.0
    rr = np.linspace(r_start, r_end, 400)
    sol = solve_ivp(_system(pt, n), (r_start, r_end), seed, t_eval=rr, **opts)
    a, b = sol.y[0], sol.y[2]
    win = rr >= 0.5 * r_end
    cls, info = classify_growth(rr[win], np.abs(a[win]) + np.abs(b[win]))
    return ModeSolution(n, rr, a, b, cls, info)


def phi_plus1_seed(pt: ProfileTable, r: float = 1.0):
    """``(a, a', b, b')`` of the translation Jacobi field at ``r``."""
    S = float(pt(np.array([r]))[0])
    Sp = float(pt.derivative(np.array([r]))[0])
    # S'' from the profile equation
    Spp = -Sp / r + pt.d ** 2 * S / r ** 2 - S * (1 - S * S)
    q, qp = S / r, Sp / r - S / r ** 2
    return (0.5 * (Sp - q), 0.5 * (Spp - qp), 0.5 * (Sp + q), 0.5 * (Spp + qp))


def projection_integral(pt: ProfileTable, R: float) -> float:
    """``2 pi int_0^R S S' dr`` by 4-point Gauss-Legendre on every grid cell."""
    if R > pt.r_max:
        raise ValueError("R beyond the table")
    if R <= 0:
        return 0.0
    edges = np.append(pt.r_grid[pt.r_grid < R], R)
    x, w = np.polynomial.legendre.leggauss(4)
    lo, hi = edges[:-1, None], edges[1:, None]
    r = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    f = pt(r.ravel()) * pt.derivative(r.ravel())
    return float(2 * np.pi * np.sum(0.5 * (hi - lo) * w * f.reshape(r.shape)))
