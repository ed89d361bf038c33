"""Point-vortex force map, its linearization and the nondegeneracy certificate.

Positive vortices ``p`` and negative vortices ``q`` are in equilibrium with
speed ``mu`` when

    F_k = sum_{j!=k} 1/(p_k - p_j) - sum_j 1/(p_k - q_j) = mu,
    G_k = sum_{j!=k} 1/(q_k - q_j) - sum_j 1/(q_k - p_j) = -mu.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.linalg import subspace_angles, svd

from .adler_moser import ThetaParams, modified_adler_moser, param_derivative, symmetric_family, \
    adler_moser_shifted
from .exactpoly import Poly, shift, _to_mp
from .roots import classify_symmetry, find_roots, symmetrize

__all__ = [
    "VortexConfig", "ForceJacobian", "force_residual", "max_residual", "jacobian",
    "jacobian_fd", "symmetric_basis", "is_symmetric_vector", "kernel_basis",
    "nondegeneracy_certificate", "reduced_n2_jacobian", "symmetric_config",
    "realify", "complexify",
]

NULL_RTOL = 1e-8
NONDEG_RTOL = 1e-6
ANGLE_TOL = 1e-4


@dataclass(frozen=True)
class VortexConfig:
    p: tuple
    q: tuple
    mu: object = 1

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(mpmath.mpc(x) for x in self.p))
        object.__setattr__(self, "q", tuple(mpmath.mpc(x) for x in self.q))
        if self.mu and len(self.p) != len(self.q):
            raise ValueError("count balance violated: |p| != |q| with mu != 0")

    @property
    def points(self):
        return self.p + self.q

    def as_vector(self) -> np.ndarray:
        """Realified positions ``(Re p1, Im p1, ..., Re q1, Im q1, ...)``."""
        return realify(np.array([complex(x) for x in self.points]))

    def with_vector(self, x: np.ndarray) -> "VortexConfig":
        c = complexify(x)
        m = len(self.p)
        return VortexConfig(tuple(c[:m]), tuple(c[m:]), self.mu)

    def scaled(self, s) -> "VortexConfig":
        return VortexConfig(tuple(s * x for x in self.p), tuple(s * x for x in self.q), self.mu)


@dataclass(frozen=True)
class ForceJacobian:
    matrix: np.ndarray
    symmetric_basis: np.ndarray


def realify(c: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(c))
    out[0::2] = np.real(c)
    out[1::2] = np.imag(c)
    return out


def complexify(x: np.ndarray) -> np.ndarray:
    return np.asarray(x[0::2]) + 1j * np.asarray(x[1::2])


def _check_distinct(pts):
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i] == pts[j]:
                raise ValueError("singular configuration: coincident points")


def _mu_mp(mu):
    if isinstance(mu, (int, float, mpmath.mpf)):
        return mpmath.mpf(mu)
    return mpmath.mpf(_to_mp(mu))


def force_residual(cfg: VortexConfig):
    """``(F_k - mu, G_k + mu)`` as two lists of ``mpc``."""
    _check_distinct(cfg.points)
    mu = _mu_mp(cfg.mu)
    p, q = cfg.p, cfg.q
    F = [mpmath.fsum(1 / (p[k] - p[j]) for j in range(len(p)) if j != k)
         - mpmath.fsum(1 / (p[k] - qj) for qj in q) - mu for k in range(len(p))]
    G = [mpmath.fsum(1 / (q[k] - q[j]) for j in range(len(q)) if j != k)
         - mpmath.fsum(1 / (q[k] - pj) for pj in p) + mu for k in range(len(q))]
    return F, G


def max_residual(cfg: VortexConfig) -> float:
    F, G = force_residual(cfg)
    return float(max(abs(x) for x in F + G))


def _complex_jacobian(z: np.ndarray, m: int) -> np.ndarray:
    """Complex derivative of ``(F, G)`` in ``(p, q)``; ``z = concat(p, q)``."""
    M = len(z)
    sign = np.where(np.arange(M) < m, 1.0, -1.0)
    s = np.outer(sign, sign)  # +1 same species, -1 opposite
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    inv2 = 1.0 / diff ** 2
    np.fill_diagonal(inv2, 0.0)
    J = s * inv2  # d/dz_j of s_kj/(z_k - z_j) = s_kj/(z_k - z_j)^2
    np.fill_diagonal(J, -(s * inv2).sum(axis=1))
    return J


def jacobian(cfg: VortexConfig, symmetric: bool = True) -> ForceJacobian:
    """Realified analytic Jacobian; rows/cols ordered ``(Re x1, Im x1, ...)``."""
    _check_distinct(cfg.points)
    z = np.array([complex(x) for x in cfg.points])
    Jc = _complex_jacobian(z, len(cfg.p))
    M = len(z)
    J = np.empty((2 * M, 2 * M))
    J[0::2, 0::2] = Jc.real
    J[0::2, 1::2] = -Jc.imag
    J[1::2, 0::2] = Jc.imag
    J[1::2, 1::2] = Jc.real
    basis = symmetric_basis(cfg) if symmetric else np.zeros((2 * M, 0))
    return ForceJacobian(J, basis)


def _force_vector(cfg: VortexConfig, x: np.ndarray) -> np.ndarray:
    z = complexify(x)
    m = len(cfg.p)
    sign = np.where(np.arange(len(z)) < m, 1.0, -1.0)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, np.inf)
    f = (np.outer(sign, sign) / diff).sum(axis=1)
    return realify(f)


def jacobian_fd(cfg: VortexConfig, h: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian (oracle for :func:`jacobian`)."""
    x0 = cfg.as_vector()
    cols = []
    for i in range(len(x0)):
        e = np.zeros_like(x0)
        e[i] = h
        cols.append((_force_vector(cfg, x0 + e) - _force_vector(cfg, x0 - e)) / (2 * h))
    return np.array(cols).T


def _pair_structure(cfg: VortexConfig, tol: float = 1e-9):
    """Pairs ``(i, j)`` with ``p_i = conj p_j`` and real indices, checking ``q = -conj p``."""
    p = np.array([complex(x) for x in cfg.p])
    q = np.array([complex(x) for x in cfg.q])
    scale = 1 + np.abs(p).max()
    if len(p) != len(q) or np.abs(q + np.conj(p)).max() > tol * scale:
        raise ValueError("configuration is not reflection symmetric (q != -conj p)")
    used, pairs, reals = set(), [], []
    for i in range(len(p)):
        if i in used:
            continue
        if abs(p[i].imag) <= tol * scale:
            reals.append(i)
            used.add(i)
            continue
        cand = [j for j in range(len(p)) if j not in used and j != i
                and abs(p[j] - np.conj(p[i])) <= tol * scale]
        if not cand:
            raise ValueError("symmetry violation")
        pairs.append((i, cand[0]))
        used.update((i, cand[0]))
    return pairs, reals


def symmetric_basis(cfg: VortexConfig) -> np.ndarray:
    """Orthonormal real basis (columns) of symmetric displacement vectors.

    Symmetric means ``eta_k = -conj(xi_k)``, ``xi_i = conj(xi_j)`` on conjugate
    pairs and ``Im xi_i = 0`` on real points.
    """
    pairs, reals = _pair_structure(cfg)
    m = len(cfg.p)
    dim = 4 * m

    def idx(k, species, part):  # species 0 = p, 1 = q; part 0 = Re, 1 = Im
        return 2 * (k + species * m) + part

    cols = []
    for i, j in pairs:
        a = np.zeros(dim)  # equal real parts
        a[idx(i, 0, 0)] = a[idx(j, 0, 0)] = 1
        a[idx(i, 1, 0)] = a[idx(j, 1, 0)] = -1
        b = np.zeros(dim)  # opposite imaginary parts
        b[idx(i, 0, 1)], b[idx(j, 0, 1)] = 1, -1
        b[idx(i, 1, 1)], b[idx(j, 1, 1)] = 1, -1
        cols += [a, b]
    for i in reals:
        c = np.zeros(dim)
        c[idx(i, 0, 0)], c[idx(i, 1, 0)] = 1, -1
        cols.append(c)
    B = np.array(cols).T
    return B / np.linalg.norm(B, axis=0)


def is_symmetric_vector(cfg: VortexConfig, v: np.ndarray, tol: float = 1e-12) -> bool:
    B = symmetric_basis(cfg)
    return np.linalg.norm(v - B @ (B.T @ v)) <= tol * max(1.0, np.linalg.norm(v))


@lru_cache(maxsize=32)
def _refined_family(n: int, digits: int = 15):
    pair = symmetric_family(n, 1)
    rs = symmetrize(find_roots(pair.A, digits=digits))
    return pair, rs


def symmetric_config(n: int, mu=1, digits: int = 15) -> VortexConfig:
    """Refined roots of ``A_n`` (p) and ``B_n`` (q = -conj p) for the ``mu = 1`` family.

    For other ``mu`` the family is a rescaling: roots scale by ``1/mu`` while
    the equilibrium speed scales by ``mu``.
    """
    _, rs = _refined_family(n, digits)
    p = list(rs.roots)
    q = [-mpmath.conj(x) for x in p]
    cfg = VortexConfig(tuple(p), tuple(q), 1)
    if mu != 1:
        s = 1 / _mu_mp(mu)
        cfg = VortexConfig(tuple(s * x for x in p), tuple(s * x for x in q), mu)
    return cfg


def _poly_at(poly: Poly, x):
    cs = [_to_mp(c) for c in poly.coeffs]
    return mpmath.polyval(cs[::-1], x)


def kernel_basis(n: int, cfg: VortexConfig | None = None) -> np.ndarray:
    """Real kernel vectors (columns) of the realified DF at the ``mu = 1`` family.

    Translation gives the all-ones complex displacement. Each ``k_j``,
    ``j = 2..n``, gives ``delta a_i = -d_kj Theta(a_i) / Theta'(a_i)`` on the
    positive side and the same expression with the modified polynomial on
    the negative side. Each complex vector ``v`` contributes ``v`` and ``i v``.
    """
    if cfg is None:
        cfg = symmetric_config(n)
    pair = symmetric_family(n, 1)
    params = pair.params
    m = len(cfg.p)
    vecs = [np.ones(2 * m, dtype=complex)]
    modified = shift(modified_adler_moser(n, ThetaParams(k=params.k, mu=1, t=params.t)), params.t)
    dA, dB = pair.A.derivative(), modified.derivative()
    for j in range(2, n + 1):
        dkA = param_derivative(n, params, j)
        dkB = param_derivative(n, ThetaParams(k=params.k, mu=1, t=params.t), j, modified=True)
        v = []
        for x, num, den in [(a, dkA, dA) for a in cfg.p] + [(b, dkB, dB) for b in cfg.q]:
            d = _poly_at(den, x)
            if abs(d) < mpmath.mpf(10) ** -30:
                raise ValueError("repeated root suspected")
            v.append(complex(-_poly_at(num, x) / d))
        vecs.append(np.array(v))
    cols = []
    for v in vecs:
        cols += [realify(v), realify(1j * v)]
    return np.array(cols).T


def nondegeneracy_certificate(n: int, digits: int = 15) -> dict:
    """Symmetric-subspace invertibility plus exact ``2n``-dimensional kernel check."""
    cfg = symmetric_config(n, digits=digits)
    fj = jacobian(cfg)
    J, B = fj.matrix, fj.symmetric_basis
    sv = svd(J, compute_uv=False)
    smax = float(sv[0])
    null_dim = int(np.sum(sv < NULL_RTOL * smax))
    restricted = B.T @ J @ B
    sv_r = svd(restricted, compute_uv=False)
    sigma_min = float(sv_r[-1])
    K = kernel_basis(n, cfg)
    kernel_res = float(np.linalg.norm(J @ K, axis=0).max() / np.linalg.norm(K, axis=0).min() / smax)
    _, _, Vt = svd(J)
    null_space = Vt[len(sv) - null_dim:].T if null_dim else np.zeros((J.shape[0], 0))
    if null_dim == K.shape[1]:
        angles = [float(a) for a in subspace_angles(null_space, K)]
    else:
        angles = []
    ok = (sigma_min > NONDEG_RTOL * smax and null_dim == 2 * n and len(angles) == 2 * n
          and max(angles) < ANGLE_TOL)
    return {
        "n": n,
        "sigma_min": sigma_min,
        "sigma_max": smax,
        "null_dim": null_dim,
        "kernel_angles": angles,
        "kernel_residual": kernel_res,
        "spectrum": [float(s) for s in sv],
        "pass": bool(ok),
    }


def reduced_n2_jacobian(cfg: VortexConfig) -> np.ndarray:
    """3x3 Jacobian of ``(F_1, Re F_2, Im F_2)`` in ``(p_1, Re p_2, Im p_2)``.

    ``p_1`` is the real root, ``p_3 = conj p_2`` and ``q = -conj p``; the
    config must hold exactly three positive vortices.
    """
    if len(cfg.p) != 3:
        raise ValueError("reduced map needs three positive vortices")
    pairs, reals = _pair_structure(cfg)
    (r,), ((i2, i3),) = reals, pairs
    if complex(cfg.p[i2]).imag < 0:
        i2, i3 = i3, i2
    J = jacobian(cfg, symmetric=False).matrix
    m = 3
    dim = 4 * m

    def idx(k, species, part):
        return 2 * (k + species * m) + part

    T = np.zeros((dim, 3))
    T[idx(r, 0, 0), 0], T[idx(r, 1, 0), 0] = 1, -1
    T[idx(i2, 0, 0), 1] = T[idx(i3, 0, 0), 1] = 1
    T[idx(i2, 1, 0), 1] = T[idx(i3, 1, 0), 1] = -1
    T[idx(i2, 0, 1), 2], T[idx(i3, 0, 1), 2] = 1, -1
    T[idx(i2, 1, 1), 2], T[idx(i3, 1, 1), 2] = 1, -1
    rows = [idx(r, 0, 0), idx(i2, 0, 0), idx(i2, 0, 1)]
    return (J @ T)[rows]
