"""Command-line front end: ``vortexforge <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .export import write_csv, write_json, write_svg
from .exactpoly import QQ, Poly, poly_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "n": 2,
    "mu": "1",
    "precision": 128,
    "jobs": 1,
    "seed": 0,
    "out": "vortexforge-out",
    "format": "json",
    "mode": "auto",
    "epsilon": 0.05,
    "d": 1,
    "r_max": 100.0,
    "nx": 201,
}
INT_KEYS = {"n", "precision", "jobs", "seed", "d", "nx"}
FLOAT_KEYS = {"epsilon", "r_max"}
COMMANDS = ("poly", "roots", "verify", "nondeg", "profile", "field", "report")


class UsageError(Exception):
    pass


def load_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment; keys use flag names."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key, value):
    try:
        if key in INT_KEYS:
            return int(value)
        if key in FLOAT_KEYS:
            return float(value)
    except ValueError as exc:
        raise UsageError(f"invalid value for {key}: {value!r}") from exc
    return value


def resolve(args) -> argparse.Namespace:
    """Merge built-in defaults < config file < command-line flags < environment."""
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(load_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if os.environ.get("VORTEXFORGE_OUT"):
        merged["out"] = os.environ["VORTEXFORGE_OUT"]
    cfg = {k: _coerce(k, v) for k, v in merged.items()}
    if cfg["n"] < 1:
        raise UsageError("n must be >= 1")
    try:
        mu = QQ(Fraction(str(cfg["mu"])))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid mu {cfg['mu']!r}") from exc
    if mu <= 0:
        raise UsageError("mu must be positive")
    if cfg["format"] not in ("json", "csv", "svg"):
        raise UsageError("format must be json, csv or svg")
    if cfg["mode"] not in ("auto", "exact", "modular"):
        raise UsageError("mode must be auto, exact or modular")
    if cfg["precision"] < 64:
        raise UsageError("precision must be >= 64 bits")
    if cfg["jobs"] < 1:
        raise UsageError("jobs must be >= 1")
    if cfg["epsilon"] <= 0 or cfg["r_max"] < 20 or cfg["d"] < 1 or cfg["nx"] < 11:
        raise UsageError("invalid profile/field parameters")
    cfg["mu_q"] = mu
    cfg["out"] = Path(cfg["out"])
    cfg["command"] = args.command
    cfg["timing"] = bool(args.timing)
    cfg["inject_corruption"] = bool(getattr(args, "inject_corruption", False))
    return argparse.Namespace(**cfg)


def _mu_str(mu) -> str:
    return f"{mu.numerator}/{mu.denominator}" if mu.denominator != 1 else str(mu.numerator)


def _finish(cfg, report: dict, t0: float) -> dict:
    if cfg.timing:
        report["wall_ms"] = (time.perf_counter() - t0) * 1e3
    return report


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_poly(cfg) -> int:
    from .adler_moser import symmetric_family

    t0 = time.perf_counter()
    pair = symmetric_family(cfg.n, cfg.mu_q)
    stem = cfg.out / f"poly_n{cfg.n}"
    if cfg.format == "csv":
        rows = [(i, str(a), str(b)) for i, (a, b) in enumerate(zip(
            poly_to_json(pair.A), poly_to_json(pair.B)))]
        write_csv(stem.with_suffix(".csv"), ["power", "A", "B"], rows)
    else:
        report = {"n": cfg.n, "mu": _mu_str(cfg.mu_q), "degree": pair.A.degree,
                  "A": poly_to_json(pair.A), "B": poly_to_json(pair.B)}
        write_json(stem.with_suffix(".json"), _finish(cfg, report, t0))
    return EXIT_OK


def cmd_roots(cfg) -> int:
    from .adler_moser import symmetric_family
    from .roots import classify_symmetry, find_roots, ring_report

    t0 = time.perf_counter()
    pair = symmetric_family(cfg.n, cfg.mu_q)
    rs = find_roots(pair.A, precision_bits=cfg.precision)
    cls = classify_symmetry(rs)
    zs = rs.as_complex()
    stem = cfg.out / f"roots_n{cfg.n}"
    if cfg.format == "csv":
        write_csv(stem.with_suffix(".csv"), ["re", "im", "error_radius"],
                  [(z.real, z.imag, e) for z, e in zip(zs, rs.radii_float())])
    elif cfg.format == "svg":
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 5))
        ax.scatter(zs.real, zs.imag, s=14, c="tab:red", label="A_n (positive)")
        ax.scatter(-zs.real, zs.imag, s=14, facecolors="none", edgecolors="tab:blue",
                   label="B_n (negative)")
        ax.axhline(0, color="0.7", lw=0.5)
        ax.axvline(0, color="0.7", lw=0.5)
        ax.set_aspect("equal")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.legend(loc="upper right", fontsize=8)
        write_svg(stem.with_suffix(".svg"), fig)
        plt.close(fig)
    else:
        report = {
            "n": cfg.n, "mu": _mu_str(cfg.mu_q), "degree": rs.source_degree,
            "roots": [[float(z.real), float(z.imag)] for z in zs],
            "error_radii": [float(e) for e in rs.radii_float()],
            "conjugate_pairs": [list(p) for p in cls.conjugate_pairs],
            "real_indices": list(cls.real_indices),
            "rings": ring_report(rs, cfg.n),
        }
        write_json(stem.with_suffix(".json"), _finish(cfg, report, t0))
    return EXIT_OK


def _identity_checks(m: int, mu, seed: int, corrupt: bool) -> dict:
    from .adler_moser import (
        ThetaParams, bilinear_residual, certify_assumption_A, recursion_residual,
        symmetric_family, tkachenko_residual, translation_lemma_residual,
        symmetric_family_velocity,
    )

    def fam(k):
        A = symmetric_family(k, mu).A
        if corrupt and k == m:
            A = A + Poly((QQ("1/1000"),))
        return A

    A, Am, Ap = fam(m), fam(m - 1), fam(m + 1)
    v = symmetric_family_velocity(mu)
    checks = {
        "tkachenko": tkachenko_residual(A, A.reflect(), v).is_zero(),
        "recursion": recursion_residual(A, Am).is_zero(),
        "bilinear": bilinear_residual(Am, A, Ap, m).is_zero(),
        "recursive_equals_wronskian": symmetric_family(m, mu, "recursive").A == A,
    }
    if m <= 6:
        rng = random.Random(seed * 1000 + m)
        ks = [QQ(Fraction(rng.randint(-20, 20), rng.randint(1, 9))) for _ in range(max(m - 1, 1))]
        params = ThetaParams(k=tuple(ks), mu=QQ(2))
        checks["translation_lemma"] = translation_lemma_residual(m, params).is_zero()
    if m >= 2:
        checks.update(certify_assumption_A(m, "exact").verdicts)
    return checks


def _modular_job(m: int):
    from .adler_moser import certify_assumption_A

    rep = certify_assumption_A(m, "modular")
    return m, rep.verdicts, rep.primes


def cmd_verify(cfg) -> int:
    t0 = time.perf_counter()
    mode = cfg.mode if cfg.mode != "auto" else ("exact" if cfg.n <= 12 else "modular")
    failures = []
    results = {}
    if mode == "exact":
        for m in range(1, cfg.n + 1):
            checks = _identity_checks(m, cfg.mu_q, cfg.seed, cfg.inject_corruption and m == cfg.n)
            results[str(m)] = checks
            failures += [f"n={m}:{name}" for name, ok in checks.items() if not ok]
    else:
        ms = list(range(2, cfg.n + 1))
        if cfg.inject_corruption:
            failures.append(f"n={cfg.n}:injected_corruption")
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                out = list(pool.map(_modular_job, ms))
        else:
            out = [_modular_job(m) for m in ms]
        for m, verdicts, primes in out:  # ordered by n regardless of scheduling
            results[str(m)] = dict(verdicts, primes=[str(p) for p in primes])
            failures += [f"n={m}:{k}" for k, ok in verdicts.items() if not ok]
    report = {"n": cfg.n, "mu": _mu_str(cfg.mu_q), "mode": mode, "results": results,
              "failures": failures, "pass": not failures}
    write_json(cfg.out / f"verify_n{cfg.n}_{mode}.json", _finish(cfg, report, t0))
    for f in failures:
        print(f"verification failed: {f}", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_nondeg(cfg) -> int:
    from .vortex import nondegeneracy_certificate

    if cfg.mu_q != 1:
        raise UsageError("nondeg is defined for the mu = 1 family")
    t0 = time.perf_counter()
    cert = nondegeneracy_certificate(cfg.n)
    write_json(cfg.out / f"nondeg_n{cfg.n}.json", _finish(cfg, cert, t0))
    if not cert["pass"]:
        print(f"nondegeneracy certificate failed for n={cfg.n}", file=sys.stderr)
    return EXIT_OK if cert["pass"] else EXIT_FAIL


def cmd_profile(cfg) -> int:
    from .glprofile import near_zero_check, projection_integral, solve_profile

    t0 = time.perf_counter()
    pt = solve_profile(cfg.d, cfg.r_max)
    stem = cfg.out / f"profile_d{cfg.d}"
    if cfg.format == "csv":
        write_csv(stem.with_suffix(".csv"), ["r", "S", "S_prime"],
                  zip(pt.r_grid, pt.S, pt.S_prime))
    elif cfg.format == "svg":
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        mask = pt.r_grid <= 20
        ax.plot(pt.r_grid[mask], pt.S[mask], label="S")
        ax.plot(pt.r_grid[mask], pt.S_prime[mask], label="S'")
        ax.set_xlabel("r")
        ax.legend()
        write_svg(stem.with_suffix(".svg"), fig)
        plt.close(fig)
    else:
        R = pt.r_max
        report = {"d": cfg.d, "r_max": pt.r_max, "kappa": pt.kappa,
                  "S_at_10": float(pt(np.array([10.0]))[0]),
                  "projection_error": projection_integral(pt, R) - np.pi * float(pt(np.array([R]))[0]) ** 2}
        if cfg.d == 1:
            report["near_zero"] = near_zero_check(pt)
        write_json(stem.with_suffix(".json"), _finish(cfg, report, t0))
    return EXIT_OK


def cmd_field(cfg) -> int:
    from .field import (
        boundary_winding, check_field_symmetry, error_field, make_sampler, sample_field,
        vortex_windings,
    )
    from .glprofile import solve_profile
    from .vortex import symmetric_config

    t0 = time.perf_counter()
    pt = solve_profile(1, cfg.r_max)
    fs = make_sampler(cfg.n, cfg.epsilon, profile=pt, nx=cfg.nx,
                      config=symmetric_config(cfg.n, cfg.mu_q))
    U = sample_field(fs)
    sym = check_field_symmetry(fs)
    stem = cfg.out / f"field_n{cfg.n}"
    if cfg.format == "csv":
        X, Y = np.meshgrid(fs.grid.x, fs.grid.y)
        write_csv(stem.with_suffix(".csv"), ["x", "y", "re_u", "im_u", "abs_u"],
                  zip(X.ravel(), Y.ravel(), U.real.ravel(), U.imag.ravel(), np.abs(U).ravel()))
    elif cfg.format == "svg":
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        ext = [fs.grid.x[0], fs.grid.x[-1], fs.grid.y[0], fs.grid.y[-1]]
        fig, axes = plt.subplots(1, 2, figsize=(10, 4.6))
        im0 = axes[0].imshow(np.angle(U), origin="lower", extent=ext, cmap="hsv")
        axes[0].set_title("arg u")
        im1 = axes[1].imshow(np.abs(U), origin="lower", extent=ext, cmap="viridis")
        axes[1].set_title("|u|")
        P, Q = fs.centers
        for ax in axes:
            ax.plot(P.real, P.imag, "k+", ms=6)
            ax.plot(Q.real, Q.imag, "kx", ms=6)
        fig.colorbar(im0, ax=axes[0], shrink=0.8)
        fig.colorbar(im1, ax=axes[1], shrink=0.8)
        write_svg(stem.with_suffix(".svg"), fig)
        plt.close(fig)
    report = {"n": cfg.n, "epsilon": cfg.epsilon, "symmetry": sym,
              "boundary_winding": boundary_winding(fs, U), "windings": vortex_windings(fs),
              "error_decay": error_field(fs)}
    write_json(stem.with_suffix(".json"), _finish(cfg, report, t0))
    if not sym["pass"]:
        print("field symmetry check failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_report(cfg) -> int:
    from .adler_moser import certify_assumption_A, symmetric_family
    from .roots import find_roots, ring_report
    from .vortex import nondegeneracy_certificate

    t0 = time.perf_counter()
    pair = symmetric_family(cfg.n, cfg.mu_q)
    report = {"n": cfg.n, "mu": _mu_str(cfg.mu_q), "degree": pair.A.degree, "version": __version__}
    ok = True
    if cfg.n >= 2:
        mode = "exact" if cfg.n <= 12 else "modular"
        cert = certify_assumption_A(cfg.n, mode)
        report["assumption_A"] = cert.to_dict(timing=False)
        ok &= cert.passed
    if cfg.n <= 10:
        report["rings"] = ring_report(find_roots(pair.A, cfg.precision), cfg.n)
    if cfg.n <= 6 and cfg.mu_q == 1:
        cert = nondegeneracy_certificate(cfg.n)
        report["nondegeneracy"] = {k: cert[k] for k in ("sigma_min", "sigma_max", "null_dim", "pass")}
        ok &= cert["pass"]
    report["pass"] = bool(ok)
    write_json(cfg.out / f"report_n{cfg.n}.json", _finish(cfg, report, t0))
    return EXIT_OK if ok else EXIT_FAIL


HANDLERS = {
    "poly": cmd_poly, "roots": cmd_roots, "verify": cmd_verify, "nondeg": cmd_nondeg,
    "profile": cmd_profile, "field": cmd_field, "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="family index n (default 2)")
    common.add_argument("--mu", help="rational mu, e.g. 1 or 3/2 (default 1)")
    common.add_argument("--precision", type=int, help="root-finding precision in bits (default 128)")
    common.add_argument("--jobs", type=int, help="worker processes (default 1)")
    common.add_argument("--seed", type=int, help="seed for randomized checks (default 0)")
    common.add_argument("--out", help="output directory (VORTEXFORGE_OUT overrides)")
    common.add_argument("--format", choices=("json", "csv", "svg"), help="output format")
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--timing", action="store_true", help="include wall_ms in JSON")
    parser = argparse.ArgumentParser(prog="vortexforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "poly": "write exact coefficients of A_n and B_n",
        "roots": "roots of A_n with symmetry and ring report",
        "verify": "exact identities and root-structure certification up to n",
        "nondeg": "nondegeneracy certificate of the vortex equilibrium",
        "profile": "Ginzburg-Landau vortex profile",
        "field": "approximate traveling-wave field with symmetry/winding/decay checks",
        "report": "summary report for one n",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "verify":
            sp.add_argument("--mode", choices=("auto", "exact", "modular"))
            sp.add_argument("--inject-corruption", action="store_true", help=argparse.SUPPRESS)
        if name == "profile":
            sp.add_argument("--d", type=int, help="vortex degree (default 1)")
        if name in ("profile", "field"):
            sp.add_argument("--r-max", dest="r_max", type=float, help="profile radius (default 100)")
        if name == "field":
            sp.add_argument("--epsilon", type=float, help="speed epsilon (default 0.05)")
            sp.add_argument("--nx", type=int, help="grid points per side (default 201)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"vortexforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
