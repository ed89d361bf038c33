"""Root finding, inclusion radii, symmetry classification and ring report."""

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vortexforge.adler_moser import symmetric_family
from vortexforge.exactpoly import QQ, Poly
from vortexforge.roots import (
    RootSet, classify_symmetry, find_roots, kmeans_1d, ring_report, symmetrize,
)

z = Poly.z()


def test_cubic_example():
    rs = find_roots((z + 1) ** 3 - 4)
    got = sorted(rs.as_complex(), key=lambda c: (c.real, c.imag))
    ref = 4 ** (1 / 3)
    want = sorted([ref - 1, -1 + ref * np.exp(2j * np.pi / 3), -1 + ref * np.exp(-2j * np.pi / 3)],
                  key=lambda c: (c.real, c.imag))
    assert np.allclose(got, want, atol=1e-14)
    assert np.round(got[2].real, 4) == 0.5874
    assert np.round(got[1].imag, 4) == 1.3747


def test_n1_single_root():
    rs = find_roots(symmetric_family(1).A)
    assert rs.source_degree == 1 and abs(rs.roots[0] + 0.5) < 1e-30


def test_errors():
    with pytest.raises(ValueError, match="degree must be >= 1"):
        find_roots(Poly((QQ(3),)))
    with pytest.raises(ValueError, match="repeated roots"):
        find_roots((z - 1) ** 2 * (z + 2))


@settings(max_examples=20)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=1, max_size=6, unique=True))
def test_roots_of_product_recovered(pts):
    # build a real polynomial from Gaussian-integer roots plus their conjugates
    roots = set()
    for a, b in pts:
        roots.add(complex(a, b))
        roots.add(complex(a, -b))
    p = Poly((QQ(1),))
    for r in roots:
        if r.imag == 0:
            p = p * (z - QQ(int(r.real)))
        elif r.imag > 0:
            p = p * (z * z - 2 * QQ(int(r.real)) * z + QQ(int(r.real) ** 2 + int(r.imag) ** 2))
    rs = find_roots(p, digits=20)
    got = rs.as_complex()
    for r in roots:
        assert np.abs(got - r).min() < 1e-12
    # each exact root lies inside the reported disc of some computed root
    for r in roots:
        k = int(np.abs(got - r).argmin())
        assert abs(rs.roots[k] - mpmath.mpc(r)) <= rs.error_radii[k]


@pytest.mark.parametrize("n", range(1, 9))
def test_family_roots_residual_and_radii(n):
    A = symmetric_family(n).A
    rs = find_roots(A, digits=20)
    with mpmath.workdps(60):
        cs = [mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in A.coeffs]
        for x, r in zip(rs.roots, rs.error_radii):
            assert r < mpmath.mpf(10) ** -20
            assert abs(mpmath.polyval(cs[::-1], x)) < mpmath.mpf(10) ** -20 * (1 + abs(x)) ** A.degree


@pytest.mark.parametrize("n", range(1, 9))
def test_family_symmetry_classification(n):
    rs = find_roots(symmetric_family(n).A)
    cls = classify_symmetry(rs)
    assert 2 * len(cls.conjugate_pairs) + len(cls.real_indices) == rs.source_degree
    sym = symmetrize(rs, cls)
    z_ = sym.as_complex()
    npair = len(cls.conjugate_pairs)
    assert np.all(z_[: 2 * npair : 2] == np.conj(z_[1 : 2 * npair : 2]))
    assert np.all(z_[2 * npair :].imag == 0)
    assert np.allclose(sorted(z_, key=lambda c: (c.real, c.imag)),
                       sorted(rs.as_complex(), key=lambda c: (c.real, c.imag)), atol=1e-14)


def test_symmetry_violation():
    rs = RootSet((mpmath.mpc(1, 1), mpmath.mpc(2, -1)), (mpmath.mpf(0),) * 2, 2)
    with pytest.raises(ValueError, match="symmetry violation"):
        classify_symmetry(rs)
    with pytest.raises(ValueError, match="symmetry violation"):
        classify_symmetry(RootSet((mpmath.mpc(0, 1),), (mpmath.mpf(0),), 1))


def test_kmeans_1d_optimal():
    centers, labels = kmeans_1d([0.0, 0.1, 5.0, 5.2, 9.9, 10.0], 3)
    assert np.allclose(centers, [0.05, 5.1, 9.95])
    assert list(labels) == [0, 0, 1, 1, 2, 2]
    with pytest.raises(ValueError):
        kmeans_1d([1.0], 2)


def test_ring_report():
    rep = ring_report(find_roots(symmetric_family(2).A), 2)
    assert sum(rep["counts"]) == 3
    assert rep["centers"][0] < rep["centers"][1]
    assert set(rep) >= {"centers", "counts", "spread", "relative_spread", "assignment"}
