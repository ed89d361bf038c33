"""Exact dense univariate polynomials over the rationals.

Coefficients are stored in ascending degree. Rational scalars are
``gmpy2.mpq`` values (always in lowest terms, positive denominator);
complex rationals use :class:`QQi`. The polynomial class is generic over its
coefficient ring, so coefficients may also be :class:`MultiPoly` instances
(used when the Adler-Moser parameters are kept symbolic).

Nothing in this module rounds. The only floating-point entry point is
:func:`eval_complex`, which evaluates an exact polynomial at an mpmath point.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from itertools import combinations

import gmpy2
import mpmath
from gmpy2 import mpq, mpz

__all__ = [
    "QQ", "QQi", "MultiPoly", "Poly", "ModPoly",
    "wronskian", "determinant", "poly_gcd", "resultant", "sylvester_resultant",
    "resultant_mod_primes", "shift", "eval_complex", "word_primes",
    "poly_to_json", "poly_from_json",
]


def QQ(x) -> mpq:
    """Coerce ``x`` (int, str like ``"3/4"``, Fraction, mpq) to an exact rational."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("refusing to build an exact rational from a float")
    return mpq(x)


def _is_rational(c) -> bool:
    return isinstance(c, (type(mpq()), type(mpz()), int))


class QQi:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = QQ(re)
        self.im = QQ(im)

    @staticmethod
    def _lift(x):
        return x if isinstance(x, QQi) else QQi(x, 0)

    def __add__(self, other):
        if isinstance(other, (QQi, int)) or _is_rational(other):
            o = QQi._lift(other)
            return QQi(self.re + o.re, self.im + o.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, (QQi, int)) or _is_rational(other):
            return self + (-QQi._lift(other))
        return NotImplemented

    def __rsub__(self, other):
        return QQi._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (QQi, int)) or _is_rational(other):
            o = QQi._lift(other)
            return QQi(self.re * o.re - self.im * o.im,
                       self.re * o.im + self.im * o.re)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi._lift(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("complex rational division by zero")
        num = self * o.conjugate()
        return QQi(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return QQi._lift(other) / self

    def __pow__(self, k: int):
        out = QQi(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (QQi, int)) or _is_rational(other):
            o = QQi._lift(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"

    def to_mpc(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)


class MultiPoly:
    """Sparse multivariate polynomial with rational coefficients.

    Terms are stored as ``{exponent_tuple: mpq}`` over a fixed number of
    variables. Only ring operations are provided.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms = {e: QQ(c) for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int) or _is_rational(other) or isinstance(other, Fraction):
            return MultiPoly.const(self.nvars, QQ(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # scalar division only
        c = QQ(other)
        return MultiPoly(self.nvars, {e: v / c for e, v in self.terms.items()})

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.terms})"


# ---------------------------------------------------------------------------
# dense univariate polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Immutable dense polynomial in ``z``; ``coeffs[i]`` multiplies ``z**i``.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [QQ(c) if isinstance(c, (str, Fraction)) or _is_rational(c) else c
              for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def z(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def from_roots(cls, roots):
        out = cls((1,))
        for r in roots:
            out = out * cls((-r, 1))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else QQ(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else QQ(0)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return not other
        return self.degree == 0 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c})*z^{i}" if i else f"({c})")
        return " + ".join(reversed(parts))

    # ring operations ----------------------------------------------------
    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly((other,))

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(tuple(a[i] + b[i] for i in range(len(b))) + a[len(b):])

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = Poly((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c):
        return Poly(tuple(x * c for x in self.coeffs))

    def derivative(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = Poly(tuple(p.coeffs[i] * i for i in range(1, len(p.coeffs))))
        return p

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reflect(self) -> "Poly":
        """Return ``p(-z)``."""
        return Poly(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def compose_linear(self, a, b) -> "Poly":
        """Return ``p(a*z + b)`` by Horner in the ring of polynomials."""
        lin = Poly((b, a))
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def map_coeffs(self, f) -> "Poly":
        return Poly(tuple(f(c) for c in self.coeffs))

    # field operations (rational or complex-rational coefficients) ----------
    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc
        if len(r) - 1 < db:
            return Poly(), self
        q = [QQ(0)] * (len(r) - db)
        bc = other.coeffs
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if c:
                for j in range(db + 1):
                    r[k + j] = r[k + j] - c * bc[j]
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        inv = 1 / self.lc
        return Poly(tuple(c * inv for c in self.coeffs))

    def is_rational(self) -> bool:
        return all(_is_rational(c) for c in self.coeffs)


def shift(p: Poly, t) -> Poly:
    """Exact translate ``p(z - t)``."""
    if isinstance(t, (str, Fraction)) or _is_rational(t):
        t = QQ(t)
    return p.compose_linear(QQ(1), -t)


# ---------------------------------------------------------------------------
# determinants and Wronskians
# ---------------------------------------------------------------------------

def _det_bareiss(m):
    """Fraction-free Bareiss elimination over a field-coefficient polynomial ring."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = Poly((1,))
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Poly()
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev) if prev.degree > 0 else num * (1 / prev.lc)
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def _det_expand(m):
    """Division-free determinant by memoized Laplace expansion along rows."""
    n = len(m)
    # minors[cols] = det of rows (n-len(cols)..n-1) restricted to cols
    minors = {(): Poly((1,))}
    for size in range(1, n + 1):
        row = n - size
        new = {}
        for cols in combinations(range(n), size):
            acc = Poly()
            for pos, c in enumerate(cols):
                entry = m[row][c]
                if not entry:
                    continue
                rest = cols[:pos] + cols[pos + 1:]
                term = entry * minors[rest]
                acc = acc - term if pos % 2 else acc + term
            new[cols] = acc
        minors = new
    return minors[tuple(range(n))]


def determinant(matrix) -> Poly:
    """Exact determinant of a square matrix of :class:`Poly` (or scalar) entries."""
    m = [[e if isinstance(e, Poly) else Poly((e,)) for e in row] for row in matrix]
    if not m:
        return Poly((1,))
    field = all(
        all(_is_rational(c) or isinstance(c, QQi) for c in e.coeffs)
        for row in m for e in row
    )
    return _det_bareiss(m) if field else _det_expand(m)


def wronskian(fs) -> Poly:
    """Wronskian ``det[f_j^{(i)}]`` of a non-empty list of polynomials."""
    if not fs:
        raise ValueError("wronskian of an empty list")
    n = len(fs)
    rows = []
    cur = list(fs)
    for _ in range(n):
        rows.append(cur)
        cur = [f.derivative() for f in cur]
    return determinant(rows)


# ---------------------------------------------------------------------------
# gcd and resultants
# ---------------------------------------------------------------------------

def _primitive_int(p: Poly):
    """Scale a rational polynomial to a primitive integer coefficient list."""
    den = reduce(gmpy2.lcm, (c.denominator for c in p.coeffs), mpz(1))
    ints = [mpz(c * den) for c in p.coeffs]
    g = reduce(gmpy2.gcd, ints, mpz(0))
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _int_prem(a, b):
    """Pseudo-remainder of integer coefficient lists (ascending)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and any(r):
        lr = r[-1]
        shift_ = len(r) - 1 - db
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[shift_ + j] -= lr * b[j]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        mult = lb ** e
        r = [x * mult for x in r]
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two rational polynomials via the subresultant PRS.

    Both inputs are first scaled to primitive integer polynomials; the
    remainder sequence stays in ``Z[z]`` and the final remainder is made
    primitive and monic.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("undefined gcd: both inputs are zero")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if not (a.is_rational() and b.is_rational()):
        return _euclid_gcd(a, b)
    f, g = _primitive_int(a), _primitive_int(b)
    if len(f) < len(g):
        f, g = g, f
    if len(g) == 1:
        return Poly((1,))
    # subresultant PRS on primitive integer polynomials
    gs, h = mpz(1), mpz(1)
    while True:
        delta = len(f) - len(g)
        r = _int_prem(f, g)
        if not r:
            break
        if len(r) == 1:
            return Poly((1,))
        div = gs * h ** delta
        f, g = g, [x // div for x in r]
        gs = f[-1]
        h = gs ** delta // h ** (delta - 1) if delta >= 1 else h
    cont = reduce(gmpy2.gcd, g, mpz(0))
    return Poly(tuple(mpq(c, cont) for c in g)).monic()


def _euclid_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def sylvester_resultant(a: Poly, b: Poly):
    """Exact resultant as the determinant of the Sylvester matrix (oracle path)."""
    m, n = a.degree, b.degree
    if m < 0 or n < 0:
        return QQ(0)
    size = m + n
    if size == 0:
        return QQ(1)
    rows = []
    ac = list(reversed(a.coeffs))
    bc = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([QQ(0)] * i + ac + [QQ(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([QQ(0)] * i + bc + [QQ(0)] * (size - n - 1 - i))
    d = determinant(rows)
    return d[0]


def resultant(a: Poly, b: Poly):
    """Exact resultant over a field by the Euclidean recurrence."""
    return _res_euclid(list(a.coeffs), list(b.coeffs), lambda x: 1 / x, lambda x: x)


def _res_euclid(a, b, inv, red):
    """Resultant by Euclidean remainders; ``inv``/``red`` supply the field."""
    def strip(p):
        while p and not red(p[-1]):
            p.pop()
        return p

    a, b = strip(list(a)), strip(list(b))
    if not a or not b:
        return red(0)
    res = red(1)
    while True:
        m, n = len(a) - 1, len(b) - 1
        if n == 0:
            return red(res * pow_(b[0], m, red))
        # remainder of a modulo b
        r = list(a)
        ib = inv(b[-1])
        for k in range(m - n, -1, -1):
            c = red(r[k + n] * ib)
            if c:
                for j in range(n + 1):
                    r[k + j] = red(r[k + j] - c * b[j])
        r = strip(r[:n])
        if not r:
            return red(0)
        k = len(r) - 1
        if (m * n) % 2:
            res = -res
        res = red(res * pow_(b[-1], m - k, red))
        a, b = b, r


def pow_(x, e, red):
    out = red(1)
    for _ in range(e):
        out = red(out * x)
    return out


class ModPoly:
    """Helpers for dense polynomials over ``GF(p)`` as plain int lists."""

    @staticmethod
    def reduce(p: Poly, prime: int):
        """Reduce a rational polynomial mod ``prime``; ``None`` if a denominator vanishes."""
        out = []
        for c in p.coeffs:
            den = int(c.denominator) % prime
            if den == 0:
                return None
            out.append(int(c.numerator) * pow(den, -1, prime) % prime)
        return out

    @staticmethod
    def strip(a):
        while a and a[-1] == 0:
            a.pop()
        return a

    @staticmethod
    def derivative(a, prime):
        return ModPoly.strip([(i * a[i]) % prime for i in range(1, len(a))])

    @staticmethod
    def reflect(a, prime):
        return [c if i % 2 == 0 else (-c) % prime for i, c in enumerate(a)]

    @staticmethod
    def mul(a, b, prime):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return ModPoly.strip([x % prime for x in out])

    @staticmethod
    def resultant(a, b, prime):
        return _res_euclid(a, b, lambda x: pow(int(x), -1, prime), lambda x: int(x) % prime)


def word_primes(count: int = 4, bits: int = 63):
    """The ``count`` largest primes below ``2**bits``, in decreasing order."""
    out = []
    p = mpz(2) ** bits
    while len(out) < count:
        p = gmpy2.prev_prime(p)
        out.append(int(p))
    return out


def resultant_mod_primes(a: Poly, b: Poly, primes):
    """Resultant of ``a`` and ``b`` reduced modulo each usable prime.

    A prime is unusable when it divides a coefficient denominator or either
    leading coefficient (the degree would drop). Returns a list of
    ``(prime, residue)`` pairs in input order; raises ``ValueError`` when no
    prime is usable.
    """
    out = []
    for pr in primes:
        am, bm = ModPoly.reduce(a, pr), ModPoly.reduce(b, pr)
        if am is None or bm is None:
            continue
        if len(ModPoly.strip(list(am))) != len(a.coeffs) or len(ModPoly.strip(list(bm))) != len(b.coeffs):
            continue
        out.append((pr, ModPoly.resultant(am, bm, pr)))
    if not out:
        raise ValueError("no usable primes")
    return out


# ---------------------------------------------------------------------------
# numeric evaluation and serialization
# ---------------------------------------------------------------------------

def _to_mp(c):
    if isinstance(c, QQi):
        return c.to_mpc()
    c = QQ(c)
    return mpmath.mpf(int(c.numerator)) / int(c.denominator)


def eval_complex(p: Poly, z, precision_bits: int = 128):
    """Horner evaluation of ``p`` at ``z`` with a running rounding-error bound.

    Returns ``(value, err)`` where ``err`` bounds the absolute rounding error
    of the computed value (Higham's running bound for Horner's scheme).
    """
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    with mpmath.workprec(precision_bits):
        z = mpmath.mpc(z)
        az = abs(z)
        acc = mpmath.mpc(0)
        bound = mpmath.mpf(0)
        for c in reversed(p.coeffs):
            acc = acc * z + _to_mp(c)
            bound = bound * az + abs(acc)
        u = mpmath.ldexp(1, -precision_bits + 1)
        err = u * (2 * bound - abs(acc)) * 4
        return +acc, +err


def _coeff_str(c) -> str:
    c = QQ(c)
    return f"{c.numerator}/{c.denominator}"


def poly_to_json(p: Poly) -> list:
    """Ascending ``"numerator/denominator"`` strings (rational coefficients only)."""
    return [_coeff_str(c) for c in p.coeffs]


def poly_from_json(data) -> Poly:
    if isinstance(data, str):
        data = json.loads(data)
    return Poly(tuple(QQ(s) for s in data))
