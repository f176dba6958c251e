"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Values are sparse integer-exponent polynomials in zeta_N = exp(2*pi*i/N) with
rational (gmpy2.mpq) coefficients, reduced mod Phi_N only on demand so that
bulk arithmetic stays termwise.  q = zeta_N^B where N = l*B, so q^(a/b) is
exact whenever b divides the session's denominator bound B.
"""
from __future__ import annotations

import cmath
from math import gcd as _igcd

from gmpy2 import mpq

# Rational type used across the package: gmpy2.mpq (exact, hashable, fast).
Rational = mpq


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def rat_mod(x, m) -> mpq:
    """Canonical representative of x modulo m, in [0, m)."""
    x = mpq(x)
    m = mpq(m)
    t = x / m
    return x - m * (t.numerator // t.denominator)


def primitive_scale(vals) -> dict:
    """Rescale {key: Cyc} by one positive rational to coprime integer form.

    Keeps elimination intermediates small: every value ends up with den 1
    and the integer coefficients across the whole collection share no
    common factor.  Returns a new dict; zero values are dropped.
    """
    items = [(k, v) for k, v in vals.items() if v.c]
    if not items:
        return {}
    N = items[0][1].N
    L = 1
    for _, v in items:
        L = L // _igcd(L, v.den) * v.den
    g = 0
    scaled = []
    for k, v in items:
        m = L // v.den
        c = {e: w * m for e, w in v.c.items()}
        scaled.append((k, c))
        for w in c.values():
            g = _igcd(g, w)
    out = {}
    for k, c in scaled:
        if g > 1:
            c = {e: w // g for e, w in c.items()}
        out[k] = Cyc._raw(N, c, 1)
    return out


# ---------------------------------------------------------------------------
# cyclotomic polynomials, as sparse {exponent: int} dicts

_PHI_CACHE: dict[int, dict[int, int]] = {}


def _poly_divide_exact(num: dict[int, int], den: dict[int, int]) -> dict[int, int]:
    """Exact division of sparse integer polynomials (remainder must be 0)."""
    num = dict(num)
    dd = max(den)
    lead = den[dd]
    out: dict[int, int] = {}
    while num:
        dn = max(num)
        if dn < dd:
            break
        c, r = divmod(num[dn], lead)
        assert r == 0
        out[dn - dd] = c
        for e, a in den.items():
            k = dn - dd + e
            v = num.get(k, 0) - c * a
            if v:
                num[k] = v
            else:
                num.pop(k, None)
    assert not num, "inexact polynomial division"
    return out


def cyclotomic_poly(n: int) -> dict[int, int]:
    """Sparse integer coefficients of Phi_n."""
    if n in _PHI_CACHE:
        return _PHI_CACHE[n]
    rad = 1
    m = n
    for p in range(2, m + 1):
        if p * p > m:
            break
        if m % p == 0:
            rad *= p
            while m % p == 0:
                m //= p
    if m > 1:
        rad *= m
    if rad != n:
        base = cyclotomic_poly(rad)
        phi = {e * (n // rad): c for e, c in base.items()}
    else:
        phi = {n: 1, 0: -1}
        for d in range(1, n):
            if n % d == 0:
                phi = _poly_divide_exact(phi, cyclotomic_poly(d))
    _PHI_CACHE[n] = phi
    return phi


def _phi_degree(n: int) -> int:
    return max(cyclotomic_poly(n))


# ---------------------------------------------------------------------------
# field elements


class Cyc:
    """Element of Q(zeta_N), lazily reduced mod Phi_N.

    Stored as an integer polynomial over one common denominator so bulk
    arithmetic runs on GMP integers; rationals appear only at the canon()
    boundary.
    """

    __slots__ = ("N", "c", "den", "_canon")

    def __init__(self, N: int, coeffs: dict, den: int = 1):
        self.N = N
        self._canon: tuple | None = None
        L = 1
        vals = {}
        for e, v in coeffs.items():
            if not isinstance(v, int):
                v = mpq(v)
                d = int(v.denominator)
                L = L // _igcd(L, d) * d
            if v != 0:
                vals[e] = v
        if L == 1:
            self.c = {e: int(v) for e, v in vals.items()}
            self.den = den
        else:
            self.c = {
                e: int(mpq(v).numerator) * (L // int(mpq(v).denominator))
                for e, v in vals.items()
            }
            self.den = den * L
        if self.den != 1:
            self._shrink()

    @staticmethod
    def _raw(N: int, c: dict[int, int], den: int) -> Cyc:
        out = Cyc.__new__(Cyc)
        out.N = N
        out.c = c
        out.den = den
        out._canon = None
        return out._shrink() if den != 1 else out

    def _shrink(self) -> Cyc:
        den = self.den
        if den == 1:
            return self
        if not self.c:
            self.den = 1
            return self
        g = den
        for v in self.c.values():
            g = _igcd(g, v)
            if g == 1:
                return self
        self.c = {e: v // g for e, v in self.c.items()}
        self.den = den // g
        return self

    @staticmethod
    def zero(N: int) -> Cyc:
        return Cyc._raw(N, {}, 1)

    @staticmethod
    def one(N: int) -> Cyc:
        return Cyc._raw(N, {0: 1}, 1)

    @staticmethod
    def from_rational(N: int, r) -> Cyc:
        r = mpq(r)
        if r == 0:
            return Cyc._raw(N, {}, 1)
        return Cyc._raw(N, {0: int(r.numerator)}, int(r.denominator))

    @staticmethod
    def root_power(N: int, k: int) -> Cyc:
        """zeta_N^k."""
        return Cyc._raw(N, {k % N: 1}, 1)

    # -- order management

    def embed(self, M: int) -> Cyc:
        """Embed into Q(zeta_M) for N | M via zeta_N = zeta_M^(M/N)."""
        if M == self.N:
            return self
        assert M % self.N == 0, f"no embedding Q(zeta_{self.N}) -> Q(zeta_{M})"
        s = M // self.N
        return Cyc._raw(M, {e * s: v for e, v in self.c.items()}, self.den)

    @staticmethod
    def _common(a: Cyc, b: Cyc) -> tuple[Cyc, Cyc]:
        if a.N == b.N:
            return a, b
        if b.N % a.N == 0:
            return a.embed(b.N), b
        if a.N % b.N == 0:
            return a, b.embed(a.N)
        raise ValueError(f"incompatible cyclotomic orders {a.N}, {b.N}")

    # -- ring operations

    def __add__(self, other) -> Cyc:
        if isinstance(other, (int, mpq)):
            other = Cyc.from_rational(self.N, other)
        a, b = Cyc._common(self, other)
        da, db = a.den, b.den
        if da == db:
            c = dict(a.c)
            for e, v in b.c.items():
                w = c.get(e, 0) + v
                if w:
                    c[e] = w
                else:
                    c.pop(e, None)
            return Cyc._raw(a.N, c, da)
        g = _igcd(da, db)
        la, lb = db // g, da // g
        c = {e: v * la for e, v in a.c.items()}
        for e, v in b.c.items():
            w = c.get(e, 0) + v * lb
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        return Cyc._raw(a.N, c, da * la)

    __radd__ = __add__

    def __neg__(self) -> Cyc:
        out = Cyc.__new__(Cyc)
        out.N = self.N
        out.c = {e: -v for e, v in self.c.items()}
        out.den = self.den
        out._canon = None
        return out

    def __sub__(self, other) -> Cyc:
        if isinstance(other, (int, mpq)):
            other = Cyc.from_rational(self.N, other)
        return self + (-other)

    def __rsub__(self, other) -> Cyc:
        return (-self) + other

    def __mul__(self, other) -> Cyc:
        if isinstance(other, (int, mpq)):
            v = mpq(other)
            if v == 0:
                return Cyc.zero(self.N)
            num, d = int(v.numerator), int(v.denominator)
            return Cyc._raw(
                self.N, {e: c * num for e, c in self.c.items()}, self.den * d
            )
        a, b = Cyc._common(self, other)
        N = a.N
        out: dict[int, int] = {}
        if len(a.c) > len(b.c):
            a, b = b, a
        for e1, v1 in a.c.items():
            for e2, v2 in b.c.items():
                e = e1 + e2
                if e >= N:
                    e -= N
                w = out.get(e, 0) + v1 * v2
                if w:
                    out[e] = w
                else:
                    out.pop(e, None)
        return Cyc._raw(N, out, a.den * b.den)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Cyc:
        assert k >= 0
        out = Cyc.one(self.N)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- canonical form and equality

    def canon(self) -> tuple:
        """Coefficients (c_0, ..., c_{deg-1}) of the reduction mod Phi_N."""
        if self._canon is not None:
            return self._canon
        N = self.N
        phi = cyclotomic_poly(N)
        deg = max(phi)
        dense = [0] * N
        for e, v in self.c.items():
            dense[e] += v
        for k in range(N - 1, deg - 1, -1):
            cv = dense[k]
            if cv:
                dense[k] = 0
                for e, a in phi.items():
                    if e != deg:
                        dense[k - deg + e] -= cv * a
        den = self.den
        out = tuple(mpq(dense[i], den) for i in range(deg))
        self._canon = out
        if not any(dense[:deg]):
            self.c = {}
            self.den = 1
        return out

    def is_zero(self) -> bool:
        if not self.c:
            return True
        return not any(self.canon())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, mpq)):
            other = Cyc.from_rational(self.N, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        a, b = Cyc._common(self, other)
        return (a - b).is_zero()

    def __hash__(self):
        raise TypeError("Cyc is not hashable; compare canon() tuples instead")

    # -- division

    def inverse(self) -> Cyc:
        """Field inverse, computed in the smallest subfield containing self."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        N = self.N
        g = N
        for e in self.c:
            g = _gcd(g, e)
            if g == 1:
                break
        if g > 1:
            small = Cyc._raw(N // g, {e // g: v for e, v in self.c.items()}, self.den)
            return small.inverse().embed(N)
        if len(self.c) == 1:
            ((e, v),) = self.c.items()
            num, d = (self.den, v) if v > 0 else (-self.den, -v)
            return Cyc._raw(N, {(-e) % N: num}, d)
        inv = _poly_inverse_mod_phi(self.canon(), N)
        return Cyc(N, {e: v for e, v in enumerate(inv) if v != 0})

    def __truediv__(self, other) -> Cyc:
        if isinstance(other, (int, mpq)):
            return self * (1 / mpq(other))
        a, b = Cyc._common(self, other)
        return a * b.inverse()

    def __rtruediv__(self, other) -> Cyc:
        return Cyc.from_rational(self.N, other) / self

    # -- serialization and display

    def to_obj(self) -> dict:
        return {"order": self.N, "coeffs": [str(v) for v in self.canon()]}

    @staticmethod
    def from_obj(obj: dict) -> Cyc:
        N = int(obj["order"])
        return Cyc(N, {e: mpq(s) for e, s in enumerate(obj["coeffs"])})

    def approx(self) -> complex:
        """Float approximation (debugging / display only, never authoritative)."""
        if not self.c:
            return 0j
        z = cmath.exp(2j * cmath.pi / self.N)
        return sum(v * z**e for e, v in self.c.items()) / self.den

    def __repr__(self):
        if not self.c:
            return "Cyc(0)"
        terms = ", ".join(f"z^{e}*{v}" for e, v in sorted(self.c.items()))
        den = f" / {self.den}" if self.den != 1 else ""
        return f"Cyc[{self.N}]({terms}){den}"


def _poly_inverse_mod_phi(coeffs: tuple, N: int) -> list[mpq]:
    """Inverse of a canonical polynomial mod Phi_N by extended Euclid."""
    phi = cyclotomic_poly(N)
    deg = max(phi)
    f = [mpq(phi.get(i, 0)) for i in range(deg + 1)]
    g = [mpq(v) for v in coeffs]
    while g and g[-1] == 0:
        g.pop()
    # invariant: s*phi + t*g_orig = r  (s never needed)
    r0, t0 = f, [mpq(0)]
    r1, t1 = g, [mpq(1)]
    while True:
        while r1 and r1[-1] == 0:
            r1.pop()
        if len(r1) == 1:
            c = 1 / r1[0]
            return [v * c for v in t1] + [mpq(0)] * (deg - len(t1))
        assert r1, "element not invertible mod Phi_N"
        q = _dense_divmod(r0, r1)
        r0, r1 = r1, _dense_sub(r0, _dense_mul(q, r1))
        t0, t1 = t1, _dense_sub(t0, _dense_mul(q, t1))


def _dense_mul(a: list[mpq], b: list[mpq]) -> list[mpq]:
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _dense_sub(a: list[mpq], b: list[mpq]) -> list[mpq]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _dense_divmod(a: list[mpq], b: list[mpq]) -> list[mpq]:
    """Quotient of dense polynomial division (a rewritten in place is avoided)."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [mpq(0)] * max(1, len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            c = c / lead
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    return q


# ---------------------------------------------------------------------------
# root-of-unity session configuration


class RootConfig:
    """Order-l root of unity q with a denominator bound B for exponents.

    All q^(a/b) of a session must have b | B; they live in Q(zeta_N), N = l*B.
    """

    __slots__ = ("l", "lPrime", "denomBound", "N", "_inv_brace1")

    def __init__(self, l: int, denomBound: int = 1):
        if l < 3:
            raise ValueError("l must be at least 3")
        if denomBound < 1:
            raise ValueError("denomBound must be positive")
        self.l = l
        self.lPrime = l if l % 2 else l // 2
        self.denomBound = denomBound
        self.N = l * denomBound
        self._inv_brace1 = None

    def __repr__(self):
        return f"RootConfig(l={self.l}, denomBound={self.denomBound})"

    def zero(self) -> Cyc:
        return Cyc.zero(self.N)

    def one(self) -> Cyc:
        return Cyc.one(self.N)

    def rat(self, r) -> Cyc:
        return Cyc.from_rational(self.N, r)

    def q_power(self, e) -> Cyc:
        """q^e for rational e with denominator dividing denomBound."""
        e = mpq(e)
        b = e.denominator
        if self.denomBound % b != 0:
            raise ValueError(
                f"exponent {e} needs denominator {b} | denomBound={self.denomBound}"
            )
        k = int(e.numerator) * (self.denomBound // int(b))
        return Cyc.root_power(self.N, k)

    def brace(self, x) -> Cyc:
        """{x} = q^x - q^(-x)."""
        x = mpq(x)
        return self.q_power(x) - self.q_power(-x)

    def qint(self, x) -> Cyc:
        """[x] = {x}/{1}; integer x expands without division."""
        x = mpq(x)
        if x.denominator == 1:
            m = int(x)
            if m == 0:
                return self.zero()
            sign = 1
            if m < 0:
                m, sign = -m, -1
            out = Cyc(self.N, {})
            for i in range(m):
                out = out + self.q_power(m - 1 - 2 * i)
            return out * sign if sign < 0 else out
        if self._inv_brace1 is None:
            self._inv_brace1 = self.brace(1).inverse()
        return self.brace(x) * self._inv_brace1

    def qparen(self, n: int) -> Cyc:
        """(n)_q = (1 - q^n)/(1 - q) = 1 + q + ... + q^(n-1)."""
        assert n >= 0
        out = Cyc.zero(self.N)
        for i in range(n):
            out = out + self.q_power(i)
        return out

    def qparen_factorial(self, n: int) -> Cyc:
        """(n)_q! = (1)_q (2)_q ... (n)_q."""
        assert n >= 0
        out = self.one()
        for k in range(1, n + 1):
            out = out * self.qparen(k)
        return out
