"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored in the power basis 1, z, z^2, ..., z^(phi(N)-1) modulo
the N-th cyclotomic polynomial, with Fraction coefficients.  All arithmetic
is exact; there is no floating point anywhere in this package.

A session fixes one conductor N (large enough for every root of unity it
needs) and keeps all scalars in that single field.  Mixing conductors in
arithmetic raises ConductorMismatch instead of coercing silently; moving an
element into a larger field is explicit via ``embed``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = [
    "Rational",
    "Cyclotomic",
    "ConductorMismatch",
    "cyclotomic_polynomial",
    "euler_phi",
    "lcm",
    "parse_scalar",
]

# The spec-level exact rational contract (reduced form, positive denominator,
# arbitrary precision) is exactly what fractions.Fraction provides.
Rational = Fraction


class ConductorMismatch(ValueError):
    pass


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("conductor must be positive")
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out *= (p - 1) * p ** (k - 1)
        p += 1
    if m > 1:
        out *= m - 1
    return out


def _poly_divmod(num, den):
    """Exact division of Fraction coefficient lists (ascending powers)."""
    num = list(num)
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    dlead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / dlead
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


_CYCLO_CACHE: dict[int, tuple[Fraction, ...]] = {}


def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of Phi_n, ascending, monic."""
    if n in _CYCLO_CACHE:
        return _CYCLO_CACHE[n]
    poly = [-Fraction(1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            if any(rem):
                raise AssertionError("cyclotomic division must be exact")
    out = tuple(poly)
    _CYCLO_CACHE[n] = out
    return out


class _FieldData:
    """Per-conductor reduction tables, built once and shared."""

    __slots__ = ("n", "phi", "reduce_rows", "powers", "zero", "one")

    def __init__(self, n: int):
        self.n = n
        phi_poly = cyclotomic_polynomial(n)
        self.phi = len(phi_poly) - 1
        d = self.phi
        # z^(d+i) in basis coordinates, for i = 0 .. d-2 (enough for products)
        rows = []
        top = [-c for c in phi_poly[:d]]  # z^d = -(lower part of Phi)
        rows.append(tuple(top))
        for _ in range(d - 2):
            prev = rows[-1]
            nxt = [Fraction(0)] * d
            for j, c in enumerate(prev):
                if not c:
                    continue
                if j + 1 < d:
                    nxt[j + 1] += c
                else:
                    for k2, r in enumerate(rows[0]):
                        nxt[k2] += c * r
            rows.append(tuple(nxt))
        self.reduce_rows = rows
        # z^j in basis coordinates for j = 0 .. n-1 (conjugation, embedding)
        powers = []
        cur = [Fraction(0)] * d
        cur[0] = Fraction(1)
        for _ in range(n):
            powers.append(tuple(cur))
            nxt = [Fraction(0)] * d
            for j, c in enumerate(cur):
                if not c:
                    continue
                if j + 1 < d:
                    nxt[j + 1] += c
                else:
                    for k2, r in enumerate(rows[0]):
                        nxt[k2] += c * r
            cur = nxt
        self.powers = powers


_FIELDS: dict[int, _FieldData] = {}


def _field(n: int) -> _FieldData:
    f = _FIELDS.get(n)
    if f is None:
        f = _FieldData(n)
        _FIELDS[n] = f
    return f


class Cyclotomic:
    """An element of Q(zeta_N) in the power basis modulo Phi_N."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs):
        f = _field(conductor)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != f.phi:
            raise ValueError(
                f"need {f.phi} coefficients for conductor {conductor}, got {len(coeffs)}"
            )
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Cyclotomic is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def _raw(conductor: int, coeffs: tuple) -> "Cyclotomic":
        """Wrap coefficients already known to be phi(N) exact Fractions."""
        c = object.__new__(Cyclotomic)
        object.__setattr__(c, "conductor", conductor)
        object.__setattr__(c, "coeffs", coeffs)
        object.__setattr__(c, "_hash", None)
        return c

    @staticmethod
    def zero(conductor: int) -> "Cyclotomic":
        f = _field(conductor)
        try:
            return f.zero
        except AttributeError:
            f.zero = Cyclotomic._raw(conductor, (Fraction(0),) * f.phi)
            return f.zero

    @staticmethod
    def one(conductor: int) -> "Cyclotomic":
        f = _field(conductor)
        try:
            return f.one
        except AttributeError:
            f.one = Cyclotomic.from_rational(1, conductor)
            return f.one

    @staticmethod
    def from_rational(q, conductor: int) -> "Cyclotomic":
        f = _field(conductor)
        coeffs = [Fraction(0)] * f.phi
        coeffs[0] = Fraction(q)
        return Cyclotomic._raw(conductor, tuple(coeffs))

    @staticmethod
    def zeta(conductor: int, power: int = 1) -> "Cyclotomic":
        f = _field(conductor)
        return Cyclotomic(conductor, f.powers[power % conductor])

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.conductor != self.conductor:
                raise ConductorMismatch(
                    f"conductor {other.conductor} vs {self.conductor}; embed explicitly"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(other, self.conductor)
        return None

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic._raw(
            self.conductor, tuple(a + b for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.conductor, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic._raw(
            self.conductor, tuple(a - b for a, b in zip(self.coeffs, o.coeffs))
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = _field(self.conductor)
        d = f.phi
        a, b = self.coeffs, o.coeffs
        conv = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
        out = conv[:d]
        for i in range(d, 2 * d - 1):
            c = conv[i]
            if c:
                for k, r in enumerate(f.reduce_rows[i - d]):
                    if r:
                        out[k] += c * r
        return Cyclotomic._raw(self.conductor, tuple(out))

    __rmul__ = __mul__

    def inv(self) -> "Cyclotomic":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational:
            return Cyclotomic.from_rational(1 / self.coeffs[0], self.conductor)
        # extended Euclid: u*self + v*Phi = gcd = 1 in Q[x]
        phi_poly = list(cyclotomic_polynomial(self.conductor))
        r0, r1 = phi_poly, list(self.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while any(r1) and len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, s0, r1, s1 = r1, s1, r, s
        if not any(r1):
            raise ZeroDivisionError("element is a zero divisor (conductor wrong?)")
        c = r1[0]
        inv_coeffs = [x / c for x in s1]
        f = _field(self.conductor)
        # s1 may exceed the basis length; fold power by power
        out = [Fraction(0)] * f.phi
        for j, cj in enumerate(inv_coeffs):
            if not cj:
                continue
            if j < f.phi:
                out[j] += cj
            else:
                for k, r in enumerate(f.powers[j % self.conductor]):
                    out[k] += cj * r
        return Cyclotomic(self.conductor, out)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = Cyclotomic.one(self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Cyclotomic":
        """Complex conjugation, zeta -> zeta^(N-1)."""
        f = _field(self.conductor)
        out = [Fraction(0)] * f.phi
        for i, c in enumerate(self.coeffs):
            if c:
                for k, r in enumerate(f.powers[(self.conductor - i) % self.conductor]):
                    out[k] += c * r
        return Cyclotomic(self.conductor, out)

    def embed(self, conductor: int) -> "Cyclotomic":
        """Image under Q(zeta_N) -> Q(zeta_M), zeta_N = zeta_M^(M/N); needs N | M."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ConductorMismatch(
                f"{self.conductor} does not divide {conductor}"
            )
        step = conductor // self.conductor
        f = _field(conductor)
        out = [Fraction(0)] * f.phi
        for i, c in enumerate(self.coeffs):
            if c:
                for k, r in enumerate(f.powers[(i * step) % conductor]):
                    out[k] += c * r
        return Cyclotomic(conductor, out)

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.conductor, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return not self.is_zero

    # -- presentation ------------------------------------------------------

    def __repr__(self):
        return self.text()

    def text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = f"z{self.conductor}" + (f"^{i}" if i > 1 else "")
                if c == 1:
                    parts.append(z)
                elif c == -1:
                    parts.append(f"-{z}")
                else:
                    parts.append(f"{c}*{z}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self):
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(data) -> "Cyclotomic":
        return Cyclotomic(data["conductor"], [Fraction(c) for c in data["coeffs"]])


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] += ai
    for i, bi in enumerate(b):
        out[i] -= bi
    return out


# -- scalar string grammar --------------------------------------------------
#
#   scalar  := term (('+'|'-') term)*
#   term    := rational ['*' zpart] | zpart
#   zpart   := 'z' INT ['^' INT]
#   rational:= INT ['/' INT]
#
# e.g. "1/2*z6^2 + 3", "-z4", "2/3".


def parse_scalar(text: str, conductor: int | None = None) -> Cyclotomic:
    """Parse a cyclotomic scalar string.

    If ``conductor`` is given the result lives in that field (conductors in
    the text must divide it); otherwise the smallest common field is used.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    # split into signed terms
    terms: list[tuple[int, str]] = []
    sign, buf = 1, ""
    i = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    while i < len(s):
        ch = s[i]
        if ch in "+-":
            if not buf:
                raise ValueError(f"bad scalar syntax: {text!r}")
            terms.append((sign, buf))
            sign, buf = (-1 if ch == "-" else 1), ""
        else:
            buf += ch
        i += 1
    if not buf:
        raise ValueError(f"bad scalar syntax: {text!r}")
    terms.append((sign, buf))

    parsed = []  # (sign, Fraction, [(conductor, power), ...])
    conductors = []
    for sgn, term in terms:
        coef = Fraction(1)
        zs: list[tuple[int, int]] = []
        for factor in term.split("*"):
            if not factor:
                raise ValueError(f"bad scalar syntax: {text!r}")
            if factor[0] == "z":
                body = factor[1:]
                if "^" in body:
                    nstr, pstr = body.split("^", 1)
                    zn, zp = int(nstr), int(pstr)
                else:
                    zn, zp = int(body), 1
                if zn < 1:
                    raise ValueError(f"bad root of unity in {text!r}")
                zs.append((zn, zp))
                conductors.append(zn)
            else:
                coef *= Fraction(factor)
        parsed.append((sgn, coef, zs))

    target = conductor if conductor is not None else (lcm(*conductors) if conductors else 1)
    out = Cyclotomic.zero(target)
    for sgn, coef, zs in parsed:
        piece = Cyclotomic.from_rational(coef, target)
        for zn, zp in zs:
            if target % zn:
                raise ConductorMismatch(f"z{zn} does not live in conductor {target}")
            piece = piece * Cyclotomic.zeta(target, (target // zn) * zp)
        out = out + sgn * piece
    return out
