"""Multivariate polynomials over a fixed cyclotomic field.

``MultiPoly`` is a sparse polynomial with exponent-tuple keys and Cyclotomic
coefficients, ordered by degrevlex with x1 < x2 < ... < xn.  It carries the
commutative legs C[h], C[h*] and anything else polynomial in the package.

``TPoly`` is a small dense univariate polynomial in the deformation variable
t; it is the coefficient type of the noncommutative PBW terms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .cyclotomic import Cyclotomic

__all__ = ["MultiPoly", "TPoly", "monomial_key", "monomials_of_degree", "monomials_up_to"]


def monomial_key(expts: tuple[int, ...]):
    """Sort key realizing degrevlex with x1 < ... < xn (larger key = larger monomial).

    Total degree decides first; on ties the monomial whose earliest differing
    exponent is smaller wins (reverse lexicographic from the small end).
    """
    return (sum(expts),) + tuple(-e for e in expts)


def monomials_of_degree(nvars: int, degree: int) -> list[tuple[int, ...]]:
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


class MultiPoly:
    """Sparse exact polynomial in ``nvars`` commuting variables."""

    __slots__ = ("nvars", "conductor", "terms")

    def __init__(self, nvars: int, conductor: int, terms: dict | None = None):
        self.nvars = nvars
        self.conductor = conductor
        self.terms: dict[tuple[int, ...], Cyclotomic] = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero:
                    self.terms[tuple(m)] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int, conductor: int) -> "MultiPoly":
        return MultiPoly(nvars, conductor)

    @staticmethod
    def constant(value, nvars: int, conductor: int) -> "MultiPoly":
        c = value if isinstance(value, Cyclotomic) else Cyclotomic.from_rational(value, conductor)
        return MultiPoly(nvars, conductor, {(0,) * nvars: c})

    @staticmethod
    def variable(i: int, nvars: int, conductor: int) -> "MultiPoly":
        m = [0] * nvars
        m[i] = 1
        return MultiPoly(nvars, conductor, {tuple(m): Cyclotomic.one(conductor)})

    @staticmethod
    def monomial(expts, coeff: Cyclotomic, conductor: int) -> "MultiPoly":
        return MultiPoly(len(expts), conductor, {tuple(expts): coeff})

    @staticmethod
    def linear_form(coeffs: Iterable[Cyclotomic], conductor: int) -> "MultiPoly":
        coeffs = list(coeffs)
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if not c.is_zero:
                m = [0] * n
                m[i] = 1
                terms[tuple(m)] = c
        return MultiPoly(n, conductor, terms)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly(
            self.nvars, self.conductor, {m: c for m, c in self.terms.items() if sum(m) == d}
        )

    def leading(self) -> tuple[tuple[int, ...], Cyclotomic]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=monomial_key)
        return m, self.terms[m]

    def monic(self) -> "MultiPoly":
        _, c = self.leading()
        return self.scale(c.inv())

    def coeff(self, expts) -> Cyclotomic:
        return self.terms.get(tuple(expts), Cyclotomic.zero(self.conductor))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars or self.conductor != other.conductor:
            raise ValueError("polynomial ring mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = MultiPoly.constant(other, self.nvars, self.conductor)
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m)
            s = c if s is None else s + c
            if s.is_zero:
                terms.pop(m, None)
            else:
                terms[m] = s
        out = MultiPoly(self.nvars, self.conductor)
        out.terms = terms
        return out

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, self.conductor, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = MultiPoly.constant(other, self.nvars, self.conductor)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Cyclotomic) -> "MultiPoly":
        if c.is_zero:
            return MultiPoly.zero(self.nvars, self.conductor)
        return MultiPoly(self.nvars, self.conductor, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Cyclotomic.from_rational(other, self.conductor))
        if isinstance(other, Cyclotomic):
            return self.scale(other)
        self._check(other)
        terms: dict[tuple[int, ...], Cyclotomic] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                s = terms.get(m)
                s = c if s is None else s + c
                if s.is_zero:
                    terms.pop(m, None)
                else:
                    terms[m] = s
        out = MultiPoly(self.nvars, self.conductor)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultiPoly.constant(1, self.nvars, self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = MultiPoly.constant(other, self.nvars, self.conductor)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.conductor == other.conductor
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.conductor, frozenset(self.terms.items())))

    # -- substitution / evaluation ------------------------------------------

    def substitute(self, images: list["MultiPoly"]) -> "MultiPoly":
        """Ring map x_i -> images[i] (all images in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        tgt = images[0] if images else self
        out = MultiPoly.zero(tgt.nvars, tgt.conductor)
        for m, c in self.terms.items():
            piece = MultiPoly.constant(c, tgt.nvars, tgt.conductor)
            for i, e in enumerate(m):
                if e:
                    piece = piece * images[i] ** e
            out = out + piece
        return out

    def evaluate(self, point: list[Cyclotomic]) -> Cyclotomic:
        if len(point) != self.nvars:
            raise ValueError("need one value per variable")
        out = Cyclotomic.zero(self.conductor)
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    v = v * point[i] ** e
            out = out + v
        return out

    def derivative(self, i: int) -> "MultiPoly":
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                m2 = list(m)
                m2[i] -= 1
                terms[tuple(m2)] = c * m[i]
        return MultiPoly(self.nvars, self.conductor, terms)

    # -- presentation ------------------------------------------------------

    def text(self, names: list[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i+1}" for i in range(self.nvars)]
        parts = []
        for m in sorted(self.terms, key=monomial_key, reverse=True):
            c = self.terms[m]
            factors = [
                f"{names[i]}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e
            ]
            body = "*".join(factors)
            cs = c.text()
            if not factors:
                parts.append(f"({cs})" if ("+" in cs or " - " in cs) else cs)
            elif cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append(f"-{body}")
            else:
                wrap = f"({cs})" if ("+" in cs or " - " in cs) else cs
                parts.append(f"{wrap}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = text


class TPoly:
    """Dense univariate polynomial in t with Cyclotomic coefficients."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        self.conductor = conductor
        self.coeffs = tuple(cs)

    @staticmethod
    def zero(conductor: int) -> "TPoly":
        return TPoly(conductor, [])

    @staticmethod
    def const(value, conductor: int) -> "TPoly":
        c = value if isinstance(value, Cyclotomic) else Cyclotomic.from_rational(value, conductor)
        return TPoly(conductor, [c])

    @staticmethod
    def t(conductor: int, power: int = 1) -> "TPoly":
        return TPoly(
            conductor, [Cyclotomic.zero(conductor)] * power + [Cyclotomic.one(conductor)]
        )

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "TPoly") -> "TPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return TPoly(self.conductor, out)

    def __neg__(self):
        return TPoly(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.from_rational(other, self.conductor)
        if isinstance(other, Cyclotomic):
            if other.is_zero:
                return TPoly.zero(self.conductor)
            return TPoly(self.conductor, [c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return TPoly.zero(self.conductor)
        out = [Cyclotomic.zero(self.conductor)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return TPoly(self.conductor, out)

    __rmul__ = __mul__

    def shift_t(self, k: int = 1) -> "TPoly":
        """Multiply by t^k."""
        if self.is_zero:
            return self
        return TPoly(self.conductor, [Cyclotomic.zero(self.conductor)] * k + list(self.coeffs))

    def divide_t(self) -> "TPoly":
        """Exact division by t; raises if the constant term is nonzero."""
        if self.is_zero:
            return self
        if not self.coeffs[0].is_zero:
            raise ValueError("not divisible by t")
        return TPoly(self.conductor, self.coeffs[1:])

    def at_zero(self) -> Cyclotomic:
        """Value at t = 0."""
        return self.coeffs[0] if self.coeffs else Cyclotomic.zero(self.conductor)

    def coeff(self, k: int) -> Cyclotomic:
        return self.coeffs[k] if k < len(self.coeffs) else Cyclotomic.zero(self.conductor)

    def evaluate(self, value: Cyclotomic) -> Cyclotomic:
        out = Cyclotomic.zero(self.conductor)
        for c in reversed(self.coeffs):
            out = out * value + c
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            other = TPoly.const(other, self.conductor)
        if not isinstance(other, TPoly):
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.conductor, self.coeffs))

    def text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            cs = c.text()
            if i == 0:
                parts.append(f"({cs})" if ("+" in cs or " - " in cs) else cs)
            else:
                tp = "t" if i == 1 else f"t^{i}"
                if cs == "1":
                    parts.append(tp)
                elif cs == "-1":
                    parts.append(f"-{tp}")
                else:
                    wrap = f"({cs})" if ("+" in cs or " - " in cs) else cs
                    parts.append(f"{wrap}*{tp}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = text
