"""The deformed skew group algebra attached to a reflection group.

Elements are kept in normal form: every word is rewritten as a sum of terms
x^a * [w] * y^b with x's on the left, a single group element in the middle
and y's on the right.  The deformation parameter t stays symbolic (TPoly
coefficients); the reflection parameters c are exact scalars, one per
conjugacy class of reflections.

The commutation rule moving a y past an x is

    y_i x_j = x_j y_i - t <y_i, x_j> + sum_s c_s alpha_s(y_i) x_j(alpha_s^vee) s,

with <y_i, x_j> the natural pairing (= delta_ij in coordinates).  All
straightening is memoized per algebra instance.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm

from .cyclotomic import Cyclotomic, parse_scalar
from .groups import Group
from .linalg import solve_linear
from .polynomials import MultiPoly, TPoly, monomial_key

__all__ = ["Algebra", "PBWElement"]


def _zero_tuple(n: int) -> tuple[int, ...]:
    return (0,) * n


def _unit_tuple(n: int, i: int) -> tuple[int, ...]:
    out = [0] * n
    out[i] = 1
    return tuple(out)


class PBWElement:
    """An algebra element in straightened form: sum of x^a [w] y^b terms."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "Algebra", terms: dict | None = None):
        self.algebra = algebra
        self.terms: dict[tuple, TPoly] = {}
        if terms:
            for key, tau in terms.items():
                if not tau.is_zero:
                    self.terms[key] = tau

    # -- basic structure ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, TPoly)):
            other = self.algebra.scalar(other)
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def copy(self) -> "PBWElement":
        return PBWElement(self.algebra, dict(self.terms))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, TPoly)):
            other = self.algebra.scalar(other)
        terms = dict(self.terms)
        for key, tau in other.terms.items():
            cur = terms.get(key)
            val = tau if cur is None else cur + tau
            if val.is_zero:
                terms.pop(key, None)
            else:
                terms[key] = val
        return PBWElement(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, TPoly)):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "PBWElement":
        if isinstance(factor, (int, Fraction)):
            factor = Cyclotomic.from_rational(factor, self.algebra.conductor)
        if isinstance(factor, Cyclotomic):
            factor = TPoly.const(factor, self.algebra.conductor)
        return PBWElement(self.algebra, {k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, TPoly)):
            return self.scale(other)
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, TPoly)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = self.algebra.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def commutator(self, other: "PBWElement") -> "PBWElement":
        return self * other - other * self

    # -- specialization and grading ------------------------------------------

    def at_t0(self) -> "PBWElement":
        """Specialize the deformation parameter t to zero."""
        N = self.algebra.conductor
        return PBWElement(
            self.algebra,
            {k: TPoly.const(v.at_zero(), N) for k, v in self.terms.items()},
        )

    def weights(self) -> set[int]:
        """The set of weights |a| - |b| + 2*(power of t) over all terms."""
        out = set()
        for (a, _, b), tau in self.terms.items():
            base = sum(a) - sum(b)
            for k, c in enumerate(tau.coeffs):
                if not c.is_zero:
                    out.add(base + 2 * k)
        return out

    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError("element is not weight-homogeneous")
        return ws.pop()

    # -- text ----------------------------------------------------------------

    def text(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(
            self.terms,
            key=lambda k: (sum(k[0]) + sum(k[2]), monomial_key(k[0]), k[1], monomial_key(k[2])),
            reverse=True,
        )
        parts = []
        for a, w, b in keys:
            factors = []
            for i, e in enumerate(a):
                if e:
                    factors.append(f"x{i+1}" + (f"^{e}" if e > 1 else ""))
            if w:
                factors.append(f"[w_{w}]")
            for i, e in enumerate(b):
                if e:
                    factors.append(f"y{i+1}" + (f"^{e}" if e > 1 else ""))
            tau = self.terms[(a, w, b)]
            cs = tau.text()
            if not factors:
                parts.append(f"({cs})" if ("+" in cs or " - " in cs) else cs)
                continue
            if cs == "1":
                parts.append("*".join(factors))
            elif cs == "-1":
                parts.append("-" + "*".join(factors))
            else:
                wrap = f"({cs})" if ("+" in cs or " - " in cs) else cs
                parts.append(wrap + "*" + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = text


_FACTOR_X = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_FACTOR_Y = re.compile(r"^y(\d+)(?:\^(\d+))?$")
_FACTOR_W = re.compile(r"^\[w_(\d+)\]$")
_FACTOR_T = re.compile(r"^t(?:\^(\d+))?$")


class Algebra:
    """The deformed skew group algebra of a finite reflection group.

    ``params`` gives the reflection parameter for each reflection class, as a
    list aligned with ``group.reflection_classes`` or a dict indexed by class
    number; entries may be ints, Fractions, Cyclotomics or scalar strings.
    """

    def __init__(self, group: Group, params, conductor: int | None = None):
        nclasses = len(group.reflection_classes)
        if isinstance(params, dict):
            params = [params.get(i, 0) for i in range(nclasses)]
        params = list(params)
        if len(params) != nclasses:
            raise ValueError(f"expected {nclasses} reflection parameters")
        # settle the working conductor before coercing anything
        N = group.conductor if conductor is None else lcm(conductor, group.conductor)
        parsed = []
        for p in params:
            if isinstance(p, str):
                p = parse_scalar(p)
            parsed.append(p)
        for p in parsed:
            if isinstance(p, Cyclotomic):
                N = lcm(N, p.conductor)
        if N != group.conductor:
            group = _embed_group(group, N)
        self.group = group
        self.conductor = N
        self.n = group.n
        self.params = [
            p.embed(N) if isinstance(p, Cyclotomic) else Cyclotomic.from_rational(p, N)
            for p in parsed
        ]
        # per-reflection data in the working field
        self._refl = [
            (
                r.element,
                tuple(x.embed(N) for x in r.alpha),
                tuple(x.embed(N) for x in r.alpha_check),
                self.params[r.class_index],
            )
            for r in group.reflections
        ]
        self._act_x: dict[tuple[int, tuple], dict] = {}
        self._act_y: dict[tuple[int, tuple], dict] = {}
        self._single: dict[tuple[int, tuple], dict] = {}
        self._straight: dict[tuple[tuple, tuple], dict] = {}

    # -- constructors ---------------------------------------------------------

    def zero(self) -> PBWElement:
        return PBWElement(self, {})

    def scalar(self, v) -> PBWElement:
        if isinstance(v, (int, Fraction)):
            v = Cyclotomic.from_rational(v, self.conductor)
        if isinstance(v, Cyclotomic):
            v = TPoly.const(v, self.conductor)
        key = (_zero_tuple(self.n), 0, _zero_tuple(self.n))
        return PBWElement(self, {key: v})

    def one(self) -> PBWElement:
        return self.scalar(1)

    def t(self) -> PBWElement:
        return self.scalar(TPoly.t(self.conductor))

    def x(self, i: int) -> PBWElement:
        key = (_unit_tuple(self.n, i), 0, _zero_tuple(self.n))
        return PBWElement(self, {key: TPoly.const(1, self.conductor)})

    def y(self, i: int) -> PBWElement:
        key = (_zero_tuple(self.n), 0, _unit_tuple(self.n, i))
        return PBWElement(self, {key: TPoly.const(1, self.conductor)})

    def w(self, k: int) -> PBWElement:
        key = (_zero_tuple(self.n), k, _zero_tuple(self.n))
        return PBWElement(self, {key: TPoly.const(1, self.conductor)})

    def monomial(self, a, w: int, b, coeff=1) -> PBWElement:
        if isinstance(coeff, (int, Fraction)):
            coeff = Cyclotomic.from_rational(coeff, self.conductor)
        if isinstance(coeff, Cyclotomic):
            coeff = TPoly.const(coeff, self.conductor)
        return PBWElement(self, {(tuple(a), w, tuple(b)): coeff})

    def x_poly(self, p: MultiPoly) -> PBWElement:
        """Embed a polynomial in the x-variables."""
        zero_b = _zero_tuple(self.n)
        return PBWElement(
            self,
            {(m, 0, zero_b): TPoly.const(c.embed(self.conductor), self.conductor) for m, c in p.terms.items()},
        )

    def y_poly(self, p: MultiPoly) -> PBWElement:
        zero_a = _zero_tuple(self.n)
        return PBWElement(
            self,
            {(zero_a, 0, m): TPoly.const(c.embed(self.conductor), self.conductor) for m, c in p.terms.items()},
        )

    # -- group action tables ----------------------------------------------------

    def act_x_mono(self, w: int, a: tuple) -> dict:
        """Expansion of w.(x^a) as {exponent: coefficient}."""
        if w == 0 or sum(a) == 0:
            return {a: Cyclotomic.one(self.conductor)}
        cached = self._act_x.get((w, a))
        if cached is None:
            s = self.group.action_on_dual(w)
            p = MultiPoly.constant(1, self.n, self.conductor)
            for i, e in enumerate(a):
                if e:
                    form = MultiPoly.linear_form([s[k][i] for k in range(self.n)], self.conductor)
                    p = p * form**e
            cached = dict(p.terms)
            self._act_x[(w, a)] = cached
        return cached

    def act_y_mono(self, w: int, b: tuple) -> dict:
        """Expansion of w.(y^b) as {exponent: coefficient}."""
        if w == 0 or sum(b) == 0:
            return {b: Cyclotomic.one(self.conductor)}
        cached = self._act_y.get((w, b))
        if cached is None:
            m = self.group.elements[w]
            p = MultiPoly.constant(1, self.n, self.conductor)
            for j, e in enumerate(b):
                if e:
                    form = MultiPoly.linear_form([m[k][j] for k in range(self.n)], self.conductor)
                    p = p * form**e
            cached = dict(p.terms)
            self._act_y[(w, b)] = cached
        return cached

    # -- straightening -----------------------------------------------------------

    def straighten_single(self, i: int, a: tuple) -> dict:
        """Normal form of y_i * x^a as {(a', w, b'): TPoly}."""
        if sum(a) == 0:
            return {(a, 0, _unit_tuple(self.n, i)): TPoly.const(1, self.conductor)}
        cached = self._single.get((i, a))
        if cached is not None:
            return cached
        j = next(k for k, e in enumerate(a) if e)
        rest = list(a)
        rest[j] -= 1
        rest = tuple(rest)
        out: dict[tuple, TPoly] = {}

        def accumulate(key, tau):
            cur = out.get(key)
            val = tau if cur is None else cur + tau
            if val.is_zero:
                out.pop(key, None)
            else:
                out[key] = val

        # x_j * (y_i x^rest)
        for (a1, u, b1), tau in self.straighten_single(i, rest).items():
            a2 = list(a1)
            a2[j] += 1
            accumulate((tuple(a2), u, b1), tau)
        # -t <y_i, x_j> x^rest
        if i == j:
            accumulate(
                (rest, 0, _zero_tuple(self.n)),
                TPoly.t(self.conductor) * Cyclotomic.from_rational(-1, self.conductor),
            )
        # + sum_s c_s alpha_s(y_i) x_j(alpha_s^vee) (s.x^rest) s
        for elem, alpha, alpha_check, c in self._refl:
            coeff = c * alpha[i] * alpha_check[j]
            if coeff.is_zero:
                continue
            for a1, xi in self.act_x_mono(elem, rest).items():
                accumulate((a1, elem, _zero_tuple(self.n)), TPoly.const(coeff * xi, self.conductor))
        self._single[(i, a)] = out
        return out

    def straighten(self, b: tuple, a: tuple) -> dict:
        """Normal form of y^b * x^a as {(a', w, b'): TPoly}."""
        if sum(b) == 0 or sum(a) == 0:
            return {(a, 0, b): TPoly.const(1, self.conductor)}
        cached = self._straight.get((b, a))
        if cached is not None:
            return cached
        i = max(k for k, e in enumerate(b) if e)
        b_rest = list(b)
        b_rest[i] -= 1
        b_rest = tuple(b_rest)
        out: dict[tuple, TPoly] = {}
        mult = self.group.mult
        inv = self.group.inv
        for (a1, u, b1), tau in self.straighten_single(i, a).items():
            # y^b_rest * x^a1 u y^b1  =  (y^b_rest x^a1) u y^b1
            for (a2, u2, b2), sigma in self.straighten(b_rest, a1).items():
                # x^a2 u2 (y^b2 u) y^b1 = x^a2 (u2 u) (u^-1 . y^b2) y^b1
                coeff = tau * sigma
                if u == 0:
                    key = (a2, u2, tuple(p + q for p, q in zip(b2, b1)))
                    cur = out.get(key)
                    val = coeff if cur is None else cur + coeff
                    if val.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = val
                    continue
                for b3, eta in self.act_y_mono(inv[u], b2).items():
                    key = (a2, mult[u2][u], tuple(p + q for p, q in zip(b3, b1)))
                    val = coeff * eta
                    cur = out.get(key)
                    val = val if cur is None else cur + val
                    if val.is_zero:
                        out.pop(key, None)
                    else:
                        out[key] = val
        self._straight[(b, a)] = out
        return out

    # -- multiplication -----------------------------------------------------------

    def multiply(self, e1: PBWElement, e2: PBWElement) -> PBWElement:
        if e1.algebra is not self or e2.algebra is not self:
            raise ValueError("elements belong to a different algebra")
        mult = self.group.mult
        inv = self.group.inv
        out: dict[tuple, TPoly] = {}
        for (a1, w1, b1), tau1 in e1.terms.items():
            for (a2, w2, b2), tau2 in e2.terms.items():
                tau = tau1 * tau2
                # x^a1 w1 y^b1 x^a2 w2 y^b2
                for (am, u, bm), sigma in self.straighten(b1, a2).items():
                    coeff0 = tau * sigma
                    # x^a1 (w1 . x^am) (w1 u w2) (w2^-1 . y^bm) y^b2
                    g = mult[mult[w1][u]][w2]
                    for ax, xi in self.act_x_mono(w1, am).items():
                        a_out = tuple(p + q for p, q in zip(a1, ax))
                        c1 = coeff0 * xi
                        for by, eta in self.act_y_mono(inv[w2], bm).items():
                            b_out = tuple(p + q for p, q in zip(by, b2))
                            key = (a_out, g, b_out)
                            val = c1 * eta
                            cur = out.get(key)
                            val = val if cur is None else cur + val
                            if val.is_zero:
                                out.pop(key, None)
                            else:
                                out[key] = val
        return PBWElement(self, out)

    # -- distinguished elements ------------------------------------------------------

    def generators(self) -> list[PBWElement]:
        gens = [self.x(i) for i in range(self.n)]
        gens += [self.y(i) for i in range(self.n)]
        gens += [self.w(k) for k in self.group.generator_indices]
        return gens

    def is_central(self, z: PBWElement, at_t0: bool = False) -> bool:
        """Whether z commutes with the algebra generators (optionally after t -> 0)."""
        for g in self.generators():
            c = z.commutator(g)
            if at_t0:
                c = c.at_t0()
            if not c.is_zero:
                return False
        return True

    def find_euler(self):
        """The grading element: the unique mu * sum_i x_i y_i + sum_cls kappa R_cls
        with [eu, x_j] = t x_j, [eu, y_j] = -t y_j and [eu, w] = 0.

        Returns (eu, mu, kappas).
        """
        n, N = self.n, self.conductor
        p0 = self.zero()
        for i in range(n):
            p0 = p0 + self.x(i) * self.y(i)
        pieces = [p0]
        for cls in self.group.reflection_classes:
            rc = self.zero()
            for r in cls:
                rc = rc + self.w(r.element)
            pieces.append(rc)
        t = TPoly.t(N)
        equations = []  # (list of commutators per piece, rhs element)
        for j in range(n):
            xj = self.x(j)
            equations.append(([p.commutator(xj) for p in pieces], xj.scale(t)))
            yj = self.y(j)
            equations.append(([p.commutator(yj) for p in pieces], yj.scale(-1 * t)))
        for k in self.group.generator_indices:
            wk = self.w(k)
            equations.append(([p.commutator(wk) for p in pieces], self.zero()))
        rows, rhs = [], []
        for comms, target in equations:
            keys = set(target.terms)
            for c in comms:
                keys.update(c.terms)
            for key in sorted(keys):
                degs = [c.terms.get(key, TPoly.zero(N)).degree() for c in comms]
                degs.append(target.terms.get(key, TPoly.zero(N)).degree())
                for k in range(max(degs) + 1):
                    rows.append([c.terms.get(key, TPoly.zero(N)).coeff(k) for c in comms])
                    rhs.append(target.terms.get(key, TPoly.zero(N)).coeff(k))
        sol = solve_linear(rows, rhs)
        if sol is None:
            raise ArithmeticError("no grading element of the expected shape")
        eu = self.zero()
        for coeff, piece in zip(sol, pieces):
            eu = eu + piece.scale(coeff)
        # verify before returning
        for comms, target in equations:
            acc = self.zero()
            for coeff, c in zip(sol, comms):
                acc = acc + c.scale(coeff)
            if acc != target:
                raise ArithmeticError("grading element candidate fails its relations")
        return eu, sol[0], list(sol[1:])

    # -- Poisson structure --------------------------------------------------------

    def poisson_bracket(self, z1: PBWElement, z2: PBWElement, check: bool = True) -> PBWElement:
        """{z1, z2} = ([z1, z2] / t) at t = 0, for elements central at t = 0."""
        if check:
            if not self.is_central(z1, at_t0=True):
                raise ValueError("first argument is not central at t = 0")
            if not self.is_central(z2, at_t0=True):
                raise ValueError("second argument is not central at t = 0")
        comm = z1.commutator(z2)
        N = self.conductor
        out = {}
        for key, tau in comm.terms.items():
            quo = tau.divide_t()  # raises when the commutator is not divisible by t
            val = quo.at_zero()
            if not val.is_zero:
                out[key] = TPoly.const(val, N)
        return PBWElement(self, out)

    # -- text ------------------------------------------------------------------------

    def parse(self, text: str) -> PBWElement:
        """Parse the output of ``PBWElement.text`` (and simple variants)."""
        text = text.strip()
        if text == "0":
            return self.zero()
        out = self.zero()
        for sign, chunk in _split_terms(text):
            a = [0] * self.n
            b = [0] * self.n
            w = None
            coeff = TPoly.const(1, self.conductor)
            for factor in _split_factors(chunk):
                m = _FACTOR_X.match(factor)
                if m:
                    idx = int(m.group(1)) - 1
                    if not 0 <= idx < self.n:
                        raise ValueError(f"variable out of range: {factor}")
                    a[idx] += int(m.group(2) or 1)
                    continue
                m = _FACTOR_Y.match(factor)
                if m:
                    idx = int(m.group(1)) - 1
                    if not 0 <= idx < self.n:
                        raise ValueError(f"variable out of range: {factor}")
                    b[idx] += int(m.group(2) or 1)
                    continue
                m = _FACTOR_W.match(factor)
                if m:
                    if w is not None:
                        raise ValueError("more than one group factor in a term")
                    w = int(m.group(1))
                    if not 0 <= w < self.group.order:
                        raise ValueError(f"group element out of range: {factor}")
                    continue
                m = _FACTOR_T.match(factor)
                if m:
                    coeff = coeff * TPoly.t(self.conductor, int(m.group(1) or 1))
                    continue
                coeff = coeff * self._parse_coeff(factor)
            if sign < 0:
                coeff = -coeff
            out = out + PBWElement(self, {(tuple(a), w or 0, tuple(b)): coeff})
        return out

    def _parse_coeff(self, token: str) -> TPoly:
        token = token.strip()
        if token.startswith("(") and token.endswith(")"):
            inner = token[1:-1]
            total = TPoly.zero(self.conductor)
            for sign, chunk in _split_terms(inner):
                part = TPoly.const(1, self.conductor)
                for factor in _split_factors(chunk):
                    m = _FACTOR_T.match(factor)
                    if m:
                        part = part * TPoly.t(self.conductor, int(m.group(1) or 1))
                    else:
                        part = part * parse_scalar(factor, self.conductor)
                total = total + (part if sign > 0 else -part)
            return total
        return TPoly.const(parse_scalar(token, self.conductor), self.conductor)


def _split_terms(text: str) -> list[tuple[int, str]]:
    """Split a sum into (sign, chunk) pieces, respecting brackets.

    Spaces are stripped first; a +/- at bracket depth zero separates terms
    unless it directly follows an operator or an opening bracket.
    """
    s = text.replace(" ", "")
    out = []
    depth = 0
    i = 0
    sign = 1
    if s and s[0] in "+-":
        sign = 1 if s[0] == "+" else -1
        i = 1
    start = i
    while i < len(s):
        ch = s[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in "+-" and depth == 0 and s[i - 1] not in "*^/(+-":
            out.append((sign, s[start:i]))
            sign = 1 if ch == "+" else -1
            start = i + 1
        i += 1
    if start < len(s):
        out.append((sign, s[start:]))
    return [(sg, ch) for sg, ch in out if ch]


def _split_factors(chunk: str) -> list[str]:
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(chunk):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(chunk[start:i].strip())
            start = i + 1
    out.append(chunk[start:].strip())
    return [f for f in out if f]


def _embed_group(group: Group, conductor: int) -> Group:
    elements = [
        tuple(tuple(c.embed(conductor) for c in row) for row in m) for m in group.elements
    ]
    out = Group(elements, conductor, group.name, family=group.family)
    out.generator_indices = list(group.generator_indices)
    if hasattr(group, "parent_index"):
        out.parent_index = list(group.parent_index)
    return out
