"""Invariant theory for the reflection action, and the c = 0 leaf census.

Provides Reynolds averaging, fundamental invariants with an exact Jacobian
independence certificate, coinvariant monomial bases, diagonal invariants on
h + h*, and the census of symplectic leaf dimensions of the undeformed
centre, one per conjugacy class of parabolic subgroups.  Points are sampled
deterministically and certified by brute-force stabilizer checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Cyclotomic
from .groebner import IdealBasis
from .groups import Group, Parabolic, parabolic_classes
from .linalg import Span, nullspace, rank
from .polynomials import MultiPoly, monomials_of_degree, monomials_up_to

__all__ = [
    "act_poly",
    "reynolds",
    "fundamental_invariants",
    "coinvariant_basis",
    "diagonal_act_poly",
    "diagonal_invariant_basis",
    "classical_bracket",
    "express_in_invariants",
    "StratumClassReport",
    "leaf_census_c0",
]


def _dual_images(group: Group, w: int, nvars: int, offset: int = 0) -> list[MultiPoly]:
    s = group.action_on_dual(w)
    n = group.n
    out = []
    for i in range(n):
        coeffs = [Cyclotomic.zero(group.conductor)] * nvars
        for j in range(n):
            coeffs[offset + j] = s[j][i]
        out.append(MultiPoly.linear_form(coeffs, group.conductor))
    return out


def _defining_images(group: Group, w: int, nvars: int, offset: int = 0) -> list[MultiPoly]:
    m = group.elements[w]
    n = group.n
    out = []
    for j in range(n):
        coeffs = [Cyclotomic.zero(group.conductor)] * nvars
        for i in range(n):
            coeffs[offset + i] = m[i][j]
        out.append(MultiPoly.linear_form(coeffs, group.conductor))
    return out


def act_poly(group: Group, w: int, p: MultiPoly, side: str = "x") -> MultiPoly:
    """Apply a group element to a polynomial on h (side 'x') or on h* (side 'y')."""
    if side == "x":
        images = _dual_images(group, w, group.n)
    elif side == "y":
        images = _defining_images(group, w, group.n)
    else:
        raise ValueError("side must be 'x' or 'y'")
    return p.substitute(images)


def reynolds(group: Group, p: MultiPoly, side: str = "x") -> MultiPoly:
    """Group-average projection onto the invariants."""
    total = MultiPoly.zero(p.nvars, p.conductor)
    for w in range(group.order):
        total = total + act_poly(group, w, p, side)
    return total * Cyclotomic.from_rational(Fraction(1, group.order), group.conductor)


def _subalgebra_products(found: list[MultiPoly], degrees: list[int], d: int):
    """All products of the found invariants of total degree exactly d."""
    out = []

    def rec(idx: int, remaining: int, acc: MultiPoly):
        if remaining == 0:
            out.append(acc)
            return
        if idx == len(found):
            return
        step = degrees[idx]
        k = 0
        power = acc
        while k * step <= remaining:
            rec(idx + 1, remaining - k * step, power)
            k += 1
            if k * step <= remaining:
                power = power * found[idx]

    if found:
        rec(0, d, MultiPoly.constant(1, found[0].nvars, found[0].conductor))
    return out


def fundamental_invariants(group: Group, side: str = "x", degree_cap: int | None = None) -> list[MultiPoly]:
    """A set of homogeneous generators of the invariant ring, with certificates.

    Searches degree by degree, keeping invariants independent of products of
    the earlier ones.  Verifies the reflection-group facts: the count equals
    the rank, the degree product equals the group order, and the Jacobian
    determinant is nonzero (algebraic independence).
    """
    n, N = group.n, group.conductor
    cap = degree_cap or (group.order + n)
    found: list[MultiPoly] = []
    degrees: list[int] = []
    for d in range(1, cap + 1):
        monos = monomials_of_degree(n, d)
        index = {m: i for i, m in enumerate(monos)}
        sub = Span(len(monos), N)
        for q in _subalgebra_products(found, degrees, d):
            vec = [Cyclotomic.zero(N)] * len(monos)
            for m, c in q.terms.items():
                vec[index[m]] = c
            sub.add(vec)
        inv_span = Span(len(monos), N)
        for m in monos:
            p = reynolds(group, MultiPoly.monomial(m, Cyclotomic.one(N), N), side)
            if p.is_zero:
                continue
            vec = [Cyclotomic.zero(N)] * len(monos)
            for mm, c in p.terms.items():
                vec[index[mm]] = c
            if inv_span.add(vec) and not sub.contains(vec):
                poly = MultiPoly(n, N, {monos[i]: c for i, c in enumerate(vec) if not c.is_zero})
                found.append(poly.monic())
                degrees.append(d)
                vec2 = [poly.monic().coeff(m) for m in monos]
                sub.add(vec2)
        prod = 1
        for k in degrees:
            prod *= k
        if len(found) == n and prod == group.order:
            break
    prod = 1
    for k in degrees:
        prod *= k
    if len(found) != n or prod != group.order:
        raise ArithmeticError("fundamental invariant search failed its census checks")
    jac = _determinant([[f.derivative(j) for j in range(n)] for f in found])
    if jac.is_zero:
        raise ArithmeticError("fundamental invariants are not independent")
    return found


def _determinant(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = None
    for j in range(n):
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * _determinant(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out


def coinvariant_basis(group: Group, side: str = "x") -> tuple[IdealBasis, list[tuple]]:
    """The ideal of positive-degree invariants and the monomial basis mod it.

    The monomial count equals the group order.
    """
    fund = fundamental_invariants(group, side)
    ideal = IdealBasis(fund)
    monos = ideal.std_monomials()
    if len(monos) != group.order:
        raise ArithmeticError("coinvariant dimension differs from the group order")
    return ideal, monos


# -- the doubled space h + h* -------------------------------------------------


def diagonal_act_poly(group: Group, w: int, p: MultiPoly) -> MultiPoly:
    """Action on polynomials in 2n variables: x-block dual, y-block defining."""
    n = group.n
    images = _dual_images(group, w, 2 * n) + _defining_images(group, w, 2 * n, offset=n)
    return p.substitute(images)


def diagonal_reynolds(group: Group, p: MultiPoly) -> MultiPoly:
    total = MultiPoly.zero(p.nvars, p.conductor)
    for w in range(group.order):
        total = total + diagonal_act_poly(group, w, p)
    return total * Cyclotomic.from_rational(Fraction(1, group.order), group.conductor)


def diagonal_invariant_basis(group: Group, max_degree: int) -> list[MultiPoly]:
    """A basis of the invariants of positive degree <= max_degree on h + h*."""
    n, N = group.n, group.conductor
    monos = monomials_up_to(2 * n, max_degree)
    index = {m: i for i, m in enumerate(monos)}
    span = Span(len(monos), N)
    out = []
    for m in monos:
        if sum(m) == 0:
            continue
        p = diagonal_reynolds(group, MultiPoly.monomial(m, Cyclotomic.one(N), N))
        if p.is_zero:
            continue
        vec = [Cyclotomic.zero(N)] * len(monos)
        for mm, c in p.terms.items():
            vec[index[mm]] = c
        if span.add(vec):
            out.append(p)
    return out


def classical_bracket(f: MultiPoly, g: MultiPoly, n: int) -> MultiPoly:
    """Symplectic bracket on C[h + h*]: {f, g} = sum_k df/dx_k dg/dy_k - df/dy_k dg/dx_k.

    Oriented to agree with the operator bracket: {x_i, y_j} = delta_ij.
    """
    out = MultiPoly.zero(f.nvars, f.conductor)
    for k in range(n):
        out = out + f.derivative(k) * g.derivative(n + k)
        out = out - f.derivative(n + k) * g.derivative(k)
    return out


def express_in_invariants(p: MultiPoly, gens: list[MultiPoly]) -> MultiPoly | None:
    """Write p as a polynomial in the given homogeneous generators, or None.

    Returns a polynomial in len(gens) fresh variables whose substitution by
    the generators recovers p exactly.
    """
    from .linalg import solve_linear

    N = p.conductor
    k = len(gens)
    degs = [g.degree() for g in gens]
    if p.is_zero:
        return MultiPoly.zero(k, N)
    maxdeg = p.degree()
    exps = []

    def rec(idx, remaining, acc):
        if idx == k:
            exps.append(tuple(acc))
            return
        e = 0
        while e * degs[idx] <= remaining:
            rec(idx + 1, remaining - e * degs[idx], acc + [e])
            e += 1

    rec(0, maxdeg, [])
    products = []
    for e in exps:
        q = MultiPoly.constant(1, p.nvars, N)
        for i, ei in enumerate(e):
            if ei:
                q = q * gens[i] ** ei
        products.append(q)
    monos = sorted({m for q in products for m in q.terms} | set(p.terms))
    index = {m: i for i, m in enumerate(monos)}
    matrix = [[Cyclotomic.zero(N)] * len(products) for _ in monos]
    for j, q in enumerate(products):
        for m, c in q.terms.items():
            matrix[index[m]][j] = c
    rhs = [p.coeff(m) for m in monos]
    sol = solve_linear(matrix, rhs)
    if sol is None:
        return None
    return MultiPoly(k, N, {e: c for e, c in zip(exps, sol) if not c.is_zero})


# -- leaf census ---------------------------------------------------------------


@dataclass
class StratumClassReport:
    """Census data for one conjugacy class of parabolic subgroups."""

    parabolic_order: int
    parabolic_rank: int
    class_size: int
    leaf_dim: int
    expected_dim: int
    degree_bound: int
    point: tuple
    copoint: tuple

    def as_dict(self) -> dict:
        return {
            "parabolic_order": self.parabolic_order,
            "parabolic_rank": self.parabolic_rank,
            "class_size": self.class_size,
            "leaf_dim": self.leaf_dim,
            "expected_dim": self.expected_dim,
            "degree_bound": self.degree_bound,
            "point": [c.text() for c in self.point],
            "copoint": [c.text() for c in self.copoint],
        }


def _dual_fixed_space(group: Group, members) -> list:
    n, N = group.n, group.conductor
    one, zero = Cyclotomic.one(N), Cyclotomic.zero(N)
    rows = []
    for w in members:
        s = group.action_on_dual(w)
        rows.extend(
            [s[r][c] - (one if r == c else zero) for c in range(n)] for r in range(n)
        )
    if not rows:
        return [[one if i == j else zero for j in range(n)] for i in range(n)]
    return nullspace(rows, conductor=N)


def _certified_pair(group: Group, par: Parabolic, rng: random.Random) -> tuple[list, list]:
    """A point of h^P x (h*)^P whose joint stabilizer is exactly P."""
    n, N = group.n, group.conductor
    zero = Cyclotomic.zero(N)
    basis_h = par.fixed_space
    basis_hstar = _dual_fixed_space(group, par.members)
    target = set(par.members)
    for _ in range(80):
        v = [zero] * n
        for vec in basis_h:
            c = Cyclotomic.from_rational(rng.choice([q for q in range(-9, 10) if q]), N)
            v = [p + c * e for p, e in zip(v, vec)]
        vstar = [zero] * n
        for vec in basis_hstar:
            c = Cyclotomic.from_rational(rng.choice([q for q in range(-9, 10) if q]), N)
            vstar = [p + c * e for p, e in zip(vstar, vec)]
        stab = set()
        for w in range(group.order):
            m = group.elements[w]
            img = [sum((m[r][c] * v[c] for c in range(n)), zero) for r in range(n)]
            if img != v:
                continue
            s = group.action_on_dual(w)
            img2 = [sum((s[r][c] * vstar[c] for c in range(n)), zero) for r in range(n)]
            if img2 == vstar:
                stab.add(w)
        if stab == target:
            return v, vstar
    raise RuntimeError("could not certify a generic point pair for the stratum")


def leaf_census_c0(group: Group, seed: int = 0, max_escalation: int = 4) -> list[StratumClassReport]:
    """Leaf dimensions of the undeformed centre, one report per parabolic class.

    For each class, picks a certified generic point pair on the stratum and
    computes the rank of the matrix of invariant brackets evaluated there,
    raising the invariant degree bound until the rank stabilizes at the
    predicted value or the escalation budget runs out.
    """
    n, N = group.n, group.conductor
    classes = parabolic_classes(group, seed=seed)
    fund = fundamental_invariants(group, "x")
    base_degree = max(f.degree() for f in fund)
    rng = random.Random(seed + 1)
    inv_cache: dict[int, list[MultiPoly]] = {}
    reports = []
    for cls in classes:
        par = cls[0]
        v, vstar = _certified_pair(group, par, rng)
        point = v + vstar
        expected = 2 * (n - par.rank)
        d = base_degree
        leaf_dim = None
        while True:
            gens = inv_cache.get(d)
            if gens is None:
                gens = diagonal_invariant_basis(group, d)
                inv_cache[d] = gens
            grads = [
                [f.derivative(k).evaluate(point) for k in range(2 * n)] for f in gens
            ]
            b = [
                [
                    sum(
                        (
                            grads[i][k] * grads[j][n + k] - grads[i][n + k] * grads[j][k]
                            for k in range(n)
                        ),
                        Cyclotomic.zero(N),
                    )
                    for j in range(len(gens))
                ]
                for i in range(len(gens))
            ]
            leaf_dim = rank(b) if gens else 0
            if leaf_dim == expected or d >= base_degree + max_escalation:
                break
            d += 1
        reports.append(
            StratumClassReport(
                parabolic_order=par.order,
                parabolic_rank=par.rank,
                class_size=len(cls),
                leaf_dim=leaf_dim,
                expected_dim=expected,
                degree_bound=d,
                point=tuple(v),
                copoint=tuple(vstar),
            )
        )
    return reports
