"""Invariant rings, coinvariant bases, and the c = 0 leaf census."""

from fractions import Fraction

import pytest

from cherednik.cyclotomic import Cyclotomic
from cherednik.groups import cyclic_group, dihedral_group
from cherednik.invariants import (
    act_poly,
    classical_bracket,
    coinvariant_basis,
    diagonal_act_poly,
    diagonal_invariant_basis,
    express_in_invariants,
    fundamental_invariants,
    leaf_census_c0,
    reynolds,
)
from cherednik.polynomials import MultiPoly
from cherednik.rca import Algebra


class TestFundamentalInvariants:
    @pytest.mark.parametrize("l", [2, 3, 4])
    def test_cyclic_degrees(self, l):
        g = cyclic_group(l)
        fund = fundamental_invariants(g)
        assert [f.degree() for f in fund] == [l]

    @pytest.mark.parametrize("m,degrees", [(3, [2, 3]), (4, [2, 4]), (5, [2, 5]), (6, [2, 6])])
    def test_dihedral_degrees(self, m, degrees):
        g = dihedral_group(m)
        fund = fundamental_invariants(g)
        assert sorted(f.degree() for f in fund) == degrees

    def test_invariance(self):
        g = dihedral_group(4)
        for f in fundamental_invariants(g):
            for w in range(g.order):
                assert act_poly(g, w, f) == f

    def test_y_side(self):
        g = dihedral_group(3)
        for f in fundamental_invariants(g, side="y"):
            for w in range(g.order):
                assert act_poly(g, w, f, side="y") == f

    def test_reynolds_projector(self):
        g = dihedral_group(3)
        N = g.conductor
        x1 = MultiPoly.variable(0, 2, N)
        x2 = MultiPoly.variable(1, 2, N)
        p = x1**2 * x2 + 3 * x1
        rp = reynolds(g, p)
        assert reynolds(g, rp) == rp
        for w in range(g.order):
            assert act_poly(g, w, rp) == rp
        # averaging an invariant is the identity
        f = fundamental_invariants(g)[0]
        assert reynolds(g, f) == f


class TestCoinvariants:
    @pytest.mark.parametrize("make,order", [
        (lambda: cyclic_group(2), 2),
        (lambda: cyclic_group(3), 3),
        (lambda: dihedral_group(3), 6),
        (lambda: dihedral_group(4), 8),
    ])
    def test_monomial_count_is_group_order(self, make, order):
        g = make()
        _, monos = coinvariant_basis(g)
        assert len(monos) == order

    def test_cyclic_basis_explicit(self):
        g = cyclic_group(4)
        _, monos = coinvariant_basis(g)
        assert monos == [(0,), (1,), (2,), (3,)]


class TestDiagonalInvariants:
    def test_invariance(self):
        g = dihedral_group(3)
        basis = diagonal_invariant_basis(g, 3)
        assert basis
        for f in basis:
            for w in range(g.order):
                assert diagonal_act_poly(g, w, f) == f

    def test_pairing_invariant_found(self):
        # sum_i x_i y_i is always a diagonal invariant of degree 2
        g = dihedral_group(4)
        N = g.conductor
        pairing = MultiPoly(
            2 * g.n,
            N,
            {
                (1, 0, 1, 0): Cyclotomic.one(N),
                (0, 1, 0, 1): Cyclotomic.one(N),
            },
        )
        basis = diagonal_invariant_basis(g, 2)
        from cherednik.linalg import Span
        from cherednik.polynomials import monomials_up_to

        monos = monomials_up_to(2 * g.n, 2)
        index = {m: i for i, m in enumerate(monos)}
        span = Span(len(monos), N)
        for f in basis:
            vec = [Cyclotomic.zero(N)] * len(monos)
            for m, c in f.terms.items():
                vec[index[m]] = c
            span.add(vec)
        vec = [Cyclotomic.zero(N)] * len(monos)
        for m, c in pairing.terms.items():
            vec[index[m]] = c
        assert span.contains(vec)


class TestBracketCrossCheck:
    def lift_x(self, p, n):
        return p.substitute([MultiPoly.variable(i, 2 * n, p.conductor) for i in range(n)])

    def lift_y(self, p, n):
        return p.substitute([MultiPoly.variable(n + i, 2 * n, p.conductor) for i in range(n)])

    def pbw_from_diagonal(self, alg, p):
        n = alg.n
        out = alg.zero()
        for m, c in p.terms.items():
            out = out + alg.monomial(m[:n], 0, m[n:], c)
        return out

    def test_engine_matches_classical_at_c0(self):
        g = dihedral_group(3)
        alg = Algebra(g, [0])
        fx = fundamental_invariants(g, "x")
        fy = fundamental_invariants(g, "y")
        n = g.n
        for f in fx:
            for h in fy:
                engine = alg.poisson_bracket(alg.x_poly(f), alg.y_poly(h))
                classical = classical_bracket(self.lift_x(f, n), self.lift_y(h, n), n)
                assert engine == self.pbw_from_diagonal(alg, classical)

    def test_deformation_adds_group_terms_only(self):
        # at c != 0 the bracket of invariant polynomials differs from the
        # classical one by terms supported on the reflections
        g = cyclic_group(2)
        alg = Algebra(g, [Fraction(5, 7)])
        x2 = alg.x(0) * alg.x(0)
        y2 = alg.y(0) * alg.y(0)
        br = alg.poisson_bracket(x2, y2)
        classical = (alg.x(0) * alg.y(0)).scale(4)
        diff = br - classical
        assert all(w != 0 for (_, w, _) in diff.terms)

    def test_classical_bracket_axioms(self):
        N = 4
        n = 2
        f = MultiPoly.variable(0, 2 * n, N) * MultiPoly.variable(2, 2 * n, N)
        g = MultiPoly.variable(1, 2 * n, N) ** 2
        h = MultiPoly.variable(3, 2 * n, N) * MultiPoly.variable(0, 2 * n, N)
        assert classical_bracket(f, g, n) == -classical_bracket(g, f, n)
        jac = (
            classical_bracket(f, classical_bracket(g, h, n), n)
            + classical_bracket(g, classical_bracket(h, f, n), n)
            + classical_bracket(h, classical_bracket(f, g, n), n)
        )
        assert jac.is_zero
        assert classical_bracket(f, g * h, n) == classical_bracket(f, g, n) * h + g * classical_bracket(f, h, n)


class TestExpressInInvariants:
    def test_roundtrip(self):
        g = dihedral_group(4)
        f2, f4 = fundamental_invariants(g)
        p = f2**2 * f4 + 3 * f2 - f4
        expr = express_in_invariants(p, [f2, f4])
        assert expr is not None
        assert expr.substitute([f2, f4]) == p

    def test_non_invariant_rejected(self):
        g = dihedral_group(4)
        fund = fundamental_invariants(g)
        x1 = MultiPoly.variable(0, 2, g.conductor)
        assert express_in_invariants(x1, fund) is None


class TestLeafCensus:
    @pytest.mark.parametrize("l", [2, 3, 4])
    def test_cyclic(self, l):
        reports = leaf_census_c0(cyclic_group(l))
        dims = sorted(r.leaf_dim for r in reports)
        assert dims == [0, 2]
        for r in reports:
            assert r.leaf_dim == r.expected_dim
            assert r.leaf_dim == 2 * (1 - r.parabolic_rank)

    def test_dihedral_four(self):
        reports = leaf_census_c0(dihedral_group(4))
        dims = sorted(r.leaf_dim for r in reports)
        assert dims == [0, 2, 2, 4]
        for r in reports:
            assert r.leaf_dim == r.expected_dim
        sizes = {r.leaf_dim: 0 for r in reports}
        for r in reports:
            sizes[r.leaf_dim] += r.class_size
        assert sizes[4] == 1  # open stratum
        assert sizes[2] == 4  # four mirrors in two classes
        assert sizes[0] == 1  # origin

    def test_dihedral_three(self):
        reports = leaf_census_c0(dihedral_group(3))
        dims = sorted(r.leaf_dim for r in reports)
        assert dims == [0, 2, 4]
        mirror = next(r for r in reports if r.leaf_dim == 2)
        assert mirror.class_size == 3
        assert mirror.parabolic_order == 2
