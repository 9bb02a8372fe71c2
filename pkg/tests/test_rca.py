"""PBW engine: straightening oracles, grading element, Poisson structure."""

import random
from fractions import Fraction

import pytest

from cherednik.cyclotomic import Cyclotomic
from cherednik.groups import cyclic_group, dihedral_group
from cherednik.polynomials import TPoly
from cherednik.rca import Algebra

C2 = Fraction(5, 7)


@pytest.fixture(scope="module")
def z2():
    return Algebra(cyclic_group(2), [C2])


@pytest.fixture(scope="module")
def z3():
    return Algebra(cyclic_group(3), [Fraction(1, 2), Fraction(1, 3)])


@pytest.fixture(scope="module")
def s3():
    return Algebra(dihedral_group(3), [Fraction(2, 3)])


@pytest.fixture(scope="module")
def d4():
    return Algebra(dihedral_group(4), [Fraction(1, 2), Fraction(3, 5)])


def random_monomial(alg, rng, max_exp=2):
    a = tuple(rng.randint(0, max_exp) for _ in range(alg.n))
    b = tuple(rng.randint(0, max_exp) for _ in range(alg.n))
    w = rng.randrange(alg.group.order)
    coeff = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3))
    return alg.monomial(a, w, b, coeff)


def random_element(alg, rng, nterms=2, max_exp=2):
    out = alg.zero()
    for _ in range(nterms):
        out = out + random_monomial(alg, rng, max_exp)
    return out


class TestRankOneOracles:
    """Hand-computed facts for the order-two group on one variable."""

    def test_commutation_rule(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        lhs = x.commutator(y)
        assert lhs == z2.t() - s.scale(2 * C2)

    def test_straightened_product(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        assert y * x == x * y - z2.t() + s.scale(2 * C2)

    def test_square_commutator(self, z2):
        x, y = z2.x(0), z2.y(0)
        lhs = (x * x).commutator(y)
        assert lhs == (x.scale(2)).scale(TPoly.t(z2.conductor))

    def test_grading_element(self, z2):
        eu, mu, kappas = z2.find_euler()
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        assert mu == Cyclotomic.from_rational(-1, z2.conductor)
        assert kappas == [Cyclotomic.from_rational(-C2, z2.conductor)]
        assert eu == -(x * y) - s.scale(C2)
        assert eu.commutator(x) == x.scale(TPoly.t(z2.conductor))
        assert eu.commutator(y) == -(y.scale(TPoly.t(z2.conductor)))
        assert eu.commutator(s).is_zero

    def test_poisson_squares(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        br = z2.poisson_bracket(x * x, y * y)
        assert br == (x * y).scale(4) + s.scale(4 * C2)

    def test_centre_relation(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        u = x * x
        v = (y * y).scale(4)
        z0 = (x * y).scale(2) + s.scale(2 * C2)
        assert z2.is_central(z0, at_t0=True)
        rel = u * v - (z0 * z0 - z2.scalar(4 * C2 * C2))
        assert rel.at_t0().is_zero

    def test_centre_bracket_table(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        u = x * x
        v = (y * y).scale(4)
        z0 = (x * y).scale(2) + s.scale(2 * C2)
        assert z2.poisson_bracket(u, v) == z0.scale(8)
        assert z2.poisson_bracket(z0, u) == -(u.scale(4))
        assert z2.poisson_bracket(z0, v) == v.scale(4)


class TestEngineStructure:
    def test_identity_neutral(self, d4):
        rng = random.Random(11)
        for _ in range(5):
            m = random_element(d4, rng)
            assert d4.one() * m == m
            assert m * d4.one() == m

    def test_group_multiplication_embeds(self, d4):
        g = d4.group
        for i in range(g.order):
            for j in range(g.order):
                assert d4.w(i) * d4.w(j) == d4.w(g.mult[i][j])

    def test_group_conjugates_x(self, d4):
        from cherednik.polynomials import MultiPoly

        g = d4.group
        for k in range(g.order):
            s = g.action_on_dual(k)
            for i in range(d4.n):
                conj = d4.w(k) * d4.x(i) * d4.w(g.inv[k])
                form = MultiPoly.linear_form([s[r][i] for r in range(d4.n)], d4.conductor)
                assert conj == d4.x_poly(form)

    def test_group_conjugates_y(self, d4):
        from cherednik.polynomials import MultiPoly

        g = d4.group
        for k in range(g.order):
            m = g.elements[k]
            for j in range(d4.n):
                conj = d4.w(k) * d4.y(j) * d4.w(g.inv[k])
                form = MultiPoly.linear_form([m[r][j] for r in range(d4.n)], d4.conductor)
                assert conj == d4.y_poly(form)

    def test_xs_commute_ys_commute(self, d4):
        assert d4.x(0).commutator(d4.x(1)).is_zero
        assert d4.y(0).commutator(d4.y(1)).is_zero
        p = (d4.x(0) + d4.x(1)) ** 3
        q = (d4.x(1) * d4.x(0)) * d4.x(0)
        assert p.commutator(q).is_zero

    @pytest.mark.parametrize("maker,params", [
        (lambda: cyclic_group(2), [C2]),
        (lambda: cyclic_group(3), [Fraction(1, 2), Fraction(1, 3)]),
        (lambda: dihedral_group(3), [Fraction(2, 3)]),
        (lambda: dihedral_group(4), [Fraction(1, 2), Fraction(3, 5)]),
    ])
    def test_associativity_random(self, maker, params):
        alg = Algebra(maker(), params)
        rng = random.Random(7)
        for _ in range(25):
            e1 = random_monomial(alg, rng)
            e2 = random_monomial(alg, rng)
            e3 = random_monomial(alg, rng)
            assert (e1 * e2) * e3 == e1 * (e2 * e3)

    def test_rescaling_covariance(self):
        """Products over params c and nu*c match after reweighting each t-power.

        The coefficient of an output term with filtration drop 2q is jointly
        homogeneous of degree q in (t, c), so its t^k part picks up nu^(q-k).
        """
        nu = 3
        base = [Fraction(1, 2), Fraction(3, 5)]
        alg1 = Algebra(dihedral_group(4), base)
        alg2 = Algebra(dihedral_group(4), [nu * p for p in base])
        rng = random.Random(23)
        for _ in range(12):
            a1 = tuple(rng.randint(0, 2) for _ in range(2))
            b1 = tuple(rng.randint(0, 2) for _ in range(2))
            a2 = tuple(rng.randint(0, 2) for _ in range(2))
            b2 = tuple(rng.randint(0, 2) for _ in range(2))
            w1 = rng.randrange(8)
            w2 = rng.randrange(8)
            p1 = alg1.monomial(a1, w1, b1) * alg1.monomial(a2, w2, b2)
            p2 = alg2.monomial(a1, w1, b1) * alg2.monomial(a2, w2, b2)
            filt_in = sum(a1) + sum(b1) + sum(a2) + sum(b2)
            assert set(p1.terms) == set(p2.terms)
            for (a, w, b), tau in p1.terms.items():
                drop = filt_in - sum(a) - sum(b)
                assert drop % 2 == 0 and drop >= 0
                q = drop // 2
                tau2 = p2.terms[(a, w, b)]
                for k in range(max(tau.degree(), tau2.degree()) + 1):
                    if not tau.coeff(k).is_zero:
                        assert k <= q
                    assert tau2.coeff(k) == tau.coeff(k) * Fraction(nu) ** (q - k)


class TestGradingElement:
    def test_multi_class_solution(self, z3):
        eu, mu, kappas = z3.find_euler()
        assert mu == Cyclotomic.from_rational(-1, z3.conductor)
        assert len(kappas) == 2
        t = TPoly.t(z3.conductor)
        for i in range(z3.n):
            assert eu.commutator(z3.x(i)) == z3.x(i).scale(t)
            assert eu.commutator(z3.y(i)) == -(z3.y(i).scale(t))

    def test_dihedral_solution(self, d4):
        eu, mu, _ = d4.find_euler()
        assert mu == Cyclotomic.from_rational(-1, d4.conductor)
        t = TPoly.t(d4.conductor)
        for i in range(d4.n):
            assert eu.commutator(d4.x(i)) == d4.x(i).scale(t)
            assert eu.commutator(d4.y(i)) == -(d4.y(i).scale(t))
        for k in d4.group.generator_indices:
            assert eu.commutator(d4.w(k)).is_zero

    def test_poisson_grading(self, z2):
        eu, _, _ = z2.find_euler()
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        u = x * x
        v = (y * y).scale(4)
        z0 = (x * y).scale(2) + s.scale(2 * C2)
        for z, deg in ((u, 2), (v, -2), (z0, 0)):
            assert z2.poisson_bracket(eu, z) == z.scale(deg)

    def test_poisson_grading_dihedral(self, d4):
        eu, _, _ = d4.find_euler()
        sx = d4.x(0) * d4.x(1)
        sy = d4.y(0) * d4.y(1)
        for z, deg in ((sx, 2), (sy, -2)):
            assert d4.poisson_bracket(eu, z) == z.scale(deg)


class TestPoisson:
    def central_set_z2(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        u = x * x
        v = (y * y).scale(4)
        z0 = (x * y).scale(2) + s.scale(2 * C2)
        return [u, v, z0]

    def test_central_certificates(self, z2, d4):
        for z in self.central_set_z2(z2):
            assert z2.is_central(z, at_t0=True)
        sx = d4.x(0) * d4.x(1)
        qx = d4.x(0) ** 4 + d4.x(1) ** 4
        sy = d4.y(0) * d4.y(1)
        assert d4.is_central(sx, at_t0=True)
        assert d4.is_central(qx, at_t0=True)
        assert d4.is_central(sy, at_t0=True)
        assert not d4.is_central(d4.x(0), at_t0=True)

    def test_not_central_rejected(self, z2):
        with pytest.raises(ValueError):
            z2.poisson_bracket(z2.x(0), z2.y(0))

    def test_antisymmetry(self, z2):
        zs = self.central_set_z2(z2)
        for f in zs:
            for g in zs:
                assert z2.poisson_bracket(f, g) == -(z2.poisson_bracket(g, f))

    def test_jacobi(self, z2):
        u, v, z0 = self.central_set_z2(z2)
        total = (
            z2.poisson_bracket(u, z2.poisson_bracket(v, z0))
            + z2.poisson_bracket(v, z2.poisson_bracket(z0, u))
            + z2.poisson_bracket(z0, z2.poisson_bracket(u, v))
        )
        assert total.is_zero

    def test_leibniz(self, z2):
        u, v, z0 = self.central_set_z2(z2)
        lhs = z2.poisson_bracket(u, v * z0)
        rhs = z2.poisson_bracket(u, v) * z0 + v * z2.poisson_bracket(u, z0)
        assert lhs.at_t0() == rhs.at_t0()

    def test_dihedral_axioms(self, d4):
        sx = d4.x(0) * d4.x(1)
        sy = d4.y(0) * d4.y(1)
        eu, _, _ = d4.find_euler()
        assert d4.poisson_bracket(sx, sy) == -(d4.poisson_bracket(sy, sx))
        total = (
            d4.poisson_bracket(sx, d4.poisson_bracket(sy, eu))
            + d4.poisson_bracket(sy, d4.poisson_bracket(eu, sx))
            + d4.poisson_bracket(eu, d4.poisson_bracket(sx, sy))
        )
        assert total.is_zero
        lhs = d4.poisson_bracket(sx, sy * sy)
        rhs = d4.poisson_bracket(sx, sy) * sy + sy * d4.poisson_bracket(sx, sy)
        assert lhs.at_t0() == rhs.at_t0()

    def test_lift_independence(self, z2):
        u, v, z0 = self.central_set_z2(z2)
        rng = random.Random(3)
        t = TPoly.t(z2.conductor)
        for _ in range(5):
            r = random_element(z2, rng)
            shifted = z0 + r.scale(t)
            assert z2.poisson_bracket(shifted, u, check=False) == z2.poisson_bracket(z0, u)

    def test_bracket_divisibility_guard(self, z2):
        with pytest.raises(ValueError):
            z2.poisson_bracket(z2.x(0), z2.y(0), check=False)


class TestText:
    def test_roundtrip_simple(self, d4):
        rng = random.Random(5)
        for _ in range(10):
            e = random_element(d4, rng, nterms=3)
            assert d4.parse(e.text()) == e

    def test_roundtrip_with_t(self, z2):
        x, y, s = z2.x(0), z2.y(0), z2.w(1)
        e = (x * x).scale(TPoly(z2.conductor, [
            Cyclotomic.from_rational(2, z2.conductor),
            Cyclotomic.from_rational(-1, z2.conductor),
        ])) + s.scale(Fraction(1, 2)) - y
        assert z2.parse(e.text()) == e

    def test_parse_handwritten(self, z2):
        e = z2.parse("2*x1^2*[w_1]*y1 - t*x1 + 1/2")
        expect = (
            z2.monomial((2,), 1, (1,), 2)
            - z2.x(0).scale(TPoly.t(z2.conductor))
            + z2.scalar(Fraction(1, 2))
        )
        assert e == expect

    def test_parse_zeta_coefficients(self, z3):
        e = z3.parse("z3*x1 + (1 - t^2)*[w_1]")
        z = Cyclotomic.zeta(3)
        expect = z3.x(0).scale(z) + z3.w(1).scale(
            TPoly(z3.conductor, [
                Cyclotomic.one(z3.conductor),
                Cyclotomic.zero(z3.conductor),
                Cyclotomic.from_rational(-1, z3.conductor),
            ])
        )
        assert e == expect

    def test_zero_text(self, z2):
        assert z2.zero().text() == "0"
        assert z2.parse("0").is_zero
