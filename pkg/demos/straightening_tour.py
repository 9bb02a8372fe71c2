"""A tour of the normal-form engine and the Poisson centre.

Multiplies a few elements of the deformed skew product for Z/2 and I2(4),
prints their normal forms, finds the grading element, and rediscovers the
defining relation of the rank-one centre.
"""

from fractions import Fraction

from cherednik import Algebra, RankOneCentre, cyclic_group, dihedral_group, fundamental_invariants


def section(title):
    print()
    print(f"== {title} ==")


def main():
    section("Z/2 on one variable, c = 5/7")
    alg = Algebra(cyclic_group(2), [Fraction(5, 7)])
    x, y, s = alg.x(0), alg.y(0), alg.w(1)
    print("y * x       =", (y * x).text())
    print("s * x       =", (s * x).text())
    print("y^2 * x^2   =", (y * y * x * x).text())

    section("the grading element")
    eu, mu, kappas = alg.find_euler()
    print("eu =", eu.text())
    for f in fundamental_invariants(alg.group, side="x"):
        z = alg.x_poly(f)
        bracket = alg.poisson_bracket(eu, z)
        print(f"{{eu, x-invariant of degree {f.degree()}}} =", bracket.text())

    section("the rank-one centre and its discovered relation")
    pres = RankOneCentre(alg)
    print("u  =", pres.u.text())
    print("v  =", pres.v.text())
    print("z0 =", pres.z0.text())
    coeffs = pres.relation()
    print("u*v = " + " + ".join(f"({c.text()}) z0^{k}" for k, c in enumerate(coeffs)))
    table = pres.bracket_table()
    print("{z0,u} =", table["z0,u"].text(), "* u")
    print("{z0,v} =", table["z0,v"].text(), "* v")

    section("I2(4), two reflection classes, c = (1/2, 1/3)")
    alg4 = Algebra(dihedral_group(4), [Fraction(1, 2), Fraction(1, 3)])
    x1, y2 = alg4.x(0), alg4.y(1)
    print("y2 * x1 =", (y2 * x1).text())
    eu4, _, _ = alg4.find_euler()
    print("eu =", eu4.text())


if __name__ == "__main__":
    main()
