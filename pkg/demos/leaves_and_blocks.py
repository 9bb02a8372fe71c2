"""Leaf census and block theory for small dihedral groups.

Counts the symplectic leaves of the centre at parameter zero via the
parabolic-class census, then builds the restricted quotient and groups the
irreducibles into families by their central characters.
"""

from fractions import Fraction

from cherednik import (
    Algebra,
    BabyVerma,
    RestrictedAlgebra,
    cm_families,
    cyclic_group,
    dihedral_group,
    irreducible_representations,
    leaf_census_c0,
)


def census(group):
    print(f"-- leaf census for {group.name} at parameter zero --")
    rows = leaf_census_c0(group, seed=0)
    for row in rows:
        print(
            f"parabolic of order {row.parabolic_order:2d} (rank {row.parabolic_rank}), "
            f"class size {row.class_size}: leaf dimension {row.leaf_dim}"
        )
    print()


def blocks(group, params, label):
    print(f"-- restricted quotient for {group.name}, c = {label} --")
    res = RestrictedAlgebra(Algebra(group, params))
    print(f"dimension |W|^3 = {res.dim}")
    for rep in irreducible_representations(group):
        print(f"standard module over {rep.label}: dimension {BabyVerma(res, rep).dim}")
    for family in cm_families(res, mix_seed=0):
        print("family:", "{" + ", ".join(sorted(family)) + "}")
    print()


def main():
    census(dihedral_group(4))
    census(dihedral_group(5))
    census(cyclic_group(4))

    blocks(cyclic_group(2), [Fraction(5, 7)], "5/7")
    blocks(cyclic_group(2), [Fraction(0)], "0")
    blocks(dihedral_group(4), [Fraction(0), Fraction(0)], "(0, 0)")


if __name__ == "__main__":
    main()
