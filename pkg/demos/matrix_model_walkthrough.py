"""The completed algebra as matrices, step by step, on I2(4).

Picks a base point on a mirror, builds the truncated matrix model over the
stabilizer, checks the defining relations and the rank ledger, and finishes
with the full zero-dimensional-leaf report.
"""

from fractions import Fraction

from cherednik import (
    Algebra,
    CentralizerModel,
    cuspidal_reduction_report,
    dihedral_group,
    dimension_ledger,
    mirror_base_point,
    verify_relations,
)


def main():
    group = dihedral_group(4)
    alg = Algebra(group, [Fraction(0), Fraction(1, 3)])
    s = group.reflections[0].element
    base = mirror_base_point(group, s)
    print("base point:", "(" + ", ".join(v.text() for v in base) + ")")

    model = CentralizerModel(alg, base, 2)
    print(f"stabilizer order {model.sub_group.order}, matrix size {model.r}")

    print()
    print("image of x_1 (diagonal):")
    print(model.image_of_x(0).text())
    print()
    print("image of y_1 (diagonal plus reflection corrections):")
    print(model.image_of_y(0).text())

    records = verify_relations(model)
    failed = [r for r in records if not r["ok"]]
    print()
    print(f"relation residuals checked: {len(records)}, failed: {len(failed)}")

    ledger = dimension_ledger(model)
    print(
        f"rank ledger: parent {ledger['parent_rank']} vs "
        f"matrix model {ledger['matrix_rank']} (equal: {ledger['equal']})"
    )

    print()
    report = cuspidal_reduction_report(alg, order=2)
    print(report.text())


if __name__ == "__main__":
    main()
