"""Finite complex reflection groups as explicit matrix groups.

A group element is an n x n matrix over a cyclotomic field, stored as a
tuple of tuples so it can be hashed.  The group carries full multiplication
and inverse tables, conjugacy classes, the reflections with their root data
(root alpha in h*, coroot alpha^vee in h, nontrivial eigenvalue), parabolic
subgroup enumeration via mirror intersections, and irreducible
representations for the cyclic and dihedral families.

Conventions: elements act on h = column vectors by the stored matrix, and on
h* by the inverse transpose.  Roots are normalized monic (first nonzero
coordinate 1) and coroots by alpha(alpha^vee) = 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import lcm

from .cyclotomic import Cyclotomic
from .linalg import Span, mat_inverse, nullspace, rank, rref

__all__ = [
    "Group",
    "Reflection",
    "Parabolic",
    "ClassFunction",
    "IrrRep",
    "build_group",
    "cyclic_group",
    "dihedral_group",
    "stabilizer",
    "parabolic_strata",
    "parabolic_classes",
    "ParabolicPoset",
    "conjugate_into",
    "induce_character",
]

_CLOSURE_BOUND = 10_000

Element = tuple  # tuple[tuple[Cyclotomic, ...], ...]


def _freeze(rows) -> Element:
    return tuple(tuple(r) for r in rows)


def _thaw(m: Element) -> list[list[Cyclotomic]]:
    return [list(r) for r in m]


def _mat_mul(a: Element, b: Element) -> Element:
    n = len(a)
    zero = Cyclotomic.zero(a[0][0].conductor)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = zero
            for k in range(n):
                if not a[i][k].is_zero:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def _identity(n: int, conductor: int) -> Element:
    one, zero = Cyclotomic.one(conductor), Cyclotomic.zero(conductor)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Reflection:
    """A reflection element together with its root data."""

    element: int  # index in the parent group
    alpha: tuple  # root in h*, coordinates in the x-basis, monic
    alpha_check: tuple  # coroot in h, normalized by alpha(alpha_check) = 2
    eigenvalue: Cyclotomic  # nontrivial eigenvalue on h*
    class_index: int  # reflection-class index (conjugacy class, restricted)


class Group:
    """A finite matrix group with precomputed tables."""

    def __init__(self, elements: list[Element], conductor: int, name: str, family=None, generator_indices=None):
        self.elements = elements
        self.conductor = conductor
        self.name = name
        self.family = family  # ("cyclic", l) or ("dihedral", m) or None
        self.generator_indices = generator_indices or []
        self.n = len(elements[0])
        self.order = len(elements)
        self.index = {m: i for i, m in enumerate(elements)}
        self.mult = [
            [self.index[_mat_mul(a, b)] for b in elements] for a in elements
        ]
        inv = [None] * self.order
        for i in range(self.order):
            inv[i] = self.mult[i].index(0)
        self.inv = inv
        self._classes: list[list[int]] | None = None
        self._class_of: list[int] | None = None
        self._reflections: list[Reflection] | None = None
        self._z_action_x: dict[int, Element] = {}

    # -- structure ---------------------------------------------------------

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mult[j][i]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(
            self.mult[i][j] == self.mult[j][i]
            for i in range(self.order)
            for j in range(i)
        )

    def conjugate(self, w: int, g: int) -> int:
        """w g w^-1."""
        return self.mult[self.mult[w][g]][self.inv[w]]

    @property
    def conjugacy_classes(self) -> list[list[int]]:
        if self._classes is None:
            seen = [False] * self.order
            classes = []
            for g in range(self.order):
                if seen[g]:
                    continue
                orbit = sorted({self.conjugate(w, g) for w in range(self.order)})
                for h in orbit:
                    seen[h] = True
                classes.append(orbit)
            self._classes = classes
            self._class_of = [0] * self.order
            for ci, cls in enumerate(classes):
                for g in cls:
                    self._class_of[g] = ci
        return self._classes

    @property
    def class_of(self) -> list[int]:
        self.conjugacy_classes
        return self._class_of

    # -- actions -----------------------------------------------------------

    def action_on_h(self, i: int) -> Element:
        return self.elements[i]

    def action_on_dual(self, i: int) -> Element:
        """Matrix of w on h* acting on coordinate vectors in the x-basis.

        This is the inverse transpose of the defining matrix, so that
        coordvec(w.x) = S @ coordvec(x); on basis covectors it reads
        w.x_i = sum_j (M^-1)[i][j] x_j.
        """
        cached = self._z_action_x.get(i)
        if cached is None:
            minv = _thaw(self.elements[self.inv[i]])
            cached = _freeze([[minv[j][k] for j in range(self.n)] for k in range(self.n)])
            self._z_action_x[i] = cached
        return cached

    # -- reflections -------------------------------------------------------

    def is_reflection(self, i: int) -> bool:
        if i == 0:
            return False
        m = self.elements[i]
        one = Cyclotomic.one(self.conductor)
        zero = Cyclotomic.zero(self.conductor)
        shifted = [[m[r][c] - (one if r == c else zero) for c in range(self.n)] for r in range(self.n)]
        return rank(shifted) == 1

    @property
    def reflections(self) -> list[Reflection]:
        if self._reflections is None:
            refl_elems = [i for i in range(1, self.order) if self.is_reflection(i)]
            refl_set = set(refl_elems)
            # group by conjugacy class, classes ordered by smallest member
            by_class: dict[int, list[int]] = {}
            for i in refl_elems:
                by_class.setdefault(self.class_of[i], []).append(i)
            class_order = sorted(by_class, key=lambda ci: min(by_class[ci]))
            class_rank = {ci: k for k, ci in enumerate(class_order)}
            out = []
            one = Cyclotomic.one(self.conductor)
            zero = Cyclotomic.zero(self.conductor)
            for i in refl_elems:
                s_dual = self.action_on_dual(i)  # action on h*
                shifted = [
                    [s_dual[r][c] - (one if r == c else zero) for c in range(self.n)]
                    for r in range(self.n)
                ]
                # image of (s - 1) on h*: any nonzero column
                col = next(
                    [shifted[r][c] for r in range(self.n)]
                    for c in range(self.n)
                    if any(not shifted[r][c].is_zero for r in range(self.n))
                )
                lead = next(x for x in col if not x.is_zero)
                alpha = [x / lead for x in col]
                # eigenvalue on h* along alpha
                img = [
                    sum((s_dual[r][c] * alpha[c] for c in range(self.n)), zero)
                    for r in range(self.n)
                ]
                pos = next(r for r in range(self.n) if not alpha[r].is_zero)
                lam = img[pos] / alpha[pos]
                # coroot: nonzero column of (M - 1) on h, scaled to alpha(coroot) = 2
                m = self.elements[i]
                mshift = [
                    [m[r][c] - (one if r == c else zero) for c in range(self.n)]
                    for r in range(self.n)
                ]
                ccol = next(
                    [mshift[r][c] for r in range(self.n)]
                    for c in range(self.n)
                    if any(not mshift[r][c].is_zero for r in range(self.n))
                )
                pairing = sum((a * b for a, b in zip(alpha, ccol)), zero)
                if pairing.is_zero:
                    raise ArithmeticError("degenerate root pairing")
                scale = Cyclotomic.from_rational(2, self.conductor) / pairing
                alpha_check = [x * scale for x in ccol]
                out.append(
                    Reflection(
                        element=i,
                        alpha=tuple(alpha),
                        alpha_check=tuple(alpha_check),
                        eigenvalue=lam,
                        class_index=class_rank[self.class_of[i]],
                    )
                )
            self._reflections = out
        return self._reflections

    @property
    def reflection_classes(self) -> list[list[Reflection]]:
        nclasses = 1 + max((r.class_index for r in self.reflections), default=-1)
        out: list[list[Reflection]] = [[] for _ in range(nclasses)]
        for r in self.reflections:
            out[r.class_index].append(r)
        return out

    def hyperplanes(self) -> list[tuple]:
        """Distinct reflection mirrors, each given by its monic root."""
        seen = []
        for r in self.reflections:
            if r.alpha not in seen:
                seen.append(r.alpha)
        return seen

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, members: list[int], name: str | None = None) -> "Group":
        """The subgroup on the given (closed) element indices, with own tables."""
        members = sorted(set(members))
        if 0 not in members:
            raise ValueError("subgroup must contain the identity")
        for a in members:
            for b in members:
                if self.mult[a][b] not in members:
                    raise ValueError("element set is not closed under multiplication")
        elems = [self.elements[i] for i in members]
        sub = Group(elems, self.conductor, name or f"{self.name}-sub{len(members)}")
        sub.parent_index = list(members)
        return sub

    def text(self, i: int) -> str:
        rows = [", ".join(c.text() for c in row) for row in self.elements[i]]
        return "[" + "; ".join(rows) + "]"


def build_group(generators: list, conductor: int, name: str, family=None) -> Group:
    """Close a generating set of matrices into a Group (BFS, identity first)."""
    n = len(generators[0])
    gens = [_freeze(g) for g in generators]
    ident = _identity(n, conductor)
    elements = [ident]
    seen = {ident}
    queue = [ident]
    while queue:
        u = queue.pop(0)
        for g in gens:
            w = _mat_mul(g, u)
            if w not in seen:
                seen.add(w)
                elements.append(w)
                queue.append(w)
                if len(elements) > _CLOSURE_BOUND:
                    raise RuntimeError("group closure exceeded bound")
    group = Group(elements, conductor, name, family=family)
    group.generator_indices = [group.index[g] for g in gens]
    return group


def cyclic_group(order: int) -> Group:
    """Z/order acting on C^1 by the primitive root of unity."""
    if order < 1:
        raise ValueError("order must be positive")
    conductor = order if order > 1 else 1
    z = Cyclotomic.zeta(conductor) if order > 1 else Cyclotomic.one(1)
    return build_group([[[z]]], conductor, f"Z{order}", family=("cyclic", order))


def dihedral_group(m: int) -> Group:
    """Dihedral group of order 2m in its 2-dimensional reflection action."""
    if m < 2:
        raise ValueError("need m >= 2")
    conductor = lcm(2, m)
    z = Cyclotomic.zeta(conductor) ** (conductor // m)
    one, zero = Cyclotomic.one(conductor), Cyclotomic.zero(conductor)
    a = [[z, zero], [zero, z.inv()]]
    b = [[zero, one], [one, zero]]
    return build_group([a, b], conductor, f"I2({m})", family=("dihedral", m))


# -- class functions and representations ------------------------------------


class ClassFunction:
    """A class function on a group, stored per conjugacy class."""

    def __init__(self, group: Group, values_by_class: list[Cyclotomic]):
        if len(values_by_class) != len(group.conjugacy_classes):
            raise ValueError("one value per conjugacy class required")
        self.group = group
        self.values = list(values_by_class)

    @staticmethod
    def from_element_values(group: Group, values: list[Cyclotomic]) -> "ClassFunction":
        classes = group.conjugacy_classes
        out = []
        for cls in classes:
            v = values[cls[0]]
            for g in cls[1:]:
                if values[g] != v:
                    raise ValueError("values are not constant on conjugacy classes")
            out.append(v)
        return ClassFunction(group, out)

    def value(self, element: int) -> Cyclotomic:
        return self.values[self.group.class_of[element]]

    def inner(self, other: "ClassFunction") -> Cyclotomic:
        total = Cyclotomic.zero(self.group.conductor)
        for cls, v, w in zip(self.group.conjugacy_classes, self.values, other.values):
            total = total + v * w.conj() * len(cls)
        return total / Cyclotomic.from_rational(self.group.order, self.group.conductor)

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and self.group is other.group and self.values == other.values


@dataclass
class IrrRep:
    """An irreducible representation given by one matrix per group element."""

    group: Group
    label: str
    matrices: list[Element]

    @property
    def dim(self) -> int:
        return len(self.matrices[0])

    def character(self) -> ClassFunction:
        values = []
        for m in self.matrices:
            tr = Cyclotomic.zero(self.group.conductor)
            for i in range(len(m)):
                tr = tr + m[i][i]
            values.append(tr)
        return ClassFunction.from_element_values(self.group, values)


def _extend_rep(group: Group, gen_images: dict[int, Element]) -> list[Element]:
    """Extend generator images to the whole group along the Cayley graph."""
    dim = len(next(iter(gen_images.values())))
    images: dict[int, Element] = {0: _identity(dim, group.conductor)}
    queue = [0]
    while queue:
        u = queue.pop(0)
        for g, img in gen_images.items():
            w = group.mult[g][u]
            if w not in images:
                images[w] = _mat_mul(img, images[u])
                queue.append(w)
    if len(images) != group.order:
        raise ValueError("generator images do not generate")
    out = [images[i] for i in range(group.order)]
    for i in range(group.order):
        for j in range(group.order):
            if _mat_mul(out[i], out[j]) != out[group.mult[i][j]]:
                raise ValueError("generator images do not satisfy the relations")
    return out


def _find_cyclic_generator(group: Group) -> int | None:
    for i in range(group.order):
        if group.element_order(i) == group.order:
            return i
    return None


def irreducible_representations(group: Group) -> list[IrrRep]:
    """All irreducibles, for cyclic groups and the dihedral family.

    Works for any group that is abstractly cyclic (whatever its matrix
    realization) and for dihedral groups of order 2m >= 4 presented as
    <r, s | r^m = s^2 = 1, s r s = r^-1>.
    """
    N = group.conductor
    if group.order == 1:
        return [IrrRep(group, "triv", [_identity(1, N)])]
    gen = _find_cyclic_generator(group)
    if gen is not None:
        n = group.order
        M = lcm(N, n)
        if M != N:
            raise ValueError("conductor too small for the characters of this group")
        z = Cyclotomic.zeta(N) ** (N // n)
        # element index -> exponent of the generator
        expo = [None] * n
        j, e = 0, 0
        while expo[j] is None:
            expo[j] = e
            j, e = group.mult[gen][j], e + 1
        reps = []
        for k in range(n):
            mats = [((z ** (expo[i] * k),),) for i in range(n)]
            reps.append(IrrRep(group, f"chi{k}", mats))
        return reps
    # dihedral case
    m = group.order // 2
    if group.order % 2 == 0 and m >= 2:
        r = next((i for i in range(group.order) if group.element_order(i) == m), None)
        s = None
        if r is not None:
            powers = {0}
            j = r
            while j != 0:
                powers.add(j)
                j = group.mult[j][r]
            for i in range(group.order):
                if i not in powers and group.element_order(i) == 2:
                    if group.mult[group.mult[i][r]][i] == group.inv[r]:
                        s = i
                        break
        if r is not None and s is not None:
            if lcm(N, m) != N or lcm(N, 2) != N:
                raise ValueError("conductor too small for the characters of this group")
            z = Cyclotomic.zeta(N) ** (N // m)
            one = Cyclotomic.one(N)
            zero = Cyclotomic.zero(N)
            reps = []
            # linear characters
            if m % 2 == 1:
                linear = [("triv", one, one), ("sgn", one, -one)]
            else:
                linear = [
                    ("triv", one, one),
                    ("sgn", -one, -one),
                    ("sgn_r", -one, one),
                    ("sgn_s", one, -one),
                ]
            for label, rval, sval in linear:
                try:
                    mats = _extend_rep(group, {r: ((rval,),), s: ((sval,),)})
                except ValueError:
                    continue
                reps.append(IrrRep(group, label, mats))
            # two-dimensional representations
            top = (m - 1) // 2 if m % 2 == 1 else m // 2 - 1
            for j in range(1, top + 1):
                rmat = ((z**j, zero), (zero, z ** (m - j)))
                smat = ((zero, one), (one, zero))
                reps.append(IrrRep(group, f"rho{j}", _extend_rep(group, {r: rmat, s: smat})))
            total = sum(rep.dim**2 for rep in reps)
            if total != group.order:
                raise ArithmeticError("representation census incomplete")
            return reps
    raise NotImplementedError(f"no representation table for group {group.name}")


def induce_character(group: Group, sub_members: list[int], chi_values: dict[int, Cyclotomic]) -> ClassFunction:
    """Induced character via the Frobenius formula.

    ``sub_members`` are parent element indices of a subgroup H; ``chi_values``
    maps each of them to the character value of a class function on H.
    """
    hset = set(sub_members)
    values = []
    order_h = len(sub_members)
    for g in range(group.order):
        total = Cyclotomic.zero(group.conductor)
        for w in range(group.order):
            c = group.mult[group.mult[group.inv[w]][g]][w]
            if c in hset:
                total = total + chi_values[c]
        values.append(total / Cyclotomic.from_rational(order_h, group.conductor))
    return ClassFunction.from_element_values(group, values)


# -- parabolic subgroups -----------------------------------------------------


@dataclass
class Parabolic:
    """A parabolic subgroup: the stabilizer of a point of h."""

    group: Group
    members: tuple[int, ...]
    point: tuple
    fixed_space: list  # basis of the pointwise-fixed subspace of h
    rank: int

    @property
    def order(self) -> int:
        return len(self.members)

    def perp_space(self) -> list:
        """Basis of the canonical complement: span of the images of (w - 1) on h."""
        n = self.group.n
        span = Span(n, self.group.conductor)
        one = Cyclotomic.one(self.group.conductor)
        zero = Cyclotomic.zero(self.group.conductor)
        for i in self.members:
            m = self.group.elements[i]
            for c in range(n):
                col = [m[r][c] - (one if r == c else zero) for r in range(n)]
                span.add(col)
        return span.basis()

    def subgroup(self) -> Group:
        return self.group.subgroup(list(self.members))

    def label(self) -> str:
        return f"order{self.order}_rank{self.rank}"


def _pointwise_stabilizer_subspace(group: Group, members) -> list:
    """Basis of the subspace of h fixed pointwise by all listed elements."""
    n = group.n
    one = Cyclotomic.one(group.conductor)
    zero = Cyclotomic.zero(group.conductor)
    rows = []
    for i in members:
        m = group.elements[i]
        rows.extend(
            [m[r][c] - (one if r == c else zero) for c in range(n)] for r in range(n)
        )
    if not rows:
        return [row[:] for row in rref([[one if i == j else zero for j in range(n)] for i in range(n)])[0]]
    return nullspace(rows, conductor=group.conductor)


def stabilizer(group: Group, point: list) -> Parabolic:
    """The stabilizer of a point of h, with its fixed subspace."""
    n = group.n
    members = []
    for i in range(group.order):
        m = group.elements[i]
        img = [
            sum((m[r][c] * point[c] for c in range(n)), Cyclotomic.zero(group.conductor))
            for r in range(n)
        ]
        if img == list(point):
            members.append(i)
    fixed = _pointwise_stabilizer_subspace(group, members)
    return Parabolic(
        group=group,
        members=tuple(members),
        point=tuple(point),
        fixed_space=fixed,
        rank=n - len(fixed),
    )


def _generic_point_in(group: Group, basis: list, rng: random.Random) -> list:
    n = group.n
    zero = Cyclotomic.zero(group.conductor)
    if not basis:
        return [zero] * n
    point = [zero] * n
    for v in basis:
        c = Cyclotomic.from_rational(rng.choice([q for q in range(-9, 10) if q]), group.conductor)
        point = [p + c * x for p, x in zip(point, v)]
    return point


def parabolic_strata(group: Group, seed: int = 0) -> list[Parabolic]:
    """One parabolic per mirror-intersection subspace of h.

    For each subset of mirrors, intersect the hyperplanes, pick a generic
    point of the intersection (deterministic, seeded), and certify that its
    stabilizer fixes the whole subspace pointwise — resampling on failure.
    """
    rng = random.Random(seed)
    mirrors = group.hyperplanes()
    n = group.n
    # collect distinct intersection subspaces, keyed by canonical rref rows
    flats: dict[tuple, list] = {}
    for mask in range(1 << len(mirrors)):
        rows = [list(mirrors[i]) for i in range(len(mirrors)) if mask >> i & 1]
        if rows:
            basis = nullspace(rows, conductor=group.conductor)
        else:
            one, zero = Cyclotomic.one(group.conductor), Cyclotomic.zero(group.conductor)
            basis = [[one if i == j else zero for j in range(n)] for i in range(n)]
        if basis:
            key = tuple(tuple(r) for r in rref(basis)[0][: len(basis)])
        else:
            key = ()
        flats.setdefault(key, basis)
    out = []
    for basis in flats.values():
        for _ in range(60):
            point = _generic_point_in(group, basis, rng)
            par = stabilizer(group, point)
            # genericity certificate: the stabilizer must fix the flat pointwise
            ok = True
            for i in par.members:
                m = group.elements[i]
                for v in basis:
                    img = [
                        sum((m[r][c] * v[c] for c in range(n)), Cyclotomic.zero(group.conductor))
                        for r in range(n)
                    ]
                    if img != list(v):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append(par)
                break
        else:
            raise RuntimeError("could not certify a generic point on a stratum")
    out.sort(key=lambda p: (p.rank, p.order, p.members))
    return out


def conjugate_into(group: Group, a_members, b_members) -> bool:
    """True when some conjugate of subgroup A lies inside subgroup B."""
    bset = set(b_members)
    for w in range(group.order):
        wi = group.inv[w]
        if all(group.mult[group.mult[w][a]][wi] in bset for a in a_members):
            return True
    return False


def parabolic_classes(group: Group, seed: int = 0) -> list[list[Parabolic]]:
    """Parabolic strata grouped into conjugacy classes of subgroups."""
    strata = parabolic_strata(group, seed=seed)
    classes: list[list[Parabolic]] = []
    for par in strata:
        for cls in classes:
            rep = cls[0]
            if (
                rep.order == par.order
                and conjugate_into(group, par.members, rep.members)
                and conjugate_into(group, rep.members, par.members)
            ):
                cls.append(par)
                break
        else:
            classes.append([par])
    return classes


class ParabolicPoset:
    """Conjugacy classes of parabolics ordered by reverse containment.

    ``less_equal(i, j)`` holds when a conjugate of class j's representative
    lies inside class i's representative: the trivial subgroup is the unique
    maximum and the full group (when parabolic) the minimum.
    """

    def __init__(self, group: Group, seed: int = 0):
        self.group = group
        self.classes = parabolic_classes(group, seed=seed)

    def representative(self, i: int) -> Parabolic:
        return self.classes[i][0]

    def less_equal(self, i: int, j: int) -> bool:
        return conjugate_into(
            self.group, self.classes[j][0].members, self.classes[i][0].members
        )

    def maximum(self) -> int:
        return next(
            i for i in range(len(self.classes)) if all(self.less_equal(j, i) for j in range(len(self.classes)))
        )

    def minimum(self) -> int:
        return next(
            i for i in range(len(self.classes)) if all(self.less_equal(i, j) for j in range(len(self.classes)))
        )
