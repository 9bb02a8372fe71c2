"""The finite-dimensional quotient at t = 0 and its block theory.

Quotienting the t = 0 algebra by the invariants without constant term on
both polynomial legs leaves a |W|^3-dimensional algebra with basis

    (coinvariant x-monomial, group element, coinvariant y-monomial).

This module computes in that quotient: standard modules induced from group
irreducibles, the graded centre via averaging and adjoint kernels, central
characters with nilpotency certificates, the resulting block partition of
the irreducibles, the explicit centre presentation in rank one, and the
finite quotients of the t = 0 algebra at points of its centre.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .cyclotomic import Cyclotomic
from .groups import IrrRep, irreducible_representations
from .invariants import coinvariant_basis
from .linalg import Span, identity_matrix, nullspace, rank, solve_linear
from .polynomials import MultiPoly, TPoly
from .rca import Algebra, PBWElement

__all__ = [
    "RestrictedAlgebra",
    "RestrictedElement",
    "BabyVerma",
    "RankOneCentre",
    "FiniteQuotient",
    "point_quotient",
    "is_poisson_point",
    "cm_families",
]

_DIM_CAP = 1728


class RestrictedElement:
    """An element of the restricted algebra, as coordinates over its basis."""

    __slots__ = ("parent", "vec")

    def __init__(self, parent: "RestrictedAlgebra", vec: dict):
        self.parent = parent
        self.vec = {k: c for k, c in vec.items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self.vec

    def __add__(self, other):
        out = dict(self.vec)
        for k, c in other.vec.items():
            cur = out.get(k)
            val = c if cur is None else cur + c
            if val.is_zero:
                out.pop(k, None)
            else:
                out[k] = val
        return RestrictedElement(self.parent, out)

    def __neg__(self):
        return RestrictedElement(self.parent, {k: -c for k, c in self.vec.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "RestrictedElement":
        if isinstance(c, (int, Fraction)):
            c = Cyclotomic.from_rational(c, self.parent.conductor)
        return RestrictedElement(self.parent, {k: v * c for k, v in self.vec.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.scale(other)
        return self.parent.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, RestrictedElement)
            and self.parent is other.parent
            and self.vec == other.vec
        )

    def __hash__(self):
        return hash(frozenset(self.vec.items()))

    def lift(self) -> PBWElement:
        alg = self.parent.algebra
        return PBWElement(
            alg,
            {k: TPoly.const(c, alg.conductor) for k, c in self.vec.items()},
        )

    def dense(self) -> list:
        zero = Cyclotomic.zero(self.parent.conductor)
        return [self.vec.get(k, zero) for k in self.parent.basis]

    def text(self) -> str:
        return self.lift().text()

    __repr__ = text


class RestrictedAlgebra:
    """The |W|^3-dimensional quotient of the t = 0 algebra."""

    def __init__(self, algebra: Algebra, dim_cap: int = _DIM_CAP):
        group = algebra.group
        if group.order**3 > dim_cap:
            raise ValueError(
                f"restricted algebra of dimension {group.order**3} exceeds the cap {dim_cap}"
            )
        self.algebra = algebra
        self.group = group
        self.conductor = algebra.conductor
        self.x_ideal, self.x_monos = coinvariant_basis(group, "x")
        self.y_ideal, self.y_monos = coinvariant_basis(group, "y")
        self.basis = [
            (xm, w, ym)
            for xm in self.x_monos
            for w in range(group.order)
            for ym in self.y_monos
        ]
        self.basis_index = {k: i for i, k in enumerate(self.basis)}
        self._x_nf: dict[tuple, dict] = {}
        self._y_nf: dict[tuple, dict] = {}
        self._centre: list[RestrictedElement] | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    # -- reduction ------------------------------------------------------------

    def _nf_x(self, a: tuple) -> dict:
        cached = self._x_nf.get(a)
        if cached is None:
            p = self.x_ideal.normal_form(
                MultiPoly.monomial(a, Cyclotomic.one(self.conductor), self.conductor)
            )
            cached = dict(p.terms)
            self._x_nf[a] = cached
        return cached

    def _nf_y(self, b: tuple) -> dict:
        cached = self._y_nf.get(b)
        if cached is None:
            p = self.y_ideal.normal_form(
                MultiPoly.monomial(b, Cyclotomic.one(self.conductor), self.conductor)
            )
            cached = dict(p.terms)
            self._y_nf[b] = cached
        return cached

    def reduce(self, e: PBWElement) -> RestrictedElement:
        """Image of a PBW element: specialize t to 0, reduce both legs."""
        vec: dict = {}
        for (a, w, b), tau in e.terms.items():
            c0 = tau.at_zero()
            if c0.is_zero:
                continue
            for xm, cx in self._nf_x(a).items():
                cxa = c0 * cx
                for ym, cy in self._nf_y(b).items():
                    key = (xm, w, ym)
                    val = cxa * cy
                    cur = vec.get(key)
                    val = val if cur is None else cur + val
                    if val.is_zero:
                        vec.pop(key, None)
                    else:
                        vec[key] = val
        return RestrictedElement(self, vec)

    def multiply(self, e1: RestrictedElement, e2: RestrictedElement) -> RestrictedElement:
        return self.reduce(e1.lift() * e2.lift())

    def one(self) -> RestrictedElement:
        return self.reduce(self.algebra.one())

    def from_basis(self, i: int) -> RestrictedElement:
        return RestrictedElement(self, {self.basis[i]: Cyclotomic.one(self.conductor)})

    def weight_of_key(self, key) -> int:
        a, _, b = key
        return sum(a) - sum(b)

    # -- adjoint action ----------------------------------------------------------

    def generator_elements(self) -> list[RestrictedElement]:
        alg = self.algebra
        gens = [alg.x(i) for i in range(alg.n)]
        gens += [alg.y(i) for i in range(alg.n)]
        gens += [alg.w(k) for k in self.group.generator_indices]
        return [self.reduce(g) for g in gens]

    def is_central(self, z: RestrictedElement) -> bool:
        for g in self.generator_elements():
            if not (z * g - g * z).is_zero:
                return False
        return True

    def conjugate(self, w: int, z: RestrictedElement) -> RestrictedElement:
        alg = self.algebra
        return self.reduce(alg.w(w) * z.lift() * alg.w(self.group.inv[w]))

    def centre_basis(self) -> list[RestrictedElement]:
        """Basis of the centre, computed degree by degree.

        Within each weight space, first project onto the conjugation
        invariants by group averaging (central elements must be fixed), then
        intersect the kernels of the commutators with every x_i and y_i.
        """
        if self._centre is not None:
            return self._centre
        N = self.conductor
        group = self.group
        alg = self.algebra
        buckets: dict[int, list] = {}
        for key in self.basis:
            buckets.setdefault(self.weight_of_key(key), []).append(key)
        inv_order = Cyclotomic.from_rational(Fraction(1, group.order), N)
        xy_gens = [self.reduce(alg.x(i)) for i in range(alg.n)] + [
            self.reduce(alg.y(i)) for i in range(alg.n)
        ]
        centre: list[RestrictedElement] = []
        for d in sorted(buckets):
            keys = buckets[d]
            index = {k: i for i, k in enumerate(keys)}
            # conjugation-invariant subspace of this weight space
            span = Span(len(keys), N)
            candidates: list[RestrictedElement] = []
            for key in keys:
                base = RestrictedElement(self, {key: Cyclotomic.one(N)})
                avg: dict = {}
                for w in range(group.order):
                    for k2, c in self.conjugate(w, base).vec.items():
                        cur = avg.get(k2)
                        val = c if cur is None else cur + c
                        if val.is_zero:
                            avg.pop(k2, None)
                        else:
                            avg[k2] = val
                elem = RestrictedElement(self, avg).scale(inv_order)
                if elem.is_zero:
                    continue
                vec = [Cyclotomic.zero(N)] * len(keys)
                for k2, c in elem.vec.items():
                    vec[index[k2]] = c
                if span.add(vec):
                    candidates.append(elem)
            if not candidates:
                continue
            # kernel of all ad(x_i), ad(y_i) on the invariant piece
            images = [[cand * g - g * cand for g in xy_gens] for cand in candidates]
            rows: list[list[Cyclotomic]] = []
            zero = Cyclotomic.zero(N)
            for gi in range(len(xy_gens)):
                out_keys = sorted({k for per in images for k in per[gi].vec})
                for key in out_keys:
                    rows.append([per[gi].vec.get(key, zero) for per in images])
            if rows:
                kernel = nullspace(rows, conductor=N)
            else:
                kernel = identity_matrix(len(candidates), N)
            for coeffs in kernel:
                z = RestrictedElement(self, {})
                for c, cand in zip(coeffs, candidates):
                    z = z + cand.scale(c)
                centre.append(z)
        self._centre = centre
        return centre

    def brute_force_centre_dim(self) -> int:
        """Kernel of all adjoint maps over the full basis (small algebras only)."""
        N = self.conductor
        gens = self.generator_elements()
        zero = Cyclotomic.zero(N)
        images = [
            [self.from_basis(i) * g - g * self.from_basis(i) for g in gens]
            for i in range(self.dim)
        ]
        rows = []
        for gi in range(len(gens)):
            out_keys = sorted({k for per in images for k in per[gi].vec})
            for key in out_keys:
                rows.append([per[gi].vec.get(key, zero) for per in images])
        return len(nullspace(rows, conductor=N)) if rows else self.dim


# -- standard modules ------------------------------------------------------------


class BabyVerma:
    """The standard module induced from a group irreducible.

    Basis: coinvariant x-monomial tensor a basis vector of the irreducible;
    the y-leg of positive degree acts by zero on the bottom.
    """

    def __init__(self, parent: RestrictedAlgebra, rep: IrrRep):
        self.parent = parent
        self.rep = rep
        self.basis = [(m, k) for m in parent.x_monos for k in range(rep.dim)]
        self.index = {v: i for i, v in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def action_matrix(self, z: RestrictedElement) -> list[list[Cyclotomic]]:
        """Matrix of z acting on the module, columns indexed by basis vectors."""
        N = self.parent.conductor
        alg = self.parent.algebra
        dim = self.dim
        zero = Cyclotomic.zero(N)
        cols = []
        zl = z.lift()
        for m, k in self.basis:
            prod = zl * alg.monomial(m, 0, (0,) * alg.n)
            col = [zero] * dim
            for (a, u, b), tau in prod.terms.items():
                if sum(b) != 0:
                    continue
                c0 = tau.at_zero()
                if c0.is_zero:
                    continue
                rep_u = self.rep.matrices[u]
                for xm, cx in self.parent._nf_x(a).items():
                    for r in range(self.rep.dim):
                        cr = rep_u[r][k]
                        if cr.is_zero:
                            continue
                        i = self.index[(xm, r)]
                        col[i] = col[i] + c0 * cx * cr
            cols.append(col)
        return [[cols[j][i] for j in range(dim)] for i in range(dim)]

    def central_character(self, z: RestrictedElement) -> Cyclotomic:
        """The scalar by which z acts modulo nilpotents, with certificate.

        Returns tr(z)/dim and checks (z - scalar)^dim = 0 on the module.
        """
        N = self.parent.conductor
        m = self.action_matrix(z)
        dim = self.dim
        tr = Cyclotomic.zero(N)
        for i in range(dim):
            tr = tr + m[i][i]
        scalar = tr / Cyclotomic.from_rational(dim, N)
        shifted = [
            [m[i][j] - (scalar if i == j else Cyclotomic.zero(N)) for j in range(dim)]
            for i in range(dim)
        ]
        power = shifted
        k = 1
        while k < dim:
            power = _mat_mul_list(power, power)
            k *= 2
        if any(not c.is_zero for row in power for c in row):
            raise ArithmeticError("central element does not act by a scalar plus nilpotent")
        return scalar


def _mat_mul_list(a, b):
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
        out.append(row)
    return out


def cm_families(res: RestrictedAlgebra, mix_seed: int | None = None) -> list[list[str]]:
    """Partition of the group irreducibles by their central characters.

    Two irreducibles fall in the same family when every central element acts
    with the same scalar on both standard modules.  ``mix_seed`` replaces the
    centre basis by a random invertible combination first; the partition must
    not depend on it.
    """
    centre = res.centre_basis()
    if mix_seed is not None:
        rng = random.Random(mix_seed)
        n = len(centre)
        while True:
            coeffs = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
            mat = [
                [Cyclotomic.from_rational(c, res.conductor) for c in row] for row in coeffs
            ]
            if rank(mat) == n:
                break
        centre = [
            _linear_combination(res, row, centre) for row in mat
        ]
    reps = irreducible_representations(res.group)
    signatures = []
    for rep in reps:
        module = BabyVerma(res, rep)
        signatures.append(tuple(module.central_character(z) for z in centre))
    families: list[tuple[tuple, list[str]]] = []
    for rep, sig in zip(reps, signatures):
        for known_sig, labels in families:
            if known_sig == sig:
                labels.append(rep.label)
                break
        else:
            families.append((sig, [rep.label]))
    return [sorted(labels) for _, labels in families]


def _linear_combination(res, coeffs, elements):
    out = RestrictedElement(res, {})
    for c, e in zip(coeffs, elements):
        out = out + e.scale(c)
    return out


# -- the rank-one centre -----------------------------------------------------------


class RankOneCentre:
    """Explicit centre data for a cyclic group on one variable at t = 0.

    Generators: u = x^l, v = (2y)^l and the weight-zero element
    z0 = 2xy + (group corrections), the unique such element central at t = 0.
    The defining relation expresses u*v as a polynomial in z0, found by exact
    linear algebra; the pairwise brackets close on the generators.
    """

    def __init__(self, algebra: Algebra):
        group = algebra.group
        if group.n != 1:
            raise ValueError("rank-one centre requires a rank-one group")
        self.algebra = algebra
        self.order = group.order
        N = algebra.conductor
        l = group.order
        x, y = algebra.x(0), algebra.y(0)
        self.u = x**l
        self.v = (y.scale(2)) ** l
        # z0 = 2xy + sum_j a_j g^j, solved to be central at t = 0
        base = (x * y).scale(2)
        pieces = [algebra.w(j) for j in range(1, l)]
        gens = [x, y]
        rows, rhs = [], []
        targets = [base.commutator(g).at_t0() for g in gens]
        piece_comms = [[p.commutator(g).at_t0() for g in gens] for p in pieces]
        for gi in range(len(gens)):
            keys = set(targets[gi].terms)
            for pc in piece_comms:
                keys.update(pc[gi].terms)
            for key in sorted(keys):
                rows.append(
                    [pc[gi].terms.get(key, TPoly.zero(N)).at_zero() for pc in piece_comms]
                )
                rhs.append(-targets[gi].terms.get(key, TPoly.zero(N)).at_zero())
        sol = solve_linear(rows, rhs)
        if sol is None:
            raise ArithmeticError("no central correction for the weight-zero generator")
        self.z0 = base
        for c, p in zip(sol, pieces):
            self.z0 = self.z0 + p.scale(c)
        if not algebra.is_central(self.z0, at_t0=True):
            raise ArithmeticError("weight-zero generator failed its centrality check")

    def relation(self) -> list[Cyclotomic]:
        """Coefficients r with u*v = sum_k r[k] z0^k at t = 0."""
        target = (self.u * self.v).at_t0()
        powers = [self.algebra.one()]
        for _ in range(self.order):
            powers.append((powers[-1] * self.z0).at_t0())
        coeffs = _express_in_span(target, powers, self.algebra.conductor)
        if coeffs is None:
            raise ArithmeticError("u*v is not a polynomial in z0 of the expected degree")
        return coeffs

    def bracket_table(self) -> dict:
        """All pairwise brackets expressed back in the generators.

        {z0,u} and {z0,v} are scalar multiples of u and v; {u,v} is a
        polynomial in z0.  Returns {"z0,u": scalar, "z0,v": scalar,
        "u,v": [poly coefficients in z0]}.
        """
        alg = self.algebra
        N = alg.conductor
        br_zu = alg.poisson_bracket(self.z0, self.u)
        coeff_u = _express_in_span(br_zu, [self.u.at_t0()], N)
        br_zv = alg.poisson_bracket(self.z0, self.v)
        coeff_v = _express_in_span(br_zv, [self.v.at_t0()], N)
        br_uv = alg.poisson_bracket(self.u, self.v)
        powers = [alg.one()]
        for _ in range(self.order):
            powers.append((powers[-1] * self.z0).at_t0())
        poly_uv = _express_in_span(br_uv, powers, N)
        if coeff_u is None or coeff_v is None or poly_uv is None:
            raise ArithmeticError("brackets do not close on the generators")
        return {"z0,u": coeff_u[0], "z0,v": coeff_v[0], "u,v": poly_uv}

    def evaluate_relation(self, z0_value: Cyclotomic) -> Cyclotomic:
        coeffs = self.relation()
        N = self.algebra.conductor
        total = Cyclotomic.zero(N)
        power = Cyclotomic.one(N)
        for c in coeffs:
            total = total + c * power
            power = power * z0_value
        return total


def _express_in_span(target: PBWElement, elements: list[PBWElement], conductor: int):
    """Solve target = sum_i c_i elements[i] comparing t = 0 coefficients."""
    t0 = target.at_t0()
    els = [e.at_t0() for e in elements]
    keys = sorted(set(t0.terms) | {k for e in els for k in e.terms})
    zero = TPoly.zero(conductor)
    matrix = [[e.terms.get(k, zero).at_zero() for e in els] for k in keys]
    rhs = [t0.terms.get(k, zero).at_zero() for k in keys]
    return solve_linear(matrix, rhs)


def is_poisson_point(pres: RankOneCentre, z0_value: Cyclotomic) -> bool:
    """Whether (u, v, z0) = (0, 0, z0_value) kills all generator brackets.

    The point must lie on the variety (the relation vanishes there); it is a
    zero-dimensional leaf exactly when every pairwise bracket, expressed in
    the generators, evaluates to zero at the point.
    """
    N = pres.algebra.conductor
    if not pres.evaluate_relation(z0_value).is_zero:
        raise ValueError("the point does not lie on the centre variety")
    table = pres.bracket_table()
    zero_u = Cyclotomic.zero(N)  # value of u at the point
    zero_v = Cyclotomic.zero(N)
    # {z0,u} -> scalar * u = 0, {z0,v} -> scalar * v = 0 at the point
    checks = [table["z0,u"] * zero_u, table["z0,v"] * zero_v]
    total = Cyclotomic.zero(N)
    power = Cyclotomic.one(N)
    for c in table["u,v"]:
        total = total + c * power
        power = power * z0_value
    checks.append(total)
    return all(c.is_zero for c in checks)


# -- finite quotients ------------------------------------------------------------


class FiniteQuotient:
    """A quotient of the restricted algebra by the span of given vectors.

    The span must be a two-sided ideal (the caller guarantees it, e.g. by
    generating with central elements); the quotient basis is the set of
    non-pivot coordinates of the span.
    """

    def __init__(self, parent: RestrictedAlgebra, ideal_vectors: list[RestrictedElement]):
        self.parent = parent
        self.conductor = parent.conductor
        self.span = Span(parent.dim, parent.conductor)
        for v in ideal_vectors:
            self.span.add(v.dense())
        pivots = set(self.span.pivot_of_row)
        self.coords = [i for i in range(parent.dim) if i not in pivots]
        self.coord_index = {c: i for i, c in enumerate(self.coords)}
        self._left_mult: list | None = None

    @property
    def dim(self) -> int:
        return len(self.coords)

    def project(self, e: RestrictedElement) -> list:
        red = self.span.reduce(e.dense())
        return [red[i] for i in self.coords]

    def lift(self, qvec: list) -> RestrictedElement:
        vec = {}
        for c, i in zip(qvec, self.coords):
            if not c.is_zero:
                vec[self.parent.basis[i]] = c
        return RestrictedElement(self.parent, vec)

    def multiply(self, q1: list, q2: list) -> list:
        prod = self.parent.multiply(self.lift(q1), self.lift(q2))
        return self.project(prod)

    def one(self) -> list:
        return self.project(self.parent.one())

    def unit_vector(self, i: int) -> list:
        return [
            Cyclotomic.one(self.conductor) if j == i else Cyclotomic.zero(self.conductor)
            for j in range(self.dim)
        ]

    def left_mult_matrices(self) -> list:
        if self._left_mult is None:
            mats = []
            for i in range(self.dim):
                cols = [self.multiply(self.unit_vector(i), self.unit_vector(j)) for j in range(self.dim)]
                mats.append([[cols[j][r] for j in range(self.dim)] for r in range(self.dim)])
            self._left_mult = mats
        return self._left_mult

    def radical_basis(self) -> list[list]:
        """Basis of the radical: the kernel of the trace form of left multiplication."""
        mats = self.left_mult_matrices()
        n = self.dim
        N = self.conductor
        gram = []
        for i in range(n):
            row = []
            for j in range(n):
                prod = _mat_mul_list(mats[i], mats[j])
                tr = Cyclotomic.zero(N)
                for k in range(n):
                    tr = tr + prod[k][k]
                row.append(tr)
            gram.append(row)
        return nullspace(gram, conductor=N)

    def radical_power_dims(self) -> list[int]:
        """Dimensions of the powers of the radical, down to zero."""
        N = self.conductor
        rad = self.radical_basis()
        dims = []
        current = rad
        while current:
            dims.append(len(current))
            nxt = Span(self.dim, N)
            for a in current:
                for b in rad:
                    nxt.add(self.multiply(a, b))
            current = nxt.basis()
            if len(dims) > self.dim:
                raise ArithmeticError("radical chain fails to terminate")
        dims.append(0)
        return dims

    def semisimple_quotient_dim(self) -> int:
        return self.dim - len(self.radical_basis())

    def centre_dim(self) -> int:
        """Dimension of {z : zb = bz for every basis element b}."""
        n = self.dim
        # commutators[j][i] = e_i e_j - e_j e_i as a quotient vector
        commutators = []
        for j in range(n):
            bj = self.unit_vector(j)
            col = []
            for i in range(n):
                ei = self.unit_vector(i)
                col.append(
                    [x - y for x, y in zip(self.multiply(ei, bj), self.multiply(bj, ei))]
                )
            commutators.append(col)
        rows = []
        for j in range(n):
            for r in range(n):
                rows.append([commutators[j][i][r] for i in range(n)])
        return len(nullspace(rows, conductor=self.conductor))

    def find_nilpotent(self, candidates: list[RestrictedElement]) -> list | None:
        """A nonzero nilpotent among the projected candidates, if any."""
        for cand in candidates:
            q = self.project(cand)
            if all(c.is_zero for c in q):
                continue
            power = q
            for _ in range(self.dim):
                power = self.multiply(power, q)
                if all(c.is_zero for c in power):
                    return q
        return None


def point_quotient(
    res: RestrictedAlgebra, pres: RankOneCentre, z0_value: Cyclotomic
) -> FiniteQuotient:
    """Quotient of the restricted algebra at a point of the centre variety.

    The restricted algebra already sits over u = v = 0; the point must
    satisfy the centre relation there.  The ideal is generated by the central
    element z0 - value, so its left multiples span it.
    """
    if not pres.evaluate_relation(z0_value).is_zero:
        raise ValueError("the point does not satisfy the centre relation")
    z0_bar = res.reduce(pres.z0.at_t0())
    if not res.is_central(z0_bar):
        raise ArithmeticError("the weight-zero generator is not central in the quotient")
    shifted = z0_bar - res.one().scale(z0_value)
    ideal = [shifted * res.from_basis(j) for j in range(res.dim)]
    return FiniteQuotient(res, ideal)
