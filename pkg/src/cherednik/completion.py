"""Matrix models for the algebra completed along an orbit of base points.

Completing the deformed skew group algebra of ``W`` along the orbit of a base
point ``b`` collapses it onto a square-matrix algebra over the completion (at
zero) of the algebra attached to the stabilizer of ``b``.  This module builds
finite truncations of both sides together with the explicit embedding onto the
matrix model, and the certificates the desk checks rely on:

* :class:`TruncatedModel` -- an algebra with its x-leg held in normal form
  modulo a power of a polynomial ideal;
* :class:`CentralizerModel` / :class:`ModelMatrix` -- the coset-indexed matrix
  model over the stabilizer algebra and the generator-by-generator embedding;
* :func:`verify_relations` -- residuals of the defining relations in the model,
  exact for the x/group generators and at one order lower for the y generators;
* :func:`ideal_image_check` -- the two-sided correspondence between powers of
  the vanishing ideal of the orbit and powers of the stabilizer-side ideal;
* :class:`InvariantShift` -- the change of coordinates between shifted parent
  invariants and stabilizer invariants, with an invertibility certificate;
* :class:`TensorSplit` -- splitting the stabilizer algebra into a flat piece
  (fixed directions) and a core piece (moved directions);
* :func:`cuspidal_reduction_report` -- the end-to-end small-quotient report:
  matrix size, core quotient dimension, predicted block dimension, simple
  modules with induced characters, and scalar certificates for central
  elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .cyclotomic import Cyclotomic
from .groebner import IdealBasis
from .groups import ClassFunction, Group, induce_character, stabilizer
from .invariants import express_in_invariants, fundamental_invariants
from .linalg import Span, mat_inverse, nullspace
from .polynomials import MultiPoly, TPoly
from .rca import Algebra, PBWElement
from .restricted import (
    RankOneCentre,
    RestrictedAlgebra,
    is_poisson_point,
    point_quotient,
)


def _coerce_scalar(v, conductor: int) -> Cyclotomic:
    if isinstance(v, Cyclotomic):
        return v.embed(conductor)
    return Cyclotomic.from_rational(v, conductor)


def _evaluate_form(coeffs, point) -> Cyclotomic:
    """Pairing of a linear form (x-coordinates) with a point of h."""
    out = None
    for c, p in zip(coeffs, point):
        term = c * p
        out = term if out is None else out + term
    return out


def _mat_mul(a, b, N: int):
    n, m, p = len(a), len(b), len(b[0])
    zero = Cyclotomic.zero(N)
    out = [[zero for _ in range(p)] for _ in range(n)]
    for i in range(n):
        for l in range(m):
            c = a[i][l]
            if c.is_zero:
                continue
            for j in range(p):
                if not b[l][j].is_zero:
                    out[i][j] = out[i][j] + c * b[l][j]
    return out


# -- truncation ------------------------------------------------------------------


class TruncatedModel:
    """An algebra with its x-leg reduced modulo a power of a polynomial ideal.

    Elements keep their group and y legs untouched; the x-leg of every term is
    held in normal form modulo ``gens ** order``.  Lower powers of the same
    ideal are available so residuals can be tested at a reduced order.
    """

    def __init__(self, algebra: Algebra, gens: list[MultiPoly], order: int):
        if order < 1:
            raise ValueError("truncation order must be at least 1")
        for g in gens:
            if g.conductor != algebra.conductor or g.nvars != algebra.n:
                raise ValueError("ideal generators do not match the algebra")
        self.algebra = algebra
        self.gens = list(gens)
        self.order = order
        self._powers: dict[int, IdealBasis] = {
            1: IdealBasis(self.gens, algebra.n, algebra.conductor)
        }

    def ideal_power(self, j: int) -> IdealBasis:
        if j < 1:
            raise ValueError("ideal power must be at least 1")
        cached = self._powers.get(j)
        if cached is None:
            cached = self._powers[1].power(j)
            self._powers[j] = cached
        return cached

    def reduce(self, e: PBWElement, order: int | None = None) -> PBWElement:
        """Normal form of e with the x-leg reduced modulo the ideal power."""
        ib = self.ideal_power(self.order if order is None else order)
        N, n = self.algebra.conductor, self.algebra.n
        one = Cyclotomic.one(N)
        out: dict = {}
        for (a, w, b), tau in e.terms.items():
            nf = ib.normal_form(MultiPoly.monomial(a, one, N))
            for m, c in nf.terms.items():
                key = (m, w, b)
                add = tau * c
                cur = out.get(key)
                val = add if cur is None else cur + add
                if val.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = val
        return PBWElement(self.algebra, out)

    def vanishes(self, e: PBWElement, order: int | None = None) -> bool:
        return self.reduce(e, order).is_zero

    def x_dimension(self, order: int | None = None) -> int:
        """Dimension of the polynomial quotient carried by the x-leg."""
        return len(self.ideal_power(self.order if order is None else order).std_monomials())


# -- base points -------------------------------------------------------------------


def mirror_base_point(group: Group, reflection: int) -> list[Cyclotomic]:
    """A nonzero point on the fixed line of a reflection, first coordinate one.

    Scales the spanning vector of ker(M - 1) so its first nonzero coordinate is
    one.  Raises if the element fixes only the origin.
    """
    N, n = group.conductor, group.n
    m = group.elements[reflection]
    one, zero = Cyclotomic.one(N), Cyclotomic.zero(N)
    rows = [[m[r][c] - (one if r == c else zero) for c in range(n)] for r in range(n)]
    kernel = nullspace(rows, conductor=N)
    if not kernel:
        raise ValueError("element has no nonzero fixed vector")
    vec = kernel[0]
    lead = next(c for c in vec if not c.is_zero)
    inv = lead.inv()
    return [c * inv for c in vec]


def _cyclic_closure(group: Group, g: int) -> list[int]:
    out, cur = [0], g
    while cur != 0:
        out.append(cur)
        cur = group.mult[cur][g]
    return sorted(out)


# -- the matrix model ---------------------------------------------------------------


class ModelMatrix:
    """A square matrix with entries in a truncated stabilizer-side algebra."""

    __slots__ = ("parent", "entries")

    def __init__(self, parent: "CentralizerModel", entries):
        self.parent = parent
        self.entries = entries  # list of lists of PBWElement, kept reduced

    def entry(self, i: int, j: int) -> PBWElement:
        return self.entries[i][j]

    def __add__(self, other: "ModelMatrix") -> "ModelMatrix":
        r = self.parent.r
        return ModelMatrix(
            self.parent,
            [[self.entries[i][j] + other.entries[i][j] for j in range(r)] for i in range(r)],
        )

    def __neg__(self) -> "ModelMatrix":
        r = self.parent.r
        return ModelMatrix(
            self.parent, [[-self.entries[i][j] for j in range(r)] for i in range(r)]
        )

    def __sub__(self, other: "ModelMatrix") -> "ModelMatrix":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclotomic, TPoly)):
            return self.scale(other)
        r = self.parent.r
        model = self.parent.model
        zero = self.parent.sub_algebra.zero()
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                acc = zero
                for l in range(r):
                    a, b = self.entries[i][l], other.entries[l][j]
                    if a.is_zero or b.is_zero:
                        continue
                    acc = acc + a * b
                row.append(model.reduce(acc))
            out.append(row)
        return ModelMatrix(self.parent, out)

    def scale(self, factor) -> "ModelMatrix":
        r = self.parent.r
        return ModelMatrix(
            self.parent,
            [[self.entries[i][j].scale(factor) for j in range(r)] for i in range(r)],
        )

    def __eq__(self, other):
        if not isinstance(other, ModelMatrix):
            return NotImplemented
        return self.entries == other.entries

    def at_t0(self) -> "ModelMatrix":
        r = self.parent.r
        return ModelMatrix(
            self.parent, [[self.entries[i][j].at_t0() for j in range(r)] for i in range(r)]
        )

    def is_zero(self, order: int | None = None) -> bool:
        model = self.parent.model
        for row in self.entries:
            for e in row:
                if not model.reduce(e, order).is_zero:
                    return False
        return True

    def first_nonzero(self, order: int | None = None):
        """Position and text of the first nonvanishing entry, or None."""
        model = self.parent.model
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                nf = model.reduce(e, order)
                if not nf.is_zero:
                    return (i, j, nf.text())
        return None

    def is_diagonal_constant(self) -> bool:
        """True when the matrix is scalar: diagonal with equal entries."""
        r = self.parent.r
        for i in range(r):
            for j in range(r):
                if i != j and not self.entries[i][j].is_zero:
                    return False
        return all(self.entries[i][i] == self.entries[0][0] for i in range(r))

    def text(self) -> str:
        return "\n".join(
            "[" + ", ".join(e.text() for e in row) + "]" for row in self.entries
        )


class CentralizerModel:
    """Coset-indexed matrix model over the stabilizer algebra of a base point.

    Functions from ``W`` to the stabilizer-side algebra that are equivariant for
    left translation by the stabilizer form a free module with one coordinate
    per right coset; operators on it are square matrices over that algebra.
    ``image`` sends each element of the parent algebra to such a matrix --
    exactly for x-polynomials and group elements, and up to the stated
    truncation order for elements involving y.
    """

    def __init__(self, algebra: Algebra, base_point, order: int):
        if order < 1:
            raise ValueError("truncation order must be at least 1")
        self.algebra = algebra
        self.order = order
        N, n = algebra.conductor, algebra.n
        self.base_point = tuple(_coerce_scalar(v, N) for v in base_point)
        if len(self.base_point) != n:
            raise ValueError("base point has the wrong number of coordinates")

        par = stabilizer(algebra.group, list(self.base_point))
        self.parabolic = par
        self.sub_group = algebra.group.subgroup(list(par.members))

        # restrict the reflection parameters to the stabilizer's classes
        parent_value = {
            r.element: algebra.params[r.class_index] for r in algebra.group.reflections
        }
        sub_params = []
        for cls in self.sub_group.reflection_classes:
            vals = {parent_value[self.sub_group.parent_index[r.element]] for r in cls}
            if len(vals) != 1:
                raise ArithmeticError("parameter is not constant on a stabilizer class")
            sub_params.append(vals.pop())
        self.sub_algebra = Algebra(self.sub_group, sub_params, conductor=N)

        # reflections outside the stabilizer, each with its pairing against b
        members = set(par.members)
        self._outside = []
        for r in algebra.group.reflections:
            if r.element in members:
                continue
            val = _evaluate_form(r.alpha, self.base_point)
            if val.is_zero:
                raise ValueError(
                    "base point lies on the mirror of a reflection outside its stabilizer"
                )
            self._outside.append((r, val))

        # right cosets W = union of W_b * u_i with u_0 = identity
        mult = algebra.group.mult
        order_w = algebra.group.order
        self.coset_reps: list[int] = []
        self.coset_of: list[tuple[int, int] | None] = [None] * order_w
        for g in range(order_w):
            if self.coset_of[g] is not None:
                continue
            i = len(self.coset_reps)
            self.coset_reps.append(g)
            for hs, hp in enumerate(self.sub_group.parent_index):
                self.coset_of[mult[hp][g]] = (i, hs)
        self.r = len(self.coset_reps)

        # stabilizer-side truncation: its invariants on the whole space
        self.sub_invariants = fundamental_invariants(self.sub_group, side="x")
        self.model = TruncatedModel(self.sub_algebra, self.sub_invariants, order)

        # parent-side data: invariants, their vanishing ideal at b, and the
        # shifted polynomials the diagonal images evaluate to
        self.parent_invariants = fundamental_invariants(algebra.group, side="x")
        shift = [
            MultiPoly.linear_form([Cyclotomic.one(N) if k == l else Cyclotomic.zero(N) for k in range(n)], N)
            + MultiPoly.constant(self.base_point[l], n, N)
            for l in range(n)
        ]
        self.parent_ideal_gens = []
        self.image_ideal_gens = []
        for f in self.parent_invariants:
            at_b = f.evaluate(list(self.base_point))
            self.parent_ideal_gens.append(f - MultiPoly.constant(at_b, n, N))
            self.image_ideal_gens.append(f.substitute(shift) - MultiPoly.constant(at_b, n, N))
        self._parent_model: TruncatedModel | None = None

        self._series: dict[int, PBWElement] = {}
        self._images: dict[tuple, ModelMatrix] = {}

    # -- basic matrices --------------------------------------------------------

    @property
    def parent_model(self) -> TruncatedModel:
        """Truncation of the parent algebra along the orbit's vanishing ideal."""
        if self._parent_model is None:
            self._parent_model = TruncatedModel(
                self.algebra, self.parent_ideal_gens, self.order
            )
        return self._parent_model

    def zero_matrix(self) -> ModelMatrix:
        z = self.sub_algebra.zero()
        return ModelMatrix(self, [[z for _ in range(self.r)] for _ in range(self.r)])

    def identity(self) -> ModelMatrix:
        m = self.zero_matrix()
        one = self.sub_algebra.one()
        for i in range(self.r):
            m.entries[i][i] = one
        return m

    def scalar_matrix(self, e: PBWElement) -> ModelMatrix:
        m = self.zero_matrix()
        red = self.model.reduce(e)
        for i in range(self.r):
            m.entries[i][i] = red
        return m

    # -- generator images --------------------------------------------------------

    def image_of_group(self, u: int) -> ModelMatrix:
        """Matrix of right translation by a group element."""
        cached = self._images.get(("w", u))
        if cached is None:
            mult = self.algebra.group.mult
            m = self.zero_matrix()
            for i, rep in enumerate(self.coset_reps):
                j, h = self.coset_of[mult[rep][u]]
                m.entries[i][j] = m.entries[i][j] + self.sub_algebra.w(h)
            self._images[("w", u)] = cached = m
        return cached

    def image_of_x_form(self, coeffs) -> ModelMatrix:
        """Diagonal image of a linear form in the x-variables.

        Coset representative u shifts the form: the entry is the transported
        form plus its pairing with the base point.
        """
        N, n = self.algebra.conductor, self.algebra.n
        coeffs = [_coerce_scalar(c, N) for c in coeffs]
        m = self.zero_matrix()
        for i, rep in enumerate(self.coset_reps):
            s = self.algebra.group.action_on_dual(rep)
            moved = [
                _evaluate_form(s[k], coeffs) for k in range(n)
            ]
            entry = self.sub_algebra.x_poly(MultiPoly.linear_form(moved, N))
            entry = entry + self.sub_algebra.scalar(_evaluate_form(moved, self.base_point))
            m.entries[i][i] = self.model.reduce(entry)
        return m

    def _series_for(self, refl, pairing: Cyclotomic) -> PBWElement:
        """Truncated inverse of (x-form of the root) + (root paired with b).

        The expansion sum of (-1)^m x^m / pairing^(m+1) is cut off once a pure
        power of the form is guaranteed to lie in the truncation ideal; the
        result is certified by multiplying back.
        """
        cached = self._series.get(refl.element)
        if cached is not None:
            return cached
        N = self.algebra.conductor
        socle = sum(g.degree() - 1 for g in self.sub_invariants) + 1
        cap = self.order * socle - 1
        form = MultiPoly.linear_form(list(refl.alpha), N)
        acc = MultiPoly.zero(self.algebra.n, N)
        power = MultiPoly.constant(1, self.algebra.n, N)
        scale = pairing.inv()
        for m in range(cap + 1):
            acc = acc + power.scale(scale if m % 2 == 0 else -scale)
            power = power * form
            scale = scale * pairing.inv()
        series = self.model.reduce(self.sub_algebra.x_poly(acc))
        check = (self.sub_algebra.x_poly(form) + self.sub_algebra.scalar(pairing)) * series
        if not self.model.reduce(check - self.sub_algebra.one()).is_zero:
            raise ArithmeticError("inverse series failed its certificate")
        self._series[refl.element] = series
        return series

    def image_of_y_form(self, coeffs) -> ModelMatrix:
        """Image of a linear form in the y-variables.

        Diagonal part: the transported form.  Off-diagonal part: one difference
        term per reflection outside the stabilizer, weighted by the truncated
        inverse of its shifted root form.
        """
        N, n = self.algebra.conductor, self.algebra.n
        coeffs = [_coerce_scalar(c, N) for c in coeffs]
        group = self.algebra.group
        one = Cyclotomic.one(N)
        m = self.zero_matrix()
        moved_by_rep = []
        for i, rep in enumerate(self.coset_reps):
            mat = group.elements[rep]
            moved = [_evaluate_form(mat[k], coeffs) for k in range(n)]
            moved_by_rep.append(moved)
            m.entries[i][i] = self.sub_algebra.y_poly(MultiPoly.linear_form(moved, N))
        for refl, pairing in self._outside:
            # The difference-term weight is -2c/(1 - eigenvalue): the defining
            # relation used here carries [y, x] = -t + (reflection terms), which
            # is the opposite overall sign from the convention the centralizer
            # formulas are usually stated in, so the weight flips sign with it.
            c_val = self.algebra.params[refl.class_index]
            weight = -(c_val + c_val) * (one - refl.eigenvalue).inv()
            if weight.is_zero:
                continue
            series = self._series_for(refl, pairing)
            for i, rep in enumerate(self.coset_reps):
                val = _evaluate_form(refl.alpha, moved_by_rep[i])
                if val.is_zero:
                    continue
                factor = series.scale(weight * val)
                j, h = self.coset_of[group.mult[refl.element][rep]]
                m.entries[i][j] = m.entries[i][j] + factor * self.sub_algebra.w(h)
                m.entries[i][i] = m.entries[i][i] - factor
        for i in range(self.r):
            for j in range(self.r):
                m.entries[i][j] = self.model.reduce(m.entries[i][j])
        return m

    def image_of_x(self, i: int) -> ModelMatrix:
        cached = self._images.get(("x", i))
        if cached is None:
            unit = [1 if k == i else 0 for k in range(self.algebra.n)]
            self._images[("x", i)] = cached = self.image_of_x_form(unit)
        return cached

    def image_of_y(self, i: int) -> ModelMatrix:
        cached = self._images.get(("y", i))
        if cached is None:
            unit = [1 if k == i else 0 for k in range(self.algebra.n)]
            self._images[("y", i)] = cached = self.image_of_y_form(unit)
        return cached

    def image(self, e: PBWElement) -> ModelMatrix:
        """Image of a parent element, term by term in its normal form."""
        out = self.zero_matrix()
        for (a, w, b), tau in sorted(e.terms.items()):
            m = None
            for idx, exp in enumerate(a):
                for _ in range(exp):
                    fac = self.image_of_x(idx)
                    m = fac if m is None else m * fac
            if w:
                fac = self.image_of_group(w)
                m = fac if m is None else m * fac
            for idx, exp in enumerate(b):
                for _ in range(exp):
                    fac = self.image_of_y(idx)
                    m = fac if m is None else m * fac
            if m is None:
                m = self.identity()
            out = out + m.scale(tau)
        return out


# -- relation residuals ---------------------------------------------------------


def verify_relations(model: CentralizerModel) -> list[dict]:
    """Residuals of all generator-pair products in the matrix model.

    For each ordered pair of generators the product of images is compared with
    the image of the product.  Pairs whose left factor is a y-generator are
    claimed one order lower; their specialization at t = 0 is additionally
    tested at the full order and recorded separately.
    """
    alg = model.algebra
    gens: list[tuple[str, PBWElement]] = []
    for i in range(alg.n):
        gens.append((f"x{i + 1}", alg.x(i)))
    for i in range(alg.n):
        gens.append((f"y{i + 1}", alg.y(i)))
    seen = {0}
    for g in alg.group.generator_indices or range(1, alg.group.order):
        if g not in seen:
            seen.add(g)
            gens.append((f"[{alg.group.text(g)}]", alg.w(g)))
    images = {name: model.image(e) for name, e in gens}
    out = []
    for lname, le in gens:
        for rname, re in gens:
            lhs = images[lname] * images[rname]
            rhs = model.image(le * re)
            resid = lhs - rhs
            lossy = lname.startswith("y")
            order = model.order - 1 if lossy else model.order
            if lossy and order < 1:
                ok = True
                where = None
            else:
                where = resid.first_nonzero(order)
                ok = where is None
            record = {
                "pair": f"{lname} * {rname}",
                "order": order,
                "ok": ok,
                "residual": "0" if ok else f"entry {where[0]},{where[1]}: {where[2]}",
            }
            if lossy:
                t0_where = resid.at_t0().first_nonzero(model.order)
                record["t0_exact"] = t0_where is None
            out.append(record)
    return out


def dimension_ledger(model: CentralizerModel) -> dict:
    """Compare free-module ranks of the two truncations.

    The parent truncation has rank (x-dimension) * |W|; the matrix model has
    rank r^2 * (stabilizer x-dimension) * |W_b|.  The embedding being an
    isomorphism at each order forces equality.
    """
    big = model.parent_model.x_dimension() * model.algebra.group.order
    small = model.r * model.r * model.model.x_dimension() * model.sub_group.order
    return {"parent_rank": big, "matrix_rank": small, "equal": big == small}


# -- the two-sided ideal correspondence --------------------------------------------


def _x_only_poly(e: PBWElement) -> MultiPoly:
    """Read a group-free, y-free, t-free element as a polynomial in x."""
    alg = e.algebra
    out = MultiPoly.zero(alg.n, alg.conductor)
    for (a, w, b), tau in e.terms.items():
        if w != 0 or sum(b) != 0 or tau.degree() > 0:
            raise ArithmeticError("element is not a plain x-polynomial")
        out = out + MultiPoly.monomial(a, tau.at_zero(), alg.conductor)
    return out


def ideal_image_check(model: CentralizerModel, j: int) -> dict:
    """Certify that the j-th ideal powers correspond under the embedding.

    Forward: every j-fold product of the parent invariants' vanishing-ideal
    generators maps to a scalar matrix whose entry lies in the j-th power of
    the stabilizer ideal.  Reverse: the forward images are scalar, so the
    right module they generate inside the matrix model is all matrices with
    entries in the polynomial ideal they generate; rewriting each j-fold
    product of the stabilizer invariants through the inverse of the invariant
    shift exhibits it inside that ideal, up to the truncation ideal.
    """
    if not 1 <= j <= model.order:
        raise ValueError("ideal power must be between 1 and the truncation order")
    N, n = model.algebra.conductor, model.algebra.n
    small_j = model.model.ideal_power(j)
    small_top = model.model.ideal_power(model.order)
    indices = range(len(model.parent_ideal_gens))

    forward = []
    for combo in combinations_with_replacement(indices, j):
        prod = MultiPoly.constant(1, n, N)
        img = MultiPoly.constant(1, n, N)
        for idx in combo:
            prod = prod * model.parent_ideal_gens[idx]
            img = img * model.image_ideal_gens[idx]
        mat = model.image(model.algebra.x_poly(prod))
        diag = mat.is_diagonal_constant()
        inside = small_j.contains(img) and small_j.contains(
            _x_only_poly(mat.entry(0, 0))
        )
        label = "*".join(f"m{idx + 1}" for idx in combo)
        forward.append({"generator": label, "scalar_matrix": diag, "inside": inside})

    shift = InvariantShift(model)
    reverse = []
    for combo in combinations_with_replacement(range(n), j):
        q = MultiPoly.constant(1, n, N)
        rewritten = MultiPoly.constant(1, n, N)
        for idx in combo:
            q = q * model.sub_invariants[idx]
            rewritten = rewritten * shift.inverse[idx]
        # every monomial of the rewritten product has at least j factors, so
        # its value at the shifted invariants lies in their j-th ideal power
        min_degree = min((sum(m) for m in rewritten.terms), default=j)
        value = rewritten.substitute(model.image_ideal_gens)
        covered = min_degree >= j and small_top.contains(q - value)
        label = "*".join(f"p{idx + 1}" for idx in combo)
        reverse.append({"generator": label, "covered": covered})

    ok = all(f["scalar_matrix"] and f["inside"] for f in forward) and all(
        r["covered"] for r in reverse
    )
    return {"power": j, "forward": forward, "reverse": reverse, "ok": ok}


# -- invariant shift ---------------------------------------------------------------


class InvariantShift:
    """Change of coordinates between shifted parent and stabilizer invariants.

    Each parent invariant, recentred at the base point, is a polynomial in the
    stabilizer invariants; the linear part of that expression must be
    invertible, which certifies the correspondence of completed invariant
    rings.  The inverse change of coordinates is built order by order and both
    compositions are checked to be the identity up to the truncation order.
    """

    def __init__(self, model: CentralizerModel):
        N, n = model.algebra.conductor, model.algebra.n
        k = model.order
        self.model = model
        self.forward: list[MultiPoly] = []
        for q in model.image_ideal_gens:
            expr = express_in_invariants(q, model.sub_invariants)
            if expr is None:
                raise ArithmeticError(
                    "shifted invariant is not a polynomial in the stabilizer invariants"
                )
            self.forward.append(expr)

        one, zero = Cyclotomic.one(N), Cyclotomic.zero(N)
        units = [tuple(1 if l == i else 0 for l in range(n)) for i in range(n)]
        self.linear_matrix = [
            [self.forward[i].coeff(units[l]) for l in range(n)] for i in range(n)
        ]
        try:
            inv = mat_inverse(self.linear_matrix)
        except ValueError:
            raise ValueError(
                "linear part of the invariant shift is singular; "
                "the base point is not generic on its stratum"
            ) from None

        tails = [
            self.forward[i]
            - MultiPoly.linear_form([self.linear_matrix[i][l] for l in range(n)], N)
            for i in range(n)
        ]
        for tail in tails:
            if not tail.coeff(tuple([0] * n)).is_zero:
                raise ArithmeticError("invariant shift has an unexpected constant term")

        variables = [MultiPoly.linear_form([one if l == i else zero for l in range(n)], N) for i in range(n)]
        current = [
            MultiPoly.linear_form([inv[jj][l] for l in range(n)], N) for jj in range(n)
        ]
        for _ in range(k):
            corrected = [variables[l] - _truncate_degree(tails[l].substitute(current), k) for l in range(n)]
            current = [
                _truncate_degree(
                    sum(
                        (corrected[l].scale(inv[jj][l]) for l in range(n)),
                        MultiPoly.zero(n, N),
                    ),
                    k,
                )
                for jj in range(n)
            ]
        self.inverse = current

        for i in range(n):
            fwd_back = _truncate_degree(self.forward[i].substitute(self.inverse), k)
            back_fwd = _truncate_degree(
                self.inverse[i].substitute([_truncate_degree(f, k) for f in self.forward]), k
            )
            if fwd_back != variables[i] or back_fwd != variables[i]:
                raise ArithmeticError("invariant shift inverse failed its certificate")
        self.certified = True


def _truncate_degree(p: MultiPoly, k: int) -> MultiPoly:
    return MultiPoly(
        p.nvars, p.conductor, {m: c for m, c in p.terms.items() if sum(m) <= k}
    )


# -- tensor splitting of the stabilizer side ------------------------------------------


class TensorSplit:
    """Split an algebra into a flat factor and a core factor.

    In coordinates adapted to (moved directions, fixed directions) every group
    element is block diagonal with identity on the fixed block, so the algebra
    factors as the core construction tensored with a polynomial Weyl pair on
    the fixed directions.  ``core_component`` projects onto the part with no
    flat variables, which is where central elements of the quotient live.
    """

    def __init__(self, algebra: Algebra):
        group = algebra.group
        N, n = algebra.conductor, algebra.n
        one, zero = Cyclotomic.one(N), Cyclotomic.zero(N)

        moved = Span(n, N)
        for g in range(group.order):
            m = group.elements[g]
            for c in range(n):
                moved.add([m[r][c] - (one if r == c else zero) for r in range(n)])
        moved_basis = moved.basis()
        rows = []
        for g in range(group.order):
            m = group.elements[g]
            for r in range(n):
                rows.append([m[r][c] - (one if r == c else zero) for c in range(n)])
        fixed_basis = nullspace(rows, conductor=N) if rows else []
        self.core_dim = len(moved_basis)
        self.flat_dim = len(fixed_basis)
        if self.core_dim + self.flat_dim != n:
            raise ArithmeticError("moved and fixed directions do not span")

        cols = moved_basis + fixed_basis
        self.change = [[cols[j][i] for j in range(n)] for i in range(n)]
        self.change_inv = mat_inverse(self.change)

        adapted_elements = []
        for m in group.elements:
            prod = _mat_triple(self.change_inv, m, self.change, N)
            adapted_elements.append(tuple(tuple(row) for row in prod))
        for mat in adapted_elements:
            for i in range(n):
                for j in range(n):
                    upper = i < self.core_dim <= j
                    lower = j < self.core_dim <= i
                    if (upper or lower) and not mat[i][j].is_zero:
                        raise ArithmeticError("adapted action is not block diagonal")
                    if i >= self.core_dim and j >= self.core_dim:
                        want = one if i == j else zero
                        if mat[i][j] != want:
                            raise ArithmeticError("fixed block is not the identity")
        adapted_group = Group(adapted_elements, N, group.name + "-adapted")
        if adapted_group.mult != group.mult:
            raise ArithmeticError("adapted coordinates changed the multiplication table")
        self.algebra = algebra
        self.adapted_algebra = Algebra(adapted_group, list(algebra.params), conductor=N)

        core_elements = [
            tuple(tuple(row[: self.core_dim]) for row in m[: self.core_dim])
            for m in adapted_elements
        ]
        if len(set(core_elements)) != len(core_elements):
            raise ArithmeticError("core action is not faithful")
        core_group = Group(core_elements, N, group.name + "-core")
        if core_group.mult != group.mult:
            raise ArithmeticError("core block changed the multiplication table")
        self.core_algebra = Algebra(core_group, list(algebra.params), conductor=N)

    def to_adapted(self, e: PBWElement) -> PBWElement:
        """Transport an element into the adapted coordinates."""
        N, n = self.algebra.conductor, self.algebra.n
        x_images = [
            MultiPoly.linear_form([self.change[i][j] for j in range(n)], N)
            for i in range(n)
        ]
        y_images = [
            MultiPoly.linear_form([self.change_inv[j][i] for j in range(n)], N)
            for i in range(n)
        ]
        out = self.adapted_algebra.zero()
        for (a, w, b), tau in e.terms.items():
            xp = MultiPoly.constant(1, n, N)
            for i, exp in enumerate(a):
                if exp:
                    xp = xp * x_images[i] ** exp
            yp = MultiPoly.constant(1, n, N)
            for i, exp in enumerate(b):
                if exp:
                    yp = yp * y_images[i] ** exp
            term = self.adapted_algebra.x_poly(xp) * self.adapted_algebra.w(w)
            term = term * self.adapted_algebra.y_poly(yp)
            out = out + term.scale(tau)
        return out

    def core_component(self, e: PBWElement) -> PBWElement:
        """Part of an adapted element with no flat variables on either leg."""
        cd = self.core_dim
        out: dict = {}
        for (a, w, b), tau in e.terms.items():
            if any(a[cd:]) or any(b[cd:]):
                continue
            out[(a[:cd], w, b[:cd])] = tau
        return PBWElement(self.core_algebra, out)

    def project(self, e: PBWElement) -> PBWElement:
        """Transport a stabilizer-side element and keep its core part."""
        return self.core_component(self.to_adapted(e))


def _mat_triple(a, b, c, N: int):
    return _mat_mul(_mat_mul(a, [list(row) for row in b], N), c, N)


# -- the end-to-end report -----------------------------------------------------------


@dataclass
class CuspidalReductionReport:
    """Summary of the block-size prediction at a zero-dimensional leaf."""

    group: str
    base_point: list[str]
    reflection: str
    stabilizer_order: int
    matrix_size: int
    core_quotient_dim: int
    predicted_dim: int
    radical_power_dims: list[int]
    semisimple_quotient_dim: int
    truncation_order: int
    coset_reps: list[str]
    simple_modules: list[dict]
    central_elements: list[dict]
    relation_summary: dict | None = None
    ledger: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def matrix_size_is_six(self) -> bool:
        return self.matrix_size == 6

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "base_point": self.base_point,
            "reflection": self.reflection,
            "stabilizer_order": self.stabilizer_order,
            "matrix_size": self.matrix_size,
            "matrix_size_is_six": self.matrix_size_is_six,
            "core_quotient_dim": self.core_quotient_dim,
            "predicted_dim": self.predicted_dim,
            "radical_power_dims": self.radical_power_dims,
            "semisimple_quotient_dim": self.semisimple_quotient_dim,
            "truncation_order": self.truncation_order,
            "coset_reps": self.coset_reps,
            "simple_modules": self.simple_modules,
            "central_elements": self.central_elements,
            "relation_summary": self.relation_summary,
            "ledger": self.ledger,
            "notes": self.notes,
        }

    def text(self) -> str:
        lines = [
            f"## Zero-dimensional leaf report: {self.group}",
            "",
            f"- base point: ({', '.join(self.base_point)}) with stabilizer of order {self.stabilizer_order}",
            f"- matrix size r = {self.matrix_size} (six-by-six: {'yes' if self.matrix_size_is_six else 'no'})",
            f"- core quotient dimension d = {self.core_quotient_dim} "
            f"(radical chain {self.radical_power_dims}, semisimple part {self.semisimple_quotient_dim})",
            f"- predicted block dimension r^2 * d = {self.predicted_dim}",
            f"- truncation order {self.truncation_order}",
            "",
            "### Simple modules",
        ]
        for s in self.simple_modules:
            ok = "ok" if s["character_matches_induction"] else "MISMATCH"
            lines.append(
                f"- {s['label']}: degree {s['degree']}, induced character {ok}"
            )
        lines.append("")
        lines.append("### Central elements act by scalars")
        for c in self.central_elements:
            status = f"scalar {c['scalar']}" if c["is_scalar"] else "NOT SCALAR"
            lines.append(f"- {c['label']}: {status}")
        if self.relation_summary is not None:
            lines.append("")
            ok = self.relation_summary["failed"] == 0
            lines.append(
                f"### Relation residuals: {self.relation_summary['checked']} checked, "
                f"{self.relation_summary['failed']} failed"
                + ("" if ok else " (FAILURES PRESENT)")
            )
        if self.ledger is not None:
            lines.append("")
            lines.append(
                f"### Rank ledger: parent {self.ledger['parent_rank']}, "
                f"matrix model {self.ledger['matrix_rank']}, "
                f"equal: {'yes' if self.ledger['equal'] else 'NO'}"
            )
        for note in self.notes:
            lines.append(f"- note: {note}")
        lines.append("")
        return "\n".join(lines)


def _group_image_on_character(model: CentralizerModel, u: int, chi_sub: dict) -> list[list[Cyclotomic]]:
    """Specialize the matrix of right translation along a stabilizer character."""
    N = model.algebra.conductor
    zero = Cyclotomic.zero(N)
    mat = model.image_of_group(u)
    out = [[zero for _ in range(model.r)] for _ in range(model.r)]
    for i in range(model.r):
        for j in range(model.r):
            acc = zero
            for (_, w, _), tau in mat.entry(i, j).terms.items():
                acc = acc + tau.at_zero() * chi_sub[w]
            out[i][j] = acc
    return out


def _simple_module_records(
    model: CentralizerModel, quotient, core_algebra: Algebra, res: RestrictedAlgebra
) -> list[dict]:
    """Identify the simple modules of the block and certify their characters.

    The semisimple part of the core quotient splits into eigencharacters of the
    stabilizer generator; each gives a one-dimensional core simple, hence a
    coset-function simple of the block whose group character must equal the
    induced character of the stabilizer eigencharacter.
    """
    N = model.algebra.conductor
    group = model.algebra.group
    sub = model.sub_group
    one, zero = Cyclotomic.one(N), Cyclotomic.zero(N)

    # coordinates for the semisimple quotient of the core point quotient
    rad_span = Span(quotient.dim, N)
    for v in quotient.radical_basis():
        rad_span.add(list(v))
    pivots = set(rad_span.pivot_of_row)
    comp = [i for i in range(quotient.dim) if i not in pivots]
    ss_dim = len(comp)

    def to_ss(vec):
        red = rad_span.reduce(list(vec))
        return [red[i] for i in comp]

    # a generator of the (cyclic) stabilizer and its left multiplication on
    # the semisimple part
    gen_sub = next(
        g for g in range(sub.order) if sub.element_order(g) == sub.order
    )
    gen_image = quotient.project(res.reduce(core_algebra.w(gen_sub)))
    cols = []
    for j in comp:
        prod = quotient.multiply(gen_image, quotient.unit_vector(j))
        cols.append(to_ss(prod))
    mat = [[cols[j][i] for j in range(ss_dim)] for i in range(ss_dim)]

    ord_s = sub.order
    records = []
    found = 0
    for p in range(ord_s):
        lam = Cyclotomic.zeta(N, (N // ord_s) * p)
        shifted = [
            [mat[i][j] - (lam if i == j else zero) for j in range(ss_dim)]
            for i in range(ss_dim)
        ]
        mult = len(nullspace(shifted, conductor=N))
        if mult == 0:
            continue
        found += mult

        # the character of the stabilizer attached to this eigenvalue
        chi_sub = {}
        chi_parent = {}
        cur, val = 0, one
        for _ in range(ord_s):
            chi_sub[cur] = val
            chi_parent[sub.parent_index[cur]] = val
            cur = sub.mult[cur][gen_sub]
            val = val * lam

        # explicit action on coset functions: certify it is a homomorphism
        images = [_group_image_on_character(model, u, chi_sub) for u in range(group.order)]
        hom_ok = all(
            _mat_mul(images[u], images[v], N) == images[group.mult[u][v]]
            for u in range(group.order)
            for v in range(group.order)
        )
        traces = []
        for u in range(group.order):
            tr = zero
            for i in range(model.r):
                tr = tr + images[u][i][i]
            traces.append(tr)
        explicit = ClassFunction.from_element_values(group, traces)
        induced = induce_character(group, list(sub.parent_index), chi_parent)
        records.append(
            {
                "label": f"stabilizer-character {lam.text()}",
                "eigenvalue": lam.text(),
                "multiplicity": mult,
                "degree": model.r,
                "function_action_is_representation": hom_ok,
                "character_matches_induction": hom_ok and explicit == induced,
            }
        )
    if found != ss_dim:
        raise ArithmeticError(
            "stabilizer eigenvalues do not exhaust the semisimple quotient"
        )
    return records


def _central_scalar_records(
    model: CentralizerModel, split: TensorSplit, res: RestrictedAlgebra, quotient
) -> list[dict]:
    """Check that central elements act by scalars on the core quotient.

    Each candidate is certified central at t = 0, mapped into the matrix
    model, and every entry is pushed through: specialize t, transport to the
    adapted coordinates, keep the core part, reduce in the restricted core,
    and project to the point quotient.  The result must be a scalar multiple
    of the identity matrix.
    """
    alg = model.algebra
    N = alg.conductor
    candidates: list[tuple[str, PBWElement]] = []
    for f in model.parent_invariants:
        candidates.append((f"x-invariant degree {f.degree()}", alg.x_poly(f)))
    for g in fundamental_invariants(alg.group, side="y"):
        candidates.append((f"y-invariant degree {g.degree()}", alg.y_poly(g)))
    eu, _, _ = alg.find_euler()
    candidates.append(("grading element", eu))

    one_coords = quotient.one()
    lead = next(i for i, c in enumerate(one_coords) if not c.is_zero)
    records = []
    for label, z in candidates:
        if not alg.is_central(z, at_t0=True):
            raise ArithmeticError(f"candidate {label} is not central at t = 0")
        mat = model.image(z)
        projected = [
            [
                quotient.project(res.reduce(split.project(mat.entry(i, j).at_t0())))
                for j in range(model.r)
            ]
            for i in range(model.r)
        ]
        ok = True
        for i in range(model.r):
            for j in range(model.r):
                if i != j and any(not c.is_zero for c in projected[i][j]):
                    ok = False
        diag = projected[0][0]
        for i in range(1, model.r):
            if projected[i][i] != diag:
                ok = False
        scalar = None
        if ok:
            lam = diag[lead] * one_coords[lead].inv()
            if all(v == lam * w for v, w in zip(diag, one_coords)):
                scalar = lam
            else:
                ok = False
        records.append(
            {
                "label": label,
                "is_scalar": ok,
                "scalar": scalar.text() if scalar is not None else None,
            }
        )
    return records


def cuspidal_reduction_report(
    algebra: Algebra,
    order: int = 3,
    reflection: int | None = None,
    include_relations: bool = True,
    include_ledger: bool = True,
) -> CuspidalReductionReport:
    """Run the zero-dimensional-leaf pipeline for a base point on a mirror."""
    group = algebra.group
    if not group.reflections:
        raise ValueError("the group has no reflections")
    s = reflection if reflection is not None else group.reflections[0].element
    if not group.is_reflection(s):
        raise ValueError("chosen element is not a reflection")
    b = mirror_base_point(group, s)
    par = stabilizer(group, b)
    if sorted(par.members) != _cyclic_closure(group, s):
        raise ValueError("base point has a larger stabilizer than the reflection")

    model = CentralizerModel(algebra, b, order)
    split = TensorSplit(model.sub_algebra)
    if split.core_algebra.n != 1:
        raise NotImplementedError("only rank-one stabilizers are supported")

    core = split.core_algebra
    pres = RankOneCentre(core)
    chi0 = Fraction(0)
    if not is_poisson_point(pres, chi0):
        raise ValueError(
            "the stabilizer parameters do not make the origin a zero-dimensional leaf"
        )
    res = RestrictedAlgebra(core)
    quotient = point_quotient(res, pres, chi0)
    d = quotient.dim
    rad_dims = quotient.radical_power_dims()
    ss_dim = quotient.semisimple_quotient_dim()

    r = model.r
    predicted = r * r * d

    simples = _simple_module_records(model, quotient, core, res)

    central = _central_scalar_records(model, split, res, quotient)

    relation_summary = None
    if include_relations:
        records = verify_relations(model)
        relation_summary = {
            "checked": len(records),
            "failed": sum(1 for rec in records if not rec["ok"]),
        }

    ledger = dimension_ledger(model) if include_ledger else None

    notes = []
    if not all(c["is_scalar"] for c in central):
        notes.append("a central element failed to act by a scalar on the core quotient")
    if relation_summary and relation_summary["failed"]:
        notes.append("relation residuals did not vanish at the stated order")

    return CuspidalReductionReport(
        group=group.name,
        base_point=[v.text() for v in model.base_point],
        reflection=group.text(s),
        stabilizer_order=model.sub_group.order,
        matrix_size=r,
        core_quotient_dim=d,
        predicted_dim=predicted,
        radical_power_dims=rad_dims,
        semisimple_quotient_dim=ss_dim,
        truncation_order=order,
        coset_reps=[group.text(g) for g in model.coset_reps],
        simple_modules=simples,
        central_elements=central,
        relation_summary=relation_summary,
        ledger=ledger,
        notes=notes,
    )
