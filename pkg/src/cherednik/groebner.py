"""Groebner bases over cyclotomic fields (degrevlex order).

Small polynomial systems only: everything this package quotients by is a
zero-dimensional ideal in at most a handful of variables, so plain Buchberger
with the coprime-leading-term criterion and a reduced-basis pass is plenty.
``IdealBasis`` wraps the computed basis with a memoized normal-form map and a
standard-monomial enumeration for zero-dimensional quotients.
"""

from __future__ import annotations

from .cyclotomic import Cyclotomic
from .polynomials import MultiPoly, monomial_key, monomials_up_to

__all__ = ["IdealBasis", "groebner_basis"]

_STEP_BUDGET = 200_000


def _divides(m: tuple[int, ...], n: tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(m, n))


def _lcm(m: tuple[int, ...], n: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(max(a, b) for a, b in zip(m, n))


def _reduce(p: MultiPoly, basis: list[MultiPoly]) -> MultiPoly:
    """Full multivariate division of p by the basis; returns the remainder.

    The working maximum strictly decreases each pass, so monomials moved to
    the remainder are never touched again.
    """
    remainder: dict[tuple[int, ...], Cyclotomic] = {}
    work = dict(p.terms)
    lts = [g.leading() for g in basis]
    while work:
        m = max(work, key=monomial_key)
        c = work.pop(m)
        for g, (lm, lc) in zip(basis, lts):
            if _divides(lm, m):
                shift = tuple(a - b for a, b in zip(m, lm))
                factor = c / lc
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    key = tuple(a + b for a, b in zip(gm, shift))
                    cur = work.get(key)
                    val = -(factor * gc) if cur is None else cur - factor * gc
                    if val.is_zero:
                        work.pop(key, None)
                    else:
                        work[key] = val
                break
        else:
            remainder[m] = c
    return MultiPoly(p.nvars, p.conductor, remainder)


def _spoly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    fm, fc = f.leading()
    gm, gc = g.leading()
    l = _lcm(fm, gm)
    mf = tuple(a - b for a, b in zip(l, fm))
    mg = tuple(a - b for a, b in zip(l, gm))
    one = Cyclotomic.one(f.conductor)
    tf = MultiPoly.monomial(mf, one / fc, f.conductor)
    tg = MultiPoly.monomial(mg, one / gc, f.conductor)
    return tf * f - tg * g


def groebner_basis(gens: list[MultiPoly]) -> list[MultiPoly]:
    """Reduced Groebner basis (degrevlex); monic generators sorted by leading term."""
    basis = [g.monic() for g in gens if not g.is_zero]
    if not basis:
        return []
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    steps = 0
    while pairs:
        steps += 1
        if steps > _STEP_BUDGET:
            raise RuntimeError("Buchberger step budget exceeded")
        i, j = pairs.pop()
        fm, _ = basis[i].leading()
        gm, _ = basis[j].leading()
        if _lcm(fm, gm) == tuple(a + b for a, b in zip(fm, gm)):
            continue  # coprime leading terms: s-poly reduces to zero
        r = _reduce(_spoly(basis[i], basis[j]), basis)
        if not r.is_zero:
            basis.append(r.monic())
            k = len(basis) - 1
            pairs.extend((k, idx) for idx in range(k))
    # minimalize: drop generators whose leading term another divides
    lead = [g.leading()[0] for g in basis]
    keep = []
    for i, m in enumerate(lead):
        if not any(j != i and _divides(lead[j], m) and (lead[j] != m or j < i) for j in range(len(basis))):
            keep.append(i)
    minimal = [basis[i] for i in keep]
    # reduce each generator against the others
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(_reduce(g, others).monic() if others else g)
    reduced.sort(key=lambda g: monomial_key(g.leading()[0]))
    return reduced


class IdealBasis:
    """A polynomial ideal with a lazily computed reduced Groebner basis."""

    def __init__(self, gens: list[MultiPoly], nvars: int | None = None, conductor: int | None = None):
        gens = [g for g in gens if not g.is_zero]
        if gens:
            nvars, conductor = gens[0].nvars, gens[0].conductor
        if nvars is None or conductor is None:
            raise ValueError("empty generating set needs explicit nvars/conductor")
        self.nvars = nvars
        self.conductor = conductor
        self.gens = gens
        self._basis: list[MultiPoly] | None = None
        self._nf_cache: dict[tuple[int, ...], MultiPoly] = {}

    @property
    def basis(self) -> list[MultiPoly]:
        if self._basis is None:
            self._basis = groebner_basis(self.gens)
        return self._basis

    def normal_form(self, p: MultiPoly) -> MultiPoly:
        """Canonical representative of p modulo the ideal (cached per monomial)."""
        basis = self.basis
        out = MultiPoly.zero(self.nvars, self.conductor)
        for m, c in p.terms.items():
            nf = self._nf_cache.get(m)
            if nf is None:
                nf = _reduce(MultiPoly.monomial(m, Cyclotomic.one(self.conductor), self.conductor), basis)
                self._nf_cache[m] = nf
            out = out + nf.scale(c)
        return out

    def contains(self, p: MultiPoly) -> bool:
        return self.normal_form(p).is_zero

    def std_monomials(self) -> list[tuple[int, ...]]:
        """Monomials outside the leading-term ideal, for a zero-dimensional ideal.

        Sorted by degrevlex (small to large).  Raises if the quotient is
        infinite-dimensional, detected via a missing pure power x_i^k among
        the leading terms.
        """
        leads = [g.leading()[0] for g in self.basis]
        bound = [None] * self.nvars
        for m in leads:
            support = [i for i, e in enumerate(m) if e]
            if len(support) == 1:
                i = support[0]
                if bound[i] is None or m[i] < bound[i]:
                    bound[i] = m[i]
        if any(b is None for b in bound):
            raise ValueError("ideal is not zero-dimensional")
        out = []
        maxdeg = sum(b - 1 for b in bound)
        for m in monomials_up_to(self.nvars, maxdeg):
            if all(e < b for e, b in zip(m, bound)) and not any(_divides(l, m) for l in leads):
                out.append(m)
        out.sort(key=monomial_key)
        return out

    def power(self, k: int) -> "IdealBasis":
        """The k-th power of the ideal."""
        if k <= 0:
            raise ValueError("power must be positive")
        gens = list(self.gens)
        out = gens
        for _ in range(k - 1):
            out = [a * b for a in out for b in gens]
        return IdealBasis(out, self.nvars, self.conductor)
