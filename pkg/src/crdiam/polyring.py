"""Multivariate polynomials over F_{p^e}, Buchberger's algorithm with
cofactor tracking, and Artinian quotient rings R = k[x1..xn]/(f1..fc).

Polynomials are sparse dicts mapping exponent tuples (length n) to nonzero
field codes.  The monomial order is degree-reverse-lexicographic
throughout.  Every Groebner basis element g carries cofactors u with
g = sum_j u_j * f_j as an exact identity in the ambient polynomial ring;
this is what lets express_in_ideal answer in terms of the original
defining generators rather than the basis elements.

Elements of the quotient are coordinate tuples over the staircase (the
standard monomials), with multiplication through a precomputed structure
table.  The staircase is sorted ascending, so coordinate 0 is the
coefficient of the monomial 1 and "unit" means coordinate 0 is nonzero.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import (
    CrdiamError,
    NonHomogeneous,
    NotArtinian,
    NotInIdeal,
    NotRegularSequence,
    ParseError,
)
from .ffield import Field, Mat

Mono = tuple
Poly = dict  # Mono -> nonzero field code


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def degrevlex_key(m: Mono):
    return (sum(m), tuple(-e for e in reversed(m)))


class PolyRing:
    """The ambient polynomial ring Q = k[x1..xn] with degrevlex order."""

    def __init__(self, field: Field, n: int, names: list[str] | None = None):
        if n < 1:
            raise CrdiamError("need at least one variable")
        self.field = field
        self.n = n
        if names is None:
            names = ["x", "y", "z"][:n] if n <= 3 else [f"x{i+1}" for i in range(n)]
        if len(names) != n:
            raise CrdiamError("variable name count mismatch")
        self.names = list(names)

    def zero(self) -> Poly:
        return {}

    def one(self) -> Poly:
        return {(0,) * self.n: 1}

    def const(self, c: int) -> Poly:
        return {(0,) * self.n: c} if c else {}

    def var(self, i: int) -> Poly:
        e = [0] * self.n
        e[i] = 1
        return {tuple(e): 1}

    def add(self, f: Poly, g: Poly) -> Poly:
        fld = self.field
        out = dict(f)
        for m, c in g.items():
            s = fld.add[out.get(m, 0)][c]
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return out

    def neg(self, f: Poly) -> Poly:
        negl = self.field.negl
        return {m: negl[c] for m, c in f.items()}

    def sub(self, f: Poly, g: Poly) -> Poly:
        return self.add(f, self.neg(g))

    def scale(self, c: int, f: Poly) -> Poly:
        if c == 0:
            return {}
        mul = self.field.mul
        return {m: mul[c][co] for m, co in f.items()}

    def term_mul(self, mono: Mono, coeff: int, f: Poly) -> Poly:
        mul = self.field.mul
        return {mono_mul(mono, m): mul[coeff][c] for m, c in f.items()}

    def mul(self, f: Poly, g: Poly) -> Poly:
        fld = self.field
        out: Poly = {}
        for m1, c1 in f.items():
            row = fld.mul[c1]
            for m2, c2 in g.items():
                m = mono_mul(m1, m2)
                s = fld.add[out.get(m, 0)][row[c2]]
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return out

    def lead(self, f: Poly) -> tuple[Mono, int]:
        m = max(f, key=degrevlex_key)
        return m, f[m]

    def degree(self, f: Poly) -> int:
        if not f:
            return -1
        return max(sum(m) for m in f)

    def is_homogeneous(self, f: Poly) -> bool:
        degs = {sum(m) for m in f}
        return len(degs) <= 1

    def divmod_basis(self, f: Poly, basis: list[Poly]):
        """Full reduction of f by an ordered list of divisors.

        Returns (quotients, remainder) with f = sum q_i b_i + r exactly and
        no term of r divisible by any leading monomial of the basis.  At
        each step the largest reducible term is cancelled against the first
        divisor whose leading monomial divides it, so the output is
        deterministic.
        """
        fld = self.field
        leads = [self.lead(b) for b in basis]
        quots = [dict() for _ in basis]
        rem: Poly = {}
        cur = dict(f)
        while cur:
            mono = max(cur, key=degrevlex_key)
            coeff = cur[mono]
            for i, (lm, lc) in enumerate(leads):
                if mono_divides(lm, mono):
                    qm = mono_div(mono, lm)
                    qc = fld.mul[coeff][fld.invl[lc]]
                    q = quots[i]
                    s = fld.add[q.get(qm, 0)][qc]
                    if s:
                        q[qm] = s
                    else:
                        q.pop(qm, None)
                    cur = self.sub(cur, self.term_mul(qm, qc, basis[i]))
                    break
            else:
                rem[mono] = coeff
                del cur[mono]
        return quots, rem

    # ---------- text grammar ----------

    _TERM_SPLIT = re.compile(r"(?=[+-])")

    def parse(self, text: str) -> Poly:
        """Parse strings like 'x1^2*x2 + 3*x2^3' (aliases x,y,z for n<=3)."""
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty polynomial")
        if s == "0":
            return {}
        out = self.zero()
        for piece in filter(None, self._TERM_SPLIT.split(s)):
            out = self.add(out, self._parse_term(piece))
        return out

    def _parse_term(self, piece: str) -> Poly:
        sign = 1
        if piece[0] in "+-":
            if piece[0] == "-":
                sign = -1
            piece = piece[1:]
        if not piece:
            raise ParseError("dangling sign in polynomial")
        coeff = 1
        exps = [0] * self.n
        for factor in piece.split("*"):
            if not factor:
                raise ParseError(f"empty factor in term {piece!r}")
            if factor[0].isdigit():
                if not factor.isdigit():
                    raise ParseError(f"bad coefficient {factor!r}")
                coeff *= int(factor)
                continue
            m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_]*?)(?:\^(\d+))?", factor)
            if not m:
                raise ParseError(f"bad factor {factor!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            if name not in self.names:
                raise ParseError(f"unknown variable {name!r}")
            exps[self.names.index(name)] += exp
        code = (sign * coeff) % self.field.p
        return {tuple(exps): code} if code else {}

    def format(self, f: Poly) -> str:
        if not f:
            return "0"
        parts = []
        for m in sorted(f, key=degrevlex_key, reverse=True):
            c = f[m]
            factors = []
            if c != 1 or not any(m):
                factors.append(str(c))
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.names[i])
                elif e > 1:
                    factors.append(f"{self.names[i]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


class GroebnerElement:
    """A basis element g together with cofactors: g = sum_j cof[j]*f[j]."""

    __slots__ = ("poly", "cof")

    def __init__(self, poly: Poly, cof: list[Poly]):
        self.poly = poly
        self.cof = cof


def groebner_with_cofactors(ctx: PolyRing, gens: list[Poly]) -> list[GroebnerElement]:
    """Reduced Groebner basis of (gens), every element carrying an exact
    representation in terms of the input generators."""
    fld = ctx.field
    c = len(gens)

    def unit_cof(j, coeff=1):
        out = [ctx.zero() for _ in range(c)]
        out[j] = ctx.const(coeff)
        return out

    basis: list[GroebnerElement] = []
    for j, g in enumerate(gens):
        if not g:
            continue
        lm, lc = ctx.lead(g)
        inv = fld.invl[lc]
        basis.append(GroebnerElement(ctx.scale(inv, g), unit_cof(j, inv)))

    def reduce_tracked(poly: Poly, cof: list[Poly]):
        quots, rem = ctx.divmod_basis(poly, [b.poly for b in basis])
        for q, b in zip(quots, basis):
            if q:
                for j in range(c):
                    if b.cof[j]:
                        cof[j] = ctx.sub(cof[j], ctx.mul(q, b.cof[j]))
        return rem, cof

    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        i, j = pairs.pop(0)
        gi, gj = basis[i], basis[j]
        lmi, _ = ctx.lead(gi.poly)
        lmj, _ = ctx.lead(gj.poly)
        lcm = mono_lcm(lmi, lmj)
        if lcm == mono_mul(lmi, lmj):  # coprime leading monomials
            continue
        ti = mono_div(lcm, lmi)
        tj = mono_div(lcm, lmj)
        s = ctx.sub(ctx.term_mul(ti, 1, gi.poly), ctx.term_mul(tj, 1, gj.poly))
        cof = [
            ctx.sub(ctx.term_mul(ti, 1, gi.cof[k]), ctx.term_mul(tj, 1, gj.cof[k]))
            for k in range(c)
        ]
        rem, cof = reduce_tracked(s, cof)
        if rem:
            lm, lc = ctx.lead(rem)
            inv = fld.invl[lc]
            new = GroebnerElement(ctx.scale(inv, rem), [ctx.scale(inv, u) for u in cof])
            basis.append(new)
            pairs.extend((len(basis) - 1, k) for k in range(len(basis) - 1))

    # minimalize: sort by leading monomial and drop any element whose lead
    # is divisible by the lead of an element kept earlier
    order = sorted(range(len(basis)), key=lambda i: degrevlex_key(ctx.lead(basis[i].poly)[0]))
    kept: list[GroebnerElement] = []
    kept_leads: list[Mono] = []
    for i in order:
        lm = ctx.lead(basis[i].poly)[0]
        if any(mono_divides(prev, lm) for prev in kept_leads):
            continue
        kept.append(basis[i])
        kept_leads.append(lm)
    basis = kept

    # tail-reduce each element modulo the others, cofactors following along
    for i in range(len(basis)):
        others = [b.poly for j, b in enumerate(basis) if j != i]
        quots, rem = ctx.divmod_basis(basis[i].poly, others)
        cof = basis[i].cof
        pos = 0
        for j, b in enumerate(basis):
            if j == i:
                continue
            q = quots[pos]
            pos += 1
            if q:
                for k in range(len(cof)):
                    if b.cof[k]:
                        cof[k] = ctx.sub(cof[k], ctx.mul(q, b.cof[k]))
        basis[i] = GroebnerElement(rem, cof)

    basis.sort(key=lambda b: degrevlex_key(ctx.lead(b.poly)[0]))
    return basis


class QuotientRing:
    """R = k[x1..xn]/(f1..fc), Artinian, with its finite monomial basis.

    Construction certifies the complete-intersection hypotheses: the
    generators are homogeneous of degree >= 1, the staircase is finite,
    and dim_k R equals the product of the generator degrees.
    """

    def __init__(self, field: Field, n: int, f: list[Poly], names=None):
        ctx = PolyRing(field, n, names)
        if not f:
            raise NonHomogeneous("need at least one defining generator")
        for g in f:
            if not g or not ctx.is_homogeneous(g) or ctx.degree(g) < 1:
                raise NonHomogeneous(
                    "defining generators must be homogeneous of degree >= 1"
                )
        if len(f) > n:
            raise NotRegularSequence("more generators than variables")
        if len(f) < n:
            raise NotArtinian(
                "an Artinian complete intersection needs as many generators as variables"
            )
        self.field = field
        self.ctx = ctx
        self.n = n
        self.f = [dict(g) for g in f]
        self.groebner = groebner_with_cofactors(ctx, self.f)
        self._gb_polys = [b.poly for b in self.groebner]

        # Artinian check: each variable needs a pure power among the leads.
        leads = [ctx.lead(g)[0] for g in self._gb_polys]
        bounds = [None] * n
        for lm in leads:
            support = [i for i, e in enumerate(lm) if e]
            if len(support) == 1:
                i = support[0]
                if bounds[i] is None or lm[i] < bounds[i]:
                    bounds[i] = lm[i]
        if any(b is None for b in bounds):
            raise NotRegularSequence(
                "quotient is not Artinian; generators are not a regular sequence"
            )

        self.staircase = self._enumerate_staircase(leads, bounds)
        self.dim_k = len(self.staircase)
        expected = 1
        for g in self.f:
            expected *= ctx.degree(g)
        if self.dim_k != expected:
            raise NotRegularSequence(
                f"length test failed: dim_k R = {self.dim_k}, "
                f"product of degrees = {expected}"
            )
        self._mono_index = {m: i for i, m in enumerate(self.staircase)}

        # verify the cofactor identities exactly in Q
        for b in self.groebner:
            acc = ctx.zero()
            for u, gen in zip(b.cof, self.f):
                acc = ctx.add(acc, ctx.mul(u, gen))
            if acc != b.poly:
                raise CrdiamError("cofactor bookkeeping failed")  # pragma: no cover

        self._nf_cache: dict = {}
        self._division_cache: dict = {}
        self._build_structure()

    def _enumerate_staircase(self, leads, bounds):
        monos = []

        def rec(prefix):
            if len(prefix) == self.n:
                m = tuple(prefix)
                if not any(mono_divides(lm, m) for lm in leads):
                    monos.append(m)
                return
            for e in range(bounds[len(prefix)]):
                rec(prefix + [e])

        rec([])
        monos.sort(key=degrevlex_key)
        assert monos and monos[0] == (0,) * self.n
        return monos

    def _build_structure(self):
        D = self.dim_k
        struct = np.zeros((D, D, D), dtype=np.int16)
        for i, mi in enumerate(self.staircase):
            for j in range(i, D):
                mj = self.staircase[j]
                coords = self.poly_to_coords({mono_mul(mi, mj): 1})
                struct[i, j, :] = coords
                struct[j, i, :] = coords
        # mult_from[s][u, v] = coefficient of m_u in m_s * m_v
        self._struct = struct
        self._mult_from = [struct[s].T.copy() for s in range(D)]
        self.zero_elem = (0,) * D
        one = [0] * D
        one[0] = 1
        self.one_elem = tuple(one)
        self.var_elems = [self.nf(self.ctx.var(i)) for i in range(self.n)]

    # ---------- normal forms ----------

    def nf_poly(self, g: Poly) -> Poly:
        """Normal form of g modulo the defining ideal, as a polynomial."""
        _, rem = self.ctx.divmod_basis(g, self._gb_polys)
        return rem

    def poly_to_coords(self, g: Poly) -> tuple:
        rem = self.nf_poly(g)
        out = [0] * self.dim_k
        for m, c in rem.items():
            out[self._mono_index[m]] = c
        return tuple(out)

    def nf(self, g: Poly) -> tuple:
        """Normal form of g as a staircase coordinate tuple."""
        key = tuple(sorted(g.items()))
        hit = self._nf_cache.get(key)
        if hit is None:
            hit = self.poly_to_coords(g)
            self._nf_cache[key] = hit
        return hit

    def coords_to_poly(self, a: tuple) -> Poly:
        """The canonical polynomial lift: the normal-form representative."""
        return {self.staircase[i]: c for i, c in enumerate(a) if c}

    def express_in_ideal(self, g: Poly) -> list[Poly]:
        """Cofactors h with g = sum h_j f_j exactly in Q = k[x..].

        Raises NotInIdeal when the normal form of g is nonzero.  The result
        is verified by re-expansion before being returned.
        """
        key = tuple(sorted(g.items()))
        hit = self._division_cache.get(key)
        if hit is not None:
            return [dict(h) for h in hit]
        quots, rem = self.ctx.divmod_basis(g, self._gb_polys)
        if rem:
            raise NotInIdeal(f"element {self.ctx.format(g)} is not in the ideal")
        h = [self.ctx.zero() for _ in self.f]
        for q, b in zip(quots, self.groebner):
            if q:
                for j in range(len(self.f)):
                    if b.cof[j]:
                        h[j] = self.ctx.add(h[j], self.ctx.mul(q, b.cof[j]))
        acc = self.ctx.zero()
        for hj, fj in zip(h, self.f):
            acc = self.ctx.add(acc, self.ctx.mul(hj, fj))
        if acc != g:
            raise CrdiamError("ideal membership certificate failed")  # pragma: no cover
        self._division_cache[key] = [dict(x) for x in h]
        return h

    # ---------- element arithmetic on coordinate tuples ----------

    def add(self, a: tuple, b: tuple) -> tuple:
        fa = self.field.add
        return tuple(fa[x][y] for x, y in zip(a, b))

    def neg_elem(self, a: tuple) -> tuple:
        negl = self.field.negl
        return tuple(negl[x] for x in a)

    def sub_elem(self, a: tuple, b: tuple) -> tuple:
        return self.add(a, self.neg_elem(b))

    def scale_elem(self, c: int, a: tuple) -> tuple:
        mul = self.field.mul
        return tuple(mul[c][x] for x in a)

    def mul_elem(self, a: tuple, b: tuple) -> tuple:
        fld = self.field
        D = self.dim_k
        out = [0] * D
        struct = self._struct
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = fld.mul[ai]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = row[bj]
                vec = struct[i, j]
                for u in range(D):
                    s = vec[u]
                    if s:
                        out[u] = fld.add[out[u]][fld.mul[c][s]]
        return tuple(out)

    def is_unit(self, a: tuple) -> bool:
        return a[0] != 0

    def inv_elem(self, a: tuple) -> tuple:
        m = Mat(self.field, self.mult_matrix(a))
        e0 = Mat.zeros(self.field, self.dim_k, 1)
        e0.a[0, 0] = 1
        x = m.solve(e0)
        if x is None:
            raise ZeroDivisionError("element is not a unit")
        return tuple(int(v) for v in x.a[:, 0])

    def mult_matrix(self, a: tuple) -> np.ndarray:
        """k-matrix of multiplication by a, columns indexed by staircase."""
        fld = self.field
        out = np.zeros((self.dim_k, self.dim_k), dtype=np.int16)
        for s, c in enumerate(a):
            if c:
                out = fld.add_t[out, fld.mul_t[c, self._mult_from[s]]]
        return out

    def elem_from_int(self, c: int) -> tuple:
        out = [0] * self.dim_k
        out[0] = c % self.field.p
        return tuple(out)

    def format_elem(self, a: tuple) -> str:
        return self.ctx.format(self.coords_to_poly(a))

    def same_ring(self, other: "QuotientRing") -> bool:
        return self is other or (
            self.field == other.field and self.n == other.n and self.f == other.f
        )

    def key(self) -> tuple:
        """Hashable identity used for report provenance."""
        fparts = tuple(tuple(sorted(g.items())) for g in self.f)
        return (self.field.p, self.field.e, self.field.modulus, self.n, fparts)

    def __repr__(self):
        gens = ", ".join(self.ctx.format(g) for g in self.f)
        return f"{self.field!r}[{','.join(self.ctx.names)}]/({gens})"


def build_ring(field: Field, n: int, f: list[Poly], names=None) -> QuotientRing:
    return QuotientRing(field, n, f, names)
