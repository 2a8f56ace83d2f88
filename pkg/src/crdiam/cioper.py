"""Eisenbud operators on complexes over R = Q/(f_1..f_c).

Lifting the differential entrywise to Q (normal-form representatives) and
squaring gives a matrix with entries in the defining ideal; dividing each
entry by the f_j through the tracked cofactors produces the family of c
degree -2 chain endomorphisms t_1..t_c.  Regularity of the defining
sequence forces these to commute with the differential strictly, which the
constructor asserts, and any two of them commute up to homotopy.

The lifted matrices are retained so the defining identity

    lift(d_{n-1}) * lift(d_n) = sum_j f_j * tlift_j(n)

can be audited entry by entry, exactly in Q.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ChainMap, FreeComplex, direct_sum, shift
from .errors import CrdiamError, DivisionFailure, NotInIdeal
from .rlinalg import RMat, polymat_mul


@dataclass
class LinearForm:
    """Coefficients of a k-linear combination of the operators."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if not any(self.coefficients):
            raise CrdiamError("linear form must be nonzero")

    def label(self, field) -> str:
        return "(" + ",".join(str(c) for c in self.coefficients) + ")"


class CIOperatorFamily:
    """The c degree -2 operators on a complex, with their Q-lifts."""

    def __init__(self, base: FreeComplex, ops: list[ChainMap], lifts: dict, audited=True):
        self.base = base
        self.ops = ops
        self.lifts = lifts
        self.audited = audited

    @property
    def count(self) -> int:
        return len(self.ops)

    def operator(self, j: int) -> ChainMap:
        return self.ops[j]

    def linear_form(self, form: LinearForm) -> ChainMap:
        """The degree -2 chain map sum_j a_j t_j."""
        coeffs = form.coefficients
        if len(coeffs) != self.count:
            raise CrdiamError("form length does not match operator count")
        out = None
        for c, op in zip(coeffs, self.ops):
            if not c:
                continue
            piece = op.scale(c)
            out = piece if out is None else out + piece
        if out is None:
            raise CrdiamError("linear form must be nonzero")
        return out

    def shifted(self, m: int, shifted_base: FreeComplex) -> "CIOperatorFamily":
        ops = [op.shift_by(m, shifted_base, shifted_base) for op in self.ops]
        lifts = {
            j: {n + m: mat for n, mat in per.items()} for j, per in self.lifts.items()
        }
        return CIOperatorFamily(shifted_base, ops, lifts, audited=self.audited)

    def block_sum(self, other: "CIOperatorFamily", sum_base: FreeComplex) -> "CIOperatorFamily":
        if self.count != other.count:
            raise CrdiamError("operator counts differ")
        ops = [
            a.block_sum(b, sum_base, sum_base) for a, b in zip(self.ops, other.ops)
        ]
        return CIOperatorFamily(sum_base, ops, {}, audited=False)


def eisenbud_operators(c: FreeComplex, audit: bool = True) -> CIOperatorFamily:
    """Construct the operator family by lift, square, and divide.

    Interior degrees only: t_j(n) exists where d(n-1) and d(n) both do.
    With `audit` the construction re-checks the division identity and the
    strict commutation with the differential; violations raise, since they
    can only come from corrupted inputs or bugs, not from valid complexes.
    """
    ring = c.ring
    nops = len(ring.f)
    mats: list[dict[int, RMat]] = [dict() for _ in range(nops)]
    lifts: dict[int, dict[int, list]] = {j: {} for j in range(nops)}

    for n in range(c.lo + 2, c.hi + 1):
        upper = c.diff(n)
        lower = c.diff(n - 1)
        rows, cols = lower.nrows, upper.ncols
        square = polymat_mul(ring, lower.lift(), upper.lift())
        per_op = [[[None] * cols for _ in range(rows)] for _ in range(nops)]
        for i in range(rows):
            for jj in range(cols):
                try:
                    hs = ring.express_in_ideal(square[i][jj])
                except NotInIdeal as exc:
                    raise DivisionFailure(
                        f"entry ({i},{jj}) of the lifted square at degree {n} "
                        "is not in the defining ideal"
                    ) from exc
                for j in range(nops):
                    per_op[j][i][jj] = hs[j]
        for j in range(nops):
            lifts[j][n] = per_op[j]
            mats[j][n] = RMat(
                ring,
                [[ring.nf(per_op[j][i][jj]) for jj in range(cols)] for i in range(rows)],
                shape=(rows, cols),
            )

    ops = [ChainMap(c, c, -2, mats[j], check=False) for j in range(nops)]
    family = CIOperatorFamily(c, ops, lifts, audited=audit)
    if audit:
        audit_family(family)
    return family


def audit_family(family: CIOperatorFamily) -> None:
    """Exact division identity and strict commutation, every degree."""
    c = family.base
    ring = c.ring
    ctx = ring.ctx
    for n in range(c.lo + 2, c.hi + 1):
        square = polymat_mul(ring, c.diff(n - 1).lift(), c.diff(n).lift())
        rows = len(square)
        cols = len(square[0]) if rows else 0
        for i in range(rows):
            for jj in range(cols):
                acc = ctx.zero()
                for j in range(family.count):
                    acc = ctx.add(
                        acc, ctx.mul(family.lifts[j][n][i][jj], ring.f[j])
                    )
                if acc != square[i][jj]:
                    raise DivisionFailure(
                        f"division identity fails at degree {n}, entry ({i},{jj})"
                    )
    for j, op in enumerate(family.ops):
        for n in range(c.lo + 3, c.hi + 1):
            lhs = c.diff(n - 2) @ op.mats[n]
            rhs = op.mats[n - 1] @ c.diff(n)
            if lhs != rhs:
                raise DivisionFailure(
                    f"operator {j} does not commute strictly with d at degree {n}"
                )


def enumerate_linear_forms(field, count: int) -> list[LinearForm]:
    """One representative per projective class of nonzero coefficient
    vectors: first nonzero coordinate normalized to 1, listed in
    lexicographic order.  There are (q^count - 1)/(q - 1) of them."""
    q = field.q
    forms = []

    def rec(prefix):
        pos = len(prefix)
        if pos == count:
            return
        # leading 1 at this position, everything earlier zero
        tail_slots = count - pos - 1

        def expand(partial, slot):
            if slot == tail_slots:
                forms.append(LinearForm(tuple(prefix) + (1,) + tuple(partial)))
                return
            for v in range(q):
                expand(partial + [v], slot + 1)

        expand([], 0)
        rec(prefix + [0])

    rec([])
    return forms


def linear_form_operator(family: CIOperatorFamily, form: LinearForm) -> ChainMap:
    return family.linear_form(form)
