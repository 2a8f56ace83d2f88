"""Windowed complexes of finitely generated free modules over an Artinian
quotient ring.

A FreeComplex stores ranks for degrees lo..hi and differentials diff(n):
C_n -> C_{n-1} for lo < n <= hi.  Degrees outside the window have rank 0
for the purpose of mapping in or out, but no exactness claims are made at
the window edges; analyzers report how far inside the window their
verdicts were computed.

Minimalization repeatedly splits off contractible (R -> R) summands by
Gaussian elimination at unit entries, scanning degrees ascending and
entries row-major so the result is reproducible.  It returns inclusion and
projection chain maps witnessing the homotopy equivalence with the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import CrdiamError, OutOfWindow, RingMismatch
from .ffield import Mat
from .polyring import QuotientRing
from .rlinalg import (
    RMat,
    left_mul_operator,
    mat_to_vec,
    right_mul_operator,
    vec_to_mat,
)

NEG_INF = float("-inf")
POS_INF = float("inf")


class FreeComplex:
    """A complex of free R-modules on the window [lo, hi]."""

    def __init__(self, ring: QuotientRing, lo: int, hi: int, ranks, diffs, check=True):
        if hi < lo:
            raise CrdiamError("empty window")
        self.ring = ring
        self.lo = lo
        self.hi = hi
        self._ranks = {n: int(ranks[n]) for n in range(lo, hi + 1)}
        self._diffs = {n: diffs[n] for n in range(lo + 1, hi + 1)}
        self._flat_cache: dict[int, Mat] = {}
        self._modm_cache: dict[int, Mat] = {}
        if check:
            self._check()

    def _check(self):
        for n, d in self._diffs.items():
            if d.shape() != (self.rank(n - 1), self.rank(n)):
                raise CrdiamError(f"differential shape mismatch at degree {n}")
            if not d.ring.same_ring(self.ring):
                raise RingMismatch("differential over a different ring")
        for n in range(self.lo + 2, self.hi + 1):
            if not (self._diffs[n - 1] @ self._diffs[n]).is_zero():
                raise CrdiamError(f"d(d(x)) != 0 at degree {n}")

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def diff(self, n: int) -> RMat:
        if n not in self._diffs:
            raise OutOfWindow(f"no differential stored at degree {n}")
        return self._diffs[n]

    def has_diff(self, n: int) -> bool:
        return n in self._diffs

    def flat_diff(self, n: int) -> Mat:
        if n not in self._flat_cache:
            self._flat_cache[n] = self.diff(n).flatten()
        return self._flat_cache[n]

    def modm_diff(self, n: int) -> Mat:
        if n not in self._modm_cache:
            self._modm_cache[n] = self.diff(n).modm()
        return self._modm_cache[n]

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def total_rank(self) -> int:
        return sum(self._ranks.values())

    def is_zero(self) -> bool:
        return self.total_rank() == 0

    def is_minimal(self) -> bool:
        return all(d.in_radical() for d in self._diffs.values())

    def ranks_list(self) -> list[int]:
        return [self._ranks[n] for n in self.degrees()]

    def __repr__(self):
        return f"FreeComplex[{self.lo},{self.hi}] ranks={self.ranks_list()}"


def shift(c: FreeComplex, m: int) -> FreeComplex:
    """Translation by m: ranks move up by m, differentials pick up (-1)^m."""
    if m == 0:
        return c
    ranks = {n: c.rank(n - m) for n in range(c.lo + m, c.hi + m + 1)}
    diffs = {}
    for n in range(c.lo + m + 1, c.hi + m + 1):
        d = c.diff(n - m)
        diffs[n] = -d if m % 2 else d
    return FreeComplex(c.ring, c.lo + m, c.hi + m, ranks, diffs, check=False)


def dualize(c: FreeComplex) -> FreeComplex:
    """Duality: rank*(n) = rank(-n), diff*(n) = transpose of diff(1-n)."""
    lo, hi = -c.hi, -c.lo
    ranks = {n: c.rank(-n) for n in range(lo, hi + 1)}
    diffs = {n: c.diff(1 - n).T for n in range(lo + 1, hi + 1)}
    return FreeComplex(c.ring, lo, hi, ranks, diffs, check=False)


def direct_sum(a: FreeComplex, b: FreeComplex) -> FreeComplex:
    """Block sum on the intersected window."""
    if not a.ring.same_ring(b.ring):
        raise RingMismatch("direct sum over different rings")
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if hi < lo:
        raise CrdiamError("windows do not overlap")
    ranks = {n: a.rank(n) + b.rank(n) for n in range(lo, hi + 1)}
    diffs = {n: a.diff(n).block_diag(b.diff(n)) for n in range(lo + 1, hi + 1)}
    return FreeComplex(a.ring, lo, hi, ranks, diffs, check=False)


class ChainMap:
    """A degree-d family of matrices mats[n]: C_n -> D_{n+d}.

    `sign` records the commutation convention: diff_D o mat = sign * mat o
    diff_C wherever both sides are defined.  All maps produced by this
    package use sign +1 except periodicity witnesses, which record theirs.
    """

    def __init__(self, source, target, degree, mats, sign=1, check=True):
        self.source = source
        self.target = target
        self.degree = degree
        self.mats = dict(mats)
        self.sign = sign
        if check and not self.commutes():
            raise CrdiamError("not a chain map for the recorded sign")

    def component(self, n: int) -> RMat | None:
        """mats[n], or an explicit zero when one side has rank 0."""
        if n in self.mats:
            return self.mats[n]
        rows = self.target.rank(n + self.degree)
        cols = self.source.rank(n)
        if rows == 0 or cols == 0:
            return RMat.zeros(self.source.ring, rows, cols)
        return None

    def commutes(self) -> bool:
        d = self.degree
        for n in sorted(self.mats):
            upper = self.component(n)
            lower = self.component(n - 1)
            if lower is None:
                continue
            if not self.source.has_diff(n) or not self.target.has_diff(n + d):
                continue
            lhs = self.target.diff(n + d) @ upper
            rhs = (lower @ self.source.diff(n)).scale(
                1 if self.sign == 1 else self.source.ring.field.negl[1]
            )
            if lhs != rhs:
                return False
        return True

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self o inner (inner applied first)."""
        mats = {}
        for n in sorted(inner.mats):
            first = inner.component(n)
            second = self.component(n + inner.degree)
            if first is None or second is None:
                continue
            mats[n] = second @ first
        return ChainMap(
            inner.source,
            self.target,
            self.degree + inner.degree,
            mats,
            sign=self.sign * inner.sign,
            check=False,
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        if other.degree != self.degree:
            raise CrdiamError("degree mismatch in chain map sum")
        mats = {}
        for n in set(self.mats) | set(other.mats):
            a, b = self.component(n), other.component(n)
            if a is None or b is None:
                continue
            mats[n] = a + b
        return ChainMap(self.source, self.target, self.degree, mats, sign=self.sign, check=False)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(
            self.source,
            self.target,
            self.degree,
            {n: m.scale(c) for n, m in self.mats.items()},
            sign=self.sign,
            check=False,
        )

    def __sub__(self, other):
        return self + other.scale(self.source.ring.field.negl[1])

    def shift_by(self, m: int, shifted_source, shifted_target) -> "ChainMap":
        mats = {n + m: mat for n, mat in self.mats.items()}
        return ChainMap(shifted_source, shifted_target, self.degree, mats, sign=self.sign, check=False)

    def block_sum(self, other: "ChainMap", sum_source, sum_target) -> "ChainMap":
        mats = {}
        for n in range(sum_source.lo, sum_source.hi + 1):
            a, b = self.component(n), other.component(n)
            if a is None or b is None:
                continue
            if sum_target.rank(n + self.degree) != a.nrows + b.nrows:
                continue
            mats[n] = a.block_diag(b)
        return ChainMap(sum_source, sum_target, self.degree, mats, sign=self.sign, check=False)


def _component_checked(f: ChainMap, n: int) -> RMat:
    if n < f.source.lo or n > f.source.hi:
        raise OutOfWindow(f"degree {n} outside the window [{f.source.lo}, {f.source.hi}]")
    m = f.component(n)
    if m is None:
        raise OutOfWindow(f"chain map has no component at degree {n}")
    return m


def surjective_at(f: ChainMap, n: int) -> bool:
    """Full row rank of the component at source degree n, reduced mod m."""
    m = _component_checked(f, n)
    if m.nrows == 0:
        return True
    return m.modm().rank() == m.nrows


def split_injective_at(f: ChainMap, n: int) -> bool:
    """Full column rank of the component at source degree n, reduced mod m."""
    m = _component_checked(f, n)
    if m.ncols == 0:
        return True
    return m.modm().rank() == m.ncols


def is_totally_acyclic(c: FreeComplex) -> bool:
    """Exactness of c and of its dual at every interior degree."""
    for cc in (c, dualize(c)):
        for n in range(cc.lo + 1, cc.hi):
            D = cc.ring.dim_k
            flat_n = cc.flat_diff(n)
            cycles = cc.rank(n) * D - flat_n.rank()
            boundaries = cc.flat_diff(n + 1).rank()
            if cycles != boundaries:
                return False
    return True


@dataclass
class MinimalizeResult:
    minimal: FreeComplex
    inclusion: ChainMap  # minimal -> original
    projection: ChainMap  # original -> minimal
    splits: int = 0

    def verify(self) -> bool:
        comp = self.projection.compose(self.inclusion)
        n_ok = all(
            comp.component(n) == RMat.identity(self.minimal.ring, self.minimal.rank(n))
            for n in self.minimal.degrees()
            if self.minimal.rank(n)
        )
        if not n_ok:
            return False
        other = self.inclusion.compose(self.projection)
        ident = identity_map(self.inclusion.target)
        return solve_homotopy(other, ident) is not None


def identity_map(c: FreeComplex) -> ChainMap:
    mats = {n: RMat.identity(c.ring, c.rank(n)) for n in c.degrees()}
    return ChainMap(c, c, 0, mats, check=False)


def _find_unit(ring, mat: RMat):
    for i in range(mat.nrows):
        row = mat.data[i]
        for j in range(mat.ncols):
            if row[j][0] != 0:
                return i, j
    return None


def minimalize(c: FreeComplex) -> MinimalizeResult:
    """Split off contractible summands until every entry lies in the
    maximal ideal.  Returns the minimal subcomplex with inclusion and
    projection chain maps into and out of the input."""
    ring = c.ring
    ranks = {n: c.rank(n) for n in c.degrees()}
    diffs = {n: c.diff(n) for n in range(c.lo + 1, c.hi + 1)}
    incl = {n: RMat.identity(ring, ranks[n]) for n in c.degrees()}
    proj = {n: RMat.identity(ring, ranks[n]) for n in c.degrees()}
    splits = 0

    while True:
        found = None
        for n in range(c.lo + 1, c.hi + 1):
            hit = _find_unit(ring, diffs[n])
            if hit is not None:
                found = (n, *hit)
                break
        if found is None:
            break
        splits += 1
        n, i, j = found
        A = diffs[n]
        u = A.data[i][j]
        u_inv = ring.inv_elem(u)

        # elementary inclusion/projection at degrees n and n-1
        elem_incl_n = _split_incl_top(ring, A, i, j, u_inv)
        elem_incl_n1 = _skip_identity(ring, ranks[n - 1], i)
        elem_proj_n = _skip_identity(ring, ranks[n], j).T
        elem_proj_n1 = _split_proj_bottom(ring, A, i, j, u_inv)

        incl[n] = incl[n] @ elem_incl_n
        incl[n - 1] = incl[n - 1] @ elem_incl_n1
        proj[n] = elem_proj_n @ proj[n]
        proj[n - 1] = elem_proj_n1 @ proj[n - 1]

        # Schur update of the differential at n; neighbours just lose a line
        new = []
        for r in range(A.nrows):
            if r == i:
                continue
            row = []
            arj = A.data[r][j]
            for cidx in range(A.ncols):
                if cidx == j:
                    continue
                val = A.data[r][cidx]
                corr = ring.mul_elem(ring.mul_elem(arj, u_inv), A.data[i][cidx])
                row.append(ring.sub_elem(val, corr))
            new.append(row)
        diffs[n] = RMat(ring, new, shape=(ranks[n - 1] - 1, ranks[n] - 1))
        if n + 1 in diffs:
            diffs[n + 1] = diffs[n + 1].delete_row_col(j, None)
        if n - 1 in diffs:
            diffs[n - 1] = diffs[n - 1].delete_row_col(None, i)
        ranks[n] -= 1
        ranks[n - 1] -= 1

    minimal = FreeComplex(ring, c.lo, c.hi, ranks, diffs, check=False)
    incl_map = ChainMap(minimal, c, 0, incl, check=False)
    proj_map = ChainMap(c, minimal, 0, proj, check=False)
    return MinimalizeResult(minimal, incl_map, proj_map, splits)


def _skip_identity(ring, size, skip) -> RMat:
    """The size x (size-1) inclusion matrix that omits basis vector `skip`."""
    z, o = ring.zero_elem, ring.one_elem
    cols = [r for r in range(size) if r != skip]
    data = [[o if r == cols[c] else z for c in range(size - 1)] for r in range(size)]
    return RMat(ring, data, shape=(size, size - 1))


def _split_incl_top(ring, A: RMat, i, j, u_inv) -> RMat:
    """Inclusion at the source degree: column c maps to e_c - u^-1 A[i][c] e_j."""
    z, o = ring.zero_elem, ring.one_elem
    cols = [cidx for cidx in range(A.ncols) if cidx != j]
    data = []
    for r in range(A.ncols):
        row = []
        for cidx in cols:
            if r == cidx:
                row.append(o)
            elif r == j:
                row.append(ring.neg_elem(ring.mul_elem(u_inv, A.data[i][cidx])))
            else:
                row.append(z)
        data.append(row)
    return RMat(ring, data, shape=(A.ncols, A.ncols - 1))


def _split_proj_bottom(ring, A: RMat, i, j, u_inv) -> RMat:
    """Projection at the target degree: f_i maps to -u^-1 sum A[r][j] f'_r."""
    z, o = ring.zero_elem, ring.one_elem
    rows = [r for r in range(A.nrows) if r != i]
    data = []
    for r in rows:
        row = []
        for cidx in range(A.nrows):
            if cidx == r:
                row.append(o)
            elif cidx == i:
                row.append(ring.neg_elem(ring.mul_elem(u_inv, A.data[r][j])))
            else:
                row.append(z)
        data.append(row)
    return RMat(ring, data, shape=(A.nrows - 1, A.nrows))


def solve_homotopy(f: ChainMap, g: ChainMap) -> ChainMap | None:
    """A degree d+1 family h with f - g = dh + hd on [lo+1, hi], or None.

    Only even-degree maps (commutation sign +1) are supported; that covers
    every use in this package.  The system is solved degree by degree going
    up: the first nontrivial equation is solved jointly in two unknown
    blocks, after which each higher equation has a cycle as its right-hand
    side and interior exactness of the target guarantees a solution.
    """
    if (f.source, f.target, f.degree) != (g.source, g.target, g.degree):
        raise CrdiamError("homotopy requires maps with equal source, target, degree")
    if f.degree % 2 != 0:
        raise CrdiamError("solve_homotopy supports even-degree maps only")
    S, T, d = f.source, f.target, f.degree
    ring = S.ring
    lo, hi = S.lo, S.hi

    def rhs(n):
        a = f.component(n)
        b = g.component(n)
        if a is None and b is None:
            return RMat.zeros(ring, T.rank(n + d), S.rank(n))
        if a is None:
            return -b
        if b is None:
            return a
        return a - b

    h: dict[int, RMat] = {}

    def h_shape(n):
        return (T.rank(n + d + 1), S.rank(n))

    # first degree whose equation has a nonzero-shaped right-hand side
    start = None
    for n in range(lo + 1, hi + 1):
        if T.rank(n + d) and S.rank(n):
            start = n
            break
    if start is None:
        mats = {n: RMat.zeros(ring, *h_shape(n)) for n in range(lo, hi + 1)}
        return ChainMap(S, T, d + 1, mats, check=False)

    for n in range(lo, start - 1):
        h[n] = RMat.zeros(ring, *h_shape(n))

    # joint solve at `start` for (h[start-1], h[start])
    r_top, c_top = h_shape(start)
    r_bot, c_bot = h_shape(start - 1)
    target = rhs(start)
    blocks = []
    widths = []
    if T.has_diff(start + d + 1) and r_top:
        blocks.append(left_mul_operator(T.diff(start + d + 1), r_top, c_top))
        widths.append(("top", r_top, c_top))
    if S.has_diff(start) and r_bot:
        blocks.append(right_mul_operator(S.diff(start), r_bot, c_bot))
        widths.append(("bot", r_bot, c_bot))
    bvec = Mat(ring.field, mat_to_vec(target).reshape(-1, 1))
    if not blocks:
        if not target.is_zero():
            return None
        h.setdefault(start - 1, RMat.zeros(ring, r_bot, c_bot))
        h.setdefault(start, RMat.zeros(ring, r_top, c_top))
    else:
        system = blocks[0]
        for b in blocks[1:]:
            system = system.hstack(b)
        sol = system.solve(bvec)
        if sol is None:
            return None
        off = 0
        got = {}
        for name, rr, cc in widths:
            size = rr * cc * ring.dim_k
            got[name] = vec_to_mat(ring, sol.a[off : off + size, 0], rr, cc)
            off += size
        h[start] = got.get("top", RMat.zeros(ring, r_top, c_top))
        h[start - 1] = got.get("bot", RMat.zeros(ring, r_bot, c_bot))

    # ascend: solve diff_T @ h_n = rhs_n - h_{n-1} @ diff_S per degree
    for n in range(start + 1, hi + 1):
        residual = rhs(n)
        if S.has_diff(n) and h[n - 1].ncols:
            residual = residual - h[n - 1] @ S.diff(n)
        rr, cc = h_shape(n)
        if rr == 0 or cc == 0:
            if not residual.is_zero():
                return None
            h[n] = RMat.zeros(ring, rr, cc)
            continue
        if not T.has_diff(n + d + 1):
            if not residual.is_zero():
                return None
            h[n] = RMat.zeros(ring, rr, cc)
            continue
        flat = T.flat_diff(n + d + 1)
        cols = [
            np.asarray(
                [cchan for e in residual.column(j) for cchan in e], dtype=np.int16
            )
            for j in range(residual.ncols)
        ]
        B = Mat(ring.field, np.array(cols, dtype=np.int16).T.reshape(flat.nrows, len(cols)))
        X = flat.solve(B)
        if X is None:
            return None
        cols_r = [tuple(_chunk(X.a[:, j], ring.dim_k)) for j in range(X.ncols)]
        h[n] = RMat.from_columns(ring, cols_r, rr)
    return ChainMap(S, T, d + 1, h, check=False)


def _chunk(vec, size):
    return [tuple(int(c) for c in vec[i : i + size]) for i in range(0, len(vec), size)]


# ---------- window verdicts ----------


@dataclass
class WindowVerdict:
    """A degree answer computed on a finite window.

    `status` is one of 'exact-in-window' (structurally certain, including
    certified infinite answers), 'stabilized' (unchanged when the window is
    shrunk by the margin), or 'inconclusive'.  Infinite values always carry
    a certificate.
    """

    value: float
    status: str
    window: tuple[int, int]
    certificate: dict | None = None

    def __post_init__(self):
        if self.value in (NEG_INF, POS_INF) and self.certificate is None:
            raise CrdiamError("infinite verdict requires a certificate")

    @property
    def finite(self) -> bool:
        return self.value not in (NEG_INF, POS_INF)

    @property
    def usable(self) -> bool:
        return self.status in ("exact-in-window", "stabilized")

    def to_dict(self):
        if self.value == NEG_INF:
            v = "-inf"
        elif self.value == POS_INF:
            v = "inf"
        else:
            v = int(self.value)
        out = {"value": v, "status": self.status, "window": list(self.window)}
        if self.certificate is not None:
            cert = {
                k: v2 for k, v2 in self.certificate.items() if k not in ("maps",)
            }
            out["certificate"] = cert
        return out


def format_complex(c: FreeComplex, include_matrices=True) -> str:
    """Human-readable display used by the CLI `show` command."""
    lines = []
    degs = "  ".join(f"{n:>4}" for n in c.degrees())
    rks = "  ".join(f"{c.rank(n):>4}" for n in c.degrees())
    lines.append("degree:" + degs)
    lines.append("rank:  " + rks)
    if include_matrices:
        for n in range(c.hi, c.lo, -1):
            mat = c.diff(n)
            lines.append(f"d[{n}]: C_{n} -> C_{n-1}")
            for row in mat.format():
                lines.append("    [" + ", ".join(row) + "]")
    return "\n".join(lines)
