"""Matrices over an Artinian quotient ring and their k-linear shadows.

An RMat stores entries as staircase coordinate tuples.  Flattening turns an
R-linear map R^a -> R^b into a k-linear map of shape (b*D) x (a*D), where D
is the k-dimension of the ring; kernels, images, and minimal generator
extraction all happen on the flattened side.  A flat vector in k^(b*D)
decodes back to a column in R^b by taking D consecutive coordinates per
component.

Minimal generators of a submodule K <= R^b are chosen by Nakayama: take the
echelon basis of K as a k-space, and keep the vectors that are independent
modulo m*K, scanning in echelon order.  The scan order makes the output
deterministic.
"""

from __future__ import annotations

import numpy as np

from .errors import CrdiamError
from .ffield import Mat, Subspace
from .polyring import QuotientRing

_DTYPE = np.int16


class RMat:
    """A rows x cols matrix over a QuotientRing."""

    __slots__ = ("ring", "nrows", "ncols", "data")

    def __init__(self, ring: QuotientRing, data, shape=None):
        self.ring = ring
        rows = tuple(tuple(e if isinstance(e, tuple) else tuple(e) for e in row) for row in data)
        self.data = rows
        if shape is not None:
            self.nrows, self.ncols = shape
            if rows and (len(rows) != self.nrows or len(rows[0]) != self.ncols):
                raise CrdiamError("explicit shape contradicts data")
            if not rows and self.nrows:
                # rows of width 0
                self.data = tuple(() for _ in range(self.nrows)) if self.ncols == 0 else None
                if self.data is None:
                    raise CrdiamError("nonempty shape with no data")
        else:
            self.nrows = len(rows)
            self.ncols = len(rows[0]) if rows else 0
        for row in self.data:
            if len(row) != self.ncols:
                raise CrdiamError("ragged RMat")

    @staticmethod
    def zeros(ring, rows, cols):
        z = ring.zero_elem
        return RMat(ring, [[z] * cols for _ in range(rows)], shape=(rows, cols))

    @staticmethod
    def identity(ring, n):
        z, o = ring.zero_elem, ring.one_elem
        return RMat(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_polys(ring, polys):
        return RMat(ring, [[ring.nf(p) for p in row] for row in polys])

    @staticmethod
    def from_columns(ring, cols, nrows):
        if not cols:
            return RMat.zeros(ring, nrows, 0)
        return RMat(ring, [[col[i] for col in cols] for i in range(nrows)])

    def column(self, j):
        return tuple(self.data[i][j] for i in range(self.nrows))

    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, RMat)
            and self.ring.same_ring(other.ring)
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.data))

    def is_zero(self):
        z = self.ring.zero_elem
        return all(e == z for row in self.data for e in row)

    def __add__(self, other):
        add = self.ring.add
        return RMat(
            self.ring,
            [
                [add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ],
            shape=(self.nrows, self.ncols),
        )

    def __neg__(self):
        neg = self.ring.neg_elem
        return RMat(
            self.ring,
            [[neg(e) for e in row] for row in self.data],
            shape=(self.nrows, self.ncols),
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        sc = self.ring.scale_elem
        return RMat(
            self.ring,
            [[sc(c, e) for e in row] for row in self.data],
            shape=(self.nrows, self.ncols),
        )

    def __matmul__(self, other: "RMat") -> "RMat":
        if self.ncols != other.nrows:
            raise CrdiamError("shape mismatch in RMat product")
        ring = self.ring
        mul, add, z = ring.mul_elem, ring.add, ring.zero_elem
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = z
                for k in range(self.ncols):
                    a = self.data[i][k]
                    if a == z:
                        continue
                    b = other.data[k][j]
                    if b == z:
                        continue
                    acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(row)
        return RMat(ring, out, shape=(self.nrows, other.ncols))

    @property
    def T(self):
        return RMat(
            self.ring,
            [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            shape=(self.ncols, self.nrows),
        )

    def delete_row_col(self, i: int | None, j: int | None) -> "RMat":
        rows = [
            [e for c, e in enumerate(row) if c != j]
            for r, row in enumerate(self.data)
            if r != i
        ]
        out = RMat.__new__(RMat)
        out.ring = self.ring
        out.data = tuple(tuple(r) for r in rows)
        out.nrows = self.nrows - (i is not None)
        out.ncols = self.ncols - (j is not None)
        return out

    def block_diag(self, other: "RMat") -> "RMat":
        if not self.ring.same_ring(other.ring):
            raise CrdiamError("block_diag over different rings")
        z = self.ring.zero_elem
        out = []
        for row in self.data:
            out.append(list(row) + [z] * other.ncols)
        for row in other.data:
            out.append([z] * self.ncols + list(row))
        return RMat(
            self.ring, out, shape=(self.nrows + other.nrows, self.ncols + other.ncols)
        )

    def modm(self) -> Mat:
        """Reduction modulo the maximal ideal: the constant coordinates."""
        arr = np.array(
            [[e[0] for e in row] for row in self.data], dtype=_DTYPE
        ).reshape(self.nrows, self.ncols)
        return Mat(self.ring.field, arr)

    def in_radical(self) -> bool:
        """True when every entry has zero constant term."""
        return all(e[0] == 0 for row in self.data for e in row)

    def flatten(self) -> Mat:
        """k-matrix of the map R^ncols -> R^nrows in staircase coordinates."""
        ring = self.ring
        D = ring.dim_k
        out = np.zeros((self.nrows * D, self.ncols * D), dtype=_DTYPE)
        z = ring.zero_elem
        for i in range(self.nrows):
            for j in range(self.ncols):
                e = self.data[i][j]
                if e != z:
                    out[i * D : (i + 1) * D, j * D : (j + 1) * D] = ring.mult_matrix(e)
        return Mat(ring.field, out)

    def lift(self):
        """Canonical polynomial lifts of all entries (normal-form reps)."""
        return [[self.ring.coords_to_poly(e) for e in row] for row in self.data]

    def format(self) -> list[list[str]]:
        return [[self.ring.format_elem(e) for e in row] for row in self.data]


def polymat_mul(ring: QuotientRing, A, B):
    """Product of two polynomial matrices in the ambient ring Q."""
    ctx = ring.ctx
    rows = len(A)
    inner = len(B)
    cols = len(B[0]) if inner else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ctx.zero()
            for k in range(inner):
                if A[i][k] and B[k][j]:
                    acc = ctx.add(acc, ctx.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def flat_to_column(ring: QuotientRing, vec) -> tuple:
    """Decode a flat k-vector into a column over R."""
    D = ring.dim_k
    n = len(vec) // D
    return tuple(tuple(int(c) for c in vec[i * D : (i + 1) * D]) for i in range(n))


def column_to_flat(ring: QuotientRing, col) -> np.ndarray:
    return np.array([c for e in col for c in e], dtype=_DTYPE)


def apply_variable(ring: QuotientRing, vec: np.ndarray, var_mats) -> list[np.ndarray]:
    """All products x_i * v for a flat vector v over R^b."""
    D = ring.dim_k
    b = len(vec) // D
    blocks = vec.reshape(b, D)
    out = []
    for vm in var_mats:
        moved = np.zeros_like(blocks)
        f = ring.field
        for i in range(b):
            col = Mat(f, blocks[i].reshape(D, 1))
            moved[i] = (vm @ col).a[:, 0]
        out.append(moved.reshape(-1))
    return out


def _var_mult_mats(ring: QuotientRing) -> list[Mat]:
    return [Mat(ring.field, ring.mult_matrix(v)) for v in ring.var_elems]


def column_space_basis(m: Mat) -> list[np.ndarray]:
    """Echelon basis of the column space, deterministic."""
    R, _ = m.T.rref()
    return [row.copy() for row in R.a if row.any()]


def minimal_generators(ring: QuotientRing, k_basis: list[np.ndarray], ambient: int):
    """Minimal generating columns of the submodule K <= R^ambient spanned
    (over R) by the given k-basis of its underlying k-space.

    Requires that the k-span of k_basis is already an R-submodule, which is
    true for kernels and column spaces of R-matrices.
    """
    if not k_basis:
        return []
    var_mats = _var_mult_mats(ring)
    size = ambient * ring.dim_k
    radical_span = Subspace(ring.field, size)
    for v in k_basis:
        for w in apply_variable(ring, np.asarray(v, dtype=_DTYPE), var_mats):
            radical_span.add(w)
    gens = []
    for v in k_basis:
        if radical_span.add(v):
            gens.append(flat_to_column(ring, v))
    return gens


def kernel_module_generators(ring: QuotientRing, m: RMat):
    """Minimal generators of ker(m: R^ncols -> R^nrows)."""
    basis = m.flatten().kernel_basis()
    return minimal_generators(ring, basis, m.ncols)


def image_module_generators(ring: QuotientRing, m: RMat):
    """Minimal generators of the column space of m inside R^nrows."""
    basis = column_space_basis(m.flatten())
    return minimal_generators(ring, basis, m.nrows)


def left_mul_operator(A: RMat, x_rows: int, x_cols: int) -> Mat:
    """Flat k-matrix of X |-> A @ X on R-matrices X of shape x_rows x x_cols.

    vec layout: entry (i, j) of X occupies coordinates (i*x_cols + j)*D ..
    """
    ring = A.ring
    D = ring.dim_k
    if A.ncols != x_rows:
        raise CrdiamError("left_mul_operator shape mismatch")
    out = np.zeros((A.nrows * x_cols * D, x_rows * x_cols * D), dtype=_DTYPE)
    z = ring.zero_elem
    for r in range(A.nrows):
        for i in range(x_rows):
            e = A.data[r][i]
            if e == z:
                continue
            M = ring.mult_matrix(e)
            for j in range(x_cols):
                ro = (r * x_cols + j) * D
                co = (i * x_cols + j) * D
                blk = out[ro : ro + D, co : co + D]
                out[ro : ro + D, co : co + D] = ring.field.add_t[blk, M]
    return Mat(ring.field, out)


def right_mul_operator(B: RMat, x_rows: int, x_cols: int) -> Mat:
    """Flat k-matrix of X |-> X @ B on R-matrices X of shape x_rows x x_cols."""
    ring = B.ring
    D = ring.dim_k
    if B.nrows != x_cols:
        raise CrdiamError("right_mul_operator shape mismatch")
    out = np.zeros((x_rows * B.ncols * D, x_rows * x_cols * D), dtype=_DTYPE)
    z = ring.zero_elem
    for j in range(x_cols):
        for t in range(B.ncols):
            e = B.data[j][t]
            if e == z:
                continue
            M = ring.mult_matrix(e)
            for i in range(x_rows):
                ro = (i * B.ncols + t) * D
                co = (i * x_cols + j) * D
                blk = out[ro : ro + D, co : co + D]
                out[ro : ro + D, co : co + D] = ring.field.add_t[blk, M]
    return Mat(ring.field, out)


def mat_to_vec(X: RMat) -> np.ndarray:
    return np.array(
        [c for row in X.data for e in row for c in e], dtype=_DTYPE
    )


def vec_to_mat(ring: QuotientRing, vec, rows: int, cols: int) -> RMat:
    D = ring.dim_k
    data = []
    for i in range(rows):
        row = []
        for j in range(cols):
            off = (i * cols + j) * D
            row.append(tuple(int(c) for c in vec[off : off + D]))
        data.append(row)
    return RMat(ring, data, shape=(rows, cols))
