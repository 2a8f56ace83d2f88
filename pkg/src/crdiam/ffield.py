"""Exact linear algebra over small finite fields F_{p^e}.

Field elements are integer codes in range(p**e): the code of an element is
the base-p encoding of its coefficient vector with respect to the power
basis of a fixed irreducible modulus polynomial.  Codes 0..p-1 are the
prime-field constants, so 0 and 1 are always the additive and
multiplicative identities and the embedding F_p -> F_{p^e} is the identity
on codes.

All arithmetic is precomputed into lookup tables, and matrices hold codes
in numpy integer arrays, so a single table-driven Gaussian elimination
covers every supported field.  Pivoting is deterministic (first nonzero in
column order) so results are reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import CrdiamError

_MAX_ORDER = 1024
_DTYPE = np.int16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _polmul_mod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _polmod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - 1 - dm
        c = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
    return a


def _irreducible(m, p) -> bool:
    """Trial division by all monic polynomials of degree <= deg(m)//2."""
    deg = len(m) - 1
    for d in range(1, deg // 2 + 1):
        for code in range(p**d):
            tail = [(code // p**i) % p for i in range(d)]
            g = tail + [1]
            if _polmod(m, g, p) == [0] or _trial_divides(g, m, p):
                return False
    return True


def _trial_divides(g, m, p) -> bool:
    return _polmod(m, g, p) == [0]


def _find_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree e over F_p."""
    if e == 1:
        return (0, 1)
    for code in range(p**e):
        tail = [(code // p**i) % p for i in range(e)]
        m = tail + [1]
        if m[0] == 0:
            continue
        if _irreducible(m, p):
            return tuple(m)
    raise CrdiamError(f"no irreducible polynomial of degree {e} over F_{p}")


class Field:
    """The finite field F_{p^e} with table-driven arithmetic."""

    def __init__(self, p: int, e: int = 1, modulus: tuple[int, ...] | None = None):
        if not _is_prime(p):
            raise CrdiamError(f"{p} is not prime")
        if e < 1:
            raise CrdiamError("extension degree must be >= 1")
        q = p**e
        if q > _MAX_ORDER:
            raise CrdiamError(f"field order {q} exceeds supported bound {_MAX_ORDER}")
        self.p = p
        self.e = e
        self.q = q
        if modulus is None:
            modulus = _find_modulus(p, e)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != e + 1 or modulus[e] != 1:
            raise CrdiamError("modulus must be monic of degree e")
        if e > 1 and not _irreducible(list(modulus), p):
            raise CrdiamError("modulus is not irreducible")
        self.modulus = modulus
        self._build_tables()

    def _decode(self, code: int) -> list[int]:
        return [(code // self.p**i) % self.p for i in range(self.e)]

    def _encode(self, coeffs) -> int:
        out = 0
        for i in range(self.e):
            c = coeffs[i] % self.p if i < len(coeffs) else 0
            out += c * self.p**i
        return out

    def _build_tables(self):
        p, q, m = self.p, self.q, list(self.modulus)
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        neg = [0] * q
        for a in range(q):
            va = self._decode(a)
            neg[a] = self._encode([(-x) % p for x in va])
            for b in range(a, q):
                vb = self._decode(b)
                s = self._encode([(x + y) % p for x, y in zip(va, vb)])
                add[a][b] = add[b][a] = s
                prod = _polmod(_polmul_mod_p(va, vb, p), m, p) if a and b else [0]
                c = self._encode(prod)
                mul[a][b] = mul[b][a] = c
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        # scalar (list) and vectorized (numpy) views of the same tables
        self.add = add
        self.mul = mul
        self.negl = neg
        self.invl = inv
        self.add_t = np.array(add, dtype=_DTYPE)
        self.mul_t = np.array(mul, dtype=_DTYPE)
        self.neg_t = np.array(neg, dtype=_DTYPE)
        self.inv_t = np.array(inv, dtype=_DTYPE)

    # scalar helpers
    def sub(self, a, b):
        return self.add[a][self.negl[b]]

    def neg(self, a):
        return self.negl[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.invl[a]

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"


class Mat:
    """A matrix of field codes.  Thin wrapper around a numpy int array."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, a):
        self.field = field
        arr = np.asarray(a, dtype=_DTYPE)
        if arr.ndim != 2:
            raise CrdiamError("Mat requires a 2-dimensional array")
        self.a = arr

    @staticmethod
    def zeros(field, rows, cols):
        return Mat(field, np.zeros((rows, cols), dtype=_DTYPE))

    @staticmethod
    def identity(field, n):
        return Mat(field, np.eye(n, dtype=_DTYPE))

    @property
    def nrows(self):
        return self.a.shape[0]

    @property
    def ncols(self):
        return self.a.shape[1]

    @property
    def T(self):
        return Mat(self.field, self.a.T.copy())

    def copy(self):
        return Mat(self.field, self.a.copy())

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"Mat({self.field!r}, {self.a.tolist()!r})"

    def is_zero(self):
        return not self.a.any()

    def __add__(self, other):
        return Mat(self.field, self.field.add_t[self.a, other.a])

    def __neg__(self):
        return Mat(self.field, self.field.neg_t[self.a])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return Mat(self.field, self.field.mul_t[c, self.a])

    def __matmul__(self, other: "Mat") -> "Mat":
        f = self.field
        A, B = self.a, other.a
        if A.shape[1] != B.shape[0]:
            raise CrdiamError("shape mismatch in matrix product")
        C = np.zeros((A.shape[0], B.shape[1]), dtype=_DTYPE)
        for k in range(A.shape[1]):
            C = f.add_t[C, f.mul_t[A[:, k][:, None], B[k, :][None, :]]]
        return Mat(f, C)

    def hstack(self, other):
        return Mat(self.field, np.hstack([self.a, other.a]))

    def vstack(self, other):
        return Mat(self.field, np.vstack([self.a, other.a]))

    def rref(self):
        """Reduced row echelon form and pivot column list.

        The pivot in each step is the first nonzero entry scanning rows in
        order, which fixes the output uniquely.
        """
        f = self.field
        M = self.a.copy()
        rows, cols = M.shape
        pivots = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(M[r:, c])[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                M[[r, p]] = M[[p, r]]
            M[r] = f.mul_t[f.inv_t[M[r, c]], M[r]]
            others = np.nonzero(M[:, c])[0]
            others = others[others != r]
            if others.size:
                factors = f.neg_t[M[others, c]]
                M[others] = f.add_t[M[others], f.mul_t[factors[:, None], M[r][None, :]]]
            pivots.append(c)
            r += 1
        return Mat(f, M), pivots

    def rank(self) -> int:
        if 0 in self.a.shape:
            return 0
        return len(self.rref()[1])

    def kernel_basis(self) -> list[np.ndarray]:
        """Column vectors spanning the null space, one per free column."""
        f = self.field
        cols = self.ncols
        if cols == 0:
            return []
        if self.nrows == 0:
            return [np.eye(cols, dtype=_DTYPE)[:, j] for j in range(cols)]
        R, pivots = self.rref()
        pivset = set(pivots)
        basis = []
        for c in range(cols):
            if c in pivset:
                continue
            v = np.zeros(cols, dtype=_DTYPE)
            v[c] = 1
            for i, pc in enumerate(pivots):
                v[pc] = f.neg_t[R.a[i, c]]
            basis.append(v)
        return basis

    def solve(self, b: "Mat") -> "Mat | None":
        """Some X with self @ X = b, or None when inconsistent.

        Free variables are set to zero, so the solution is deterministic.
        """
        if b.nrows != self.nrows:
            raise CrdiamError("solve: row count mismatch")
        n = self.ncols
        if b.ncols == 0:
            return Mat.zeros(self.field, n, 0)
        R, pivots = self.hstack(b).rref()
        if any(p >= n for p in pivots):
            return None
        X = np.zeros((n, b.ncols), dtype=_DTYPE)
        for i, pc in enumerate(pivots):
            X[pc, :] = R.a[i, n:]
        return Mat(self.field, X)


def rank(m: Mat) -> int:
    return m.rank()


def kernel_basis(m: Mat) -> list[np.ndarray]:
    return m.kernel_basis()


def solve(a: Mat, b: Mat) -> Mat | None:
    return a.solve(b)


class Subspace:
    """Incrementally built row space of k-vectors, kept in echelon form."""

    def __init__(self, field: Field, ambient: int):
        self.field = field
        self.ambient = ambient
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def dim(self):
        return len(self.rows)

    def reduce(self, vec) -> np.ndarray:
        f = self.field
        v = np.array(vec, dtype=_DTYPE)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c:
                v = f.add_t[v, f.mul_t[f.neg_t[c], row]]
        return v

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def add(self, vec) -> bool:
        """Insert vec's residual; returns True when the dimension grew."""
        f = self.field
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        p = int(nz[0])
        v = f.mul_t[f.inv_t[v[p]], v]
        for i, row in enumerate(self.rows):
            c = row[p]
            if c:
                self.rows[i] = f.add_t[row, f.mul_t[f.neg_t[c], v]]
        where = 0
        while where < len(self.pivots) and self.pivots[where] < p:
            where += 1
        self.rows.insert(where, v)
        self.pivots.insert(where, p)
        return True

    def basis(self) -> list[np.ndarray]:
        return [r.copy() for r in self.rows]
