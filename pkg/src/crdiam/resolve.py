"""Minimal free resolutions, dual modules, and complete resolutions.

A module is presented as the cokernel of a relations matrix A: R^a -> R^b.
Every kernel computation flattens to a k-linear problem (the ring is a
finite k-algebra), and minimal generating sets come from Nakayama: lift an
echelon basis of K modulo m*K.

The complete resolution of M splices the minimal resolution F of M with
the transposed minimal resolution G of the dual module M*:

    C_n = F_n (n >= 0),   C_{-n} = (G_{n-1})^T-side (n >= 1),

with the junction C_0 -> C_{-1} given by the transposed generator matrix
of M* inside R^b (evaluation of M against its dual).  Exactness and total
acyclicity of the result are verified, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import FreeComplex, is_totally_acyclic, minimalize
from .errors import CrdiamError, OutOfWindow, SpliceFailure, TooNarrow
from .polyring import QuotientRing
from .rlinalg import (
    RMat,
    column_space_basis,
    image_module_generators,
    kernel_module_generators,
    minimal_generators,
)


@dataclass
class ModulePresentation:
    """M = coker(relations: R^a -> R^b)."""

    ring: QuotientRing
    relations: RMat

    def __post_init__(self):
        if not self.relations.ring.same_ring(self.ring):
            raise CrdiamError("presentation over a different ring")

    @property
    def generators(self) -> int:
        return self.relations.nrows

    def dim_k(self) -> int:
        b = self.generators
        return b * self.ring.dim_k - self.relations.flatten().rank()

    def is_minimal(self) -> bool:
        return self.relations.in_radical()

    def minimalized(self) -> "ModulePresentation":
        """Split unit entries out of the relations matrix; coker unchanged."""
        ring = self.ring
        A = self.relations
        while True:
            hit = None
            for i in range(A.nrows):
                for j in range(A.ncols):
                    if A.data[i][j][0] != 0:
                        hit = (i, j)
                        break
                if hit:
                    break
            if hit is None:
                break
            i, j = hit
            u_inv = ring.inv_elem(A.data[i][j])
            new = []
            for r in range(A.nrows):
                if r == i:
                    continue
                row = []
                for c in range(A.ncols):
                    if c == j:
                        continue
                    corr = ring.mul_elem(
                        ring.mul_elem(A.data[r][j], u_inv), A.data[i][c]
                    )
                    row.append(ring.sub_elem(A.data[r][c], corr))
                new.append(row)
            A = RMat(ring, new, shape=(A.nrows - 1, A.ncols - 1))
        # drop zero columns; they present nothing
        z = ring.zero_elem
        keep = [j for j in range(A.ncols) if any(A.data[i][j] != z for i in range(A.nrows))]
        if len(keep) != A.ncols:
            A = RMat(
                ring,
                [[A.data[i][j] for j in keep] for i in range(A.nrows)],
                shape=(A.nrows, len(keep)),
            )
        return ModulePresentation(self.ring, A)


def free_module(ring: QuotientRing, rank: int) -> ModulePresentation:
    return ModulePresentation(ring, RMat.zeros(ring, rank, 0))


def minimal_free_resolution(m: ModulePresentation, length: int) -> FreeComplex:
    """Minimal free resolution of coker(m) on the window [0, length].

    The presentation is minimalized first, so the degree-0 rank is the
    minimal number of generators and every differential entry lies in the
    maximal ideal.
    """
    if length < 0:
        raise CrdiamError("resolution length must be >= 0")
    ring = m.ring
    pres = m if m.is_minimal() else m.minimalized()
    b0 = pres.generators
    ranks = {0: b0}
    diffs = {}
    if length >= 1:
        k_basis = column_space_basis(pres.relations.flatten())
        gens = minimal_generators(ring, k_basis, b0)
        diffs[1] = RMat.from_columns(ring, gens, b0)
        ranks[1] = len(gens)
        for n in range(2, length + 1):
            gens = kernel_module_generators(ring, diffs[n - 1])
            diffs[n] = RMat.from_columns(ring, gens, ranks[n - 1])
            ranks[n] = len(gens)
    return FreeComplex(ring, 0, length, ranks, diffs, check=True)


@dataclass
class DualModule:
    """M* = Hom(M, R) presented on the kernel generators of the transposed
    relations; `generator_matrix` embeds those generators back in R^b."""

    presentation: ModulePresentation
    generator_matrix: RMat  # b x d, columns are the chosen generators of M*


def dual_module(m: ModulePresentation) -> DualModule:
    ring = m.ring
    pres = m if m.is_minimal() else m.minimalized()
    gens = kernel_module_generators(ring, pres.relations.T)
    V = RMat.from_columns(ring, gens, pres.generators)
    rel_gens = kernel_module_generators(ring, V)
    B = RMat.from_columns(ring, rel_gens, V.ncols)
    dual_pres = ModulePresentation(ring, B)
    # Gorenstein sanity: dualizing preserves k-dimension
    if dual_pres.dim_k() != pres.dim_k():
        raise CrdiamError(
            "dual module has a different k-dimension; ring is not behaving "
            "as an Artinian Gorenstein ring"
        )  # pragma: no cover
    return DualModule(dual_pres, V)


@dataclass
class CompleteResolutionBundle:
    """A minimal totally acyclic complex agreeing with the minimal free
    resolution of its module in all degrees >= comparison_degree."""

    complex: FreeComplex
    module: ModulePresentation
    dual: DualModule
    comparison_degree: int
    free_rank_split: int

    def betti(self) -> dict[int, int]:
        return {n: self.complex.rank(n) for n in self.complex.degrees()}


def complete_resolution(m: ModulePresentation, window: tuple[int, int]) -> CompleteResolutionBundle:
    lo, hi = window
    if lo > -3 or hi < 3:
        raise TooNarrow("complete resolutions need a window containing [-3, 3]")
    ring = m.ring
    pres = m.minimalized()
    if pres.generators == 0 or pres.dim_k() == 0:
        zero = FreeComplex(
            ring,
            lo,
            hi,
            {n: 0 for n in range(lo, hi + 1)},
            {n: RMat.zeros(ring, 0, 0) for n in range(lo + 1, hi + 1)},
            check=False,
        )
        return CompleteResolutionBundle(zero, pres, dual_module(pres), 0, 0)

    F = minimal_free_resolution(pres, hi)
    dual = dual_module(pres)
    V = dual.generator_matrix
    depth_neg = -lo - 1  # need G_0 .. G_{-lo-1}
    G = minimal_free_resolution(dual.presentation, depth_neg)

    ranks = {}
    diffs = {}
    for n in range(0, hi + 1):
        ranks[n] = F.rank(n)
    for n in range(1, hi + 1):
        diffs[n] = F.diff(n)
    for n in range(1, -lo + 1):
        ranks[-n] = G.rank(n - 1)
    diffs[0] = V.T
    for n in range(1, -lo):
        diffs[-n] = G.diff(n).T

    try:
        cx = FreeComplex(ring, lo, hi, ranks, diffs, check=True)
    except CrdiamError as exc:  # pragma: no cover
        raise SpliceFailure(f"junction does not compose to zero: {exc}") from exc

    split = 0
    if not cx.is_minimal():
        # free summands of M show up as units at the junction
        res = minimalize(cx)
        cx = res.minimal
        split = res.splits

    if not is_totally_acyclic(cx):
        raise SpliceFailure("spliced complex is not totally acyclic in the window")

    # dim_k(im d_0) must equal dim_k(M) minus the split-off free part
    d0 = cx.flat_diff(0)
    im_dim = d0.rank()
    expected = pres.dim_k() - split * ring.dim_k
    if im_dim != expected:
        raise SpliceFailure(
            f"image of the junction has k-dimension {im_dim}, expected {expected}"
        )

    comparison = 0 if split == 0 else 1
    for n in range(comparison + 1, hi + 1):
        if cx.rank(n) != F.rank(n) or (n >= 1 and split == 0 and cx.diff(n) != F.diff(n)):
            raise SpliceFailure("positive part disagrees with the minimal resolution")

    return CompleteResolutionBundle(cx, pres, dual, comparison, split)


def syzygy(bundle: CompleteResolutionBundle, n: int) -> ModulePresentation:
    """Presentation of the image of the n-th differential."""
    cx = bundle.complex
    if not cx.has_diff(n):
        raise OutOfWindow(f"no differential at degree {n}")
    ring = cx.ring
    gens = image_module_generators(ring, cx.diff(n))
    G = RMat.from_columns(ring, gens, cx.rank(n - 1))
    rels = kernel_module_generators(ring, G)
    return ModulePresentation(ring, RMat.from_columns(ring, rels, G.ncols))


def betti(bundle: CompleteResolutionBundle) -> dict[int, int]:
    return bundle.betti()


def growth_degree(values: list[int]) -> int | None:
    """Least d whose d-th finite differences are constant, or None when the
    sample is too short to certify one."""
    seq = list(values)
    for d in range(len(seq)):
        if len(seq) < 2:
            return None
        if all(v == seq[0] for v in seq):
            return d
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return None


def _fit_tail(values: list[int]) -> int | None:
    """Growth degree of the longest fittable tail (>= 3 points)."""
    for drop in range(0, max(0, len(values) - 2)):
        d = growth_degree(values[drop:])
        if d is not None:
            return d
    return None


def estimate_complexity(bundle_or_complex, cap: int | None = None) -> tuple[float, str]:
    """Polynomial growth of the rank sequence: 1 + fitted degree.

    Even- and odd-degree subsequences are fitted separately on the upper
    half of the window (the head of a resolution is unstable; head entries
    are dropped until the finite differences stabilize) and the larger
    degree wins.  Returns (value, status) where status is 'stabilized' or
    'inconclusive'; the value is capped at `cap` when given (the number of
    defining generators is the natural cap).
    """
    cx = bundle_or_complex.complex if isinstance(bundle_or_complex, CompleteResolutionBundle) else bundle_or_complex
    if cx.is_zero():
        return 0, "stabilized"
    degrees = list(cx.degrees())
    half = degrees[len(degrees) // 2 :]
    evens = [cx.rank(n) for n in half if n % 2 == 0]
    odds = [cx.rank(n) for n in half if n % 2 != 0]
    fits = [_fit_tail(evens), _fit_tail(odds)]
    if any(f is None for f in fits):
        return (cap if cap is not None else 0), "inconclusive"
    value = 1 + max(fits)
    if cap is not None and value > cap:
        value = cap
    return value, "stabilized"
