"""Critical and cocritical degrees, critical diameter, and periodicity.

Conventions implemented by this package, fixed once here:

* The critical degree of a minimal complex relative to an endomorphism of
  degree -q is the least n such that the component landing in every degree
  i > n is surjective; operationally, the largest target degree where
  surjectivity (full row rank modulo the maximal ideal) fails.

* The cocritical degree relative to the endomorphism is the largest n such
  that the component leaving every degree i <= n is split injective;
  operationally, one less than the smallest source degree where split
  injectivity (full column rank modulo the maximal ideal) fails.

* The critical (cocritical) degree of the complex is the minimum (maximum)
  of the relative values over the projective linear forms in the operator
  family, and the realizing form is recorded.

* The cohomological route reads the same numbers off the graded action on
  Ext against the residue field: the critical degree is the top degree
  with nonzero socle, and the cocritical degree is one less than the
  bottom degree with nonzero cosocle.  With these pairings the two routes
  agree degree for degree.

Infinite answers are only ever reported together with a certificate: a
contractible complex, or an explicit degreewise-bijective periodicity
witness that is re-verified before use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cioper import CIOperatorFamily, LinearForm, eisenbud_operators, enumerate_linear_forms
from .complexes import (
    NEG_INF,
    POS_INF,
    ChainMap,
    FreeComplex,
    WindowVerdict,
    minimalize,
    split_injective_at,
    surjective_at,
)
from .errors import CrdiamError, TooNarrow
from .ffield import Mat
from .resolve import CompleteResolutionBundle, ModulePresentation, estimate_complexity
from .rlinalg import RMat

MARGIN = 2  # stabilization shrink on each side


# ---------- graded Ext action ----------


@dataclass
class GradedExtModule:
    """Dimensions and degree +2 action matrices of Ext against the residue
    field, read off a minimal complex and its operator family."""

    lo: int
    hi: int
    dims: dict[int, int]
    actions: dict[tuple[int, int], Mat]  # (j, n): E_n -> E_{n+2}
    count: int

    def action(self, j: int, n: int) -> Mat:
        return self.actions[(j, n)]

    def has_action(self, n: int) -> bool:
        return all((j, n) in self.actions for j in range(self.count))

    def socle_nonzero(self, n: int) -> bool:
        """Common kernel of all actions out of degree n is nonzero."""
        d = self.dims.get(n, 0)
        if d == 0:
            return False
        stack = self.actions[(0, n)]
        for j in range(1, self.count):
            stack = stack.vstack(self.actions[(j, n)])
        return stack.rank() < d

    def cosocle_nonzero(self, n: int) -> bool:
        """Sum of images of the actions into degree n is proper."""
        d = self.dims.get(n, 0)
        if d == 0:
            return False
        stack = self.actions[(0, n - 2)]
        for j in range(1, self.count):
            stack = stack.hstack(self.actions[(j, n - 2)])
        return stack.rank() < d

    def socle_degrees(self) -> list[int]:
        return [n for n in range(self.lo, self.hi - 1) if self.socle_nonzero(n)]

    def cosocle_degrees(self) -> list[int]:
        return [n for n in range(self.lo + 2, self.hi + 1) if self.cosocle_nonzero(n)]


def ext_module(base, family: CIOperatorFamily) -> GradedExtModule:
    """The graded Ext data of a minimal complex.

    `base` may be a CompleteResolutionBundle or a FreeComplex; the family
    must live on the same (minimal) complex."""
    cx = base.complex if isinstance(base, CompleteResolutionBundle) else base
    if family.base is not cx:
        raise CrdiamError("operator family lives on a different complex")
    dims = {n: cx.rank(n) for n in cx.degrees()}
    actions = {}
    for j in range(family.count):
        op = family.operator(j)
        for n in range(cx.lo, cx.hi - 1):
            comp = op.component(n + 2)
            if comp is None:
                continue
            actions[(j, n)] = comp.modm().T
    return GradedExtModule(cx.lo, cx.hi, dims, actions, family.count)


# ---------- periodicity ----------


def _invertible(mat: RMat) -> bool:
    return mat.nrows == mat.ncols and (
        mat.nrows == 0 or mat.modm().rank() == mat.nrows
    )


def detect_periodicity(c: FreeComplex, max_period: int = 4, budget: int = 4096,
                       family: CIOperatorFamily | None = None):
    """Search for a degreewise-bijective degree -q chain map, q <= max_period.

    Returns a certificate dict with the period, the sign eps of the
    commutation rule d o rho = eps * rho o d, and the witnessing matrices;
    or None when no certificate is found within the search budget.  The
    witness is re-verified before being returned.

    When an operator family is supplied, linear forms in the operators that
    are bijective at every window degree are tried first; they are the
    natural period-2 witnesses and need no search.
    """
    if not c.is_minimal():
        raise CrdiamError("periodicity detection expects a minimal complex")
    if c.is_zero():
        return {"kind": "contractible", "period": 0, "sign": 1, "maps": {}}
    field = c.ring.field
    if family is not None and max_period >= 2:
        cert = _form_periodicity(c, family)
        if cert is not None:
            return cert
    for q in range(1, max_period + 1):
        if any(c.rank(n) != c.rank(n - q) for n in range(c.lo + q, c.hi + 1)):
            continue
        for sign in (1, field.negl[1]):
            cert = _literal_periodicity(c, q, sign)
            if cert is None:
                cert = _solved_periodicity(c, q, sign, budget)
            if cert is not None and _verify_periodicity(c, cert):
                return cert
    return None


def _form_periodicity(c, family: CIOperatorFamily):
    """A linear form whose components are bijective on the whole window is a
    period-2 witness."""
    for form in enumerate_linear_forms(c.ring.field, family.count):
        op = family.linear_form(form)
        ok = True
        for n in range(c.lo + 2, c.hi + 1):
            m = op.component(n)
            if m is None or not _invertible(m):
                ok = False
                break
        if not ok:
            continue
        cert = {
            "kind": "linear-form",
            "period": 2,
            "sign": 1,
            "form": list(form.coefficients),
            "maps": dict(op.mats),
        }
        if _verify_periodicity(c, cert):
            return cert
    return None


def _literal_periodicity(c, q, sign):
    for n in range(c.lo + q + 1, c.hi + 1):
        if c.diff(n - q) != c.diff(n).scale(sign):
            return None
    maps = {n: RMat.identity(c.ring, c.rank(n)) for n in range(c.lo + q, c.hi + 1)}
    return {"kind": "literal", "period": q, "sign": sign, "maps": maps}


def _solved_periodicity(c, q, sign, budget):
    """Solve the commutation system and search the solution space for a
    degreewise invertible element."""
    from .rlinalg import left_mul_operator, mat_to_vec, right_mul_operator, vec_to_mat

    ring = c.ring
    field = ring.field
    degrees = list(range(c.lo + q, c.hi + 1))
    shapes = {n: (c.rank(n - q), c.rank(n)) for n in degrees}
    sizes = {n: shapes[n][0] * shapes[n][1] * ring.dim_k for n in degrees}
    total = sum(sizes.values())
    if total == 0 or total > 4000:
        return None
    offset = {}
    pos = 0
    for n in degrees:
        offset[n] = pos
        pos += sizes[n]
    rows = []
    for n in degrees[1:]:
        if not (c.has_diff(n) and c.has_diff(n - q)):
            continue
        rr, cc = shapes[n]
        lop = left_mul_operator(c.diff(n - q), rr, cc)  # d o rho_n
        rrm1, ccm1 = shapes[n - 1]
        rop = right_mul_operator(c.diff(n), rrm1, ccm1)  # rho_{n-1} o d
        block = np.zeros((lop.nrows, total), dtype=np.int16)
        block[:, offset[n] : offset[n] + sizes[n]] = lop.a
        neg = rop.scale(sign).a  # move to the left-hand side with -sign
        neg = field.neg_t[neg]
        block[:, offset[n - 1] : offset[n - 1] + sizes[n - 1]] = neg
        rows.append(block)
    if not rows:
        return None
    system = Mat(field, np.vstack(rows))
    basis = system.kernel_basis()
    if not basis:
        return None
    if field.q ** len(basis) > budget:
        basis = basis[:12]
        if field.q ** len(basis) > budget:
            return None
    for combo in itertools.product(range(field.q), repeat=len(basis)):
        if not any(combo):
            continue
        vec = np.zeros(total, dtype=np.int16)
        for coef, bvec in zip(combo, basis):
            vec = field.add_t[vec, field.mul_t[coef, bvec]]
        maps = {}
        ok = True
        for n in degrees:
            rr, cc = shapes[n]
            m = vec_to_mat(ring, vec[offset[n] : offset[n] + sizes[n]], rr, cc)
            if not _invertible(m):
                ok = False
                break
            maps[n] = m
        if ok:
            return {"kind": "solved", "period": q, "sign": sign, "maps": maps}
    return None


def _verify_periodicity(c, cert) -> bool:
    q = cert["period"]
    sign = cert["sign"]
    maps = cert["maps"]
    for n, m in maps.items():
        if not _invertible(m):
            return False
    for n in range(c.lo + q + 1, c.hi + 1):
        if n not in maps or n - 1 not in maps:
            continue
        if not (c.has_diff(n) and c.has_diff(n - q)):
            continue
        lhs = c.diff(n - q) @ maps[n]
        rhs = (maps[n - 1] @ c.diff(n)).scale(sign)
        if lhs != rhs:
            return False
    return True


# ---------- relative degree scans ----------


@dataclass
class MuScan:
    """Failure sets of one endomorphism on a minimal complex.

    surj_failures holds target degrees i where the component into degree i
    is not surjective; split_failures holds source degrees where the
    component is not split injective.  Verdicts on any subwindow are read
    off these sets.
    """

    degree: int  # the q > 0 with components C_n -> C_{n-q}
    target_range: tuple[int, int]
    source_range: tuple[int, int]
    surj_failures: frozenset
    split_failures: frozenset

    def critical_value(self, t_lo=None, t_hi=None):
        a, b = self.target_range
        a = a if t_lo is None else max(a, t_lo)
        b = b if t_hi is None else min(b, t_hi)
        hits = [i for i in self.surj_failures if a <= i <= b]
        return max(hits) if hits else None

    def cocritical_value(self, s_lo=None, s_hi=None):
        a, b = self.source_range
        a = a if s_lo is None else max(a, s_lo)
        b = b if s_hi is None else min(b, s_hi)
        hits = [i for i in self.split_failures if a <= i <= b]
        return min(hits) - 1 if hits else None


def scan_endomorphism(cx: FreeComplex, op: ChainMap) -> MuScan:
    if op.degree >= 0:
        raise CrdiamError("degree of the endomorphism must be negative")
    q = -op.degree
    t_lo, t_hi = cx.lo, cx.hi - q
    s_lo, s_hi = cx.lo + q, cx.hi
    surj = frozenset(
        i for i in range(t_lo, t_hi + 1) if not surjective_at(op, i + q)
    )
    split = frozenset(
        i for i in range(s_lo, s_hi + 1) if not split_injective_at(op, i)
    )
    return MuScan(q, (t_lo, t_hi), (s_lo, s_hi), surj, split)


# ---------- reports ----------


@dataclass
class DegreeReport:
    kind: str  # crdeg | cocrdeg | diameter
    verdict: WindowVerdict
    realizer: tuple[int, ...] | None = None
    method: str = "matrix-level"
    cohomological_value: float | None = None
    extension_degree: int = 1

    def to_dict(self):
        out = {
            "kind": self.kind,
            "verdict": self.verdict.to_dict(),
            "method": self.method,
            "extension_degree": self.extension_degree,
        }
        if self.realizer is not None:
            out["realizer"] = list(self.realizer)
        if self.cohomological_value is not None:
            out["cohomological_value"] = _encode_value(self.cohomological_value)
        return out


def _encode_value(v):
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "inf"
    return int(v)


class Analysis:
    """Degree analyzers for one totally acyclic complex.

    The input is minimalized on construction; the operator family is built
    on the minimal complex when not supplied.  All analyzer outputs are
    WindowVerdicts with the stabilization policy: a finite value must be
    unchanged when the window shrinks by the margin on both sides, and
    infinite values require a certificate.
    """

    def __init__(self, cx: FreeComplex, family: CIOperatorFamily | None = None,
                 max_period: int = 4):
        if cx.hi - cx.lo < 4:
            raise TooNarrow("analyzers need a window of length at least 4")
        if cx.is_minimal():
            self.cx = cx
            self.minimalization = None
        else:
            res = minimalize(cx)
            self.cx = res.minimal
            self.minimalization = res
            family = None  # a supplied family lives on the wrong complex
        self.family = family if family is not None else eisenbud_operators(self.cx)
        self.max_period = max_period
        self._ext = None
        self._period = False  # False = not computed yet; None = none found
        self._scans: dict[tuple[int, ...], MuScan] = {}
        self._reports: dict[str, DegreeReport] = {}
        self.forms = enumerate_linear_forms(self.cx.ring.field, self.family.count)

    # -- basic views --

    @property
    def ext(self) -> GradedExtModule:
        if self._ext is None:
            self._ext = ext_module(self.cx, self.family)
        return self._ext

    def periodicity(self):
        if self._period is False:
            if self.cx.is_zero():
                self._period = {"kind": "contractible", "period": 0, "sign": 1, "maps": {}}
            else:
                self._period = detect_periodicity(
                    self.cx, self.max_period, family=self.family
                )
        return self._period

    def scan(self, form: LinearForm) -> MuScan:
        key = form.coefficients
        if key not in self._scans:
            op = self.family.linear_form(form)
            self._scans[key] = scan_endomorphism(self.cx, op)
        return self._scans[key]

    def _window(self):
        return (self.cx.lo, self.cx.hi)

    # -- relative degrees for an arbitrary endomorphism --

    def mu_critical(self, op: ChainMap) -> WindowVerdict:
        scan = scan_endomorphism(self.cx, op)
        return self._verdict_from_scan(scan, "cr")

    def mu_cocritical(self, op: ChainMap) -> WindowVerdict:
        scan = scan_endomorphism(self.cx, op)
        return self._verdict_from_scan(scan, "co")

    def _verdict_from_scan(self, scan: MuScan, which: str) -> WindowVerdict:
        window = self._window()
        if which == "cr":
            full = scan.critical_value()
            shrunk = scan.critical_value(
                scan.target_range[0] + MARGIN, scan.target_range[1] - MARGIN
            )
            inf_value = NEG_INF
        else:
            full = scan.cocritical_value()
            shrunk = scan.cocritical_value(
                scan.source_range[0] + MARGIN, scan.source_range[1] - MARGIN
            )
            inf_value = POS_INF
        if full is None:
            cert = self.periodicity()
            if cert is not None:
                return WindowVerdict(inf_value, "exact-in-window", window, cert)
            bound = (
                scan.target_range[0] - 1 if which == "cr" else scan.source_range[1]
            )
            return WindowVerdict(bound, "inconclusive", window)
        status = "stabilized" if full == shrunk else "inconclusive"
        return WindowVerdict(full, status, window)

    # -- degrees over the form family --

    def _aggregate(self, which: str, t_shrink: int = 0):
        """Best value over all forms on the (optionally shrunk) window.

        Returns (value, realizer, saw_unbounded_form)."""
        best = None
        realizer = None
        unbounded = False
        for form in self.forms:
            scan = self.scan(form)
            if which == "cr":
                lo, hi = scan.target_range
                v = scan.critical_value(lo + t_shrink, hi - t_shrink)
            else:
                lo, hi = scan.source_range
                v = scan.cocritical_value(lo + t_shrink, hi - t_shrink)
            if v is None:
                unbounded = True
                continue
            better = (
                best is None
                or (which == "cr" and v < best)
                or (which == "co" and v > best)
            )
            if better:
                best = v
                realizer = form.coefficients
        return best, realizer, unbounded

    def critical_report(self) -> DegreeReport:
        if "cr" not in self._reports:
            self._reports["cr"] = self._degree_report("cr")
        return self._reports["cr"]

    def cocritical_report(self) -> DegreeReport:
        if "co" not in self._reports:
            self._reports["co"] = self._degree_report("co")
        return self._reports["co"]

    def _degree_report(self, which: str) -> DegreeReport:
        kind = "crdeg" if which == "cr" else "cocrdeg"
        window = self._window()
        inf_value = NEG_INF if which == "cr" else POS_INF
        cohom = self._cohom_value(which)

        if self.cx.is_zero():
            cert = self.periodicity()
            verdict = WindowVerdict(inf_value, "exact-in-window", window, cert)
            return DegreeReport(kind, verdict, None, "both-agree", cohom,
                                self.cx.ring.field.e)

        value, realizer, unbounded = self._aggregate(which)
        if unbounded:
            cert = self.periodicity()
            if cert is not None:
                verdict = WindowVerdict(inf_value, "exact-in-window", window, cert)
                method = "both-agree" if cohom == inf_value else "matrix-level"
                return DegreeReport(kind, verdict, None, method, cohom,
                                    self.cx.ring.field.e)
            # a form with no failures in the window but no certificate
            verdict = WindowVerdict(
                value if value is not None else 0, "inconclusive", window
            )
            return DegreeReport(kind, verdict, realizer, "matrix-level", cohom,
                                self.cx.ring.field.e)
        shrunk_value, _, shrunk_unbounded = self._aggregate(which, MARGIN)
        status = "stabilized" if (value == shrunk_value and not shrunk_unbounded) else "inconclusive"
        verdict = WindowVerdict(value, status, window)
        method = "matrix-level"
        if cohom is not None and verdict.usable:
            method = "both-agree" if cohom == value else "routes-disagree"
        return DegreeReport(kind, verdict, realizer, method, cohom,
                            self.cx.ring.field.e)

    # -- cohomological route --

    def _cohom_value(self, which: str):
        v = self.cohomological_verdict(which)
        return v.value if v.usable else None

    def cohomological_verdict(self, which: str) -> WindowVerdict:
        window = self._window()
        E = self.ext
        if which == "cr":
            degs = E.socle_degrees()
            if not degs:
                cert = self.periodicity()
                if cert is not None:
                    return WindowVerdict(NEG_INF, "exact-in-window", window, cert)
                return WindowVerdict(E.lo - 1, "inconclusive", window)
            value = max(degs)
            shrunk = [n for n in degs if E.lo + MARGIN <= n <= E.hi - 2 - MARGIN]
            stable = shrunk and max(shrunk) == value
            return WindowVerdict(value, "stabilized" if stable else "inconclusive", window)
        degs = E.cosocle_degrees()
        if not degs:
            cert = self.periodicity()
            if cert is not None:
                return WindowVerdict(POS_INF, "exact-in-window", window, cert)
            return WindowVerdict(E.hi + 1, "inconclusive", window)
        value = min(degs) - 1
        shrunk = [n for n in degs if E.lo + 2 + MARGIN <= n <= E.hi - MARGIN]
        stable = shrunk and min(shrunk) - 1 == value
        return WindowVerdict(value, "stabilized" if stable else "inconclusive", window)

    # -- diameter --

    def complexity(self):
        return estimate_complexity(self.cx, cap=len(self.cx.ring.f))

    def diameter_report(self) -> DegreeReport:
        window = self._window()
        if self.cx.is_zero():
            cert = self.periodicity()
            verdict = WindowVerdict(NEG_INF, "exact-in-window", window, cert)
            return DegreeReport("diameter", verdict, None, "both-agree", None,
                                self.cx.ring.field.e)
        cxv, status = self.complexity()
        if status != "stabilized":
            return DegreeReport(
                "diameter",
                WindowVerdict(0, "inconclusive", window),
                None,
                "matrix-level",
                None,
                self.cx.ring.field.e,
            )
        if cxv <= 1:
            cert = self.periodicity()
            if cert is None:
                return DegreeReport(
                    "diameter",
                    WindowVerdict(0, "inconclusive", window),
                    None,
                    "matrix-level",
                    None,
                    self.cx.ring.field.e,
                )
            verdict = WindowVerdict(NEG_INF, "exact-in-window", window, cert)
            return DegreeReport("diameter", verdict, None, "both-agree", None,
                                self.cx.ring.field.e)
        cr = self.critical_report()
        co = self.cocritical_report()
        if not (cr.verdict.usable and co.verdict.usable and cr.verdict.finite and co.verdict.finite):
            return DegreeReport(
                "diameter",
                WindowVerdict(0, "inconclusive", window),
                None,
                "matrix-level",
                None,
                self.cx.ring.field.e,
            )
        value = cr.verdict.value - co.verdict.value
        status = (
            "stabilized"
            if cr.verdict.status != "inconclusive" and co.verdict.status != "inconclusive"
            else "inconclusive"
        )
        method = (
            "both-agree"
            if cr.method == "both-agree" and co.method == "both-agree"
            else "matrix-level"
        )
        verdict = WindowVerdict(value, status, window)
        return DegreeReport("diameter", verdict, cr.realizer, method, None,
                            self.cx.ring.field.e)


# ---------- free-standing operation surface ----------


def mu_critical_degree(c: FreeComplex, mu: ChainMap, max_period: int = 4) -> WindowVerdict:
    """Critical degree relative to one endomorphism; the complex is
    minimalized internally and mu is transported along the equivalence."""
    analysis, op = _prepared(c, mu, max_period)
    return analysis.mu_critical(op)


def mu_cocritical_degree(c: FreeComplex, mu: ChainMap, max_period: int = 4) -> WindowVerdict:
    analysis, op = _prepared(c, mu, max_period)
    return analysis.mu_cocritical(op)


def _prepared(c, mu, max_period):
    analysis = Analysis(c, max_period=max_period)
    if analysis.minimalization is None:
        return analysis, mu
    res = analysis.minimalization
    op = res.projection.compose(mu).compose(res.inclusion)
    return analysis, op


def critical_degree(c: FreeComplex, family=None, max_period: int = 4) -> DegreeReport:
    return Analysis(c, family, max_period).critical_report()


def cocritical_degree(c: FreeComplex, family=None, max_period: int = 4) -> DegreeReport:
    return Analysis(c, family, max_period).cocritical_report()


def critical_diameter(c: FreeComplex, family=None, max_period: int = 4) -> DegreeReport:
    return Analysis(c, family, max_period).diameter_report()


def module_diameter(m: ModulePresentation, window: tuple[int, int], max_period: int = 4) -> DegreeReport:
    """Diameter of the minimal complete resolution; 0 for modules of finite
    projective dimension (free modules, in the Artinian setting)."""
    from .resolve import complete_resolution

    pres = m.minimalized()
    if pres.generators == 0 or pres.dim_k() == pres.generators * m.ring.dim_k:
        verdict = WindowVerdict(0, "exact-in-window", window)
        return DegreeReport("diameter", verdict, None, "both-agree", None, m.ring.field.e)
    bundle = complete_resolution(pres, window)
    fam = eisenbud_operators(bundle.complex)
    return Analysis(bundle.complex, fam, max_period).diameter_report()


def crdeg_cohomological(E: GradedExtModule, periodicity=None) -> WindowVerdict:
    """Top nonzero-socle degree of the graded Ext module."""
    degs = E.socle_degrees()
    window = (E.lo, E.hi)
    if not degs:
        if periodicity is not None:
            return WindowVerdict(NEG_INF, "exact-in-window", window, periodicity)
        return WindowVerdict(E.lo - 1, "inconclusive", window)
    value = max(degs)
    shrunk = [n for n in degs if E.lo + MARGIN <= n <= E.hi - 2 - MARGIN]
    stable = bool(shrunk) and max(shrunk) == value
    return WindowVerdict(value, "stabilized" if stable else "inconclusive", window)


def cocrdeg_cohomological(E: GradedExtModule, periodicity=None) -> WindowVerdict:
    """One less than the bottom nonzero-cosocle degree."""
    degs = E.cosocle_degrees()
    window = (E.lo, E.hi)
    if not degs:
        if periodicity is not None:
            return WindowVerdict(POS_INF, "exact-in-window", window, periodicity)
        return WindowVerdict(E.hi + 1, "inconclusive", window)
    value = min(degs) - 1
    shrunk = [n for n in degs if E.lo + 2 + MARGIN <= n <= E.hi - MARGIN]
    stable = bool(shrunk) and min(shrunk) - 1 == value
    return WindowVerdict(value, "stabilized" if stable else "inconclusive", window)
