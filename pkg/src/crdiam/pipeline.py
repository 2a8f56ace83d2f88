"""Orchestration: from raw ring and module data to degree reports.

A Workspace owns the defining polynomials and the presentation as plain
coefficient data over the prime field, so the whole tower (ring, dual,
complete resolution, operators, analyzers) can be rebuilt over an
extension field F_{p^e} when the supply of linear forms over F_p is too
small to realize a degree.  Rank-type quantities are invariant under the
extension, so escalation can only refine the matrix-route answers toward
the cohomological ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cioper import eisenbud_operators
from .complexes import (
    FreeComplex,
    direct_sum,
    dualize,
    shift,
    solve_homotopy,
)
from .critical import Analysis, DegreeReport
from .errors import CrdiamError
from .ffield import Field
from .polyring import QuotientRing
from .resolve import CompleteResolutionBundle, ModulePresentation, complete_resolution
from .rlinalg import RMat


@dataclass
class Built:
    """One fully constructed tower at a fixed extension degree."""

    field: Field
    ring: QuotientRing
    presentation: ModulePresentation
    bundle: CompleteResolutionBundle
    analysis: Analysis


class Workspace:
    """A ring plus one presented module, rebuildable over extensions.

    `defining` and `relations` hold polynomials as exponent->coefficient
    dicts with prime-field coefficients; coefficient codes below p embed
    unchanged into every extension, so the same data builds every tower.
    """

    def __init__(self, p: int, nvars: int, defining, relations, window,
                 names=None, max_period: int = 4, label: str = ""):
        self.p = p
        self.nvars = nvars
        self.defining = [dict(f) for f in defining]
        self.relations = [[dict(e) for e in row] for row in relations]
        self.window = tuple(window)
        self.names = names
        self.max_period = max_period
        self.label = label
        self._built: dict[int, Built] = {}

    def built(self, e: int = 1) -> Built:
        if e not in self._built:
            field = Field(self.p, e)
            ring = QuotientRing(field, self.nvars, self.defining, self.names)
            rows = [[ring.nf(entry) for entry in row] for row in self.relations]
            if rows:
                pres = ModulePresentation(ring, RMat(ring, rows))
            else:
                pres = ModulePresentation(ring, RMat.zeros(ring, 0, 0))
            bundle = complete_resolution(pres, self.window)
            family = eisenbud_operators(bundle.complex)
            analysis = Analysis(bundle.complex, family, self.max_period)
            self._built[e] = Built(field, ring, pres, bundle, analysis)
        return self._built[e]

    def degree_reports(self, e_max: int = 2):
        """(crdeg report, cocrdeg report, diameter report), escalating the
        extension degree until both routes agree or e_max is reached."""
        last = None
        for e in range(1, e_max + 1):
            a = self.built(e).analysis
            cr, co = a.critical_report(), a.cocritical_report()
            last = (cr, co, a.diameter_report(), e)
            if _settled(cr) and _settled(co):
                break
        return last


def _settled(report: DegreeReport) -> bool:
    v = report.verdict
    if not v.finite:
        return v.certificate is not None
    return v.usable and report.method == "both-agree"


def settled_degree_pair(ws: Workspace, derive=None, e_max: int = 3):
    """(crdeg report, cocrdeg report, e_used) for the workspace's own
    complex, or for a derived analysis built by `derive(built)`, escalating
    the extension degree until both routes agree."""
    last = None
    for e in range(1, e_max + 1):
        built = ws.built(e)
        a = built.analysis if derive is None else derive(built)
        cr, co = a.critical_report(), a.cocritical_report()
        last = (cr, co, e)
        if _settled(cr) and _settled(co):
            break
    return last


def settled_sum_pair(ws1: Workspace, ws2: Workspace, shift_by: int = 0, e_max: int = 3):
    """Settled degree reports of C1 + (shifted C2)."""
    last = None
    for e in range(1, e_max + 1):
        a = sum_analysis(ws1.built(e), ws2.built(e), shift_by=shift_by,
                         max_period=ws1.max_period)
        cr, co = a.critical_report(), a.cocritical_report()
        last = (cr, co, e)
        if _settled(cr) and _settled(co):
            break
    return last


# ---------- derived analyses ----------


def dual_analysis(built: Built, max_period: int = 4) -> Analysis:
    return Analysis(dualize(built.bundle.complex), max_period=max_period)


def shifted_analysis(built: Built, m: int, max_period: int = 4) -> Analysis:
    cx = built.bundle.complex
    scx = shift(cx, m)
    fam = built.analysis.family.shifted(m, scx)
    return Analysis(scx, fam, max_period)


def sum_analysis(b1: Built, b2: Built, shift_by: int = 0, max_period: int = 4) -> Analysis:
    """Analysis of C1 + (shifted C2); complexes must share the ring."""
    c1 = b1.bundle.complex
    c2 = b2.bundle.complex
    f2 = b2.analysis.family
    if shift_by:
        c2s = shift(c2, shift_by)
        f2 = f2.shifted(shift_by, c2s)
        c2 = c2s
    if not c1.ring.same_ring(c2.ring):
        raise CrdiamError("sum requires complexes over the same ring")
    total = direct_sum(c1, c2)
    fam = b1.analysis.family.block_sum(f2, total)
    return Analysis(total, fam, max_period)


# ---------- the law-by-law verification suite ----------


@dataclass
class CheckResult:
    name: str
    subject: str
    passed: bool
    details: dict

    def to_dict(self):
        return {
            "name": self.name,
            "subject": self.subject,
            "passed": self.passed,
            "details": self.details,
        }


@dataclass
class SuiteReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self):
        return {
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }

    def failures(self):
        return [r for r in self.results if not r.passed]


def _padding_complex(ring, at: int, lo: int, hi: int) -> FreeComplex:
    """A contractible (R -> R) pair at degrees (at, at-1), zero elsewhere."""
    ranks = {n: (1 if n in (at, at - 1) else 0) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        if n == at:
            diffs[n] = RMat.identity(ring, 1)
        else:
            diffs[n] = RMat.zeros(ring, ranks[n - 1], ranks[n])
    return FreeComplex(ring, lo, hi, ranks, diffs, check=False)


def _vals(analysis: Analysis):
    cr = analysis.critical_report()
    co = analysis.cocritical_report()
    return cr, co


def verify_suite(workspaces, e: int = 1, include_pairs: bool = True,
                 self_sum_shift: int = 5) -> SuiteReport:
    """Run every verifiable law on the given workspaces.

    Failures are data, not exceptions: each law contributes CheckResults
    with enough detail to reproduce the comparison.
    """
    results: list[CheckResult] = []
    e_max = min(e + 2, 3)
    settled = [settled_degree_pair(ws, e_max=e_max) for ws in workspaces]
    builds = [
        (ws, ws.built(eu)) for ws, (_, _, eu) in zip(workspaces, settled)
    ]

    for (ws, built), (cr, co, e_used) in zip(builds, settled):
        label = ws.label or repr(built.ring)
        a = built.analysis

        # operator audits: pairwise homotopy commutation (the strict checks
        # already ran in the family constructor)
        fam = a.family
        ok = True
        for i in range(fam.count):
            for j in range(i + 1, fam.count):
                ti, tj = fam.operator(i), fam.operator(j)
                if solve_homotopy(ti.compose(tj), tj.compose(ti)) is None:
                    ok = False
        results.append(
            CheckResult("operator_commutation_up_to_homotopy", label, ok, {})
        )

        # route agreement (after any escalation)
        agree = _settled(cr) and _settled(co)
        results.append(
            CheckResult(
                "route_agreement",
                label,
                agree,
                {
                    "crdeg": cr.verdict.to_dict(),
                    "crdeg_cohomological": _enc(cr.cohomological_value),
                    "cocrdeg": co.verdict.to_dict(),
                    "cocrdeg_cohomological": _enc(co.cohomological_value),
                    "extension_degree": e_used,
                },
            )
        )

        # invariance under padding with a contractible summand
        cx = built.bundle.complex
        if not cx.is_zero():
            mid = (cx.lo + cx.hi) // 2
            padded = direct_sum(cx, _padding_complex(built.ring, mid, cx.lo, cx.hi))
            pa = Analysis(padded, max_period=ws.max_period)
            pcr, pco = _vals(pa)
            results.append(
                CheckResult(
                    "padding_invariance",
                    label,
                    pcr.verdict.value == cr.verdict.value
                    and pco.verdict.value == co.verdict.value,
                    {
                        "padded_crdeg": _enc(pcr.verdict.value),
                        "padded_cocrdeg": _enc(pco.verdict.value),
                    },
                )
            )

        # duality: crdeg(C*) = -cocrdeg(C) - 1 and cocrdeg(C*) = -crdeg(C) - 1
        dcr, dco, _ = settled_degree_pair(
            ws, derive=lambda b: dual_analysis(b, ws.max_period), e_max=e_max
        )
        if cr.verdict.finite and co.verdict.finite and cr.verdict.usable and co.verdict.usable:
            expected_dcr = -co.verdict.value - 1
            expected_dco = -cr.verdict.value - 1
            passed = (
                dcr.verdict.value == expected_dcr and dco.verdict.value == expected_dco
            )
            results.append(
                CheckResult(
                    "duality_degrees",
                    label,
                    passed,
                    {
                        "dual_crdeg": _enc(dcr.verdict.value),
                        "dual_cocrdeg": _enc(dco.verdict.value),
                        "expected": [_enc(expected_dcr), _enc(expected_dco)],
                    },
                )
            )

        # translation identities
        ok = True
        deltas = {}
        for m in range(-3, 4):
            if m == 0:
                continue
            sa = shifted_analysis(built, m, ws.max_period)
            scr, sco = _vals(sa)
            deltas[m] = [_enc(scr.verdict.value), _enc(sco.verdict.value)]
            expect_cr = cr.verdict.value + m if cr.verdict.finite else cr.verdict.value
            expect_co = co.verdict.value + m if co.verdict.finite else co.verdict.value
            if scr.verdict.value != expect_cr or sco.verdict.value != expect_co:
                ok = False
        results.append(CheckResult("shift_identities", label, ok, {"shifted": deltas}))

        # gap forces periodicity: per form, t - s >= 2 + q demands a witness
        ok = True
        triggers = []
        for form in a.forms:
            scan = a.scan(form)
            s = scan.critical_value()
            t = scan.cocritical_value()
            if s is None or t is None:
                continue
            if t - s >= 2 + scan.degree:
                triggers.append(list(form.coefficients))
                if a.periodicity() is None:
                    ok = False
        results.append(
            CheckResult("gap_forces_periodicity", label, ok, {"triggers": triggers})
        )

        # depth/codepth duality across the dual complex, degree by degree
        da = dual_analysis(built, ws.max_period)
        E = a.ext
        Ed = da.ext
        soc_dual = set(Ed.socle_degrees())
        cosoc = set(E.cosocle_degrees())
        ok = True
        mism = []
        for r in range(cx.lo + 2, cx.hi - 1):
            lhs = any(n >= r for n in soc_dual)
            rhs = any(n <= -r for n in cosoc)
            if lhs != rhs:
                ok = False
                mism.append(r)
        results.append(
            CheckResult("depth_codepth_duality", label, ok, {"mismatch_at": mism})
        )

        # a single form eventually surjective left and split injective right
        found = None
        e_found = e_used
        for e_try in range(e, e_max + 1):
            a_try = ws.built(e_try).analysis
            for form in a_try.forms:
                scan = a_try.scan(form)
                s = scan.critical_value()
                t = scan.cocritical_value()
                if s is not None and t is not None:
                    found = list(form.coefficients)
                    e_found = e_try
                    break
            if found or a_try.periodicity() is not None:
                break
        vacuous = a.periodicity() is not None
        results.append(
            CheckResult(
                "simultaneous_form_exists",
                label,
                bool(found) or vacuous,
                {"form": found, "extension_degree": e_found, "periodic": vacuous},
            )
        )

        # sum and retract laws against a shifted copy of the same complex
        if not cx.is_zero():
            scr, sco, _ = settled_sum_pair(ws, ws, shift_by=self_sum_shift, e_max=e_max)
            exp_cr = _max_deg(cr.verdict.value, _shift_val(cr.verdict.value, self_sum_shift))
            exp_co = _min_deg(co.verdict.value, _shift_val(co.verdict.value, self_sum_shift))
            results.append(
                CheckResult(
                    "sum_laws_self_shift",
                    label,
                    scr.verdict.value == exp_cr and sco.verdict.value == exp_co,
                    {
                        "sum_crdeg": _enc(scr.verdict.value),
                        "sum_cocrdeg": _enc(sco.verdict.value),
                        "expected": [_enc(exp_cr), _enc(exp_co)],
                    },
                )
            )

    # cross-module sums within each ring
    if include_pairs:
        for idx1 in range(len(builds)):
            for idx2 in range(idx1 + 1, len(builds)):
                ws1, b1 = builds[idx1]
                ws2, b2 = builds[idx2]
                if not b1.ring.same_ring(b2.ring):
                    continue
                label = f"{ws1.label or idx1}+{ws2.label or idx2}"
                cr1, co1, _ = settled[idx1]
                cr2, co2, _ = settled[idx2]
                scr, sco, _ = settled_sum_pair(ws1, ws2, e_max=e_max)
                exp_cr = _max_deg(cr1.verdict.value, cr2.verdict.value)
                exp_co = _min_deg(co1.verdict.value, co2.verdict.value)
                sum_ok = scr.verdict.value == exp_cr and sco.verdict.value == exp_co
                results.append(
                    CheckResult(
                        "sum_laws",
                        label,
                        sum_ok,
                        {
                            "sum_crdeg": _enc(scr.verdict.value),
                            "sum_cocrdeg": _enc(sco.verdict.value),
                            "expected": [_enc(exp_cr), _enc(exp_co)],
                        },
                    )
                )
                # retract bounds with at least one equality on each side
                s = scr.verdict.value
                t = sco.verdict.value
                cr_ok = (
                    cr1.verdict.value <= s
                    and cr2.verdict.value <= s
                    and (cr1.verdict.value == s or cr2.verdict.value == s)
                )
                co_ok = (
                    co1.verdict.value >= t
                    and co2.verdict.value >= t
                    and (co1.verdict.value == t or co2.verdict.value == t)
                )
                results.append(
                    CheckResult(
                        "retract_bounds",
                        label,
                        cr_ok and co_ok,
                        {
                            "summand_crdegs": [_enc(cr1.verdict.value), _enc(cr2.verdict.value)],
                            "summand_cocrdegs": [_enc(co1.verdict.value), _enc(co2.verdict.value)],
                        },
                    )
                )

    return SuiteReport(results)


def _enc(v):
    if v is None:
        return None
    if v == float("-inf"):
        return "-inf"
    if v == float("inf"):
        return "inf"
    return int(v)


def _shift_val(v, m):
    if v in (float("-inf"), float("inf")):
        return v
    return v + m


def _max_deg(a, b):
    return max(a, b)


def _min_deg(a, b):
    return min(a, b)
