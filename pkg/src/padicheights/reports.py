"""Runnable self-check suites with delimited and graphical reports.

Each suite runs seeded randomized instances of one of the pairing's
defining identities and reports a residual valuation per instance (how
many p-adic digits of the identity hold).  An instance passes when the
residual is zero to its tracked precision and that precision meets the
suite threshold.  Reports render to TSV on stdout, and to CSV plus a
matplotlib figure when an output directory is given.

Suites: weil (Frobenius characteristic polynomial vs. point counts),
axioms (d int = omega, endpoint additivity, exactness), reciprocity
(sum of local indices), symmetry (int_y omega_W'(z) = int_z omega_W(y)),
principal-vanishing (global height of div(f))."""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coleman import ColemanContext, coleman_integral, integral_over_divisor, tiny_integral
from .curve import Divisor, HyperellipticCurve, ThirdKindForm, third_kind_with_residue, residue_divisor
from .errors import ScopeError, PadicHeightsError
from .heights import (
    IdeleCharacter,
    contact_primes,
    global_height,
    validate_character,
)
from .padic import PadicNumber, log0
from .poly import Poly, parse_poly
from .rigidcoh import (
    annihilator,
    frobenius_matrix,
    omega_w,
    psi,
    random_complementary_subspace,
    unit_root_subspace,
)
from .zeta import is_ordinary_from_counts, weil_polynomial


# curves with enough rational points in good position for desk-scale runs;
# x-coordinates listed have rational y on the curve
BUILTIN_CURVES = {
    "e1": ("x^3 - x + 1", ["0", "1", "-1", "5", "1/4"]),
    "e2": ("x^3 + x + 1", ["0", "1/4"]),
    "g2": ("x^5 - x + 1", ["0", "1", "-1"]),
    "g2b": ("x^5 - x^3 + x + 1", ["0"]),
}


def builtin_curve(name: str):
    fstr, xs = BUILTIN_CURVES[name]
    curve = HyperellipticCurve(parse_poly(fstr))
    points = []
    for x in xs:
        P = curve.lift_x(Fraction(x))
        points.append(P)
        points.append(P.involution())
    return curve, points


@dataclass
class SuiteInstance:
    label: str
    residual_valuation: int
    threshold: int
    passed: bool
    note: str = ""


@dataclass
class SuiteReport:
    suite: str
    p: int
    precision: int
    seed: int
    instances: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.instances) and all(i.passed for i in self.instances)

    def add_residual(self, label: str, residual: PadicNumber, threshold: int,
                     note: str = ""):
        ok = residual.is_zero() and residual.precision >= threshold
        rv = residual.precision if residual.is_zero() else residual.valuation
        self.instances.append(SuiteInstance(label, rv, threshold, ok, note))

    def add_check(self, label: str, passed: bool, depth: int, threshold: int,
                  note: str = ""):
        self.instances.append(SuiteInstance(label, depth, threshold,
                                            passed and depth >= threshold, note))

    def rows(self):
        for k, inst in enumerate(self.instances):
            yield {
                "instance": k,
                "label": inst.label,
                "residual_valuation": inst.residual_valuation,
                "threshold": inst.threshold,
                "passed": inst.passed,
                "note": inst.note,
            }

    def summary(self) -> str:
        npass = sum(1 for i in self.instances if i.passed)
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] suite={self.suite} p={self.p} N={self.precision} "
                f"seed={self.seed}: {npass}/{len(self.instances)} instances")


def _zero_residual(value: PadicNumber) -> PadicNumber:
    return value


# -- instance generation helpers ----------------------------------------------


def _good_points(curve, points, p):
    """Points with affine non-Weierstrass reduction and p-integral, nice
    pole position (f(x) a p-unit)."""
    from .padic import valuation_of_rational
    out = []
    for P in points:
        x = Fraction(P.x)
        if x != 0 and valuation_of_rational(x, p) < 0:
            continue
        fx = Fraction(curve.f(x))
        if valuation_of_rational(fx, p) != 0:
            continue
        out.append(P)
    return out


def _xbar(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


def _divisor_pairs(curve, pool, p, rng, count):
    """Randomized pairs (y, z) of degree-zero divisors with disjoint
    supports and disjoint x-coordinates mod p."""
    inf = curve.infinity()
    out = []
    attempts = 0
    while len(out) < count and attempts < 4000:
        attempts += 1
        pts = list(pool)
        rng.shuffle(pts)
        A = pts[0]
        ybits = rng.randrange(3)
        if ybits == 0:
            y = Divisor(curve, [(A, 1), (inf, -1)])
            ybars = {_xbar(A.x, p)}
            yinf = True
        elif ybits == 1:
            y = Divisor(curve, [(A, 1), (A.involution(), -1)])
            ybars = {_xbar(A.x, p)}
            yinf = False
        else:
            B = next((q for q in pts[1:] if _xbar(q.x, p) != _xbar(A.x, p)), None)
            if B is None:
                continue
            y = Divisor(curve, [(A, 1), (B, -1)])
            ybars = {_xbar(A.x, p), _xbar(B.x, p)}
            yinf = False
        cands = [q for q in pts if _xbar(q.x, p) not in ybars]
        if not cands:
            continue
        C = cands[0]
        zbits = rng.randrange(2 if yinf else 3)
        if zbits == 0:
            z = Divisor(curve, [(C, 1), (C.involution(), -1)])
        elif zbits == 1:
            D = next((q for q in cands[1:]
                      if _xbar(q.x, p) != _xbar(C.x, p)), None)
            if D is None:
                continue
            z = Divisor(curve, [(C, 1), (D, -1)])
        else:
            z = Divisor(curve, [(C, 1), (inf, -1)])
        if set(y.support) & set(z.support):
            continue
        out.append((y, z))
    return out


# -- the suites ----------------------------------------------------------------


def suite_weil(seed: int, p: int, precision: int) -> SuiteReport:
    """Characteristic polynomial of the Frobenius matrix vs. the Weil
    polynomial from exhaustive point counts, for the built-in curves at the
    requested prime."""
    report = SuiteReport("weil", p, precision, seed)
    threshold = precision - 4
    for name in ("e1", "e2", "g2"):
        curve, _ = builtin_curve(name)
        if not curve.good_reduction(p):
            continue
        fd = frobenius_matrix(curve, p, precision)
        expect = weil_polynomial(curve, p)
        agree = None
        for c, e in zip(fd.charpoly(), expect):
            d = c - e
            v = d.precision if d.is_zero() else d.valuation
            agree = v if agree is None else min(agree, v)
        match = fd.charpoly_int() == expect
        report.add_check(f"{name}@p={p} charpoly vs counts {expect}",
                         match, agree, threshold)
    return report


def suite_axioms(seed: int, p: int, precision: int,
                 curve_name: str = "e1") -> SuiteReport:
    """d int = omega, endpoint additivity, int dg = g(Q) - g(P), and zero
    loops, on randomized instances."""
    report = SuiteReport("axioms", p, precision, seed)
    rng = random.Random(seed)
    threshold = precision - 2
    curve, points = builtin_curve(curve_name)
    ctx = ColemanContext(curve, p, precision)
    pool = _good_points(curve, points, p)
    g = curve.genus

    # d(primitive) = expansion: tiny-integral primitive differentiates back
    from .coleman import _disk_expansion
    for k in range(6):
        vec = [Fraction(rng.randrange(-4, 5)) for _ in range(2 * g)]
        form = ThirdKindForm(curve, vec)
        P = pool[rng.randrange(len(pool))]
        disk = ctx.disk_of(P)
        series, _, _ = _disk_expansion(form, disk, ctx,
                                       center=ctx.point_coords(P))
        back = series.integrate().differentiate() - series
        rv = precision + 6
        for c in back.coeffs:
            if isinstance(c, PadicNumber):
                rv = min(rv, c.precision if c.is_zero() else c.valuation)
            elif c != 0:
                rv = 0
        report.add_check(f"d(int) = omega at {P} vec={vec}", rv >= threshold,
                         rv, threshold)

    # endpoint additivity on random triples
    for k in range(7):
        vec = [Fraction(rng.randrange(-4, 5)) for _ in range(2 * g)]
        form = ThirdKindForm(curve, vec)
        pts = list(pool)
        rng.shuffle(pts)
        P, Q, R = pts[0], pts[1], pts[2 % len(pts)]
        resid = (coleman_integral(form, P, Q, ctx)
                 + coleman_integral(form, Q, R, ctx)
                 - coleman_integral(form, P, R, ctx))
        report.add_residual(f"additivity {P}->{Q}->{R}", resid, threshold)

    # exactness: int d(g) = g(Q) - g(P) for random polynomials g
    for k in range(5):
        gp = Poly([Fraction(rng.randrange(-5, 6)) for _ in range(4)])
        form = ThirdKindForm(curve, None, exact_poly=gp)
        pts = list(pool)
        rng.shuffle(pts)
        P, Q = pts[0], pts[1]
        lhs = coleman_integral(form, P, Q, ctx)
        rhs = ctx.lz(gp(Q.x) - gp(P.x))
        report.add_residual(f"int d({gp}) {P}->{Q}", lhs - rhs, threshold)

    # zero loops
    for k in range(2):
        vec = [Fraction(rng.randrange(-4, 5)) for _ in range(2 * g)]
        form = ThirdKindForm(curve, vec)
        P = pool[rng.randrange(len(pool))]
        resid = coleman_integral(form, P, P, ctx)
        report.add_residual(f"loop at {P}", resid, threshold)
    return report


def suite_reciprocity(seed: int, p: int, precision: int,
                      curve_name: str = "e1") -> SuiteReport:
    """int_{div f} omega = sum_P Res_P(omega) log f(P) for rational f with
    rational zero/pole set and third-kind omega with disjoint singular
    locus."""
    report = SuiteReport("reciprocity", p, precision, seed)
    rng = random.Random(seed)
    threshold = precision - 2
    curve, points = builtin_curve(curve_name)
    ctx = ColemanContext(curve, p, precision)
    pool = _good_points(curve, points, p)
    g = curve.genus
    made = 0
    attempts = 0
    while made < 10 and attempts < 400:
        attempts += 1
        pts = list(pool)
        rng.shuffle(pts)
        A, B = pts[0], pts[1]
        if _xbar(A.x, p) == _xbar(B.x, p):
            continue
        C = next((q for q in pts[2:]
                  if _xbar(q.x, p) not in (_xbar(A.x, p), _xbar(B.x, p))), None)
        if C is None:
            continue
        # f = (x - x(A)) / (x - x(B)); div f avoids the singular disks of omega
        fdiv = Divisor(curve, [(A, 1), (A.involution(), 1),
                               (B, -1), (B.involution(), -1)])
        if rng.randrange(2):
            D = Divisor(curve, [(C, 1), (curve.infinity(), -1)])
        else:
            D = Divisor(curve, [(C, 1), (C.involution(), -1)])
        omega = third_kind_with_residue(D)
        vec = [Fraction(rng.randrange(-3, 4)) for _ in range(2 * g)]
        omega = omega.with_hol(vec)
        lhs = integral_over_divisor(omega, fdiv, ctx)

        def fval(pt):
            if pt.is_infinity:
                return Fraction(1)
            return (pt.x - A.x) / (pt.x - B.x)

        rhs = PadicNumber.zero(p, precision + 4)
        for pt, m in residue_divisor(omega).items:
            rhs = rhs + m * log0(fval(pt), p, precision + 4)
        report.add_residual(
            f"f=(x-{A.x})/(x-{B.x}), Res(w)={D}", lhs - rhs, threshold)
        made += 1
    return report


def suite_symmetry(seed: int, p: int, precision: int) -> SuiteReport:
    """int_y omega_{W'}(z) = int_z omega_W(y) on randomized divisor pairs,
    for W = unit-root (where ordinary) and a random complementary W."""
    report = SuiteReport("symmetry", p, precision, seed)
    rng = random.Random(seed)
    threshold = precision - 3

    def run_pair(curve_name, ctx, k, y, z):
        fd = ctx.fd
        choices = []
        if is_ordinary_from_counts(ctx.curve, p):
            choices.append(("unit-root", unit_root_subspace(fd)))
        choices.append((f"random({seed + k})",
                        random_complementary_subspace(fd, seed + k)))
        for wname, W in choices:
            Wp = annihilator(W, fd)
            lhs = integral_over_divisor(omega_w(y, W, fd), z, ctx)
            rhs = integral_over_divisor(omega_w(z, Wp, fd), y, ctx)
            report.add_residual(
                f"{curve_name} y={y} z={z} W={wname}", lhs - rhs, threshold)

    plan = [("e1", 4), ("e2", 2), ("g2", 2)]
    for curve_name, count in plan:
        curve, points = builtin_curve(curve_name)
        if not curve.good_reduction(p):
            continue
        pool = _good_points(curve, points, p)
        if len(pool) < 4:
            continue
        ctx = ColemanContext(curve, p, precision)
        for k, (y, z) in enumerate(_divisor_pairs(curve, pool, p, rng, count)):
            run_pair(curve_name, ctx, k, y, z)
    # genus-2 instance with a Weierstrass dlog divisor: z = 2(W) - 2(inf)
    curve, points = builtin_curve("g2b")
    if curve.good_reduction(p):
        pool = _good_points(curve, points, p)
        if len(pool) >= 2:
            ctx = ColemanContext(curve, p, precision)
            A = pool[0]
            wpt = curve.point(-1, 0)
            if _xbar(A.x, p) != _xbar(Fraction(-1), p):
                y = Divisor(curve, [(A, 1), (A.involution(), -1)])
                z = Divisor(curve, [(wpt, 2), (curve.infinity(), -2)])
                run_pair("g2b", ctx, 97, y, z)
    return report


def suite_principal(seed: int, p: int, precision: int) -> SuiteReport:
    """global_height(div f, z) = 0 on constructed instances whose contact
    primes are all good."""
    report = SuiteReport("principal-vanishing", p, precision, seed)
    rng = random.Random(seed)
    threshold = precision - 3
    curve, points = builtin_curve("e1")
    ctx = ColemanContext(curve, p, precision)
    fd = ctx.fd
    W = unit_root_subspace(fd)
    chi = IdeleCharacter.canonical(p, precision)
    pool = _good_points(curve, points, p)
    inf = curve.infinity()
    made = 0
    attempts = 0
    while made < 5 and attempts < 500:
        attempts += 1
        pts = list(pool)
        rng.shuffle(pts)
        A, B = pts[0], pts[1]
        if _xbar(A.x, p) == _xbar(B.x, p):
            continue
        fdiv = Divisor(curve, [(A, 1), (A.involution(), 1),
                               (B, -1), (B.involution(), -1)])
        C = next((q for q in pts[2:]
                  if _xbar(q.x, p) not in (_xbar(A.x, p), _xbar(B.x, p))), None)
        if C is None:
            continue
        z = Divisor(curve, [(C, 1), (inf, -1)]) if rng.randrange(2) \
            else Divisor(curve, [(C, 1), (C.involution(), -1)])
        try:
            bad = [q for q in contact_primes(fdiv, z)
                   if not curve.good_reduction(q) or q == p]
            if bad:
                continue
            hr = global_height(fdiv, z, W, chi, ctx)
        except ScopeError:
            continue
        report.add_residual(
            f"f=(x-{A.x})/(x-{B.x}), z={z}, contacts={sorted(contact_primes(fdiv, z))}",
            hr.total, threshold)
        made += 1
    return report


def suite_character(seed: int, p: int, precision: int) -> SuiteReport:
    """validate_character accepts the one-parameter family and rejects
    unramified or branch-inconsistent data."""
    report = SuiteReport("character", p, precision, seed)
    rng = random.Random(seed)
    threshold = 0
    from .errors import NotClassCharacter, UnramifiedAtP
    for t in (1, 2, rng.randrange(3, 50)):
        chi = IdeleCharacter.canonical(p, precision, t)
        for q in (2, 3, 7, 11):
            if q != p:
                chi.away_values[q] = chi.away_value(q)
        try:
            validate_character(chi)
            report.add_check(f"accepts t={t} canonical", True, precision, threshold)
        except PadicHeightsError as e:
            report.add_check(f"accepts t={t} canonical", False, 0, threshold,
                             note=str(e))
    try:
        validate_character(IdeleCharacter(p, precision, 0))
        report.add_check("rejects t=0", False, 0, threshold)
    except UnramifiedAtP:
        report.add_check("rejects t=0", True, precision, threshold)
    from .padic import LogBranch
    bad = IdeleCharacter(p, precision, 1, branch=LogBranch.from_rational(1, p, precision))
    try:
        validate_character(bad)
        report.add_check("rejects t*c != 0", False, 0, threshold)
    except NotClassCharacter:
        report.add_check("rejects t*c != 0", True, precision, threshold)
    wrong = IdeleCharacter.canonical(p, precision, 1)
    wrong.away_values[3 if p != 3 else 7] = Fraction(1)
    try:
        validate_character(wrong)
        report.add_check("rejects wrong away value", False, 0, threshold)
    except NotClassCharacter:
        report.add_check("rejects wrong away value", True, precision, threshold)
    return report


SUITES = {
    "weil": suite_weil,
    "axioms": suite_axioms,
    "reciprocity": suite_reciprocity,
    "symmetry": suite_symmetry,
    "principal-vanishing": suite_principal,
    "character": suite_character,
}


def run_suite(name: str, seed: int = 0, p: int = 5, precision: int = 8) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed, p, precision)


# -- rendering -----------------------------------------------------------------


def write_tsv(report: SuiteReport, stream) -> None:
    stream.write("instance\tresidual_valuation\tthreshold\tpassed\tlabel\n")
    for row in report.rows():
        stream.write(f"{row['instance']}\t{row['residual_valuation']}\t"
                     f"{row['threshold']}\t{int(row['passed'])}\t{row['label']}\n")
    stream.write(report.summary() + "\n")


def write_csv(report: SuiteReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=[
            "instance", "label", "residual_valuation", "threshold", "passed", "note"])
        writer.writeheader()
        for row in report.rows():
            writer.writerow(row)


def write_figure(report: SuiteReport, path: str) -> None:
    """Bar chart of residual valuations against the pass threshold."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = list(report.rows())
    fig, ax = plt.subplots(figsize=(max(6.0, 0.5 * len(rows) + 2), 4.0))
    xs = [r["instance"] for r in rows]
    vals = [r["residual_valuation"] for r in rows]
    colors = ["#2a7e43" if r["passed"] else "#b03030" for r in rows]
    ax.bar(xs, vals, color=colors)
    if rows:
        thresholds = [r["threshold"] for r in rows]
        ax.step(xs + [xs[-1] + 1], thresholds + [thresholds[-1]],
                where="post", color="#333333", linestyle="--",
                label="pass threshold")
    ax.set_xlabel("instance")
    ax.set_ylabel("residual valuation (digits)")
    ax.set_title(f"{report.suite}: p={report.p}, N={report.precision}, "
                 f"seed={report.seed}")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(report: SuiteReport, out_dir: str) -> tuple[str, str]:
    """Write CSV and PNG into out_dir; returns the two paths."""
    import os
    os.makedirs(out_dir, exist_ok=True)
    stem = f"{report.suite.replace('-', '_')}_p{report.p}_N{report.precision}_s{report.seed}"
    csv_path = os.path.join(out_dir, stem + ".csv")
    png_path = os.path.join(out_dir, stem + ".png")
    write_csv(report, csv_path)
    write_figure(report, png_path)
    return csv_path, png_path
