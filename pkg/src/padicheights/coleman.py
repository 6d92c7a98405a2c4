"""Coleman integration of holomorphic and third-kind differentials.

Within a residue disk the primitive is the termwise-integrated local
expansion (plus log terms at a pole in the disk center).  Across disks the
integrals of the basis classes between Teichmueller points solve the
Frobenius-equivariance linear system

    (Id - M^T) I = h(tau_Q) - h(tau_P),      phi^* w_i = d h_i + sum M[j][i] w_j,

and the log classes eta give one extra equation each with the factor
(1 - p).  Endpoints at infinity or in Weierstrass disks are routed through
the involution-fixed disk center: for any fixed point C the involution
gives int_C^Q omega = (1/2) int_{iota Q}^Q omega + (explicit dlog terms),
because the even part of omega integrates to an elementary log and the odd
part is antisymmetric.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BadIntegrality,
    DifferentDisks,
    EndpointAtPole,
    SingularDiskEndpoint,
    UnsupportedSupport,
)
from . import linalg
from .curve import (
    AFFINE,
    INFINITY,
    WEIERSTRASS,
    CurvePoint,
    DiskChart,
    Divisor,
    HyperellipticCurve,
    ResidueDisk,
    ThirdKindForm,
    hensel_root,
    localize,
    padic_chart,
    reduce_point,
    _chart_affine,
    _poly_at_series,
)
from .padic import LogBranch, PadicNumber, log as padic_log, sqrt as padic_sqrt, teichmuller
from .poly import Poly, TruncatedSeries
from .rigidcoh import FrobeniusData, frobenius_matrix, _pole_groups


class ColemanContext:
    """Curve, prime, precision, Frobenius data, and the log branch used for
    every logarithm in the integration theory."""

    def __init__(self, curve: HyperellipticCurve, p: int, precision: int,
                 branch: LogBranch | None = None,
                 frobenius: FrobeniusData | None = None):
        curve.require_good_reduction(p)
        self.curve = curve
        self.p = p
        self.precision = precision
        self.branch = branch if branch is not None else LogBranch.iwasawa(p, precision)
        self.fd = frobenius if frobenius is not None else frobenius_matrix(curve, p, precision)
        self.trunc = precision + 16
        self._teich: dict = {}
        self._charts: dict = {}

    # -- localization helpers -------------------------------------------

    def lz(self, v) -> PadicNumber:
        return localize(v, self.p, self.precision + 6)

    def log(self, x: PadicNumber) -> PadicNumber:
        return padic_log(x, self.branch)

    def point_coords(self, pt) -> tuple:
        """(x, y) as PadicNumber, or None for infinity; accepts exact
        CurvePoints and internal p-adic point tuples."""
        if isinstance(pt, CurvePoint):
            if pt.is_infinity:
                return None
            return (self.lz(pt.x), self.lz(pt.y))
        if pt == "infinity":
            return None
        return pt

    def involution(self, pt):
        if isinstance(pt, CurvePoint):
            return pt.involution()
        if pt == "infinity":
            return pt
        x, y = pt
        return (x, -y)

    def disk_of(self, pt) -> ResidueDisk:
        """Residue disk for integration purposes: unlike reduce_point, a
        point with negative-valuation coordinates is recharted into the
        infinite disk (the tiny-integral machinery handles it via t = x^g/y)."""
        if isinstance(pt, CurvePoint):
            if pt.is_infinity:
                return ResidueDisk(self.curve, self.p, INFINITY)
            pt = (self.lz(pt.x), self.lz(pt.y))
        if pt == "infinity":
            return ResidueDisk(self.curve, self.p, INFINITY)
        x, y = pt
        if x.valuation < 0 or y.valuation < 0:
            g = self.curve.genus
            if (not x.is_zero() and not y.is_zero()
                    and x.valuation % 2 == 0
                    and y.valuation * 2 == x.valuation * (2 * g + 1)):
                return ResidueDisk(self.curve, self.p, INFINITY)
            raise BadIntegrality("point coordinates are not p-integral")
        xbar = x.residue()
        ybar = y.residue()
        kind = WEIERSTRASS if ybar == 0 else AFFINE
        return ResidueDisk(self.curve, self.p, kind,
                           xbar, 0 if kind == WEIERSTRASS else ybar)

    def teichmuller_point(self, disk: ResidueDisk):
        """The Frobenius-fixed point of an affine non-Weierstrass disk."""
        key = disk.key()
        if key not in self._teich:
            if disk.xbar == 0:
                xt = PadicNumber.zero(self.p, self.precision + 6)
            else:
                xt = teichmuller(PadicNumber.from_int(disk.xbar, self.p,
                                                      self.precision + 6))
            fx = self.curve.f_localized(self.p, self.precision + 6)(xt)
            yt = padic_sqrt(fx, disk.ybar)
            self._teich[key] = (xt, yt)
        return self._teich[key]

    def center_chart(self, kind: str, xbar=None) -> DiskChart:
        key = (kind, xbar)
        if key not in self._charts:
            self._charts[key] = padic_chart(self.curve, self.p,
                                            self.precision + 6, kind,
                                            x0=xbar, trunc=self.trunc)
        return self._charts[key]

    def weierstrass_center(self, xbar: int):
        x = hensel_root(self.curve.f, xbar, self.p, self.precision + 6)
        return (x, PadicNumber.zero(self.p, self.precision + 6))


class PreparedForm:
    """A third-kind form decomposed for integration: basis coordinates,
    eta coefficients per pole pair, explicit dlog coefficients, and the
    singular reduction data."""

    def __init__(self, form: ThirdKindForm, ctx: ColemanContext):
        self.form = form
        self.ctx = ctx
        p = ctx.p
        self.hol = [ctx.lz(c) for c in form.hol]
        self.groups = _pole_groups(form, p)  # (a, b, eta weight)
        # dlog(x - a) coefficients: n/2 per nu block, n per Weierstrass block
        logs: dict[Fraction, Fraction] = {}
        for P, n in form.poles:
            a = Fraction(P.x)
            logs[a] = logs.get(a, Fraction(0)) + Fraction(n, 2)
        for a, n in form.wpoles:
            a = Fraction(a)
            logs[a] = logs.get(a, Fraction(0)) + n
        self.even_logs = sorted((a, c) for a, c in logs.items() if c != 0)
        self.singular_xbars = set()
        for a, _, _ in self.groups:
            self.singular_xbars.add(_xbar(a, p))
        self.w_xbars = set()
        for a, n in form.wpoles:
            self.w_xbars.add(_xbar(Fraction(a), p))
        self.inf_residue = form.infinity_residue()
        self.second_kind_at_inf = any(not _is_zero_coeff(c)
                                      for c in form.hol[form.curve.genus:])
        self.has_exact = not form.exact_poly.is_zero()
        self._eta = None
        self._system_cache: dict = {}

    def eta_columns(self):
        """(columns C, certificates, localized weights) for the eta classes."""
        if self._eta is None:
            cols, certs, weights = [], [], []
            for a, b, w in self.groups:
                if w == 0:
                    continue
                col, _, cert = self.ctx.fd.eta_data(a, b)
                cols.append(col)
                certs.append(cert)
                weights.append(self.ctx.lz(w))
            self._eta = (cols, certs, weights)
        return self._eta

    def check_endpoint(self, pt):
        """Reject endpoints in disks where the integrand (or the Frobenius
        descent machinery) is singular."""
        ctx = self.ctx
        disk = ctx.disk_of(pt)
        if disk.kind == AFFINE:
            if disk.xbar in self.singular_xbars:
                raise SingularDiskEndpoint(
                    f"endpoint {pt} reduces into a singular disk (x = {disk.xbar} mod {ctx.p})")
            if disk.xbar in self.w_xbars:
                raise SingularDiskEndpoint(
                    f"endpoint {pt} reduces into a dlog pole disk")
        elif disk.kind == WEIERSTRASS:
            if disk.xbar in self.w_xbars:
                raise SingularDiskEndpoint(
                    f"endpoint {pt} reduces into a dlog pole disk")
            if disk.xbar in self.singular_xbars:
                raise SingularDiskEndpoint(
                    f"endpoint {pt} reduces into a singular disk")
        else:
            if self.inf_residue != 0:
                raise SingularDiskEndpoint(
                    "endpoint reduces to infinity, where the form has a log pole")
            if self.second_kind_at_inf or self.has_exact:
                raise SingularDiskEndpoint(
                    "endpoint at infinity with a second-kind singularity there")
        return disk

    def even_log_value(self, pt) -> PadicNumber:
        """Value of the elementary primitive of the even part at a point:
        sum coeff * log(x - a) (+ the exact polynomial part); 0 at infinity."""
        ctx = self.ctx
        coords = ctx.point_coords(pt)
        acc = PadicNumber.zero(ctx.p, ctx.precision)
        if coords is None:
            # total even coefficient vanishes when the form is regular at
            # infinity, and the limit of the sum of logs is then 0
            return acc
        x, _ = coords
        for a, c in self.even_logs:
            acc = acc + ctx.lz(c) * ctx.log(x - ctx.lz(a))
        if self.has_exact:
            gp = self.form.exact_poly.map_coeffs(lambda v: ctx.lz(v))
            acc = acc + gp(x)
        return acc


def _xbar(a: Fraction, p: int) -> int:
    return a.numerator * pow(a.denominator, -1, p) % p


def _is_zero_coeff(c) -> bool:
    if isinstance(c, PadicNumber):
        return c.is_zero()
    return c == 0


# -- tiny integrals ----------------------------------------------------------


def tiny_integral(form: ThirdKindForm, P, Q, ctx: ColemanContext) -> PadicNumber:
    """Integral between two points of one residue disk.

    The only allowed in-disk singularity is at the disk center with both
    endpoints away from it; poles elsewhere in the disk are split off as
    dlog(x - a) with elementary primitive plus a regular remainder."""
    dP = ctx.disk_of(P)
    dQ = ctx.disk_of(Q)
    if dP != dQ:
        raise DifferentDisks(f"{dP} != {dQ}")
    return _tiny_same_disk(form, P, Q, dP, ctx)


def _tiny_same_disk(form, P, Q, disk, ctx: ColemanContext) -> PadicNumber:
    p = ctx.p
    cP = ctx.point_coords(P)
    cQ = ctx.point_coords(Q)
    if cP == cQ:
        return PadicNumber.zero(p, ctx.precision)
    for s in form.singular_points():
        sc = ctx.point_coords(s)
        for c in (cP, cQ):
            if c == sc or (c is not None and sc is not None
                           and (c[0] - sc[0]).is_zero() and (c[1] - sc[1]).is_zero()):
                raise EndpointAtPole(f"endpoint coincides with the pole {s}")

    series, log_items, residue = _disk_expansion(form, disk, ctx,
                                                 center=cP if disk.kind == AFFINE else None)
    tP = _t_value(P, disk, ctx, center=cP if disk.kind == AFFINE else None)
    tQ = _t_value(Q, disk, ctx, center=cP if disk.kind == AFFINE else None)
    prim = series.integrate()
    value = _eval_primitive(prim, tQ) - _eval_primitive(prim, tP)
    if not residue.is_zero():
        if tP.is_zero() or tQ.is_zero():
            raise EndpointAtPole("endpoint at the singular disk center")
        value = value + residue * (ctx.log(tQ) - ctx.log(tP))
    for a, coeff in log_items:
        xP = cP[0] if cP is not None else None
        xQ = cQ[0] if cQ is not None else None
        la = ctx.lz(a)
        value = value + ctx.lz(coeff) * (ctx.log(xQ - la) - ctx.log(xP - la))
    return value.add_bigoh(ctx.precision)


def _eval_primitive(prim: TruncatedSeries, t: PadicNumber) -> PadicNumber:
    if t.is_zero():
        if prim.low < 0:
            raise EndpointAtPole("second-kind singularity at the disk center")
        return PadicNumber.zero(t.prime, prim.trunc)
    return prim.evaluate(t)


def _t_value(pt, disk, ctx: ColemanContext, center=None) -> PadicNumber:
    coords = ctx.point_coords(pt)
    if disk.kind == AFFINE:
        return coords[0] - center[0]
    if disk.kind == WEIERSTRASS:
        return coords[1]
    if coords is None:
        return PadicNumber.zero(ctx.p, ctx.precision + 6)
    x, y = coords
    g = ctx.curve.genus
    return x ** g / y


def _disk_expansion(form, disk, ctx: ColemanContext, center=None):
    """(series g(t) of the regular part, dlog items [(a, coeff)], residue at
    the disk center).  For affine disks `center` gives the expansion point."""
    p = ctx.p
    prec = ctx.precision + 6
    trunc = ctx.trunc
    conv = ctx.lz
    if disk.kind == AFFINE:
        x0, y0 = center
        chart = _chart_affine(ctx.curve.f_localized(p, prec), x0, y0, trunc)
    else:
        chart = ctx.center_chart(disk.kind, disk.xbar)
    X, Y, dX = chart.X, chart.Y, chart.dX
    inv2Y = (Y * 2).invert()
    out = TruncatedSeries.zero(trunc - 1)
    log_items = []
    # vector part
    cur = inv2Y * dX
    for i, c in enumerate(form.hol):
        if i > 0:
            cur = cur * X
        if not _is_zero_coeff(c):
            out = out + cur * conv(c)
    # exact polynomial part
    if not form.exact_poly.is_zero():
        gp = form.exact_poly.derivative().map_coeffs(conv)
        out = out + _poly_at_series(gp, X) * dX
    # nu blocks
    for P0, n in form.poles:
        a = conv(P0.x)
        b = conv(P0.y)
        abar = _xbar(Fraction(P0.x), p)
        same_x = (disk.kind != INFINITY and abar == disk.xbar)
        if disk.kind == WEIERSTRASS and same_x:
            raise UnsupportedSupport(
                "pole reduces into a Weierstrass disk; out of scope")
        if same_x:
            same_disk = (b.residue() == disk.ybar)
            f1 = Poly(ctx.curve.f.taylor_shift(P0.x).coeffs[1:]).map_coeffs(conv)
            f1X = _poly_at_series(f1, X - a)
            if same_disk:
                # nu = dlog(x-a) + (b-y)/(2y(x-a)) dx, and
                # (b-y)/(x-a) = -f1(x)/(b+y)
                log_items.append((Fraction(P0.x), Fraction(n)))
                block = -(f1X) * ((Y * 2) * (Y + b)).invert() * dX
            else:
                # conjugate disk: nu = f1(x)/((y-b) 2y) dx, regular here
                block = f1X * ((Y * 2) * (Y - b)).invert() * dX
            out = out + block * n
        else:
            block = (Y + b) * (X - a).invert() * inv2Y * dX
            out = out + block * n
    # dlog blocks
    for a, n in form.wpoles:
        abar = _xbar(Fraction(a), p)
        if disk.kind == WEIERSTRASS and abar == disk.xbar:
            log_items.append((Fraction(a), Fraction(n)))
        else:
            out = out + (X - conv(a)).invert() * dX * n
    residue = out[-1]
    if not isinstance(residue, PadicNumber):
        residue = PadicNumber.from_rational(Fraction(residue), p, prec)
    if not residue.is_zero():
        coeffs = list(out.coeffs)
        coeffs[-1 - out.low] = coeffs[-1 - out.low] - residue
        out = TruncatedSeries(out.low, coeffs, out.trunc)
    return out, log_items, residue


# -- full Coleman integrals ---------------------------------------------------


def coleman_integral(form: ThirdKindForm, P, Q, ctx: ColemanContext) -> PadicNumber:
    """Coleman integral from P to Q; endpoints must avoid the singular
    disks of the form.  Additive in concatenation, linear in the form,
    agrees with tiny_integral within one disk."""
    prepared = PreparedForm(form, ctx)
    return _integral(prepared, P, Q)


def _integral(prepared: PreparedForm, P, Q) -> PadicNumber:
    ctx = prepared.ctx
    dP = prepared.check_endpoint(P)
    dQ = prepared.check_endpoint(Q)
    p = ctx.p
    if dP == dQ:
        return _tiny_same_disk(prepared.form, P, Q, dP, ctx)
    value = PadicNumber.zero(p, ctx.precision + 6)
    # route Weierstrass/infinity endpoints through the disk center
    if dP.kind != AFFINE:
        C = _center_point(dP, ctx)
        value = value + _tiny_same_disk(prepared.form, P, C, dP, ctx)
        P = C
    if dQ.kind != AFFINE:
        C = _center_point(dQ, ctx)
        value = value + _tiny_same_disk(prepared.form, C, Q, dQ, ctx)
        Q = C
    pfix = dP.kind != AFFINE
    qfix = dQ.kind != AFFINE
    if pfix and qfix:
        mid = prepared.even_log_value(Q) - prepared.even_log_value(P)
    elif pfix:
        half = _main_integral(prepared, ctx.involution(Q), Q)
        mid = half / 2 + prepared.even_log_value(Q) - prepared.even_log_value(P)
    elif qfix:
        half = _main_integral(prepared, P, ctx.involution(P))
        mid = half / 2 + prepared.even_log_value(Q) - prepared.even_log_value(P)
    else:
        mid = _main_integral(prepared, P, Q)
    return (value + mid).add_bigoh(ctx.precision)


def _center_point(disk: ResidueDisk, ctx: ColemanContext):
    if disk.kind == INFINITY:
        return "infinity"
    return ctx.weierstrass_center(disk.xbar)


def _main_integral(prepared: PreparedForm, A, B) -> PadicNumber:
    """Integral between points in (distinct) affine non-Weierstrass disks
    via the Frobenius-equivariance linear system at Teichmueller points.

    For endpoints related by the involution this computes the full form:
    the even part contributes nothing since x(iota A) = x(A)."""
    ctx = prepared.ctx
    p = ctx.p
    dA = ctx.disk_of(A)
    dB = ctx.disk_of(B)
    tauA = ctx.teichmuller_point(dA)
    tauB = ctx.teichmuller_point(dB)
    legA = _tiny_same_disk(prepared.form, A, tauA, dA, ctx)
    legB = _tiny_same_disk(prepared.form, tauB, B, dB, ctx)
    if dA == dB:
        # both tau legs plus an empty middle would double count; integrate
        # directly instead (callers only hit this via the involution trick)
        return _tiny_same_disk(prepared.form, A, B, dA, ctx)
    mid = _tau_system_value(prepared, tauA, tauB)
    return legA + mid + legB


def _tau_system_value(prepared: PreparedForm, tauA, tauB) -> PadicNumber:
    ctx = prepared.ctx
    fd = ctx.fd
    p = ctx.p
    g = ctx.curve.genus
    n = 2 * g
    dh = []
    for cert in fd.certs:
        dh.append(cert.evaluate(*tauB) - cert.evaluate(*tauA))
    lhs = [[(PadicNumber.one(p, fd.precision) if i == j else
             PadicNumber.zero(p, fd.precision)) - fd.matrix[j][i]
            for j in range(n)] for i in range(n)]
    I = linalg.solve(lhs, dh)
    value = PadicNumber.zero(p, ctx.precision + 6)
    for c, Ii in zip(prepared.hol, I):
        if not c.is_zero():
            value = value + c * Ii
    cols, certs, weights = prepared.eta_columns()
    for col, cert, w in zip(cols, certs, weights):
        dhk = cert.evaluate(*tauB) - cert.evaluate(*tauA)
        acc = dhk
        for j in range(n):
            acc = acc + col[j] * I[j]
        Jk = acc / (1 - p)
        value = value + w * Jk
    # even dlog part and exact part between the tau points
    value = value + prepared.even_log_value(tauB) - prepared.even_log_value(tauA)
    return value


def integral_over_divisor(form: ThirdKindForm, D: Divisor,
                          ctx: ColemanContext) -> PadicNumber:
    """Sum of n_i * int_base^{P_i} for deg-0 D; independent of the base."""
    if D.degree != 0:
        raise UnsupportedSupport(f"divisor must have degree 0, got {D.degree}")
    prepared = PreparedForm(form, ctx)
    items = D.items
    if not items:
        return PadicNumber.zero(ctx.p, ctx.precision)
    base = items[0][0]
    acc = PadicNumber.zero(ctx.p, ctx.precision + 6)
    for pt, m in items:
        if pt == base:
            continue
        acc = acc + m * _integral(prepared, base, pt)
    return acc.add_bigoh(ctx.precision)
