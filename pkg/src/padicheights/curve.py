"""Odd-degree hyperelliptic curves y^2 = f(x) over Q.

Points, degree-zero divisors, residue disks at a good prime, differentials
with logarithmic singularities, and local chart expansions.  Everything at
the curve level is exact rational arithmetic; p-adic coefficients enter only
through localization.

A differential of the third kind is stored as
  * a vector (c_0, .., c_{2g-1}) against the basis w_i = x^i dx/(2y),
  * building blocks n * (y+b)/(x-a) * dx/(2y) for affine non-Weierstrass
    poles P = (a, b), each with residue divisor (P) - (inf),
  * dlog blocks n * d(x-a)/(x-a) for Weierstrass poles, residue divisor
    2n(W_a) - 2n(inf),
  * an optional exact part d(g(x)), g a polynomial (residue-free).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BadIntegrality,
    BadReduction,
    SingularAtCenter,
    UnsupportedSupport,
)
from .padic import PadicNumber, check_prime, sqrt as padic_sqrt, valuation_of_rational
from .poly import Poly, TruncatedSeries, discriminant


def localize(value, p: int, precision: int) -> PadicNumber:
    """Embed an exact rational into Q_p; pass p-adic values through."""
    if isinstance(value, PadicNumber):
        if value.prime != p:
            raise ValueError("mixed primes")
        return value.add_bigoh(precision)
    return PadicNumber.from_rational(Fraction(value), p, precision)


def _mod_p(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError("not p-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


class HyperellipticCurve:
    """y^2 = f(x) with f monic, squarefree, of odd degree 2g+1 over Q."""

    def __init__(self, f: Poly):
        f = f.map_coeffs(Fraction)
        if f.degree < 3 or f.degree % 2 == 0:
            raise ValueError(f"need odd degree >= 3, got {f.degree}")
        if f.leading() != 1:
            raise ValueError("f must be monic")
        self.f = f
        self.genus = (f.degree - 1) // 2
        self.disc = discriminant(f)
        if self.disc == 0:
            raise ValueError("f must be squarefree")

    @classmethod
    def from_coeffs(cls, coeffs) -> "HyperellipticCurve":
        return cls(Poly([Fraction(c) for c in coeffs]))

    def good_reduction(self, q: int) -> bool:
        """Good reduction at q: q odd, coefficients q-integral, q does not
        divide disc(f)."""
        if q == 2:
            return False
        for c in self.f.coeffs:
            if Fraction(c).denominator % q == 0:
                return False
        return valuation_of_rational(self.disc, q) == 0

    def require_good_reduction(self, p: int) -> None:
        check_prime(p)
        if not self.good_reduction(p):
            raise BadReduction(f"curve has bad reduction at {p}")

    def point(self, x, y) -> "CurvePoint":
        return CurvePoint(self, Fraction(x), Fraction(y))

    def infinity(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def lift_x(self, x) -> "CurvePoint":
        """The point (x, +sqrt(f(x))) if f(x) is a rational square."""
        x = Fraction(x)
        fx = Fraction(self.f(x))
        num, den = fx.numerator, fx.denominator
        rn = _isqrt_exact(num)
        rd = _isqrt_exact(den)
        if rn is None or rd is None:
            raise ValueError(f"f({x}) = {fx} is not a rational square")
        return self.point(x, Fraction(rn, rd))

    def f_localized(self, p: int, precision: int) -> Poly:
        return self.f.map_coeffs(lambda c: localize(c, p, precision))

    def __eq__(self, other):
        return isinstance(other, HyperellipticCurve) and self.f == other.f

    __hash__ = None

    def __repr__(self):
        return f"HyperellipticCurve(y^2 = {self.f})"

    def to_json(self) -> dict:
        return {"f": [str(c) for c in self.f.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "HyperellipticCurve":
        return cls.from_coeffs([Fraction(c) for c in data["f"]])


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = int(n ** 0.5)
    for c in (r - 1, r, r + 1, r + 2):
        if c >= 0 and c * c == n:
            return c
    return None


class CurvePoint:
    """A rational point: affine (x, y) with y^2 = f(x), or infinity."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: HyperellipticCurve, x, y):
        self.curve = curve
        if x is None:
            self.x = None
            self.y = None
            return
        self.x = Fraction(x)
        self.y = Fraction(y)
        if self.y * self.y != curve.f(self.x):
            raise ValueError(f"({x}, {y}) is not on y^2 = {curve.f}")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def is_weierstrass(self) -> bool:
        return self.is_infinity or self.y == 0

    def involution(self) -> "CurvePoint":
        """The hyperelliptic involution (x, y) -> (x, -y)."""
        if self.is_infinity:
            return self
        return CurvePoint(self.curve, self.x, -self.y)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return (self.x, self.y) == (other.x, other.y)

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "inf"
        return f"({self.x}, {self.y})"

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return {"x": str(self.x), "y": str(self.y)}

    @classmethod
    def from_json(cls, curve: HyperellipticCurve, data) -> "CurvePoint":
        if data == "infinity":
            return curve.infinity()
        return curve.point(Fraction(data["x"]), Fraction(data["y"]))


class Divisor:
    """Formal Z-combination of points with distinct support."""

    def __init__(self, curve: HyperellipticCurve, items=()):
        self.curve = curve
        self._d: dict[CurvePoint, int] = {}
        for pt, mult in items:
            self._add(pt, mult)

    def _add(self, pt: CurvePoint, mult: int):
        if mult == 0:
            return
        if pt in self._d:
            self._d[pt] += mult
            if self._d[pt] == 0:
                del self._d[pt]
        else:
            self._d[pt] = mult

    @property
    def items(self):
        return tuple(sorted(self._d.items(), key=_point_sort_key))

    @property
    def support(self):
        return tuple(pt for pt, _ in self.items)

    @property
    def degree(self) -> int:
        return sum(self._d.values())

    def is_zero(self) -> bool:
        return not self._d

    def multiplicity(self, pt: CurvePoint) -> int:
        return self._d.get(pt, 0)

    def __add__(self, other: "Divisor") -> "Divisor":
        out = Divisor(self.curve, self.items)
        for pt, m in other.items:
            out._add(pt, m)
        return out

    def __neg__(self) -> "Divisor":
        return Divisor(self.curve, [(pt, -m) for pt, m in self.items])

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def scale(self, n: int) -> "Divisor":
        return Divisor(self.curve, [(pt, n * m) for pt, m in self.items])

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return dict(self._d) == dict(other._d)

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return "0"
        return " + ".join(f"{m}*({pt})" for pt, m in self.items)

    def to_json(self):
        return [{"point": pt.to_json(), "mult": m} for pt, m in self.items]

    @classmethod
    def from_json(cls, curve: HyperellipticCurve, data) -> "Divisor":
        return cls(curve, [(CurvePoint.from_json(curve, e["point"]), int(e["mult"]))
                           for e in data])


def _point_sort_key(item):
    pt = item[0]
    if pt.is_infinity:
        return (1, 0, 0)
    return (0, pt.x, pt.y)


# -- residue disks -----------------------------------------------------------

AFFINE = "affine"
WEIERSTRASS = "weierstrass"
INFINITY = "infinity"


class ResidueDisk:
    """A residue disk at p: the set of points with a fixed reduction.

    Local parameter: t = x - center (affine non-Weierstrass), t = y
    (Weierstrass), t = x^g / y (infinity).
    """

    __slots__ = ("curve", "p", "kind", "xbar", "ybar")

    def __init__(self, curve, p, kind, xbar=None, ybar=None):
        self.curve = curve
        self.p = p
        self.kind = kind
        self.xbar = xbar
        self.ybar = ybar

    def key(self):
        return (self.kind, self.xbar, self.ybar)

    def __eq__(self, other):
        return isinstance(other, ResidueDisk) and self.p == other.p \
            and self.key() == other.key()

    def __hash__(self):
        return hash((self.p,) + self.key())

    def __repr__(self):
        if self.kind == INFINITY:
            return f"disk(inf mod {self.p})"
        return f"disk({self.kind} ({self.xbar}, {self.ybar}) mod {self.p})"


def reduce_point(P: CurvePoint, p: int) -> ResidueDisk:
    """The residue disk containing P.  Points with negative-valuation
    coordinates are rejected (good-reduction integral model scope)."""
    curve = P.curve
    curve.require_good_reduction(p)
    if P.is_infinity:
        return ResidueDisk(curve, p, INFINITY)
    if P.x.denominator % p == 0 or P.y.denominator % p == 0:
        raise BadIntegrality(
            f"point {P} has negative valuation at {p}; only infinity itself "
            "reduces to the infinite disk")
    xbar = _mod_p(P.x, p)
    ybar = _mod_p(P.y, p)
    if ybar == 0:
        return ResidueDisk(curve, p, WEIERSTRASS, xbar, 0)
    return ResidueDisk(curve, p, AFFINE, xbar, ybar)


def reduction_at_q(P: CurvePoint, q: int):
    """Reduction data at an odd good prime q, allowing the chart at infinity.

    Returns (INFINITY,) or (AFFINE/WEIERSTRASS, xbar, ybar)."""
    if P.is_infinity:
        return (INFINITY,)
    vx = valuation_of_rational(P.x, q) if P.x != 0 else 0
    if vx < 0:
        # on the curve this forces v(y) < 0 too: the point reduces to infinity
        return (INFINITY,)
    if P.y != 0 and valuation_of_rational(P.y, q) < 0:
        return (INFINITY,)
    xbar = _mod_p(P.x, q)
    ybar = _mod_p(P.y, q)
    kind = WEIERSTRASS if ybar == 0 else AFFINE
    return (kind, xbar, ybar)


def infinity_parameter(P: CurvePoint, q: int) -> Fraction:
    """Value of the local parameter t = x^g/y at a point in the infinite
    disk (t(inf) = 0)."""
    if P.is_infinity:
        return Fraction(0)
    g = P.curve.genus
    return P.x ** g / P.y


# -- differentials -----------------------------------------------------------

class ThirdKindForm:
    """A differential with at most logarithmic singularities (plus an
    optional second-kind vector part and an exact polynomial part)."""

    def __init__(self, curve: HyperellipticCurve, hol=None, poles=(),
                 wpoles=(), exact_poly=None):
        self.curve = curve
        g = curve.genus
        hol = list(hol) if hol is not None else [Fraction(0)] * (2 * g)
        if len(hol) != 2 * g:
            raise ValueError(f"vector part must have length {2 * g}")
        self.hol = hol
        merged: dict[CurvePoint, int] = {}
        for P, n in poles:
            if P.is_infinity or P.is_weierstrass:
                raise ValueError("pole blocks must be affine non-Weierstrass")
            merged[P] = merged.get(P, 0) + n
        self.poles = tuple((P, n) for P, n in
                           sorted(merged.items(), key=lambda it: _point_sort_key(it))
                           if n != 0)
        wmerged: dict[Fraction, int] = {}
        for a, n in wpoles:
            a = Fraction(a)
            if curve.f(a) != 0:
                raise ValueError(f"x = {a} is not a Weierstrass root")
            wmerged[a] = wmerged.get(a, 0) + n
        self.wpoles = tuple((a, n) for a, n in sorted(wmerged.items()) if n != 0)
        self.exact_poly = exact_poly if exact_poly is not None else Poly.zero()

    # -- structure -------------------------------------------------------

    def is_holomorphic_vector(self) -> bool:
        return not self.poles and not self.wpoles and self.exact_poly.is_zero()

    def infinity_residue(self) -> int:
        return -sum(n for _, n in self.poles) - 2 * sum(n for _, n in self.wpoles)

    def singular_points(self):
        """Points where the form has a log pole (excluding second-kind
        singularities at infinity)."""
        pts = [P for P, _ in self.poles]
        for a, _ in self.wpoles:
            pts.append(self.curve.point(a, 0))
        if self.infinity_residue() != 0:
            pts.append(self.curve.infinity())
        return pts

    def __add__(self, other: "ThirdKindForm") -> "ThirdKindForm":
        if other.curve != self.curve:
            raise ValueError("forms on different curves")
        return ThirdKindForm(
            self.curve,
            [a + b for a, b in zip(self.hol, other.hol)],
            list(self.poles) + list(other.poles),
            list(self.wpoles) + list(other.wpoles),
            self.exact_poly + other.exact_poly,
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "ThirdKindForm":
        """Integer scaling (pole weights stay integral)."""
        return ThirdKindForm(
            self.curve,
            [a * c for a in self.hol],
            [(P, n * c) for P, n in self.poles],
            [(a, n * c) for a, n in self.wpoles],
            self.exact_poly * c,
        )

    def with_hol(self, hol) -> "ThirdKindForm":
        return ThirdKindForm(self.curve, hol, self.poles, self.wpoles,
                             self.exact_poly)

    def __repr__(self):
        bits = []
        if any(not _frac_is_zero(c) for c in self.hol):
            bits.append(f"vec{[str(c) for c in self.hol]}")
        for P, n in self.poles:
            bits.append(f"{n}*nu({P})")
        for a, n in self.wpoles:
            bits.append(f"{n}*dlog(x-{a})")
        if not self.exact_poly.is_zero():
            bits.append(f"d({self.exact_poly})")
        return "ThirdKindForm(" + " + ".join(bits or ["0"]) + ")"


def _frac_is_zero(c):
    if isinstance(c, PadicNumber):
        return c.is_zero()
    return c == 0


def third_kind_with_residue(D: Divisor) -> ThirdKindForm:
    """Some form over Q with residue divisor D (degree 0, rational support).

    Non-Weierstrass points use the (y+b)/(x-a) dx/(2y) block; affine
    Weierstrass points need even multiplicity and use dlog(x-a).  The
    residue at infinity balances automatically.
    """
    curve = D.curve
    if D.degree != 0:
        raise UnsupportedSupport(f"residue divisor must have degree 0, got {D.degree}")
    poles = []
    wpoles = []
    for P, n in D.items:
        if P.is_infinity:
            continue
        if P.is_weierstrass:
            if n % 2 != 0:
                raise UnsupportedSupport(
                    f"odd multiplicity {n} at Weierstrass point {P}: only even "
                    "multiplicities pairing against infinity are supported")
            wpoles.append((P.x, n // 2))
        else:
            poles.append((P, n))
    form = ThirdKindForm(curve, None, poles, wpoles)
    if residue_divisor(form) != D:
        raise UnsupportedSupport(
            "infinity multiplicity inconsistent with affine part")
    return form


def residue_divisor(form: ThirdKindForm) -> Divisor:
    """Residue divisor, computed honestly by Laurent expansion in each
    singular disk (exact rational arithmetic)."""
    curve = form.curve
    out = []
    seen = set()
    candidates = list(form.singular_points())
    inf = curve.infinity()
    if inf not in candidates:
        candidates.append(inf)
    for pt in candidates:
        if pt in seen:
            continue
        seen.add(pt)
        res = _residue_at(form, pt)
        if res.denominator != 1:
            raise ValueError(f"non-integer residue {res} at {pt}")
        if res != 0:
            out.append((pt, int(res)))
    return Divisor(curve, out)


def _residue_at(form: ThirdKindForm, pt: CurvePoint) -> Fraction:
    # expand exact blocks only: the vector part is residue-free (its only
    # possible pole is at infinity, where the residue of any x^i dx/2y
    # vanishes because the total residue of a one-pole form is zero)
    order = 4  # pole order 1 (+2 at infinity for dlog blocks) + guard
    trunc = order + 5
    chart = exact_chart(form.curve, pt, trunc)
    series = _expand_blocks(form, chart, include_vector=False, exact=True)
    return Fraction(series[-1])


class DiskChart:
    """Local coordinates on a residue disk: x = X(t), y = Y(t), both series
    in the disk parameter t, together with dX/dt."""

    __slots__ = ("kind", "center", "X", "Y", "dX", "trunc")

    def __init__(self, kind, center, X, Y, dX, trunc):
        self.kind = kind
        self.center = center
        self.X = X
        self.Y = Y
        self.dX = dX
        self.trunc = trunc


def exact_chart(curve: HyperellipticCurve, pt: CurvePoint, trunc: int) -> DiskChart:
    """Chart over Q centered at an exact point (any kind)."""
    if pt.is_infinity:
        return _chart_infinity(curve.f, curve.genus, trunc, exact=True)
    if pt.y == 0:
        return _chart_weierstrass(curve.f, pt.x, trunc)
    return _chart_affine(curve.f, pt.x, pt.y, trunc)


def padic_chart(curve: HyperellipticCurve, p: int, precision: int, kind: str,
                x0=None, y0=None, trunc: int | None = None) -> DiskChart:
    """Chart over Q_p: affine non-Weierstrass at (x0, y0), Weierstrass at
    the Hensel center above x0 mod p, or at infinity."""
    T = trunc if trunc is not None else precision + 10
    fp = curve.f_localized(p, precision + 4)
    if kind == INFINITY:
        return _chart_infinity(fp, curve.genus, T, exact=False,
                               one=PadicNumber.one(p, precision + 4))
    if kind == WEIERSTRASS:
        center = hensel_root(curve.f, x0, p, precision + 4)
        return _chart_weierstrass(fp, center, T)
    return _chart_affine(fp, x0, y0, T)


def _chart_affine(f: Poly, x0, y0, trunc: int) -> DiskChart:
    """t = x - x0 at a non-Weierstrass point; Y = sqrt(f(x0 + t))."""
    shifted = f.taylor_shift(x0)
    series = TruncatedSeries(0, shifted.coeffs, trunc)
    Y = series.sqrt_with_initial(y0)
    X = TruncatedSeries(0, [x0, 1], trunc)
    dX = TruncatedSeries.constant(1, trunc - 1)
    return DiskChart(AFFINE, (x0, y0), X, Y, dX, trunc)


def _chart_weierstrass(f: Poly, a, trunc: int) -> DiskChart:
    """t = y at the Weierstrass point (a, 0); X solves f(X) = t^2, X == a."""
    shifted = f.taylor_shift(a)  # no constant term
    t2 = TruncatedSeries(2, [1], trunc + 2)
    # Newton iteration for f(X) - t^2 = 0 starting at X = a
    delta = TruncatedSeries.zero(trunc + 2)  # X = a + delta in local coords
    for _ in range(_newton_steps(trunc + 2)):
        fX = _eval_series_poly(shifted, delta, trunc + 2)
        dfX = _eval_series_poly(shifted.derivative(), delta, trunc + 2)
        delta = delta - (fX - t2) * dfX.invert()
    X = delta + a
    Y = TruncatedSeries(1, [1], trunc + 2)
    dX = X.differentiate()
    return DiskChart(WEIERSTRASS, (a, 0), X, Y, dX, trunc)


def _chart_infinity(f: Poly, genus: int, trunc: int, exact: bool, one=None) -> DiskChart:
    """t = x^g / y at infinity; s = 1/x solves s = t^2 (1 + sum c_i s^(2g+1-i))."""
    d = f.degree
    T = trunc + 2 * d + 4
    t2 = TruncatedSeries(2, [1 if exact else one], T)
    s = TruncatedSeries.zero(T)
    for _ in range(T // 2 + 2):
        acc = TruncatedSeries.constant(1 if exact else one, T)
        power = TruncatedSeries.constant(1 if exact else one, T)
        for j in range(1, d + 1):
            power = power * s
            c = f[d - j]
            if not _frac_is_zero(c):
                acc = acc + power * c
        s_new = t2 * acc
        if (s_new - s).is_zero():
            s = s_new
            break
        s = s_new
    X = s.invert()
    Y = X
    for _ in range(genus - 1):
        Y = Y * X
    Y = Y * TruncatedSeries(-1, [1 if exact else one], T)  # X^g / t
    dX = X.differentiate()
    return DiskChart(INFINITY, None, X.truncate(trunc), Y.truncate(trunc),
                     dX.truncate(trunc - 1), trunc)


def _newton_steps(target: int) -> int:
    steps = 1
    gain = 2
    while gain < target:
        gain *= 2
        steps += 1
    return steps + 1


def _eval_series_poly(f: Poly, s: TruncatedSeries, trunc: int) -> TruncatedSeries:
    """f(s) for a series s with positive valuation (Horner)."""
    acc = TruncatedSeries.zero(trunc)
    for c in reversed(f.coeffs):
        acc = acc * s
        if not _frac_is_zero(c):
            acc = acc + c
    return acc.truncate(trunc)


def _expand_blocks(form: ThirdKindForm, chart: DiskChart, include_vector: bool,
                   exact: bool, p: int | None = None, precision: int | None = None,
                   skip_wpoles: bool = False, nu_log_extracted=()) -> TruncatedSeries:
    """Expand (parts of) a form in a chart; returns g(t) with omega = g dt.

    nu_log_extracted lists pole points whose dlog(x - a) part the caller
    integrates explicitly; their blocks are expanded with the pole removed
    via (b - y)/(x - a) = -(f(x) - f(a))/((x - a)(b + y)).
    """
    conv = (lambda v: v) if exact else (lambda v: localize(v, p, precision))
    X, Y, dX = chart.X, chart.Y, chart.dX
    trunc = chart.trunc
    inv2Y = (Y * 2).invert()
    out = TruncatedSeries.zero(trunc - 1)
    extracted = set(nu_log_extracted)
    if include_vector:
        cur = inv2Y * dX
        for i, c in enumerate(form.hol):
            if i > 0:
                cur = cur * X
            if not _frac_is_zero(c):
                out = out + cur * conv(c)
    for P, n in form.poles:
        a, b = conv(P.x), conv(P.y)
        if P in extracted:
            # nu_P - dlog(x-a) = (b - y)/(2y(x-a)) dx = -f1(x)/(2y(b+y)) dx
            f1 = form.curve.f.taylor_shift(P.x)
            f1 = Poly(f1.coeffs[1:])  # (f(x) - f(a))/(x - a) in u = x - P.x
            if exact:
                f1_at = _eval_series_poly(f1, X - P.x, trunc)
            else:
                f1_at = _eval_series_poly(f1.map_coeffs(lambda c: conv(c)), X - a, trunc)
            block = -(f1_at) * ((Y * 2) * (Y + b)).invert() * dX
            out = out + block * n
        else:
            block = (Y + b) * (X - a).invert() * inv2Y * dX
            out = out + block * n
    if not skip_wpoles:
        for aw, n in form.wpoles:
            block = (X - conv(aw)).invert() * dX
            out = out + block * n
    if not form.exact_poly.is_zero():
        gp = form.exact_poly.derivative()
        if not exact:
            gp = gp.map_coeffs(lambda c: conv(c))
        out = out + _poly_at_series(gp, X) * dX
    return out


def _poly_at_series(f: Poly, X: TruncatedSeries) -> TruncatedSeries:
    acc = TruncatedSeries.zero(X.trunc)
    for c in reversed(f.coeffs):
        acc = acc * X
        if not _frac_is_zero(c):
            acc = acc + c
    return acc


def expand_form(form: ThirdKindForm, chart: DiskChart, exact: bool,
                p: int | None = None, precision: int | None = None,
                nu_log_extracted=(), skip_wpoles: bool = False) -> TruncatedSeries:
    return _expand_blocks(form, chart, include_vector=True, exact=exact, p=p,
                          precision=precision, skip_wpoles=skip_wpoles,
                          nu_log_extracted=nu_log_extracted)


def hensel_root(f: Poly, xbar: int, p: int, precision: int) -> PadicNumber:
    """The root of f in Z_p above a simple root xbar of f mod p."""
    fp = f.map_coeffs(lambda c: localize(c, p, precision))
    x = PadicNumber.from_int(xbar, p, precision)
    for _ in range(_newton_steps(precision)):
        fx = fp(x)
        if fx.is_zero():
            break
        x = x - fx / fp.derivative()(x)
    return x


def local_expansion(form: ThirdKindForm, disk: ResidueDisk, point: CurvePoint,
                    order: int, precision: int) -> TruncatedSeries:
    """Series g(t) with omega = g(t) dt around `point` in the disk parameter.

    Affine non-Weierstrass disks expand at the point itself (t = x - x(P));
    Weierstrass and infinity disks expand at the disk center, which must be
    the requested point.  Requesting the expansion at a pole raises."""
    p = disk.p
    if reduce_point(point, p) != disk:
        raise ValueError(f"{point} does not lie in {disk}")
    for s in form.singular_points():
        if s == point:
            raise SingularAtCenter(f"{point} is a pole of the form")
    if disk.kind == AFFINE:
        x0 = localize(point.x, p, precision)
        y0 = localize(point.y, p, precision)
        chart = _chart_affine(form.curve.f_localized(p, precision), x0, y0, order)
        extracted = [P for P, _ in form.poles
                     if not P.is_infinity and reduce_point(P, p) == disk]
        if extracted:
            raise SingularAtCenter(
                "expansion at a non-center point of a singular disk: "
                "integrate via tiny_integral instead")
        return expand_form(form, chart, exact=False, p=p, precision=precision)
    if disk.kind == WEIERSTRASS:
        if not point.is_weierstrass or point.is_infinity:
            raise ValueError("Weierstrass-disk expansions are centered at the "
                             "Weierstrass point")
        for a, _ in form.wpoles:
            if _mod_p(a, p) == disk.xbar:
                raise SingularAtCenter(f"{point} is a pole of the form")
        chart = padic_chart(form.curve, p, precision, WEIERSTRASS,
                            x0=disk.xbar, trunc=order)
        return expand_form(form, chart, exact=False, p=p, precision=precision)
    # infinity
    if not point.is_infinity:
        raise ValueError("infinite-disk expansions are centered at infinity")
    if form.infinity_residue() != 0:
        raise SingularAtCenter("infinity is a pole of the form")
    chart = padic_chart(form.curve, p, precision, INFINITY, trunc=order)
    return expand_form(form, chart, exact=False, p=p, precision=precision)
