"""Frobenius structure on H^1_dR of an odd hyperelliptic curve.

Kedlaya's algorithm gives the matrix of the p-power Frobenius lift on the
Monsky-Washnitzer cohomology of the affine curve minus the Weierstrass
locus, in the basis w_i = x^i dx/(2y), i < 2g, together with exact-form
certificates phi^* w_i = d h_i + sum_j M[j][i] w_j used later for Coleman
integration.

The same reduction engine, run in shifted coordinates u = x - a, computes
the Frobenius image of the log classes eta_a = b dx/(y (x - a)) attached to
non-Weierstrass poles.  Solving the resulting Sylvester systems realizes
the projection of log-singular differentials onto H^1_dR along the unique
Frobenius-stable complement (the map called psi here): Frobenius acts on
each log class by multiplication by p modulo H^1 and exact forms, and no
Frobenius eigenvalue on H^1 equals p, so the complement is unique.

Involution parity shortcut: the hyperelliptic involution commutes with the
Frobenius lift, H^1 of the curve is odd, and dlog(x - a) blocks are even,
so even blocks project to zero; only the odd parts (the vector part and
the eta components of the pole blocks) enter the linear algebra.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import (
    DegenerateInput,
    NotOrdinary,
    PrecisionExhausted,
    UnsupportedSupport,
)
from . import linalg
from .curve import (
    Divisor,
    HyperellipticCurve,
    ThirdKindForm,
    exact_chart,
    localize,
    residue_divisor,
    third_kind_with_residue,
    _poly_at_series,
)
from .padic import PadicNumber, valuation_of_rational
from .poly import Poly


def binom_half(k: int) -> Fraction:
    """binomial(-1/2, k) = (-1)^k binomial(2k, k) / 4^k."""
    b = 1
    for i in range(1, k + 1):
        b = b * (k + i) // i
    return Fraction((-1) ** k * b, 4 ** k)


def poly_xgcd(a: Poly, b: Poly):
    """Extended Euclid over Q: returns (g, s, t) with s a + t b = g, g monic."""
    a = a.map_coeffs(Fraction)
    b = b.map_coeffs(Fraction)
    r0, r1 = a, b
    s0, s1 = Poly([Fraction(1)]), Poly.zero()
    t0, t1 = Poly.zero(), Poly([Fraction(1)])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lead = Fraction(r0.leading())
    inv = Fraction(1) / lead
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


class MWFunction:
    """A finite sum of terms B(u) u^(-l) y^m (u = x - shift, m odd): the
    overconvergent functions appearing as reduction certificates."""

    def __init__(self, p: int, shift=Fraction(0)):
        self.p = p
        self.shift = shift
        self.terms: dict[tuple[int, int], dict[int, PadicNumber]] = {}

    def add(self, l: int, m: int, exps: dict[int, PadicNumber]):
        bucket = self.terms.setdefault((l, m), {})
        for e, c in exps.items():
            bucket[e] = bucket[e] + c if e in bucket else c

    def scale(self, c) -> "MWFunction":
        out = MWFunction(self.p, self.shift)
        for key, bucket in self.terms.items():
            out.terms[key] = {e: v * c for e, v in bucket.items()}
        return out

    def cap(self, n: int) -> "MWFunction":
        """Cap coefficient precision (drops digits the reduction cannot
        actually certify)."""
        out = MWFunction(self.p, self.shift)
        for key, bucket in self.terms.items():
            out.terms[key] = {e: v.add_bigoh(n) for e, v in bucket.items()}
        return out

    def evaluate(self, x: PadicNumber, y: PadicNumber) -> PadicNumber:
        """Value at a point with |x - shift| = 1 and |y| = 1."""
        u = x - self.shift
        prec = min(x.precision, y.precision)
        acc = PadicNumber.zero(self.p, prec + 4)
        uinv = u.inv() if any(l for l, _ in self.terms) else None
        yinv = y.inv()
        for (l, m), bucket in sorted(self.terms.items()):
            ym = y ** m if m >= 0 else yinv ** (-m)
            # ascending accumulation of B(u), stepping powers through gaps
            val = PadicNumber.zero(self.p, prec + 4)
            upow = None
            last_e = None
            for e in sorted(bucket):
                if upow is None:
                    upow = u ** e
                else:
                    upow = upow * u ** (e - last_e)
                last_e = e
                val = val + bucket[e] * upow
            if l:
                val = val * uinv ** l
            acc = acc + val * ym
        return acc


class Reducer:
    """Reduces sums of A(u) u^(-l) y^(-(2s+1)) dx to the basis x^j dx/y
    (j < 2g) plus the residual pole class u^(-1) y^(-1) dx, accumulating the
    exact-form certificate.  u = x - shift; shift None means u = x and pole
    terms are not allowed."""

    def __init__(self, curve: HyperellipticCurve, p: int, work_prec: int,
                 shift: Fraction | None = None):
        self.curve = curve
        self.p = p
        self.prec = work_prec
        self.shift = shift
        g = curve.genus
        self.g = g
        conv = lambda c: localize(c, p, work_prec)
        f = curve.f
        _, _, V = poly_xgcd(f, f.derivative())  # V f' = 1 mod f
        if shift is None:
            fu = f
            Vu = V % f
            self.fa = None
            self.f1 = None
        else:
            fu = f.taylor_shift(shift)
            Vu = (V % f).taylor_shift(shift)
            fa = Fraction(curve.f(shift))
            if fa == 0 or valuation_of_rational(fa, p) != 0:
                raise UnsupportedSupport(
                    f"pole x = {shift} reduces into a Weierstrass disk at {p}")
            self.fa = conv(fa)
            self.f1 = Poly(fu.coeffs[1:]).map_coeffs(conv)
        self.fu = fu.map_coeffs(conv)
        self.dfu = fu.derivative().map_coeffs(conv)
        self.Vu = Vu.map_coeffs(conv)
        self.buckets: dict[int, dict[int, PadicNumber]] = {}
        self.cert = MWFunction(p, Fraction(0) if shift is None else shift)

    def _zero(self) -> PadicNumber:
        return PadicNumber.zero(self.p, self.prec)

    def _pz(self, c):
        """Coerce stray exact coefficients (e.g. int zeros from shifts)."""
        if isinstance(c, PadicNumber):
            return c
        if c == 0:
            return None
        return localize(c, self.p, self.prec)

    def add_term(self, s: int, exps: dict[int, PadicNumber]):
        """Insert A(u) u^(-l) y^(-(2s+1)) dx given as {exponent: coeff}
        (exponents may be negative).  s < 0 (positive y powers) is folded
        into s = 0 by multiplying with f = y^2."""
        while s < 0:
            out: dict[int, PadicNumber] = {}
            for e, c in exps.items():
                c = self._pz(c)
                if c is None or c.is_zero():
                    continue
                for j, fc in enumerate(self.fu.coeffs):
                    key = e + j
                    out[key] = out[key] + c * fc if key in out else c * fc
            exps = out
            s += 1
        bucket = self.buckets.setdefault(s, {})
        for e, c in exps.items():
            c = self._pz(c)
            if c is None:
                continue
            bucket[e] = bucket[e] + c if e in bucket else c

    def _clean(self, bucket: dict[int, PadicNumber]):
        for e in [e for e, c in bucket.items() if c.is_zero()]:
            del bucket[e]

    def run(self):
        """Returns (vector over x^j dx/y basis in x-coordinates, residual
        coefficient of u^(-1) y^(-1) dx, certificate)."""
        g = self.g
        while True:
            smax = max(self.buckets)
            if smax == 0:
                break
            bucket = self.buckets.pop(smax)
            self._reduce_level(smax, bucket)
        final = self.buckets.pop(0, {})
        vec_u, pole_coeff = self._reduce_base(final)
        # convert from u back to x coordinates
        if self.shift is None or self.shift == 0:
            vec_x = vec_u
        else:
            vec_x = vec_u.taylor_shift(localize(-self.shift, self.p, self.prec))
        out = [vec_x[j] if j <= vec_x.degree else self._zero() for j in range(2 * g)]
        out = [c if isinstance(c, PadicNumber) else self._zero() for c in out]
        return out, pole_coeff, self.cert

    def _reduce_level(self, s: int, bucket: dict[int, PadicNumber]):
        """One step s -> s-1 of the y-power reduction."""
        self._clean(bucket)
        # clear pole part algebraically:
        # c u^-j y^-(2s+1) = (c/fa) [u^-j y^-(2s-1) - u^(-j+1) f1 y^-(2s+1)]
        while bucket and min(bucket) < 0:
            j = -min(bucket)
            c = bucket.pop(-j)
            if c.is_zero():
                continue
            if self.fa is None:
                raise PrecisionExhausted("pole term in an unshifted reduction")
            cf = c / self.fa
            self.add_term(s - 1, {-j: cf})
            for e, fc in enumerate(self.f1.coeffs):
                key = -j + 1 + e
                contrib = -(cf * fc)
                bucket[key] = bucket[key] + contrib if key in bucket else contrib
            self._clean(bucket)
        if not bucket:
            return
        A = Poly([bucket.get(e, self._zero()) for e in range(0, max(bucket) + 1)])
        if A.is_zero():
            return
        B, C = A.divmod(self.fu)
        S = (C * self.Vu) % self.fu
        R = (C - S * self.dfu).divmod(self.fu)[0]
        scal = Fraction(2, 2 * s - 1)
        nxt = B + R + S.derivative().scale(localize(scal, self.p, self.prec + 4))
        self.add_term(s - 1, {e: c for e, c in enumerate(nxt.coeffs)})
        certpoly = S.scale(localize(-scal, self.p, self.prec + 4))
        self.cert.add(0, 1 - 2 * s, {e: c for e, c in enumerate(certpoly.coeffs)})

    def _reduce_base(self, bucket: dict[int, PadicNumber]):
        """Reduce the s = 0 level: lower pole orders to 1 and degrees to
        < 2g using exact forms d(u^(-l) y) and d(u^t y)."""
        g = self.g
        self._clean(bucket)
        # pole orders: c u^-(l+1) y^-1 dx =
        #   (c/(l fa)) (f'/2 - l f1) u^-l y^-1 dx - (c/(l fa)) d(u^-l y)
        while bucket and min(bucket) < -1:
            l = -min(bucket) - 1
            c = bucket.pop(-(l + 1))
            if c.is_zero():
                continue
            cf = c / (self.fa * l)
            rel = self.dfu.scale(localize(Fraction(1, 2), self.p, self.prec + 4)) \
                - self.f1.scale(l)
            for e, rc in enumerate(rel.coeffs):
                key = -l + e
                contrib = cf * rc
                bucket[key] = bucket[key] + contrib if key in bucket else contrib
            self.cert.add(l, 1, {0: -cf})
            self._clean(bucket)
        pole_coeff = bucket.pop(-1, self._zero())
        A = Poly([bucket.get(e, self._zero()) for e in range(0, max(bucket) + 1)]
                 ) if bucket else Poly.zero()
        # degree: kill top coefficients with d(u^t y) = (t u^(t-1) f + u^t f'/2) y^-1 dx
        half = localize(Fraction(1, 2), self.p, self.prec + 4)
        while A.degree >= 2 * g:
            dtop = A.degree
            t = dtop - 2 * g
            lead = A.coeffs[dtop]
            factor = lead * localize(Fraction(2, 2 * t + 2 * g + 1),
                                     self.p, self.prec + 4)
            rel = self.dfu.scale(half).shift_exp(t)
            if t > 0:
                rel = rel + self.fu.scale(t).shift_exp(t - 1)
            A = A - rel.scale(factor)
            # the top coefficient cancels exactly; force it if a tracked-zero
            # residue survives the subtraction
            coeffs = list(A.coeffs)
            if len(coeffs) > dtop:
                coeffs = coeffs[:dtop]
            A = Poly(coeffs)
            self.cert.add(0, 1, {t: factor})
        return A, pole_coeff


def _phi_series_data(curve: HyperellipticCurve, p: int, work_prec: int,
                     nterms: int):
    """Delta = f(x^p) - f(x)^p and the binomial weights of
    (1 + Delta/f^p)^(-1/2), all over Q_p at working precision.

    nterms is kept independent of the working precision: term k carries
    intrinsic valuation >= k+1 and reduces to something almost as small, so
    nterms ~ target precision + 4 suffices; longer series only feed in
    ill-conditioned high levels."""
    fp = curve.f_localized(p, work_prec + 2)
    d = curve.f.degree
    # f(x^p)
    spread = [PadicNumber.zero(p, work_prec + 2)] * (d * p + 1)
    for j, c in enumerate(fp.coeffs):
        spread[j * p] = c
    f_xp = Poly(spread)
    delta = f_xp - _poly_pow(fp, p)
    weights = [localize(binom_half(k), p, work_prec + 2) for k in range(nterms)]
    return delta, weights, nterms


def _poly_pow(f: Poly, e: int) -> Poly:
    result = Poly([Fraction(1)]) if not isinstance(f.coeffs[0], PadicNumber) else None
    if result is None:
        one = PadicNumber.one(f.coeffs[0].prime, f.coeffs[0].precision)
        result = Poly([one])
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def series_terms(precision: int) -> int:
    """Series length for the Frobenius expansion: term k carries intrinsic
    valuation >= k+1 and its reduction stays within a few digits of that."""
    return precision + 4


def guard_digits(curve: HyperellipticCurve, p: int, precision: int) -> int:
    """Working-precision pad beyond N + nterms.

    The reduction of series term k crosses about k levels whose odd index
    is divisible by p, each costing one tracked digit, so certifying N
    digits requires roughly N + nterms working digits; the extra
    ceil(log_p(2 N deg f)) covers the remaining denominators."""
    target = 2 * precision * curve.f.degree
    g = 1
    while p ** g < target:
        g += 1
    return series_terms(precision) + g + 2


def frobenius_basis_columns(curve: HyperellipticCurve, p: int, work_prec: int,
                            nterms: int):
    """Kedlaya reduction of phi^*(x^i dx/y) for i < 2g.

    Returns (matrix M over the basis w_j = x^j dx/(2y), certificates h_i with
    phi^* w_i = d h_i + sum_j M[j][i] w_j)."""
    g = curve.genus
    delta, weights, K = _phi_series_data(curve, p, work_prec, nterms)
    columns = []
    certs = []
    one = PadicNumber.one(p, work_prec + 2)
    for i in range(2 * g):
        red = Reducer(curve, p, work_prec)
        dpow = Poly([one])
        for k in range(K):
            s = (p * (2 * k + 1) - 1) // 2
            coeff = weights[k] * p
            poly = dpow.scale(coeff).shift_exp(p * (i + 1) - 1)
            red.add_term(s, {e: c for e, c in enumerate(poly.coeffs)})
            if k + 1 < K:
                dpow = dpow * delta
        vec, pole, cert = red.run()
        if not pole.is_zero():
            raise PrecisionExhausted("unexpected pole residue in basis reduction")
        columns.append(vec)
        certs.append(cert.scale(localize(Fraction(1, 2), p, work_prec + 2)))
    M = [[columns[i][j] for i in range(2 * g)] for j in range(2 * g)]
    return M, certs


def frobenius_eta_column(curve: HyperellipticCurve, p: int, work_prec: int,
                         nterms: int, a: Fraction, b: Fraction):
    """Frobenius image of eta = b dx/(y (x - a)) reduced to the extended
    basis: phi^* eta = d h + sum_j col[j] w_j + self_coeff * eta.

    self_coeff must come out = p (residues scale by p under phi^*); the
    caller asserts this within precision."""
    g = curve.genus
    delta, weights, K = _phi_series_data(curve, p, work_prec, nterms)
    red = Reducer(curve, p, work_prec, shift=a)
    conv = lambda c: localize(c, p, work_prec + 2)
    # u-coordinates: x = u + a
    delta_u = delta.taylor_shift(conv(a))
    xp1_u = _poly_pow(Poly([conv(a), conv(1)]), p - 1)  # x^(p-1), x = u + a
    # x^p - a = u^p + p G(u): binomial coefficients and a^p - a are divisible
    # by p (the latter by Fermat for p-integral a); assemble G over Q exactly
    a = Fraction(a)
    apow = [Fraction(1)]
    for _ in range(p):
        apow.append(apow[-1] * a)
    Gexact = []
    for j in range(0, p):
        cj = Fraction(_binomial(p, j)) * apow[p - j]
        if j == 0:
            cj = cj - a  # constant term is a^p - a
        Gexact.append(cj / p)
    G = Poly([conv(c) for c in Gexact])
    bp = conv(Fraction(b) * p)
    dpow = Poly([PadicNumber.one(p, work_prec + 2)])
    for k in range(K):
        s = (p * (2 * k + 1) - 1) // 2
        base = dpow * xp1_u
        gpow = Poly([PadicNumber.one(p, work_prec + 2)])
        for m in range(0, K - k):
            coeff = bp * weights[k] * ((-p) ** m)
            poly = (base * gpow).scale(coeff)
            l = p * (m + 1)
            red.add_term(s, {e - l: c for e, c in enumerate(poly.coeffs)})
            if m + 1 < K - k:
                gpow = gpow * G
        if k + 1 < K:
            dpow = dpow * delta_u
    vec, pole_coeff, cert = red.run()
    col = [2 * c for c in vec]  # x^j dx/y = 2 w_j
    self_coeff = pole_coeff / conv(Fraction(b))
    return col, self_coeff, cert


def _binomial(n: int, k: int) -> int:
    b = 1
    for i in range(1, k + 1):
        b = b * (n - k + i) // i
    return b


def cup_gram(curve: HyperellipticCurve) -> list[list[Fraction]]:
    """Cup-product Gram matrix of the basis w_i = x^i dx/(2y), exact over Q.

    cup(a, b) = sum over poles of Res((int a) b); for the basis all poles sit
    at infinity, where the forms have vanishing residue, so the local
    primitive is single-valued and the formula is exact."""
    g = curve.genus
    n = 2 * g
    trunc = 6 * g + 14
    chart = exact_chart(curve, curve.infinity(), trunc)
    inv2Y = (chart.Y * 2).invert()
    expansions = []
    cur = inv2Y * chart.dX
    for i in range(n):
        if i > 0:
            cur = cur * chart.X
        expansions.append(cur)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        res_i = Fraction(expansions[i][-1])
        if res_i != 0:
            raise ArithmeticError("basis form with nonzero residue at infinity")
        prim = expansions[i].integrate()
        for j in range(n):
            gram[i][j] = Fraction((prim * expansions[j])[-1])
    return gram


class Subspace:
    """A g-dimensional subspace of the 2g-dimensional H^1 coordinate space,
    stored as a list of basis column vectors."""

    def __init__(self, vectors, label: str = ""):
        self.vectors = [list(v) for v in vectors]
        self.label = label

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def matrix(self):
        """2g x dim matrix with basis vectors as columns."""
        n = len(self.vectors[0])
        return [[self.vectors[k][i] for k in range(len(self.vectors))]
                for i in range(n)]

    def __repr__(self):
        return f"Subspace(dim={self.dimension}{', ' + self.label if self.label else ''})"


def hodge_f1(p: int, genus: int, precision: int) -> Subspace:
    """F^1 = span of the holomorphic forms w_0, .., w_{g-1}."""
    vecs = []
    for i in range(genus):
        v = [PadicNumber.zero(p, precision) for _ in range(2 * genus)]
        v[i] = PadicNumber.one(p, precision)
        vecs.append(v)
    return Subspace(vecs, "F1")


class FrobeniusData:
    """Frobenius matrix, cup-product Gram matrix, Hodge filtration and
    reduction certificates for one (curve, p, N)."""

    def __init__(self, curve, p, precision, matrix, certs, gram, work_prec):
        self.curve = curve
        self.p = p
        self.precision = precision
        self.work_prec = work_prec
        self.matrix = matrix
        self.certs = certs
        self.gram = gram
        self.genus = curve.genus
        self._eta_cache: dict = {}

    @property
    def hodge_f1(self) -> Subspace:
        return hodge_f1(self.p, self.genus, self.work_prec)

    def charpoly(self):
        return linalg.charpoly(self.matrix)

    def charpoly_int(self) -> list[int]:
        """Characteristic polynomial rounded to integers (ascending)."""
        return [c.balanced_lift() for c in self.charpoly()]

    def measured_loss(self) -> int:
        """Digits of the requested precision lost in the matrix entries."""
        return max(0, self.precision - linalg.min_precision(self.matrix))

    def eta_data(self, a: Fraction, b: Fraction):
        """Cached Frobenius column for eta = b dx/(y(x-a)); normalizes the
        sign so b is determined by a up to the stored orientation."""
        key = (Fraction(a), Fraction(b))
        neg = (Fraction(a), -Fraction(b))
        if key in self._eta_cache:
            return self._eta_cache[key]
        if neg in self._eta_cache:
            col, self_coeff, cert = self._eta_cache[neg]
            flipped = ([-c for c in col], self_coeff, cert.scale(-1))
            self._eta_cache[key] = flipped
            return flipped
        col, self_coeff, cert = frobenius_eta_column(
            self.curve, self.p, self.work_prec, series_terms(self.precision),
            Fraction(a), Fraction(b))
        col = [e.add_bigoh(self.precision) for e in col]
        self_coeff = self_coeff.add_bigoh(self.precision)
        cert = cert.cap(self.precision)
        resid = self_coeff - self.p
        rv = resid.precision if resid.is_zero() else resid.valuation
        if rv < min(self.precision - 2, self_coeff.precision - 1):
            raise PrecisionExhausted(
                f"eta column self-coefficient {self_coeff} differs from p")
        self._eta_cache[key] = (col, self_coeff, cert)
        return self._eta_cache[key]

    def gram_localized(self):
        return [[localize(c, self.p, self.work_prec) for c in row]
                for row in self.gram]

    def to_json(self) -> dict:
        return {
            "f": [str(c) for c in self.curve.f.coeffs],
            "p": self.p,
            "precision": self.precision,
            "work_prec": self.work_prec,
            "matrix": [[e.to_json() for e in row] for row in self.matrix],
            "gram": [[str(c) for c in row] for row in self.gram],
        }


_frobenius_cache: dict = {}


def _cache_path(cache_dir: str, curve: HyperellipticCurve, p: int,
                precision: int) -> str:
    import hashlib
    import os
    tag = ",".join(str(Fraction(c)) for c in curve.f.coeffs)
    h = hashlib.sha256(tag.encode()).hexdigest()[:16]
    return os.path.join(cache_dir, f"frob_{h}_p{p}_N{precision}.json")


def save_frobenius_cache(fd: FrobeniusData, cache_dir: str) -> str:
    """Write matrix + Gram matrix (not the certificates) keyed by (f, p, N)."""
    import os
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, fd.curve, fd.p, fd.precision)
    with open(path, "w") as fh:
        json.dump(fd.to_json(), fh, sort_keys=True)
    return path


def load_frobenius_cache(curve: HyperellipticCurve, p: int, precision: int,
                         cache_dir: str):
    """FrobeniusData from a cache file, without certificates (enough for
    the frobenius/check-weil paths; integration recomputes)."""
    import os
    path = _cache_path(cache_dir, curve, p, precision)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        data = json.load(fh)
    if data.get("f") != [str(Fraction(c)) for c in curve.f.coeffs] \
            or data.get("p") != p or data.get("precision") != precision:
        return None
    matrix = [[PadicNumber(p, e["valuation"], int(e["unit"]), e["precision"])
               for e in row] for row in data["matrix"]]
    gram = [[Fraction(c) for c in row] for row in data["gram"]]
    return FrobeniusData(curve, p, precision, matrix, None, gram,
                         data["work_prec"])


def frobenius_matrix(curve: HyperellipticCurve, p: int, precision: int,
                     cache: bool = True, cache_dir: str | None = None,
                     need_certificates: bool = True) -> FrobeniusData:
    """Frobenius data at a good odd prime p >= 5, computed at working
    precision N + guard; cached per (f, p, N) in-process and optionally in
    a JSON cache directory (matrix and Gram matrix only)."""
    curve.require_good_reduction(p)
    key = (tuple(Fraction(c) for c in curve.f.coeffs), p, precision)
    if cache and key in _frobenius_cache:
        return _frobenius_cache[key]
    if cache_dir and not need_certificates:
        fd = load_frobenius_cache(curve, p, precision, cache_dir)
        if fd is not None:
            return fd
    work = precision + guard_digits(curve, p, precision)
    M, certs = frobenius_basis_columns(curve, p, work, series_terms(precision))
    # the guard digits absorb reduction denominators (and the tails they
    # touch); only the requested precision is certified
    M = [[e.add_bigoh(precision) for e in row] for row in M]
    certs = [c.cap(precision) for c in certs]
    gram = cup_gram(curve)
    fd = FrobeniusData(curve, p, precision, M, certs, gram, work)
    if cache:
        _frobenius_cache[key] = fd
    if cache_dir:
        save_frobenius_cache(fd, cache_dir)
    return fd


def cup_product(a, b, fd: FrobeniusData) -> PadicNumber:
    """Cup product of two H^1 vectors in the w_i basis."""
    gl = fd.gram_localized()
    av = [localize(c, fd.p, fd.work_prec) for c in a]
    bv = [localize(c, fd.p, fd.work_prec) for c in b]
    acc = PadicNumber.zero(fd.p, fd.work_prec)
    for i, ai in enumerate(av):
        if ai.is_zero():
            continue
        for j, bj in enumerate(bv):
            if bj.is_zero():
                continue
            acc = acc + ai * gl[i][j] * bj
    return acc


def unit_root_subspace(fd: FrobeniusData) -> Subspace:
    """The Frobenius-stable complement of F^1 with unit eigenvalue slopes,
    by iterating F on a complement of F^1 until stabilization.

    Raises NotOrdinary when the reduction is not ordinary (middle
    coefficient of the characteristic polynomial not a p-unit)."""
    g = fd.genus
    p = fd.p
    chi = fd.charpoly()
    mid = chi[g]
    if mid.is_zero() or mid.valuation > 0:
        raise NotOrdinary(
            f"unit-root subspace has dimension < {g} (middle charpoly "
            f"coefficient has positive valuation)")
    V = [[PadicNumber.zero(p, fd.work_prec) for _ in range(g)] for _ in range(2 * g)]
    for k in range(g):
        V[g + k][k] = PadicNumber.one(p, fd.work_prec)
    for _ in range(fd.precision + 3):
        V = linalg.mat_mul(fd.matrix, V)
        V = linalg.column_echelon(V)
        if not V or len(V[0]) < g:
            raise NotOrdinary("iterated Frobenius image collapsed")
    W = Subspace([[V[i][k] for i in range(2 * g)] for k in range(g)], "unit-root")
    _require_complementary(W, fd)
    return W


def _require_complementary(W: Subspace, fd: FrobeniusData):
    g = fd.genus
    stacked = [row[:] for row in W.matrix()]
    f1 = fd.hodge_f1.matrix()
    for i in range(2 * g):
        stacked[i] = stacked[i] + f1[i]
    d = linalg.det(stacked)
    if d.is_zero():
        raise DegenerateInput("subspace is not complementary to F^1 within precision")


def annihilator(W: Subspace, fd: FrobeniusData) -> Subspace:
    """W' = {v : cup(w, v) = 0 for all w in W}; complementary to F^1."""
    _require_complementary(W, fd)
    gl = fd.gram_localized()
    rows = []
    for w in W.vectors:
        wl = [localize(c, fd.p, fd.work_prec) for c in w]
        rows.append(linalg.mat_vec(linalg.transpose(gl), wl))
    basis = linalg.nullspace(rows)
    if len(basis) != fd.genus:
        raise DegenerateInput(
            f"annihilator has dimension {len(basis)}, expected {fd.genus}")
    Wp = Subspace(basis, f"ann({W.label})" if W.label else "annihilator")
    _require_complementary(Wp, fd)
    return Wp


def random_complementary_subspace(fd: FrobeniusData, seed: int) -> Subspace:
    """A deterministic pseudo-random g-dimensional complement of F^1 with
    small integer coordinates (used when the unit-root choice is not wanted
    or not available)."""
    import random as _random
    rng = _random.Random(seed)
    g = fd.genus
    for _ in range(64):
        vecs = []
        for k in range(g):
            v = [PadicNumber.from_int(rng.randrange(-9, 10), fd.p, fd.work_prec)
                 for _ in range(g)]
            tail = [PadicNumber.zero(fd.p, fd.work_prec) for _ in range(g)]
            tail[k] = PadicNumber.one(fd.p, fd.work_prec)
            vecs.append(v + tail)
        W = Subspace(vecs, f"random({seed})")
        try:
            _require_complementary(W, fd)
            return W
        except DegenerateInput:
            continue
    raise DegenerateInput("could not find a complementary subspace")


def subspaces_equal(A: Subspace, B: Subspace, tol_prec: int) -> bool:
    """Subspace equality by row reduction of stacked bases."""
    if A.dimension != B.dimension:
        return False
    joint = linalg.column_echelon([row_a + row_b for row_a, row_b in
                                   zip(A.matrix(), B.matrix())])
    # equal iff the echelon of the concatenation has the same rank as A
    ech_a = linalg.column_echelon(A.matrix())
    return joint and len(joint[0]) == len(ech_a[0])


def _pole_groups(form: ThirdKindForm, p: int):
    """Group the nu blocks by pole x-coordinate; returns a list of
    (a, b, weight) with weight the coefficient of eta_(a,b) = b dx/(y(x-a)),
    a half-integer multiple.  Validates v1 position constraints."""
    groups: dict[Fraction, tuple[Fraction, Fraction]] = {}
    for P, n in form.poles:
        a, b = Fraction(P.x), Fraction(P.y)
        if (a != 0 and valuation_of_rational(a, p) < 0) or \
                (b != 0 and valuation_of_rational(b, p) < 0):
            raise UnsupportedSupport(f"pole {P} is not {p}-integral")
        if a in groups:
            b0, w = groups[a]
            groups[a] = (b0, w + Fraction(n, 2) * (1 if b == b0 else -1))
        else:
            groups[a] = (b, Fraction(n, 2))
    abar_seen = {}
    out = []
    for a, (b, w) in sorted(groups.items()):
        fa = Fraction(form.curve.f(a))
        if valuation_of_rational(fa, p) != 0:
            raise UnsupportedSupport(
                f"pole at x = {a} reduces to a Weierstrass disk mod {p}")
        abar = (a.numerator * pow(a.denominator, -1, p)) % p
        if abar in abar_seen and abar_seen[abar] != a:
            raise UnsupportedSupport(
                f"poles at x = {abar_seen[abar]} and x = {a} collide mod {p}")
        abar_seen[abar] = a
        out.append((a, b, w))
    return out


def psi(form: ThirdKindForm, fd: FrobeniusData):
    """The class of the form in H^1_dR(X): Frobenius-equivariant projection
    away from the log classes.  Even (involution-invariant) parts project
    to zero; the odd parts are c - G w with (M - p) G = -C."""
    p = fd.p
    g = fd.genus
    c = [localize(v, p, fd.work_prec) for v in form.hol]
    groups = _pole_groups(form, p)
    if not groups:
        return c
    MminusP = [[fd.matrix[i][j] - (p if i == j else 0) for j in range(2 * g)]
               for i in range(2 * g)]
    rhs_cols = []
    weights = []
    for a, b, w in groups:
        if w == 0:
            continue
        col, _, _ = fd.eta_data(a, b)
        rhs_cols.append([-e for e in col])
        weights.append(localize(w, p, fd.work_prec))
    if not rhs_cols:
        return c
    B = [[rhs_cols[k][i] for k in range(len(rhs_cols))] for i in range(2 * g)]
    G = linalg.solve_matrix(MminusP, B)
    out = list(c)
    for k, w in enumerate(weights):
        for i in range(2 * g):
            out[i] = out[i] - G[i][k] * w
    return out


def decompose(vector, W: Subspace, fd: FrobeniusData):
    """Split an H^1 vector along W + F^1; returns (w_coords, f1_coords)."""
    g = fd.genus
    cols = [list(v) for v in W.vectors] + [list(v) for v in fd.hodge_f1.vectors]
    A = [[cols[k][i] for k in range(2 * g)] for i in range(2 * g)]
    sol = linalg.solve(A, [localize(v, fd.p, fd.work_prec) for v in vector])
    return sol[:g], sol[g:]


def omega_w(D: Divisor, W: Subspace, fd: FrobeniusData) -> ThirdKindForm:
    """The form with residue divisor D whose H^1 class lies in W: subtract
    from a residue-matching form the F^1 component of its class."""
    form = third_kind_with_residue(D)
    cls = psi(form, fd)
    _, f1_coords = decompose(cls, W, fd)
    hol = list(form.hol)
    for i in range(fd.genus):
        hol[i] = hol[i] - f1_coords[i]
    out = form.with_hol(hol)
    if residue_divisor(out) != D:
        raise ArithmeticError("residue divisor changed by the F^1 correction")
    return out


def psi_in_w_residual(form: ThirdKindForm, W: Subspace, fd: FrobeniusData) -> int:
    """Valuation of the F^1 component of psi(form) when decomposed along
    W + F^1 (large = the class lies in W to that depth)."""
    cls = psi(form, fd)
    _, f1_coords = decompose(cls, W, fd)
    return linalg.residual_valuation(f1_coords)
