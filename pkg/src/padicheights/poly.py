"""Dense polynomials and truncated Laurent series.

Coefficients are either exact rationals (Fraction/int) or PadicNumber;
operations are domain-agnostic.  Exact arithmetic is used for curve-level
data (discriminants, resultants); p-adic coefficients appear only after
localization, so no precision is lost in global objects.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import (
    DivisionByNonUnitLeading,
    NonComposable,
    NonInvertible,
)
from .padic import PadicNumber


def _is_zero(c) -> bool:
    if isinstance(c, PadicNumber):
        return c.is_zero()
    return c == 0


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


class Poly:
    """Dense polynomial, coefficients ascending by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs

    @classmethod
    def zero(cls):
        return cls([])

    @classmethod
    def x(cls):
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if _is_zero(ca):
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c):
        return Poly([a * c for a in self.coeffs])

    def shift_exp(self, k: int) -> "Poly":
        """Multiply by x^k (k >= 0)."""
        if self.is_zero():
            return self
        return Poly([0] * k + self.coeffs)

    def divmod(self, other: "Poly"):
        """Division with remainder; the divisor's leading coefficient must be invertible."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = other.leading()
        if isinstance(lead, PadicNumber):
            if lead.valuation != 0:
                raise DivisionByNonUnitLeading(
                    f"leading coefficient has valuation {lead.val()}")
            inv_lead = lead.inv()
        else:
            inv_lead = Fraction(1, 1) / Fraction(lead)
        rem = list(self.coeffs)
        dn = other.degree
        if self.degree < dn:
            return Poly.zero(), Poly(rem)
        quot = [0] * (self.degree - dn + 1)
        for k in range(self.degree - dn, -1, -1):
            c = rem[k + dn] * inv_lead
            quot[k] = c
            if not _is_zero(c):
                for j, bc in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * bc
        return Poly(quot), Poly(rem[:dn])

    def __divmod__(self, other):
        return self.divmod(other)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; x may be rational, p-adic, Poly, or series."""
        if self.is_zero():
            return 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def taylor_shift(self, a) -> "Poly":
        """Coefficients of self(u + a) in u, by synthetic division."""
        coeffs = list(self.coeffs)
        n = len(coeffs)
        out = []
        for _ in range(n):
            # repeatedly divide by (x - a): remainders are the Taylor coefficients
            rem = 0
            for k in range(len(coeffs) - 1, -1, -1):
                rem = coeffs[k] + rem * a
                coeffs[k] = rem
            out.append(coeffs[0])
            coeffs = coeffs[1:]
        return Poly(out)

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"Poly({self.coeffs!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self[k]
            if _is_zero(c):
                continue
            if k == 0:
                term = f"{c}"
            else:
                xs = "x" if k == 1 else f"x^{k}"
                term = xs if c == 1 else (f"-{xs}" if c == -1 else f"{c}*{xs}")
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (exact coefficients only)."""
    a = a.map_coeffs(Fraction)
    b = b.map_coeffs(Fraction)
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    lead = a.leading()
    return a.scale(Fraction(1) / lead)


def resultant(a: Poly, b: Poly) -> Fraction:
    """Resultant over Q via the Sylvester matrix (exact)."""
    m, n = a.degree, b.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0:
        return Fraction(a[0]) ** n
    if n == 0:
        return Fraction(b[0]) ** m
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for k in range(m + 1):
            row[i + k] = Fraction(a[m - k])
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for k in range(n + 1):
            row[i + k] = Fraction(b[n - k])
        rows.append(row)
    # fraction-exact Gaussian elimination
    det = Fraction(1)
    for col in range(size):
        pivot = None
        for r in range(col, size):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = Fraction(1) / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] != 0:
                factor = rows[r][col] * inv
                for c in range(col, size):
                    rows[r][c] -= factor * rows[col][c]
    return det


def discriminant(f: Poly) -> Fraction:
    """Discriminant over Q: (-1)^(d(d-1)/2) res(f, f') / lc(f)."""
    d = f.degree
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / Fraction(f.leading())


_TERM_RE = re.compile(
    r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(x)?(?:\^(\d+))?\s*")


def parse_poly(text: str) -> Poly:
    """Parse "x^3 - x + 1" style polynomial strings over Q."""
    pos = 0
    terms = {}
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            exp = int(m.group(4)) if m.group(4) else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, Fraction(0)) + sign * coeff
        pos = m.end()
    n = max(terms) + 1
    return Poly([terms.get(k, Fraction(0)) for k in range(n)])


class TruncatedSeries:
    """Truncated Laurent series: coefficients for exponents [low, trunc).

    Exponents >= trunc are unknown.  Arithmetic propagates trunc as the
    standard minimum rules; differentiation lowers trunc by one and formal
    integration raises it by one (costing p-adic precision at indices
    divisible by p through the 1/(k+1) factors).
    """

    __slots__ = ("low", "coeffs", "trunc")

    def __init__(self, low: int, coeffs, trunc: int):
        coeffs = list(coeffs)
        if len(coeffs) > trunc - low:
            coeffs = coeffs[: max(trunc - low, 0)]
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            low += 1
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            low = trunc
        self.low = low
        self.coeffs = coeffs
        self.trunc = trunc

    @classmethod
    def zero(cls, trunc: int):
        return cls(trunc, [], trunc)

    @classmethod
    def constant(cls, c, trunc: int):
        return cls(0, [c], trunc)

    @classmethod
    def t(cls, trunc: int):
        return cls(1, [1], trunc)

    @classmethod
    def from_poly(cls, f: Poly, trunc: int):
        return cls(0, list(f.coeffs), trunc)

    def __getitem__(self, k: int):
        if self.low <= k < self.low + len(self.coeffs):
            return self.coeffs[k - self.low]
        return 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        """Lowest known exponent (trunc if zero to truncation)."""
        return self.low

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.trunc)
        trunc = min(self.trunc, other.trunc)
        if self.is_zero():
            return TruncatedSeries(other.low, other.coeffs, trunc)
        if other.is_zero():
            return TruncatedSeries(self.low, self.coeffs, trunc)
        low = min(self.low, other.low)
        n = trunc - low
        out = [0] * n
        for i, c in enumerate(self.coeffs):
            k = self.low + i - low
            if 0 <= k < n:
                out[k] = out[k] + c
        for i, c in enumerate(other.coeffs):
            k = other.low + i - low
            if 0 <= k < n:
                out[k] = out[k] + c
        return TruncatedSeries(low, out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.low, [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.trunc)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.low, [c * other for c in self.coeffs],
                                   self.trunc)
        if self.is_zero() or other.is_zero():
            return TruncatedSeries.zero(min(self.trunc + other.low,
                                            other.trunc + self.low)
                                        if not (self.is_zero() and other.is_zero())
                                        else min(self.trunc, other.trunc))
        trunc = min(self.trunc + other.low, other.trunc + self.low)
        low = self.low + other.low
        n = trunc - low
        out = [0] * max(n, 0)
        for i, ca in enumerate(self.coeffs):
            if _is_zero(ca):
                continue
            for j, cb in enumerate(other.coeffs):
                k = i + j
                if k >= n:
                    break
                out[k] = out[k] + ca * cb
        return TruncatedSeries(low, out, trunc)

    __rmul__ = __mul__

    def truncate(self, trunc: int) -> "TruncatedSeries":
        return TruncatedSeries(self.low, self.coeffs, min(self.trunc, trunc))

    def differentiate(self) -> "TruncatedSeries":
        out = []
        for i, c in enumerate(self.coeffs):
            k = self.low + i
            out.append(k * c)
        return TruncatedSeries(self.low - 1, out, self.trunc - 1)

    def integrate(self) -> "TruncatedSeries":
        """Termwise primitive with zero constant; needs zero coefficient at t^-1."""
        if not _is_zero(self[-1]):
            raise ValueError("cannot integrate a series with nonzero residue term")
        out = []
        for i, c in enumerate(self.coeffs):
            k = self.low + i
            if k == -1:
                out.append(0)
                continue
            if isinstance(c, PadicNumber):
                out.append(c / (k + 1))
            else:
                out.append(Fraction(c, 1) / (k + 1))
        return TruncatedSeries(self.low + 1, out, self.trunc + 1)

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse; the lowest coefficient must be invertible."""
        if self.is_zero():
            raise NonInvertible("cannot invert a series that is zero to truncation")
        a0 = self.coeffs[0]
        if isinstance(a0, PadicNumber):
            if a0.valuation != 0:
                raise NonInvertible("lowest coefficient is not a p-adic unit")
            inv0 = a0.inv()
        else:
            inv0 = Fraction(1) / Fraction(a0)
        n = self.trunc - self.low
        a = [self[self.low + k] for k in range(n)]
        b = [0] * n
        b[0] = inv0
        for k in range(1, n):
            s = 0
            for i in range(1, k + 1):
                if not _is_zero(a[i]):
                    s = s + a[i] * b[k - i]
            b[k] = -inv0 * s
        return TruncatedSeries(-self.low, b, self.trunc - 2 * self.low)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner); requires inner to vanish at the origin and self to be a power series."""
        if inner.is_zero():
            if self.low < 0:
                raise NonComposable("outer series has negative exponents")
            return TruncatedSeries.constant(self[0], inner.trunc)
        if inner.low < 1:
            raise NonComposable(
                f"inner series must have positive lowest exponent, got {inner.low}")
        if self.low < 0:
            raise NonComposable("outer series has negative exponents")
        trunc = min(self.trunc * inner.low, inner.trunc)
        acc = TruncatedSeries.zero(trunc)
        power = TruncatedSeries.constant(1, trunc)
        for k in range(0, self.trunc):
            c = self[k]
            if not _is_zero(c):
                acc = acc + power * c
            if (k + 1) * inner.low >= trunc:
                break
            power = power * inner
        return acc.truncate(trunc)

    def sqrt_with_initial(self, y0) -> "TruncatedSeries":
        """Square root of an even-valuation series, choosing the branch y0
        with y0^2 = lowest coefficient."""
        if self.is_zero():
            raise NonInvertible("sqrt of zero series")
        if self.low % 2:
            raise NonInvertible("sqrt needs even lowest exponent")
        half_low = self.low // 2
        n = self.trunc - self.low
        a = [self[self.low + k] for k in range(n)]
        if isinstance(y0, PadicNumber):
            inv2y0 = (2 * y0).inv()
        else:
            y0 = Fraction(y0)
            inv2y0 = Fraction(1) / (2 * y0)
        b = [0] * n
        b[0] = y0
        for k in range(1, n):
            s = a[k]
            for i in range(1, k):
                s = s - b[i] * b[k - i]
            b[k] = s * inv2y0
        return TruncatedSeries(half_low, b, self.trunc - half_low)

    def evaluate(self, x: PadicNumber) -> PadicNumber:
        """Value at a p-adic point with v(x) >= 1; the truncation tail caps
        the reported precision at trunc * v(x) (unknown coefficients are
        assumed p-integral, which holds for the expansions used here)."""
        p = x.prime
        if x.is_zero():
            vx = x.precision
        else:
            vx = x.valuation
        if vx < 1:
            raise ValueError("series evaluation needs v(x) >= 1")
        tail = self.trunc * vx
        if self.is_zero():
            return PadicNumber.zero(p, tail)
        acc = PadicNumber.zero(p, tail + max(0, -self.low) * vx + 4)
        if self.low < 0 and x.is_zero():
            raise ZeroDivisionError("negative exponents at x = 0")
        # Horner on the power-series part, explicit powers for the pole part
        k = self.low + len(self.coeffs) - 1
        horner = None
        for c in reversed(self.coeffs):
            horner = c if horner is None else horner * x + c
            k -= 1
        value = horner
        base = self.low
        if base > 0:
            value = value * x ** base
        elif base < 0:
            value = value * x.inv() ** (-base)
        acc = acc + value
        return acc.add_bigoh(tail)

    def __repr__(self):
        terms = ", ".join(f"t^{self.low + i}: {c}" for i, c in enumerate(self.coeffs))
        return f"TruncatedSeries([{terms}] + O(t^{self.trunc}))"
