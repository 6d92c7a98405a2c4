"""Capped-precision arithmetic in Q_p.

Values are tracked with *absolute* precision: a PadicNumber represents a
number known modulo p^N.  Zero to working precision is a first-class value
("tracked zero", valuation >= N).  All operations propagate precision
pessimistically:

    prec(a + b)  = min(N_a, N_b)
    prec(a * b)  = min(v_a + N_b, v_b + N_a)

The logarithm carries a branch parameter: log_w(x) = log(<x>) + v(x)*c where
<x> is the principal-unit part and c is the chosen value of log_w(p)
(c = 0 is the Iwasawa branch).  Only odd primes p >= 5 are supported.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DivisionByZero,
    NotAUnit,
    OutOfConvergenceDomain,
    PrecisionExhausted,
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = 49
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    """Reject primes outside the supported range (odd, >= 5)."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p < 5:
        raise ValueError(f"p = {p} unsupported: need an odd prime >= 5")


def valuation_of_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_of_rational(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    return valuation_of_int(x.numerator, p) - valuation_of_int(x.denominator, p)


class PadicNumber:
    """An element of Q_p known modulo p^precision.

    Invariants: for a nonzero value, 0 < unit < p^(precision - valuation)
    and p does not divide unit.  The tracked zero has unit == 0 and
    valuation == precision.
    """

    __slots__ = ("prime", "valuation", "unit", "precision")

    def __init__(self, prime: int, valuation: int, unit: int, precision: int):
        self.prime = prime
        rel = precision - valuation
        if rel <= 0:
            # no significant digits: collapse to tracked zero
            self.valuation = precision
            self.unit = 0
            self.precision = precision
            return
        unit %= prime ** rel
        if unit == 0:
            self.valuation = precision
            self.unit = 0
            self.precision = precision
            return
        if unit % prime == 0:
            # not in normal form: shift valuation
            shift = valuation_of_int(unit, prime)
            valuation += shift
            unit //= prime ** shift
            rel = precision - valuation
            if rel <= 0:
                self.valuation = precision
                self.unit = 0
                self.precision = precision
                return
            unit %= prime ** rel
        self.valuation = valuation
        self.unit = unit
        self.precision = precision

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, p: int, precision: int) -> "PadicNumber":
        return cls(p, precision, 0, precision)

    @classmethod
    def one(cls, p: int, precision: int) -> "PadicNumber":
        return cls(p, 0, 1, precision)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int) -> "PadicNumber":
        if n == 0:
            return cls.zero(p, precision)
        v = valuation_of_int(n, p)
        return cls(p, v, n // p ** v, precision)

    @classmethod
    def from_rational(cls, x, p: int, precision: int) -> "PadicNumber":
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, precision)
        vn = valuation_of_int(x.numerator, p) if x.numerator else 0
        vd = valuation_of_int(x.denominator, p)
        v = vn - vd
        rel = precision - v
        if rel <= 0:
            return cls.zero(p, precision)
        num = x.numerator // p ** vn
        den = x.denominator // p ** vd
        unit = num * pow(den, -1, p ** rel) % p ** rel
        return cls(p, v, unit, precision)

    @classmethod
    def parse(cls, text: str, p: int, precision: int) -> "PadicNumber":
        """Parse a rational string "a/b" (or "a") into Q_p."""
        return cls.from_rational(Fraction(text.strip()), p, precision)

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        """True when zero to working precision."""
        return self.unit == 0

    def val(self) -> int:
        """Valuation; for a tracked zero this is the precision (a lower bound)."""
        return self.valuation

    def lift(self) -> int:
        """Smallest non-negative integer representative (valuation >= 0 only)."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("no integer lift: negative valuation")
        return self.unit * self.prime ** self.valuation

    def balanced_lift(self) -> int:
        """Integer representative in (-p^N/2, p^N/2], for recognizing integers."""
        n = self.lift()
        mod = self.prime ** self.precision
        return n - mod if 2 * n > mod else n

    def residue(self) -> int:
        """Image in F_p; requires valuation >= 0."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise ValueError("no residue: negative valuation")
        return 0 if self.valuation > 0 else self.unit % self.prime

    def add_bigoh(self, n: int) -> "PadicNumber":
        """Cap absolute precision at n."""
        if n >= self.precision:
            return self
        return PadicNumber(self.prime, self.valuation, self.unit, n)

    def lift_to_precision(self, n: int) -> "PadicNumber":
        """Assert precision n >= current (the extra digits are taken as zero)."""
        if n <= self.precision:
            return self
        if self.is_zero():
            return PadicNumber.zero(self.prime, n)
        return PadicNumber(self.prime, self.valuation, self.unit, n)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other, margin: int = 0):
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, (int, Fraction)):
            x = Fraction(other)
            if x == 0:
                # exact zero: absorb with no precision cap
                return PadicNumber.zero(self.prime, self.precision + abs(self.valuation) + margin + 4)
            v = valuation_of_rational(x, self.prime)
            n = self.precision + max(v, 0) + max(0, -self.valuation) + margin + 1
            return PadicNumber.from_rational(x, self.prime, n)
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        a = self
        p = a.prime
        n = min(a.precision, b.precision)
        vmin = min(a.valuation, b.valuation, n)
        acc = 0
        if not a.is_zero():
            acc += a.unit * p ** (a.valuation - vmin)
        if not b.is_zero():
            acc += b.unit * p ** (b.valuation - vmin)
        rel = n - vmin
        if rel <= 0:
            return PadicNumber.zero(p, n)
        acc %= p ** rel
        if acc == 0:
            return PadicNumber.zero(p, n)
        return PadicNumber(p, vmin, acc, n)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        rel = self.precision - self.valuation
        return PadicNumber(self.prime, self.valuation,
                           self.prime ** rel - self.unit, self.precision)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        a = self
        p = a.prime
        n = min(a.valuation + b.precision, b.valuation + a.precision)
        if a.is_zero() or b.is_zero():
            return PadicNumber.zero(p, n)
        v = a.valuation + b.valuation
        rel = n - v
        if rel <= 0:
            return PadicNumber.zero(p, n)
        return PadicNumber(p, v, (a.unit * b.unit) % p ** rel, n)

    __rmul__ = __mul__

    def inv(self) -> "PadicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero (to working precision)")
        p = self.prime
        rel = self.precision - self.valuation
        unit = pow(self.unit, -1, p ** rel)
        return PadicNumber(p, -self.valuation, unit, rel - self.valuation)

    def __truediv__(self, other):
        b = self._coerce(other, margin=2)
        if b is None:
            return NotImplemented
        return self * b.inv()

    def __rtruediv__(self, other):
        b = self._coerce(other, margin=2)
        if b is None:
            return NotImplemented
        return b * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inv() ** (-e)
        result = PadicNumber.one(self.prime, self.precision + abs(self.valuation) * max(e, 1) + 2)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        """Equality = indistinguishable at the joint precision."""
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if other.prime != self.prime:
            return False
        return (self - other).is_zero()

    __hash__ = None

    # -- display ----------------------------------------------------------

    def digits(self) -> list[int]:
        """Base-p digits d_i for i in [valuation, precision)."""
        if self.is_zero():
            return []
        out = []
        u = self.unit
        for _ in range(self.valuation, self.precision):
            u, d = divmod(u, self.prime)
            out.append(d)
        return out

    def __str__(self):
        p = self.prime
        if self.is_zero():
            return f"O({p}^{self.precision})"
        parts = []
        for i, d in enumerate(self.digits()):
            if d == 0:
                continue
            e = self.valuation + i
            if e == 0:
                parts.append(f"{d}")
            elif e == 1:
                parts.append(f"{d}*{p}")
            else:
                parts.append(f"{d}*{p}^{e}")
        parts.append(f"O({p}^{self.precision})")
        return " + ".join(parts)

    def __repr__(self):
        return f"PadicNumber({self.prime}, v={self.valuation}, u={self.unit}, N={self.precision})"

    def to_json(self) -> dict:
        """Serialize as both digit expansion and (unit, valuation, precision) triple."""
        return {
            "digits": str(self),
            "unit": str(self.unit),
            "valuation": self.valuation,
            "precision": self.precision,
        }


class LogBranch:
    """A branch of the p-adic logarithm, fixed by the value assigned to log(p)."""

    __slots__ = ("branch_constant",)

    def __init__(self, branch_constant: PadicNumber):
        self.branch_constant = branch_constant

    @classmethod
    def iwasawa(cls, p: int, precision: int) -> "LogBranch":
        return cls(PadicNumber.zero(p, precision))

    @classmethod
    def from_rational(cls, c, p: int, precision: int) -> "LogBranch":
        return cls(PadicNumber.from_rational(Fraction(c), p, precision))

    def __repr__(self):
        return f"LogBranch({self.branch_constant!r})"


def teichmuller(a: PadicNumber) -> PadicNumber:
    """The (p-1)-st root of unity congruent to a mod p.

    Requires a to be a unit.  Computed by iterating x -> x^p, which fixes
    one more digit per step.
    """
    if a.is_zero() or a.valuation != 0:
        raise NotAUnit(f"teichmuller needs a unit, got valuation {a.val()}")
    p = a.prime
    n = a.precision
    mod = p ** n
    x = a.unit % mod
    for _ in range(n):
        x = pow(x, p, mod)
    return PadicNumber(p, 0, x, n)


def _log_principal_unit(u: PadicNumber) -> PadicNumber:
    """log of a principal unit u = 1 + z, v(z) >= 1, via the alternating series."""
    p = u.prime
    n = u.precision
    z = u - 1
    if z.is_zero():
        return PadicNumber.zero(p, n)
    vz = z.valuation
    if vz < 1:
        raise NotAUnit("log series needs a principal unit")
    # series length so the tail lies beyond precision even after 1/k losses
    kmax = 1
    while kmax * vz - _guard(p, kmax) <= n:
        kmax += 1
    kmax += 1
    guard = _guard(p, kmax)
    work = n + guard
    zw = z.lift_to_precision(work + vz)
    acc = PadicNumber.zero(p, work)
    power = zw
    for k in range(1, kmax + 1):
        contrib = power / k
        if k % 2 == 0:
            contrib = -contrib
        acc = acc + contrib
        if k < kmax:
            power = power * zw
    return acc.add_bigoh(n)


def _guard(p: int, k: int) -> int:
    """Digits lost at worst to divisions by integers up to k."""
    g = 1
    while p ** g <= k:
        g += 1
    return g


def log(x: PadicNumber, branch: LogBranch) -> PadicNumber:
    """Branch-extended p-adic logarithm on Q_p^*.

    log_w(x) = log(<x>) + v(x) * branch_constant, and log_w kills the
    Teichmueller part.  Homomorphism: log_w(xy) = log_w(x) + log_w(y).
    """
    if x.is_zero():
        raise PrecisionExhausted("log of zero (to working precision)")
    v = x.valuation
    unit = PadicNumber(x.prime, 0, x.unit, x.precision - v)
    omega = teichmuller(unit)
    principal = unit * omega.inv()
    result = _log_principal_unit(principal)
    if v != 0:
        result = result + branch.branch_constant * v
    return result


def log0(x, p: int, precision: int) -> PadicNumber:
    """Iwasawa-branch log of a rational (or p-adic) number."""
    if isinstance(x, PadicNumber):
        return log(x, LogBranch.iwasawa(p, precision))
    val = PadicNumber.from_rational(Fraction(x), p, precision + max(0, valuation_of_rational(Fraction(x), p)) + 1)
    return log(val, LogBranch.iwasawa(p, precision)).add_bigoh(precision)


def exp(x: PadicNumber) -> PadicNumber:
    """p-adic exponential; requires v(x) >= 1 (p >= 5)."""
    p = x.prime
    n = x.precision
    if x.is_zero():
        return PadicNumber.one(p, n)
    v = x.valuation
    if v < 1:
        raise OutOfConvergenceDomain(f"exp needs valuation >= 1, got {v}")
    # v(x^k / k!) >= k*v - (k-1)/(p-1) grows since v >= 1 > 1/(p-1)
    kmax = 1
    while kmax * v - (kmax - 1) // (p - 1) <= n + 2:
        kmax += 1
    guard = _guard(p, kmax) + 2
    work = n + guard
    xw = x.lift_to_precision(work + v)
    acc = PadicNumber.one(p, work)
    term = PadicNumber.one(p, work + kmax * v + guard)
    for k in range(1, kmax + 1):
        term = term * xw / k
        acc = acc + term
    return acc.add_bigoh(n)


def sqrt(a: PadicNumber, root_mod_p: int) -> PadicNumber:
    """Square root of a unit a with prescribed residue root_mod_p.

    Newton iteration from the given mod-p root; requires v(a) = 0 and
    root_mod_p^2 = a mod p.
    """
    if a.is_zero() or a.valuation != 0:
        raise NotAUnit("sqrt needs a unit")
    p = a.prime
    n = a.precision
    mod = p ** n
    au = a.unit % mod
    x = root_mod_p % p
    if (x * x - au) % p != 0:
        raise ValueError("root_mod_p is not a square root mod p")
    k = 1
    while k < n:
        k = min(2 * k, n)
        m = p ** k
        x = (x + au % m * pow(x, -1, m)) % m * pow(2, -1, m) % m
    return PadicNumber(p, 0, x % mod, n)
