"""Point counts over F_p and F_{p^2} and the Weil polynomial they determine.

Used as the independent oracle for the Frobenius characteristic polynomial:
for genus g <= 2 the numerator of the zeta function is pinned down by the
counts over F_p and (for g = 2) F_{p^2}.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BadReduction
from .curve import HyperellipticCurve
from .padic import valuation_of_rational


def _f_mod_p(curve: HyperellipticCurve, p: int) -> list[int]:
    out = []
    for c in curve.f.coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise BadReduction(f"coefficients not {p}-integral")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return out


def count_points_fp(curve: HyperellipticCurve, p: int) -> int:
    """#X(F_p) by exhaustive enumeration (includes the single point at infinity)."""
    if not curve.good_reduction(p):
        raise BadReduction(f"bad reduction at {p}")
    coeffs = _f_mod_p(curve, p)
    half = (p - 1) // 2
    count = 1  # infinity
    for x in range(p):
        fx = 0
        for c in reversed(coeffs):
            fx = (fx * x + c) % p
        if fx == 0:
            count += 1
        elif pow(fx, half, p) == 1:
            count += 2
    return count


def _fp2_nonresidue(p: int) -> int:
    half = (p - 1) // 2
    for d in range(2, p):
        if pow(d, half, p) == p - 1:
            return d
    raise ValueError("no quadratic nonresidue found")


def count_points_fp2(curve: HyperellipticCurve, p: int) -> int:
    """#X(F_{p^2}) by enumeration in F_p[sqrt(d)], d a nonresidue."""
    if not curve.good_reduction(p):
        raise BadReduction(f"bad reduction at {p}")
    coeffs = _f_mod_p(curve, p)
    d = _fp2_nonresidue(p)

    def mul(a, b):
        return ((a[0] * b[0] + d * a[1] * b[1]) % p,
                (a[0] * b[1] + a[1] * b[0]) % p)

    def powq(a, e):
        r = (1, 0)
        while e:
            if e & 1:
                r = mul(r, a)
            a = mul(a, a)
            e >>= 1
        return r

    half = (p * p - 1) // 2
    count = 1
    for x0 in range(p):
        for x1 in range(p):
            x = (x0, x1)
            fx = (0, 0)
            for c in reversed(coeffs):
                fx = mul(fx, x)
                fx = ((fx[0] + c) % p, fx[1])
            if fx == (0, 0):
                count += 1
            elif powq(fx, half) == (1, 0):
                count += 2
    return count


def weil_polynomial(curve: HyperellipticCurve, p: int) -> list[int]:
    """Characteristic polynomial of p-power Frobenius on H^1, ascending
    coefficients [c_0, ..., c_{2g}] with c_{2g} = 1, from point counts.

    Genus 1: T^2 - a T + p with a = p + 1 - #X(F_p).
    Genus 2: T^4 - s1 T^3 + s2 T^2 - p s1 T + p^2 from counts over F_p, F_{p^2}.
    """
    g = curve.genus
    if g == 1:
        a = p + 1 - count_points_fp(curve, p)
        return [p, -a, 1]
    if g == 2:
        n1 = count_points_fp(curve, p)
        n2 = count_points_fp2(curve, p)
        s1 = p + 1 - n1          # sum of Frobenius eigenvalues
        q2 = p * p + 1 - n2      # sum of squares of eigenvalues
        s2 = (s1 * s1 - q2) // 2
        if (s1 * s1 - q2) % 2 != 0:
            raise ArithmeticError("inconsistent point counts")
        return [p * p, -p * s1, s2, -s1, 1]
    raise NotImplementedError("Weil polynomial from counts implemented for g <= 2")


def is_ordinary_from_counts(curve: HyperellipticCurve, p: int) -> bool:
    """Ordinarity test: the middle coefficient of the Weil polynomial is a p-unit."""
    chi = weil_polynomial(curve, p)
    g = curve.genus
    return chi[g] % p != 0
