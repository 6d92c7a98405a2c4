"""The height pairing: idele-class character data, the local term at p via
Coleman integration, local intersection terms at good primes away from p,
and the global assembly.

Over Q the class-character condition pins everything to one parameter: the
local component at p is t * log with the Iwasawa branch, and each away
component is determined by l_q(q) = -t * log0(q).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BadPrimeContact,
    BadReductionAtQ,
    NotClassCharacter,
    OverlappingSupport,
    SupportsCollideModP,
    UnramifiedAtP,
)
from .coleman import ColemanContext, integral_over_divisor
from .curve import (
    AFFINE,
    INFINITY,
    WEIERSTRASS,
    CurvePoint,
    Divisor,
    infinity_parameter,
    reduction_at_q,
)
from .padic import LogBranch, PadicNumber, log0, valuation_of_rational
from .rigidcoh import Subspace, omega_w


class IdeleCharacter:
    """Character data: the scalar t at p (l_p = t * log_branch), the branch,
    and finitely many explicit away values l_q(q)."""

    def __init__(self, p: int, precision: int, t, branch: LogBranch | None = None,
                 away_values: dict | None = None):
        self.p = p
        self.precision = precision
        if isinstance(t, PadicNumber):
            self.t = t
        else:
            self.t = PadicNumber.from_rational(Fraction(t), p, precision)
        self.branch = branch if branch is not None else LogBranch.iwasawa(p, precision)
        self.away_values = dict(away_values or {})

    @classmethod
    def canonical(cls, p: int, precision: int, t=1) -> "IdeleCharacter":
        """The normalized class character over Q scaled by t: Iwasawa branch,
        away values computed on demand."""
        return cls(p, precision, t)

    @property
    def support(self):
        return tuple(sorted(self.away_values))

    def away_value(self, q: int) -> PadicNumber:
        """l_q(q); defaults to the class-character value -t log0(q)."""
        if q in self.away_values:
            v = self.away_values[q]
            if isinstance(v, PadicNumber):
                return v
            return PadicNumber.from_rational(Fraction(v), self.p, self.precision)
        return -(self.t * log0(q, self.p, self.precision))

    def to_json(self) -> dict:
        return {
            "t": self.t.to_json(),
            "branch": self.branch.branch_constant.to_json(),
            "away_values": {str(q): v.to_json() if isinstance(v, PadicNumber) else str(v)
                            for q, v in self.away_values.items()},
        }


def validate_character(chi: IdeleCharacter) -> dict:
    """Check the idele class relations over Q.

    Ramifiedness requires t != 0; triviality on the principal idele p forces
    t * branch_constant = 0 (Iwasawa branch); each explicit away value must
    satisfy l_q(q) + t log0(q) = 0.  Returns a report when valid, raises
    UnramifiedAtP / NotClassCharacter otherwise."""
    if chi.t.is_zero():
        raise UnramifiedAtP("t = 0: the character does not ramify at p")
    violations = []
    tc = chi.t * chi.branch.branch_constant
    if not tc.is_zero():
        violations.append(
            f"t * branch_constant = {tc} != 0 (principal idele p relation)")
    for q in chi.support:
        if q == chi.p:
            violations.append(f"away value keyed at p = {q}")
            continue
        resid = chi.away_value(q) + chi.t * log0(q, chi.p, chi.precision)
        if not resid.is_zero():
            violations.append(
                f"l_{q}({q}) + t*log({q}) = {resid} != 0 (principal idele {q})")
    if violations:
        raise NotClassCharacter(violations)
    return {
        "valid": True,
        "t": str(chi.t),
        "branch_constant": str(chi.branch.branch_constant),
        "checked_away_primes": list(chi.support),
    }


# -- intersection theory at good primes away from p ---------------------------


def intersection_multiplicity(P: CurvePoint, Q: CurvePoint, q: int) -> int:
    """(P . Q)_q on the smooth model at a good odd prime q: 0 when the
    reductions differ, else the valuation of the difference of the local
    parameter values (t = x - center / y / x^g/y by disk type)."""
    if P == Q:
        raise OverlappingSupport("intersection multiplicity needs distinct points")
    if not P.curve.good_reduction(q):
        raise BadReductionAtQ(f"bad reduction at {q}")
    rP = reduction_at_q(P, q)
    rQ = reduction_at_q(Q, q)
    if rP != rQ:
        return 0
    kind = rP[0]
    if kind == INFINITY:
        diff = infinity_parameter(P, q) - infinity_parameter(Q, q)
    elif kind == WEIERSTRASS:
        diff = P.y - Q.y
    else:
        diff = P.x - Q.x
    if diff == 0:
        raise ArithmeticError(f"local parameter fails to separate {P}, {Q}")
    return valuation_of_rational(diff, q)


def intersection_pairing(y: Divisor, z: Divisor, q: int) -> int:
    """(y . z)_q = sum n_i m_j (P_i . Q_j)_q; supports must be disjoint."""
    _require_disjoint(y, z)
    total = 0
    for P, n in y.items:
        for Q, m in z.items:
            total += n * m * intersection_multiplicity(P, Q, q)
    return total


def local_height_away(y: Divisor, z: Divisor, q: int,
                      chi: IdeleCharacter) -> PadicNumber:
    """h_q(y, z) = l_q(q) * (y . z)_q at a good prime q != p."""
    if q == chi.p:
        raise ValueError("use local_height_at_p at the distinguished prime")
    _require_deg0(y, z)
    mult = intersection_pairing(y, z, q)
    return chi.away_value(q) * mult


def _require_disjoint(y: Divisor, z: Divisor):
    common = set(y.support) & set(z.support)
    if common:
        raise OverlappingSupport(f"supports meet at {sorted(map(repr, common))}")


def _require_deg0(y: Divisor, z: Divisor):
    if y.degree != 0 or z.degree != 0:
        raise OverlappingSupport(
            f"height inputs must have degree 0 (got {y.degree}, {z.degree})")


def _prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out


def contact_primes(y: Divisor, z: Divisor) -> set[int]:
    """Primes where the closures of the two supports meet, found by
    factoring coordinate differences (complete and exact over Q).

    Coordinate congruence detects the meeting even at primes where the
    curve itself reduces badly (q = 2 included); computing a multiplicity
    there is a separate, stricter question."""
    _require_disjoint(y, z)
    candidates: set[int] = set()
    for P, _ in y.items:
        for Q, _ in z.items:
            candidates |= _pair_candidates(P, Q)
    out = set()
    for q in sorted(candidates):
        for P, _ in y.items:
            for Q, _ in z.items:
                if reduction_at_q(P, q) == reduction_at_q(Q, q):
                    out.add(q)
                    break
            if q in out:
                break
    return out


def _pair_candidates(P: CurvePoint, Q: CurvePoint) -> set[int]:
    if P.is_infinity and Q.is_infinity:
        raise OverlappingSupport("both divisors contain infinity")
    if P.is_infinity or Q.is_infinity:
        aff = Q if P.is_infinity else P
        return _prime_factors(Fraction(aff.x).denominator)
    cands = set()
    dx = Fraction(P.x) - Fraction(Q.x)
    if dx != 0:
        cands |= _prime_factors(dx.numerator)
    else:
        dy = Fraction(P.y) - Fraction(Q.y)
        cands |= _prime_factors(dy.numerator)
    # meetings on the infinite fiber: both coordinates non-integral
    cands |= (_prime_factors(Fraction(P.x).denominator)
              & _prime_factors(Fraction(Q.x).denominator))
    return cands


# -- the local term at p and the global height --------------------------------


def check_supports_mod_p(y: Divisor, z: Divisor, p: int):
    """v1 constraint: affine supports must have disjoint x-coordinates mod p
    (this also keeps z away from the conjugate and Weierstrass-pole disks of
    omega_W(y)), and infinity belongs to at most one support."""
    _require_disjoint(y, z)

    def xbars(D: Divisor):
        out = set()
        inf = False
        for P, _ in D.items:
            if P.is_infinity:
                inf = True
                continue
            x = Fraction(P.x)
            if x != 0 and valuation_of_rational(x, p) < 0:
                raise SupportsCollideModP(
                    f"support point {P} is not {p}-integral")
            out.add(x.numerator * pow(x.denominator, -1, p) % p)
        return out, inf

    xy, infy = xbars(y)
    xz, infz = xbars(z)
    if infy and infz:
        raise SupportsCollideModP("both supports contain infinity")
    common = xy & xz
    if common:
        raise SupportsCollideModP(
            f"supports share x-coordinates mod {p}: {sorted(common)}")


def local_height_at_p(y: Divisor, z: Divisor, W: Subspace,
                      chi: IdeleCharacter, ctx: ColemanContext) -> PadicNumber:
    """h_p(y, z) = t * int_z omega_W(y)."""
    _require_deg0(y, z)
    check_supports_mod_p(y, z, ctx.p)
    form = omega_w(y, W, ctx.fd)
    integral = integral_over_divisor(form, z, ctx)
    return (chi.t * integral).add_bigoh(ctx.precision)


class HeightResult:
    """Local terms by place plus their sum and a precision report."""

    def __init__(self, local_terms: dict, p: int, precision: int):
        self.local_terms = dict(local_terms)
        self.p = p
        total = None
        for v in self.local_terms.values():
            total = v if total is None else total + v
        self.total = total if total is not None else PadicNumber.zero(p, precision)

    def precision_report(self) -> dict:
        report = {str(q): v.precision for q, v in self.local_terms.items()}
        report["total"] = self.total.precision
        return report

    def to_json(self) -> dict:
        return {
            "local_terms": {str(q): v.to_json()
                            for q, v in sorted(self.local_terms.items())},
            "total": self.total.to_json(),
            "precision_report": self.precision_report(),
        }


def global_height(y: Divisor, z: Divisor, W: Subspace, chi: IdeleCharacter,
                  ctx: ColemanContext) -> HeightResult:
    """Sum of local terms: the Coleman term at p plus intersection terms at
    every contact prime.  Contact at a bad-reduction prime is a hard error."""
    _require_deg0(y, z)
    check_supports_mod_p(y, z, ctx.p)
    curve = y.curve
    contacts = contact_primes(y, z)
    if ctx.p in contacts:
        raise SupportsCollideModP(f"supports meet at the distinguished prime {ctx.p}")
    bad = sorted(q for q in contacts if not curve.good_reduction(q))
    if bad:
        raise BadPrimeContact(
            f"supports meet at bad-reduction primes {bad}; regular models are out of scope")
    terms = {ctx.p: local_height_at_p(y, z, W, chi, ctx)}
    for q in sorted(contacts):
        terms[q] = local_height_away(y, z, q, chi)
    return HeightResult(terms, ctx.p, ctx.precision)
