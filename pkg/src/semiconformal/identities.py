"""Exact verification of the recurrences and binomial identities behind the
closed-form coefficient tables.

Every check recomputes both sides in rational arithmetic: the brute-force sum
is always the oracle and the closed expression is the claim under test.
Checks run in exact mode only; a floating series is rejected outright, since a
tolerance would make these combinatorial statements meaningless.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .closed_forms import u_factor_q0, u_factor_q1
from .scalars import MODE_EXACT, CScalar, ModeMismatch
from .series import BiSeries


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check over a stated index range."""

    name: str
    range_desc: str
    status: str
    first_failure: dict | None = field(default=None)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "range": self.range_desc,
            "status": self.status,
            "first_failure": self.first_failure,
        }


def _report(name: str, range_desc: str, failures) -> IdentityReport:
    for index, lhs, rhs in failures:
        return IdentityReport(
            name=name,
            range_desc=range_desc,
            status="fail",
            first_failure={"index": index, "lhs": str(lhs), "rhs": str(rhs)},
        )
    return IdentityReport(name=name, range_desc=range_desc, status="pass")


# -- the fundamental coefficient identity of the governing equations ------------


def check_series_coefficient_identity(
    psi: BiSeries, q: int, kmax: int, lmax: int
) -> IdentityReport:
    """For a solution psi and its sign s = +1 (q=0) / -1 (q=1), the derivative
    values psi_{k,l} = k! l! a[k,l] satisfy, for every k >= 1, l >= 0,

        sum_{j<=l} sum_{i<=k} (k-i+s) C(l,j) C(k,i) psi_{k-i,l-j} psi_{i+1,j}
      + sum_{j<=l} sum_{i<=k-1}       C(l,j) C(k-1,i) psi_{k-i-1,l-j+1} psi_{i+1,j+1}
      = 0.

    Checked exactly on all 1 <= k <= kmax, 0 <= l <= lmax with k+l+1 <= trunc.
    """
    if psi.mode != MODE_EXACT:
        raise ModeMismatch("coefficient identity checks require exact mode")
    if q not in (0, 1):
        raise ValueError(f"exponent q must be 0 or 1, got {q!r}")
    s = 1 if q == 0 else -1
    zero = CScalar.zero(MODE_EXACT)

    def dv(k: int, l: int) -> CScalar:
        return psi.derivative_value(k, l)

    def failures():
        for k in range(1, kmax + 1):
            for l in range(0, lmax + 1):
                if k + l + 1 > psi.trunc:
                    continue
                total = zero
                for j in range(l + 1):
                    cl = comb(l, j)
                    for i in range(k + 1):
                        total = total + ((k - i + s) * cl * comb(k, i)) * (
                            dv(k - i, l - j) * dv(i + 1, j)
                        )
                    for i in range(k):
                        total = total + (cl * comb(k - 1, i)) * (
                            dv(k - i - 1, l - j + 1) * dv(i + 1, j + 1)
                        )
                if not total.is_zero():
                    yield (k, l), total, zero

    return _report(
        "series_coefficient_identity",
        f"1<=k<={kmax}, 0<=l<={lmax}, k+l+1<={psi.trunc}, q={q}",
        failures(),
    )


def check_mixed_leibniz(k: int, l: int, f: BiSeries, g: BiSeries) -> IdentityReport:
    """Mixed partial of a product at the origin versus the double-binomial sum

        d^{k+l}(fg)/du^k dz^l |_0 = sum_{i<=k} sum_{j<=l} C(k,i) C(l,j)
                                    f_{k-i,l-j} g_{i,j}.
    """
    if f.mode != MODE_EXACT or g.mode != MODE_EXACT:
        raise ModeMismatch("Leibniz check requires exact mode")
    product = f * g
    if k + l > product.trunc:
        raise ValueError("requested order exceeds the product truncation")
    direct = product.derivative_value(k, l)
    total = CScalar.zero(MODE_EXACT)
    for i in range(k + 1):
        for j in range(l + 1):
            total = total + (comb(k, i) * comb(l, j)) * (
                f.derivative_value(k - i, l - j) * g.derivative_value(i, j)
            )
    failures = [] if direct == total else [((k, l), direct, total)]
    return _report("mixed_partial_product_rule", f"(k,l)=({k},{l})", failures)


# -- recurrences for the one-parameter u-profiles -------------------------------


def _rhs_profile_recurrence(q: int, f, k: int) -> Fraction:
    total = Fraction(0)
    for m in range(k + 1):
        quad = Fraction(2 * m - 1, 2) * (2 * k - 2 * m - 1) * f(m) * f(k - m)
        if q == 0:
            total += (m + 2) * (k - m) * f(m + 1) * f(k - m) + quad
        else:
            total -= m * (k - m) * f(m + 1) * f(k - m) + quad
    return total


def check_profile_recurrence(q: int, kmax: int) -> IdentityReport:
    """The u-profile factors satisfy their defining quadratic recurrence:

        q=0:  (k+1) f(k+1) = sum_{m=0}^k [(m+2)(k-m) f(m+1)f(k-m)
                                          + (2m-1)(2k-2m-1)/2 f(m)f(k-m)]
        q=1:  (k+1) f(k+1) = -sum_{m=0}^k [m(k-m) f(m+1)f(k-m)
                                          + (2m-1)(2k-2m-1)/2 f(m)f(k-m)]

    with f(0) = -1, checked exactly for 1 <= k <= kmax.
    """
    if q not in (0, 1):
        raise ValueError(f"exponent q must be 0 or 1, got {q!r}")
    f = u_factor_q0 if q == 0 else u_factor_q1

    def failures():
        for k in range(1, kmax + 1):
            lhs = (k + 1) * f(k + 1)
            rhs = _rhs_profile_recurrence(q, f, k)
            if lhs != rhs:
                yield k, lhs, rhs

    return _report(f"u_profile_recurrence_q{q}", f"1<=k<={kmax}", failures())


def check_profile_recurrence_reduced(kmax: int) -> IdentityReport:
    """Reduced form of the q=0 recurrence with the f(0) terms eliminated:

        (k+1) f(k+1) - (3k-1) f(k)
            = (1/6) sum_{m=1}^{k-1} (m+2)(8(k-m)-1) f(m+1) f(k-m),

    checked exactly for 2 <= k <= kmax.
    """
    f = u_factor_q0

    def failures():
        for k in range(2, kmax + 1):
            lhs = (k + 1) * f(k + 1) - (3 * k - 1) * f(k)
            rhs = Fraction(0)
            for m in range(1, k):
                rhs += (m + 2) * (8 * (k - m) - 1) * f(m + 1) * f(k - m)
            rhs /= 6
            if lhs != rhs:
                yield k, lhs, rhs

    return _report("u_profile_recurrence_reduced", f"2<=k<={kmax}", failures())


# -- central-binomial convolution identities -------------------------------------


def check_binomial_convolution(which: str, kmax: int) -> IdentityReport:
    """Closed forms for two weighted self-convolutions of C(2m, m).

    first:
        sum_{m=1}^{k-1} C(2m,m) C(2k-2m-2,k-m-1) / ((m+1)(k-m+1))
          = C(2k+2,k+1)/(12(k+2)) + C(2k,k)/(2(k+2)) - C(2k-2,k-1)/(k+1)

    second:
        sum_{m=1}^{k-1} C(2m,m) C(2k-2m-2,k-m-1) / ((m+1)(k-m)(k-m+1))
          = (1/6) [ -(k-1)/((k+2)(2k+1)) C(2k+2,k+1)
                    + 6(k-1)/((k+1)(2k-1)) C(2k,k) ]

    both checked exactly for 2 <= k <= kmax.
    """
    if which not in ("first", "second"):
        raise ValueError(f"unknown convolution identity {which!r}")

    def failures():
        for k in range(2, kmax + 1):
            lhs = Fraction(0)
            for m in range(1, k):
                w = Fraction(comb(2 * m, m) * comb(2 * k - 2 * m - 2, k - m - 1))
                if which == "first":
                    lhs += w / ((m + 1) * (k - m + 1))
                else:
                    lhs += w / ((m + 1) * (k - m) * (k - m + 1))
            if which == "first":
                rhs = (
                    Fraction(comb(2 * k + 2, k + 1), 12 * (k + 2))
                    + Fraction(comb(2 * k, k), 2 * (k + 2))
                    - Fraction(comb(2 * k - 2, k - 1), k + 1)
                )
            else:
                rhs = (
                    -Fraction((k - 1) * comb(2 * k + 2, k + 1), (k + 2) * (2 * k + 1))
                    + Fraction(6 * (k - 1) * comb(2 * k, k), (k + 1) * (2 * k - 1))
                ) / 6
            if lhs != rhs:
                yield k, lhs, rhs

    return _report(
        f"binomial_convolution_{which}", f"2<=k<={kmax}", failures()
    )


def check_odd_binomial_sum(kmax: int) -> IdentityReport:
    """The factorial sum behind the two-parameter coefficient-sum claim:

        S_k = sum_{j=1}^{k-1} (2j-1)!(2k-2j-1)! / ((j-1)!^2 (k-j-1)!^2)
            = 2^(2k-5) k (k-1),

    checked exactly for 2 <= k <= kmax.
    """

    def failures():
        for k in range(2, kmax + 1):
            lhs = sum(
                Fraction(
                    factorial(2 * j - 1) * factorial(2 * k - 2 * j - 1),
                    factorial(j - 1) ** 2 * factorial(k - j - 1) ** 2,
                )
                for j in range(1, k)
            )
            rhs = Fraction(2) ** (2 * k - 5) * k * (k - 1)
            if lhs != rhs:
                yield k, lhs, rhs

    return _report("odd_central_binomial_sum", f"2<=k<={kmax}", failures())


def check_q_coefficient_sum(kmax: int) -> IdentityReport:
    """The coefficients of the two-parameter u-row polynomial Q_k sum to
    2^(k-3) k!, checked exactly for 2 <= k <= kmax by brute summation."""

    def failures():
        for k in range(2, kmax + 1):
            pref = Fraction(factorial(k - 2), 2 ** (k - 2))
            lhs = sum(
                pref
                * Fraction(
                    factorial(2 * j - 1) * factorial(2 * k - 2 * j - 1),
                    factorial(j - 1) ** 2 * factorial(k - j - 1) ** 2,
                )
                for j in range(1, k)
            )
            rhs = Fraction(2) ** (k - 3) * factorial(k)
            if lhs != rhs:
                yield k, lhs, rhs

    return _report("q_row_coefficient_sum", f"2<=k<={kmax}", failures())


# -- generalized binomial coefficients --------------------------------------------


def newton_coeff(r, n: int) -> Fraction:
    """Coefficient of t^n in (1-t)^(-r) for rational r: the rising factorial
    r(r+1)...(r+n-1)/n!, i.e. the generalized binomial C(n+r-1, r-1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    r = Fraction(r)
    total = Fraction(1)
    for i in range(n):
        total *= r + i
    return total / factorial(n)


# -- aggregated suite ---------------------------------------------------------------


def default_suite(
    kmax: int | None = None,
    psi_exact: BiSeries | None = None,
    psi_q: int = 1,
) -> list[IdentityReport]:
    """The standard battery of exact checks, optionally including the
    coefficient identity on a supplied exact solution."""
    k_rec = kmax or 30
    k_conv = kmax or 40
    k_sum = kmax or 50
    k_q = min(kmax or 20, 20)
    reports = [
        check_profile_recurrence(0, k_rec),
        check_profile_recurrence(1, k_rec),
        check_profile_recurrence_reduced(k_rec),
        check_binomial_convolution("first", k_conv),
        check_binomial_convolution("second", k_conv),
        check_odd_binomial_sum(k_sum),
        check_q_coefficient_sum(k_q),
    ]
    if psi_exact is not None:
        reports.append(
            check_series_coefficient_identity(
                psi_exact, psi_q, psi_exact.trunc, psi_exact.trunc
            )
        )
    return reports
