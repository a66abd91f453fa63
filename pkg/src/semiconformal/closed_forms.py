"""Exact coefficient formulas and closed-form evaluators for the explicit
solution families.

These are the oracle layer: every table here comes from a closed expression,
independent of the order-by-order solver, so the two can be tested against
each other.  All k,l-indexed formulas use exact integer factorials and
binomials, then coerce to the requested scalar mode; floating factorials are
never used.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .scalars import MODE_EXACT, MODE_FLOAT, CScalar, ModeMismatch
from .series import BiSeries
from .solver import OnAxis, Point3


class BranchCut(ArithmeticError):
    """A radicand met the negative real axis where a single branch was required."""


# -- u-direction profile factors of the one-parameter families -----------------


def u_factor_q0(k: int) -> Fraction:
    """Profile factor f(k) of the q=0 family: 3^(k-1)(2k-2)! / (2^(k-1)(k+1)!(k-1)!).

    f(0) = -1 by convention, so that psi(u,0) = -sum f(k) c^(2k) u^k.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Fraction(-1)
    return Fraction(
        3 ** (k - 1) * factorial(2 * k - 2),
        2 ** (k - 1) * factorial(k + 1) * factorial(k - 1),
    )


def u_factor_q1(k: int) -> Fraction:
    """Profile factor of the q=1 family: (-1)^k (2k-2)! / (2^k k!(k-1)!), f(0) = -1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Fraction(-1)
    return Fraction(
        (-1) ** k * factorial(2 * k - 2), 2**k * factorial(k) * factorial(k - 1)
    )


def _mode_factor(r: Fraction, mode: str):
    return r if mode == MODE_EXACT else float(r)


def _one_param_coeff(profile, c: CScalar, k: int, l: int) -> CScalar:
    if k < 0 or l < 0:
        raise ValueError("indices must be non-negative")
    if k == 0:
        if l == 0:
            return CScalar.one(c.mode)
        if l == 1:
            return c
        return CScalar.zero(c.mode)
    r = Fraction((-1) ** (l + 1) * comb(l + 2 * k - 2, l)) * profile(k)
    return (c ** (l + 2 * k)) * _mode_factor(r, c.mode)


def coeff_q0(c: CScalar, k: int, l: int) -> CScalar:
    """Series coefficient a[k,l] of the q=0 solution with data (1, c, 0, 0, ...)."""
    return _one_param_coeff(u_factor_q0, c, k, l)


def coeff_q1(c: CScalar, k: int, l: int) -> CScalar:
    """Series coefficient a[k,l] of the q=1 solution with data (1, c, 0, 0, ...)."""
    return _one_param_coeff(u_factor_q1, c, k, l)


def one_param_series(q: int, c: CScalar, trunc: int) -> BiSeries:
    """The full coefficient triangle of the one-parameter family as a BiSeries."""
    if q not in (0, 1):
        raise ValueError(f"exponent q must be 0 or 1, got {q!r}")
    coeff = coeff_q0 if q == 0 else coeff_q1
    table = {}
    for k in range(trunc + 1):
        for l in range(trunc + 1 - k):
            v = coeff(c, k, l)
            if not v.is_zero():
                table[(k, l)] = v
    return BiSeries(trunc, c.mode, table)


# -- closed-form evaluators (double-precision complex, principal branches) ------


# closed_q0 switches to its series below |6 c^2 u| / |1+cz|^2 = SEAM_THRESHOLD.
# The closed branch loses ~eps/u to cancellation near the removable
# singularity, so the seam sits where both branches agree to 1e-10.
SEAM_THRESHOLD = 1e-4


def _as_complex(x) -> complex:
    if isinstance(x, CScalar):
        if x.mode != MODE_FLOAT:
            raise ModeMismatch(
                "closed-form evaluators are numeric; convert exact scalars first"
            )
        return x.to_complex()
    return complex(x)


def _segment_meets_cut(z0: complex, z1: complex) -> bool:
    """Does the straight segment [z0, z1] meet the branch cut (-inf, 0]?"""
    i0, i1 = z0.imag, z1.imag
    if i0 == 0.0 and i1 == 0.0:
        return min(z0.real, z1.real) <= 0.0
    if i0 == 0.0:
        return z0.real <= 0.0
    if i1 == 0.0:
        return z1.real <= 0.0
    if (i0 > 0) == (i1 > 0):
        return False
    t = i0 / (i0 - i1)
    return z0.real + t * (z1.real - z0.real) <= 0.0


def closed_q0(c, u, z, check_branch: bool = False) -> complex:
    """Closed form of the q=0 family:

        (2/3)(1+cz) - ((1+cz)^2 - 6c^2 u)^(3/2) / (27 c^2 u) + (1+cz)^3 / (27 c^2 u).

    The u = 0 singularity is removable: below the seam threshold the series in
    t = 3c^2 u / (2(1+cz)^2) is summed instead, so the two branches agree to
    1e-10 at the seam.  With check_branch, raises BranchCut when the radicand
    path from u=0 (it is affine in u) meets the negative real axis.
    """
    c, u, z = _as_complex(c), _as_complex(u), _as_complex(z)
    w = 1 + c * z
    six = 6 * c * c * u
    if abs(six) < SEAM_THRESHOLD * abs(w) ** 2 or w == 0:
        if u == 0 or w == 0:
            return w
        t = 3 * c * c * u / (2 * w * w)
        total = 0j
        power = 1 + 0j
        for k in range(1, 15):
            power *= t
            total += power * comb(2 * k - 2, k - 1) / (k * (k + 1))
        return w * (1 - (2.0 / 3.0) * total)
    radicand = w * w - six
    if check_branch and _segment_meets_cut(w * w, radicand):
        raise BranchCut("radicand path crossed the negative real axis")
    denom = 27 * c * c * u
    return (2.0 / 3.0) * w - radicand**1.5 / denom + w**3 / denom


def closed_q1(c, u, z, check_branch: bool = False) -> complex:
    """Closed form of the q=1 family, normalized to twice the unit-value series:

        1 + cz + sqrt(2 c^2 u + (1+cz)^2)  =  2 * sum a[k,l] u^k z^l.
    """
    c, u, z = _as_complex(c), _as_complex(u), _as_complex(z)
    w = 1 + c * z
    radicand = 2 * c * c * u + w * w
    if check_branch and _segment_meets_cut(w * w, radicand):
        raise BranchCut("radicand path crossed the negative real axis")
    return w + cmath.sqrt(radicand)


def product_form_psi(b, c, u, z, check_branch: bool = False) -> complex:
    """Product-form solution b * e^(cz) * e^s / (1 + s) with s = sqrt(1 - 2 c^2 u).

    Satisfies the q=0 governing equation (verified numerically in the test
    suite).  The radicand must stay off the branch cut of the principal root.
    """
    b, c, u, z = _as_complex(b), _as_complex(c), _as_complex(u), _as_complex(z)
    radicand = 1 - 2 * c * c * u
    if radicand.imag == 0.0 and radicand.real < 0.0:
        raise BranchCut("1 - 2c^2u lies on the negative real axis")
    if check_branch and _segment_meets_cut(1 + 0j, radicand):
        raise BranchCut("radicand path crossed the negative real axis")
    s = cmath.sqrt(radicand)
    return b * cmath.exp(c * z) * cmath.exp(s) / (1 + s)


# -- the Hopf solution -----------------------------------------------------------


def hopf_psi(u: CScalar, z: CScalar) -> CScalar:
    """psi = 1 - 2u - z^2 - 2iz, the polynomial solving the q=1 equation whose
    map has the Villarceau circles as fibres (two-parameter case alpha = beta = -i)."""
    if u.mode != z.mode:
        raise ModeMismatch("u and z must share a mode")
    one = CScalar.one(u.mode)
    two_i = CScalar(0, 2, u.mode)
    return one - 2 * u - z * z - two_i * z


def hopf_series(trunc: int = 6, mode: str = MODE_EXACT) -> BiSeries:
    if trunc < 2:
        raise ValueError("the Hopf polynomial has total degree 2")
    return BiSeries(
        trunc,
        mode,
        {
            (0, 0): CScalar.one(mode),
            (0, 1): CScalar(0, -2, mode),
            (0, 2): CScalar(-1, 0, mode),
            (1, 0): CScalar(-2, 0, mode),
        },
    )


HOPF_BOUNDARY = (CScalar.exact(1), CScalar.exact(0, -2), CScalar.exact(-2))


# -- two-parameter family (data 1, alpha+beta, 2*alpha*beta) ----------------------


def two_param_psi1(alpha: CScalar, beta: CScalar, l: int) -> CScalar:
    """Derivative value psi_{1,l} = ((-1)^l / 2) l! (a-b)(a^(l+1) - b^(l+1)), l >= 1."""
    if l < 1:
        raise ValueError("row-1 formula requires l >= 1")
    r = Fraction((-1) ** l * factorial(l), 2)
    return (alpha - beta) * (alpha ** (l + 1) - beta ** (l + 1)) * _mode_factor(
        r, alpha.mode
    )


def two_param_psi2(alpha: CScalar, beta: CScalar, l: int) -> CScalar:
    """Derivative value psi_{2,l} for l >= 0:

        ((-1)^(l+1)/2) l! (a-b) [ (l+1)(l+2)/2 a^(l+3)
            + sum_{r=0}^{l+1} (l+1-2r) a^(l+2-r) b^(r+1)
            - (l+1)(l+2)/2 b^(l+3) ].

    The interior coefficients fall in the arithmetic progression l+1-2r; the
    pattern reproduces every explicitly expanded case and is cross-checked
    against the generic solver in the tests.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    mode = alpha.mode
    end = Fraction((l + 1) * (l + 2), 2)
    bracket = (alpha ** (l + 3) - beta ** (l + 3)) * _mode_factor(end, mode)
    for r in range(l + 2):
        bracket = bracket + (l + 1 - 2 * r) * (alpha ** (l + 2 - r)) * (
            beta ** (r + 1)
        )
    pref = Fraction((-1) ** (l + 1) * factorial(l), 2)
    return (alpha - beta) * bracket * _mode_factor(pref, mode)


def two_param_Q(alpha: CScalar, beta: CScalar, k: int) -> CScalar:
    """The symmetric polynomial in the u-row of the two-parameter family:

        Q_k = (k-2)!/2^(k-2) * sum_{j=1}^{k-1}
              (2j-1)!(2k-2j-1)! / ((j-1)!^2 (k-j-1)!^2) a^(2k-2j-2) b^(2j-2),

    homogeneous of degree 2k-4 with coefficient sum 2^(k-3) k!.
    """
    if k < 2:
        raise ValueError("Q is defined for k >= 2")
    mode = alpha.mode
    pref = Fraction(factorial(k - 2), 2 ** (k - 2))
    total = CScalar.zero(mode)
    for j in range(1, k):
        w = Fraction(
            factorial(2 * j - 1) * factorial(2 * k - 2 * j - 1),
            factorial(j - 1) ** 2 * factorial(k - j - 1) ** 2,
        )
        total = total + (alpha ** (2 * k - 2 * j - 2)) * (
            beta ** (2 * j - 2)
        ) * _mode_factor(w, mode)
    return total * _mode_factor(pref, mode)


def two_param_a_k0(alpha: CScalar, beta: CScalar, k: int) -> CScalar:
    """u-row series coefficient a[k,0] of the two-parameter family.

    a[0,0] = 1, a[1,0] = (alpha+beta)^2 / 2, and for k >= 2
    a[k,0] = ((-1)^(k+1) / (2 k!)) (a-b)^2 (a+b)^2 Q_k.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    mode = alpha.mode
    if k == 0:
        return CScalar.one(mode)
    if k == 1:
        return (alpha + beta) ** 2 * _mode_factor(Fraction(1, 2), mode)
    pref = Fraction((-1) ** (k + 1), 2 * factorial(k))
    return (
        (alpha - beta) ** 2
        * (alpha + beta) ** 2
        * two_param_Q(alpha, beta, k)
        * _mode_factor(pref, mode)
    )


def two_param_boundary(alpha: CScalar, beta: CScalar) -> tuple[CScalar, ...]:
    """Boundary data (1, alpha+beta, 2*alpha*beta) of the two-parameter family."""
    if (alpha + beta).is_zero():
        raise ValueError("two-parameter family needs alpha + beta != 0")
    one = CScalar.one(alpha.mode)
    return (one, alpha + beta, 2 * (alpha * beta))


def equal_param_phi(alpha, p) -> complex:
    """The alpha = beta family in closed form:

        phi(x,y,z) = (alpha^2 (x^2+y^2) + (1 + alpha z)^2) / (x - iy),

    equal to half of eval_phi on the corresponding solved map (the closed q=1
    forms carry a factor-2 normalization).  A continuous deformation of the
    Hopf map; for real alpha the fibres form a bouquet of circles through
    (0, 0, -1/alpha).
    """
    alpha = _as_complex(alpha)
    if isinstance(p, Point3):
        x, y, z = p.x, p.y, p.z
    else:
        x, y, z = p
    if x * x + y * y == 0.0:
        raise OnAxis("phi is singular on the z-axis")
    return (alpha * alpha * (x * x + y * y) + (1 + alpha * z) ** 2) / complex(x, -y)


# -- family descriptors -------------------------------------------------------


@dataclass(frozen=True)
class OneParamFamily:
    q: int
    c: complex

    def __post_init__(self):
        if self.q not in (0, 1):
            raise ValueError(f"exponent q must be 0 or 1, got {self.q!r}")
        if self.c == 0:
            raise ValueError("one-parameter family needs c != 0")


@dataclass(frozen=True)
class TwoParamFamily:
    alpha: complex
    beta: complex

    def __post_init__(self):
        if self.alpha + self.beta == 0:
            raise ValueError("two-parameter family needs alpha + beta != 0")


@dataclass(frozen=True)
class HopfFamily:
    pass


@dataclass(frozen=True)
class ProductFamily:
    b: complex
    c: complex

    def __post_init__(self):
        if self.b == 0 or self.c == 0:
            raise ValueError("product family needs b != 0 and c != 0")


def _pair_to_complex(v) -> complex:
    re, im = v
    return complex(float(re), float(im))


def parse_family(d: dict):
    """Build a family object from its JSON descriptor."""
    try:
        name = d["family"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed family descriptor: {exc}") from exc
    if name == "q0":
        return OneParamFamily(0, _pair_to_complex(d["c"]))
    if name == "q1":
        return OneParamFamily(1, _pair_to_complex(d["c"]))
    if name == "two_param":
        return TwoParamFamily(
            _pair_to_complex(d["alpha"]), _pair_to_complex(d["beta"])
        )
    if name == "hopf":
        return HopfFamily()
    if name == "product":
        return ProductFamily(_pair_to_complex(d["b"]), _pair_to_complex(d["c"]))
    raise ValueError(f"unknown family {name!r}")


def family_to_dict(fam) -> dict:
    if isinstance(fam, OneParamFamily):
        return {"family": f"q{fam.q}", "c": [fam.c.real, fam.c.imag]}
    if isinstance(fam, TwoParamFamily):
        return {
            "family": "two_param",
            "alpha": [fam.alpha.real, fam.alpha.imag],
            "beta": [fam.beta.real, fam.beta.imag],
        }
    if isinstance(fam, HopfFamily):
        return {"family": "hopf"}
    if isinstance(fam, ProductFamily):
        return {
            "family": "product",
            "b": [fam.b.real, fam.b.imag],
            "c": [fam.c.real, fam.c.imag],
        }
    raise TypeError(f"not a family object: {fam!r}")
