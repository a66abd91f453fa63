"""Construction of semi-conformal maps phi = (x+iy) * u^(-q) * psi(u, z).

With u = (x^2+y^2)/2, such a map is semi-conformal iff psi solves the
first-order equation

    s * psi * psi_u + u * psi_u^2 + (1/2) * psi_z^2 = 0,

where s = +1 for q = 0 and s = -1 for q = 1 (no other exponent admits a
solution with psi(0,0) != 0).  Given the z-derivative values psi(0,0),
psi_z(0,0), psi_zz(0,0), ... at the origin, the remaining Taylor coefficients
are determined one total order at a time: within order n+1, the vanishing of
the residual coefficient of u^k z^(n-k) is linear in the single new unknown
a[k+1, n-k], with pivot s*(k+1)*a[0,0], once the sweep visits k = 0, 1, ..., n
in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import MODE_EXACT, MODE_FLOAT, CScalar, ModeMismatch, scalar_from_pair, scalar_to_pair
from .series import BiSeries


class DegenerateData(ValueError):
    """Boundary data with psi(0,0) = 0 or psi_z(0,0) = 0 is refused."""


class PivotVanished(ArithmeticError):
    """A floating-mode elimination pivot fell below the safety threshold."""


class OnAxis(ValueError):
    """The map with q = 1 has a genuine singularity along the z-axis."""


class OutOfDomain(ValueError):
    """Evaluation point left the configured convergence region."""


PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class Point3:
    """A point of 3-space with finite float coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {name}={v!r}")


@dataclass(frozen=True)
class BoundaryData:
    """Free Taylor data of a solution: q plus psi(0,0), psi_z(0,0), psi_zz(0,0), ...

    The entries are derivative values (not series coefficients); entry l is
    the l-th z-derivative of psi at the origin.  The first two entries must be
    nonzero; the construction refuses data outside that regime rather than
    guessing an extension.
    """

    q: int
    data: tuple[CScalar, ...]

    def __post_init__(self):
        if self.q not in (0, 1):
            raise ValueError(f"exponent q must be 0 or 1, got {self.q!r}")
        data = tuple(self.data)
        object.__setattr__(self, "data", data)
        if len(data) < 2:
            raise DegenerateData("need at least the value and first z-derivative")
        mode = data[0].mode
        for v in data:
            if not isinstance(v, CScalar):
                raise TypeError("boundary data entries must be CScalar")
            if v.mode != mode:
                raise ModeMismatch("boundary data mixes scalar modes")
        if data[0].is_zero():
            raise DegenerateData("psi(0,0) must be nonzero")
        if data[1].is_zero():
            raise DegenerateData("psi_z(0,0) must be nonzero")

    @property
    def mode(self) -> str:
        return self.data[0].mode


@dataclass(frozen=True)
class AnsatzMap:
    """phi = (x+iy) * u^(-q) * psi packaged with an optional evaluation region.

    The region (u_max, z_max) is a user input: the series only certifies the
    map where it converges, and no sharp joint (u, z) domain is available.
    """

    q: int
    psi: BiSeries
    u_max: float | None = None
    z_max: float | None = None


def solve(bd: BoundaryData, order: int) -> BiSeries:
    """Compute the unique series solution through the given boundary data.

    Returns psi with every coefficient of total degree <= order, such that the
    governing residual vanishes through total degree order-1 and row k=0
    equals the supplied data (entry l divided by l!).  Data shorter than
    order+1 is padded with zeros; extra entries are ignored.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    mode = bd.mode
    zero = CScalar.zero(mode)
    data = list(bd.data[: order + 1])
    while len(data) < order + 1:
        data.append(zero)

    a: dict[tuple[int, int], CScalar] = {}
    for l, v in enumerate(data):
        if not v.is_zero():
            a[(0, l)] = v / math.factorial(l)

    s = 1 if bd.q == 0 else -1
    a00 = a[(0, 0)]
    if mode == MODE_FLOAT and abs(a00) < PIVOT_FLOOR:
        raise PivotVanished(f"|psi(0,0)| = {abs(a00):.3e} below {PIVOT_FLOOR:.0e}")

    def term(i: int, j: int) -> CScalar | None:
        return a.get((i, j))

    for n in range(order):
        for k in range(n + 1):
            l = n - k
            # Residual coefficient of u^k z^l, with the unknown a[k+1,l]
            # still absent from the table (it contributes s*(k+1)*a00*a[k+1,l]
            # through the psi*psi_u convolution and nowhere else).
            acc = zero

            # psi * psi_u contribution
            s1 = zero
            for i in range(k + 1):
                for j in range(l + 1):
                    left = term(i, j)
                    if left is None:
                        continue
                    right = term(k - i + 1, l - j)
                    if right is None:
                        continue
                    s1 = s1 + (k - i + 1) * (left * right)
            acc = acc + s * s1

            # u * psi_u^2 contribution
            for i in range(k):
                for j in range(l + 1):
                    left = term(i + 1, j)
                    if left is None:
                        continue
                    right = term(k - i, l - j)
                    if right is None:
                        continue
                    acc = acc + ((i + 1) * (k - i)) * (left * right)

            # (1/2) * psi_z^2 contribution
            s3 = zero
            for i in range(k + 1):
                for j in range(l + 1):
                    left = term(i, j + 1)
                    if left is None:
                        continue
                    right = term(k - i, l - j + 1)
                    if right is None:
                        continue
                    s3 = s3 + ((j + 1) * (l - j + 1)) * (left * right)
            acc = acc + s3 / 2

            pivot = (s * (k + 1)) * a00
            if mode == MODE_FLOAT and abs(pivot) < PIVOT_FLOOR:
                raise PivotVanished(f"pivot underflow at (k,l)=({k},{l})")
            value = -(acc / pivot)
            if not value.is_zero():
                a[(k + 1, l)] = value

    return BiSeries(order, mode, a)


def governing_residual(psi: BiSeries, q: int) -> BiSeries:
    """s*psi*psi_u + u*psi_u^2 + (1/2)*psi_z^2, truncated to total degree trunc-1."""
    if q not in (0, 1):
        raise ValueError(f"exponent q must be 0 or 1, got {q!r}")
    if psi.trunc < 2:
        raise ValueError("residual needs truncation bound >= 2")
    half = Fraction(1, 2) if psi.mode == MODE_EXACT else 0.5
    pu = psi.diff("u")
    pz = psi.diff("z")
    first = psi * pu
    if q == 1:
        first = -first
    return first + (pu * pu).shift(1, 0, psi.trunc - 1) + (pz * pz).scaled(half)


# -- pointwise evaluation ----------------------------------------------------


def _cylinder_coords(p: Point3) -> tuple[float, float]:
    return 0.5 * (p.x * p.x + p.y * p.y), p.z


def _check_domain(amap: AnsatzMap, u: float, z: float):
    if amap.u_max is not None and u > amap.u_max:
        raise OutOfDomain(f"u = {u} beyond configured bound {amap.u_max}")
    if amap.z_max is not None and abs(z) > amap.z_max:
        raise OutOfDomain(f"|z| = {abs(z)} beyond configured bound {amap.z_max}")


def eval_phi(amap: AnsatzMap, p: Point3) -> CScalar:
    """Evaluate phi at a point; floating result."""
    u, z = _cylinder_coords(p)
    if amap.q == 1 and u == 0.0:
        raise OnAxis("phi is singular on the z-axis for q = 1")
    w = complex(p.x, p.y)
    psi_val = amap.psi.eval_complex(u, z)
    phi = w * psi_val if amap.q == 0 else w * psi_val / u
    return CScalar.from_complex(phi)


@dataclass(frozen=True)
class SemiConformalityResidual:
    """|phi_x^2 + phi_y^2 + phi_z^2| from the separated identity (analytic)
    and from central finite differences of phi; the two must agree to O(h^2)."""

    analytic: float
    finite_difference: float

    @property
    def gap(self) -> float:
        return abs(self.analytic - self.finite_difference)


def semiconformality_residual(
    amap: AnsatzMap, p: Point3, h: float = 1e-5
) -> SemiConformalityResidual:
    """Semi-conformality defect of the (truncated) map at a point.

    Analytically, phi_x^2 + phi_y^2 + phi_z^2 equals
    2*(x+iy)^2 * u^(-2q-1) * {q(q-1)psi^2 + u(1-2q)psi*psi_u + u^2 psi_u^2
    + (1/2) u psi_z^2}; for q in {0,1} the bracket is u times the governing
    expression, which cancels one power of u and keeps q = 0 regular on the
    axis.  The finite-difference value differentiates eval_phi directly.
    """
    u, z = _cylinder_coords(p)
    if amap.q == 1 and u == 0.0:
        raise OnAxis("phi is singular on the z-axis for q = 1")
    _check_domain(amap, u, z)

    psi = amap.psi
    psi_u = psi.diff("u")
    psi_z = psi.diff("z")
    pv = psi.eval_complex(u, z)
    puv = psi_u.eval_complex(u, z)
    pzv = psi_z.eval_complex(u, z)
    sign = 1.0 if amap.q == 0 else -1.0
    governing = sign * pv * puv + u * puv * puv + 0.5 * pzv * pzv
    w = complex(p.x, p.y)
    scale = w * w if amap.q == 0 else w * w / (u * u)
    analytic = abs(2.0 * scale * governing)

    def phi_at(x: float, y: float, zz: float) -> complex:
        return eval_phi(amap, Point3(x, y, zz)).to_complex()

    dx = (phi_at(p.x + h, p.y, p.z) - phi_at(p.x - h, p.y, p.z)) / (2 * h)
    dy = (phi_at(p.x, p.y + h, p.z) - phi_at(p.x, p.y - h, p.z)) / (2 * h)
    dz = (phi_at(p.x, p.y, p.z + h) - phi_at(p.x, p.y, p.z - h)) / (2 * h)
    fd = abs(dx * dx + dy * dy + dz * dz)
    return SemiConformalityResidual(analytic=analytic, finite_difference=fd)


def harmonicity_residual(amap: AnsatzMap, p: Point3) -> float:
    """|q(q-1)psi - 2(q-1)u psi_u + u^2 psi_uu + (1/2) u psi_zz| at the point.

    phi is harmonic exactly where this vanishes; semi-conformality alone does
    not imply it.
    """
    u, z = _cylinder_coords(p)
    if amap.q == 1 and u == 0.0:
        raise OnAxis("phi is singular on the z-axis for q = 1")
    _check_domain(amap, u, z)
    q = amap.q
    psi = amap.psi
    psi_u = psi.diff("u")
    pv = psi.eval_complex(u, z)
    puv = psi_u.eval_complex(u, z)
    puuv = psi_u.diff("u").eval_complex(u, z)
    pzzv = psi.diff("z").diff("z").eval_complex(u, z)
    value = (
        q * (q - 1) * pv
        - 2 * (q - 1) * u * puv
        + u * u * puuv
        + 0.5 * u * pzzv
    )
    return abs(value)


# -- file formats --------------------------------------------------------------


def boundary_data_to_dict(bd: BoundaryData, order: int) -> dict:
    return {
        "q": bd.q,
        "order": order,
        "data": [scalar_to_pair(v) for v in bd.data],
    }


def boundary_data_from_dict(d: dict, mode: str) -> tuple[BoundaryData, int]:
    try:
        q = int(d["q"])
        order = int(d["order"])
        raw = d["data"]
        data = tuple(scalar_from_pair(re_s, im_s, mode) for re_s, im_s in raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed boundary data document: {exc}") from exc
    # BoundaryData construction is outside the net above so that
    # DegenerateData keeps its identity (domain error, not a parse error).
    return BoundaryData(q=q, data=data), order
