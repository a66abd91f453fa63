"""Fibre geometry of the equal-parameter family.

For alpha = beta the map phi = (alpha^2 (x^2+y^2) + (1+alpha z)^2)/(x-iy) has
level sets cut out by the complex quadric

    alpha^2 (x^2+y^2+z^2) + 2 alpha z - 2 eta (x - iy) + 1 = 0,

one fibre per eta.  Writing xi = (-eta, i*eta, alpha)/alpha^2, the real and
imaginary parts of the quadric say the fibre is the circle centred at -Re(xi)
in the plane with normal Im(xi).  No closed radius is assumed here: a point on
the fibre is located numerically and its distance to the centre is validated
against both real equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .closed_forms import equal_param_phi
from .scalars import CScalar
from .solver import OnAxis, Point3

Vec3 = tuple[float, float, float]


class Degenerate(ValueError):
    """Im(xi) vanished (real alpha with eta = 0): the fibre is not a circle."""


class NoRealPoint(ArithmeticError):
    """Root-finding found no real point on the fibre."""


def _dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a: Vec3, b: Vec3) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _norm(a: Vec3) -> float:
    return math.sqrt(_dot(a, a))


def _axpy(p: Vec3, s: float, d: Vec3) -> Vec3:
    return (p[0] + s * d[0], p[1] + s * d[1], p[2] + s * d[2])


def _plane_frame(normal: Vec3) -> tuple[Vec3, Vec3]:
    """A deterministic orthonormal pair spanning the plane orthogonal to normal."""
    axes = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    seed = min(axes, key=lambda a: abs(_dot(a, normal)))
    e1 = _axpy(seed, -_dot(seed, normal), normal)
    n1 = _norm(e1)
    e1 = (e1[0] / n1, e1[1] / n1, e1[2] / n1)
    return e1, _cross(normal, e1)


@dataclass(frozen=True)
class FibreCircle:
    """One fibre of the equal-parameter family: a circle in 3-space."""

    center: Vec3
    normal: Vec3
    radius: float
    alpha: complex
    eta: complex


def _to_complex(v) -> complex:
    if isinstance(v, CScalar):
        return v.to_complex()
    return complex(v)


def fibre_equation(alpha, eta, x, y, z):
    """The fibre quadric alpha^2(x^2+y^2+z^2) + 2 alpha z - 2 eta (x-iy) + 1.

    Works over CScalar (exact where the inputs are exact) or plain numbers.
    """
    if isinstance(alpha, CScalar):
        i = CScalar.i(alpha.mode)
        return (
            alpha * alpha * (x * x + y * y + z * z)
            + 2 * (alpha * z)
            - 2 * (eta * (x - i * y))
            + CScalar.one(alpha.mode)
        )
    alpha, eta = complex(alpha), complex(eta)
    return (
        alpha * alpha * (x * x + y * y + z * z)
        + 2 * alpha * z
        - 2 * eta * complex(x, -y)
        + 1
    )


def _quadric_at(alpha: complex, eta: complex, p: Vec3) -> complex:
    return fibre_equation(alpha, eta, p[0], p[1], p[2])


def _quadric_grad(alpha: complex, eta: complex, p: Vec3) -> tuple[complex, complex, complex]:
    a2 = alpha * alpha
    return (2 * a2 * p[0] - 2 * eta, 2 * a2 * p[1] + 2j * eta, 2 * a2 * p[2] + 2 * alpha)


def fibre_circle(
    alpha,
    eta,
    *,
    tol: float = 1e-13,
    max_iter: int = 60,
) -> FibreCircle:
    """Construct the fibre circle for parameters (alpha, eta).

    Centre and plane come from xi directly; the radius is found numerically by
    damped 2-D Newton in the carrier plane, starting from the centre along the
    first frame axis, and the located point is validated against both real
    quadric equations.
    """
    alpha, eta = _to_complex(alpha), _to_complex(eta)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    a2 = alpha * alpha
    xi = (-eta / a2, 1j * eta / a2, 1.0 / alpha)
    im = (xi[0].imag, xi[1].imag, xi[2].imag)
    scale = 1.0 + max(abs(v) for v in xi)
    if _norm(im) <= 1e-14 * scale:
        raise Degenerate("Im(xi) vanishes; the fibre degenerates (real alpha, eta = 0)")
    center = (-xi[0].real, -xi[1].real, -xi[2].real)
    nrm = _norm(im)
    normal = (im[0] / nrm, im[1] / nrm, im[2] / nrm)
    e1, e2 = _plane_frame(normal)

    def value(s: float) -> complex:
        return _quadric_at(alpha, eta, _axpy(center, s, e1))

    def slope(s: float) -> complex:
        gx, gy, gz = _quadric_grad(alpha, eta, _axpy(center, s, e1))
        return gx * e1[0] + gy * e1[1] + gz * e1[2]

    # On the carrier plane the two real equations are proportional (the
    # quadric restricts to alpha^2 (a^2 + b^2 - r^2)), so a 2-D Newton system
    # is rank-deficient there; the damped Newton search runs from the centre
    # along e1, where the restriction is a genuine 1-D root problem and the
    # step F/F' is real up to rounding.
    ftol = tol * (1.0 + abs(a2) + abs(eta)) * (1.0 + _norm(center)) ** 2
    solution = None
    for s0 in (1.0, 0.5, 2.0, 4.0, 0.1):
        s = s0
        fv = value(s)
        for _ in range(max_iter):
            if abs(fv) <= ftol:
                break
            dv = slope(s)
            if dv == 0:
                break
            step = -(fv / dv).real
            lam = 1.0
            while lam > 1e-10:
                ns = s + lam * step
                nf = value(ns)
                if abs(nf) < abs(fv):
                    s, fv = ns, nf
                    break
                lam *= 0.5
            else:
                break
        if abs(fv) <= ftol:
            solution = s
            break
    if solution is None:
        raise NoRealPoint(
            f"no real fibre point found for alpha={alpha}, eta={eta}"
        )
    radius = abs(solution)
    if radius <= tol:
        raise NoRealPoint("fibre collapsed to the centre")
    return FibreCircle(center=center, normal=normal, radius=radius, alpha=alpha, eta=eta)


def sample_circle(fc: FibreCircle, n: int) -> list[Point3]:
    """n equally spaced points on the circle."""
    if n < 3:
        raise ValueError("need at least 3 samples")
    e1, e2 = _plane_frame(fc.normal)
    pts = []
    for idx in range(n):
        theta = 2.0 * math.pi * idx / n
        ca, sa = fc.radius * math.cos(theta), fc.radius * math.sin(theta)
        p = _axpy(_axpy(fc.center, ca, e1), sa, e2)
        pts.append(Point3(p[0], p[1], p[2]))
    return pts


def verify_fibre(alpha, fc: FibreCircle, n: int) -> float:
    """Maximum deviation of phi from its value at the first sample: a small
    value certifies that the circle really is a level set of phi."""
    alpha = _to_complex(alpha)
    samples = sample_circle(fc, n)
    axis_floor = (1e-9 * (fc.radius + _norm(fc.center))) ** 2
    for p in samples:
        if p.x * p.x + p.y * p.y <= axis_floor:
            raise OnAxis("fibre sample lies on the z-axis")
    base = equal_param_phi(alpha, samples[0])
    return max(abs(equal_param_phi(alpha, p) - base) for p in samples)


def hausdorff_distance(a: list[Point3], b: list[Point3]) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""

    def one_sided(src, dst):
        return max(
            min(
                math.dist((p.x, p.y, p.z), (q.x, q.y, q.z))
                for q in dst
            )
            for p in src
        )

    return max(one_sided(a, b), one_sided(b, a))
