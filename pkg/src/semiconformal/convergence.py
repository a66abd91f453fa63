"""Empirical radius-of-convergence estimation for the u-direction coefficient
rows, compared against the analytic bounds of each solution family.

Estimation always runs on float magnitudes, even when the coefficients were
computed exactly: the rationals grow past any useful size long before the
tail behaviour stabilizes, so the conversion is explicit and up front.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .closed_forms import (
    HopfFamily,
    OneParamFamily,
    ProductFamily,
    TwoParamFamily,
)
from .scalars import CScalar


class InsufficientTerms(ValueError):
    """Too few nonzero coefficients to say anything about the tail."""


class UnknownFamily(ValueError):
    """No analytic convergence bound is on record for this family."""


MIN_NONZERO_TERMS = 8


@dataclass(frozen=True)
class RadiusEstimate:
    empirical: float
    theoretical: float | None  # None means unbounded (entire in u)
    relative_gap: float | None
    method: str
    terms_used: int

    def to_json_dict(self) -> dict:
        return {
            "empirical": self.empirical,
            "theoretical": "unbounded" if self.theoretical is None else self.theoretical,
            "relative_gap": self.relative_gap,
            "method": self.method,
            "terms_used": self.terms_used,
        }


def _magnitude(v) -> float:
    if isinstance(v, CScalar):
        return abs(v)
    return abs(complex(v))


def estimate_radius_u(coeffs: Sequence, method: str = "ratio") -> float:
    """Estimate the radius of convergence of sum a_k u^k from its coefficients.

    ratio: reciprocal of the consecutive-ratio limit, averaged over the last
    quartile of the ratio sequence (the ratios approach their limit like
    1 + O(1/k), so early terms bias the estimate and are discarded).

    root: reciprocal of lim sup |a_k|^(1/k), estimated from the last quartile
    of nonzero terms as (|a_last| / |a_first|)^(1/(k_last - k_first)); taking
    the root across the whole window cancels the polynomial prefactor that
    makes raw k-th roots converge too slowly.
    """
    mags = [(k, _magnitude(v)) for k, v in enumerate(coeffs)]
    nonzero = [(k, m) for k, m in mags if m != 0.0]
    if len(nonzero) < MIN_NONZERO_TERMS:
        raise InsufficientTerms(
            f"need at least {MIN_NONZERO_TERMS} nonzero terms, got {len(nonzero)}"
        )
    if method == "ratio":
        ratios = []
        for (k1, m1), (k2, m2) in zip(nonzero, nonzero[1:]):
            ratios.append((m2 / m1) ** (1.0 / (k2 - k1)))
        window = min(len(ratios), max(MIN_NONZERO_TERMS, len(ratios) // 4))
        tail = ratios[-window:]
        mean = sum(tail) / len(tail)
        if mean == 0.0:
            return float("inf")
        return 1.0 / mean
    if method == "root":
        window = min(len(nonzero), max(MIN_NONZERO_TERMS, len(nonzero) // 4))
        (k1, m1) = nonzero[-window]
        (k2, m2) = nonzero[-1]
        growth = (m2 / m1) ** (1.0 / (k2 - k1))
        if growth == 0.0:
            return float("inf")
        return 1.0 / growth
    raise ValueError(f"unknown method {method!r}")


def theoretical_bound(family, z: complex = 0j) -> float | None:
    """The analytic convergence bound in u for a family at height z.

    Returns None for families whose u-row is entire (a polynomial).  The
    two-parameter bound 1/(2 mu^2), mu = max(|alpha|, |beta|), is a z=0
    statement and is sufficient, not sharp.
    """
    z = complex(z)
    if isinstance(family, OneParamFamily):
        w2 = abs(1 + family.c * z) ** 2
        c2 = abs(family.c) ** 2
        if family.q == 0:
            return w2 / (6.0 * c2)
        # branch point of the closed q=1 form: u = -(1+cz)^2 / (2c^2)
        return w2 / (2.0 * c2)
    if isinstance(family, TwoParamFamily):
        if family.alpha == family.beta:
            return None
        mu = max(abs(family.alpha), abs(family.beta))
        return 1.0 / (2.0 * mu * mu)
    if isinstance(family, HopfFamily):
        return None
    if isinstance(family, ProductFamily):
        # branch point of sqrt(1 - 2c^2 u)
        return 1.0 / (2.0 * abs(family.c) ** 2)
    raise UnknownFamily(f"no convergence bound recorded for {family!r}")


def estimate_report(
    family, coeffs: Sequence, method: str = "ratio", z: complex = 0j
) -> RadiusEstimate:
    empirical = estimate_radius_u(coeffs, method)
    theoretical = theoretical_bound(family, z)
    gap = None
    if theoretical is not None and theoretical != 0.0:
        gap = (empirical - theoretical) / theoretical
    nonzero = sum(1 for v in coeffs if _magnitude(v) != 0.0)
    return RadiusEstimate(
        empirical=empirical,
        theoretical=theoretical,
        relative_gap=gap,
        method=method,
        terms_used=nonzero,
    )
