"""
Pseudopowers p_{a,b}(n) = [(n)_a]_b and numeric checks of their growth bounds.

With e = log b / log a and 2 <= a <= b, for every n >= 0:

  (a-1)/(b-1) * n^e  <=  (a-1)/(b-1) * ((n+1)^e - 1)  <=  p_{a,b}(n)  <=  n^e

check_bnd_inequalities evaluates the chain in float64 over 0..n_max. Entries
whose relative margin falls inside the guard band are re-evaluated with
Decimal at 50 significant digits; the upper bound is an exact equality at
powers of a, so those always land in the band.
"""
from __future__ import annotations

import logging
import math
from decimal import Decimal, localcontext
from typing import List

import numpy as np
from pydantic import BaseModel, Field

from numeration.digits import NumerationError, checked, digits_of, value_of

logger = logging.getLogger(__name__)

GUARD_BAND = 1e-9
_DECIMAL_PREC = 50
_DECIMAL_SLACK = Decimal(10) ** -40


def _validate_pair(a: int, b: int) -> None:
    if a < 2 or b < a:
        raise NumerationError(f"pseudopower needs 2 <= a <= b, got a={a}, b={b}")


def pseudopower(a: int, b: int, n: int) -> int:
    _validate_pair(a, b)
    if n < 0:
        raise NumerationError(f"pseudopower is defined for n >= 0, got {n}")
    return checked(value_of(digits_of(n, a), b))


def pseudopower_array(a: int, b: int, values: np.ndarray) -> np.ndarray:
    """Vectorised p_{a,b} over a nonnegative int64 array."""
    _validate_pair(a, b)
    v = np.asarray(values, dtype=np.int64).copy()
    if (v < 0).any():
        raise NumerationError("pseudopower_array needs nonnegative values")
    out = np.zeros_like(v)
    place = 1
    while (v > 0).any():
        out += (v % a) * place
        v //= a
        place *= b
    return out


def exponent(a: int, b: int) -> float:
    return math.log(b) / math.log(a)


# -----------------------------
# Reports
# -----------------------------

class BoundReport(BaseModel):
    a: int
    b: int
    n_max: int
    exponent: float
    holds: bool
    worst_margin: float = Field(..., description="largest relative margin left - right over all links; <= 0 means slack")
    worst_n: int
    worst_link: int = Field(..., ge=0, le=2)
    guard_retests: int = 0
    violations: List[int] = Field(default_factory=list)


class TightnessReport(BaseModel):
    a: int
    b: int
    k_max: int
    upper_exact: bool
    lower_gaps: List[float]
    lower_ratios: List[float]
    holds: bool


class AuxiliaryReport(BaseModel):
    a: int
    b: int
    holds: bool
    margins: dict[str, float]


# -----------------------------
# Theorem chain
# -----------------------------

def _decimal_chain(a: int, b: int, n: int, p: int) -> List[Decimal]:
    with localcontext() as ctx:
        ctx.prec = _DECIMAL_PREC
        e = Decimal(b).ln() / Decimal(a).ln()
        c = Decimal(a - 1) / Decimal(b - 1)
        ne = (e * Decimal(n).ln()).exp() if n > 0 else Decimal(0)
        n1e = (e * Decimal(n + 1).ln()).exp()
        return [c * ne, c * (n1e - 1), Decimal(p), ne]


def check_bnd_inequalities(a: int, b: int, n_max: int, tolerance: float = GUARD_BAND) -> BoundReport:
    """Check the pseudopower chain for 0 <= n <= n_max; violations are reported, never raised."""
    _validate_pair(a, b)
    e = exponent(a, b)
    c = (a - 1) / (b - 1)
    ns = np.arange(n_max + 1, dtype=np.int64)
    nf = ns.astype(np.float64)
    p = pseudopower_array(a, b, ns).astype(np.float64)
    ne = nf**e
    chain = [c * ne, c * ((nf + 1.0) ** e - 1.0), p, ne]

    margins = np.empty((3, ns.size), dtype=np.float64)
    for k in range(3):
        left, right = chain[k], chain[k + 1]
        margins[k] = (left - right) / np.maximum(1.0, np.abs(right))

    bad = margins > tolerance
    band = np.abs(margins) <= tolerance
    retest_n = np.unique(np.nonzero(band)[1])
    confirmed: set[int] = set()
    for n in retest_n.tolist():
        exact = _decimal_chain(a, b, n, int(p[n]))
        for k in range(3):
            if not band[k, n]:
                continue
            right = exact[k + 1]
            scale = max(Decimal(1), abs(right))
            if (exact[k] - right) / scale > _DECIMAL_SLACK:
                confirmed.add(n)
            else:
                margins[k, n] = min(margins[k, n], 0.0)

    violations = sorted(set(np.nonzero(bad)[1].tolist()) | confirmed)
    flat = int(np.argmax(margins))
    link, worst_n = divmod(flat, ns.size)
    report = BoundReport(
        a=a,
        b=b,
        n_max=n_max,
        exponent=e,
        holds=not violations,
        worst_margin=float(margins[link, worst_n]),
        worst_n=int(worst_n),
        worst_link=int(link),
        guard_retests=int(retest_n.size),
        violations=violations[:20],
    )
    logger.info(
        f"{'✓' if report.holds else '✗'} bnd chain (a={a}, b={b}) n<={n_max}: "
        f"worst margin {report.worst_margin:.3e} at n={report.worst_n}, {report.guard_retests} guard retests"
    )
    return report


def check_tightness(a: int, b: int, k_max: int, tolerance: float = GUARD_BAND) -> TightnessReport:
    """Upper bound reached at a^k, lower bound approached at a^k - 1."""
    _validate_pair(a, b)
    e = exponent(a, b)
    c = (a - 1) / (b - 1)
    upper_exact = all(pseudopower(a, b, a**k) == b**k for k in range(k_max + 1))
    gaps: List[float] = []
    ratios: List[float] = []
    for k in range(1, k_max + 1):
        n = a**k - 1
        p = pseudopower(a, b, n)
        # p(a^k - 1) * (b-1)/(a-1) against (a^k)^e - 1 = b^k - 1
        gaps.append(abs(p * (b - 1) / (a - 1) - (b**k - 1)) / b**k)
        ratios.append(c * n**e / p)
    monotone = all(r2 >= r1 - tolerance for r1, r2 in zip(ratios, ratios[1:]))
    holds = upper_exact and max(gaps, default=0.0) <= tolerance and monotone and all(r <= 1 + tolerance for r in ratios)
    return TightnessReport(
        a=a, b=b, k_max=k_max, upper_exact=upper_exact, lower_gaps=gaps, lower_ratios=ratios, holds=holds
    )


def check_auxiliary_inequalities(a: int, b: int, grid: int = 201, n_max: int = 200) -> AuxiliaryReport:
    """Grid checks of the three inequalities the chain rests on, plus the step inequality.

    margins are max(left - right) per inequality written as left <= right; all must be <= ~0.
    """
    _validate_pair(a, b)
    e = exponent(a, b)
    xs = np.linspace(0.0, 1.0, grid)
    ns = np.arange(1, n_max + 1, dtype=np.float64)[:, None]

    # (n + x)^e <= (n + 1)^e + e (x - 1)
    power_step = float(np.max((ns + xs) ** e - (ns + 1.0) ** e - e * (xs - 1.0)))
    # ((b-1)/b) log a <= ((a-1)/a) log b
    log_ratio = ((b - 1) / b) * math.log(a) - ((a - 1) / a) * math.log(b)
    # ((a-1)x + 1)^{log b} <= ((b-1)x + 1)^{log a}, compared in logs
    log_power = float(np.max(math.log(b) * np.log1p((a - 1) * xs) - math.log(a) * np.log1p((b - 1) * xs)))
    # 0 <= (abe - ab - be + a)
    step = -(a * b * e - a * b - b * e + a)

    margins = {"power_step": power_step, "log_ratio": log_ratio, "log_power": log_power, "induction_step": step}
    holds = all(v <= GUARD_BAND * max(1.0, b) for v in margins.values())
    return AuxiliaryReport(a=a, b=b, holds=holds, margins=margins)
