"""Concentration-bound evaluators and the numeric inequality audit.

Everything is evaluated in log space so the audit stays meaningful at
delta around 3e9, where the raw probabilities underflow doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Callable, Optional, Sequence

from .errors import InputError


def chernoff_upper_log(lam: float, t: float) -> float:
    """log Pr[X >= lam + t] bound for a Bernoulli sum with mean <= lam."""
    if lam < 0 or t < 0:
        raise InputError("lam and t must be non-negative")
    if t == 0 and lam == 0:
        return 0.0
    return -(t * t) / (2 * lam + t)


def chernoff_lower_log(eta: float, t: float) -> float:
    """log Pr[X <= eta - t] bound, valid for t <= eta <= E[X]."""
    if eta < 0 or t < 0 or t > eta:
        raise InputError("need 0 <= t <= eta")
    if eta == 0:
        return 0.0
    return -(t * t) / (2 * eta)


def mcdiarmid_log(c_list: Sequence[float], t: float) -> float:
    """log Pr[X < E[X] - t] bound with per-trial influences c_list."""
    if t < 0 or any(c < 0 for c in c_list):
        raise InputError("influences and t must be non-negative")
    s = sum(c * c for c in c_list)
    if s == 0:
        return 0.0 if t == 0 else -math.inf
    return -2 * t * t / s


def chernoff_upper(lam: float, t: float) -> float:
    return math.exp(chernoff_upper_log(lam, t))


def chernoff_lower(eta: float, t: float) -> float:
    return math.exp(chernoff_lower_log(eta, t))


def mcdiarmid(c_list: Sequence[float], t: float) -> float:
    return math.exp(mcdiarmid_log(c_list, t))


def q_formula(beta: float, delta_overlap: float, delta: float) -> float:
    """Failure bound (1 + beta*p) * exp(-(beta-1)*p) with p = overlap/delta^2."""
    if delta <= 0:
        raise InputError("delta must be positive")
    p = delta_overlap / (delta * delta)
    return (1 + beta * p) * math.exp(-(beta - 1) * p)


def q_formula_log(beta: float, delta_overlap: float, delta: float) -> float:
    p = delta_overlap / (delta * delta)
    return math.log1p(beta * p) - (beta - 1) * p


# -- the audit -------------------------------------------------------------------


@dataclass(frozen=True)
class AuditItem:
    name: str
    description: str
    # log-space margin: holds iff margin(delta) <= 0
    margin: Callable[[float], float]


def _transversal_items() -> list[AuditItem]:
    log16 = math.log(16)

    def against_16d2(exponent_coeff: float):
        def margin(d: float) -> float:
            return -exponent_coeff * d - (-(log16 + 2 * math.log(d)))

        return margin

    return [
        AuditItem(
            "transversal-degree",
            "degree-in-subset tail exp(-d/1380) fits under 1/(16 d^2)",
            against_16d2(1 / 1380),
        ),
        AuditItem(
            "transversal-nonedges",
            "neighborhood non-edge tail exp(-961 d / 15552e5) fits under 1/(16 d^2)",
            against_16d2(961 / (15552 * 10**5)),
        ),
        AuditItem(
            "transversal-core",
            "core-intersection tail exp(-289 d/997920) fits under 1/(16 d^2)",
            against_16d2(289 / 997920),
        ),
        AuditItem(
            "transversal-bisect",
            "benefactor-bisection tail exp(-14205361 d / 2561328e5) fits under 1/(16 d^2)",
            against_16d2(14205361 / (2561328 * 10**5)),
        ),
    ]


def _sparse_core_items() -> list[AuditItem]:
    def sparse_rich(d: float) -> float:
        # non-edge supply minus one-vertex exposure must reach the richness floor
        return (d * d / 5000) - (d * d / 4800 - 2 * d / 5)

    def sparse_fail(d: float) -> float:
        x = d / 25000
        lhs = 1 + math.log1p(x) - x
        rhs = -(math.log(4) + 2 * math.log(d))
        return lhs - rhs

    def core_rich(d: float) -> float:
        return (d / 7 + 1) - (d / 6 - d / 5000 - 85)

    def core_lists(d: float) -> float:
        return (d + 4 * (d / 5) + d / 6 - 4) / 2 - (d - d / 5000 - 1)

    def core_succ(d: float) -> float:
        # (43/42) e^{-1/42} e^{1/(6d)} <= 1 - 1/5000
        lhs = math.log(43 / 42) - F(1, 42) + 1 / (6 * d)
        return float(lhs) - math.log(1 - 1 / 5000)

    def core_chain_mid(d: float) -> float:
        q = 1 / 5000
        m = math.ceil(d / 10**4)
        return (1 + q * m) / (1 - q) - 2 * q * (m - 1)

    def core_fail(d: float) -> float:
        lhs = math.log(d / (25 * 10**6)) - d / (5 * 10**7)
        rhs = -(math.log(4) + 2 * math.log(d))
        return lhs - rhs

    def lists_vs_sparse(d: float) -> float:
        # every list has at least d-1 colors, above the saving threshold
        return (d + 4 * (d / 5) + d / 5 - 4) / 2 - (d - 1)

    return [
        AuditItem("sparse-richness", "non-edge set inside the subset is rich", sparse_rich),
        AuditItem("sparse-lists", "list sizes clear the saving threshold", lists_vs_sparse),
        AuditItem("sparse-failure", "per-vertex saving failure fits under 1/(4 d^2)", sparse_fail),
        AuditItem("core-richness", "benefactor non-edges inside the core are rich", core_rich),
        AuditItem("core-lists", "pruned lists clear the saving threshold", core_lists),
        AuditItem("core-success", "per-benefactor success probability floor", core_succ),
        AuditItem("core-chain", "middle step of the core failure chain", core_chain_mid),
        AuditItem("core-failure", "per-core failure fits under 1/(4 d^2)", core_fail),
    ]


def _structural_items() -> list[AuditItem]:
    def lll_budget(d: float) -> float:
        # 4 d^2 events at probability 1/(16 d^2) exactly meets the 1/(4 deps) rule
        return 4 * d * d * (1 / (16 * d * d)) - 1 / 4

    def decomposition_window(d: float) -> float:
        sigma, rho = d * d / 120, d / 28
        return max(4 * sigma / d + 2 - rho, rho - d / 4)

    def benefactor_supply(d: float) -> float:
        worst = math.inf
        for p in (1, 2, max(1, int((d - 16) // 4))):
            pp = max(p - 1, 1)
            worst = min(worst, pp * (d - p) / (pp + 90) - d / 100)
        return -worst

    def isolation_window(d: float) -> float:
        # delta >= 4p + 16 for every dense part (p < rho)
        return 4 * (d / 28) + 16 - d

    return [
        AuditItem("lll-budget", "event count times probability meets the dependence rule", lll_budget),
        AuditItem("decomposition-window", "sigma and rho fit the decomposition window", decomposition_window),
        AuditItem("benefactor-supply", "disjoint benefactor supply reaches d/100", benefactor_supply),
        AuditItem("isolation-window", "d >= 4p + 16 throughout the allowed p range", isolation_window),
    ]


ALL_ITEMS: list[AuditItem] = _transversal_items() + _sparse_core_items() + _structural_items()


@dataclass
class AuditRow:
    name: str
    description: str
    holds: bool
    margin: float
    minimal_delta: Optional[int]


def minimal_passing_delta(item: AuditItem, hi: int = 10**12) -> Optional[int]:
    """Smallest integer delta at which the inequality holds (monotone tail).

    Exponential bracket then bisection; None if it never holds below `hi`.
    """
    lo = 1
    up = 2
    while up <= hi and item.margin(up) > 0:
        up *= 2
    if up > hi:
        return None
    while up - lo > 1:
        mid = (lo + up) // 2
        if item.margin(mid) <= 0:
            up = mid
        else:
            lo = mid
    return up


def inequality_audit(delta: int) -> list[AuditRow]:
    """Evaluate every catalogued inequality at delta and report each one's
    minimal passing delta."""
    if delta < 1:
        raise InputError("delta must be at least 1")
    rows = []
    for item in ALL_ITEMS:
        m = item.margin(float(delta))
        rows.append(
            AuditRow(
                name=item.name,
                description=item.description,
                holds=m <= 0,
                margin=m,
                minimal_delta=minimal_passing_delta(item),
            )
        )
    return rows


def beta_p_constant(delta: int) -> F:
    """The exact richness-times-probability constant of the core argument."""
    beta = F(1, 7) * delta
    p = F(1, 6) / delta
    return beta * p
