"""Tunable thresholds for the decomposition/transversal/coloring pipeline.

All fractions live in one record so that desk-scale experiments can run the
identical machinery with gentler constants.  `PAPER` carries the reference
values used by the asymptotic argument; `SCALED` relaxes the concentration
margins enough for graphs with maximum degree in the tens-to-hundreds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction as F


@dataclass(frozen=True)
class PipelineParams:
    """Every threshold used by setting construction, transversal sampling
    and the coloring pipeline, as fractions of delta (or delta^2)."""

    # transversal sampling
    select_prob: F = F(11, 60)      # Bernoulli inclusion probability
    nbr_frac: F = F(1, 5)           # (i) max |N(v) & S| as a fraction of delta
    nonedge_frac: F = F(1, 4800)    # (ii) non-edges inside S, fraction of delta^2
    core_frac: F = F(1, 6)          # (iii) min |C & S| as a fraction of delta
    bisect_frac: F = F(1, 10_000)   # (iv) min bisected benefactors, fraction of delta
    # decomposition
    sigma_frac: F = F(1, 120)       # sparse threshold, fraction of delta^2
    rho_frac: F = F(1, 28)          # dense-part size slack, fraction of delta
    # benefactors
    benefactor_frac: F = F(1, 100)  # family size per core, fraction of delta
    loose_m: int = 85
    tight_m: int = 7
    # richness/saving constants
    sparse_beta_frac: F = F(1, 5000)   # fraction of delta^2
    core_beta_frac: F = F(1, 7)        # fraction of delta
    sparse_delta_frac: F = F(1, 5)     # overlap floor, fraction of delta
    core_delta_frac: F = F(1, 6)

    def sigma(self, delta: int) -> float:
        return float(self.sigma_frac * delta * delta)

    def rho(self, delta: int) -> float:
        return float(self.rho_frac * delta)

    def benefactor_count(self, delta: int) -> int:
        return math.ceil(self.benefactor_frac * delta)

    def nbr_cap(self, delta: int) -> float:
        return float(self.nbr_frac * delta)

    def nonedge_floor(self, delta: int) -> float:
        return float(self.nonedge_frac * delta * delta)

    def core_floor(self, delta: int) -> float:
        return float(self.core_frac * delta)

    def bisect_floor(self, delta: int) -> float:
        return float(self.bisect_frac * delta)


PAPER = PipelineParams()

#: Desk-scale preset: same machinery, margins wide enough that the
#: concentration behaviour is visible at delta in the tens-to-hundreds.
SCALED = replace(
    PAPER,
    nbr_frac=F(3, 10),
    core_frac=F(1, 10),
    bisect_frac=F(1, 30),
    benefactor_frac=F(1, 5),
)

PRESETS = {"paper": PAPER, "scaled": SCALED}
