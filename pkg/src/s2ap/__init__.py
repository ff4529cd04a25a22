"""Binary digit sums along arithmetic progressions.

Constructive witnesses for prescribed digit-sum differences, exact
densities of ``s2(n + t) - s2(n)`` (and the joint multi-step analogue),
and brute-force oracles used to cross-check them.
"""

from s2ap.digits import g, g_interval_sum, nu2, s2, tm
from s2ap.dyadic import Dyadic
from s2ap.density1d import TailedDistribution, cusick_c, delta_1d, positivity_check
from s2ap.densitymd import MdDistribution, cusick_pair_density, delta_md, marginal
from s2ap.witness import (
    Block,
    Witness,
    concat_blocks,
    consecutive_to_cumulative,
    cumulative_to_consecutive,
    gadget_minus,
    gadget_plus,
    realize_tm_word,
    witness,
    witness_m1,
    witness_m2,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "Dyadic",
    "MdDistribution",
    "TailedDistribution",
    "Witness",
    "concat_blocks",
    "consecutive_to_cumulative",
    "cumulative_to_consecutive",
    "cusick_c",
    "cusick_pair_density",
    "delta_1d",
    "delta_md",
    "g",
    "g_interval_sum",
    "gadget_minus",
    "gadget_plus",
    "marginal",
    "nu2",
    "positivity_check",
    "realize_tm_word",
    "s2",
    "tm",
    "witness",
    "witness_m1",
    "witness_m2",
]
