"""Work extraction from finite-level quantum batteries.

Single-copy ergotropy via passive states, thermodynamic bounds from
entropy-matched Gibbs states, exact per-copy passive energies for n-copy
ensembles, and simulation of unitary extraction protocols.
"""

from .battery import (BatterySpec, ErgotropyReport, QuantumState, energy,
                      ergotropy, is_passive, optimal_unitary, passive_state)
from .ensemble import (CompletePassivityReport, EnsembleCurve,
                       WeightedLevelTable, brute_force_oracle,
                       build_level_table, complete_passivity_check, curve,
                       passive_energy_per_copy)
from .gibbs import (GibbsMatch, GibbsState, entropy, gibbs_state,
                    match_entropy, thermodynamic_bound)
from .protocol import (ControlSchedule, ProtocolResult, apply_unitary,
                       best_product_work, entangling_advantage, evolve)

__all__ = [
    "BatterySpec", "QuantumState", "ErgotropyReport",
    "energy", "is_passive", "passive_state", "optimal_unitary", "ergotropy",
    "GibbsState", "GibbsMatch", "entropy", "gibbs_state", "match_entropy",
    "thermodynamic_bound",
    "WeightedLevelTable", "EnsembleCurve", "CompletePassivityReport",
    "build_level_table", "passive_energy_per_copy", "brute_force_oracle",
    "curve", "complete_passivity_check",
    "ControlSchedule", "ProtocolResult", "evolve", "apply_unitary",
    "best_product_work", "entangling_advantage",
]

__version__ = "0.1.0"
