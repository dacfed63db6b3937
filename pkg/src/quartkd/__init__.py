"""quartkd: deterministic simulator and analysis toolkit for four-letter-alphabet QKD."""

__version__ = "0.1.0"

from .analytics import (BitEncoding, MappingReport, cross_dimension_comparison,
                        map_key_to_bits, mapping_error_analysis, oracle_strategy_table,
                        per_photon_information, plugin_mutual_information,
                        shannon_information)
from .eve import (EveRecord, EveStrategy, apply_strategy, eve_empirical_stats,
                  predicted_eve_info, predicted_qter)
from .oracle import KIND_INTERCEPT_RESEND, KIND_INTERMEDIATE, KIND_NONE
from .photonic import (BOB_SETTINGS, DetectorOutcome, MultiportCoupler, PhaseSettings,
                       alice_prepare_photonic, bob_analyze_photonic, build_multiport,
                       check_permutation, photonic_equivalence_check, routing_matrix)
from .protocol import (ProtocolConfig, RoundRecord, SiftedKeys, Transcript,
                       estimate_qter, run_session, sift)
from .qudit import (PHI, PSI, THETA, BasisSet, StateVector, basis, build_phi_basis,
                    build_psi_basis, build_theta_basis, exact_outcome_distribution,
                    measure, overlap)
from .streams import StreamFactory

__all__ = [
    "__version__",
    "BitEncoding", "MappingReport", "cross_dimension_comparison", "map_key_to_bits",
    "mapping_error_analysis", "oracle_strategy_table", "per_photon_information",
    "plugin_mutual_information", "shannon_information",
    "EveRecord", "EveStrategy", "apply_strategy", "eve_empirical_stats",
    "predicted_eve_info", "predicted_qter",
    "KIND_INTERCEPT_RESEND", "KIND_INTERMEDIATE", "KIND_NONE",
    "BOB_SETTINGS", "DetectorOutcome", "MultiportCoupler", "PhaseSettings",
    "alice_prepare_photonic", "bob_analyze_photonic", "build_multiport",
    "check_permutation", "photonic_equivalence_check", "routing_matrix",
    "ProtocolConfig", "RoundRecord", "SiftedKeys", "Transcript",
    "estimate_qter", "run_session", "sift",
    "PHI", "PSI", "THETA", "BasisSet", "StateVector", "basis", "build_phi_basis",
    "build_psi_basis", "build_theta_basis", "exact_outcome_distribution",
    "measure", "overlap",
    "StreamFactory",
]
