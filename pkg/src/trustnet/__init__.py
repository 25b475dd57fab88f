"""Trust networks: rig-valued recommendation graphs, the stochastic trust
process and its power-law steady state, spectral trust communities, and
hub-attack robustness."""

__version__ = "0.1.0"

from .errors import (ConfigurationError, DegenerateFitError, DomainError, InsufficientTailError,
                     ParseError, StuckStateError, TrustNetError)
from .rig import RigKind, rig_add, rig_mul, to_bounded, to_unbounded
from .graph import (Certificate, CompletionParams, Endorsement, EndorsementNetwork,
                    RecommendationNetwork, TrustMatrix, TrustNetwork, endorsement_complete,
                    is_path_complete, path_complete, reduce_to_matrix)
from .dynamics import (GammaSchedule, RatingHistogram, SimConfig, TrustState,
                       derive_tau_from_sigma, run_simulation, sample_honesty, select_shop,
                       update_trust)
from .steady import (SteadyStateParams, integrate_density_odes, power_law_asymptote,
                     steady_state_closed_form, steady_state_recurrence)
from .tail import TailFit, fit_tail
from .spectral import (CommunityDecomposition, community_affinity, community_trust, decompose,
                       personalized_matrix, similarity)
from .robustness import (attack_experiment, degree_sequence_from_histogram,
                         giant_component_fraction, sample_configuration_graph)
