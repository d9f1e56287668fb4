"""Standard f-divergences, Renyi divergences and perturbed states on C^d."""
from .channels import (Channel, apply_channel_predual, dephasing_channel, identity_channel,
                       make_channel, partial_trace_channel, random_cptp, restrict_to_subalgebra)
from .divergence import (ModularSpectrum, classical_f_divergence, relative_entropy,
                         relative_modular_spectrum, standard_f_divergence, truncated_f_divergence)
from .errors import *  # noqa: F401,F403
from .fclass import (ConvexFunctionSpec, IntegralRepresentation, TruncationData, catalog_lookup,
                     h_n_evaluate, transpose, truncate, validate_representation)
from .perturbation import (PerturbedState, entropy_decomposition_check, perturbed_state,
                           petz_variational_entropy, umegaki_check)
from .renyi import (RenyiResult, alpha_sweep, d_alpha, d_max, d_one, q_alpha,
                    sandwiched_d_alpha)
from .spectral import (EigenSystem, ZeroPolicy, apply_spectral_function, eig_hermitian, pinch,
                       support_projection)
from .states import (ClassicalDistribution, PositiveFunctional, compress, direct_sum,
                     make_functional, random_density)
from .variational import (VariationalReport, inner_minimum, inner_minimum_numeric, kosaki_entropy,
                          variational_Sf, variational_value_at_n)

__version__ = "0.1.0"
