"""Secrecy analysis for classical and quantum wiretap channels."""
from .errors import (
    AmbiguityError,
    CapabilityError,
    ConfigurationError,
    DimensionError,
    DomainError,
    ValidationError,
    WiretapLabError,
)
from .info import binary_entropy, cascade, mutual_information, shannon_entropy
from .channels import Bsc, BroadcastModel, Dmc
from .secrecy import cs, cs_bar_bsc, cs_bar_upper, thm4_lower
from .qstate import DensityMatrix, KrausChannel, von_neumann_entropy
from .holevo import CqChannel, Ensemble, holevo_chi, optimize_secrecy_rate, secrecy_rate
from .bounds import c_eve_gap, fano_min_error, helstrom_multistate_lower, lemma323_bound
from .polar import SynthesizedChannel, polarize, secure_index_set
from .rates import AlphabetSizes, adaptive_rates, rate, select_branch
from .protosim import ProtocolConfig, domination_experiment, simulate
from .games import XorGame, bias, classical_optimum, tsirelson_strategy

__version__ = "0.1.0"
