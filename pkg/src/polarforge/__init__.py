"""Polar and decreasing monomial code construction, analysis and simulation."""

__version__ = "0.1.0"

from .monomials import (
    Monomial,
    MonomialSpace,
    admissible_frontier,
    decreasing_closure,
    evaluate,
    generator_matrix,
    index_of,
    is_decreasing,
    monomial_of,
    precedes,
)
from .reliability import (
    ChannelModel,
    ReliabilityProfile,
    bec,
    bec_bhattacharyya,
    biawgn,
    channel_bhattacharyya,
    ga_awgn,
    pairwise_error,
    ranking,
)
from .spectrum import (
    NotDecreasingError,
    WeightReport,
    awmin_of,
    bitwise_wmin,
    ml_negligibility_ratio,
    sc_sum_bound,
    ub_min_weight,
    weight_report,
    wmin_of,
)
from .construction import (
    DesignSpec,
    InfeasibleDesignError,
    InformationSet,
    compare_sets,
    construct,
    construct_mixed,
    construct_reliability,
    rm_information_set,
    rm_rstar,
    staircase_sweep,
)
from .codec import CodeConfig, crc_check, crc_compute, encode, encode_batch, pac_convolve, polar_transform
from .decoders import decode_batch, sc_decode, scl_decode
from .simulator import SimConfig, SimResult, awgn_transmit, run_bler
from .oracle import (
    EnumerationBudget,
    all_decreasing_sets,
    enumerate_weights,
    oracle_bitwise_wmin,
    oracle_orbit,
    run_oracle_suite,
)
