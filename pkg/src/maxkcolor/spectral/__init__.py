"""Markov noise operators and Fourier analysis of functions on [q]^N."""
from .fourier import (
    ClaimCheck,
    FourierBasis,
    InfluenceReport,
    StabilityReport,
    TabulatedFunction,
    bar_function,
    bar_map,
    bar_table,
    check_claim_infrel,
    fourier,
    fourier_basis,
    influences,
    inner,
    levels,
    noise_stability,
    stability_fourier,
    stability_sum_report,
    tensor_apply,
    tensor_power_apply,
    underline_map,
)
from .operators import (
    MarkovOperator,
    beckner,
    dmr_entry,
    dmr_integer_matrix,
    dmr_operator,
    dmr_weights,
    eigenvalues,
    jacobi_eigh,
    pair_index,
    power_iteration_second,
    spectral_radius,
    tsquare_closed_form,
    tsquare_lower_bound,
)
