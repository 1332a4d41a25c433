"""Hair-width evidence: exact likelihood ratio between beard-only and beard-plus-scalp trims."""
from .region import (
    Cell,
    PriorRegion,
    bin_names,
    is_unimodal,
    ordered_simplex_integral,
    region_4bin,
    region_5bin,
    region_from_predicate,
)
from .likelihood import (
    BETA_DEFAULT,
    THIN_WIDTH,
    HairData,
    HayModel,
    alpha_bound,
    alpha_polynomial,
    defense_integrand,
    defense_likelihood,
    fixed_min_scan,
    likelihood_ratio,
    mixture_pmf,
    prosecution_integrand,
    prosecution_likelihood,
    prosecution_likelihood_at,
    thin_interval_scan,
)
