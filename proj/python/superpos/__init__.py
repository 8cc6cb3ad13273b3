"""Local and nonlocal superposition measures."""

from ._core import (
    CertificationResult,
    DensityMatrix,
    InvalidInput,
    MeasureReport,
    NumericalError,
    OptimizerConfig,
    PureState,
    SchmidtResult,
    catalog_names,
    classical_certify,
    concurrence_mixed,
    concurrence_pure,
    cq_certify,
    load_state,
    ls_block_pure,
    ls_closed_form_pure,
    ls_mixed_estimate,
    ls_symmetric_pure,
    make_state,
    nls_bipartite_exact,
    nls_mixed_estimate,
    nls_pure,
    parse_state_json,
    ppt_min_eigenvalue,
    run_config_csv,
    schmidt_decompose,
    to_density,
)

__all__ = [name for name in dir() if not name.startswith("_")]
