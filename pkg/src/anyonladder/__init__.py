"""Exact-diagonalization toolkit for a non-Hermitian anyon-Hubbard ladder."""

from ._version import __version__

from .fock import BasisTable, SiteIndex, build_basis, basis_dim, index_of, leg_counts, linear_site
from .hamiltonian import (
    HMatrix,
    ModelParams,
    build_full,
    build_full_via_anyons,
    build_inter,
    build_intra,
    build_onsite,
    make_basis,
)
from .operators import (
    OperatorMatrix,
    anyon_matrix,
    apply_annihilation,
    boson_matrix,
    check_anyon_commutators,
    jw_string_phase,
)
from .spectral import (
    Crossing,
    CrossingReport,
    Spectrum,
    argmax_im,
    conjugation_asymmetry,
    count_complex,
    edge_correlation,
    eig,
    im_dos,
    max_im,
    max_im_state_tracker,
    polarization,
)
from .symmetry import KOperator, build_K, k_conjugate, residual
from .perturbation import (
    H0VSplit,
    PathSpec,
    SectorProjector,
    ab_exchange_formula,
    bw_second_order,
    onset_threshold,
    path_amplitude,
    sector_projector,
    split,
    sustained_plateaus,
)
from .dynamics import (
    QuenchConfig,
    QuenchResult,
    crossover_estimate,
    decompose,
    default_time_grid,
    evolve,
    evolve_stepping,
    initial_state,
    ipr,
    overlap_series,
    run_quench,
)
from .config import ConfigError, ExperimentConfig, parse_angle, parse_config_text
from .presets import list_presets, preset_configs
from .sweeps import NumericalError, SweepTable, cache_key, render_csv, run, run_table

__all__ = [name for name in dir() if not name.startswith("_")]
