from .common import (singular_set, check_momentum, WqedError, DomainError,
    SingularMomentumError, DegenerateInputError, NumericalError,
    RootFindingError, ConsistencyError, BracketError, ConfigError)
from .model import (ModelParams, PairMomentum, ContinuumBands,
    EnergyRegion, polariton_dispersion, continuum_bands, classify_energy)
from .kernel import (HoppingCoeffs, RelativeWave, coeffs, coeff_parts,
    dispersion_value, omega_of_z, partner_w, boundary_det, reduced_boundary,
    boundary_matrix, inverse_F, assemble_chi, residuals, row_residuals,
    physical_amplitude)
from .solver import (PairEigenstate, EliminationPoly, eliminate, roots,
    raw_solutions, solve_states, chiral_solve)
from .asymptotics import (AsymptoteEval, omega_k0, discriminant_omega,
    omega_edge, sigma_numeric, sigma_closed, omega_of_w)
from .oracle import (DenseOperator, dense_F, build_hk, build_generalized,
    eig_all, generalized_eigvals, single_excitation_check, bloch_sum,
    match_state)
from .sweep import (Branch, EpResult, sweep_K, find_ep, ep_curve,
    edge_coalescence, coalescence_exponent, real_coverage)

__all__ = ['singular_set', 'check_momentum', 'WqedError', 'DomainError',
           'SingularMomentumError', 'DegenerateInputError', 'NumericalError',
           'RootFindingError', 'ConsistencyError', 'BracketError',
           'ConfigError', 'ModelParams', 'PairMomentum', 'ContinuumBands',
           'EnergyRegion', 'polariton_dispersion', 'continuum_bands',
           'classify_energy', 'HoppingCoeffs', 'RelativeWave', 'coeffs',
           'coeff_parts', 'dispersion_value', 'omega_of_z', 'partner_w',
           'boundary_det', 'reduced_boundary', 'boundary_matrix',
           'inverse_F', 'assemble_chi', 'residuals', 'row_residuals',
           'physical_amplitude', 'PairEigenstate', 'EliminationPoly',
           'eliminate', 'roots', 'raw_solutions', 'solve_states',
           'chiral_solve', 'AsymptoteEval', 'omega_k0', 'discriminant_omega',
           'omega_edge', 'sigma_numeric', 'sigma_closed', 'omega_of_w',
           'DenseOperator', 'dense_F', 'build_hk', 'build_generalized',
           'eig_all', 'generalized_eigvals', 'single_excitation_check',
           'bloch_sum', 'match_state', 'Branch', 'EpResult', 'sweep_K', 'find_ep',
           'ep_curve', 'edge_coalescence', 'coalescence_exponent',
           'real_coverage']
