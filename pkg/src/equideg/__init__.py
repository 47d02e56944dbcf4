"""Equivariant-degree bifurcation-from-infinity analysis for second-order
Hamiltonian systems, with a Fourier-Galerkin continuation harness."""

from .udring import ONE, ZERO, TomDieckElement, add, product, scalar_mul, star
from .reps import (SO2, RepDecomposition, gcd_closure, is_consistent,
                   isotropy_gcd_set, kernel_rep_at_infinity)
from .spectral import (DEFAULT_GRID, DEFAULT_TOL, DegenerateSpectrumError,
                       EigenConvergenceError, MatrixFamily,
                       NonIsolatedResonanceError, ResolutionWarning,
                       ResonancePoint, SpectralData, SymmetricMatrix,
                       TangencyWarning, as_symmetric, eigen_sym, j_k, k_set,
                       morse_index, resonant_frequencies, scan_resonances)
from .eqdeg import (BlockDataError, LinearBlockData, MissingIndexError,
                    deg_id_minus_LA, ind_infinity, lin_deg, minus_id_data)
from .bifurcation import (AccumulationWarning, BifurcationReport,
                          ConsistencyVerdict, CriterionVerdict, Eqcont3Point,
                          IndexRule, PeriodSet, Perturbation, PreconditionError,
                          ProblemSpec, bif_index, bif_index_detailed,
                          bif_index_ls, build_report, check_eqcont1,
                          check_eqcont2, consistency_check, endpoint_degree,
                          eqcont3_points, predict_periods)
from .galerkin import (BranchPoint, ContinuationOptions, DivergenceWarning,
                       FourierLoop, NewtonConvergenceError,
                       SingularJacobianError, continue_to_infinity,
                       energy_drift, minimal_period, minimal_period_divisor,
                       newton_solve, residual, write_branch_csv)
from .config import ConfigError, ProblemConfig
from .problems import CATALOG, BuiltinExample, config_path, verification_rows

__version__ = "0.1.0"
