#pragma once

#include <vector>

#include "qflux/complex_matrix.hpp"

namespace qflux {

// Eigensystem of a Hermitian matrix: real eigenvalues sorted descending, one
// rank-1 Hermitian projector per eigenvalue. Eigenvector gauge: the component
// of largest magnitude is made real and non-negative (ties broken by lowest
// index), so repeated runs produce identical output.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;          // descending
    std::vector<ComplexMatrix> projectors;    // rank-1, Hermitian, Σ = identity
    std::vector<std::vector<cdouble>> vectors; // gauge-fixed eigenvectors
    bool degenerate = false;                  // any eigenvalue gap < degeneracy tolerance
};

// d = 2 uses the closed-form quadratic solution; d > 2 runs cyclic Jacobi
// rotations. Throws NotHermitian when A fails the Hermiticity precondition.
SpectralDecomposition hermitian_eig(const ComplexMatrix &a,
                                    double hermiticity_tol = default_tolerances().hermiticity);

// Σ λ^z P over the spectral decomposition, principal branch of λ^z for real
// positive λ. Throws NotPositiveDefinite when any eigenvalue ≤ the floor
// (this is the r_i = 0 log-singularity guard).
ComplexMatrix matrix_power_hermitian(const ComplexMatrix &a, cdouble exponent,
                                     double positivity_floor = default_tolerances().positive_definite);

// A state together with its spectral decomposition.
struct DensityState {
    ComplexMatrix rho;
    SpectralDecomposition spectral;
};

// Validates Hermiticity, unit trace and positive semidefiniteness, then
// decomposes. `require_full_rank` additionally rejects eigenvalues at or
// below the positivity floor with RankDeficientState.
DensityState make_density_state(const ComplexMatrix &rho, bool require_full_rank = false);

} // namespace qflux
