#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qflux/spectral.hpp"

namespace qflux {

// A CPTP map as a list of Kraus operators. Construction verifies the
// completeness sum Σ K†K = 1.
struct KrausChannel {
    int dim = 0;
    std::vector<ComplexMatrix> kraus;
    std::string label;
};

KrausChannel make_kraus_channel(std::vector<ComplexMatrix> kraus, std::string label = "",
                                double completeness_tol = default_tolerances().completeness);

// Σ_x K_x ρ K_x†.
ComplexMatrix apply(const KrausChannel &ch, const ComplexMatrix &rho);

// The d²×d² matrix Σ_x K_x ⊗ conj(K_x) acting on row-major vectorized
// operators.
ComplexMatrix superoperator(const KrausChannel &ch);

// Channel equality is decided on superoperators (Kraus freedom makes
// operator-list comparison meaningless): max-abs entry difference.
double superop_distance(const KrausChannel &a, const KrausChannel &b);

// ρ -> U† N(U ρ U†) U.
KrausChannel conjugate_channel(const KrausChannel &ch, const ComplexMatrix &u);

struct StationaryState {
    ComplexMatrix gamma;
    SpectralDecomposition spectral; // r_i, Π_i
    bool full_rank = false;
};

// Fixed point of the channel from the superoperator eigenproblem for the
// eigenvalue closest to 1. Throws NoFixedPoint / NonUniqueFixedPoint /
// NotPositive as the spectrum dictates.
StationaryState stationary_state(const KrausChannel &ch);

// Wraps an externally supplied γ (validates Hermiticity, trace, positivity,
// and that it actually is a fixed point of ch).
StationaryState stationary_state_from(const KrausChannel &ch, const ComplexMatrix &gamma);

enum class ChannelKind { Classical, Covariant, Incovariant };

struct ChannelClass {
    ChannelKind kind = ChannelKind::Covariant;
    // (i, j, k, l) of the first covariance-violating transition, present iff
    // kind == Incovariant.
    std::optional<std::array<int, 4>> witness;
};

// Finite amplitude criterion in the γ eigenbasis: a transition
// T_{ij→kl} = <k|N(|i><j|)|l> is compatible with covariance only when
// ln r_i - ln r_j = ln r_k - ln r_l. Classical additionally requires every
// amplitude touching an off-diagonal element to vanish.
ChannelClass check_covariance(const KrausChannel &ch, const StationaryState &gamma);

// Amplitude <k|N(|i><j|)|l> in the eigenbasis of γ.
cdouble basis_transition_amplitude(const KrausChannel &ch, const StationaryState &gamma,
                                   int i, int j, int k, int l);

// The two calibrated qubit channels. `build_incovariant` mixes the input
// with a y-axis dephaser and damping toward |0><0|; `build_covariant` mixes
// the input with the shared stationary state γ = diag((1+s)/2, (1-s)/2).
KrausChannel build_incovariant(double p, double s);
KrausChannel build_covariant(double p, double s);

} // namespace qflux
