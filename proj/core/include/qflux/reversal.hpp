#pragma once

#include "qflux/channel.hpp"

namespace qflux {

// U_γ(θ) = e^{-iθ ln γ} = γ^{-iθ}; unitary for full-rank γ.
ComplexMatrix group_unitary(const StationaryState &gamma, double theta);

// Petz time-reversal: Kraus operators γ^{1/2} K† γ^{-1/2}. Requires γ full
// rank and a fixed point of ch (checked).
KrausChannel petz_reverse(const KrausChannel &ch, const StationaryState &gamma);

// θ-rotated member of the reversal family: γ^{1/2+iθ} K† γ^{-1/2-iθ}.
// rotated_reverse(ch, γ, 0) is petz_reverse(ch, γ) exactly.
KrausChannel rotated_reverse(const KrausChannel &ch, const StationaryState &gamma, double theta);

// The θ-parameterized family of time-reversal channels of a fixed forward
// process. Every member has γ as a fixed point; all members coincide iff the
// forward channel is covariant.
struct ReversalFamily {
    KrausChannel forward;
    StationaryState gamma;

    KrausChannel member(double theta) const { return rotated_reverse(forward, gamma, theta); }
};

struct TimeReversalReport {
    bool symmetric = false;          // amplitude-ratio condition holds everywhere
    double max_amplitude_residual = 0; // worst |√(r_i r_j) T_{ij→kl} - √(r_k r_l) T_{lk→ji}|
    double petz_superop_distance = 0;  // cross-check: distance(petz_reverse(ch), ch)
};

// Tests √(r_i r_j) T_{ij→kl} = √(r_k r_l) T_{lk→ji} over all index tuples.
TimeReversalReport check_time_reversal_symmetry(const KrausChannel &ch,
                                                const StationaryState &gamma,
                                                double tol = default_tolerances().residual);

} // namespace qflux
