#pragma once

namespace qflux {

// Every numeric threshold used by the library, in one place. Individual
// operations take the relevant entry as a defaulted parameter, so callers can
// tighten or relax a single check without touching the rest.
struct Tolerances {
    double hermiticity = 1e-9;       // max |A - A†| entry accepted as Hermitian
    double degeneracy_gap = 1e-8;    // eigenvalue gap below which spectra are flagged degenerate
    double positive_definite = 1e-12; // eigenvalue floor for matrix powers / full rank
    double matrix_equality = 1e-10;  // default entrywise matrix comparison
    double completeness = 1e-9;      // |Σ K†K - 1| for channel construction
    double fixed_point = 1e-8;       // |N(γ) - γ| for stationarity checks
    double eigenvalue_one = 1e-9;    // |λ - 1| window for superoperator fixed points
    double superop_equality = 1e-9;  // channel equality as superoperator distance
    double amplitude = 1e-10;        // transition-amplitude magnitude threshold (classifier)
    double log_ratio = 1e-9;        // |ln r_i - ln r_j - ln r_k + ln r_l| covariance window
    double cluster = 1e-9;          // quasi-probability ω clustering (max-norm)
    double negligible = 1e-12;      // atom weights below this are flagged negligible
    double normalization = 1e-9;    // |Σ q - 1| for exact distributions
    double residual = 1e-9;         // fluctuation-theorem residuals (Crooks)
    double integral_residual = 1e-10; // |Σ q e^{-ω_R+2iθω_I} - 1|
    double protocol_completeness = 1e-10; // measurement-operator completeness
    double joint_negative = -1e-12;  // most negative joint probability tolerated
    double mass_leakage = 1e-8;      // |Σ q - 1| for exact TPM reconstruction
};

inline const Tolerances &default_tolerances() {
    static const Tolerances t{};
    return t;
}

} // namespace qflux
