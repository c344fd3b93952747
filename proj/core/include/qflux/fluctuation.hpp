#pragma once

#include "qflux/reversal.hpp"

namespace qflux {

enum class Direction { Forward, Reverse };

// Everything a two-point quasi-probability computation needs: the forward
// channel, its stationary state γ (r_i, Π_i), the initial state (p^I_μ, Φ^I_μ)
// and the final state ρ^F = N(ρ^I) with (p^F_ν, Φ^F_ν). All four spectra must
// be full rank: the entropy-production formula takes logs of every one.
struct ProcessContext {
    KrausChannel channel;
    StationaryState gamma;
    DensityState rho_initial;
    DensityState rho_final;
};

ProcessContext make_process_context(const KrausChannel &channel, const StationaryState &gamma,
                                    const ComplexMatrix &rho_initial);

// One (μ, ν, i, j, k, l) transition. Indices are always the forward labels;
// for reverse records the amplitude is T̃^{ν→μ}_{kl→ij}, the weight p^F_ν T̃,
// and omega the reverse-process entropy production (-ω_R, +ω_I).
struct TransitionRecord {
    int mu, nu, i, j, k, l;
    cdouble amplitude;
    cdouble omega;
    cdouble weight;
};

// Complex entropy production for one forward transition:
//   ω = ln(p^I_μ √(r_k r_l) / (p^F_ν √(r_i r_j))) + i ln(√(r_j r_l)/√(r_i r_k)).
cdouble entropy_production(const ProcessContext &ctx, int mu, int nu, int i, int j, int k, int l);
// The same formula evaluated on the reverse process's own labels; equals
// -conj(entropy_production(...)) identically.
cdouble entropy_production_reverse(const ProcessContext &ctx, int mu, int nu, int i, int j, int k,
                                   int l);

// All d_I · d² × d_F · d² forward transition amplitudes
// T^{μ→ν}_{ij→kl} = Tr[N(Π_i Φ^I_μ Π_j) Π_k Φ^F_ν Π_l], lexicographic in
// (μ, ν, i, j, k, l).
std::vector<TransitionRecord> transition_amplitudes(const ProcessContext &ctx);

struct QuasiProbAtom {
    cdouble omega;
    cdouble q;
    bool negligible = false; // |q| below the negligible threshold
};

struct QuasiProbDistribution {
    Direction direction = Direction::Forward;
    double theta = 0;     // reversal parameter (reverse direction only)
    double cluster_tol = 0;
    std::vector<QuasiProbAtom> atoms;       // in cluster-formation order
    std::vector<TransitionRecord> records;  // the un-clustered transitions
};

// δ-functions are realized by greedy clustering of exact ω values with
// max-norm tolerance `cluster_tol`, in lexicographic tuple order.
QuasiProbDistribution forward_distribution(const ProcessContext &ctx,
                                           double cluster_tol = default_tolerances().cluster);

// Atoms built from T̃^{ν→μ}_{kl→ij} = Tr[Ñ^θ(Π_k Φ^F_ν Π_l) Π_i Φ^I_μ Π_j]
// weighted by p^F_ν, positioned at the reverse-process entropy production
// -ω* (ω_R negated, ω_I kept: the conjugation in the generalized Crooks
// relation P_→(ω)/P^θ_←(-ω*) = e^{ω_R - 2iθ ω_I}).
QuasiProbDistribution reverse_distribution(const ProcessContext &ctx, double theta,
                                           double cluster_tol = default_tolerances().cluster);

struct CrooksEntry {
    cdouble omega;        // forward atom position
    cdouble forward_q;
    cdouble reverse_q;    // reverse atom at -ω*
    double log_residual;  // ln|q_f/q_r| - ω_R
    double phase_residual; // arg(q_f/q_r) + 2θω_I, wrapped into (-π, π]
};

struct CrooksReport {
    double theta = 0;
    std::vector<CrooksEntry> entries;
    double max_log_residual = 0;
    double max_phase_residual = 0;
    // Least-squares slopes over the matched atoms; NaN when the abscissa is
    // degenerate (e.g. all ω_I = 0 for a covariant channel).
    double slope_log = 0;
    double slope_phase = 0;
};

// Pairs every forward atom at ω with the reverse atom at -ω* and evaluates
// the generalized Crooks relation. Throws UnmatchedAtom if an atom with
// non-negligible weight on either side has no positional partner.
CrooksReport crooks_check(const QuasiProbDistribution &fwd, const QuasiProbDistribution &rev,
                          double theta);

// Σ q e^{-ω_R + 2iθ ω_I}; equals 1 for exact pipelines at every θ.
cdouble integral_ft(const QuasiProbDistribution &dist, double theta);

// Σ q ω = S(ρ^I‖γ) - S(ρ^F‖γ) for exact forward distributions.
cdouble average_entropy_production(const QuasiProbDistribution &dist);

// S(ρ‖γ) = Tr[ρ (ln ρ - ln γ)] in nats; γ must be full rank.
double relative_entropy(const ComplexMatrix &rho, const ComplexMatrix &gamma);
// S(ρ) = -Tr[ρ ln ρ] in nats, with 0 ln 0 = 0.
double von_neumann_entropy(const ComplexMatrix &rho);

// Sums atoms sharing ω_R: P̄(ω_R) = Σ_{ω_I} P(ω_R + iω_I). Each group sum
// must come out real; NonRealMarginal otherwise.
QuasiProbDistribution marginalize_real(const QuasiProbDistribution &dist);

} // namespace qflux
