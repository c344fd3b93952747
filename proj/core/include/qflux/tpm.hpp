#pragma once

#include <array>
#include <optional>

#include "qflux/fluctuation.hpp"
#include "qflux/rng.hpp"

namespace qflux {

// The two ordered generalized-measurement operator sets of the two-point
// protocol. Outcomes are linearized as m = 4μ + (r-1) for the first
// measurement (M_m = L_r Φ^I_μ) and m' = 4ν + (s-1) for the second
// (M'_{m'} = Φ^F_ν L_s), with L_1 = Π_0/√2, L_2 = Π_1/√2, L_3 = 1/2,
// L_4 = S/2 and S = Π_0 + iΠ_1 in the γ eigenbasis. For the reverse protocol
// the roles of Φ^I and Φ^F are exchanged.
struct MeasurementProtocol {
    Direction direction = Direction::Forward;
    std::vector<ComplexMatrix> first;  // 8 operators, index m
    std::vector<ComplexMatrix> second; // 8 operators, index m'
};

// Qubit-only (the L_r set and the coefficient tables are d = 2 specific);
// UnsupportedDimension otherwise. CompletenessViolation when Σ M†M strays
// from the identity, which signals an eigenprojector bug upstream.
MeasurementProtocol build_protocol(const ProcessContext &ctx,
                                   Direction direction = Direction::Forward);

// Raw operator-set constructor with the same completeness validation.
MeasurementProtocol make_protocol(Direction direction, std::vector<ComplexMatrix> first,
                                  std::vector<ComplexMatrix> second);

// Joint outcome distribution P(m, m') = Tr[M'_{m'} N(M_m ρ M_m†) M'†_{m'}].
// `shots` is empty for exact distributions, set by `sample_joint`.
struct JointDistribution {
    std::array<double, 64> probs{}; // row-major in (m, m')
    std::optional<uint64_t> shots;
};

// `channel` is the forward channel for a forward protocol or a reversal-family
// member for the backward protocol; the input state is ρ^I or ρ^F accordingly.
JointDistribution joint_distribution(const MeasurementProtocol &proto, const ProcessContext &ctx,
                                     const KrausChannel &channel);

// The hard-coded reconstruction coefficients c^{ij}_r of the operator
// identity Π_i A Π_j = Σ_r c^{ij}_r L_r A L_r† (and, with c^{ji}, of the
// L†-sandwich variant).
cdouble coefficient_c(int i, int j, int r);

// Linear reconstruction P(ω) = Σ_{m,m'} α^ω_{mm'} P(m,m'), clustered exactly
// like the direct pipeline. In exact mode (no shots) the result matches the
// direct distribution atomwise; reconstructed mass straying from 1 by more
// than the leakage tolerance raises InconsistentContext.
//
// `theta` only labels reverse-direction output (the joint must already have
// been produced with the matching reversal member).
QuasiProbDistribution reconstruct(const JointDistribution &joint, const ProcessContext &ctx,
                                  Direction direction = Direction::Forward, double theta = 0.0);

// Multinomial emulation of photon-counting statistics: a single global draw
// over the 64 outcomes, deterministic in (seed, shots). Exact probabilities
// below the negative-noise floor are clamped and the table renormalized
// before sampling.
JointDistribution sample_joint(const JointDistribution &exact, uint64_t shots, uint64_t seed);

} // namespace qflux
