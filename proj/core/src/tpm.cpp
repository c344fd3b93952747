#include "qflux/tpm.hpp"

#include <cmath>

namespace qflux {

namespace {

const cdouble kI(0, 1);

// c^{ij}_r over r = 1..4, from the Methods operator identity.
const cdouble kCoeff[2][2][4] = {
    {{2, 0, 0, 0}, {cdouble(-1, -1), cdouble(-1, -1), 2, cdouble(0, 2)}},
    {{cdouble(-1, 1), cdouble(-1, 1), 2, cdouble(0, -2)}, {0, 2, 0, 0}},
};

std::vector<ComplexMatrix> l_operators(const StationaryState &gamma) {
    const auto &Pi = gamma.spectral.projectors;
    const ComplexMatrix phase_gate = add(Pi[0], scale(kI, Pi[1])); // S in the γ eigenbasis
    return {
        scale(1.0 / std::sqrt(2.0), Pi[0]),
        scale(1.0 / std::sqrt(2.0), Pi[1]),
        scale(0.5, identity(2)),
        scale(0.5, phase_gate),
    };
}

void check_protocol_completeness(const std::vector<ComplexMatrix> &ops, const char *which) {
    ComplexMatrix sum(ops.front().dim());
    for (const auto &m : ops)
        sum = sum + mul(adjoint(m), m);
    if (max_abs_diff(sum, identity(sum.dim())) > default_tolerances().protocol_completeness)
        throw CompletenessViolation(std::string(which) +
                                    " measurement set fails Σ M†M = 1; check eigenprojectors");
}

} // namespace

cdouble coefficient_c(int i, int j, int r) {
    if (i < 0 || i > 1 || j < 0 || j > 1 || r < 1 || r > 4)
        throw ParameterOutOfRange("coefficient_c: indices out of the qubit table");
    return kCoeff[i][j][r - 1];
}

MeasurementProtocol make_protocol(Direction direction, std::vector<ComplexMatrix> first,
                                  std::vector<ComplexMatrix> second) {
    if (first.size() != 8 || second.size() != 8)
        throw ParameterOutOfRange("protocol needs 8 + 8 operators");
    check_protocol_completeness(first, "first");
    check_protocol_completeness(second, "second");
    return MeasurementProtocol{direction, std::move(first), std::move(second)};
}

MeasurementProtocol build_protocol(const ProcessContext &ctx, Direction direction) {
    if (ctx.channel.dim != 2)
        throw UnsupportedDimension("the two-point protocol tables are qubit-specific");
    const auto L = l_operators(ctx.gamma);
    const auto &PhiI = ctx.rho_initial.spectral.projectors;
    const auto &PhiF = ctx.rho_final.spectral.projectors;
    // Forward: M_(μ,r) = L_r Φ^I_μ, M'_(ν,s) = Φ^F_ν L_s. Reverse swaps the
    // spectral projectors and runs from ρ^F.
    const auto &first_proj = (direction == Direction::Forward) ? PhiI : PhiF;
    const auto &second_proj = (direction == Direction::Forward) ? PhiF : PhiI;

    std::vector<ComplexMatrix> first, second;
    first.reserve(8);
    second.reserve(8);
    for (int a = 0; a < 2; ++a)
        for (int r = 0; r < 4; ++r)
            first.push_back(mul(L[r], first_proj[a]));
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 4; ++s)
            second.push_back(mul(second_proj[b], L[s]));
    return make_protocol(direction, std::move(first), std::move(second));
}

JointDistribution joint_distribution(const MeasurementProtocol &proto, const ProcessContext &ctx,
                                     const KrausChannel &channel) {
    if (channel.dim != ctx.channel.dim)
        throw DimensionMismatch("joint distribution: channel dimension mismatch");
    const ComplexMatrix &rho =
        (proto.direction == Direction::Forward) ? ctx.rho_initial.rho : ctx.rho_final.rho;

    JointDistribution joint;
    double total = 0;
    for (int m = 0; m < 8; ++m) {
        const ComplexMatrix pre =
            mul(mul(proto.first[m], rho), adjoint(proto.first[m]));
        const ComplexMatrix evolved = apply(channel, pre);
        for (int mp = 0; mp < 8; ++mp) {
            const double p =
                trace(mul(mul(proto.second[mp], evolved), adjoint(proto.second[mp]))).real();
            if (p < default_tolerances().joint_negative)
                throw NotPositive("joint probability below the negative-noise floor");
            joint.probs[static_cast<size_t>(m) * 8 + mp] = p;
            total += p;
        }
    }
    if (std::abs(total - 1.0) > 1e-10)
        throw Error("joint distribution does not sum to 1");
    return joint;
}

QuasiProbDistribution reconstruct(const JointDistribution &joint, const ProcessContext &ctx,
                                  Direction direction, double theta) {
    if (ctx.channel.dim != 2)
        throw UnsupportedDimension("the two-point protocol tables are qubit-specific");
    const auto &pI = ctx.rho_initial.spectral.eigenvalues;
    const auto &pF = ctx.rho_final.spectral.eigenvalues;
    for (double p : pI)
        if (p <= 1e-12)
            throw RankDeficientState("initial state is rank deficient");
    for (double p : pF)
        if (p <= 1e-12)
            throw RankDeficientState("final state is rank deficient");

    QuasiProbDistribution dist;
    dist.direction = direction;
    dist.theta = (direction == Direction::Reverse) ? theta : 0.0;
    dist.cluster_tol = default_tolerances().cluster;

    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l) {
                            cdouble weight = 0;
                            if (direction == Direction::Forward) {
                                // p^I_μ T^{μ→ν}_{ij→kl} = Σ_{r,s} c^{ij}_r c^{lk}_s P((μ,r),(ν,s))
                                for (int r = 1; r <= 4; ++r)
                                    for (int s = 1; s <= 4; ++s)
                                        weight += coefficient_c(i, j, r) * coefficient_c(l, k, s) *
                                                  joint.probs[static_cast<size_t>(4 * mu + r - 1) *
                                                                  8 +
                                                              (4 * nu + s - 1)];
                            } else {
                                // p^F_ν T̃^{ν→μ}_{kl→ij} = Σ_{r,s} c^{kl}_r c^{ji}_s P̃((ν,r),(μ,s))
                                for (int r = 1; r <= 4; ++r)
                                    for (int s = 1; s <= 4; ++s)
                                        weight += coefficient_c(k, l, r) * coefficient_c(j, i, s) *
                                                  joint.probs[static_cast<size_t>(4 * nu + r - 1) *
                                                                  8 +
                                                              (4 * mu + s - 1)];
                            }
                            const cdouble omega =
                                (direction == Direction::Forward)
                                    ? entropy_production(ctx, mu, nu, i, j, k, l)
                                    : entropy_production_reverse(ctx, mu, nu, i, j, k, l);
                            const cdouble amplitude =
                                (direction == Direction::Forward)
                                    ? weight / pI[mu]
                                    : weight / pF[nu];
                            dist.records.push_back(
                                TransitionRecord{mu, nu, i, j, k, l, amplitude, omega, weight});
                        }

    // Shared clustering path: greedy max-norm merge in lexicographic order.
    for (const auto &rec : dist.records) {
        bool placed = false;
        for (auto &atom : dist.atoms) {
            if (std::max(std::abs(atom.omega.real() - rec.omega.real()),
                         std::abs(atom.omega.imag() - rec.omega.imag())) <= dist.cluster_tol) {
                atom.q += rec.weight;
                placed = true;
                break;
            }
        }
        if (!placed)
            dist.atoms.push_back(QuasiProbAtom{rec.omega, rec.weight, false});
    }
    cdouble mass = 0;
    for (auto &atom : dist.atoms) {
        atom.negligible = std::abs(atom.q) < default_tolerances().negligible;
        mass += atom.q;
    }
    if (!joint.shots && std::abs(mass - cdouble(1, 0)) > default_tolerances().mass_leakage)
        throw InconsistentContext("reconstructed mass leaks: |Σq - 1| = " +
                                  std::to_string(std::abs(mass - cdouble(1, 0))));
    return dist;
}

JointDistribution sample_joint(const JointDistribution &exact, uint64_t shots, uint64_t seed) {
    if (exact.shots)
        throw ParameterOutOfRange("sample_joint needs an exact joint distribution");
    if (shots == 0)
        throw ParameterOutOfRange("shots must be at least 1");

    std::vector<double> weights(exact.probs.begin(), exact.probs.end());
    for (double &w : weights) {
        if (w < default_tolerances().joint_negative)
            throw NotPositive("joint probability below the negative-noise floor");
        w = std::max(w, 0.0); // clamp round-off negatives, then renormalize
    }
    CounterRng rng(seed);
    const std::vector<uint64_t> counts = multinomial_counts(weights, shots, rng);

    JointDistribution sampled;
    sampled.shots = shots;
    for (size_t n = 0; n < counts.size(); ++n)
        sampled.probs[n] = static_cast<double>(counts[n]) / static_cast<double>(shots);
    return sampled;
}

} // namespace qflux
