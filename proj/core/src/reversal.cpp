#include "qflux/reversal.hpp"

#include <cmath>

namespace qflux {

namespace {

void require_reversible(const KrausChannel &ch, const StationaryState &gamma) {
    if (!gamma.full_rank)
        throw NonFullRankStationary("time reversal needs a full-rank stationary state");
    if (max_abs_diff(apply(ch, gamma.gamma), gamma.gamma) > default_tolerances().fixed_point)
        throw NotStationary("γ is not a fixed point of the forward channel");
}

} // namespace

ComplexMatrix group_unitary(const StationaryState &gamma, double theta) {
    if (!gamma.full_rank)
        throw NonFullRankStationary("group unitary needs a full-rank stationary state");
    return matrix_power_hermitian(gamma.gamma, cdouble(0, -theta));
}

KrausChannel petz_reverse(const KrausChannel &ch, const StationaryState &gamma) {
    return rotated_reverse(ch, gamma, 0.0);
}

KrausChannel rotated_reverse(const KrausChannel &ch, const StationaryState &gamma, double theta) {
    require_reversible(ch, gamma);
    const ComplexMatrix left = matrix_power_hermitian(gamma.gamma, cdouble(0.5, theta));
    const ComplexMatrix right = matrix_power_hermitian(gamma.gamma, cdouble(-0.5, -theta));
    std::vector<ComplexMatrix> ops;
    ops.reserve(ch.kraus.size());
    for (const auto &k : ch.kraus)
        ops.push_back(mul(mul(left, adjoint(k)), right));
    return make_kraus_channel(std::move(ops), ch.label + "~reverse");
}

TimeReversalReport check_time_reversal_symmetry(const KrausChannel &ch,
                                                const StationaryState &gamma, double tol) {
    if (!gamma.full_rank)
        throw NonFullRankStationary("time-reversal symmetry test needs a full-rank γ");
    const int d = ch.dim;
    const auto &r = gamma.spectral.eigenvalues;

    TimeReversalReport report;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const cdouble lhs = std::sqrt(r[i] * r[j]) *
                                        basis_transition_amplitude(ch, gamma, i, j, k, l);
                    const cdouble rhs = std::sqrt(r[k] * r[l]) *
                                        basis_transition_amplitude(ch, gamma, l, k, j, i);
                    report.max_amplitude_residual =
                        std::max(report.max_amplitude_residual, std::abs(lhs - rhs));
                }
    report.symmetric = report.max_amplitude_residual < tol;
    report.petz_superop_distance = superop_distance(petz_reverse(ch, gamma), ch);
    return report;
}

} // namespace qflux
