#include "qflux/channel.hpp"

#include <cmath>

namespace qflux {

KrausChannel make_kraus_channel(std::vector<ComplexMatrix> kraus, std::string label,
                                double completeness_tol) {
    if (kraus.empty())
        throw InvalidChannel("channel needs at least one Kraus operator");
    const int d = kraus.front().dim();
    ComplexMatrix sum(d);
    for (const auto &k : kraus) {
        if (k.dim() != d)
            throw DimensionMismatch("Kraus operators differ in dimension");
        sum = sum + mul(adjoint(k), k);
    }
    if (max_abs_diff(sum, identity(d)) > completeness_tol)
        throw InvalidChannel("Kraus completeness sum deviates from identity: " + label);
    return KrausChannel{d, std::move(kraus), std::move(label)};
}

ComplexMatrix apply(const KrausChannel &ch, const ComplexMatrix &rho) {
    if (rho.dim() != ch.dim)
        throw DimensionMismatch("apply: state dimension does not match channel");
    ComplexMatrix out(ch.dim);
    for (const auto &k : ch.kraus)
        out = out + mul(mul(k, rho), adjoint(k));
    return out;
}

ComplexMatrix superoperator(const KrausChannel &ch) {
    ComplexMatrix s(ch.dim * ch.dim);
    for (const auto &k : ch.kraus)
        s = s + kron(k, conjugate(k));
    return s;
}

double superop_distance(const KrausChannel &a, const KrausChannel &b) {
    return max_abs_diff(superoperator(a), superoperator(b));
}

KrausChannel conjugate_channel(const KrausChannel &ch, const ComplexMatrix &u) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(ch.kraus.size());
    const ComplexMatrix udag = adjoint(u);
    for (const auto &k : ch.kraus)
        ops.push_back(mul(mul(udag, k), u));
    return make_kraus_channel(std::move(ops), ch.label + "+conj");
}

namespace {

StationaryState finish_stationary(const KrausChannel &ch, ComplexMatrix gamma) {
    // Hermitize and normalize the candidate, then run the full battery of
    // checks the StationaryState invariants demand.
    gamma = scale(0.5, add(gamma, adjoint(gamma)));
    const double tr = trace(gamma).real();
    if (std::abs(tr) < 1e-8)
        throw NoFixedPoint("fixed-point candidate has vanishing trace");
    gamma = scale(1.0 / tr, gamma);

    StationaryState st;
    st.spectral = hermitian_eig(gamma);
    for (double r : st.spectral.eigenvalues)
        if (r < -1e-8)
            throw NotPositive("fixed-point candidate is not positive semidefinite");
    st.gamma = std::move(gamma);
    st.full_rank = st.spectral.eigenvalues.back() > default_tolerances().positive_definite;
    if (max_abs_diff(apply(ch, st.gamma), st.gamma) > default_tolerances().fixed_point)
        throw NoFixedPoint("candidate does not satisfy N(γ) = γ within tolerance");
    return st;
}

} // namespace

StationaryState stationary_state(const KrausChannel &ch) {
    const ComplexMatrix s = superoperator(ch);
    const int n = s.dim();
    ComplexMatrix m = sub(s, identity(n));
    // Singular structure of S - 1 via the Hermitian Gram matrix M†M. The Gram
    // eigenvalues square the singular values and bottom out at solver
    // round-off, so each candidate direction is scored by the directly
    // evaluated residual |(S - 1)v| instead.
    const ComplexMatrix gram = mul(adjoint(m), m);
    const SpectralDecomposition sd = hermitian_eig(gram);

    const double tol = default_tolerances().eigenvalue_one;
    int multiplicity = 0;
    int best = -1;
    double best_residual = 0;
    for (int idx = 0; idx < n; ++idx) {
        const std::vector<cdouble> mv = mat_vec(m, sd.vectors[idx]);
        double residual = 0;
        for (const auto &x : mv)
            residual += std::norm(x);
        residual = std::sqrt(residual);
        if (residual < tol) {
            ++multiplicity;
            if (best < 0 || residual < best_residual) {
                best = idx;
                best_residual = residual;
            }
        }
    }
    if (multiplicity == 0)
        throw NoFixedPoint("no superoperator eigenvalue within tolerance of 1");
    if (multiplicity > 1)
        throw NonUniqueFixedPoint("superoperator has " + std::to_string(multiplicity) +
                                      " eigenvalues within tolerance of 1",
                                  multiplicity);

    return finish_stationary(ch, unvec_row_major(sd.vectors[best], ch.dim));
}

StationaryState stationary_state_from(const KrausChannel &ch, const ComplexMatrix &gamma) {
    if (gamma.dim() != ch.dim)
        throw DimensionMismatch("gamma dimension does not match channel");
    if (!is_hermitian(gamma))
        throw NotHermitian("supplied stationary state is not Hermitian");
    return finish_stationary(ch, gamma);
}

cdouble basis_transition_amplitude(const KrausChannel &ch, const StationaryState &gamma,
                                   int i, int j, int k, int l) {
    const int d = ch.dim;
    const auto &vecs = gamma.spectral.vectors;
    ComplexMatrix eij(d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            eij(r, c) = vecs[i][r] * std::conj(vecs[j][c]);
    const ComplexMatrix img = apply(ch, eij);
    cdouble amp = 0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            amp += std::conj(vecs[k][r]) * img(r, c) * vecs[l][c];
    return amp;
}

ChannelClass check_covariance(const KrausChannel &ch, const StationaryState &gamma) {
    if (!gamma.full_rank)
        throw NonFullRankStationary("covariance classification needs a full-rank stationary state");
    const int d = ch.dim;
    const auto &r = gamma.spectral.eigenvalues;
    const double amp_tol = default_tolerances().amplitude;
    const double log_tol = default_tolerances().log_ratio;

    bool coherence = false;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    const cdouble t = basis_transition_amplitude(ch, gamma, i, j, k, l);
                    if (std::abs(t) <= amp_tol)
                        continue;
                    const double mismatch =
                        std::log(r[i]) - std::log(r[j]) - std::log(r[k]) + std::log(r[l]);
                    if (std::abs(mismatch) > log_tol)
                        return ChannelClass{ChannelKind::Incovariant,
                                            std::array<int, 4>{i, j, k, l}};
                    if (i != j || k != l)
                        coherence = true;
                }
    return ChannelClass{coherence ? ChannelKind::Covariant : ChannelKind::Classical, std::nullopt};
}

KrausChannel build_incovariant(double p, double s) {
    if (p < 0 || p > 1 || s < 0 || s > 1)
        throw ParameterOutOfRange("build_incovariant: p and s must lie in [0, 1]");
    const double c = std::sqrt(1 - p) * std::sqrt(1 - s) / 2;
    const double d = std::sqrt(1 - p) * std::sqrt(s);
    std::vector<ComplexMatrix> ops = {
        std::sqrt(p) * identity(2),
        c * ComplexMatrix{{1, 1}, {-1, 1}},  // ±π/2 y-rotation pair
        c * ComplexMatrix{{1, -1}, {1, 1}},
        d * ComplexMatrix{{0, 1}, {0, 0}},   // damping toward |0><0|
        d * ComplexMatrix{{1, 0}, {0, 0}},
    };
    return make_kraus_channel(std::move(ops), "incovariant", 1e-12);
}

KrausChannel build_covariant(double p, double s) {
    if (p < 0 || p > 1 || s < 0 || s > 1)
        throw ParameterOutOfRange("build_covariant: p and s must lie in [0, 1]");
    const double a = std::sqrt((1 - p) * (1 + s) / 2);
    const double b = std::sqrt((1 - p) * (1 - s) / 2);
    std::vector<ComplexMatrix> ops = {
        std::sqrt(p) * identity(2),
        a * ComplexMatrix{{1, 0}, {0, 0}},
        b * ComplexMatrix{{0, 0}, {1, 0}},
        a * ComplexMatrix{{0, 1}, {0, 0}},
        b * ComplexMatrix{{0, 0}, {0, 1}},
    };
    return make_kraus_channel(std::move(ops), "covariant", 1e-12);
}

} // namespace qflux
