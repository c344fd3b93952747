#include "qflux/fluctuation.hpp"

#include <cmath>
#include <limits>

namespace qflux {

namespace {

constexpr double kRankFloor = 1e-12;

void check_spectrum_full_rank(const std::vector<double> &p, const char *who) {
    for (double x : p)
        if (x <= kRankFloor)
            throw RankDeficientState(std::string(who) + " has an eigenvalue at or below 1e-12");
}

ComplexMatrix sandwich(const ComplexMatrix &left, const ComplexMatrix &mid,
                       const ComplexMatrix &right) {
    return mul(mul(left, mid), right);
}

std::vector<QuasiProbAtom> cluster_records(const std::vector<TransitionRecord> &records,
                                           double tol) {
    std::vector<QuasiProbAtom> atoms;
    for (const auto &rec : records) {
        bool placed = false;
        for (auto &atom : atoms) {
            if (std::max(std::abs(atom.omega.real() - rec.omega.real()),
                         std::abs(atom.omega.imag() - rec.omega.imag())) <= tol) {
                atom.q += rec.weight;
                placed = true;
                break;
            }
        }
        if (!placed)
            atoms.push_back(QuasiProbAtom{rec.omega, rec.weight, false});
    }
    const double negligible = default_tolerances().negligible;
    for (auto &atom : atoms)
        atom.negligible = std::abs(atom.q) < negligible;
    return atoms;
}

void check_normalized(const std::vector<QuasiProbAtom> &atoms, const char *who) {
    cdouble total = 0;
    for (const auto &a : atoms)
        total += a.q;
    if (std::abs(total - cdouble(1, 0)) > default_tolerances().normalization)
        throw Error(std::string(who) + ": quasi-probability does not sum to 1");
}

double wrap_angle(double x) {
    // into (-π, π]
    x = std::fmod(x, 2 * M_PI);
    if (x <= -M_PI)
        x += 2 * M_PI;
    else if (x > M_PI)
        x -= 2 * M_PI;
    return x;
}

// Least-squares slope of y against x; NaN when x carries no spread.
double fit_slope(const std::vector<double> &x, const std::vector<double> &y) {
    const size_t n = x.size();
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (size_t t = 0; t < n; ++t) {
        mx += x[t];
        my += y[t];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t t = 0; t < n; ++t) {
        sxx += (x[t] - mx) * (x[t] - mx);
        sxy += (x[t] - mx) * (y[t] - my);
    }
    if (sxx < 1e-18)
        return std::numeric_limits<double>::quiet_NaN();
    return sxy / sxx;
}

} // namespace

ProcessContext make_process_context(const KrausChannel &channel, const StationaryState &gamma,
                                    const ComplexMatrix &rho_initial) {
    if (gamma.gamma.dim() != channel.dim || rho_initial.dim() != channel.dim)
        throw DimensionMismatch("process context: dimensions disagree");
    if (!gamma.full_rank)
        throw NonFullRankStationary("process context needs a full-rank stationary state");
    if (max_abs_diff(apply(channel, gamma.gamma), gamma.gamma) > default_tolerances().fixed_point)
        throw NotStationary("γ is not a fixed point of the channel");

    DensityState initial = make_density_state(rho_initial, /*require_full_rank=*/true);
    ComplexMatrix rho_f = apply(channel, rho_initial);
    rho_f = scale(0.5, add(rho_f, adjoint(rho_f))); // shed Hermiticity round-off
    DensityState final_state = make_density_state(rho_f, /*require_full_rank=*/true);
    return ProcessContext{channel, gamma, std::move(initial), std::move(final_state)};
}

cdouble entropy_production(const ProcessContext &ctx, int mu, int nu, int i, int j, int k, int l) {
    const auto &pI = ctx.rho_initial.spectral.eigenvalues;
    const auto &pF = ctx.rho_final.spectral.eigenvalues;
    const auto &r = ctx.gamma.spectral.eigenvalues;
    check_spectrum_full_rank(pI, "initial state");
    check_spectrum_full_rank(pF, "final state");
    check_spectrum_full_rank(r, "stationary state");
    const double wr = std::log(pI[mu]) - std::log(pF[nu]) +
                      0.5 * (std::log(r[k]) + std::log(r[l])) -
                      0.5 * (std::log(r[i]) + std::log(r[j]));
    const double wi =
        0.5 * (std::log(r[j]) + std::log(r[l])) - 0.5 * (std::log(r[i]) + std::log(r[k]));
    return cdouble(wr, wi);
}

cdouble entropy_production_reverse(const ProcessContext &ctx, int mu, int nu, int i, int j, int k,
                                   int l) {
    // The reverse process runs from ρ^F to the reference ρ^I with the same γ;
    // its transition (ν→μ, kl→ij) scored by the same formula.
    const auto &pI = ctx.rho_initial.spectral.eigenvalues;
    const auto &pF = ctx.rho_final.spectral.eigenvalues;
    const auto &r = ctx.gamma.spectral.eigenvalues;
    check_spectrum_full_rank(pI, "initial state");
    check_spectrum_full_rank(pF, "final state");
    check_spectrum_full_rank(r, "stationary state");
    const double wr = std::log(pF[nu]) - std::log(pI[mu]) +
                      0.5 * (std::log(r[i]) + std::log(r[j])) -
                      0.5 * (std::log(r[k]) + std::log(r[l]));
    const double wi =
        0.5 * (std::log(r[l]) + std::log(r[j])) - 0.5 * (std::log(r[k]) + std::log(r[i]));
    return cdouble(wr, wi);
}

std::vector<TransitionRecord> transition_amplitudes(const ProcessContext &ctx) {
    const int d = ctx.channel.dim;
    const auto &pI = ctx.rho_initial.spectral.eigenvalues;
    const auto &PhiI = ctx.rho_initial.spectral.projectors;
    const auto &PhiF = ctx.rho_final.spectral.projectors;
    const auto &Pi = ctx.gamma.spectral.projectors;
    check_spectrum_full_rank(pI, "initial state");
    check_spectrum_full_rank(ctx.rho_final.spectral.eigenvalues, "final state");

    std::vector<TransitionRecord> records;
    records.reserve(static_cast<size_t>(d) * d * d * d * d * d);
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const ComplexMatrix image = apply(ctx.channel, sandwich(Pi[i], PhiI[mu], Pi[j]));
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) {
                            const cdouble t = trace(mul(image, sandwich(Pi[k], PhiF[nu], Pi[l])));
                            records.push_back(TransitionRecord{
                                mu, nu, i, j, k, l, t,
                                entropy_production(ctx, mu, nu, i, j, k, l), pI[mu] * t});
                        }
                }
    return records;
}

QuasiProbDistribution forward_distribution(const ProcessContext &ctx, double cluster_tol) {
    QuasiProbDistribution dist;
    dist.direction = Direction::Forward;
    dist.cluster_tol = cluster_tol;
    dist.records = transition_amplitudes(ctx);
    dist.atoms = cluster_records(dist.records, cluster_tol);
    check_normalized(dist.atoms, "forward distribution");
    return dist;
}

QuasiProbDistribution reverse_distribution(const ProcessContext &ctx, double theta,
                                           double cluster_tol) {
    const int d = ctx.channel.dim;
    const KrausChannel reversed = rotated_reverse(ctx.channel, ctx.gamma, theta);
    const auto &pF = ctx.rho_final.spectral.eigenvalues;
    const auto &PhiI = ctx.rho_initial.spectral.projectors;
    const auto &PhiF = ctx.rho_final.spectral.projectors;
    const auto &Pi = ctx.gamma.spectral.projectors;
    check_spectrum_full_rank(ctx.rho_initial.spectral.eigenvalues, "initial state");
    check_spectrum_full_rank(pF, "final state");

    QuasiProbDistribution dist;
    dist.direction = Direction::Reverse;
    dist.theta = theta;
    dist.cluster_tol = cluster_tol;
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) {
                            const ComplexMatrix image =
                                apply(reversed, sandwich(Pi[k], PhiF[nu], Pi[l]));
                            const cdouble t = trace(mul(image, sandwich(Pi[i], PhiI[mu], Pi[j])));
                            dist.records.push_back(TransitionRecord{
                                mu, nu, i, j, k, l, t,
                                entropy_production_reverse(ctx, mu, nu, i, j, k, l), pF[nu] * t});
                        }
    dist.atoms = cluster_records(dist.records, cluster_tol);
    check_normalized(dist.atoms, "reverse distribution");
    return dist;
}

CrooksReport crooks_check(const QuasiProbDistribution &fwd, const QuasiProbDistribution &rev,
                          double theta) {
    const double tol = std::max(fwd.cluster_tol, rev.cluster_tol);
    const double negligible = default_tolerances().negligible;

    CrooksReport report;
    report.theta = theta;

    std::vector<bool> reverse_used(rev.atoms.size(), false);
    int unmatched = 0;
    std::vector<double> xs_log, ys_log, xs_phase, ys_phase;
    for (const auto &fa : fwd.atoms) {
        const cdouble target(-fa.omega.real(), fa.omega.imag()); // -ω*
        int found = -1;
        for (size_t n = 0; n < rev.atoms.size(); ++n) {
            if (std::max(std::abs(rev.atoms[n].omega.real() - target.real()),
                         std::abs(rev.atoms[n].omega.imag() - target.imag())) <= tol) {
                found = static_cast<int>(n);
                break;
            }
        }
        if (found < 0) {
            if (!fa.negligible)
                ++unmatched;
            continue;
        }
        reverse_used[found] = true;
        if (fa.negligible)
            continue;
        const cdouble qr = rev.atoms[found].q;
        if (std::abs(qr) < negligible) {
            ++unmatched; // positional partner carries no weight to divide by
            continue;
        }
        const cdouble ratio = fa.q / qr;
        CrooksEntry entry;
        entry.omega = fa.omega;
        entry.forward_q = fa.q;
        entry.reverse_q = qr;
        entry.log_residual = std::log(std::abs(ratio)) - fa.omega.real();
        entry.phase_residual = wrap_angle(std::arg(ratio) + 2 * theta * fa.omega.imag());
        report.max_log_residual = std::max(report.max_log_residual, std::abs(entry.log_residual));
        report.max_phase_residual =
            std::max(report.max_phase_residual, std::abs(entry.phase_residual));
        xs_log.push_back(fa.omega.real());
        ys_log.push_back(std::log(std::abs(ratio)));
        xs_phase.push_back(fa.omega.imag());
        ys_phase.push_back(std::arg(ratio));
        report.entries.push_back(entry);
    }
    for (size_t n = 0; n < rev.atoms.size(); ++n)
        if (!reverse_used[n] && !rev.atoms[n].negligible)
            ++unmatched;
    if (unmatched > 0)
        throw UnmatchedAtom("crooks_check: " + std::to_string(unmatched) +
                            " non-negligible atom(s) without a partner at -ω*");

    report.slope_log = fit_slope(xs_log, ys_log);
    report.slope_phase = fit_slope(xs_phase, ys_phase);
    return report;
}

cdouble integral_ft(const QuasiProbDistribution &dist, double theta) {
    cdouble total = 0;
    if (!dist.records.empty()) {
        for (const auto &rec : dist.records)
            total += rec.weight * std::exp(cdouble(-rec.omega.real(), 2 * theta * rec.omega.imag()));
    } else {
        for (const auto &atom : dist.atoms)
            total += atom.q * std::exp(cdouble(-atom.omega.real(), 2 * theta * atom.omega.imag()));
    }
    return total;
}

cdouble average_entropy_production(const QuasiProbDistribution &dist) {
    cdouble total = 0;
    if (!dist.records.empty()) {
        for (const auto &rec : dist.records)
            total += rec.weight * rec.omega;
    } else {
        for (const auto &atom : dist.atoms)
            total += atom.q * atom.omega;
    }
    return total;
}

double relative_entropy(const ComplexMatrix &rho, const ComplexMatrix &gamma) {
    const SpectralDecomposition sg = hermitian_eig(gamma);
    if (sg.eigenvalues.back() <= kRankFloor)
        throw NonFullRankStationary("relative entropy reference state must be full rank");
    const SpectralDecomposition sr = hermitian_eig(rho);

    double value = 0;
    for (double p : sr.eigenvalues) {
        if (p < -1e-10)
            throw NotPositive("relative entropy of a non-positive state");
        if (p > 0)
            value += p * std::log(p);
    }
    for (size_t n = 0; n < sg.eigenvalues.size(); ++n)
        value -= trace(mul(rho, sg.projectors[n])).real() * std::log(sg.eigenvalues[n]);
    return value;
}

double von_neumann_entropy(const ComplexMatrix &rho) {
    const SpectralDecomposition sd = hermitian_eig(rho);
    double value = 0;
    for (double p : sd.eigenvalues) {
        if (p < -1e-10)
            throw NotPositive("entropy of a non-positive state");
        if (p > 0)
            value -= p * std::log(p);
    }
    return value;
}

QuasiProbDistribution marginalize_real(const QuasiProbDistribution &dist) {
    QuasiProbDistribution out;
    out.direction = dist.direction;
    out.theta = dist.theta;
    out.cluster_tol = dist.cluster_tol;

    for (const auto &atom : dist.atoms) {
        bool placed = false;
        for (auto &m : out.atoms) {
            if (std::abs(m.omega.real() - atom.omega.real()) <= dist.cluster_tol) {
                m.q += atom.q;
                placed = true;
                break;
            }
        }
        if (!placed)
            out.atoms.push_back(QuasiProbAtom{cdouble(atom.omega.real(), 0), atom.q, false});
    }
    for (auto &m : out.atoms) {
        if (std::abs(m.q.imag()) > default_tolerances().residual)
            throw NonRealMarginal("imaginary parts fail to cancel at ω_R = " +
                                  std::to_string(m.omega.real()));
        m.q = cdouble(m.q.real(), 0);
        m.negligible = std::abs(m.q) < default_tolerances().negligible;
    }
    return out;
}

} // namespace qflux
