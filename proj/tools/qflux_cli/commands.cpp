#include "qflux_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qflux/fluctuation.hpp"
#include "qflux/reversal.hpp"
#include "qflux/tpm.hpp"
#include "qflux/version.hpp"

namespace qflux::cli {

namespace {

using nlohmann::json;

std::string file_header(const ExperimentConfig &config) {
    return std::string("# qflux ") + version_string + " config=" + config.config_hash + "\n";
}

void write_text_file(const ExperimentConfig &config, const std::string &name,
                     const std::string &body) {
    if (config.out_dir.empty())
        return;
    std::filesystem::create_directories(config.out_dir);
    std::ofstream out(std::filesystem::path(config.out_dir) / name, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write to output directory: " + config.out_dir);
    out << body;
}

void write_json_report(const ExperimentConfig &config, const std::string &name, json report) {
    report["tool_version"] = version_string;
    report["config_hash"] = config.config_hash;
    write_text_file(config, name, report.dump(2) + "\n");
}

json atom_record(const QuasiProbAtom &atom) {
    return json{{"omega_re", atom.omega.real()},
                {"omega_im", atom.omega.imag()},
                {"q_re", atom.q.real()},
                {"q_im", atom.q.imag()},
                {"negligible", atom.negligible}};
}

std::vector<QuasiProbAtom> sorted_support(const QuasiProbDistribution &dist) {
    std::vector<QuasiProbAtom> atoms;
    for (const auto &a : dist.atoms)
        if (!a.negligible)
            atoms.push_back(a);
    std::sort(atoms.begin(), atoms.end(), [](const QuasiProbAtom &x, const QuasiProbAtom &y) {
        if (x.omega.real() != y.omega.real())
            return x.omega.real() < y.omega.real();
        return x.omega.imag() < y.omega.imag();
    });
    return atoms;
}

std::string distribution_csv(const ExperimentConfig &config, const QuasiProbDistribution &dist) {
    std::string body = file_header(config) + "omega_re,omega_im,q_re,q_im\n";
    for (const auto &a : sorted_support(dist))
        body += format17(a.omega.real()) + "," + format17(a.omega.imag()) + "," +
                format17(a.q.real()) + "," + format17(a.q.imag()) + "\n";
    return body;
}

std::string marginal_csv(const ExperimentConfig &config, const QuasiProbDistribution &marginal) {
    std::string body = file_header(config) + "omega_re,q\n";
    for (const auto &a : sorted_support(marginal))
        body += format17(a.omega.real()) + "," + format17(a.q.real()) + "\n";
    return body;
}

ProcessContext make_context(const ExperimentConfig &config) {
    const ResolvedChannel rc = resolve_channel(config);
    return make_process_context(rc.channel, rc.gamma, config.rho_initial);
}

// Linear fit helper mirrored from the library report (kept here for the
// sweep command's stdout summary).
bool finite(double v) { return std::isfinite(v); }

} // namespace

std::string format17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

int cmd_stationary(const ExperimentConfig &config, std::ostream &out) {
    const ResolvedChannel rc = resolve_channel(config);
    const auto &st = rc.gamma;

    out << "stationary state of channel '" << rc.channel.label << "'\n";
    for (int r = 0; r < st.gamma.dim(); ++r) {
        for (int c = 0; c < st.gamma.dim(); ++c)
            out << "  gamma[" << r << "][" << c << "] = " << format17(st.gamma(r, c).real())
                << (st.gamma(r, c).imag() < 0 ? " - " : " + ")
                << format17(std::abs(st.gamma(r, c).imag())) << "i\n";
    }
    json eigs = json::array();
    for (size_t n = 0; n < st.spectral.eigenvalues.size(); ++n) {
        out << "  r_" << n << " = " << format17(st.spectral.eigenvalues[n]) << "\n";
        eigs.push_back(st.spectral.eigenvalues[n]);
    }
    out << "  full_rank = " << (st.full_rank ? "true" : "false") << "\n";

    json gamma_entries = json::array();
    for (const auto &e : st.gamma.entries())
        gamma_entries.push_back(json::array({e.real(), e.imag()}));
    write_json_report(config, "stationary.json",
                      json{{"channel", rc.channel.label},
                           {"gamma", gamma_entries},
                           {"eigenvalues", eigs},
                           {"full_rank", st.full_rank}});
    return 0;
}

int cmd_distribution(const ExperimentConfig &config, const std::string &direction,
                     std::ostream &out) {
    if (direction != "forward" && direction != "reverse")
        throw ConfigError("direction must be 'forward' or 'reverse'");
    const ProcessContext ctx = make_context(config);
    const bool forward = direction == "forward";
    const double theta = config.theta_single;
    const QuasiProbDistribution dist = forward
                                           ? forward_distribution(ctx, config.cluster_tol)
                                           : reverse_distribution(ctx, theta, config.cluster_tol);
    const QuasiProbDistribution marginal = marginalize_real(dist);

    write_text_file(config, "distribution_" + direction + ".csv", distribution_csv(config, dist));
    write_text_file(config, "marginal_" + direction + ".csv", marginal_csv(config, marginal));

    json atoms = json::array();
    for (const auto &a : dist.atoms)
        atoms.push_back(atom_record(a));
    write_json_report(config, "distribution_" + direction + ".json",
                      json{{"direction", direction},
                           {"theta", forward ? 0.0 : theta},
                           {"atoms", atoms}});

    out << "direction " << direction;
    if (!forward)
        out << " (theta = " << format17(theta) << ")";
    out << ": " << sorted_support(dist).size() << " atoms on support, "
        << dist.atoms.size() << " clusters total\n";
    for (const auto &a : sorted_support(dist))
        out << "  omega = (" << format17(a.omega.real()) << ", " << format17(a.omega.imag())
            << ")  q = (" << format17(a.q.real()) << ", " << format17(a.q.imag()) << ")\n";
    return 0;
}

namespace {

int verify_crooks(const ExperimentConfig &config, const ProcessContext &ctx, std::ostream &out,
                  json &report) {
    const QuasiProbDistribution fwd = forward_distribution(ctx, config.cluster_tol);
    std::vector<double> thetas = config.theta_single_set
                                     ? std::vector<double>{config.theta_single}
                                     : std::vector<double>{0.0, -M_PI / 8, -M_PI / 4};
    bool ok = true;
    json rows = json::array();
    for (double theta : thetas) {
        const QuasiProbDistribution rev = reverse_distribution(ctx, theta, config.cluster_tol);
        const CrooksReport cr = crooks_check(fwd, rev, theta);
        const bool pass = cr.max_log_residual < config.residual_tol &&
                          cr.max_phase_residual < config.residual_tol;
        ok = ok && pass;
        rows.push_back(json{{"theta", theta},
                            {"max_log_residual", cr.max_log_residual},
                            {"max_phase_residual", cr.max_phase_residual},
                            {"slope_log", finite(cr.slope_log) ? json(cr.slope_log) : json()},
                            {"slope_phase",
                             finite(cr.slope_phase) ? json(cr.slope_phase) : json()},
                            {"matched_atoms", cr.entries.size()},
                            {"pass", pass}});
        out << "crooks theta=" << format17(theta)
            << " max|ln ratio - w_R|=" << format17(cr.max_log_residual)
            << " max|arg + 2*theta*w_I|=" << format17(cr.max_phase_residual)
            << (pass ? " PASS" : " FAIL") << "\n";
    }
    report["checks"] = rows;
    return ok ? 0 : 2;
}

int verify_integral(const ExperimentConfig &config, const ProcessContext &ctx, std::ostream &out,
                    json &report) {
    const QuasiProbDistribution fwd = forward_distribution(ctx, config.cluster_tol);
    double max_residual = 0;
    for (double theta : config.thetas)
        max_residual =
            std::max(max_residual, std::abs(integral_ft(fwd, theta) - cdouble(1, 0)));
    const bool ok = max_residual < config.integral_tol;
    report["theta_points"] = config.thetas.size();
    report["max_residual"] = max_residual;
    report["pass"] = ok;
    out << "integral FT over " << config.thetas.size()
        << " theta points: max |sum - 1| = " << format17(max_residual)
        << (ok ? " PASS" : " FAIL") << "\n";
    return ok ? 0 : 2;
}

int verify_secondlaw(const ExperimentConfig &config, const ProcessContext &ctx, std::ostream &out,
                     json &report) {
    const QuasiProbDistribution fwd = forward_distribution(ctx, config.cluster_tol);
    const cdouble avg = average_entropy_production(fwd);
    const double expected = relative_entropy(ctx.rho_initial.rho, ctx.gamma.gamma) -
                            relative_entropy(ctx.rho_final.rho, ctx.gamma.gamma);
    const bool ok = avg.real() >= -1e-10 && std::abs(avg.imag()) < 1e-10 &&
                    std::abs(avg.real() - expected) < config.residual_tol;
    report["average_re"] = avg.real();
    report["average_im"] = avg.imag();
    report["relative_entropy_difference"] = expected;
    report["pass"] = ok;
    out << "average entropy production = " << format17(avg.real()) << " (im "
        << format17(avg.imag()) << "), S(rho_I||gamma) - S(rho_F||gamma) = " << format17(expected)
        << (ok ? " PASS" : " FAIL") << "\n";
    return ok ? 0 : 2;
}

int verify_marginals(const ExperimentConfig &config, const ProcessContext &ctx, std::ostream &out,
                     json &report) {
    const int d = ctx.channel.dim;
    const auto records = transition_amplitudes(ctx);

    // Σ_{ijkl} T = Tr[N(Φ^I_μ) Φ^F_ν] and Σ_{μνjl} T = Tr[N(Π_i) Π_k].
    double identity_residual = 0;
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) {
            cdouble total = 0;
            for (const auto &rec : records)
                if (rec.mu == mu && rec.nu == nu)
                    total += rec.amplitude;
            const cdouble direct =
                trace(mul(apply(ctx.channel, ctx.rho_initial.spectral.projectors[mu]),
                          ctx.rho_final.spectral.projectors[nu]));
            identity_residual = std::max(identity_residual, std::abs(total - direct));
        }
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            cdouble total = 0;
            for (const auto &rec : records)
                if (rec.i == i && rec.k == k)
                    total += rec.amplitude;
            const cdouble direct = trace(mul(apply(ctx.channel, ctx.gamma.spectral.projectors[i]),
                                             ctx.gamma.spectral.projectors[k]));
            identity_residual = std::max(identity_residual, std::abs(total - direct));
        }

    // Real-marginal Crooks at θ = 0.
    const QuasiProbDistribution fwd = forward_distribution(ctx, config.cluster_tol);
    const QuasiProbDistribution rev = reverse_distribution(ctx, 0.0, config.cluster_tol);
    const QuasiProbDistribution fmarg = marginalize_real(fwd);
    const QuasiProbDistribution rmarg = marginalize_real(rev);
    double crooks_residual = 0;
    for (const auto &fa : fmarg.atoms) {
        if (fa.negligible)
            continue;
        bool matched = false;
        for (const auto &ra : rmarg.atoms) {
            if (std::abs(ra.omega.real() + fa.omega.real()) <= config.cluster_tol) {
                matched = true;
                if (std::abs(ra.q.real()) > 0)
                    crooks_residual =
                        std::max(crooks_residual, std::abs(std::log(std::abs(fa.q.real() /
                                                                             ra.q.real())) -
                                                           fa.omega.real()));
            }
        }
        if (!matched)
            crooks_residual = std::max(crooks_residual, 1.0);
    }

    const bool ok = identity_residual < 1e-10 && crooks_residual < config.residual_tol;
    report["marginal_identity_residual"] = identity_residual;
    report["marginal_crooks_residual"] = crooks_residual;
    report["pass"] = ok;
    out << "marginal identities residual = " << format17(identity_residual)
        << ", real-marginal Crooks residual = " << format17(crooks_residual)
        << (ok ? " PASS" : " FAIL") << "\n";
    return ok ? 0 : 2;
}

int verify_tpm(const ExperimentConfig &config, const ProcessContext &ctx, std::ostream &out,
               json &report) {
    const MeasurementProtocol proto = build_protocol(ctx, Direction::Forward);
    const JointDistribution joint = joint_distribution(proto, ctx, ctx.channel);
    const QuasiProbDistribution direct = forward_distribution(ctx, config.cluster_tol);
    const QuasiProbDistribution exact = reconstruct(joint, ctx, Direction::Forward);

    double exact_residual = 0;
    for (size_t n = 0; n < direct.atoms.size(); ++n)
        exact_residual = std::max(exact_residual, std::abs(direct.atoms[n].q - exact.atoms[n].q));
    bool ok = exact_residual < 1e-10;
    report["exact_residual"] = exact_residual;

    out << "tpm exact reconstruction residual = " << format17(exact_residual)
        << (ok ? " PASS" : " FAIL") << "\n";

    if (config.shots && *config.shots > 0) {
        const JointDistribution sampled = sample_joint(joint, *config.shots, config.seed);
        const QuasiProbDistribution recon = reconstruct(sampled, ctx, Direction::Forward);
        double deviation = 0;
        for (size_t n = 0; n < direct.atoms.size(); ++n)
            if (!direct.atoms[n].negligible)
                deviation += std::abs(recon.atoms[n].q - direct.atoms[n].q);
        const double bound = 0.05 * std::sqrt(1e6 / static_cast<double>(*config.shots));
        const bool sampled_ok = deviation < bound;
        ok = ok && sampled_ok;
        report["shots"] = *config.shots;
        report["seed"] = config.seed;
        report["sampled_deviation"] = deviation;
        report["sampled_bound"] = bound;
        out << "tpm sampled deviation (shots=" << *config.shots << ", seed=" << config.seed
            << ") = " << format17(deviation) << " bound " << format17(bound)
            << (sampled_ok ? " PASS" : " FAIL") << "\n";
    }
    report["pass"] = ok;
    return ok ? 0 : 2;
}

} // namespace

int cmd_verify(const ExperimentConfig &config, const std::string &which, std::ostream &out) {
    const ProcessContext ctx = make_context(config);
    json report{{"which", which}};
    int code;
    if (which == "crooks")
        code = verify_crooks(config, ctx, out, report);
    else if (which == "integral")
        code = verify_integral(config, ctx, out, report);
    else if (which == "secondlaw")
        code = verify_secondlaw(config, ctx, out, report);
    else if (which == "marginals")
        code = verify_marginals(config, ctx, out, report);
    else if (which == "tpm")
        code = verify_tpm(config, ctx, out, report);
    else
        throw ConfigError("unknown verifier '" + which +
                          "' (expected crooks|integral|secondlaw|marginals|tpm)");
    report["exit_code"] = code;
    write_json_report(config, "verify_" + which + ".json", std::move(report));
    return code;
}

int cmd_sweep_theta(const ExperimentConfig &config, std::ostream &out) {
    const ResolvedChannel rc = resolve_channel(config);
    const ProcessContext ctx = make_process_context(rc.channel, rc.gamma, config.rho_initial);
    const QuasiProbDistribution fwd = forward_distribution(ctx, config.cluster_tol);

    std::string csv = file_header(config) + "theta,re_integral,im_integral,reversal_distance\n";
    double max_residual = 0;
    for (double theta : config.thetas) {
        const cdouble value = integral_ft(fwd, theta);
        const double distance =
            superop_distance(rotated_reverse(ctx.channel, ctx.gamma, theta), ctx.channel);
        max_residual = std::max(max_residual, std::abs(value - cdouble(1, 0)));
        csv += format17(theta) + "," + format17(value.real()) + "," + format17(value.imag()) +
               "," + format17(distance) + "\n";
    }
    write_text_file(config, "sweep_theta.csv", csv);

    const bool ok = max_residual < config.integral_tol;
    out << "theta sweep over " << config.thetas.size()
        << " points: max |integral - 1| = " << format17(max_residual)
        << (ok ? " PASS" : " FAIL") << "\n";
    return ok ? 0 : 2;
}

int cmd_sample_tpm(const ExperimentConfig &config, std::ostream &out) {
    const ProcessContext ctx = make_context(config);
    const MeasurementProtocol proto = build_protocol(ctx, Direction::Forward);
    const JointDistribution exact = joint_distribution(proto, ctx, ctx.channel);

    const JointDistribution *emit = &exact;
    JointDistribution sampled;
    if (config.shots && *config.shots > 0) {
        sampled = sample_joint(exact, *config.shots, config.seed);
        emit = &sampled;
    }

    std::string csv = file_header(config) + "m,mprime,p\n";
    for (int m = 0; m < 8; ++m)
        for (int mp = 0; mp < 8; ++mp)
            csv += std::to_string(m) + "," + std::to_string(mp) + "," +
                   format17(emit->probs[static_cast<size_t>(m) * 8 + mp]) + "\n";
    write_text_file(config, "tpm_joint.csv", csv);

    const QuasiProbDistribution recon = reconstruct(*emit, ctx, Direction::Forward);
    write_text_file(config, "tpm_distribution.csv", distribution_csv(config, recon));

    const QuasiProbDistribution direct = forward_distribution(ctx, config.cluster_tol);
    double deviation = 0;
    for (size_t n = 0; n < direct.atoms.size(); ++n)
        if (!direct.atoms[n].negligible)
            deviation += std::abs(recon.atoms[n].q - direct.atoms[n].q);

    json report{{"exact", !emit->shots}, {"deviation_from_exact", deviation}};
    if (emit->shots) {
        report["shots"] = *emit->shots;
        report["seed"] = config.seed;
    }
    write_json_report(config, "tpm_report.json", std::move(report));
    out << "tpm " << (emit->shots ? "sampled" : "exact")
        << " distribution deviation from direct pipeline = " << format17(deviation) << "\n";
    return 0;
}

} // namespace qflux::cli
