#include "qflux_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

namespace qflux::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json &obj, const std::set<std::string> &known,
                         const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double as_number(const json &v, const std::string &where) {
    if (!v.is_number())
        throw ConfigError(where + " must be a number");
    return v.get<double>();
}

cdouble parse_complex(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError(where + " must be a [re, im] pair");
    return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
}

ComplexMatrix parse_matrix(const json &v, const std::string &where) {
    if (!v.is_array() || v.empty())
        throw ConfigError(where + " must be a non-empty array of rows");
    const int d = static_cast<int>(v.size());
    ComplexMatrix m(d);
    for (int r = 0; r < d; ++r) {
        if (!v[r].is_array() || static_cast<int>(v[r].size()) != d)
            throw ConfigError(where + " must be square");
        for (int c = 0; c < d; ++c)
            m(r, c) = parse_complex(v[r][c], where + " entry");
    }
    return m;
}

ComplexMatrix default_initial_state() {
    const double sn = std::sin(M_PI / 6), cs = std::cos(M_PI / 6);
    const cdouble v0[2] = {sn, cdouble(0, -cs)};
    const cdouble v1[2] = {cs, cdouble(0, sn)};
    ComplexMatrix rho(2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            rho(a, b) = 0.8 * v0[a] * std::conj(v0[b]) + 0.2 * v1[a] * std::conj(v1[b]);
    return rho;
}

std::vector<double> default_theta_grid() {
    std::vector<double> grid(101);
    for (int n = 0; n < 101; ++n)
        grid[n] = -M_PI + 2 * M_PI * n / 100.0;
    return grid;
}

void parse_channel(const json &v, ExperimentConfig &config) {
    reject_unknown_keys(v, {"builder", "p", "s", "kraus"}, "channel");
    if (v.contains("kraus")) {
        if (v.contains("builder") || v.contains("p") || v.contains("s"))
            throw ConfigError("channel: 'kraus' excludes builder parameters");
        config.builder.clear();
        for (const auto &op : v["kraus"])
            config.kraus.push_back(parse_matrix(op, "channel.kraus"));
        if (config.kraus.empty())
            throw ConfigError("channel.kraus must list at least one operator");
        return;
    }
    if (v.contains("builder")) {
        config.builder = v["builder"].get<std::string>();
        if (config.builder != "incovariant" && config.builder != "covariant")
            throw ConfigError("channel.builder must be 'incovariant' or 'covariant'");
    }
    if (v.contains("p"))
        config.p = as_number(v["p"], "channel.p");
    if (v.contains("s"))
        config.s = as_number(v["s"], "channel.s");
}

void parse_initial_state(const json &v, ExperimentConfig &config) {
    reject_unknown_keys(v, {"eigenvalues", "eigenvectors", "density"}, "initial_state");
    if (v.contains("density")) {
        if (v.contains("eigenvalues") || v.contains("eigenvectors"))
            throw ConfigError("initial_state: 'density' excludes the eigen form");
        config.rho_initial = parse_matrix(v["density"], "initial_state.density");
        return;
    }
    if (!v.contains("eigenvalues") || !v.contains("eigenvectors"))
        throw ConfigError("initial_state needs eigenvalues + eigenvectors or density");
    const auto &evals = v["eigenvalues"];
    const auto &evecs = v["eigenvectors"];
    if (!evals.is_array() || !evecs.is_array() || evals.size() != evecs.size())
        throw ConfigError("initial_state eigen lists must have matching lengths");
    const int d = static_cast<int>(evals.size());
    ComplexMatrix rho(d);
    for (int n = 0; n < d; ++n) {
        const double p = as_number(evals[n], "initial_state.eigenvalues");
        if (!evecs[n].is_array() || static_cast<int>(evecs[n].size()) != d)
            throw ConfigError("initial_state.eigenvectors entries must have length d");
        std::vector<cdouble> vec(d);
        double norm = 0;
        for (int r = 0; r < d; ++r) {
            vec[r] = parse_complex(evecs[n][r], "initial_state.eigenvectors entry");
            norm += std::norm(vec[r]);
        }
        norm = std::sqrt(norm);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                rho(a, b) += p * (vec[a] / norm) * std::conj(vec[b] / norm);
    }
    config.rho_initial = rho;
}

void parse_theta(const json &v, ExperimentConfig &config) {
    if (v.is_number()) {
        config.thetas = {v.get<double>()};
        config.theta_single = v.get<double>();
        config.theta_single_set = true;
        return;
    }
    if (v.is_array()) {
        config.thetas.clear();
        for (const auto &x : v)
            config.thetas.push_back(as_number(x, "theta list"));
        if (config.thetas.empty())
            throw ConfigError("theta list must not be empty");
        config.theta_single = config.thetas.front();
        config.theta_single_set = true;
        return;
    }
    if (v.is_object()) {
        reject_unknown_keys(v, {"min", "max", "count"}, "theta");
        if (!v.contains("min") || !v.contains("max") || !v.contains("count"))
            throw ConfigError("theta sweep needs min, max and count");
        const double lo = as_number(v["min"], "theta.min");
        const double hi = as_number(v["max"], "theta.max");
        const int count = v["count"].get<int>();
        if (count < 2 || hi <= lo)
            throw ConfigError("theta sweep needs count >= 2 and max > min");
        config.thetas.resize(count);
        for (int n = 0; n < count; ++n)
            config.thetas[n] = lo + (hi - lo) * n / (count - 1.0);
        return;
    }
    throw ConfigError("theta must be a number, list, or {min, max, count}");
}

void apply_env_tolerance(ExperimentConfig &config) {
    if (const char *env = std::getenv("QFLUX_TOL")) {
        char *end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || v <= 0)
            throw ConfigError("QFLUX_TOL must be a positive number");
        config.residual_tol = v;
        config.integral_tol = v;
    }
}

} // namespace

std::string canonical_hash(const nlohmann::json &doc) {
    const std::string dump = doc.dump();
    uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {
ExperimentConfig parse_config_impl(const nlohmann::json &doc);
}

ExperimentConfig parse_config(const nlohmann::json &doc) {
    try {
        return parse_config_impl(doc);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
}

namespace {

ExperimentConfig parse_config_impl(const nlohmann::json &doc) {
    if (!doc.is_object())
        throw ConfigError("config document must be a JSON object");
    reject_unknown_keys(doc,
                        {"channel", "gamma", "initial_state", "theta", "shots", "seed", "out",
                         "tolerances"},
                        "config");

    ExperimentConfig config;
    config.rho_initial = default_initial_state();
    config.thetas = default_theta_grid();
    apply_env_tolerance(config);

    if (doc.contains("channel"))
        parse_channel(doc["channel"], config);
    if (doc.contains("gamma"))
        config.gamma = parse_matrix(doc["gamma"], "gamma");
    if (doc.contains("initial_state"))
        parse_initial_state(doc["initial_state"], config);
    if (doc.contains("theta"))
        parse_theta(doc["theta"], config);
    if (doc.contains("shots")) {
        if (!doc["shots"].is_number_unsigned() || doc["shots"].get<uint64_t>() == 0)
            throw ConfigError("shots must be a positive integer");
        config.shots = doc["shots"].get<uint64_t>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned())
            throw ConfigError("seed must be a non-negative integer");
        config.seed = doc["seed"].get<uint64_t>();
    }
    if (doc.contains("out"))
        config.out_dir = doc["out"].get<std::string>();
    if (doc.contains("tolerances")) {
        const auto &t = doc["tolerances"];
        reject_unknown_keys(t, {"cluster", "residual", "integral"}, "tolerances");
        if (t.contains("cluster"))
            config.cluster_tol = as_number(t["cluster"], "tolerances.cluster");
        if (t.contains("residual"))
            config.residual_tol = as_number(t["residual"], "tolerances.residual");
        if (t.contains("integral"))
            config.integral_tol = as_number(t["integral"], "tolerances.integral");
        if (config.cluster_tol <= 0 || config.residual_tol <= 0 || config.integral_tol <= 0)
            throw ConfigError("tolerances must be positive");
    }

    config.config_hash = canonical_hash(doc);
    return config;
}

} // namespace

ExperimentConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

ExperimentConfig default_config() { return parse_config(nlohmann::json::object()); }

ResolvedChannel resolve_channel(const ExperimentConfig &config) {
    KrausChannel ch = config.builder == "incovariant" ? build_incovariant(config.p, config.s)
                      : config.builder == "covariant" ? build_covariant(config.p, config.s)
                                                      : make_kraus_channel(config.kraus, "explicit");
    StationaryState st =
        config.gamma ? stationary_state_from(ch, *config.gamma) : stationary_state(ch);
    return {std::move(ch), std::move(st)};
}

} // namespace qflux::cli
