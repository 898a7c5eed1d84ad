#include "cli.hpp"

#include "qkdlab/analysis/report.hpp"
#include "qkdlab/analysis/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qkdlab::cli {

namespace {

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Everything a run-like subcommand can take. Unset fields keep the config
// file's value (or the built-in default).
struct RunFlags {
    std::string config_path;
    std::string protocol;
    std::size_t dim = 0;
    std::size_t key_dim = 0;
    std::size_t carrier_dim = 0;
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::string attack;
    std::size_t trials = 0;
    std::size_t rounds = 0;
    double check_fraction = 0.0;
    std::vector<std::size_t> checks;
    bool exact_mode_counts = false;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string ci;
    std::string format = "json";
    std::string out;
};

struct RunOptions {
    CLI::Option* protocol = nullptr;
    CLI::Option* dim = nullptr;
    CLI::Option* key_dim = nullptr;
    CLI::Option* carrier_dim = nullptr;
    CLI::Option* theta = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* beta = nullptr;
    CLI::Option* attack = nullptr;
    CLI::Option* trials = nullptr;
    CLI::Option* rounds = nullptr;
    CLI::Option* check_fraction = nullptr;
    CLI::Option* checks = nullptr;
    CLI::Option* exact = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* ci = nullptr;
};

RunOptions add_run_flags(CLI::App& app, RunFlags& f) {
    RunOptions o;
    app.add_option("--config", f.config_path, "Flat JSON config file; flags override its values");
    o.protocol = app.add_option("--protocol", f.protocol,
                                "zlg, zlg-nonorth, zlg-check-a, zlg-check-b, zlg-hd, kbb, kbb-hd, bk, bk-hd");
    o.dim = app.add_option("--dim", f.dim, "Key dimension (kbb: key and carrier dimension)");
    o.key_dim = app.add_option("--key-dim", f.key_dim, "Key dimension");
    o.carrier_dim = app.add_option("--carrier-dim", f.carrier_dim, "Carrier dimension");
    o.theta = app.add_option("--theta", f.theta, "Key rotation angle (zlg family)");
    o.alpha = app.add_option("--alpha", f.alpha, "Non-orthogonal carrier amplitude on |0>");
    o.beta = app.add_option("--beta", f.beta, "Non-orthogonal carrier amplitude on |1>");
    o.attack = app.add_option("--attack", f.attack, "passive, cnot-ancilla or f-attack");
    o.trials = app.add_option("--trials", f.trials, "Number of independent trials");
    o.rounds = app.add_option("--rounds", f.rounds, "Rounds per trial");
    o.check_fraction = app.add_option("--check-fraction", f.check_fraction, "Probability that a round is a check");
    o.checks = app.add_option("--checks", f.checks, "Rounds that are always checks");
    o.exact = app.add_flag("--exact-mode-counts", f.exact_mode_counts,
                           "Check variants: exactly one third of the rounds in each mode");
    o.seed = app.add_option("--seed", f.seed, "Master seed (default: $QKDLAB_SEED or 20240611)");
    app.add_option("--jobs", f.jobs, "Worker threads; results do not depend on it");
    o.ci = app.add_option("--ci", f.ci, "normal or clopper-pearson");
    app.add_option("--format", f.format, "json, csv or table");
    app.add_option("--out", f.out, "Write the report here instead of stdout");
    return o;
}

nlohmann::json read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    try {
        auto j = nlohmann::json::parse(in);
        if (!j.is_object()) {
            throw ConfigError("config", "must be a flat JSON object");
        }
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
}

template <class T>
T field(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(key, "has the wrong type");
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QKDLAB_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw ConfigError("QKDLAB_SEED", "must be an unsigned integer");
    }
    return kDefaultSeed;
}

ExperimentPlan build_plan(const RunFlags& f, const RunOptions& o) {
    static const std::set<std::string> known = {
        "protocol", "key_dim", "carrier_dim", "dim", "theta", "alpha", "beta", "rounds", "exact_mode_counts",
        "attack", "trials", "check_fraction", "forced_checks", "seed", "ci"};
    nlohmann::json file = nlohmann::json::object();
    if (!f.config_path.empty()) {
        file = read_config(f.config_path);
        for (const auto& [key, value] : file.items()) {
            if (known.count(key) == 0) {
                throw ConfigError(key, "unknown config key");
            }
        }
    }

    ExperimentPlan plan;
    auto& c = plan.config;
    c.family = parse_family(o.protocol->count() ? f.protocol : field<std::string>(file, "protocol", "zlg"));
    if (file.contains("dim")) {
        c.key_dim = field<std::size_t>(file, "dim", 2);
        if (c.family == Family::Kbb) {
            c.carrier_dim = c.key_dim;
        }
    }
    c.key_dim = field<std::size_t>(file, "key_dim", c.key_dim);
    c.carrier_dim = field<std::size_t>(file, "carrier_dim", c.carrier_dim);
    if (o.dim->count()) {
        c.key_dim = f.dim;
        if (c.family == Family::Kbb) {
            c.carrier_dim = f.dim;
        }
    }
    if (o.key_dim->count()) {
        c.key_dim = f.key_dim;
    }
    if (o.carrier_dim->count()) {
        c.carrier_dim = f.carrier_dim;
    }
    if ((c.family == Family::ZlgHd || c.family == Family::BkHd) && !o.key_dim->count() && !o.dim->count() &&
        !file.contains("key_dim") && !file.contains("dim")) {
        c.key_dim = 4;
    }
    if (c.family == Family::KbbHd && !o.key_dim->count() && !o.dim->count() && !file.contains("key_dim") &&
        !file.contains("dim")) {
        c.key_dim = 2 * c.carrier_dim;
    }
    c.theta = o.theta->count() ? f.theta : field<double>(file, "theta", c.theta);
    c.alpha = o.alpha->count() ? f.alpha : field<double>(file, "alpha", c.alpha);
    c.beta = o.beta->count() ? f.beta : field<double>(file, "beta", c.beta);
    c.rounds = o.rounds->count() ? f.rounds : field<std::size_t>(file, "rounds", c.rounds);
    c.exact_mode_counts = o.exact->count() ? f.exact_mode_counts : field<bool>(file, "exact_mode_counts", false);

    plan.attack = parse_attack(o.attack->count() ? f.attack : field<std::string>(file, "attack", "passive"));
    plan.trials = o.trials->count() ? f.trials : field<std::size_t>(file, "trials", 100);
    plan.check_fraction =
        o.check_fraction->count() ? f.check_fraction : field<double>(file, "check_fraction", plan.check_fraction);
    const auto checks = o.checks->count() ? f.checks : field<std::vector<std::size_t>>(file, "forced_checks", {});
    plan.forced_checks = {checks.begin(), checks.end()};
    plan.seed = o.seed->count() ? f.seed : field<std::uint64_t>(file, "seed", default_seed());
    plan.jobs = f.jobs;
    plan.ci = parse_ci_method(o.ci->count() ? f.ci : field<std::string>(file, "ci", "normal"));
    plan.validate();
    return plan;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text) || !file.flush()) {
        throw IoError("cannot write '" + path + "'");
    }
}

std::vector<double> tau_values(const std::vector<double>& given) {
    if (given.empty()) {
        return default_tau_grid();
    }
    for (double t : given) {
        if (!(t > 0.0 && t <= 1.0)) {
            throw ConfigError("tau", "must lie in (0, 1]");
        }
    }
    return given;
}

} // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation lab for quantum-encryption key distribution protocols and attacks on them", "qkdlab"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "Monte Carlo experiment, one report");
    const auto run_opts = add_run_flags(*run, run_flags);

    RunFlags curve_flags;
    std::size_t max_checks = 8;
    auto* curves = app.add_subcommand("curves", "Detection probability against the number of check rounds");
    const auto curve_opts = add_run_flags(*curves, curve_flags);
    curves->add_option("--max-checks", max_checks, "Largest number of check rounds (counts 0..N)");

    VerifyOptions vopts;
    std::string only;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "Exact state checks against a dense reference evolution");
    verify->add_option("--only", only, "Run a single check by name");
    verify->add_option("--theta", vopts.theta, "Rotation angle");
    verify->add_option("--alpha", vopts.alpha, "Non-orthogonal carrier amplitude on |0>");
    verify->add_option("--beta", vopts.beta, "Non-orthogonal carrier amplitude on |1>");
    verify->add_option("--dim", vopts.dim, "Qudit dimension for the kbb checks");
    verify->add_option("--key-dim", vopts.hd_dim, "D for the higher-dimensional checks");
    verify->add_option("--carrier-dim", vopts.hd_carrier, "k for the kbb-hd checks");
    verify->add_flag("--list", "Print the check names and exit");
    verify->add_option("--out", verify_out, "Write the report here instead of stdout");

    std::vector<double> taus;
    int trips = 3;
    std::string eff_format = "table";
    std::string eff_out;
    auto* eff = app.add_subcommand("efficiency", "Efficiency and practical-efficiency tables with crossovers");
    eff->add_option("--tau", taus, "Transmittance values (default 0.1 .. 1.0)");
    eff->add_option("--trips-exponent", trips, "Power of tau in the reusable-key scheme");
    eff->add_option("--format", eff_format, "json, csv or table");
    eff->add_option("--out", eff_out, "Write the tables here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (run->parsed()) {
            const auto plan = build_plan(run_flags, run_opts);
            const auto format = parse_format(run_flags.format);
            emit(render_report(run_experiment(plan), format), run_flags.out, out);
            return kOk;
        }
        if (curves->parsed()) {
            auto plan = build_plan(curve_flags, curve_opts);
            const auto format = parse_format(curve_flags.format);
            std::vector<std::size_t> counts;
            for (std::size_t n = 0; n <= max_checks; ++n) {
                counts.push_back(n);
            }
            emit(render_detection_curve(plan, detection_curve(plan, counts), format), curve_flags.out, out);
            return kOk;
        }
        if (verify->parsed()) {
            if (verify->count("--list")) {
                std::ostringstream os;
                for (const auto& n : verify_check_names()) {
                    os << n << "\n";
                }
                emit(os.str(), verify_out, out);
                return kOk;
            }
            if (!only.empty()) {
                vopts.only = only;
            }
            const auto results = run_verify(vopts);
            emit(render_verify(results), verify_out, out);
            for (const auto& r : results) {
                if (!r.passed) {
                    return kVerifyFailed;
                }
            }
            return kOk;
        }
        if (eff->parsed()) {
            if (trips < 1) {
                throw ConfigError("trips-exponent", "must be >= 1");
            }
            emit(render_efficiency(tau_values(taus), trips, parse_format(eff_format)), eff_out, out);
            return kOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

} // namespace qkdlab::cli
