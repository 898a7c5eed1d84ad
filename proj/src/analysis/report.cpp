#include "qkdlab/analysis/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qkdlab {

using nlohmann::ordered_json;

std::string to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Table: return "table";
    }
    return "?";
}

OutputFormat parse_format(const std::string& name) {
    for (auto f : {OutputFormat::Json, OutputFormat::Csv, OutputFormat::Table}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw ConfigError("format", "unknown format '" + name + "' (expected json, csv or table)");
}

namespace {

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

template <class T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json efficiency_block(const std::vector<double>& taus, int trips_exponent) {
    ordered_json schemes = ordered_json::array();
    const auto own = [&] {
        auto s = reusable_key_scheme();
        s.input.trips_exponent = trips_exponent;
        return s;
    }();
    for (auto s : reference_schemes()) {
        if (s.name == own.name) {
            s = own;
        }
        ordered_json curve = ordered_json::array();
        for (double t : taus) {
            auto in = s.input;
            in.tau = t;
            curve.push_back({{"tau", t}, {"epsilon_prime", practical_efficiency(in)}});
        }
        ordered_json j;
        j["name"] = s.name;
        j["b_s"] = s.input.b_s;
        j["q_t"] = s.input.q_t;
        j["b_t"] = s.input.b_t;
        j["trips_exponent"] = s.input.trips_exponent;
        j["epsilon"] = efficiency(s.input);
        j["epsilon_prime"] = curve;
        if (s.name != own.name) {
            try {
                j["crossover_tau"] = crossover_tau(own.input, s.input);
            } catch (const NoCrossingError&) {
                j["crossover_tau"] = nullptr;
            }
        }
        schemes.push_back(j);
    }
    return schemes;
}

} // namespace

ordered_json plan_json(const ExperimentPlan& plan) {
    const auto& c = plan.config;
    ordered_json j;
    j["protocol"] = to_string(c.family);
    j["key_dim"] = c.key_dim;
    j["carrier_dim"] = c.carrier_dim;
    j["theta"] = c.theta;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["rounds"] = c.rounds;
    j["exact_mode_counts"] = c.exact_mode_counts;
    j["attack"] = to_string(plan.attack);
    j["trials"] = plan.trials;
    j["check_fraction"] = plan.check_fraction;
    j["forced_checks"] = plan.forced_checks;
    j["seed"] = plan.seed;
    j["ci"] = to_string(plan.ci);
    return j;
}

std::vector<double> default_tau_grid() {
    std::vector<double> t;
    for (int i = 1; i <= 10; ++i) {
        t.push_back(i / 10.0);
    }
    return t;
}

ordered_json report_json(const ExperimentReport& r) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = plan_json(r.plan);
    j["trials"] = r.trials;
    j["success"] = {{"count", r.successes}, {"rate", r.success_rate},
                    {"ci", {r.success_ci.lo, r.success_ci.hi}}};
    j["detection"] = {{"count", r.detections}, {"rate", r.detection_rate},
                      {"ci", {r.detection_ci.lo, r.detection_ci.hi}},
                      {"mean_rounds_to_detection", opt(r.mean_rounds_to_detection)}};
    j["qber"] = r.qber;
    j["per_round_qber"] = r.per_round_qber;
    j["leak_fraction"] = r.leak_fraction;
    j["efficiency"] = efficiency_block(default_tau_grid(), 3);
    return j;
}

std::string render_report(const ExperimentReport& r, OutputFormat format) {
    std::ostringstream os;
    switch (format) {
    case OutputFormat::Json:
        os << report_json(r).dump(2) << "\n";
        break;
    case OutputFormat::Csv:
        os << "round,qber\n";
        for (std::size_t i = 0; i < r.per_round_qber.size(); ++i) {
            os << i + 1 << "," << fixed(r.per_round_qber[i]) << "\n";
        }
        break;
    case OutputFormat::Table: {
        const auto& c = r.plan.config;
        os << "protocol      " << to_string(c.family) << " (key " << c.key_dim << ", carrier " << c.carrier_dim
           << ")\n";
        os << "attack        " << to_string(r.plan.attack) << "\n";
        os << "trials        " << r.trials << " x " << c.rounds << " rounds, seed " << r.plan.seed << "\n";
        os << "success       " << fixed(r.success_rate, 4) << "  [" << fixed(r.success_ci.lo, 4) << ", "
           << fixed(r.success_ci.hi, 4) << "]\n";
        os << "detection     " << fixed(r.detection_rate, 4) << "  [" << fixed(r.detection_ci.lo, 4) << ", "
           << fixed(r.detection_ci.hi, 4) << "]\n";
        os << "qber          " << fixed(r.qber, 4) << "\n";
        os << "leak          " << fixed(r.leak_fraction, 4) << "\n";
        os << "to detection  "
           << (r.mean_rounds_to_detection ? fixed(*r.mean_rounds_to_detection, 2) : std::string("-")) << "\n";
        break;
    }
    }
    return os.str();
}

std::string render_efficiency(const std::vector<double>& taus, int trips_exponent, OutputFormat format) {
    const auto block = efficiency_block(taus, trips_exponent);
    std::ostringstream os;
    switch (format) {
    case OutputFormat::Json: {
        ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["schemes"] = block;
        os << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::Csv:
        os << "scheme,tau,epsilon,epsilon_prime\n";
        for (const auto& s : block) {
            for (const auto& p : s["epsilon_prime"]) {
                os << s["name"].get<std::string>() << "," << fixed(p["tau"].get<double>(), 4) << ","
                   << fixed(s["epsilon"].get<double>()) << "," << fixed(p["epsilon_prime"].get<double>()) << "\n";
            }
        }
        break;
    case OutputFormat::Table:
        os << std::left << std::setw(22) << "scheme" << std::setw(10) << "epsilon";
        for (double t : taus) {
            os << std::setw(10) << ("t=" + fixed(t, 2));
        }
        os << "crossover\n";
        for (const auto& s : block) {
            os << std::setw(22) << s["name"].get<std::string>() << std::setw(10) << fixed(s["epsilon"].get<double>(), 4);
            for (const auto& p : s["epsilon_prime"]) {
                os << std::setw(10) << fixed(p["epsilon_prime"].get<double>(), 4);
            }
            if (s.contains("crossover_tau")) {
                os << (s["crossover_tau"].is_null() ? std::string("none") : fixed(s["crossover_tau"].get<double>(), 4));
            } else {
                os << "-";
            }
            os << "\n";
        }
        break;
    }
    return os.str();
}

std::string render_detection_curve(const ExperimentPlan& plan,
                                   const std::vector<std::pair<std::size_t, double>>& curve, OutputFormat format) {
    std::ostringstream os;
    switch (format) {
    case OutputFormat::Json: {
        ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["config"] = plan_json(plan);
        ordered_json pts = ordered_json::array();
        for (const auto& [n, p] : curve) {
            pts.push_back({{"checks", n}, {"detection", p}});
        }
        j["detection_curve"] = pts;
        os << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::Csv:
        os << "checks,detection\n";
        for (const auto& [n, p] : curve) {
            os << n << "," << fixed(p) << "\n";
        }
        break;
    case OutputFormat::Table:
        os << "checks  detection\n";
        for (const auto& [n, p] : curve) {
            os << std::left << std::setw(8) << n << fixed(p, 4) << "\n";
        }
        break;
    }
    return os.str();
}

} // namespace qkdlab
