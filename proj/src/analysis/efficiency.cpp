#include "qkdlab/analysis/efficiency.hpp"

#include "qkdlab/protocols/config.hpp"

#include <cmath>

namespace qkdlab {

void EfficiencyInput::validate() const {
    if (!(q_t >= 0.0) || !(b_t >= 0.0) || !(b_s >= 0.0)) {
        throw ConfigError("b_s/q_t/b_t", "must be non-negative");
    }
    if (!(q_t + b_t > 0.0)) {
        throw ConfigError("q_t+b_t", "must be positive");
    }
    if (!(tau > 0.0 && tau <= 1.0)) {
        throw ConfigError("tau", "must lie in (0, 1]");
    }
    if (trips_exponent < 0) {
        throw ConfigError("trips_exponent", "must be >= 0");
    }
}

double efficiency(const EfficiencyInput& in) {
    in.validate();
    return in.b_s / (in.q_t + in.b_t);
}

double practical_efficiency(const EfficiencyInput& in) {
    return efficiency(in) * std::pow(in.tau, in.trips_exponent);
}

double crossover_tau(const EfficiencyInput& a, const EfficiencyInput& b) {
    const double ea = efficiency(a);
    const double eb = efficiency(b);
    if (a.trips_exponent == b.trips_exponent) {
        throw NoCrossingError("crossover_tau: equal exponents give no unique crossing");
    }
    if (ea <= 0.0 || eb <= 0.0) {
        throw NoCrossingError("crossover_tau: a zero efficiency curve never crosses");
    }
    // ea * t^na = eb * t^nb  =>  t = (eb / ea)^(1 / (na - nb))
    const double t = std::pow(eb / ea, 1.0 / static_cast<double>(a.trips_exponent - b.trips_exponent));
    if (!(t > 0.0 && t <= 1.0)) {
        throw NoCrossingError("crossover_tau: curves cross at " + std::to_string(t) + ", outside (0, 1]");
    }
    return t;
}

Scheme reusable_key_scheme() { return {"reusable-key", {1.0, 1.0, 0.0, 1.0, 3}}; }

Scheme bb84_scheme() { return {"bb84", {0.5, 1.0, 2.0, 1.0, 1}}; }

// Only the resulting efficiency of 1/2 is quoted for this scheme; the
// split into b_s and q_t below just reproduces it.
Scheme lucamarini_mancini_scheme() { return {"lucamarini-mancini", {1.0, 2.0, 0.0, 1.0, 1}}; }

std::vector<Scheme> reference_schemes() { return {reusable_key_scheme(), bb84_scheme(), lucamarini_mancini_scheme()}; }

} // namespace qkdlab
