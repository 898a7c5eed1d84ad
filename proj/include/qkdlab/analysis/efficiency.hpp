#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qkdlab {

/// Secret bits per round over quantum plus classical channel uses, with the
/// transmittance applied `trips_exponent` times for the practical figure.
struct EfficiencyInput {
    double b_s = 1.0;
    double q_t = 1.0;
    double b_t = 0.0;
    double tau = 1.0;
    int trips_exponent = 3;

    void validate() const;
};

class NoCrossingError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

double efficiency(const EfficiencyInput& in);
double practical_efficiency(const EfficiencyInput& in);

/// Transmittance at which the two practical-efficiency curves meet. Throws
/// NoCrossingError when the exponents match or the crossing is outside (0, 1].
double crossover_tau(const EfficiencyInput& a, const EfficiencyInput& b);

struct Scheme {
    std::string name;
    EfficiencyInput input;
};

/// The reusable-key scheme and the two reference schemes it is compared with.
Scheme reusable_key_scheme();
Scheme bb84_scheme();
Scheme lucamarini_mancini_scheme();
std::vector<Scheme> reference_schemes();

} // namespace qkdlab
