#pragma once

#include <cstddef>
#include <string>

namespace qkdlab {

enum class CiMethod { Normal, ClopperPearson };

std::string to_string(CiMethod m);
CiMethod parse_ci_method(const std::string& name);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Two-sided interval for a binomial proportion k/n. `z` sets the width of the
/// normal interval (3 by default); the exact interval uses the matching
/// confidence level, 99.73% for z = 3.
Interval binomial_interval(std::size_t k, std::size_t n, CiMethod method = CiMethod::Normal, double z = 3.0);

/// sqrt(p(1-p)/n).
double binomial_sigma(double p, std::size_t n);

} // namespace qkdlab
