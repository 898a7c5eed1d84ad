#include "qkdlab/analysis/stats.hpp"

#include "qkdlab/protocols/config.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace qkdlab {

std::string to_string(CiMethod m) { return m == CiMethod::Normal ? "normal" : "clopper-pearson"; }

CiMethod parse_ci_method(const std::string& name) {
    if (name == "normal") {
        return CiMethod::Normal;
    }
    if (name == "clopper-pearson") {
        return CiMethod::ClopperPearson;
    }
    throw ConfigError("ci", "unknown interval '" + name + "' (expected normal or clopper-pearson)");
}

double binomial_sigma(double p, std::size_t n) {
    return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

Interval binomial_interval(std::size_t k, std::size_t n, CiMethod method, double z) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    const double p = static_cast<double>(k) / static_cast<double>(n);
    if (method == CiMethod::Normal) {
        const double h = z * binomial_sigma(p, n);
        return {std::max(0.0, p - h), std::min(1.0, p + h)};
    }
    const boost::math::normal_distribution<> unit;
    const double alpha = 2.0 * boost::math::cdf(boost::math::complement(unit, z));
    const auto nk = static_cast<double>(n - k);
    const auto kk = static_cast<double>(k);
    Interval out{0.0, 1.0};
    if (k > 0) {
        out.lo = boost::math::quantile(boost::math::beta_distribution<>(kk, nk + 1.0), alpha / 2.0);
    }
    if (k < n) {
        out.hi = boost::math::quantile(boost::math::beta_distribution<>(kk + 1.0, nk), 1.0 - alpha / 2.0);
    }
    return out;
}

} // namespace qkdlab
