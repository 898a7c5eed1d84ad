#include "qkdlab/protocols/config.hpp"

#include <cmath>
#include <map>

namespace qkdlab {

namespace {

const std::map<Family, std::string>& family_names() {
    static const std::map<Family, std::string> names{
        {Family::Zlg, "zlg"},          {Family::ZlgNonorth, "zlg-nonorth"}, {Family::ZlgCheckA, "zlg-check-a"},
        {Family::ZlgCheckB, "zlg-check-b"}, {Family::ZlgHd, "zlg-hd"},      {Family::Kbb, "kbb"},
        {Family::KbbHd, "kbb-hd"},     {Family::Bk, "bk"},                  {Family::BkHd, "bk-hd"}};
    return names;
}

} // namespace

std::string to_string(Family family) { return family_names().at(family); }

Family parse_family(const std::string& name) {
    for (const auto& [f, n] : family_names()) {
        if (n == name) {
            return f;
        }
    }
    throw ConfigError("protocol", "unknown family '" + name +
                                      "' (expected zlg, zlg-nonorth, zlg-check-a, zlg-check-b, zlg-hd, kbb, "
                                      "kbb-hd, bk or bk-hd)");
}

bool is_zlg_family(Family f) {
    return f == Family::Zlg || f == Family::ZlgNonorth || f == Family::ZlgCheckA || f == Family::ZlgCheckB;
}

bool is_bk_family(Family f) { return f == Family::Bk || f == Family::BkHd; }

bool is_check_variant(Family f) { return f == Family::ZlgCheckA || f == Family::ZlgCheckB; }

std::size_t alphabet_size(const ProtocolConfig& cfg) {
    switch (cfg.family) {
    case Family::Kbb:
    case Family::KbbHd: return cfg.carrier_dim;
    default: return 2;
    }
}

void ProtocolConfig::validate() const {
    if (rounds < 1) {
        throw ConfigError("rounds", "must be >= 1");
    }
    if (!std::isfinite(theta)) {
        throw ConfigError("theta", "must be finite");
    }
    const auto need = [](bool ok, const char* field, const std::string& what) {
        if (!ok) {
            throw ConfigError(field, what);
        }
    };
    switch (family) {
    case Family::Zlg:
    case Family::ZlgNonorth:
    case Family::ZlgCheckA:
    case Family::ZlgCheckB:
    case Family::Bk:
        need(key_dim == 2, "key_dim", "must be 2 for " + to_string(family));
        need(carrier_dim == 2, "carrier_dim", "must be 2 for " + to_string(family));
        break;
    case Family::ZlgHd:
    case Family::BkHd:
        need(key_dim >= 4 && key_dim % 2 == 0, "key_dim", "must be even and >= 4 for " + to_string(family));
        need(carrier_dim == 2, "carrier_dim", "must be 2 for " + to_string(family));
        break;
    case Family::Kbb:
        need(key_dim >= 2, "key_dim", "must be >= 2 for kbb");
        need(carrier_dim == key_dim, "carrier_dim", "must equal key_dim for kbb");
        break;
    case Family::KbbHd:
        need(carrier_dim >= 2, "carrier_dim", "must be >= 2 for kbb-hd");
        need(key_dim % carrier_dim == 0 && key_dim / carrier_dim >= 2, "key_dim",
             "must be carrier_dim * d with d >= 2 for kbb-hd");
        break;
    }
    if (family == Family::ZlgNonorth) {
        need(std::abs(alpha * alpha + beta * beta - 1.0) < 1e-10, "alpha", "alpha^2 + beta^2 must equal 1");
        need(alpha != 0.0, "alpha", "must be nonzero");
        need(beta != 0.0, "beta", "must be nonzero");
        need(std::abs(alpha - beta) > 1e-12, "alpha", "must differ from beta");
    }
    if (is_check_variant(family) && exact_mode_counts) {
        need(rounds % 3 == 0, "rounds", "must be a multiple of 3 when exact_mode_counts is set");
    }
}

} // namespace qkdlab
