#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qkdlab {

enum class Family { Zlg, ZlgNonorth, ZlgCheckA, ZlgCheckB, ZlgHd, Kbb, KbbHd, Bk, BkHd };

std::string to_string(Family family);

/// Invalid configuration value. The message names the field and the
/// violated constraint.
class ConfigError : public std::invalid_argument {
  public:
    ConfigError(std::string field, const std::string& constraint)
        : std::invalid_argument(field + ": " + constraint), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

Family parse_family(const std::string& name);

struct ProtocolConfig {
    Family family = Family::Zlg;
    double theta = std::numbers::pi / 4;
    /// d for kbb, D for the higher-dimensional repairs, 2 for the qubit protocols.
    std::size_t key_dim = 2;
    /// Carrier dimension; k for kbb-hd.
    std::size_t carrier_dim = 2;
    double alpha = 0.6;
    double beta = 0.8;
    std::size_t rounds = 100;
    /// Check variants only: exactly rounds/3 rounds of each mode instead of a fair three-way coin.
    bool exact_mode_counts = false;

    void validate() const;
};

bool is_zlg_family(Family f);
bool is_bk_family(Family f);
bool is_check_variant(Family f);

/// Number of distinct symbols one round carries.
std::size_t alphabet_size(const ProtocolConfig& cfg);

} // namespace qkdlab
