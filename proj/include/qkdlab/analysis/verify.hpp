#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qkdlab {

struct VerifyOptions {
    double theta = 0.78539816339744830962;
    double alpha = 0.6;
    double beta = 0.8;
    /// Qudit key dimension for the kbb checks.
    std::size_t dim = 3;
    /// Key dimension for the higher-dimensional checks (even, >= 4).
    std::size_t hd_dim = 4;
    /// Carrier dimension k for the kbb-hd checks; must divide hd_dim.
    std::size_t hd_carrier = 2;
    /// Run only this check.
    std::optional<std::string> only;

    void validate() const;
};

/// A printed closed form compared against the oracle without affecting the
/// verdict.
struct VerifyNote {
    std::string what;
    double deviation = 0.0;
};

struct VerifyResult {
    std::string name;
    std::string description;
    bool passed = false;
    double deviation = 0.0;
    std::vector<VerifyNote> notes;
};

/// Names of all checks, in run order.
std::vector<std::string> verify_check_names();

/// Builds each state with the library's protocol operations and compares it
/// with a dense Kronecker-product evolution and with the closed form.
std::vector<VerifyResult> run_verify(const VerifyOptions& opts);

std::string render_verify(const std::vector<VerifyResult>& results);

} // namespace qkdlab
