#include "qkdlab/qcore/state.hpp"

#include "qkdlab/qcore/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qkdlab {

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels,
                                 std::size_t max_amplitudes)
    : dims_(std::move(dims)), labels_(std::move(labels)), max_amplitudes_(max_amplitudes) {
    if (dims_.size() != labels_.size()) {
        throw LayoutError("layout: " + std::to_string(dims_.size()) + " dims but " +
                          std::to_string(labels_.size()) + " labels");
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
        if (!seen.insert(label).second) {
            throw LayoutError("layout: duplicate subsystem label '" + label + "'");
        }
    }
    total_ = 1;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] < 2) {
            throw DimensionError("layout: subsystem '" + labels_[i] + "' has dimension " +
                                 std::to_string(dims_[i]) + " (must be >= 2)");
        }
        if (total_ > max_amplitudes_ / dims_[i]) {
            throw DimensionError("layout: total dimension exceeds the configured maximum of " +
                                 std::to_string(max_amplitudes_) + " amplitudes");
        }
        total_ *= dims_[i];
    }
    strides_.assign(dims_.size(), 1);
    for (std::size_t i = dims_.size(); i-- > 1;) {
        strides_[i - 1] = strides_[i] * dims_[i];
    }
}

bool SubsystemLayout::contains(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t SubsystemLayout::position(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw LayoutError("unknown subsystem '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t SubsystemLayout::encode(std::span<const std::size_t> digits) const {
    if (digits.size() != dims_.size()) {
        throw DimensionError("encode: expected " + std::to_string(dims_.size()) + " indices, got " +
                             std::to_string(digits.size()));
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= dims_[i]) {
            throw DimensionError("basis index " + std::to_string(digits[i]) +
                                 " out of range for subsystem '" + labels_[i] + "' of dimension " +
                                 std::to_string(dims_[i]));
        }
        index += digits[i] * strides_[i];
    }
    return index;
}

std::vector<std::size_t> SubsystemLayout::decode(std::size_t index) const {
    std::vector<std::size_t> digits(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        digits[i] = (index / strides_[i]) % dims_[i];
    }
    return digits;
}

SubsystemLayout SubsystemLayout::extended(const std::string& label, std::size_t dim) const {
    auto dims = dims_;
    auto labels = labels_;
    dims.push_back(dim);
    labels.push_back(label);
    return {std::move(dims), std::move(labels), max_amplitudes_};
}

SubsystemLayout SubsystemLayout::without(const std::string& label) const {
    const auto pos = position(label);
    auto dims = dims_;
    auto labels = labels_;
    dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(pos));
    labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(pos));
    return {std::move(dims), std::move(labels), max_amplitudes_};
}

StateVector::StateVector(SubsystemLayout layout, std::vector<Complex> amps)
    : layout_(std::move(layout)), amps_(std::move(amps)) {
    if (amps_.size() != layout_.total_dim()) {
        throw DimensionError("state: " + std::to_string(amps_.size()) + " amplitudes for a layout of dimension " +
                             std::to_string(layout_.total_dim()));
    }
    if (std::abs(norm() - 1.0) > kAlgebraTol) {
        throw NumericalError("state: norm " + std::to_string(norm()) + " differs from 1");
    }
}

StateVector StateVector::normalized(SubsystemLayout layout, std::vector<Complex> amps) {
    double sq = 0.0;
    for (const auto& a : amps) {
        sq += std::norm(a);
    }
    if (sq < 1e-300) {
        throw NumericalError("state: cannot normalize the zero vector");
    }
    const double scale = 1.0 / std::sqrt(sq);
    for (auto& a : amps) {
        a *= scale;
    }
    return {std::move(layout), std::move(amps)};
}

double StateVector::norm() const {
    double sq = 0.0;
    for (const auto& a : amps_) {
        sq += std::norm(a);
    }
    return std::sqrt(sq);
}

} // namespace qkdlab
