#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qkdlab {

using Complex = std::complex<double>;

// Tolerances shared by the whole library.
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kRankCutoff = 1e-9;
inline constexpr std::size_t kDefaultMaxAmplitudes = std::size_t{1} << 24;

/**
 * Ordered list of labelled subsystems with their dimensions.
 *
 * Basis index encoding is row-major: the first subsystem is the most
 * significant digit. Layouts are immutable; extended() and without() build
 * new ones.
 */
class SubsystemLayout {
  public:
    SubsystemLayout() = default;
    SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels,
                    std::size_t max_amplitudes = kDefaultMaxAmplitudes);

    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t count() const { return dims_.size(); }
    std::size_t total_dim() const { return total_; }
    std::size_t max_amplitudes() const { return max_amplitudes_; }

    bool contains(const std::string& label) const;
    /// Position of `label`; throws LayoutError when absent.
    std::size_t position(const std::string& label) const;
    std::size_t dim(const std::string& label) const { return dims_[position(label)]; }
    /// Distance in the flat index between consecutive values of subsystem `pos`.
    std::size_t stride(std::size_t pos) const { return strides_[pos]; }

    std::size_t encode(std::span<const std::size_t> digits) const;
    std::vector<std::size_t> decode(std::size_t index) const;

    SubsystemLayout extended(const std::string& label, std::size_t dim) const;
    SubsystemLayout without(const std::string& label) const;

    bool operator==(const SubsystemLayout& other) const {
        return dims_ == other.dims_ && labels_ == other.labels_;
    }

  private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 1;
    std::size_t max_amplitudes_ = kDefaultMaxAmplitudes;
};

/// Normalized pure state over a SubsystemLayout.
class StateVector {
  public:
    /// Takes ownership of `amps`; throws if the length does not match the
    /// layout or the norm differs from 1 by more than kAlgebraTol.
    StateVector(SubsystemLayout layout, std::vector<Complex> amps);

    /// Same as the constructor but rescales to unit norm first.
    static StateVector normalized(SubsystemLayout layout, std::vector<Complex> amps);

    const SubsystemLayout& layout() const { return layout_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(std::span<const std::size_t> digits) const {
        return amps_[layout_.encode(digits)];
    }
    std::size_t size() const { return amps_.size(); }
    double norm() const;

  private:
    SubsystemLayout layout_;
    std::vector<Complex> amps_;
};

} // namespace qkdlab
