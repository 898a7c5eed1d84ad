#pragma once

#include "qkdlab/qcore/state.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace qkdlab {

/// Unitary acting on a single subsystem of dimension dim(). Row-major entries.
class Gate {
  public:
    /// Throws NumericalError unless max|M^dagger M - I| < kAlgebraTol.
    Gate(std::size_t dim, std::vector<Complex> entries);

    std::size_t dim() const { return dim_; }
    Complex operator()(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }
    const std::vector<Complex>& entries() const { return m_; }

    Gate adjoint() const;
    /// Entrywise complex conjugate.
    Gate conjugate() const;
    /// this * rhs
    Gate then_after(const Gate& rhs) const;
    Gate power(std::size_t n) const;

    /// max_{ij} |(M^dagger M - I)_{ij}|
    double unitarity_defect() const;

  private:
    Gate(std::size_t dim, std::vector<Complex> entries, bool checked);

    std::size_t dim_;
    std::vector<Complex> m_;
};

enum class ControlKind { RightShift, LeftShift, PowerOfU };

/**
 * Controlled operation between a control and a target subsystem.
 *
 *  - RightShift: |i,j> -> |i, j+i mod d>   (control and target dims equal)
 *  - LeftShift:  |i,j> -> |i, j-i mod d>
 *  - PowerOfU:   |i>|j> -> |i> U^i |j>      (target dim = base.dim(), any control dim)
 */
struct ControlledGateSpec {
    ControlKind kind = ControlKind::RightShift;
    std::optional<Gate> base;

    static ControlledGateSpec right_shift() { return {ControlKind::RightShift, std::nullopt}; }
    static ControlledGateSpec left_shift() { return {ControlKind::LeftShift, std::nullopt}; }
    static ControlledGateSpec power_of(Gate u) { return {ControlKind::PowerOfU, std::move(u)}; }
};

Gate identity_gate(std::size_t dim);
/// [[cos t, sin t], [-sin t, cos t]]
Gate rotation_gate(double theta);
/// H = d^{-1/2} sum_{k,l} exp(2 pi i k l / d) |l><k|; `conjugated` returns H*.
Gate hadamard_gate(std::size_t dim, bool conjugated = false);
/// X^k : |j> -> |j+k mod d>
Gate shift_gate(std::size_t dim, long long k = 1);
Gate pauli_x();
/// Real orthogonal basis change sending alpha|0>+beta|1> to |0> and
/// beta|0>-alpha|1> to |1>.
Gate carrier_basis_gate(double alpha, double beta);

} // namespace qkdlab
