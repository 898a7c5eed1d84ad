#include "qkdlab/qcore/gate.hpp"

#include "qkdlab/qcore/errors.hpp"

#include <cmath>
#include <numbers>

namespace qkdlab {

Gate::Gate(std::size_t dim, std::vector<Complex> entries) : Gate(dim, std::move(entries), true) {}

Gate::Gate(std::size_t dim, std::vector<Complex> entries, bool checked)
    : dim_(dim), m_(std::move(entries)) {
    if (dim_ == 0) {
        throw DimensionError("gate: dimension must be positive");
    }
    if (m_.size() != dim_ * dim_) {
        throw DimensionError("gate: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                             std::to_string(m_.size()));
    }
    if (checked && unitarity_defect() >= kAlgebraTol) {
        throw NumericalError("gate: matrix is not unitary (defect " +
                             std::to_string(unitarity_defect()) + ")");
    }
}

double Gate::unitarity_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < dim_; ++k) {
                acc += std::conj(m_[k * dim_ + i]) * m_[k * dim_ + j];
            }
            if (i == j) {
                acc -= 1.0;
            }
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

Gate Gate::adjoint() const {
    std::vector<Complex> out(m_.size());
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out[j * dim_ + i] = std::conj(m_[i * dim_ + j]);
        }
    }
    return {dim_, std::move(out), false};
}

Gate Gate::conjugate() const {
    std::vector<Complex> out(m_.size());
    for (std::size_t i = 0; i < m_.size(); ++i) {
        out[i] = std::conj(m_[i]);
    }
    return {dim_, std::move(out), false};
}

Gate Gate::then_after(const Gate& rhs) const {
    if (rhs.dim_ != dim_) {
        throw DimensionError("gate product: dimensions " + std::to_string(dim_) + " and " +
                             std::to_string(rhs.dim_));
    }
    std::vector<Complex> out(m_.size());
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const Complex a = m_[i * dim_ + k];
            for (std::size_t j = 0; j < dim_; ++j) {
                out[i * dim_ + j] += a * rhs.m_[k * dim_ + j];
            }
        }
    }
    return {dim_, std::move(out), false};
}

Gate Gate::power(std::size_t n) const {
    Gate result = identity_gate(dim_);
    for (std::size_t i = 0; i < n; ++i) {
        result = then_after(result);
    }
    return result;
}

Gate identity_gate(std::size_t dim) {
    std::vector<Complex> m(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m[i * dim + i] = 1.0;
    }
    return {dim, std::move(m)};
}

Gate rotation_gate(double theta) {
    if (!std::isfinite(theta)) {
        throw DimensionError("rotation_gate: theta must be finite");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {2, {c, s, -s, c}};
}

Gate hadamard_gate(std::size_t dim, bool conjugated) {
    if (dim == 0) {
        throw DimensionError("hadamard_gate: dimension must be >= 1");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    const double sign = conjugated ? -1.0 : 1.0;
    std::vector<Complex> m(dim * dim);
    for (std::size_t l = 0; l < dim; ++l) {
        for (std::size_t k = 0; k < dim; ++k) {
            // Reduce k*l mod dim first so the phase argument stays small.
            const auto kl = static_cast<double>((k * l) % dim);
            const double angle = sign * 2.0 * std::numbers::pi * kl / static_cast<double>(dim);
            m[l * dim + k] = std::polar(scale, angle);
        }
    }
    return {dim, std::move(m)};
}

Gate shift_gate(std::size_t dim, long long k) {
    if (dim == 0) {
        throw DimensionError("shift_gate: dimension must be >= 1");
    }
    const auto d = static_cast<long long>(dim);
    const auto shift = static_cast<std::size_t>(((k % d) + d) % d);
    std::vector<Complex> m(dim * dim);
    for (std::size_t j = 0; j < dim; ++j) {
        m[((j + shift) % dim) * dim + j] = 1.0;
    }
    return {dim, std::move(m)};
}

Gate pauli_x() { return shift_gate(2, 1); }

Gate carrier_basis_gate(double alpha, double beta) {
    return {2, {alpha, beta, beta, -alpha}};
}

} // namespace qkdlab
