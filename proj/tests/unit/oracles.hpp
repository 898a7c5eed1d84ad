#pragma once

// Test-only reference computations. Nothing here calls into the gate
// application or partial-trace code of the library; states are written down
// term by term and ranks are computed by plain Gaussian elimination.

#include "qkdlab/qcore/qcore.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using qkdlab::Complex;

struct Term {
    std::vector<std::size_t> digits;
    Complex amp;
};

/// Sum of explicit basis terms, normalized.
inline qkdlab::StateVector from_terms(const qkdlab::SubsystemLayout& layout, const std::vector<Term>& terms) {
    std::vector<Complex> amps(layout.total_dim());
    for (const auto& t : terms) {
        amps[layout.encode(t.digits)] += t.amp;
    }
    return qkdlab::StateVector::normalized(layout, std::move(amps));
}

/// Rank of a dense complex matrix by Gaussian elimination with partial pivoting.
inline std::size_t matrix_rank(std::vector<std::vector<Complex>> m, double tol = 1e-9) {
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t best = rank;
        for (std::size_t r = rank; r < rows; ++r) {
            if (std::abs(m[r][c]) > std::abs(m[best][c])) {
                best = r;
            }
        }
        if (std::abs(m[best][c]) < tol) {
            continue;
        }
        std::swap(m[best], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            const Complex f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) {
                m[r][k] -= f * m[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

/// Schmidt rank of `state` across the cut {subsystem at positions `keep`} | rest,
/// i.e. the rank of the reduced density matrix.
inline std::size_t schmidt_rank(const qkdlab::StateVector& state, const std::vector<std::size_t>& keep) {
    const auto& layout = state.layout();
    std::size_t dk = 1;
    for (auto p : keep) {
        dk *= layout.dims()[p];
    }
    const std::size_t dr = state.size() / dk;
    std::vector<std::vector<Complex>> m(dk, std::vector<Complex>(dr));
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        const auto digits = layout.decode(idx);
        std::size_t k = 0;
        std::size_t r = 0;
        for (std::size_t p = 0; p < layout.count(); ++p) {
            bool kept = false;
            for (auto q : keep) {
                kept = kept || q == p;
            }
            if (kept) {
                k = k * layout.dims()[p] + digits[p];
            } else {
                r = r * layout.dims()[p] + digits[p];
            }
        }
        m[k][r] = state.amplitudes()[idx];
    }
    return matrix_rank(std::move(m));
}

/// Reduced density matrix on a single subsystem position, computed by direct summation.
inline std::vector<std::vector<Complex>> single_site_density(const qkdlab::StateVector& state, std::size_t pos) {
    const auto& layout = state.layout();
    const auto d = layout.dims()[pos];
    std::vector<std::vector<Complex>> rho(d, std::vector<Complex>(d));
    for (std::size_t i = 0; i < state.size(); ++i) {
        auto di = layout.decode(i);
        for (std::size_t j = 0; j < state.size(); ++j) {
            auto dj = layout.decode(j);
            bool same_rest = true;
            for (std::size_t p = 0; p < layout.count(); ++p) {
                if (p != pos && di[p] != dj[p]) {
                    same_rest = false;
                }
            }
            if (same_rest) {
                rho[di[pos]][dj[pos]] += state.amplitudes()[i] * std::conj(state.amplitudes()[j]);
            }
        }
    }
    return rho;
}

inline double binomial_sigma(double p, std::size_t n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

} // namespace oracle
