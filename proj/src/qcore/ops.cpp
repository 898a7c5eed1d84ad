#include "qkdlab/qcore/ops.hpp"

#include "qkdlab/qcore/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace qkdlab {

namespace {

// Row-major sub-index of `digits` restricted to `positions` (in that order).
std::size_t sub_index(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& positions,
                      const std::vector<std::size_t>& dims) {
    std::size_t idx = 0;
    for (auto p : positions) {
        idx = idx * dims[p] + digits[p];
    }
    return idx;
}

std::vector<std::size_t> positions_of(const SubsystemLayout& layout, std::span<const std::string> labels) {
    std::vector<std::size_t> out;
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw LayoutError("subsystem '" + l + "' listed twice");
        }
        out.push_back(layout.position(l));
    }
    return out;
}

} // namespace

StateVector basis_state(const SubsystemLayout& layout, std::span<const std::size_t> indices) {
    std::vector<Complex> amps(layout.total_dim());
    amps[layout.encode(indices)] = 1.0;
    return {layout, std::move(amps)};
}

StateVector bell_state(std::size_t d, const std::string& first, const std::string& second) {
    if (d < 2) {
        throw DimensionError("bell_state: d must be >= 2");
    }
    SubsystemLayout layout({d, d}, {first, second});
    std::vector<Complex> amps(d * d);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
        amps[j * d + j] = a;
    }
    return {std::move(layout), std::move(amps)};
}

StateVector ghz_state(std::size_t d, const std::string& a, const std::string& b, const std::string& c) {
    if (d < 2) {
        throw DimensionError("ghz_state: d must be >= 2");
    }
    SubsystemLayout layout({d, d, d}, {a, b, c});
    std::vector<Complex> amps(d * d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) {
        amps[(j * d + j) * d + j] = amp;
    }
    return {std::move(layout), std::move(amps)};
}

StateVector single(const std::string& label, std::vector<Complex> amps) {
    SubsystemLayout layout({amps.size()}, {label});
    return StateVector::normalized(std::move(layout), std::move(amps));
}

StateVector single_basis(const std::string& label, std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionError("basis index " + std::to_string(index) + " out of range for dimension " +
                             std::to_string(dim));
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return single(label, std::move(amps));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    auto dims = a.layout().dims();
    auto labels = a.layout().labels();
    dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
    labels.insert(labels.end(), b.layout().labels().begin(), b.layout().labels().end());
    SubsystemLayout layout(std::move(dims), std::move(labels), a.layout().max_amplitudes());
    std::vector<Complex> amps;
    amps.reserve(a.size() * b.size());
    for (const auto& x : a.amplitudes()) {
        for (const auto& y : b.amplitudes()) {
            amps.push_back(x * y);
        }
    }
    return StateVector::normalized(std::move(layout), std::move(amps));
}

StateVector apply_single(const StateVector& state, const Gate& gate, const std::string& subsystem) {
    const auto& layout = state.layout();
    const auto pos = layout.position(subsystem);
    const auto d = layout.dims()[pos];
    if (gate.dim() != d) {
        throw DimensionError("apply_single: gate of dimension " + std::to_string(gate.dim()) +
                             " on subsystem '" + subsystem + "' of dimension " + std::to_string(d));
    }
    const auto stride = layout.stride(pos);
    const auto& in = state.amplitudes();
    std::vector<Complex> out(in.size());
    std::vector<Complex> fibre(d);
    const std::size_t block = d * stride;
    for (std::size_t outer = 0; outer < in.size(); outer += block) {
        for (std::size_t inner = 0; inner < stride; ++inner) {
            const std::size_t base = outer + inner;
            for (std::size_t k = 0; k < d; ++k) {
                fibre[k] = in[base + k * stride];
            }
            for (std::size_t l = 0; l < d; ++l) {
                Complex acc{};
                for (std::size_t k = 0; k < d; ++k) {
                    acc += gate(l, k) * fibre[k];
                }
                out[base + l * stride] = acc;
            }
        }
    }
    return {layout, std::move(out)};
}

StateVector apply_controlled(const StateVector& state, const ControlledGateSpec& spec,
                             const std::string& control, const std::string& target) {
    if (control == target) {
        throw LayoutError("apply_controlled: control and target are both '" + control + "'");
    }
    const auto& layout = state.layout();
    const auto cpos = layout.position(control);
    const auto tpos = layout.position(target);
    const auto dc = layout.dims()[cpos];
    const auto dt = layout.dims()[tpos];

    std::vector<Gate> per_control;
    per_control.reserve(dc);
    switch (spec.kind) {
    case ControlKind::RightShift:
    case ControlKind::LeftShift: {
        if (dc != dt) {
            throw DimensionError("apply_controlled: shift gates need equal dimensions, got control " +
                                 std::to_string(dc) + " and target " + std::to_string(dt));
        }
        const long long sign = spec.kind == ControlKind::RightShift ? 1 : -1;
        for (std::size_t i = 0; i < dc; ++i) {
            per_control.push_back(shift_gate(dt, sign * static_cast<long long>(i)));
        }
        break;
    }
    case ControlKind::PowerOfU: {
        if (!spec.base) {
            throw DimensionError("apply_controlled: power-of-U requires a base gate");
        }
        if (spec.base->dim() != dt) {
            throw DimensionError("apply_controlled: base gate of dimension " + std::to_string(spec.base->dim()) +
                                 " on target of dimension " + std::to_string(dt));
        }
        per_control.push_back(identity_gate(dt));
        for (std::size_t i = 1; i < dc; ++i) {
            per_control.push_back(spec.base->then_after(per_control.back()));
        }
        break;
    }
    }

    const auto cstride = layout.stride(cpos);
    const auto tstride = layout.stride(tpos);
    const auto& in = state.amplitudes();
    std::vector<Complex> out(in.size());
    std::vector<Complex> fibre(dt);
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        if ((idx / tstride) % dt != 0) {
            continue;
        }
        const auto& u = per_control[(idx / cstride) % dc];
        for (std::size_t k = 0; k < dt; ++k) {
            fibre[k] = in[idx + k * tstride];
        }
        for (std::size_t l = 0; l < dt; ++l) {
            Complex acc{};
            for (std::size_t k = 0; k < dt; ++k) {
                acc += u(l, k) * fibre[k];
            }
            out[idx + l * tstride] = acc;
        }
    }
    return {layout, std::move(out)};
}

std::vector<double> probabilities(const StateVector& state, std::span<const std::string> subsystems) {
    const auto& layout = state.layout();
    const auto positions = positions_of(layout, subsystems);
    std::size_t n = 1;
    for (auto p : positions) {
        n *= layout.dims()[p];
    }
    std::vector<double> probs(n, 0.0);
    const auto& amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const double w = std::norm(amps[idx]);
        if (w == 0.0) {
            continue;
        }
        std::size_t sub = 0;
        for (auto p : positions) {
            sub = sub * layout.dims()[p] + (idx / layout.stride(p)) % layout.dims()[p];
        }
        probs[sub] += w;
    }
    return probs;
}

StateVector project(const StateVector& state, const std::string& subsystem, std::size_t outcome) {
    const auto& layout = state.layout();
    const auto pos = layout.position(subsystem);
    const auto d = layout.dims()[pos];
    if (outcome >= d) {
        throw DimensionError("project: outcome " + std::to_string(outcome) + " out of range for '" +
                             subsystem + "'");
    }
    const auto stride = layout.stride(pos);
    std::vector<Complex> out(state.size());
    double weight = 0.0;
    const auto& in = state.amplitudes();
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        if ((idx / stride) % d == outcome) {
            out[idx] = in[idx];
            weight += std::norm(in[idx]);
        }
    }
    if (weight < 1e-300) {
        throw NumericalError("project: outcome " + std::to_string(outcome) + " of '" + subsystem +
                             "' has zero probability");
    }
    return StateVector::normalized(layout, std::move(out));
}

std::pair<MeasurementRecord, StateVector> measure_z(const StateVector& state, const std::string& subsystem,
                                                    Rng& rng) {
    const std::string labels[] = {subsystem};
    const auto probs = probabilities(state, labels);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t outcome = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc && probs[k] > 0.0) {
            outcome = k;
            break;
        }
    }
    if (outcome == probs.size()) {
        // u landed in the rounding gap above the accumulated total.
        for (std::size_t k = probs.size(); k-- > 0;) {
            if (probs[k] > 0.0) {
                outcome = k;
                break;
            }
        }
    }
    MeasurementRecord record{subsystem, outcome, probs[outcome]};
    return {record, project(state, subsystem, outcome)};
}

StateVector remove_subsystem(const StateVector& state, const std::string& subsystem, std::size_t outcome) {
    const auto& layout = state.layout();
    const auto pos = layout.position(subsystem);
    const auto d = layout.dims()[pos];
    if (outcome >= d) {
        throw DimensionError("remove_subsystem: outcome out of range for '" + subsystem + "'");
    }
    const auto stride = layout.stride(pos);
    const auto& in = state.amplitudes();
    std::vector<Complex> out;
    out.reserve(in.size() / d);
    double residual = 0.0;
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        if ((idx / stride) % d == outcome) {
            out.push_back(in[idx]);
        } else {
            residual += std::norm(in[idx]);
        }
    }
    if (residual > kAlgebraTol) {
        throw NumericalError("remove_subsystem: '" + subsystem + "' is not in basis state " +
                             std::to_string(outcome));
    }
    if (layout.count() == 1) {
        throw LayoutError("remove_subsystem: cannot remove the last subsystem");
    }
    return StateVector::normalized(layout.without(subsystem), std::move(out));
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (!(a.layout() == b.layout())) {
        throw LayoutError("fidelity: layouts differ");
    }
    Complex overlap{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        overlap += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return std::min(1.0, std::norm(overlap));
}

double phase_aligned_deviation(const StateVector& a, const StateVector& b) {
    if (!(a.layout() == b.layout())) {
        throw LayoutError("phase_aligned_deviation: layouts differ");
    }
    Complex overlap{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        overlap += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a.amplitudes()[i] * phase - b.amplitudes()[i]));
    }
    return worst;
}

std::vector<Complex> reduced_density(const StateVector& state, std::span<const std::string> subsystems) {
    const auto& layout = state.layout();
    const auto keep = positions_of(layout, subsystems);
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < layout.count(); ++p) {
        if (std::find(keep.begin(), keep.end(), p) == keep.end()) {
            rest.push_back(p);
        }
    }
    std::size_t dk = 1;
    for (auto p : keep) {
        dk *= layout.dims()[p];
    }
    const std::size_t dr = state.size() / dk;

    // M[k][r] = amplitude; rho = M M^dagger.
    std::vector<Complex> m(dk * dr);
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        const auto digits = layout.decode(idx);
        m[sub_index(digits, keep, layout.dims()) * dr + sub_index(digits, rest, layout.dims())] =
            state.amplitudes()[idx];
    }
    std::vector<Complex> rho(dk * dk);
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = i; j < dk; ++j) {
            Complex acc{};
            for (std::size_t r = 0; r < dr; ++r) {
                acc += m[i * dr + r] * std::conj(m[j * dr + r]);
            }
            rho[i * dk + j] = acc;
            rho[j * dk + i] = std::conj(acc);
        }
    }
    return rho;
}

std::size_t partial_trace_rank(const StateVector& state, std::span<const std::string> subsystems) {
    if (subsystems.empty() || subsystems.size() >= state.layout().count()) {
        throw LayoutError("partial_trace_rank: subsystems must be a proper nonempty subset of the layout");
    }
    const auto rho = reduced_density(state, subsystems);
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(rho.size()))));
    Eigen::MatrixXcd mat(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            mat(i, j) = rho[static_cast<std::size_t>(i * n + j)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (solver.eigenvalues()(i) > kRankCutoff) {
            ++rank;
        }
    }
    return rank;
}

} // namespace qkdlab
