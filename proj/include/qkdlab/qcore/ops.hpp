#pragma once

#include "qkdlab/qcore/gate.hpp"
#include "qkdlab/qcore/rng.hpp"
#include "qkdlab/qcore/state.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qkdlab {

struct MeasurementRecord {
    std::string subsystem;
    std::size_t outcome = 0;
    /// Born weight of `outcome` before the collapse.
    double probability = 0.0;
};

StateVector basis_state(const SubsystemLayout& layout, std::span<const std::size_t> indices);

/// (1/sqrt d) sum_j |j,j> over subsystems labelled `first`, `second`.
StateVector bell_state(std::size_t d, const std::string& first = "A",
                       const std::string& second = "B");
/// (1/sqrt d) sum_j |j,j,j>.
StateVector ghz_state(std::size_t d, const std::string& a = "a", const std::string& b = "b",
                      const std::string& c = "c");

/// Single-subsystem state with the given amplitudes (normalized on entry).
StateVector single(const std::string& label, std::vector<Complex> amps);
/// Computational basis vector |index> of dimension dim.
StateVector single_basis(const std::string& label, std::size_t dim, std::size_t index);

/// a (x) b with b's subsystems appended after a's.
StateVector tensor(const StateVector& a, const StateVector& b);

StateVector apply_single(const StateVector& state, const Gate& gate, const std::string& subsystem);
StateVector apply_controlled(const StateVector& state, const ControlledGateSpec& spec,
                             const std::string& control, const std::string& target);

/// Joint outcome distribution of a z-measurement on `subsystems`, indexed
/// row-major over their dimensions in the order given.
std::vector<double> probabilities(const StateVector& state, std::span<const std::string> subsystems);

/// Normalized projection onto `outcome`; NumericalError if its weight is below 1e-300.
StateVector project(const StateVector& state, const std::string& subsystem, std::size_t outcome);

std::pair<MeasurementRecord, StateVector> measure_z(const StateVector& state,
                                                    const std::string& subsystem, Rng& rng);

/// Removes a subsystem known to be in basis state |outcome>. Throws
/// NumericalError when it is not (residual weight > kAlgebraTol).
StateVector remove_subsystem(const StateVector& state, const std::string& subsystem,
                             std::size_t outcome);

/// |<a|b>|^2; layouts must match.
double fidelity(const StateVector& a, const StateVector& b);

/// Max amplitude deviation after removing the relative global phase.
double phase_aligned_deviation(const StateVector& a, const StateVector& b);

/// Number of eigenvalues above kRankCutoff of the reduced density matrix on
/// `subsystems` (a proper, nonempty subset of the layout).
std::size_t partial_trace_rank(const StateVector& state, std::span<const std::string> subsystems);

/// Reduced density matrix on `subsystems`, row-major, dimension prod(dims).
std::vector<Complex> reduced_density(const StateVector& state, std::span<const std::string> subsystems);

} // namespace qkdlab
