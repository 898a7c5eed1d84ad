#pragma once

#include "qkdlab/adversaries/attack.hpp"
#include "qkdlab/analysis/efficiency.hpp"
#include "qkdlab/analysis/stats.hpp"
#include "qkdlab/protocols/protocol.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace qkdlab {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct ExperimentPlan {
    ProtocolConfig config;
    AttackKind attack = AttackKind::Passive;
    std::size_t trials = 1;
    /// Each round is a check with this probability ...
    double check_fraction = 0.25;
    /// ... and these rounds always are.
    std::set<std::size_t> forced_checks;
    std::uint64_t seed = kDefaultSeed;
    std::size_t jobs = 1;
    CiMethod ci = CiMethod::Normal;
    bool keep_transcripts = false;

    void validate() const;
};

struct TrialResult {
    std::size_t index = 0;
    std::vector<RoundOutcome> outcomes;
    AttackReport attack;
    std::optional<Transcript> transcript;
};

struct ExperimentReport {
    ExperimentPlan plan;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    Interval success_ci;
    std::size_t detections = 0;
    double detection_rate = 0.0;
    Interval detection_ci;
    double qber = 0.0;
    std::vector<double> per_round_qber;
    double leak_fraction = 0.0;
    std::optional<double> mean_rounds_to_detection;
    /// Per-trial details; kept in memory, not serialized.
    std::vector<TrialResult> details;
};

/// Alice's schedule for one trial: symbols, round kinds and modes.
std::vector<RoundPlan> make_schedule(const ExperimentPlan& plan, Rng& alice);

/// Runs one trial with seeds derived from the master seed and trial index.
TrialResult run_trial(const ExperimentPlan& plan, std::size_t index);

ExperimentReport run_experiment(const ExperimentPlan& plan);

/// Detection probability against the number of check rounds n, with the
/// checks placed on rounds 2 .. n+1, no random checks, and n+1 rounds per
/// trial (at least 2).
std::vector<std::pair<std::size_t, double>> detection_curve(const ExperimentPlan& plan,
                                                            const std::vector<std::size_t>& check_counts);

} // namespace qkdlab
