#pragma once

#include "qkdlab/analysis/experiment.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qkdlab {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { Json, Csv, Table };

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

/// The effective configuration, in the same flat form the config file uses.
nlohmann::ordered_json plan_json(const ExperimentPlan& plan);

nlohmann::ordered_json report_json(const ExperimentReport& report);

/// Transmittance grid used for the practical-efficiency curves.
std::vector<double> default_tau_grid();

std::string render_report(const ExperimentReport& report, OutputFormat format);

/// epsilon and epsilon'(tau) for the reusable-key scheme and the reference
/// schemes, plus the crossovers against the reusable-key scheme.
std::string render_efficiency(const std::vector<double>& taus, int trips_exponent, OutputFormat format);

std::string render_detection_curve(const ExperimentPlan& plan,
                                   const std::vector<std::pair<std::size_t, double>>& curve, OutputFormat format);

} // namespace qkdlab
