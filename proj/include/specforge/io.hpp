#pragma once

#include <string>

#include <json.hpp>

#include "specforge/operator_assembly.hpp"
#include "specforge/truncated_spectrum.hpp"

namespace specforge {

/// {"includes_zero": ..., "points": [...], "intervals": [[lo, hi], ...],
///  "lambda_max": ...}; unknown fields rejected; points/intervals may be
/// omitted (empty).
TargetSet target_set_from_json(const nlohmann::json& j);
nlohmann::json target_set_to_json(const TargetSet& set);

/// Schedule JSON with per-cell absolute positions; infinite strengths are
/// encoded as the string "inf" so the files stay plain JSON.
Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const Schedule& schedule);

TargetSet load_target_set(const std::string& path);
Schedule load_schedule(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

/// CSV with header index,lambda,bracket_lo,bracket_hi,method at 17
/// significant digits.
std::string spectrum_to_csv(const Spectrum& spectrum);

} // namespace specforge
