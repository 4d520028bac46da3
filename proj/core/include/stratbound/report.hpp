#pragma once

// Report rendering: JSON, CSV and plain text.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "stratbound/counters.hpp"
#include "stratbound/knowledge.hpp"
#include "stratbound/outcome.hpp"
#include "stratbound/profiler.hpp"

namespace stratbound {

enum class ReportFormat : std::uint8_t { json, csv, text };
std::optional<ReportFormat> parse_report_format(std::string_view s);

struct ReportMeta {
  std::string command;
  std::uint64_t seed = 0;
  /// Canonical description of the experiment; hashed into spec_hash.
  std::string spec;
  /// The only nondeterministic field; off in tests for byte comparisons.
  bool timestamp = true;
};

/// FNV-1a 64-bit, 16 lowercase hex digits.
std::string spec_hash(std::string_view spec);
const char* tool_version();

/// "0/0 0/1 0/2 (1/3)^w"
std::string format_lasso(const Model& m, const LassoPath& l);
std::string format_path(const Model& m, std::span<const StateId> path);

std::string render_enforcement(const Model& m, const EnforcementReport& r, const ReportMeta& meta, ReportFormat f);
std::string render_outcomes(const Model& m, const OutcomeTree& t, const ReportMeta& meta, ReportFormat f);
std::string render_profile(const ComplexityProfile& p, const std::optional<GrowthVerdict>& growth, ProfileAxis axis,
                           const ReportMeta& meta, ReportFormat f);
/// `instances` supplies state names for counterexamples; may be empty.
std::string render_ability(std::span<const Instance> instances, const AbilityReport& r, const ReportMeta& meta,
                           ReportFormat f);
std::string render_synthesis(const Model& m, const Synthesis& s, const ReportMeta& meta, ReportFormat f);
std::string render_energy(const EnergyVerdict& v, std::uint32_t n0, std::uint32_t k, const ReportMeta& meta,
                          ReportFormat f);

}  // namespace stratbound
