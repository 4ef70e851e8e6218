#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "trackconc/metrics.hpp"

namespace trackconc {

enum class Weight { ish, prowish };

const char* to_string(Weight weight);
Weight weight_from_string(std::string_view name);

struct MarketShares {
  Weight weight = Weight::prowish;
  Level level = Level::subsidiary;
  std::map<std::string, double> shares;  // entity_id -> s_i, sums to 1
  std::size_t firm_count = 0;
};

enum class Classification {
  highly_competitive,   // hhi < 0.01
  unconcentrated,       // hhi < 0.15
  moderate,             // 0.15 <= hhi <= 0.25
  highly_concentrated,  // hhi > 0.25
};

const char* to_string(Classification classification);

struct ConcentrationReport {
  double hhi = 0.0;
  Classification classification = Classification::highly_competitive;
  bool eu_flag = false;  // hhi > 0.1
  bool us_flag = false;  // hhi > 0.25
};

// Sum of squared shares plus the regulatory classification. Rejects share
// vectors that do not sum to 1 within 1e-9.
ConcentrationReport hhi(const MarketShares& shares);

// Projects the chosen share column out of a metrics table.
MarketShares market_shares(const MetricsTable& table, Weight weight);

// Cross-platform combination: per entity, prevalence/prominence sums
// across both tables (single-platform entities keep their value).
std::map<std::string, double> combine_values(const MetricsTable& a,
                                             const MetricsTable& b,
                                             Weight weight);
// The combined values renormalized into shares over the entity union.
MarketShares combine_markets(const MetricsTable& a, const MetricsTable& b,
                             Weight weight);

struct MergerScenario {
  std::string parent_id;
  std::vector<std::string> subsidiary_ids;
  double hhi_actual = 0.0;
  double hhi_counterfactual = 0.0;
  double delta = 0.0;       // actual - counterfactual
  bool eu_concern = false;  // delta > 0.025 and hhi_actual > 0.1
};

// What-if de-merger: hhi_actual from standard parent-level consolidation
// of the subsidiary matrix, hhi_counterfactual from the same pipeline
// with the listed subsidiaries' parent links severed. A min_coverage > 0
// re-applies the coverage threshold after each consolidation.
MergerScenario simulate_demerger(const PresenceMatrix& subsidiary_matrix,
                                 const KnowledgeBase& kb,
                                 const std::string& parent_id,
                                 const std::vector<std::string>& subsidiary_ids,
                                 Weight weight, double min_coverage = 0.0,
                                 Diagnostics* diag = nullptr);

struct ScenarioSpec {
  std::string parent_id;
  std::vector<std::string> subsidiary_ids;
  Platform platform = Platform::web;
};

// JSONL scenario file: {"parent_id", "subsidiary_ids", "platform"} per line.
std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path);

}  // namespace trackconc
