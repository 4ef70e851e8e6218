#include "trackconc/market.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

const char* to_string(Weight weight) {
  return weight == Weight::ish ? "ish" : "prowish";
}

Weight weight_from_string(std::string_view name) {
  if (name == "ish") return Weight::ish;
  if (name == "prowish") return Weight::prowish;
  throw ConfigError("unknown weight: \"" + std::string(name) + "\"");
}

const char* to_string(Classification classification) {
  switch (classification) {
    case Classification::highly_competitive:
      return "highly_competitive";
    case Classification::unconcentrated:
      return "unconcentrated";
    case Classification::moderate:
      return "moderate";
    case Classification::highly_concentrated:
      return "highly_concentrated";
  }
  return "?";
}

ConcentrationReport hhi(const MarketShares& shares) {
  if (shares.shares.empty()) {
    throw EmptyMarketError("no shares: market is empty");
  }
  double total = 0.0;
  double sum_of_squares = 0.0;
  for (const auto& [entity, share] : shares.shares) {
    if (!(share > 0.0 && share <= 1.0)) {
      throw ValidationError("share for \"" + entity +
                            "\" outside (0,1]: " + fmt9(share));
    }
    total += share;
    sum_of_squares += share * share;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("shares sum to " + fmt9(total) + ", expected 1");
  }

  ConcentrationReport report;
  report.hhi = sum_of_squares;
  if (report.hhi < 0.01) {
    report.classification = Classification::highly_competitive;
  } else if (report.hhi < 0.15) {
    report.classification = Classification::unconcentrated;
  } else if (report.hhi <= 0.25) {
    report.classification = Classification::moderate;
  } else {
    report.classification = Classification::highly_concentrated;
  }
  report.eu_flag = report.hhi > 0.1;
  report.us_flag = report.hhi > 0.25;
  return report;
}

MarketShares market_shares(const MetricsTable& table, Weight weight) {
  if (table.rows.empty()) {
    throw EmptyMarketError("empty metrics table: no market");
  }
  MarketShares shares;
  shares.weight = weight;
  shares.level = table.level;
  shares.firm_count = table.rows.size();
  for (const EntityMetrics& row : table.rows) {
    shares.shares[row.entity_id] =
        weight == Weight::ish ? row.ish : row.prowish;
  }
  return shares;
}

std::map<std::string, double> combine_values(const MetricsTable& a,
                                             const MetricsTable& b,
                                             Weight weight) {
  if (a.level != b.level) {
    throw ValidationError(
        std::string("cannot combine tables at different levels: ") +
        to_string(a.level) + " vs " + to_string(b.level));
  }
  std::map<std::string, double> values;
  const auto add_table = [&](const MetricsTable& table) {
    for (const EntityMetrics& row : table.rows) {
      values[row.entity_id] += weight == Weight::ish
                                   ? static_cast<double>(row.prevalence)
                                   : row.prominence;
    }
  };
  add_table(a);
  add_table(b);
  return values;
}

MarketShares combine_markets(const MetricsTable& a, const MetricsTable& b,
                             Weight weight) {
  const std::map<std::string, double> values = combine_values(a, b, weight);
  if (values.empty()) {
    throw EmptyMarketError("combined market is empty");
  }
  double total = 0.0;
  for (const auto& [entity, value] : values) total += value;

  MarketShares shares;
  shares.weight = weight;
  shares.level = a.level;
  shares.firm_count = values.size();
  for (const auto& [entity, value] : values) {
    shares.shares[entity] = value / total;
  }
  return shares;
}

namespace {

double pipeline_hhi(const PresenceMatrix& subsidiary_matrix,
                    const KnowledgeBase& kb, Weight weight,
                    double min_coverage) {
  PresenceMatrix consolidated = consolidate_to_parent(subsidiary_matrix, kb);
  if (min_coverage > 0.0) {
    consolidated = apply_coverage_threshold(consolidated, min_coverage);
  }
  const MetricsTable table = compute_metrics(consolidated, kb);
  return hhi(market_shares(table, weight)).hhi;
}

}  // namespace

MergerScenario simulate_demerger(const PresenceMatrix& subsidiary_matrix,
                                 const KnowledgeBase& kb,
                                 const std::string& parent_id,
                                 const std::vector<std::string>& subsidiary_ids,
                                 Weight weight, double min_coverage,
                                 Diagnostics* diag) {
  if (subsidiary_matrix.level != Level::subsidiary) {
    throw ValidationError("simulate_demerger needs a subsidiary-level matrix");
  }
  if (!kb.contains(parent_id)) {
    throw LookupError("unknown parent \"" + parent_id + "\"");
  }
  for (const std::string& sub : subsidiary_ids) {
    if (!kb.contains(sub)) {
      throw LookupError("unknown subsidiary \"" + sub + "\"");
    }
    // The chain from the subsidiary has to pass through the parent.
    bool owned = false;
    std::optional<std::string> current = kb.entity(sub).parent_id;
    while (current) {
      if (*current == parent_id) {
        owned = true;
        break;
      }
      current = kb.entity(*current).parent_id;
    }
    if (!owned) {
      throw ValidationError("\"" + sub + "\" is not owned by \"" + parent_id +
                            "\"");
    }
    if (subsidiary_matrix.presence.find(sub) ==
        subsidiary_matrix.presence.end()) {
      warn(diag, "subsidiary \"" + sub +
                     "\" absent from matrix: zero contribution");
    }
  }

  MergerScenario scenario;
  scenario.parent_id = parent_id;
  scenario.subsidiary_ids = subsidiary_ids;
  scenario.hhi_actual =
      pipeline_hhi(subsidiary_matrix, kb, weight, min_coverage);
  if (subsidiary_ids.empty()) {
    scenario.hhi_counterfactual = scenario.hhi_actual;
  } else {
    const KnowledgeBase severed = sever_parent_links(kb, subsidiary_ids);
    scenario.hhi_counterfactual =
        pipeline_hhi(subsidiary_matrix, severed, weight, min_coverage);
  }
  scenario.delta = scenario.hhi_actual - scenario.hhi_counterfactual;
  scenario.eu_concern = scenario.delta > 0.025 && scenario.hhi_actual > 0.1;
  return scenario;
}

std::vector<ScenarioSpec> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenarios file: " + path.string());
  std::vector<ScenarioSpec> scenarios;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const nlohmann::json doc = nlohmann::json::parse(line);
      ScenarioSpec spec;
      spec.parent_id = doc.at("parent_id").get<std::string>();
      for (const auto& sub : doc.at("subsidiary_ids")) {
        spec.subsidiary_ids.push_back(sub.get<std::string>());
      }
      spec.platform =
          platform_from_string(doc.at("platform").get<std::string>());
      if (spec.subsidiary_ids.empty()) {
        throw ValidationError("subsidiary_ids must be non-empty");
      }
      scenarios.push_back(std::move(spec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
  return scenarios;
}

}  // namespace trackconc
