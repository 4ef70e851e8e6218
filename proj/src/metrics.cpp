#include "trackconc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

double RankWeight::operator()(std::uint32_t rank) const {
  if (exponent == 1.0) return 1.0 / static_cast<double>(rank);
  return 1.0 / std::pow(static_cast<double>(rank), exponent);
}

double prominence(const PresenceMatrix& matrix, const std::string& entity_id,
                  RankWeight weight) {
  const auto it = matrix.presence.find(entity_id);
  if (it == matrix.presence.end()) {
    throw LookupError("entity \"" + entity_id + "\" not present in matrix");
  }
  double sum = 0.0;
  for (const auto& [first_party, rank] : it->second) {
    sum += weight(rank);
  }
  return sum;
}

MetricsTable compute_metrics(const PresenceMatrix& matrix,
                             const KnowledgeBase& kb, RankWeight weight) {
  if (matrix.presence.empty()) {
    throw EmptyMarketError("no entities in matrix: nothing to rank");
  }

  MetricsTable table;
  table.platform = matrix.platform;
  table.level = matrix.level;
  table.rows.reserve(matrix.presence.size());
  double total_prominence = 0.0;
  std::uint64_t total_prevalence = 0;
  for (const auto& [entity_id, edges] : matrix.presence) {
    EntityMetrics row;
    row.entity_id = entity_id;
    row.display_name =
        kb.contains(entity_id) ? kb.entity(entity_id).display_name : entity_id;
    row.prevalence = edges.size();
    row.prominence = prominence(matrix, entity_id, weight);
    total_prevalence += row.prevalence;
    total_prominence += row.prominence;
    table.rows.push_back(std::move(row));
  }
  for (EntityMetrics& row : table.rows) {
    row.ish = static_cast<double>(row.prevalence) /
              static_cast<double>(total_prevalence);
    row.prowish = row.prominence / total_prominence;
  }

  // Ranks: descending metric, ties broken by ascending entity_id.
  std::vector<std::size_t> order(table.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto assign_ranks = [&](auto metric_of, auto assign) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto ma = metric_of(table.rows[a]);
      const auto mb = metric_of(table.rows[b]);
      if (ma != mb) return ma > mb;
      return table.rows[a].entity_id < table.rows[b].entity_id;
    });
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      assign(table.rows[order[pos]], static_cast<std::uint32_t>(pos + 1));
    }
  };
  assign_ranks([](const EntityMetrics& r) { return r.prevalence; },
               [](EntityMetrics& r, std::uint32_t rank) {
                 r.prevalence_rank = rank;
               });
  assign_ranks([](const EntityMetrics& r) { return r.prominence; },
               [](EntityMetrics& r, std::uint32_t rank) {
                 r.prominence_rank = rank;
               });
  for (EntityMetrics& row : table.rows) {
    row.rank_change = static_cast<std::int32_t>(row.prevalence_rank) -
                      static_cast<std::int32_t>(row.prominence_rank);
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const EntityMetrics& a, const EntityMetrics& b) {
              return a.prominence_rank < b.prominence_rank;
            });
  return table;
}

RankMovementReport rank_movement_report(const MetricsTable& table,
                                        std::size_t top_n) {
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
  RankMovementReport report;
  report.top_rows = table.rows;
  std::sort(report.top_rows.begin(), report.top_rows.end(),
            [](const EntityMetrics& a, const EntityMetrics& b) {
              return a.prevalence_rank < b.prevalence_rank;
            });
  if (report.top_rows.size() > top_n) report.top_rows.resize(top_n);
  std::size_t negative = 0;
  for (const EntityMetrics& row : table.rows) {
    if (row.rank_change < 0) ++negative;
  }
  report.negative_fraction =
      table.rows.empty()
          ? 0.0
          : static_cast<double>(negative) /
                static_cast<double>(table.rows.size());
  return report;
}

namespace {

std::size_t row_limit(const MetricsTable& table,
                      std::optional<std::size_t> top) {
  return top ? std::min(*top, table.rows.size()) : table.rows.size();
}

}  // namespace

void write_metrics_csv(std::ostream& out, const MetricsTable& table,
                       std::optional<std::size_t> top) {
  out << "entity_id,display_name,prevalence,prominence,ish,prowish,"
         "prevalence_rank,prominence_rank,rank_change\n";
  const std::size_t limit = row_limit(table, top);
  for (std::size_t i = 0; i < limit; ++i) {
    const EntityMetrics& r = table.rows[i];
    out << csv_row({r.entity_id, r.display_name,
                    std::to_string(r.prevalence), fmt9(r.prominence),
                    fmt9(r.ish), fmt9(r.prowish),
                    std::to_string(r.prevalence_rank),
                    std::to_string(r.prominence_rank),
                    std::to_string(r.rank_change)})
        << "\n";
  }
}

void write_metrics_jsonl(std::ostream& out, const MetricsTable& table,
                         std::optional<std::size_t> top) {
  // Assembled by hand so the float fields stay unquoted JSON numbers with
  // exactly 9 significant digits.
  const auto quote = [](const std::string& s) {
    return nlohmann::json(s).dump();
  };
  const std::size_t limit = row_limit(table, top);
  for (std::size_t i = 0; i < limit; ++i) {
    const EntityMetrics& r = table.rows[i];
    out << "{\"entity_id\":" << quote(r.entity_id)
        << ",\"display_name\":" << quote(r.display_name)
        << ",\"prevalence\":" << r.prevalence
        << ",\"prominence\":" << fmt9(r.prominence)
        << ",\"ish\":" << fmt9(r.ish) << ",\"prowish\":" << fmt9(r.prowish)
        << ",\"prevalence_rank\":" << r.prevalence_rank
        << ",\"prominence_rank\":" << r.prominence_rank
        << ",\"rank_change\":" << r.rank_change << "}\n";
  }
}

}  // namespace trackconc
