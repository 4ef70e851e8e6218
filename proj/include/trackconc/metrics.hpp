#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trackconc/entity_kb.hpp"
#include "trackconc/presence.hpp"

namespace trackconc {

// Audience weight of one first party. The default reciprocal rank can be
// reshaped with a Zipf-style exponent; 1.0 is the only endorsed setting.
struct RankWeight {
  double exponent = 1.0;

  double operator()(std::uint32_t rank) const;
};

struct EntityMetrics {
  std::string entity_id;
  std::string display_name;
  std::uint64_t prevalence = 0;   // distinct first parties
  double prominence = 0.0;        // sum of reciprocal ranks
  double ish = 0.0;               // prevalence / total prevalence
  double prowish = 0.0;           // prominence / total prominence
  std::uint32_t prevalence_rank = 0;
  std::uint32_t prominence_rank = 0;
  std::int32_t rank_change = 0;   // prevalence_rank - prominence_rank
};

struct MetricsTable {
  Platform platform = Platform::web;
  Level level = Level::subsidiary;
  std::vector<EntityMetrics> rows;  // sorted by prominence descending
};

// Sum of 1/rank over the entity's presence set. Throws LookupError for an
// entity not in the matrix.
double prominence(const PresenceMatrix& matrix, const std::string& entity_id,
                  RankWeight weight = {});

// Full per-entity table: prevalence, prominence, ISH, PROWISH and both
// rank columns. Ranks break ties by ascending entity_id so output is
// deterministic. Throws EmptyMarketError when the matrix has no entities.
MetricsTable compute_metrics(const PresenceMatrix& matrix,
                             const KnowledgeBase& kb, RankWeight weight = {});

struct RankMovementReport {
  std::vector<EntityMetrics> top_rows;  // top_n by prevalence rank
  double negative_fraction = 0.0;       // share of entities that lost rank
};

RankMovementReport rank_movement_report(const MetricsTable& table,
                                        std::size_t top_n);

// CSV columns: entity_id, display_name, prevalence, prominence, ish,
// prowish, prevalence_rank, prominence_rank, rank_change. Floats use 9
// significant digits.
void write_metrics_csv(std::ostream& out, const MetricsTable& table,
                       std::optional<std::size_t> top = std::nullopt);
void write_metrics_jsonl(std::ostream& out, const MetricsTable& table,
                         std::optional<std::size_t> top = std::nullopt);

}  // namespace trackconc
