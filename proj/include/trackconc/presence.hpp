#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "trackconc/entity_kb.hpp"
#include "trackconc/observation.hpp"

namespace trackconc {

enum class Level { subsidiary, parent };

const char* to_string(Level level);
Level level_from_string(std::string_view name);

// Bipartite entity <-> first-party presence. The substrate for every
// metric: presence maps each tracker entity to the first parties (with
// ranks) it was observed on.
struct PresenceMatrix {
  Platform platform = Platform::web;
  Level level = Level::subsidiary;
  std::map<std::string, std::uint32_t> corpus;  // first_party_id -> rank
  std::map<std::string, std::map<std::string, std::uint32_t>>
      presence;  // entity_id -> {first_party_id -> rank}
  std::map<std::string, std::uint64_t> unattributed;  // host/prefix -> count
  std::map<std::string, std::uint64_t>
      non_tracker_hits;  // matched but is_tracker=false, for diagnostics

  std::size_t corpus_size() const { return corpus.size(); }
};

// Tracker entities evidenced by one record (hosts OR libraries; one edge
// per entity regardless of evidence count). At parent level ids are
// consolidated to ultimate parents. Non-tracker matches and unmatched
// evidence are reported through the optional out-params.
std::set<std::string> attribute_record(
    const ObservationRecord& record, const KnowledgeBase& kb, Level level,
    std::vector<std::string>* unmatched = nullptr,
    std::vector<std::string>* non_tracker = nullptr);

// Joins a corpus with the knowledge base. `threads` > 1 splits the corpus
// across workers; the merged result is identical for any thread count.
PresenceMatrix build_presence(const std::vector<ObservationRecord>& corpus,
                              const KnowledgeBase& kb, Level level,
                              unsigned threads = 1);

// Drops entities present on fewer than min_fraction * corpus_size first
// parties (kept at exactly the boundary).
PresenceMatrix apply_coverage_threshold(const PresenceMatrix& matrix,
                                        double min_fraction);

// Re-keys a subsidiary-level matrix by ultimate parent, unioning presence
// sets (so co-occurring subsidiaries collapse to one edge).
PresenceMatrix consolidate_to_parent(const PresenceMatrix& matrix,
                                     const KnowledgeBase& kb);

// Line-delimited export: header then one "entity_id,first_party_id,rank"
// row per edge, ordered by entity then first party.
void write_presence(std::ostream& out, const PresenceMatrix& matrix);

}  // namespace trackconc
