#include "trackconc/presence.hpp"

#include <thread>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

const char* to_string(Level level) {
  return level == Level::subsidiary ? "subsidiary" : "parent";
}

Level level_from_string(std::string_view name) {
  if (name == "subsidiary") return Level::subsidiary;
  if (name == "parent") return Level::parent;
  throw ConfigError("unknown level: \"" + std::string(name) + "\"");
}

std::set<std::string> attribute_record(const ObservationRecord& record,
                                       const KnowledgeBase& kb, Level level,
                                       std::vector<std::string>* unmatched,
                                       std::vector<std::string>* non_tracker) {
  std::set<std::string> entities;
  const auto add_match = [&](const std::optional<std::string>& match,
                             const std::string& evidence) {
    if (!match) {
      if (unmatched != nullptr) unmatched->push_back(evidence);
      return;
    }
    if (!kb.entity(*match).is_tracker) {
      if (non_tracker != nullptr) non_tracker->push_back(*match);
      return;
    }
    entities.insert(level == Level::parent ? kb.ultimate_parent(*match)
                                           : *match);
  };
  for (const std::string& host : record.third_party_hosts) {
    add_match(kb.match_host(host), host);
  }
  for (const std::string& library : record.third_party_libraries) {
    add_match(kb.match_library(library), library);
  }
  return entities;
}

namespace {

struct PartialPresence {
  std::map<std::string, std::map<std::string, std::uint32_t>> presence;
  std::map<std::string, std::uint64_t> unattributed;
  std::map<std::string, std::uint64_t> non_tracker_hits;
};

void accumulate_records(const std::vector<ObservationRecord>& corpus,
                        std::size_t begin, std::size_t end,
                        const KnowledgeBase& kb, Level level,
                        PartialPresence& out) {
  for (std::size_t i = begin; i < end; ++i) {
    const ObservationRecord& record = corpus[i];
    std::vector<std::string> unmatched;
    std::vector<std::string> non_tracker;
    const std::set<std::string> entities =
        attribute_record(record, kb, level, &unmatched, &non_tracker);
    for (const std::string& entity : entities) {
      out.presence[entity].emplace(record.first_party_id, record.rank);
    }
    for (const std::string& evidence : unmatched) {
      ++out.unattributed[evidence];
    }
    for (const std::string& entity : non_tracker) {
      ++out.non_tracker_hits[entity];
    }
  }
}

// Set unions and count sums commute, so the merged result does not depend
// on partition boundaries or merge order.
void merge_partials(PartialPresence& into, const PartialPresence& from) {
  for (const auto& [entity, edges] : from.presence) {
    into.presence[entity].insert(edges.begin(), edges.end());
  }
  for (const auto& [evidence, count] : from.unattributed) {
    into.unattributed[evidence] += count;
  }
  for (const auto& [entity, count] : from.non_tracker_hits) {
    into.non_tracker_hits[entity] += count;
  }
}

}  // namespace

PresenceMatrix build_presence(const std::vector<ObservationRecord>& corpus,
                              const KnowledgeBase& kb, Level level,
                              unsigned threads) {
  if (corpus.empty()) {
    throw ValidationError("empty corpus: presence needs at least one record");
  }
  PresenceMatrix matrix;
  matrix.platform = corpus.front().platform;
  matrix.level = level;
  for (const ObservationRecord& record : corpus) {
    matrix.corpus.emplace(record.first_party_id, record.rank);
  }

  PartialPresence merged;
  if (threads <= 1 || corpus.size() < 2) {
    accumulate_records(corpus, 0, corpus.size(), kb, level, merged);
  } else {
    const unsigned worker_count =
        std::min<unsigned>(threads, static_cast<unsigned>(corpus.size()));
    std::vector<PartialPresence> partials(worker_count);
    std::vector<std::thread> workers;
    const std::size_t chunk =
        (corpus.size() + worker_count - 1) / worker_count;
    for (unsigned w = 0; w < worker_count; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(corpus.size(), begin + chunk);
      workers.emplace_back([&, begin, end, w] {
        accumulate_records(corpus, begin, end, kb, level, partials[w]);
      });
    }
    for (std::thread& worker : workers) worker.join();
    for (const PartialPresence& partial : partials) {
      merge_partials(merged, partial);
    }
  }

  matrix.presence = std::move(merged.presence);
  matrix.unattributed = std::move(merged.unattributed);
  matrix.non_tracker_hits = std::move(merged.non_tracker_hits);
  return matrix;
}

PresenceMatrix apply_coverage_threshold(const PresenceMatrix& matrix,
                                        double min_fraction) {
  if (!(min_fraction >= 0.0 && min_fraction <= 1.0)) {
    throw ConfigError("min coverage fraction must be in [0,1], got " +
                      fmt9(min_fraction));
  }
  // Keep entities at exactly the boundary; the epsilon absorbs the binary
  // representation of fractions like 0.005.
  const double cutoff =
      min_fraction * static_cast<double>(matrix.corpus_size()) - 1e-9;
  PresenceMatrix out = matrix;
  std::erase_if(out.presence, [&](const auto& item) {
    return static_cast<double>(item.second.size()) < cutoff;
  });
  return out;
}

PresenceMatrix consolidate_to_parent(const PresenceMatrix& matrix,
                                     const KnowledgeBase& kb) {
  PresenceMatrix out;
  out.platform = matrix.platform;
  out.level = Level::parent;
  out.corpus = matrix.corpus;
  out.unattributed = matrix.unattributed;
  out.non_tracker_hits = matrix.non_tracker_hits;
  for (const auto& [entity, edges] : matrix.presence) {
    const std::string& root = kb.ultimate_parent(entity);
    out.presence[root].insert(edges.begin(), edges.end());
  }
  return out;
}

void write_presence(std::ostream& out, const PresenceMatrix& matrix) {
  out << "entity_id,first_party_id,rank\n";
  for (const auto& [entity, edges] : matrix.presence) {
    for (const auto& [first_party, rank] : edges) {
      out << csv_row({entity, first_party, std::to_string(rank)}) << "\n";
    }
  }
}

}  // namespace trackconc
