#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trackconc/presence.hpp"

namespace trackconc {

enum class PairProvenance { heuristic, curated };

const char* to_string(PairProvenance provenance);

// A website and an app believed to be the same service.
struct ServicePair {
  std::string web_first_party_id;
  std::string mobile_first_party_id;
  PairProvenance provenance = PairProvenance::heuristic;

  bool operator==(const ServicePair&) const = default;
};

// Heuristic pairing: an app matches a site when the reversal of its first
// two package labels equals the site's registrable domain. Ambiguous
// matches are all emitted, sorted, for human curation.
std::vector<ServicePair> propose_pairs(
    const std::vector<ObservationRecord>& web_corpus,
    const std::vector<ObservationRecord>& mobile_corpus,
    const SuffixRuleSet& rules);

// Curated-pairs CSV: header then web_first_party_id,mobile_first_party_id.
std::vector<ServicePair> load_curated_pairs(const std::filesystem::path& path);

// Tracker entities observed on one first party.
std::set<std::string> entities_on(const PresenceMatrix& matrix,
                                  const std::string& first_party_id);

// Jaccard similarity of the pair's web and mobile tracker sets. Empty on
// both sides -> nullopt (0/0 is undefined). Throws LookupError when a pair
// id is missing from a matrix's corpus.
std::optional<double> overlap_rate(const ServicePair& pair,
                                   const PresenceMatrix& web_matrix,
                                   const PresenceMatrix& mobile_matrix,
                                   Level level);

struct PairOverlap {
  ServicePair pair;
  std::size_t intersection_size = 0;
  std::size_t union_size = 0;
  std::optional<double> rate;  // empty union -> absent, excluded from mean
};

struct OverlapReport {
  std::vector<PairOverlap> per_pair;
  std::optional<double> mean_rate;  // over defined pairs only
  std::size_t defined_pairs = 0;
};

OverlapReport overlap_report(const std::vector<ServicePair>& pairs,
                             const PresenceMatrix& web_matrix,
                             const PresenceMatrix& mobile_matrix, Level level);

// Per-first-party set differences between two detection methods' corpora.
struct RecallComparison {
  Level level = Level::subsidiary;
  double mean_a_minus_b = 0.0;
  double mean_b_minus_a = 0.0;
  double mean_intersection = 0.0;
  std::size_t first_parties = 0;
};

// Compares attributed tracker sets per first party over the id
// intersection of the two corpora (warns when they differ).
RecallComparison compare_methods(const std::vector<ObservationRecord>& corpus_a,
                                 const std::vector<ObservationRecord>& corpus_b,
                                 const KnowledgeBase& kb, Level level,
                                 Diagnostics* diag = nullptr);

}  // namespace trackconc
