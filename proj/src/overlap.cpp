#include "trackconc/overlap.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

const char* to_string(PairProvenance provenance) {
  return provenance == PairProvenance::heuristic ? "heuristic" : "curated";
}

std::vector<ServicePair> propose_pairs(
    const std::vector<ObservationRecord>& web_corpus,
    const std::vector<ObservationRecord>& mobile_corpus,
    const SuffixRuleSet& rules) {
  std::map<std::string, std::vector<std::string>> web_by_domain;
  for (const ObservationRecord& site : web_corpus) {
    web_by_domain[registrable_domain(site.first_party_id, rules)].push_back(
        site.first_party_id);
  }
  std::vector<ServicePair> pairs;
  for (const ObservationRecord& app : mobile_corpus) {
    std::string domain;
    try {
      domain = candidate_domain(app.first_party_id);
    } catch (const Error&) {
      continue;  // unpairable package name
    }
    const auto it = web_by_domain.find(domain);
    if (it == web_by_domain.end()) continue;
    for (const std::string& site_id : it->second) {
      pairs.push_back({site_id, app.first_party_id, PairProvenance::heuristic});
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const ServicePair& a, const ServicePair& b) {
              if (a.web_first_party_id != b.web_first_party_id) {
                return a.web_first_party_id < b.web_first_party_id;
              }
              return a.mobile_first_party_id < b.mobile_first_party_id;
            });
  return pairs;
}

std::vector<ServicePair> load_curated_pairs(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pairs file: " + path.string());
  std::vector<ServicePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (line_no == 1 && trimmed == "web_first_party_id,mobile_first_party_id") {
      continue;  // header
    }
    const std::vector<std::string> fields = split(trimmed, ',');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected web_first_party_id,mobile_first_party_id");
    }
    pairs.push_back({std::string(trim(fields[0])), std::string(trim(fields[1])),
                     PairProvenance::curated});
  }
  return pairs;
}

std::set<std::string> entities_on(const PresenceMatrix& matrix,
                                  const std::string& first_party_id) {
  std::set<std::string> entities;
  for (const auto& [entity, edges] : matrix.presence) {
    if (edges.find(first_party_id) != edges.end()) entities.insert(entity);
  }
  return entities;
}

namespace {

PairOverlap pair_overlap(const ServicePair& pair,
                         const PresenceMatrix& web_matrix,
                         const PresenceMatrix& mobile_matrix) {
  if (web_matrix.corpus.find(pair.web_first_party_id) ==
      web_matrix.corpus.end()) {
    throw LookupError("pair web id \"" + pair.web_first_party_id +
                      "\" not in web corpus");
  }
  if (mobile_matrix.corpus.find(pair.mobile_first_party_id) ==
      mobile_matrix.corpus.end()) {
    throw LookupError("pair mobile id \"" + pair.mobile_first_party_id +
                      "\" not in mobile corpus");
  }
  const std::set<std::string> web = entities_on(web_matrix, pair.web_first_party_id);
  const std::set<std::string> mobile =
      entities_on(mobile_matrix, pair.mobile_first_party_id);

  PairOverlap result;
  result.pair = pair;
  std::vector<std::string> common;
  std::set_intersection(web.begin(), web.end(), mobile.begin(), mobile.end(),
                        std::back_inserter(common));
  result.intersection_size = common.size();
  result.union_size = web.size() + mobile.size() - common.size();
  if (result.union_size > 0) {
    result.rate = static_cast<double>(result.intersection_size) /
                  static_cast<double>(result.union_size);
  }
  return result;
}

void check_levels(const PresenceMatrix& web_matrix,
                  const PresenceMatrix& mobile_matrix, Level level) {
  if (web_matrix.level != level || mobile_matrix.level != level) {
    throw ValidationError(std::string("matrices are not both at ") +
                          to_string(level) + " level");
  }
}

}  // namespace

std::optional<double> overlap_rate(const ServicePair& pair,
                                   const PresenceMatrix& web_matrix,
                                   const PresenceMatrix& mobile_matrix,
                                   Level level) {
  check_levels(web_matrix, mobile_matrix, level);
  return pair_overlap(pair, web_matrix, mobile_matrix).rate;
}

OverlapReport overlap_report(const std::vector<ServicePair>& pairs,
                             const PresenceMatrix& web_matrix,
                             const PresenceMatrix& mobile_matrix,
                             Level level) {
  check_levels(web_matrix, mobile_matrix, level);
  OverlapReport report;
  double rate_sum = 0.0;
  for (const ServicePair& pair : pairs) {
    PairOverlap overlap = pair_overlap(pair, web_matrix, mobile_matrix);
    if (overlap.rate) {
      rate_sum += *overlap.rate;
      ++report.defined_pairs;
    }
    report.per_pair.push_back(std::move(overlap));
  }
  if (report.defined_pairs > 0) {
    report.mean_rate = rate_sum / static_cast<double>(report.defined_pairs);
  }
  return report;
}

RecallComparison compare_methods(const std::vector<ObservationRecord>& corpus_a,
                                 const std::vector<ObservationRecord>& corpus_b,
                                 const KnowledgeBase& kb, Level level,
                                 Diagnostics* diag) {
  std::map<std::string, const ObservationRecord*> by_id_b;
  for (const ObservationRecord& record : corpus_b) {
    by_id_b.emplace(record.first_party_id, &record);
  }
  std::vector<std::pair<const ObservationRecord*, const ObservationRecord*>>
      matched;
  for (const ObservationRecord& record : corpus_a) {
    const auto it = by_id_b.find(record.first_party_id);
    if (it != by_id_b.end()) matched.emplace_back(&record, it->second);
  }
  if (matched.empty()) {
    throw ValidationError("corpora share no first_party_ids");
  }
  if (matched.size() != corpus_a.size() || matched.size() != corpus_b.size()) {
    warn(diag, "corpora do not cover the same first parties; comparing the " +
                   std::to_string(matched.size()) + " shared ids");
  }

  RecallComparison comparison;
  comparison.level = level;
  comparison.first_parties = matched.size();
  std::size_t only_a = 0;
  std::size_t only_b = 0;
  std::size_t both = 0;
  for (const auto& [record_a, record_b] : matched) {
    const std::set<std::string> a = attribute_record(*record_a, kb, level);
    const std::set<std::string> b = attribute_record(*record_b, kb, level);
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(common));
    both += common.size();
    only_a += a.size() - common.size();
    only_b += b.size() - common.size();
  }
  const double n = static_cast<double>(matched.size());
  comparison.mean_a_minus_b = static_cast<double>(only_a) / n;
  comparison.mean_b_minus_a = static_cast<double>(only_b) / n;
  comparison.mean_intersection = static_cast<double>(both) / n;
  return comparison;
}

}  // namespace trackconc
