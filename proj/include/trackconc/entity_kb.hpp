#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trackconc/diagnostics.hpp"

namespace trackconc {

struct Acquisition {
  std::string target_id;
  int year = 0;

  bool operator==(const Acquisition&) const = default;
};

// One company in the knowledge base. Domains are registrable domains;
// library prefixes are whole-label package prefixes ("com.flurry").
struct TrackerEntity {
  std::string entity_id;
  std::string display_name;
  bool is_tracker = false;
  std::set<std::string> domains;
  std::set<std::string> library_prefixes;
  std::optional<std::string> parent_id;
  std::optional<std::string> jurisdiction;
  std::optional<int> founded;
  std::vector<Acquisition> acquisitions;

  bool operator==(const TrackerEntity&) const = default;
};

// Immutable after construction; all queries are read-only.
class KnowledgeBase {
 public:
  static KnowledgeBase from_entities(std::vector<TrackerEntity> entities,
                                     Diagnostics* diag = nullptr);
  static KnowledgeBase from_json(const nlohmann::json& doc,
                                 Diagnostics* diag = nullptr);
  static KnowledgeBase load_file(const std::filesystem::path& path,
                                 Diagnostics* diag = nullptr);

  bool contains(const std::string& entity_id) const;
  const TrackerEntity& entity(const std::string& entity_id) const;
  const std::map<std::string, TrackerEntity>& entities() const {
    return entities_;
  }
  std::size_t size() const { return entities_.size(); }

  // Root of the parent chain; an entity with no parent is its own root.
  const std::string& ultimate_parent(const std::string& entity_id) const;

  // Exact registrable-domain lookup; absence is a value, not an error.
  std::optional<std::string> match_host(const std::string& domain) const;

  // Longest whole-label prefix match: "com.flurry" matches
  // "com.flurry.android" but not "com.flurrytools".
  std::optional<std::string> match_library(const std::string& package) const;

  nlohmann::ordered_json to_json() const;

 private:
  std::map<std::string, TrackerEntity> entities_;
  std::map<std::string, std::string> domain_index_;
  std::map<std::string, std::string> prefix_index_;
  std::map<std::string, std::string> root_;  // entity -> ultimate parent
};

// Copy of `kb` with each listed entity's parent link severed (it becomes
// its own root). Acquisition records pointing at severed entities are
// dropped so the result still validates.
KnowledgeBase sever_parent_links(const KnowledgeBase& kb,
                                 const std::vector<std::string>& entity_ids);

}  // namespace trackconc
