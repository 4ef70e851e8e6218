#include "trackconc/entity_kb.hpp"

#include <algorithm>
#include <fstream>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

namespace {

const std::set<std::string> kKnownEntityFields = {
    "entity_id",  "display_name", "is_tracker",   "domains",
    "library_prefixes", "parent_id", "jurisdiction", "founded",
    "acquisitions"};

// Case- and space-insensitive key for the near-duplicate name lint.
std::string name_lint_key(const std::string& display_name) {
  std::string key;
  for (char c : to_lower(display_name)) {
    if (c != ' ' && c != '\t') key.push_back(c);
  }
  return key;
}

bool chain_contains(const std::map<std::string, TrackerEntity>& entities,
                    const std::string& start, const std::string& ancestor) {
  const TrackerEntity* current = &entities.at(start);
  while (current->parent_id) {
    if (*current->parent_id == ancestor) return true;
    const auto it = entities.find(*current->parent_id);
    if (it == entities.end()) return false;
    current = &it->second;
  }
  return false;
}

}  // namespace

KnowledgeBase KnowledgeBase::from_entities(std::vector<TrackerEntity> entities,
                                           Diagnostics* diag) {
  KnowledgeBase kb;
  for (TrackerEntity& e : entities) {
    if (e.entity_id.empty()) throw ValidationError("entity with empty id");
    auto [it, inserted] = kb.entities_.emplace(e.entity_id, std::move(e));
    if (!inserted) {
      throw ValidationError("duplicate entity_id \"" + it->first + "\"");
    }
  }

  std::map<std::string, std::string> name_keys;
  for (const auto& [id, e] : kb.entities_) {
    if (e.parent_id && kb.entities_.find(*e.parent_id) == kb.entities_.end()) {
      throw ValidationError("entity \"" + id + "\" has dangling parent_id \"" +
                            *e.parent_id + "\"");
    }
    for (const std::string& domain : e.domains) {
      auto [it, inserted] = kb.domain_index_.emplace(domain, id);
      if (!inserted) {
        throw ValidationError("domain \"" + domain +
                              "\" claimed by both \"" + it->second +
                              "\" and \"" + id + "\"");
      }
    }
    for (const std::string& prefix : e.library_prefixes) {
      auto [it, inserted] = kb.prefix_index_.emplace(prefix, id);
      if (!inserted) {
        throw ValidationError("library prefix \"" + prefix +
                              "\" claimed by both \"" + it->second +
                              "\" and \"" + id + "\"");
      }
    }
    if (!e.display_name.empty()) {
      auto [it, inserted] = name_keys.emplace(name_lint_key(e.display_name), id);
      if (!inserted) {
        warn(diag, "near-duplicate display names: \"" +
                       kb.entities_.at(it->second).display_name + "\" (" +
                       it->second + ") and \"" + e.display_name + "\" (" + id +
                       ")");
      }
    }
  }

  // Resolve roots, rejecting cycles. Walking each chain is bounded by the
  // entity count once dangling parents are ruled out.
  for (const auto& [id, e] : kb.entities_) {
    std::vector<std::string> chain = {id};
    std::set<std::string> seen = {id};
    std::string current = id;
    while (true) {
      const std::optional<std::string>& parent =
          kb.entities_.at(current).parent_id;
      if (!parent) break;
      if (!seen.insert(*parent).second) {
        chain.push_back(*parent);
        std::string cycle;
        for (const std::string& node : chain) {
          if (!cycle.empty()) cycle += " -> ";
          cycle += node;
        }
        throw ValidationError("parent cycle: " + cycle);
      }
      chain.push_back(*parent);
      current = *parent;
    }
    kb.root_[id] = current;
  }

  for (const auto& [id, e] : kb.entities_) {
    for (const Acquisition& acq : e.acquisitions) {
      const auto target = kb.entities_.find(acq.target_id);
      if (target == kb.entities_.end()) {
        throw ValidationError("entity \"" + id +
                              "\" lists unknown acquisition target \"" +
                              acq.target_id + "\"");
      }
      if (!chain_contains(kb.entities_, acq.target_id, id)) {
        throw ValidationError("acquisition target \"" + acq.target_id +
                              "\" does not point back at \"" + id +
                              "\" through its parent chain");
      }
    }
  }
  return kb;
}

KnowledgeBase KnowledgeBase::from_json(const nlohmann::json& doc,
                                       Diagnostics* diag) {
  if (!doc.is_object() || !doc.contains("entities") ||
      !doc.at("entities").is_array()) {
    throw ParseError("knowledge base must be an object with an "
                     "\"entities\" array");
  }
  std::vector<TrackerEntity> entities;
  for (const auto& item : doc.at("entities")) {
    TrackerEntity e;
    try {
      e.entity_id = item.at("entity_id").get<std::string>();
      e.display_name = item.value("display_name", e.entity_id);
      e.is_tracker = item.value("is_tracker", false);
      if (item.contains("domains")) {
        for (const auto& d : item.at("domains")) {
          e.domains.insert(d.get<std::string>());
        }
      }
      if (item.contains("library_prefixes")) {
        for (const auto& p : item.at("library_prefixes")) {
          e.library_prefixes.insert(p.get<std::string>());
        }
      }
      if (item.contains("parent_id") && !item.at("parent_id").is_null()) {
        e.parent_id = item.at("parent_id").get<std::string>();
      }
      if (item.contains("jurisdiction") &&
          !item.at("jurisdiction").is_null()) {
        e.jurisdiction = item.at("jurisdiction").get<std::string>();
      }
      if (item.contains("founded") && !item.at("founded").is_null()) {
        e.founded = item.at("founded").get<int>();
      }
      if (item.contains("acquisitions")) {
        for (const auto& a : item.at("acquisitions")) {
          Acquisition acq;
          acq.target_id = a.at("target_id").get<std::string>();
          acq.year = a.at("year").get<int>();
          e.acquisitions.push_back(std::move(acq));
        }
      }
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError("bad entity record: " + std::string(ex.what()));
    }
    for (auto it = item.begin(); it != item.end(); ++it) {
      if (kKnownEntityFields.count(it.key()) == 0) {
        warn(diag, "entity \"" + e.entity_id + "\": ignoring unknown field \"" +
                       it.key() + "\"");
      }
    }
    entities.push_back(std::move(e));
  }
  return from_entities(std::move(entities), diag);
}

KnowledgeBase KnowledgeBase::load_file(const std::filesystem::path& path,
                                       Diagnostics* diag) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open knowledge base: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return from_json(doc, diag);
}

bool KnowledgeBase::contains(const std::string& entity_id) const {
  return entities_.find(entity_id) != entities_.end();
}

const TrackerEntity& KnowledgeBase::entity(const std::string& entity_id) const {
  const auto it = entities_.find(entity_id);
  if (it == entities_.end()) {
    throw LookupError("unknown entity \"" + entity_id + "\"");
  }
  return it->second;
}

const std::string& KnowledgeBase::ultimate_parent(
    const std::string& entity_id) const {
  const auto it = root_.find(entity_id);
  if (it == root_.end()) {
    throw LookupError("unknown entity \"" + entity_id + "\"");
  }
  return it->second;
}

std::optional<std::string> KnowledgeBase::match_host(
    const std::string& domain) const {
  const auto it = domain_index_.find(domain);
  if (it == domain_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> KnowledgeBase::match_library(
    const std::string& package) const {
  // Try the whole package, then strip one label at a time from the right;
  // the first hit is the longest whole-label prefix.
  std::string candidate = package;
  while (!candidate.empty()) {
    const auto it = prefix_index_.find(candidate);
    if (it != prefix_index_.end()) return it->second;
    const std::size_t dot = candidate.rfind('.');
    if (dot == std::string::npos) break;
    candidate.resize(dot);
  }
  return std::nullopt;
}

nlohmann::ordered_json KnowledgeBase::to_json() const {
  nlohmann::ordered_json doc;
  doc["entities"] = nlohmann::ordered_json::array();
  for (const auto& [id, e] : entities_) {
    nlohmann::ordered_json item;
    item["entity_id"] = e.entity_id;
    item["display_name"] = e.display_name;
    item["is_tracker"] = e.is_tracker;
    item["domains"] = e.domains;
    item["library_prefixes"] = e.library_prefixes;
    if (e.parent_id) item["parent_id"] = *e.parent_id;
    if (e.jurisdiction) item["jurisdiction"] = *e.jurisdiction;
    if (e.founded) item["founded"] = *e.founded;
    if (!e.acquisitions.empty()) {
      auto arr = nlohmann::ordered_json::array();
      for (const Acquisition& a : e.acquisitions) {
        arr.push_back({{"target_id", a.target_id}, {"year", a.year}});
      }
      item["acquisitions"] = std::move(arr);
    }
    doc["entities"].push_back(std::move(item));
  }
  return doc;
}

KnowledgeBase sever_parent_links(const KnowledgeBase& kb,
                                 const std::vector<std::string>& entity_ids) {
  const std::set<std::string> severed(entity_ids.begin(), entity_ids.end());
  std::map<std::string, std::optional<std::string>> new_parent;
  for (const auto& [id, e] : kb.entities()) {
    new_parent[id] = severed.count(id) > 0 ? std::nullopt : e.parent_id;
  }
  const auto still_chains = [&](const std::string& start,
                                const std::string& ancestor) {
    std::optional<std::string> current = new_parent.at(start);
    while (current) {
      if (*current == ancestor) return true;
      current = new_parent.at(*current);
    }
    return false;
  };

  std::vector<TrackerEntity> entities;
  entities.reserve(kb.size());
  for (const auto& [id, e] : kb.entities()) {
    TrackerEntity copy = e;
    copy.parent_id = new_parent.at(id);
    // An acquisition record only survives if the target still chains back
    // to the acquirer once the listed links are gone.
    std::erase_if(copy.acquisitions, [&](const Acquisition& a) {
      return !still_chains(a.target_id, id);
    });
    entities.push_back(std::move(copy));
  }
  return KnowledgeBase::from_entities(std::move(entities));
}

}  // namespace trackconc
