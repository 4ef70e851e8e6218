#include "trackconc/observation.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Platform platform) {
  return platform == Platform::web ? "web" : "mobile";
}

Platform platform_from_string(std::string_view name) {
  if (name == "web") return Platform::web;
  if (name == "mobile") return Platform::mobile;
  throw ConfigError("unknown platform: \"" + std::string(name) + "\"");
}

std::string url_host(std::string_view url) {
  std::string_view rest = trim(url);
  const std::size_t scheme_end = rest.find("://");
  if (scheme_end == std::string_view::npos) {
    throw ParseError("not an http(s) URL: \"" + std::string(url) + "\"");
  }
  const std::string scheme = to_lower(rest.substr(0, scheme_end));
  if (scheme != "http" && scheme != "https") {
    throw ParseError("unsupported scheme in URL: \"" + std::string(url) +
                     "\"");
  }
  rest.remove_prefix(scheme_end + 3);
  const std::size_t authority_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, authority_end);
  const std::size_t userinfo = authority.rfind('@');
  if (userinfo != std::string_view::npos) {
    authority.remove_prefix(userinfo + 1);
  }
  const std::size_t port = authority.find(':');
  if (port != std::string_view::npos) {
    authority = authority.substr(0, port);
  }
  if (authority.empty()) {
    throw ParseError("URL has no host: \"" + std::string(url) + "\"");
  }
  return normalize_hostname(authority);
}

std::string candidate_domain(const std::string& package_name) {
  const std::vector<std::string> labels =
      split(to_lower(trim(package_name)), '.');
  if (labels.size() < 2 || labels[0].empty() || labels[1].empty()) {
    throw ValidationError("package name needs at least two labels: \"" +
                          package_name + "\"");
  }
  return labels[1] + "." + labels[0];
}

ObservationRecord filter_first_party(const RawWebRecord& record,
                                     const SuffixRuleSet& rules,
                                     Diagnostics* diag) {
  if (record.rank < 1) {
    throw ValidationError("rank must be >= 1 for site \"" +
                          record.site_identifier + "\"");
  }
  std::string own_domain;
  try {
    own_domain = registrable_domain(record.site_identifier, rules);
  } catch (const ParseError& e) {
    throw ParseError("bad site identifier \"" + record.site_identifier +
                     "\": " + e.what());
  }

  ObservationRecord out;
  out.first_party_id = normalize_hostname(record.site_identifier);
  out.platform = Platform::web;
  out.rank = record.rank;
  for (const std::string& host : record.request_hosts) {
    std::string domain;
    try {
      domain = registrable_domain(host, rules);
    } catch (const ParseError& e) {
      warn(diag, "site " + out.first_party_id + ": skipped host: " +
                     std::string(e.what()));
      continue;
    }
    if (domain != own_domain) out.third_party_hosts.insert(domain);
  }
  return out;
}

ObservationRecord normalize_app(const RawAppRecord& record,
                                const SuffixRuleSet& rules,
                                Diagnostics* diag) {
  if (record.rank < 1) {
    throw ValidationError("rank must be >= 1 for app \"" +
                          record.package_name + "\"");
  }
  const std::string own_domain = candidate_domain(record.package_name);

  ObservationRecord out;
  out.first_party_id = record.package_name;
  out.platform = Platform::mobile;
  out.rank = record.rank;
  out.third_party_libraries.insert(record.library_packages.begin(),
                                   record.library_packages.end());
  for (const std::string& url : record.url_strings) {
    std::string domain;
    try {
      domain = registrable_domain(url_host(url), rules);
    } catch (const ParseError& e) {
      warn(diag, "app " + out.first_party_id + ": skipped URL: " +
                     std::string(e.what()));
      continue;
    }
    if (domain != own_domain) out.third_party_hosts.insert(domain);
  }
  return out;
}

namespace {

// Reads non-empty lines, reporting 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_jsonl_lines(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    lines.emplace_back(line_no, line);
  }
  return lines;
}

ordered_json parse_line(const std::filesystem::path& path, std::size_t line_no,
                        const std::string& line) {
  try {
    ordered_json doc = ordered_json::parse(line);
    if (!doc.is_object()) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected a JSON object");
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + " line " + std::to_string(line_no) +
                     ": " + e.what());
  }
}

std::vector<std::string> string_array(const ordered_json& doc,
                                      const char* field) {
  std::vector<std::string> out;
  if (!doc.contains(field)) return out;
  for (const auto& item : doc.at(field)) {
    out.push_back(item.get<std::string>());
  }
  return out;
}

// Duplicate-id / duplicate-rank validation shared by the raw and
// normalized loaders.
void validate_corpus(const std::vector<ObservationRecord>& records) {
  std::map<std::string, std::size_t> by_id;
  std::map<std::uint32_t, std::size_t> by_rank;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ObservationRecord& r = records[i];
    auto [id_it, id_new] = by_id.emplace(r.first_party_id, i);
    if (!id_new) {
      throw ValidationError("duplicate first_party_id \"" + r.first_party_id +
                            "\" (records " + std::to_string(id_it->second + 1) +
                            " and " + std::to_string(i + 1) + ")");
    }
    auto [rank_it, rank_new] = by_rank.emplace(r.rank, i);
    if (!rank_new) {
      throw ValidationError(
          "duplicate rank " + std::to_string(r.rank) + ": \"" +
          records[rank_it->second].first_party_id + "\" and \"" +
          r.first_party_id + "\"");
    }
  }
}

}  // namespace

std::vector<ObservationRecord> load_corpus(const std::filesystem::path& path,
                                           Platform platform,
                                           const SuffixRuleSet& rules,
                                           Diagnostics* diag) {
  std::vector<ObservationRecord> records;
  for (const auto& [line_no, line] : read_jsonl_lines(path)) {
    const ordered_json doc = parse_line(path, line_no, line);
    try {
      if (platform == Platform::web) {
        RawWebRecord raw;
        raw.site_identifier = doc.at("site_identifier").get<std::string>();
        raw.rank = doc.at("rank").get<std::uint32_t>();
        raw.request_hosts = string_array(doc, "request_hosts");
        records.push_back(filter_first_party(raw, rules, diag));
      } else {
        RawAppRecord raw;
        raw.package_name = doc.at("package_name").get<std::string>();
        raw.rank = doc.at("rank").get<std::uint32_t>();
        raw.library_packages = string_array(doc, "library_packages");
        raw.url_strings = string_array(doc, "url_strings");
        records.push_back(normalize_app(raw, rules, diag));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
  validate_corpus(records);
  return records;
}

void write_observations(std::ostream& out,
                        const std::vector<ObservationRecord>& records) {
  for (const ObservationRecord& r : records) {
    ordered_json doc;
    doc["first_party_id"] = r.first_party_id;
    doc["platform"] = to_string(r.platform);
    doc["rank"] = r.rank;
    doc["third_party_hosts"] = r.third_party_hosts;
    doc["third_party_libraries"] = r.third_party_libraries;
    out << doc.dump() << "\n";
  }
}

std::vector<ObservationRecord> load_observations(
    const std::filesystem::path& path) {
  std::vector<ObservationRecord> records;
  for (const auto& [line_no, line] : read_jsonl_lines(path)) {
    const ordered_json doc = parse_line(path, line_no, line);
    try {
      ObservationRecord r;
      r.first_party_id = doc.at("first_party_id").get<std::string>();
      r.platform = platform_from_string(doc.at("platform").get<std::string>());
      r.rank = doc.at("rank").get<std::uint32_t>();
      for (const std::string& h : string_array(doc, "third_party_hosts")) {
        r.third_party_hosts.insert(h);
      }
      for (const std::string& l : string_array(doc, "third_party_libraries")) {
        r.third_party_libraries.insert(l);
      }
      if (r.rank < 1) {
        throw ValidationError("rank must be >= 1 for \"" + r.first_party_id +
                              "\"");
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": " + e.what());
    }
  }
  for (const ObservationRecord& r : records) {
    if (!records.empty() && r.platform != records.front().platform) {
      throw ValidationError("mixed platforms in observation file: " +
                            path.string());
    }
  }
  validate_corpus(records);
  return records;
}

}  // namespace trackconc
