#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "trackconc/diagnostics.hpp"
#include "trackconc/suffix_rules.hpp"

namespace trackconc {

enum class Platform { web, mobile };

const char* to_string(Platform platform);
Platform platform_from_string(std::string_view name);

// One crawled site: every host contacted while loading the page.
struct RawWebRecord {
  std::string site_identifier;          // hostname, e.g. "example.com"
  std::uint32_t rank = 0;               // 1 = most popular
  std::vector<std::string> request_hosts;
};

// One analyzed app: detected library packages plus URL strings pulled out
// of the decompiled code.
struct RawAppRecord {
  std::string package_name;             // reverse-DNS, >= 2 labels
  std::uint32_t rank = 0;               // 1 = most downloaded
  std::vector<std::string> library_packages;
  std::vector<std::string> url_strings;
};

// Normalized first party: third-party evidence only, hosts collapsed to
// registrable domains.
struct ObservationRecord {
  std::string first_party_id;
  Platform platform = Platform::web;
  std::uint32_t rank = 0;
  std::set<std::string> third_party_hosts;      // registrable domains
  std::set<std::string> third_party_libraries;  // package prefixes

  bool operator==(const ObservationRecord&) const = default;
};

// Extracts the host from an http/https URL string (scheme, userinfo, port,
// path, query all stripped). Throws ParseError when there is no usable host.
std::string url_host(std::string_view url);

// Reverses the first two labels of a package name: "com.example[.app]"
// -> "example.com". Throws ValidationError on single-label packages.
std::string candidate_domain(const std::string& package_name);

// Drops request hosts whose registrable domain equals the site's own.
// Malformed hosts are skipped with a warning; a malformed site identifier
// is a record-level error.
ObservationRecord filter_first_party(const RawWebRecord& record,
                                     const SuffixRuleSet& rules,
                                     Diagnostics* diag = nullptr);

// Deduplicates libraries and resolves url_strings to registrable domains,
// excluding the app's own domain (the TLD-reversal of its package name).
ObservationRecord normalize_app(const RawAppRecord& record,
                                const SuffixRuleSet& rules,
                                Diagnostics* diag = nullptr);

// Reads a raw JSONL corpus (RawWebRecord or RawAppRecord lines, per
// platform), normalizes every record, and validates id/rank uniqueness.
std::vector<ObservationRecord> load_corpus(const std::filesystem::path& path,
                                           Platform platform,
                                           const SuffixRuleSet& rules,
                                           Diagnostics* diag = nullptr);

// Normalized observation files: one ObservationRecord per line, stable
// field order, arrays sorted.
void write_observations(std::ostream& out,
                        const std::vector<ObservationRecord>& records);
std::vector<ObservationRecord> load_observations(
    const std::filesystem::path& path);

}  // namespace trackconc
