#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace trackconc {

// Public-suffix rules in the publicsuffix.org list format: one rule per
// line, `//` comments, `*.` wildcards, `!` exceptions. A host that matches
// no rule falls back to the implicit "*" rule (its last label is the
// public suffix, so the registrable domain is the last two labels).
class SuffixRuleSet {
 public:
  static SuffixRuleSet parse_text(std::string_view text);
  static SuffixRuleSet load_file(const std::filesystem::path& path);

  std::size_t rule_count() const {
    return exact_.size() + wildcard_.size() + exception_.size();
  }
  bool empty() const { return rule_count() == 0; }

  // Number of labels of the public suffix of `host` (host must already be
  // normalized and valid). At least 1.
  std::size_t public_suffix_labels(const std::string& host) const;

 private:
  std::set<std::string> exact_;      // "co.uk"
  std::set<std::string> wildcard_;   // "ck" for the rule "*.ck"
  std::set<std::string> exception_;  // "www.ck" for the rule "!www.ck"
};

// Lowercases and strips one trailing dot. Throws ParseError on empty
// labels or characters outside [a-z0-9_-].
std::string normalize_hostname(std::string_view host);

// eTLD+1: the public suffix plus one label. A host that is itself a bare
// public suffix is returned unchanged, which keeps the function idempotent.
std::string registrable_domain(std::string_view host,
                               const SuffixRuleSet& rules);

}  // namespace trackconc
