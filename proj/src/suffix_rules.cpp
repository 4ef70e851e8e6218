#include "trackconc/suffix_rules.hpp"

#include <fstream>
#include <sstream>

#include "trackconc/errors.hpp"
#include "trackconc/text.hpp"

namespace trackconc {

namespace {

bool valid_label_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '_';
}

// Joins host labels [first, last) back into a dotted name.
std::string join_labels(const std::vector<std::string>& labels,
                        std::size_t first) {
  std::string out;
  for (std::size_t i = first; i < labels.size(); ++i) {
    if (i > first) out.push_back('.');
    out += labels[i];
  }
  return out;
}

}  // namespace

std::string normalize_hostname(std::string_view host) {
  std::string name = to_lower(trim(host));
  if (!name.empty() && name.back() == '.') name.pop_back();
  if (name.empty()) throw ParseError("empty hostname");
  for (char c : name) {
    if (c != '.' && !valid_label_char(c)) {
      throw ParseError("illegal character in hostname: \"" +
                       std::string(host) + "\"");
    }
  }
  for (const std::string& label : split(name, '.')) {
    if (label.empty()) {
      throw ParseError("empty label in hostname: \"" + std::string(host) +
                       "\"");
    }
  }
  return name;
}

SuffixRuleSet SuffixRuleSet::parse_text(std::string_view text) {
  SuffixRuleSet rules;
  std::size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.substr(0, 2) == "//") continue;
    bool exception = false;
    if (line.front() == '!') {
      exception = true;
      line.remove_prefix(1);
    }
    bool wildcard = false;
    if (line.substr(0, 2) == "*.") {
      wildcard = true;
      line.remove_prefix(2);
    }
    std::string rule;
    try {
      rule = normalize_hostname(line);
    } catch (const ParseError&) {
      throw ParseError("suffix rules line " + std::to_string(line_no) +
                       ": invalid rule \"" + std::string(raw) + "\"");
    }
    if (exception) {
      rules.exception_.insert(rule);
    } else if (wildcard) {
      rules.wildcard_.insert(rule);
    } else {
      rules.exact_.insert(rule);
    }
  }
  if (rules.empty()) throw ValidationError("suffix rule set is empty");
  return rules;
}

SuffixRuleSet SuffixRuleSet::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open suffix rules file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

std::size_t SuffixRuleSet::public_suffix_labels(const std::string& host) const {
  const std::vector<std::string> labels = split(host, '.');
  const std::size_t n = labels.size();

  // An exception rule prevails over everything; its public suffix is the
  // rule minus its leftmost label.
  for (std::size_t i = 0; i < n; ++i) {
    if (exception_.count(join_labels(labels, i)) > 0) {
      return n - i > 1 ? n - i - 1 : 1;
    }
  }

  // Otherwise the longest matching rule wins. Scanning left to right finds
  // the match with the most labels first.
  for (std::size_t i = 0; i < n; ++i) {
    const std::string candidate = join_labels(labels, i);
    if (exact_.count(candidate) > 0) return n - i;
    // "*.<base>" matches candidates of the form "<label>.<base>".
    if (i + 1 < n && wildcard_.count(join_labels(labels, i + 1)) > 0) {
      return n - i;
    }
  }

  // Implicit "*" rule: the last label is the public suffix.
  return 1;
}

std::string registrable_domain(std::string_view host,
                               const SuffixRuleSet& rules) {
  const std::string name = normalize_hostname(host);
  const std::vector<std::string> labels = split(name, '.');
  const std::size_t suffix = rules.public_suffix_labels(name);
  if (labels.size() <= suffix + 1) return name;
  std::string out;
  for (std::size_t i = labels.size() - suffix - 1; i < labels.size(); ++i) {
    if (!out.empty()) out.push_back('.');
    out += labels[i];
  }
  return out;
}

}  // namespace trackconc
