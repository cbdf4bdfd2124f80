#include "solbench/version/solc_version.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

namespace solbench::version {

namespace {

// A partially specified version: `0.8` or `0.8.x` leaves patch open.
struct PartialVersion {
  SolcVersion version;
  int specified = 0;  // number of concrete components, 0..3
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<std::uint32_t> parse_component(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_wildcard(std::string_view s) { return s == "x" || s == "X" || s == "*"; }

PartialVersion parse_partial(std::string_view text, std::string_view whole) {
  if (!text.empty() && (text.front() == 'v' || text.front() == 'V')) text.remove_prefix(1);
  if (text.empty()) throw VersionError("malformed range: empty version in '" + std::string(whole) + "'");
  PartialVersion out;
  std::uint32_t* slots[] = {&out.version.major, &out.version.minor, &out.version.patch};
  std::size_t index = 0;
  bool wildcard_seen = false;
  while (true) {
    auto dot = text.find('.');
    auto part = text.substr(0, dot);
    if (index >= 3) throw VersionError("malformed range: too many components in '" + std::string(whole) + "'");
    if (is_wildcard(part)) {
      wildcard_seen = true;
    } else {
      if (wildcard_seen) throw VersionError("malformed range: '" + std::string(whole) + "'");
      auto value = parse_component(part);
      if (!value) throw VersionError("malformed range: bad component '" + std::string(part) + "'");
      *slots[index] = *value;
      ++out.specified;
    }
    ++index;
    if (dot == std::string_view::npos) break;
    text.remove_prefix(dot + 1);
  }
  return out;
}

SolcVersion bump(const PartialVersion& p) {
  // Smallest version strictly above every version matching the partial.
  switch (p.specified) {
    case 1: return {p.version.major + 1, 0, 0};
    case 2: return {p.version.major, p.version.minor + 1, 0};
    default: return {p.version.major, p.version.minor, p.version.patch + 1};
  }
}

void append_comparators(std::string_view op, const PartialVersion& p, std::vector<Comparator>& out) {
  const SolcVersion& v = p.version;
  if (p.specified == 0) {
    if (op == "<") out.push_back({Relation::lt, {0, 0, 0}});
    return;  // `*`, `>=*` etc. match everything
  }
  const bool partial = p.specified < 3;
  if (op.empty() || op == "=") {
    if (partial) {
      out.push_back({Relation::ge, v});
      out.push_back({Relation::lt, bump(p)});
    } else {
      out.push_back({Relation::eq, v});
    }
  } else if (op == "^") {
    if (partial) {
      // ^0.8 behaves like ^0.8.0; ^0 like >=0.0.0 <1.0.0.
      out.push_back({Relation::ge, v});
      if (p.specified == 1 || v.major != 0) {
        out.push_back({Relation::lt, {v.major + 1, 0, 0}});
      } else {
        out.push_back({Relation::lt, {0, v.minor + 1, 0}});
      }
    } else {
      out.push_back({Relation::caret, v});
    }
  } else if (op == "~") {
    out.push_back({Relation::ge, v});
    if (p.specified == 1) {
      out.push_back({Relation::lt, {v.major + 1, 0, 0}});
    } else {
      out.push_back({Relation::lt, {v.major, v.minor + 1, 0}});
    }
  } else if (op == ">=") {
    out.push_back({Relation::ge, v});
  } else if (op == ">") {
    out.push_back(partial ? Comparator{Relation::ge, bump(p)} : Comparator{Relation::gt, v});
  } else if (op == "<=") {
    out.push_back(partial ? Comparator{Relation::lt, bump(p)} : Comparator{Relation::le, v});
  } else if (op == "<") {
    out.push_back({Relation::lt, v});
  } else {
    throw VersionError("malformed range: unknown operator '" + std::string(op) + "'");
  }
}

std::string relation_text(Relation r) {
  switch (r) {
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    case Relation::le: return "<=";
    case Relation::lt: return "<";
    case Relation::eq: return "=";
    case Relation::caret: return "^";
  }
  return "?";
}

}  // namespace

std::string SolcVersion::to_string() const {
  return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
}

SolcVersion parse_version(std::string_view text) {
  const std::string original(text);
  if (!text.empty() && (text.front() == 'v' || text.front() == 'V')) text.remove_prefix(1);
  SolcVersion out;
  std::uint32_t* slots[] = {&out.major, &out.minor, &out.patch};
  for (std::size_t i = 0; i < 3; ++i) {
    auto dot = text.find('.');
    if (i < 2 && dot == std::string_view::npos) throw VersionError("malformed version: '" + original + "'");
    if (i == 2 && dot != std::string_view::npos) throw VersionError("malformed version: '" + original + "'");
    auto value = parse_component(text.substr(0, dot));
    if (!value) throw VersionError("malformed version: '" + original + "'");
    *slots[i] = *value;
    if (dot != std::string_view::npos) text.remove_prefix(dot + 1);
  }
  return out;
}

SolcVersion caret_upper_bound(const SolcVersion& v) {
  if (v.major != 0) return {v.major + 1, 0, 0};
  if (v.minor != 0) return {0, v.minor + 1, 0};
  return {0, 0, v.patch + 1};
}

bool Comparator::satisfied_by(const SolcVersion& v) const {
  switch (relation) {
    case Relation::ge: return v >= version;
    case Relation::gt: return v > version;
    case Relation::le: return v <= version;
    case Relation::lt: return v < version;
    case Relation::eq: return v == version;
    case Relation::caret: return v >= version && v < caret_upper_bound(version);
  }
  return false;
}

std::string Comparator::to_string() const { return relation_text(relation) + version.to_string(); }

bool VersionRange::satisfies(const SolcVersion& v) const {
  return std::all_of(comparators.begin(), comparators.end(),
                     [&](const Comparator& c) { return c.satisfied_by(v); });
}

std::string VersionRange::to_string() const {
  std::string out;
  for (const auto& c : comparators) {
    if (!out.empty()) out += ' ';
    out += c.to_string();
  }
  return out.empty() ? "*" : out;
}

VersionRange VersionRange::intersect(const VersionRange& other) const {
  VersionRange out = *this;
  out.comparators.insert(out.comparators.end(), other.comparators.begin(), other.comparators.end());
  return out;
}

VersionRange parse_range(std::string_view text) {
  const std::string whole(trim(text));
  if (whole.find("||") != std::string::npos) {
    throw VersionError("malformed range: disjunction is not supported in '" + whole + "'");
  }

  // Split into (operator, version) terms; whitespace between an operator and
  // its version is tolerated (`>= 0.4.22`).
  std::vector<std::pair<std::string, std::string>> terms;
  std::string_view rest = whole;
  while (true) {
    rest = trim(rest);
    if (rest.empty()) break;
    std::size_t op_len = 0;
    while (op_len < rest.size() && std::string_view("<>=^~").find(rest[op_len]) != std::string_view::npos) ++op_len;
    std::string op(rest.substr(0, op_len));
    rest.remove_prefix(op_len);
    rest = trim(rest);
    std::size_t v_len = 0;
    while (v_len < rest.size() && !is_space(rest[v_len]) &&
           std::string_view("<>=^~").find(rest[v_len]) == std::string_view::npos) {
      ++v_len;
    }
    std::string ver(rest.substr(0, v_len));
    rest.remove_prefix(v_len);
    if (ver.empty()) {
      if (op.empty()) throw VersionError("malformed range: '" + whole + "'");
      throw VersionError("malformed range: operator without version in '" + whole + "'");
    }
    terms.emplace_back(std::move(op), std::move(ver));
  }
  if (terms.empty()) throw VersionError("malformed range: empty expression");

  for (const auto& [op, ver] : terms) {
    if (ver.find_first_of("-+") != std::string::npos && ver != "-") {
      throw VersionError("malformed range: pre-release or build tags are not supported in '" + whole + "'");
    }
  }

  VersionRange range;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    // Hyphen range: `a - b` means >=a <=b.
    if (i + 2 < terms.size() + 0 && terms[i + 1].first.empty() && terms[i + 1].second == "-") {
      if (!terms[i].first.empty() || !terms[i + 2].first.empty()) {
        throw VersionError("malformed range: operators inside hyphen range in '" + whole + "'");
      }
      append_comparators(">=", parse_partial(terms[i].second, whole), range.comparators);
      append_comparators("<=", parse_partial(terms[i + 2].second, whole), range.comparators);
      i += 2;
      continue;
    }
    if (terms[i].second == "-") throw VersionError("malformed range: dangling '-' in '" + whole + "'");
    const auto& op = terms[i].first;
    if (!(op.empty() || op == "=" || op == "^" || op == "~" || op == ">=" || op == ">" || op == "<=" || op == "<")) {
      throw VersionError("malformed range: unknown operator '" + op + "'");
    }
    append_comparators(op, parse_partial(terms[i].second, whole), range.comparators);
  }
  return range;
}

std::optional<SolcVersion> min_satisfying(const VersionRange& range, std::span<const SolcVersion> releases) {
  for (const auto& v : releases) {
    if (range.satisfies(v)) return v;
  }
  return std::nullopt;
}

std::vector<SolcVersion> all_satisfying(const VersionRange& range, std::span<const SolcVersion> releases) {
  std::vector<SolcVersion> out;
  for (const auto& v : releases) {
    if (range.satisfies(v)) out.push_back(v);
  }
  return out;
}

}  // namespace solbench::version
