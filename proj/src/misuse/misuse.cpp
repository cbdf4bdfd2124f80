#include "solbench/misuse/misuse.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <unordered_set>

#include "solbench/frontend/parser.hpp"
#include "solbench/frontend/walk.hpp"
#include "solbench/usage/scope.hpp"

namespace solbench::misuse {

using frontend::ExprKind;
using frontend::Expression;
using frontend::Statement;
using frontend::StmtKind;

namespace {

constexpr EhFeature kECallGuards[] = {EhFeature::require, EhFeature::try_catch};
constexpr EhFeature kRequireGuard[] = {EhFeature::require};
constexpr EhFeature kTryGuard[] = {EhFeature::try_catch};
constexpr EhFeature kAssertGuard[] = {EhFeature::assert_call};

constexpr version::SolcVersion kDefaultChecksSince{0, 8, 7};
constexpr std::size_t kEvidenceLimit = 96;

std::string evidence_of(std::string text) {
  if (text.size() > kEvidenceLimit) {
    text.resize(kEvidenceLimit - 3);
    text += "...";
  }
  return text;
}

bool is_address_type(const std::string& type) { return type == "address" || type == "address payable"; }

bool is_zero_literal(const Expression& e) {
  if (e.kind != ExprKind::literal || e.text.empty()) return false;
  std::string_view t = e.text;
  if (t.starts_with("0x") || t.starts_with("0X")) t.remove_prefix(2);
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c == '0' || c == '_'; });
}

// `address(0)`, `address(0x0)` or a bare zero.
bool is_zero_address(const Expression& e) {
  if (is_zero_literal(e)) return true;
  if (!e.is_call_to("address")) return false;
  const auto args = e.arguments();
  return args.size() == 1 && is_zero_literal(args.front());
}

bool compares_to_zero(const Expression& cond, std::string_view name) {
  return frontend::any_of(cond, [&](const Expression& x) {
    if (!(x.is_binary("==") || x.is_binary("!=")) || x.children.size() != 2) return false;
    const auto& l = x.children[0];
    const auto& r = x.children[1];
    auto is_name = [&](const Expression& s) { return s.kind == ExprKind::identifier && s.text == name; };
    return (is_name(l) && is_zero_address(r)) || (is_name(r) && is_zero_address(l));
  });
}

bool contains_node(const Expression& root, const Expression* node) {
  return frontend::any_of(root, [&](const Expression& x) { return &x == node; });
}

// Maximal identifier / member chains of `e`.
void leaf_chains(const Expression& e, std::vector<std::string>& out) {
  if (auto c = usage::chain_of(e); !c.empty()) {
    out.push_back(std::move(c));
    return;
  }
  for (const auto& child : e.children) leaf_chains(child, out);
}

bool references_key(const Expression& cond, const Expression& key) {
  const auto rendered = frontend::render(key);
  if (frontend::any_of(cond, [&](const Expression& x) { return frontend::render(x) == rendered; })) return true;
  std::vector<std::string> chains;
  leaf_chains(key, chains);
  if (chains.empty()) return false;
  return std::all_of(chains.begin(), chains.end(), [&](const std::string& c) {
    return frontend::any_of(cond, [&](const Expression& x) { return usage::chain_of(x) == c; });
  });
}

bool references_name(const Expression& cond, const std::unordered_set<std::string>& names) {
  if (names.empty()) return false;
  return frontend::any_of(cond, [&](const Expression& x) {
    return x.kind == ExprKind::identifier && names.contains(x.text);
  });
}

struct Guard {
  EhFeature feature = EhFeature::require;  // require, assert_call or try_catch; `if` has no feature
  bool is_if = false;
  const Expression* condition = nullptr;
  frontend::SourceSpan span;
};

std::vector<Guard> guards_of(std::span<const Statement> body) {
  std::vector<Guard> out;
  frontend::visit_statements(body, [&](const Statement& s) {
    if (s.kind == StmtKind::if_stmt && !s.exprs.empty()) {
      out.push_back({EhFeature::require, true, &s.exprs.front(), s.exprs.front().span});
    } else if (s.kind == StmtKind::try_catch && !s.exprs.empty()) {
      out.push_back({EhFeature::try_catch, false, &s.exprs.front(), s.exprs.front().span});
    }
  });
  frontend::visit(body, [&](const Expression& e) {
    const bool req = e.is_call_to("require");
    if (!req && !e.is_call_to("assert")) return;
    const auto args = e.arguments();
    if (args.empty()) return;
    out.push_back({req ? EhFeature::require : EhFeature::assert_call, false, &args.front(), e.span});
  });
  std::stable_sort(out.begin(), out.end(), [](const Guard& a, const Guard& b) { return a.span.begin < b.span.begin; });
  return out;
}

// Variables that receive the value of `call`: `T x = call`, `(a, b) = call`, `x = call`.
std::unordered_set<std::string> result_variables(std::span<const Statement> body, const Expression* call) {
  std::unordered_set<std::string> out;
  frontend::visit_statements(body, [&](const Statement& s) {
    if (s.kind == StmtKind::variable_decl && !s.exprs.empty() && contains_node(s.exprs.front(), call)) {
      for (const auto& d : s.declared) {
        if (!d.name.empty()) out.insert(d.name);
      }
    }
  });
  frontend::visit(body, [&](const Expression& e) {
    if (!e.is_binary("=") || e.children.size() != 2 || !contains_node(e.children[1], call)) return;
    const auto& lhs = e.children[0];
    if (lhs.kind == ExprKind::identifier) {
      out.insert(lhs.text);
    } else if (lhs.kind == ExprKind::tuple) {
      for (const auto& c : lhs.children) {
        if (c.kind == ExprKind::identifier) out.insert(c.text);
      }
    }
  });
  return out;
}

bool is_legal(MisuseCategory c, EhFeature f) {
  const auto legal = legal_guards(c);
  return std::find(legal.begin(), legal.end(), f) != legal.end();
}

class Analyzer {
 public:
  explicit Analyzer(const frontend::SourceUnit& unit) : unit_(unit), names_(unit) {}

  std::vector<CandidateSite> sites() {
    std::vector<CandidateSite> out;
    const auto matches = frontend::walk_expressions(unit_, [](const Expression&) { return true; });
    for (const auto& m : matches) {
      if (m.function == nullptr || !m.function->has_body) continue;
      const auto& e = *std::get<const Expression*>(m.node);
      if (!within_body(*m.function, e.span)) continue;
      classify(e, m.function, m.contract, out);
    }
    for (const auto* c : contracts()) {
      for (const auto& f : c->functions) add_faa(f, c, out);
    }
    for (const auto& f : unit_.free_functions) add_faa(f, nullptr, out);
    std::stable_sort(out.begin(), out.end(),
                     [](const CandidateSite& a, const CandidateSite& b) { return a.span.begin < b.span.begin; });
    return out;
  }

  GuardVerdict verdict(const CandidateSite& site) {
    if (site.function == nullptr) return {};
    const auto& guards = guards_for(*site.function);
    bool if_guarded = false;
    auto note = [&](const Guard& g) -> std::optional<GuardVerdict> {
      if (!g.is_if && is_legal(site.kind, g.feature)) return GuardVerdict{GuardKind::eh_guarded, g.feature};
      if_guarded = true;
      return std::nullopt;
    };

    switch (site.kind) {
      case MisuseCategory::FAA: {
        if (site.param == nullptr) return {};
        for (const auto& g : guards) {
          if (g.feature == EhFeature::try_catch || !compares_to_zero(*g.condition, site.param->name)) continue;
          if (auto v = note(g)) return *v;
        }
        if (auto v = modifier_verdict(site)) {
          if (v->kind == GuardKind::eh_guarded) return *v;
          if_guarded = true;
        }
        break;
      }
      case MisuseCategory::ECall:
      case MisuseCategory::ECon: {
        const auto results = result_variables(site.function->body, site.subject);
        for (const auto& g : guards) {
          const bool direct = contains_node(*g.condition, site.subject);
          const bool via_result = g.feature != EhFeature::try_catch && references_name(*g.condition, results);
          if (!direct && !via_result) continue;
          if (auto v = note(g)) return *v;
        }
        break;
      }
      default: {
        for (const auto& g : guards) {
          if (g.feature == EhFeature::try_catch) continue;
          const bool direct = contains_node(*g.condition, site.subject);
          if (!direct && (site.key == nullptr || !references_key(*g.condition, *site.key))) continue;
          if (site.kind == MisuseCategory::DZ && !direct && g.span.begin >= site.subject->span.begin) continue;
          if (auto v = note(g)) return *v;
        }
        break;
      }
    }
    return if_guarded ? GuardVerdict{GuardKind::if_guarded, std::nullopt} : GuardVerdict{};
  }

 private:
  std::vector<const frontend::ContractDef*> contracts() const {
    std::vector<const frontend::ContractDef*> out;
    for (const auto& c : unit_.contracts) {
      if (c.kind != frontend::ContractKind::interface) out.push_back(&c);
    }
    return out;
  }

  static bool within_body(const frontend::FunctionDef& f, const frontend::SourceSpan& span) {
    return std::any_of(f.body.begin(), f.body.end(), [&](const Statement& s) { return s.span.contains(span); });
  }

  const usage::Scope& scope_for(const frontend::FunctionDef* f, const frontend::ContractDef* c) {
    auto& slot = scopes_[f];
    if (!slot) slot = std::make_unique<usage::Scope>(unit_, names_, c, f);
    return *slot;
  }

  const std::vector<Guard>& guards_for(const frontend::FunctionDef& f) {
    auto it = guards_.find(&f);
    if (it == guards_.end()) it = guards_.emplace(&f, guards_of(f.body)).first;
    return it->second;
  }

  static CandidateSite make_site(MisuseCategory kind, const Expression& subject, const Expression* key,
                                 const frontend::FunctionDef* f, const frontend::ContractDef* c) {
    CandidateSite s;
    s.kind = kind;
    s.span = subject.span;
    s.subject = &subject;
    s.key = key;
    s.function = f;
    s.contract = c;
    s.contract_name = c != nullptr ? c->name : std::string();
    s.function_name = f->name.empty() ? std::string(frontend::to_string(f->kind)) : f->name;
    s.evidence = evidence_of(frontend::render(subject));
    return s;
  }

  void classify(const Expression& e, const frontend::FunctionDef* f, const frontend::ContractDef* c,
                std::vector<CandidateSite>& out) {
    if ((e.is_binary("/") || e.is_binary("/=")) && e.children.size() == 2) {
      if (!frontend::is_constant_expression(e.children[1])) {
        out.push_back(make_site(MisuseCategory::DZ, e, &e.children[1], f, c));
      }
      return;
    }
    if (e.kind != ExprKind::call) return;
    const auto* callee = e.callee();
    if (callee == nullptr) return;
    const auto args = e.arguments();

    if (callee->kind == ExprKind::new_expr) {
      const auto& type = callee->text;
      if (type.ends_with("]")) {
        if (args.size() == 1 && !frontend::is_constant_expression(args.front())) {
          out.push_back(make_site(MisuseCategory::AA, e, &args.front(), f, c));
        }
      } else if (type != "bytes" && type != "string") {
        out.push_back(make_site(MisuseCategory::ECon, e, nullptr, f, c));
      }
      return;
    }
    if (e.is_member_call("pop") && args.empty() && !callee->children.empty()) {
      out.push_back(make_site(MisuseCategory::PA, e, &callee->children.front(), f, c));
      return;
    }
    const auto& scope = scope_for(f, c);
    if (scope.is_enum_conversion(e)) {
      if (!frontend::is_constant_expression(args.front())) {
        out.push_back(make_site(MisuseCategory::ETC, e, &args.front(), f, c));
      }
      return;
    }
    if (scope.is_external_call(e)) out.push_back(make_site(MisuseCategory::ECall, e, nullptr, f, c));
  }

  static void add_faa(const frontend::FunctionDef& f, const frontend::ContractDef* c, std::vector<CandidateSite>& out) {
    if (!f.has_body || f.kind == frontend::FunctionKind::modifier || f.visibility == "private") return;
    for (const auto& p : f.params) {
      if (p.name.empty() || !is_address_type(p.type_name)) continue;
      CandidateSite s;
      s.kind = MisuseCategory::FAA;
      s.span = p.span;
      s.param = &p;
      s.function = &f;
      s.contract = c;
      s.contract_name = c != nullptr ? c->name : std::string();
      s.function_name = f.name.empty() ? std::string(frontend::to_string(f.kind)) : f.name;
      s.evidence = evidence_of(p.type_name + " " + p.name);
      out.push_back(std::move(s));
    }
  }

  // A modifier attached to the function that checks the parameter at the matching argument position.
  std::optional<GuardVerdict> modifier_verdict(const CandidateSite& site) {
    std::optional<GuardVerdict> best;
    for (const auto& inv : site.function->modifiers) {
      const auto* mod = names_.modifier(inv.name);
      if (mod == nullptr) continue;
      for (std::size_t i = 0; i < inv.arguments.size() && i < mod->params.size(); ++i) {
        const auto& arg = inv.arguments[i];
        if (arg.kind != ExprKind::identifier || arg.text != site.param->name || mod->params[i].name.empty()) continue;
        for (const auto& g : guards_for(*mod)) {
          if (g.feature == EhFeature::try_catch || !compares_to_zero(*g.condition, mod->params[i].name)) continue;
          if (!g.is_if && is_legal(MisuseCategory::FAA, g.feature)) return GuardVerdict{GuardKind::eh_guarded, g.feature};
          best = GuardVerdict{GuardKind::if_guarded, std::nullopt};
        }
      }
    }
    return best;
  }

  const frontend::SourceUnit& unit_;
  usage::UnitNames names_;
  std::map<const frontend::FunctionDef*, std::unique_ptr<usage::Scope>> scopes_;
  std::map<const frontend::FunctionDef*, std::vector<Guard>> guards_;
};

}  // namespace

std::string_view to_string(MisuseCategory c) {
  switch (c) {
    case MisuseCategory::ECall: return "ECall";
    case MisuseCategory::FAA: return "FAA";
    case MisuseCategory::ECon: return "ECon";
    case MisuseCategory::AA: return "AA";
    case MisuseCategory::PA: return "PA";
    case MisuseCategory::DZ: return "DZ";
    case MisuseCategory::ETC: return "ETC";
  }
  return "ECall";
}

std::optional<MisuseCategory> misuse_category_from_string(std::string_view s) {
  for (auto c : kAllMisuseCategories) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(GuardKind k) {
  switch (k) {
    case GuardKind::eh_guarded: return "eh_guarded";
    case GuardKind::if_guarded: return "if_guarded";
    case GuardKind::unguarded: return "unguarded";
  }
  return "unguarded";
}

std::span<const EhFeature> legal_guards(MisuseCategory c) {
  switch (c) {
    case MisuseCategory::ECall: return kECallGuards;
    case MisuseCategory::FAA: return kRequireGuard;
    case MisuseCategory::ECon: return kTryGuard;
    default: return kAssertGuard;
  }
}

EhFeature required_feature(MisuseCategory c) { return legal_guards(c).front(); }

bool version_gated(MisuseCategory c) { return c == MisuseCategory::DZ || c == MisuseCategory::PA; }

std::vector<CandidateSite> candidate_sites(const frontend::SourceUnit& unit) { return Analyzer(unit).sites(); }

GuardVerdict is_guarded(const CandidateSite& site, const frontend::SourceUnit& unit) {
  return Analyzer(unit).verdict(site);
}

bool compiler_checks_by_default(const std::optional<version::VersionRange>& range,
                                std::span<const version::SolcVersion> releases) {
  if (!range) return false;
  const auto min = version::min_satisfying(*range, releases);
  return min && *min >= kDefaultChecksSince;
}

std::vector<MisuseRecord> detect_misuses(const frontend::SourceUnit& unit,
                                         const std::optional<version::VersionRange>& range,
                                         std::span<const version::SolcVersion> releases) {
  Analyzer analyzer(unit);
  const bool gated = compiler_checks_by_default(range, releases);
  std::vector<MisuseRecord> out;
  for (const auto& site : analyzer.sites()) {
    if (analyzer.verdict(site).kind != GuardKind::unguarded) continue;
    MisuseRecord r;
    r.category = site.kind;
    r.span = site.span;
    r.required_feature = required_feature(site.kind);
    r.evidence = site.evidence;
    r.suppressed_by_version = gated && version_gated(site.kind);
    r.contract_name = site.contract_name;
    r.function_name = site.function_name;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<MisuseRecord> detect_misuses(const frontend::SourceUnit& unit) {
  return detect_misuses(unit, frontend::effective_range(unit), version::release_versions());
}

namespace {

void finish(CategoryTally& t) {
  t.guarded = t.total_cases - std::min(t.missing, t.total_cases);
  t.missing_pct = t.total_cases == 0 ? 0.0 : static_cast<double>(t.missing) / static_cast<double>(t.total_cases);
}

}  // namespace

Tally tally(std::span<const MisuseRecord> misuses, std::span<const CandidateSite> sites) {
  Tally t{};
  for (const auto& s : sites) ++at(t, s.kind).total_cases;
  for (const auto& m : misuses) {
    ++(m.suppressed_by_version ? at(t, m.category).suppressed : at(t, m.category).missing);
  }
  for (auto& c : t) finish(c);
  return t;
}

Tally merge(const Tally& a, const Tally& b) {
  Tally t{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i].total_cases = a[i].total_cases + b[i].total_cases;
    t[i].missing = a[i].missing + b[i].missing;
    t[i].suppressed = a[i].suppressed + b[i].suppressed;
    finish(t[i]);
  }
  return t;
}

}  // namespace solbench::misuse
