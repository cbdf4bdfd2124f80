#include "solbench/frontend/walk.hpp"

#include <algorithm>

namespace solbench::frontend {

namespace {

struct Walker {
  const std::function<bool(const NodeRef&)>& pred;
  std::vector<WalkMatch>& out;
  const FunctionDef* function = nullptr;
  const ContractDef* contract = nullptr;

  void expr(const Expression& e) {
    if (pred(NodeRef{&e})) out.push_back({NodeRef{&e}, function, contract});
    for (const auto& c : e.children) expr(c);
  }

  void stmt(const Statement& s) {
    if (pred(NodeRef{&s})) out.push_back({NodeRef{&s}, function, contract});
    // `for` keeps its init statement in body[0], ahead of the condition; visit it first.
    if (s.kind == StmtKind::loop && s.label == "for" && s.body.size() == 2) {
      stmt(s.body[0]);
      for (const auto& e : s.exprs) expr(e);
      stmt(s.body[1]);
      return;
    }
    if (s.kind == StmtKind::loop && s.label == "do") {
      for (const auto& b : s.body) stmt(b);
      for (const auto& e : s.exprs) expr(e);
      return;
    }
    for (const auto& e : s.exprs) expr(e);
    for (const auto& b : s.body) stmt(b);
    for (const auto& c : s.catches) stmt(c);
  }

  void fn(const FunctionDef& f) {
    function = &f;
    for (const auto& m : f.modifiers) {
      for (const auto& a : m.arguments) expr(a);
    }
    for (const auto& s : f.body) stmt(s);
    function = nullptr;
  }
};

}  // namespace

std::vector<WalkMatch> walk(const SourceUnit& unit, const std::function<bool(const NodeRef&)>& pred) {
  std::vector<WalkMatch> out;
  Walker w{pred, out};

  struct Item {
    std::size_t begin;
    const ContractDef* contract;
    const FunctionDef* function;
    const Declaration* decl;
  };
  std::vector<Item> top;
  for (const auto& c : unit.contracts) top.push_back({c.span.begin, &c, nullptr, nullptr});
  for (const auto& f : unit.free_functions) top.push_back({f.span.begin, nullptr, &f, nullptr});
  std::stable_sort(top.begin(), top.end(), [](const Item& a, const Item& b) { return a.begin < b.begin; });

  for (const auto& item : top) {
    if (item.function != nullptr) {
      w.contract = nullptr;
      w.fn(*item.function);
      continue;
    }
    w.contract = item.contract;
    std::vector<Item> members;
    for (const auto& f : item.contract->functions) members.push_back({f.span.begin, nullptr, &f, nullptr});
    for (const auto& d : item.contract->state_var_decls) members.push_back({d.span.begin, nullptr, nullptr, &d});
    std::stable_sort(members.begin(), members.end(), [](const Item& a, const Item& b) { return a.begin < b.begin; });
    for (const auto& m : members) {
      if (m.function != nullptr) {
        w.fn(*m.function);
      } else if (m.decl->initializer) {
        w.expr(*m.decl->initializer);
      }
    }
  }
  return out;
}

std::vector<WalkMatch> walk_expressions(const SourceUnit& unit, const std::function<bool(const Expression&)>& pred) {
  return walk(unit, [&](const NodeRef& n) {
    const auto* const* e = std::get_if<const Expression*>(&n);
    return e != nullptr && pred(**e);
  });
}

void visit(const Expression& e, const std::function<void(const Expression&)>& f) {
  f(e);
  for (const auto& c : e.children) visit(c, f);
}

void visit(const Statement& s, const std::function<void(const Expression&)>& f) {
  for (const auto& e : s.exprs) visit(e, f);
  for (const auto& b : s.body) visit(b, f);
  for (const auto& c : s.catches) visit(c, f);
}

void visit(std::span<const Statement> body, const std::function<void(const Expression&)>& f) {
  for (const auto& s : body) visit(s, f);
}

void visit_statements(std::span<const Statement> body, const std::function<void(const Statement&)>& f) {
  for (const auto& s : body) {
    f(s);
    visit_statements(s.body, f);
    visit_statements(s.catches, f);
  }
}

bool any_of(const Expression& e, const std::function<bool(const Expression&)>& pred) {
  if (pred(e)) return true;
  return std::any_of(e.children.begin(), e.children.end(), [&](const Expression& c) { return any_of(c, pred); });
}

}  // namespace solbench::frontend
