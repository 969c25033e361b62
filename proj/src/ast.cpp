#include "cdl/ast.hpp"

#include <stdexcept>

namespace cdl {

namespace {

Regex make_regex(RegexKind k, Guard g, Regex l, Regex r) {
  auto n = std::make_shared<RegexNode>();
  n->kind = k;
  n->atom = std::move(g);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

Contract make(ContractKind k) {
  auto n = std::make_shared<ContractNode>();
  n->kind = k;
  return n;
}

Contract make_norm(ContractKind k, Party p, ActionId a) {
  auto n = std::make_shared<ContractNode>();
  n->kind = k;
  n->party = p;
  n->action = a;
  return n;
}

Contract make_binary(ContractKind k, Contract a, Contract b) {
  if (!a || !b) throw std::invalid_argument("null contract operand");
  auto n = std::make_shared<ContractNode>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

}  // namespace

Regex re_atom(Guard g) { return make_regex(RegexKind::atom, std::move(g), nullptr, nullptr); }
Regex re_choice(Regex a, Regex b) { return make_regex(RegexKind::choice, {}, std::move(a), std::move(b)); }
Regex re_seq(Regex a, Regex b) { return make_regex(RegexKind::sequence, {}, std::move(a), std::move(b)); }
Regex re_plus(Regex a) { return make_regex(RegexKind::plus, {}, std::move(a), nullptr); }

bool structurally_equal(const Regex& a, const Regex& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case RegexKind::atom: return structurally_equal(a->atom, b->atom);
    case RegexKind::plus: return structurally_equal(a->lhs, b->lhs);
    default: return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

std::size_t regex_size(const Regex& r) {
  switch (r->kind) {
    case RegexKind::atom: return 1;
    case RegexKind::plus: return 1 + regex_size(r->lhs);
    default: return 1 + regex_size(r->lhs) + regex_size(r->rhs);
  }
}

Contract top() { return make(ContractKind::top); }
Contract bottom() { return make(ContractKind::bottom); }
Contract obligation(Party p, ActionId a) { return make_norm(ContractKind::obligation, p, a); }
Contract prohibition(Party p, ActionId a) { return make_norm(ContractKind::prohibition, p, a); }
Contract permission(Party p, ActionId a) { return make_norm(ContractKind::permission, p, a); }
Contract conj(Contract a, Contract b) { return make_binary(ContractKind::conjunction, std::move(a), std::move(b)); }
Contract seq(Contract a, Contract b) { return make_binary(ContractKind::sequence, std::move(a), std::move(b)); }
Contract rep(Contract a, Contract b) { return make_binary(ContractKind::reparation, std::move(a), std::move(b)); }

Contract trigger(Regex re, Contract body) {
  auto n = std::make_shared<ContractNode>();
  n->kind = ContractKind::trigger;
  n->regex = std::move(re);
  n->lhs = std::move(body);
  return n;
}

Contract guarded(Regex re, Contract body) {
  auto n = std::make_shared<ContractNode>();
  n->kind = ContractKind::guard;
  n->regex = std::move(re);
  n->lhs = std::move(body);
  return n;
}

Contract var(std::string name) {
  auto n = std::make_shared<ContractNode>();
  n->kind = ContractKind::variable;
  n->name = std::move(name);
  return n;
}

Contract rec(std::string name, Contract body) {
  auto n = std::make_shared<ContractNode>();
  n->kind = ContractKind::recursion;
  n->name = std::move(name);
  n->lhs = std::move(body);
  return n;
}

bool structurally_equal(const Contract& a, const Contract& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ContractKind::top:
    case ContractKind::bottom: return true;
    case ContractKind::obligation:
    case ContractKind::prohibition:
    case ContractKind::permission: return a->party == b->party && a->action == b->action;
    case ContractKind::conjunction:
    case ContractKind::sequence:
    case ContractKind::reparation:
      return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    case ContractKind::trigger:
    case ContractKind::guard:
      return structurally_equal(a->regex, b->regex) && structurally_equal(a->lhs, b->lhs);
    case ContractKind::variable: return a->name == b->name;
    case ContractKind::recursion: return a->name == b->name && structurally_equal(a->lhs, b->lhs);
  }
  return false;
}

std::size_t contract_size(const Contract& c) {
  switch (c->kind) {
    case ContractKind::conjunction:
    case ContractKind::sequence:
    case ContractKind::reparation: return 1 + contract_size(c->lhs) + contract_size(c->rhs);
    case ContractKind::trigger:
    case ContractKind::guard: return 1 + regex_size(c->regex) + contract_size(c->lhs);
    case ContractKind::recursion: return 1 + contract_size(c->lhs);
    default: return 1;
  }
}

std::size_t norm_count(const Contract& c) {
  if (c->is_norm()) return 1;
  std::size_t n = 0;
  if (c->lhs) n += norm_count(c->lhs);
  if (c->rhs) n += norm_count(c->rhs);
  return n;
}

bool contains_regex(const Contract& c) {
  if (c->regex) return true;
  return (c->lhs && contains_regex(c->lhs)) || (c->rhs && contains_regex(c->rhs));
}

namespace {

std::uint64_t regex_atoms(const Regex& r) {
  if (r->kind == RegexKind::atom) return r->atom.atom_mask();
  return regex_atoms(r->lhs) | (r->rhs ? regex_atoms(r->rhs) : 0);
}

}  // namespace

std::uint64_t observed_atoms(const Contract& c) {
  std::uint64_t m = 0;
  if (c->is_norm()) m |= std::uint64_t{3} << (2 * c->action);
  if (c->regex) m |= regex_atoms(c->regex);
  if (c->lhs) m |= observed_atoms(c->lhs);
  if (c->rhs) m |= observed_atoms(c->rhs);
  return m;
}

// ---------------------------------------------------------------------------
// Printing. Precedence levels mirror the parser: regex choice < sequence <
// postfix plus; contract sequence < reparation < conjunction < prefix forms.
// ---------------------------------------------------------------------------

namespace {

int regex_prec(RegexKind k) {
  switch (k) {
    case RegexKind::choice: return 1;
    case RegexKind::sequence: return 2;
    case RegexKind::plus: return 3;
    case RegexKind::atom: return 4;
  }
  return 4;
}

std::string atom_text(const Guard& g, const Alphabet& sigma) {
  switch (g.kind()) {
    case Guard::Kind::constant:
    case Guard::Kind::atom: return to_string(g, sigma);
    case Guard::Kind::negation:
      if (g.lhs().kind() == Guard::Kind::atom) return to_string(g, sigma);
      [[fallthrough]];
    default: return "[" + to_string(g, sigma) + "]";
  }
}

std::string print_regex(const Regex& r, const Alphabet& sigma);

std::string regex_child(const Regex& r, int min_prec, const Alphabet& sigma) {
  auto s = print_regex(r, sigma);
  return regex_prec(r->kind) < min_prec ? "(" + s + ")" : s;
}

std::string print_regex(const Regex& r, const Alphabet& sigma) {
  switch (r->kind) {
    case RegexKind::atom: return atom_text(r->atom, sigma);
    case RegexKind::choice: return regex_child(r->lhs, 1, sigma) + " + " + regex_child(r->rhs, 2, sigma);
    case RegexKind::sequence: return regex_child(r->lhs, 2, sigma) + " ; " + regex_child(r->rhs, 3, sigma);
    case RegexKind::plus: return regex_child(r->lhs, 3, sigma) + "+";
  }
  return {};
}

int contract_prec(ContractKind k) {
  switch (k) {
    case ContractKind::sequence: return 1;
    case ContractKind::reparation: return 2;
    case ContractKind::conjunction: return 3;
    case ContractKind::trigger:
    case ContractKind::guard: return 4;
    case ContractKind::recursion: return 0;
    default: return 5;
  }
}

std::string print_contract(const Contract& c, const Alphabet& sigma);

std::string contract_child(const Contract& c, int min_prec, const Alphabet& sigma) {
  auto s = print_contract(c, sigma);
  return contract_prec(c->kind) < min_prec ? "(" + s + ")" : s;
}

std::string norm_text(char op, const Contract& c, const Alphabet& sigma) {
  return std::string(1, op) + "_" + std::to_string(index_of(c->party)) + "(" + sigma.name(c->action) + ")";
}

std::string print_contract(const Contract& c, const Alphabet& sigma) {
  switch (c->kind) {
    case ContractKind::top: return "TOP";
    case ContractKind::bottom: return "BOT";
    case ContractKind::obligation: return norm_text('O', c, sigma);
    case ContractKind::prohibition: return norm_text('F', c, sigma);
    case ContractKind::permission: return norm_text('P', c, sigma);
    case ContractKind::sequence:
      return contract_child(c->lhs, 2, sigma) + " ; " + contract_child(c->rhs, 1, sigma);
    case ContractKind::reparation:
      return contract_child(c->lhs, 2, sigma) + " |> " + contract_child(c->rhs, 3, sigma);
    case ContractKind::conjunction:
      return contract_child(c->lhs, 3, sigma) + " /\\ " + contract_child(c->rhs, 4, sigma);
    case ContractKind::trigger:
      return "<" + print_regex(c->regex, sigma) + "> " + contract_child(c->lhs, 4, sigma);
    case ContractKind::guard: {
      // The guard regex is undelimited; parenthesise it unless it is a single atom.
      auto re = print_regex(c->regex, sigma);
      if (c->regex->kind != RegexKind::atom) re = "(" + re + ")";
      return re + " ~> " + contract_child(c->lhs, 4, sigma);
    }
    case ContractKind::variable: return c->name;
    case ContractKind::recursion: return "rec " + c->name + ". " + print_contract(c->lhs, sigma);
  }
  return {};
}

}  // namespace

std::string to_string(const Regex& r, const Alphabet& sigma) { return print_regex(r, sigma); }

std::string to_string(const Contract& c, const Alphabet& sigma) { return print_contract(c, sigma); }

}  // namespace cdl
