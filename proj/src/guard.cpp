#include "cdl/guard.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

namespace cdl {

struct Guard::Node {
  Kind kind = Kind::constant;
  bool value = true;
  LabeledAction atom{};
  std::shared_ptr<const Node> lhs, rhs;
  std::uint64_t lhs_mask = 0, rhs_mask = 0;
};

namespace {

const std::shared_ptr<const Guard::Node>& true_node() {
  static const auto n = [] {
    auto p = std::make_shared<Guard::Node>();
    p->kind = Guard::Kind::constant;
    p->value = true;
    return std::shared_ptr<const Guard::Node>(p);
  }();
  return n;
}

const std::shared_ptr<const Guard::Node>& false_node() {
  static const auto n = [] {
    auto p = std::make_shared<Guard::Node>();
    p->kind = Guard::Kind::constant;
    p->value = false;
    return std::shared_ptr<const Guard::Node>(p);
  }();
  return n;
}

bool eval(const Guard::Node& n, LabeledEvent e) {
  switch (n.kind) {
    case Guard::Kind::constant: return n.value;
    case Guard::Kind::atom: return e.contains(n.atom);
    case Guard::Kind::negation: return !eval(*n.lhs, e);
    case Guard::Kind::conjunction: return eval(*n.lhs, e) && eval(*n.rhs, e);
    case Guard::Kind::disjunction: return eval(*n.lhs, e) || eval(*n.rhs, e);
    case Guard::Kind::implication: return !eval(*n.lhs, e) || eval(*n.rhs, e);
  }
  return false;
}

}  // namespace

Guard::Guard() : node_(true_node()) {}
Guard::Guard(std::shared_ptr<const Node> n) : node_(std::move(n)) {
  switch (node_->kind) {
    case Kind::constant: mask_ = 0; break;
    case Kind::atom: mask_ = std::uint64_t{1} << node_->atom.bit(); break;
    default: mask_ = node_->lhs_mask | node_->rhs_mask; break;
  }
}

Guard Guard::truth() { return Guard(true_node()); }
Guard Guard::falsity() { return Guard(false_node()); }

Guard Guard::atom(LabeledAction a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->atom = a;
  return Guard(std::move(n));
}

Guard Guard::minterm(LabeledEvent e, std::uint64_t mask) {
  Guard out = truth();
  for (unsigned bit = 0; bit < 64; ++bit) {
    if (!((mask >> bit) & 1u)) continue;
    LabeledAction a{bit / 2, party_from_index(static_cast<int>(bit % 2))};
    Guard lit = atom(a);
    out = conj(out, e.contains(a) ? lit : negate(lit));
  }
  return out;
}

Guard::Kind Guard::kind() const noexcept { return node_->kind; }
bool Guard::constant_value() const { return node_->value; }
LabeledAction Guard::atom_value() const { return node_->atom; }

Guard Guard::lhs() const { return Guard(node_->lhs); }
Guard Guard::rhs() const { return Guard(node_->rhs); }

bool Guard::is_true() const noexcept { return node_->kind == Kind::constant && node_->value; }
bool Guard::is_false() const noexcept { return node_->kind == Kind::constant && !node_->value; }

bool Guard::holds(LabeledEvent e) const { return eval(*node_, e); }

bool structurally_equal(const Guard& a, const Guard& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Guard::Kind::constant: return x.value == y.value;
    case Guard::Kind::atom: return x.atom == y.atom;
    case Guard::Kind::negation: return structurally_equal(Guard(x.lhs), Guard(y.lhs));
    default:
      return structurally_equal(Guard(x.lhs), Guard(y.lhs)) &&
             structurally_equal(Guard(x.rhs), Guard(y.rhs));
  }
}

Guard negate(const Guard& g) {
  if (g.is_true()) return Guard::falsity();
  if (g.is_false()) return Guard::truth();
  auto n = std::make_shared<Guard::Node>();
  n->kind = Guard::Kind::negation;
  n->lhs = g.node_;
  n->lhs_mask = g.mask_;
  return Guard(std::move(n));
}

Guard conj(const Guard& a, const Guard& b) {
  if (a.is_false() || b.is_false()) return Guard::falsity();
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  auto n = std::make_shared<Guard::Node>();
  n->kind = Guard::Kind::conjunction;
  n->lhs = a.node_;
  n->rhs = b.node_;
  n->lhs_mask = a.mask_;
  n->rhs_mask = b.mask_;
  return Guard(std::move(n));
}

Guard disj(const Guard& a, const Guard& b) {
  if (a.is_true() || b.is_true()) return Guard::truth();
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  auto n = std::make_shared<Guard::Node>();
  n->kind = Guard::Kind::disjunction;
  n->lhs = a.node_;
  n->rhs = b.node_;
  n->lhs_mask = a.mask_;
  n->rhs_mask = b.mask_;
  return Guard(std::move(n));
}

Guard implies(const Guard& a, const Guard& b) {
  if (a.is_false() || b.is_true()) return Guard::truth();
  if (a.is_true()) return b;
  if (b.is_false()) return negate(a);
  auto n = std::make_shared<Guard::Node>();
  n->kind = Guard::Kind::implication;
  n->lhs = a.node_;
  n->rhs = b.node_;
  n->lhs_mask = a.mask_;
  n->rhs_mask = b.mask_;
  return Guard(std::move(n));
}

void for_each_minterm(std::uint64_t mask, const std::function<void(LabeledEvent)>& f) {
  // Standard subset enumeration: sub = (sub - mask) & mask.
  std::uint64_t sub = 0;
  while (true) {
    f(LabeledEvent(sub));
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

namespace {

template <class Pred>
bool any_minterm(std::uint64_t mask, Pred&& pred) {
  std::uint64_t sub = 0;
  while (true) {
    if (pred(LabeledEvent(sub))) return true;
    if (sub == mask) return false;
    sub = (sub - mask) & mask;
  }
}

}  // namespace

bool satisfiable(const Guard& g) {
  if (g.kind() == Guard::Kind::constant) return g.constant_value();
  return any_minterm(g.atom_mask(), [&](LabeledEvent e) { return g.holds(e); });
}

bool valid(const Guard& g) { return !satisfiable(negate(g)); }

bool equivalent(const Guard& a, const Guard& b) {
  const auto mask = a.atom_mask() | b.atom_mask();
  return !any_minterm(mask, [&](LabeledEvent e) { return a.holds(e) != b.holds(e); });
}

bool intersects(const Guard& a, const Guard& b) {
  if (a.is_false() || b.is_false()) return false;
  const auto mask = a.atom_mask() | b.atom_mask();
  return any_minterm(mask, [&](LabeledEvent e) { return a.holds(e) && b.holds(e); });
}

Guard simplify_cover(std::vector<std::vector<Guard>> terms, std::uint64_t mask,
                     const std::function<bool(LabeledEvent)>& accepted) {
  auto term_inside = [&](const std::vector<Guard>& lits, std::size_t skip) {
    return !any_minterm(mask, [&](LabeledEvent e) {
      for (std::size_t i = 0; i < lits.size(); ++i)
        if (i != skip && !lits[i].holds(e)) return false;
      return !accepted(e);
    });
  };
  Guard out = Guard::falsity();
  for (auto& lits : terms) {
    const bool covered = !any_minterm(mask, [&](LabeledEvent e) {
      for (const auto& l : lits)
        if (!l.holds(e)) return false;
      return !out.holds(e);
    });
    if (covered) continue;
    for (std::size_t i = 0; i < lits.size();) {
      if (term_inside(lits, i))
        lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(i));
      else
        ++i;
    }
    Guard term = Guard::truth();
    for (const auto& l : lits) term = conj(term, l);
    out = disj(out, term);
  }
  return out;
}

namespace {

int precedence(Guard::Kind k) {
  switch (k) {
    case Guard::Kind::implication: return 1;
    case Guard::Kind::disjunction: return 2;
    case Guard::Kind::conjunction: return 3;
    case Guard::Kind::negation: return 4;
    default: return 5;
  }
}

std::string render(const Guard& g, const Alphabet& sigma);

std::string render_child(const Guard& child, int parent_prec, bool strictly, const Alphabet& sigma) {
  const int p = precedence(child.kind());
  std::string s = render(child, sigma);
  if (p < parent_prec || (strictly && p == parent_prec)) return "(" + s + ")";
  return s;
}

std::string render(const Guard& g, const Alphabet& sigma) {
  switch (g.kind()) {
    case Guard::Kind::constant: return g.constant_value() ? "true" : "false";
    case Guard::Kind::atom: return sigma.to_string(g.atom_value());
    case Guard::Kind::negation: return "!" + render_child(g.lhs(), 4, false, sigma);
    case Guard::Kind::conjunction:
      return render_child(g.lhs(), 3, false, sigma) + " & " + render_child(g.rhs(), 3, true, sigma);
    case Guard::Kind::disjunction:
      return render_child(g.lhs(), 2, false, sigma) + " | " + render_child(g.rhs(), 2, true, sigma);
    case Guard::Kind::implication:
      return render_child(g.lhs(), 1, true, sigma) + " -> " + render_child(g.rhs(), 1, false, sigma);
  }
  return {};
}

}  // namespace

std::string to_string(const Guard& g, const Alphabet& sigma) { return render(g, sigma); }

}  // namespace cdl
