#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cdl/alphabet.hpp"

namespace cdl {

/// Boolean formula over labeled actions. Used for regex atoms, automaton
/// transition labels and Moore-machine input conditions.
///
/// An atom a_p holds on a LabeledEvent E iff a_p ∈ E; connectives are classical.
/// Values are immutable and cheap to copy (shared tree).
class Guard {
 public:
  enum class Kind : std::uint8_t { constant, atom, negation, conjunction, disjunction, implication };

  Guard();  // true

  static Guard truth();
  static Guard falsity();
  static Guard atom(LabeledAction a);
  static Guard atom(ActionId a, Party p) { return atom(LabeledAction{a, p}); }

  /// Characteristic formula of exactly one event over the atoms in `mask`.
  static Guard minterm(LabeledEvent e, std::uint64_t mask);

  Kind kind() const noexcept;
  bool constant_value() const;
  LabeledAction atom_value() const;
  Guard lhs() const;
  Guard rhs() const;

  bool is_true() const noexcept;
  bool is_false() const noexcept;

  bool holds(LabeledEvent e) const;

  /// Bits (see LabeledAction::bit) of every atom mentioned.
  std::uint64_t atom_mask() const noexcept { return mask_; }

  friend bool structurally_equal(const Guard& a, const Guard& b);

  struct Node;  // defined in guard.cpp

 private:
  explicit Guard(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
  std::uint64_t mask_ = 0;

  friend Guard negate(const Guard&);
  friend Guard conj(const Guard&, const Guard&);
  friend Guard disj(const Guard&, const Guard&);
  friend Guard implies(const Guard&, const Guard&);
};

// Smart constructors fold constants but otherwise keep the written structure.
Guard negate(const Guard& g);
Guard conj(const Guard& a, const Guard& b);
Guard disj(const Guard& a, const Guard& b);
Guard implies(const Guard& a, const Guard& b);

/// Calls f on every event whose bits are a subset of mask.
void for_each_minterm(std::uint64_t mask, const std::function<void(LabeledEvent)>& f);

bool satisfiable(const Guard& g);
bool valid(const Guard& g);
bool equivalent(const Guard& a, const Guard& b);
/// Is a ∧ b satisfiable?
bool intersects(const Guard& a, const Guard& b);

/// A compact formula denoting exactly the events in `accepted` restricted to
/// `mask`. `terms` is a disjunction of candidate conjunctions (each a list of
/// literals) that already covers `accepted` exactly; conjuncts are greedily
/// dropped while the denotation stays inside `accepted`.
Guard simplify_cover(std::vector<std::vector<Guard>> terms, std::uint64_t mask,
                     const std::function<bool(LabeledEvent)>& accepted);

/// DSL syntax: a_0, !g, g & h, g | h, g -> h, true, false.
std::string to_string(const Guard& g, const Alphabet& sigma);

}  // namespace cdl
