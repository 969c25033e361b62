#pragma once

#include <optional>
#include <stdexcept>

#include "cdl/semantics.hpp"

namespace cdl {

struct BlameVerdict {
  std::size_t position = 0;
  PartySet blamed;
  friend bool operator==(const BlameVerdict&, const BlameVerdict&) = default;
};

/// Parties blamed for a norm violated in one step.
PartySet norm_blame(const ContractNode& norm, Event e0, Event e1);

/// Raised by conflict() when the conjunction is already decided on the prefix.
class ConflictPreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Computes {p : w_i^j ⊨_v^p C} for every subterm, start i and end j.
///
/// Sequence has no dedicated blame rule; we use: blamed for C;C' iff blamed for
/// C, or C is satisfied at some k < j and blamed for C' on w_{k+1}^j.
/// A conjunction blames only at its own violation index, so blame always
/// implies violation.
class Blamer {
 public:
  explicit Blamer(Evaluator& ev) : ev_(ev) {}

  PartySet blamed(const ContractNode* c, std::size_t i, std::size_t j);
  PartySet blamed(std::size_t i, std::size_t j) { return blamed(ev_.root().get(), i, j); }

  /// conflict(C, C', w_i^j) where conj = C ∧ C'. end == i-1 denotes the empty
  /// prefix. Returns false when the conjunction is already decided by end.
  bool conflict_after(const ContractNode* conj, std::size_t i, std::ptrdiff_t end);

 private:
  struct Key {
    const void* node;
    std::size_t i, j;
    bool operator<(const Key& o) const {
      if (node != o.node) return node < o.node;
      if (i != o.i) return i < o.i;
      return j < o.j;
    }
  };

  PartySet compute(const ContractNode* c, std::size_t i, std::size_t j);

  Evaluator& ev_;
  std::map<Key, PartySet> memo_;
  std::map<Key, bool> conflicts_;
};

/// Blame at the unique violation index, or nullopt when c is not violated.
std::optional<BlameVerdict> blame(const Contract& c, const Interaction& x, std::size_t i = 0);

/// Are c and c2 in conflict after the whole of `prefix` (read from position 0)?
/// Every one-step extension over the atoms the contracts can observe is
/// adjudicated by the evaluator; other actions cannot change any verdict.
/// Throws ConflictPreconditionError if c ∧ c2 is already satisfied or violated.
bool conflict(const Contract& c, const Contract& c2, const Interaction& prefix);

}  // namespace cdl
