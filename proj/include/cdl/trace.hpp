#pragma once

#include <cstddef>
#include <vector>

#include "cdl/alphabet.hpp"

namespace cdl {

using Trace = std::vector<Event>;
using LabeledTrace = std::vector<LabeledEvent>;

/// A pair of equal-length party traces. `origin` records where the first step
/// sat in the interaction it was sliced from.
class Interaction {
 public:
  Interaction() = default;
  Interaction(Trace party0, Trace party1, std::size_t origin = 0);

  std::size_t size() const noexcept { return w0_.size(); }
  bool empty() const noexcept { return w0_.empty(); }
  std::size_t origin() const noexcept { return origin_; }

  const Trace& trace(Party p) const noexcept { return p == Party::zero ? w0_ : w1_; }
  Event at(Party p, std::size_t k) const { return trace(p).at(k); }
  LabeledEvent labeled(std::size_t k) const;

  void push_back(Event e0, Event e1);

  friend bool operator==(const Interaction& a, const Interaction& b) { return a.w0_ == b.w0_ && a.w1_ == b.w1_; }

 private:
  Trace w0_, w1_;
  std::size_t origin_ = 0;
};

/// {a_0 | a ∈ e0} ∪ {a_1 | a ∈ e1}
LabeledEvent labeled_union(Event e0, Event e1);

/// e0 ∩ e1: the actions that succeed.
Event stepwise_meet(Event e0, Event e1);

/// Inclusive slice [i..j]; j < i gives the empty interaction. Throws
/// std::out_of_range if i ≤ j and j is past the end.
Interaction slice(const Interaction& x, std::size_t i, std::ptrdiff_t j);

LabeledTrace to_labeled(const Interaction& x);

}  // namespace cdl
