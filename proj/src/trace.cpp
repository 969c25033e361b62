#include "cdl/trace.hpp"

#include <stdexcept>

namespace cdl {

Interaction::Interaction(Trace party0, Trace party1, std::size_t origin)
    : w0_(std::move(party0)), w1_(std::move(party1)), origin_(origin) {
  if (w0_.size() != w1_.size()) throw std::invalid_argument("party traces differ in length");
}

LabeledEvent Interaction::labeled(std::size_t k) const { return labeled_union(w0_.at(k), w1_.at(k)); }

void Interaction::push_back(Event e0, Event e1) {
  w0_.push_back(e0);
  w1_.push_back(e1);
}

LabeledEvent labeled_union(Event e0, Event e1) {
  std::uint64_t out = 0;
  for (unsigned k = 0; k < 32; ++k) {
    if (e0.contains(k)) out |= std::uint64_t{1} << (2 * k);
    if (e1.contains(k)) out |= std::uint64_t{1} << (2 * k + 1);
  }
  return LabeledEvent(out);
}

Event stepwise_meet(Event e0, Event e1) { return Event(e0.bits() & e1.bits()); }

Interaction slice(const Interaction& x, std::size_t i, std::ptrdiff_t j) {
  if (j < 0 || static_cast<std::size_t>(j) < i) return Interaction({}, {}, x.origin() + i);
  const auto end = static_cast<std::size_t>(j);
  if (end >= x.size()) throw std::out_of_range("slice end past the interaction");
  const auto& a = x.trace(Party::zero);
  const auto& b = x.trace(Party::one);
  return Interaction(Trace(a.begin() + static_cast<std::ptrdiff_t>(i), a.begin() + j + 1),
                     Trace(b.begin() + static_cast<std::ptrdiff_t>(i), b.begin() + j + 1), x.origin() + i);
}

LabeledTrace to_labeled(const Interaction& x) {
  LabeledTrace out;
  out.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out.push_back(x.labeled(k));
  return out;
}

}  // namespace cdl
