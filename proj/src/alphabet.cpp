#include "cdl/alphabet.hpp"

#include <algorithm>
#include <cctype>

namespace cdl {

Event LabeledEvent::project(Party p) const noexcept {
  std::uint64_t out = 0;
  const unsigned offset = static_cast<unsigned>(p);
  for (unsigned k = 0; k < 32; ++k)
    if ((bits_ >> (2 * k + offset)) & 1u) out |= std::uint64_t{1} << k;
  return Event(out);
}

bool valid_action_name(std::string_view name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  if (!std::all_of(name.begin(), name.end(),
                   [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
    return false;
  static constexpr std::string_view reserved[] = {"TOP", "BOT", "rec", "true", "false"};
  return std::find(std::begin(reserved), std::end(reserved), name) == std::end(reserved);
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > max_size)
    throw std::invalid_argument("alphabet has more than 32 actions");
  for (ActionId i = 0; i < names_.size(); ++i) {
    if (!valid_action_name(names_[i]))
      throw std::invalid_argument("invalid action name '" + names_[i] + "'");
    if (!index_.emplace(names_[i], i).second)
      throw std::invalid_argument("duplicate action '" + names_[i] + "'");
  }
}

std::optional<ActionId> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ActionId Alphabet::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw std::out_of_range("undeclared action '" + std::string(name) + "'");
}

std::uint64_t Alphabet::labeled_mask() const noexcept {
  return size() == 32 ? ~std::uint64_t{0} : (std::uint64_t{1} << (2 * size())) - 1;
}

std::uint64_t Alphabet::action_mask() const noexcept {
  return (std::uint64_t{1} << size()) - 1;
}

std::string Alphabet::to_string(Event e) const {
  std::string out = "{";
  bool first = true;
  for (ActionId a = 0; a < size(); ++a) {
    if (!e.contains(a)) continue;
    if (!first) out += ", ";
    out += names_[a];
    first = false;
  }
  return out + "}";
}

std::string Alphabet::to_string(LabeledAction a) const {
  return name(a.action) + "_" + std::to_string(index_of(a.party));
}

std::string Alphabet::to_string(LabeledEvent e) const {
  std::string out = "{";
  bool first = true;
  for (ActionId a = 0; a < size(); ++a) {
    for (Party p : {Party::zero, Party::one}) {
      LabeledAction la{a, p};
      if (!e.contains(la)) continue;
      if (!first) out += ", ";
      out += to_string(la);
      first = false;
    }
  }
  return out + "}";
}

}  // namespace cdl

namespace cdl {

std::string to_string(PartySet s) {
  if (s == PartySet::both()) return "{0,1}";
  if (s.contains(Party::zero)) return "{0}";
  if (s.contains(Party::one)) return "{1}";
  return "{}";
}

}  // namespace cdl
