#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cdl {

/// One of the two contracting parties.
enum class Party : std::uint8_t { zero = 0, one = 1 };

constexpr Party other(Party p) noexcept { return p == Party::zero ? Party::one : Party::zero; }
constexpr int index_of(Party p) noexcept { return static_cast<int>(p); }
constexpr Party party_from_index(int i) { return i == 0 ? Party::zero : Party::one; }

using ActionId = std::uint32_t;

/// An action tagged with the party that attempts it (written `a_0`, `a_1`).
struct LabeledAction {
  ActionId action = 0;
  Party party = Party::zero;

  /// Bit position inside a LabeledEvent: action k of party p lives at 2k+p.
  constexpr unsigned bit() const noexcept { return 2u * action + static_cast<unsigned>(party); }
  friend constexpr bool operator==(LabeledAction, LabeledAction) = default;
};

/// Subset of {0, 1}; used for blamed parties and blame-tagged bad states.
class PartySet {
 public:
  constexpr PartySet() = default;
  constexpr explicit PartySet(std::uint8_t bits) : bits_(bits & 3u) {}
  static constexpr PartySet of(Party p) { return PartySet(static_cast<std::uint8_t>(1u << index_of(p))); }
  static constexpr PartySet both() { return PartySet(3); }

  constexpr bool contains(Party p) const noexcept { return (bits_ >> index_of(p)) & 1u; }
  constexpr void insert(Party p) noexcept { bits_ |= static_cast<std::uint8_t>(1u << index_of(p)); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  friend constexpr PartySet operator|(PartySet a, PartySet b) { return PartySet(a.bits_ | b.bits_); }
  PartySet& operator|=(PartySet o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr bool operator==(PartySet, PartySet) = default;

 private:
  std::uint8_t bits_ = 0;
};

/// "{}", "{0}", "{1}" or "{0,1}".
std::string to_string(PartySet s);

/// Set of (unlabeled) actions attempted by one party in one step.
class Event {
 public:
  constexpr Event() = default;
  constexpr explicit Event(std::uint64_t bits) : bits_(bits) {}
  Event(std::initializer_list<ActionId> actions) {
    for (auto a : actions) insert(a);
  }

  constexpr bool contains(ActionId a) const noexcept { return (bits_ >> a) & 1u; }
  constexpr void insert(ActionId a) noexcept { bits_ |= std::uint64_t{1} << a; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint64_t bits() const noexcept { return bits_; }
  int size() const noexcept { return std::popcount(bits_); }

  friend constexpr bool operator==(Event, Event) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Set of party-labeled actions: one step of a trace over Σ₀ ∪ Σ₁.
class LabeledEvent {
 public:
  constexpr LabeledEvent() = default;
  constexpr explicit LabeledEvent(std::uint64_t bits) : bits_(bits) {}
  LabeledEvent(std::initializer_list<LabeledAction> actions) {
    for (auto a : actions) insert(a);
  }

  constexpr bool contains(LabeledAction a) const noexcept { return (bits_ >> a.bit()) & 1u; }
  constexpr void insert(LabeledAction a) noexcept { bits_ |= std::uint64_t{1} << a.bit(); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::uint64_t bits() const noexcept { return bits_; }

  /// Actions attempted by party p, with the label stripped.
  Event project(Party p) const noexcept;

  friend constexpr bool operator==(LabeledEvent, LabeledEvent) = default;
  friend constexpr auto operator<=>(LabeledEvent a, LabeledEvent b) { return a.bits_ <=> b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// The finite action alphabet Σ. At most 32 actions so that a labeled event fits in 64 bits.
class Alphabet {
 public:
  static constexpr std::size_t max_size = 32;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(ActionId a) const { return names_.at(a); }

  std::optional<ActionId> find(std::string_view name) const;
  ActionId at(std::string_view name) const;

  /// Mask of every labeled atom a_p for a ∈ Σ, p ∈ {0,1}.
  std::uint64_t labeled_mask() const noexcept;
  /// Mask of every action of Σ (for unlabeled events).
  std::uint64_t action_mask() const noexcept;

  std::string to_string(Event e) const;
  std::string to_string(LabeledEvent e) const;
  std::string to_string(LabeledAction a) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ActionId> index_;
};

/// Is `name` usable as an action identifier (nonempty, identifier characters, not reserved)?
bool valid_action_name(std::string_view name);

}  // namespace cdl
