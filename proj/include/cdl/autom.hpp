#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdl/alphabet.hpp"
#include "cdl/guard.hpp"
#include "cdl/trace.hpp"

namespace cdl {

enum class StateRole : std::uint8_t { plain, good, bad };

struct StateInfo {
  std::string name;
  StateRole role = StateRole::plain;
  PartySet blame;  // bad states only: parties blamed on entering it
};

/// Automaton over labeled events with boolean-formula edge labels. Bad
/// states are the rejecting ones; blame automata tag them with parties.
class SymbolicAutomaton {
 public:
  using State = std::uint32_t;
  struct Edge {
    State source;
    std::optional<Guard> guard;  // nullopt: ε
    State target;
    bool epsilon() const noexcept { return !guard.has_value(); }
  };

  State add_state(std::string name, StateRole role = StateRole::plain, PartySet blame = {});
  void add_edge(State from, Guard g, State to);
  void add_epsilon(State from, State to);

  State initial() const noexcept { return initial_; }
  void set_initial(State s) { initial_ = s; }

  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const StateInfo& info(State s) const { return states_.at(s); }
  StateInfo& info(State s) { return states_.at(s); }
  bool rejecting(State s) const { return states_.at(s).role == StateRole::bad; }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Outgoing edges of s (indices into edges()).
  const std::vector<std::size_t>& out(State s) const;
  bool has_epsilon() const;

  /// Successors of s on e (ε edges ignored).
  std::vector<State> successors(State s, LabeledEvent e) const;

  /// Union of the atom masks of every guard.
  std::uint64_t atom_mask() const;

 private:
  std::vector<StateInfo> states_;
  std::vector<Edge> edges_;
  mutable std::vector<std::vector<std::size_t>> out_;
  mutable bool out_valid_ = false;
  State initial_ = 0;
};

/// A ∥ B: pair states, conjoined guards (unsatisfiable ones dropped),
/// rejecting if either component is, blame tags united. Reachable part only.
/// Both inputs must be ε-free.
SymbolicAutomaton sync_product(const SymbolicAutomaton& a, const SymbolicAutomaton& b);

/// A ∥ʳ B: as sync_product, plus one-sided moves on events for which the
/// other component has no enabled edge.
SymbolicAutomaton relaxed_product(const SymbolicAutomaton& a, const SymbolicAutomaton& b);

/// Drops states unreachable from the initial one and renumbers (BFS order).
SymbolicAutomaton reachable_part(const SymbolicAutomaton& a);

/// ε-closure based removal; keeps the state set.
SymbolicAutomaton remove_epsilon(const SymbolicAutomaton& a);

/// Strips edges out of good and bad states and gives them `true` self-loops,
/// removes ε, determinises by subset construction (a subset is bad if it
/// holds a bad state, tags united), redirects states whose every edge is bad
/// to the untagged bad state, and keeps the reachable part. Edge guards of
/// already deterministic states are kept as written.
SymbolicAutomaton finalize(const SymbolicAutomaton& a);

/// Are the guards out of every state pairwise disjoint and jointly valid?
bool is_deterministic_and_total(const SymbolicAutomaton& a);

struct Run {
  std::vector<SymbolicAutomaton::State> path;  // path[0] = initial, path[k+1] after event k
  std::optional<std::size_t> first_rejecting;  // index of the event entering a bad state
};

/// Deterministic run (first enabled edge). Stops early if no edge is enabled.
Run run(const SymbolicAutomaton& a, std::span<const LabeledEvent> t);

/// Graphviz rendering: rejecting states double-circled, guards in DSL syntax.
std::string to_dot(const SymbolicAutomaton& a, const Alphabet& sigma, const std::string& title = "contract");

}  // namespace cdl
