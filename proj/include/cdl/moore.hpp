#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdl/ast.hpp"
#include "cdl/autom.hpp"

namespace cdl {

/// Agent model: each state outputs a set of actions (tagged with the
/// machine's party in products) and moves on guards over the other party's
/// labeled actions.
struct MooreMachine {
  using State = std::uint32_t;
  struct Transition {
    State source;
    Guard guard;
    State target;
  };

  Party party = Party::zero;
  std::vector<std::string> names;
  std::vector<Event> outputs;
  State initial = 0;
  std::vector<Transition> transitions;
  bool deterministic = true;

  std::size_t state_count() const noexcept { return names.size(); }
  State add_state(std::string name, Event output);
  void add_transition(State from, Guard g, State to) { transitions.push_back({from, std::move(g), to}); }

  /// Output of s as party-labeled atoms.
  LabeledEvent labeled_output(State s) const;
  /// Successors of s when the joint step is e (only the other party's atoms are read).
  std::vector<State> next(State s, LabeledEvent e) const;
};

class InvalidMachine : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Guards only mention the other party's atoms of sigma, outputs stay inside
/// sigma, guards out of each state are total, and pairwise disjoint when the
/// machine is declared deterministic. Throws InvalidMachine.
void validate(const MooreMachine& m, const Alphabet& sigma);

/// M0 ⊗ M1 over the reachable pairs. Each edge is labeled with the exact
/// joint output (a minterm over sigma); no state is rejecting.
SymbolicAutomaton moore_product(const MooreMachine& m0, const MooreMachine& m1, const Alphabet& sigma);

struct JointState {
  MooreMachine::State m0 = 0, m1 = 0;
  SymbolicAutomaton::State contract = 0;
  friend bool operator==(const JointState&, const JointState&) = default;
};

/// A shortest path into a rejecting state of (M0 ⊗ M1) ∥ A.
struct Counterexample {
  LabeledTrace trace;
  std::vector<JointState> states;  // states[k] before event k; one more than trace
  std::size_t violation_index = 0;  // = trace.size() - 1
  PartySet blamed;
};

/// nullopt when no rejecting state of aut(c) is reachable.
std::optional<Counterexample> model_check(const MooreMachine& m0, const MooreMachine& m1, const Contract& c);

/// nullopt when no state of blaut(c) blaming p is reachable.
std::optional<Counterexample> blame_check(const MooreMachine& m0, const MooreMachine& m1, const Contract& c,
                                          Party p);

/// Breadth-first search over (M0 ⊗ M1) ∥ a for a state satisfying `target`.
/// Machine successors are explored in state order, so results are reproducible.
/// `a` must be deterministic (finalised).
std::optional<Counterexample> find_reachable(const MooreMachine& m0, const MooreMachine& m1,
                                             const SymbolicAutomaton& a,
                                             const std::function<bool(SymbolicAutomaton::State)>& target);

}  // namespace cdl
